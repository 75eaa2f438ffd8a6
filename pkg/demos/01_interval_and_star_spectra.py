"""
Spectra of small quantum graphs
===============================

Eigenvalues of a closed graph are the positive zeros of det(1 - U(k)).
We start from the interval, where everything is known in closed form, and
move on to an equilateral star whose spectrum has degenerate levels.
"""

import numpy as np

import qgraph as qg

# A single edge of length 1 with Dirichlet ends: roots at n pi.
line = qg.interval(1.0)
pts = qg.find_spectrum(line, qg.DIRICHLET, qg.ScanConfig(0.5, 10, 400))
for p in pts:
    print(f"interval  k = {p.k:.12f}   k/pi = {p.k / np.pi:.12f}   multiplicity {p.multiplicity}")

###############################################################################
# Three equal edges joined at a Kirchhoff vertex, Dirichlet at the leaves.
# Levels at (n + 1/2) pi are simple; at n pi any function that vanishes at
# the centre works, which leaves a two dimensional eigenspace.

star = qg.star_graph(4, 1.0)
bcs = {1: qg.KIRCHHOFF, 2: qg.DIRICHLET, 3: qg.DIRICHLET, 4: qg.DIRICHLET}
pts = qg.find_spectrum(star, bcs, qg.ScanConfig(0.5, 10, 400))
print()
for p in pts:
    print(f"star      k/pi = {p.k / np.pi:.10f}   multiplicity {p.multiplicity}")

###############################################################################
# Eigenfunctions come out of the kernel of 1 - U as outgoing amplitudes on
# every bond.  Evaluate one of the degenerate modes along each edge.

from qgraph.spectrum import bc_residual, wavefunction

deg = [p for p in pts if p.multiplicity == 2][0]
a = deg.a_vectors[:, 0]
x = np.linspace(0, 1, 5)
print()
for edge in star.edges:
    psi = wavefunction(star, a, deg.k, edge, x)
    print(f"edge {edge}: |psi| at x = {x} -> {np.round(np.abs(psi), 4)}")
print("vertex-condition residual:", f"{bc_residual(star, bcs, deg.k, a):.2e}")

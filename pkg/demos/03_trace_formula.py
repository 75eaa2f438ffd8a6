"""
Counting levels with periodic orbits
====================================

The number of eigenvalues below k splits into a smooth Weyl term and an
oscillating sum over traces of powers of the evolution map.  Each trace is
itself a sum over periodic orbits, which we list for a small star.
"""

import numpy as np

import qgraph as qg
from qgraph.orbits import orbit_trace_sum

g = qg.star_graph(4, [1.0, 1.3, 0.4])

# Periodic orbits of period 2 and 4 with their amplitudes.
for nu in (2, 4):
    orbits = qg.enumerate_orbits(g, qg.KIRCHHOFF, None, nu)
    print(f"period {nu}: {len(orbits)} orbits")
    for o in orbits[:4]:
        print(f"   {' '.join(o.labels):28s} length {o.length:5.2f}  W = {o.amplitude.real:+.4f}")
    k = 2.0
    print(f"   orbit sum {orbit_trace_sum(orbits, k):.6f}  vs  tr U^{nu} {qg.trace_power(g, qg.KIRCHHOFF, k, nu):.6f}")

###############################################################################
# Reconstruct the staircase between computed eigenvalues.  The k = 0 mode
# of the Kirchhoff graph is counted, which is where the offset 1/2 in the
# smooth part comes from.

pts = qg.find_spectrum(g, qg.KIRCHHOFF, qg.ScanConfig(0.05, 8, 800))
roots = np.array([p.k for p in pts])
mids = 0.5 * (roots[:-1] + roots[1:])
sf = qg.counting_function(g, qg.KIRCHHOFF, mids, nu_max=1000)
print()
print("   k_mid    staircase   N(k) truncated   smooth part")
for k, n_true, n, s in zip(mids, 1 + np.arange(1, len(roots)), sf.N, sf.N_smooth):
    print(f"{k:8.4f}   {n_true:6d}      {n:10.4f}     {s:10.4f}")

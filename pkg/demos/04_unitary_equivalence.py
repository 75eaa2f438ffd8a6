"""
Two orderings of the evolution map
==================================

The bond evolution map can be written as S D or as D S.  The two are
similar, so their spectra agree including degeneracies.  Here the spectra
are compared directly and the stronger statement of unitary similarity is
tested with traces of words in (U, U*).
"""

import numpy as np

import qgraph as qg

rng = np.random.default_rng(5)

for n in (2, 3, 4, 5):
    g = qg.star_graph(n, list(rng.uniform(0.5, 2, n - 1)))
    bcs = {v: qg.random_condition(g.topology.degree(v), rng) for v in g.topology.vertices}
    k = rng.uniform(0.5, 20)
    US = qg.evolution_map(g, bcs, k, qg.SCHRODINGER).matrix
    UG = qg.evolution_map(g, bcs, k, qg.GREENS).matrix
    rep = qg.specht_check(US, UG)
    print(f"star with {n} vertices, k = {k:6.3f}")
    print("   " + rep.summary())

###############################################################################
# A pair that shares its spectrum but is not unitarily similar: a
# non-normal matrix and its diagonal form.  The word s t separates them.

A = np.array([[1, 1], [0, 2]], dtype=complex)
B = np.diag([1, 2]).astype(complex)
rep = qg.specht_check(A, B)
print()
print(rep.summary())
for w, da in zip(rep.words, rep.differences):
    if da > rep.tolerance:
        print(f"   first separating word: {w}  (trace difference {da:.3f})")
        break

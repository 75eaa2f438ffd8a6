import numpy as np
import pytest

from qgraph import DIRICHLET, KIRCHHOFF, NEUMANN, metric_graph, random_condition

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_connected_graph(rng, n_vertices, extra_edges=None, leads=False):
    """Random spanning tree plus a few extra edges, random lengths in [0.5, 2)."""
    n = n_vertices
    edges = set()
    order = rng.permutation(n) + 1
    for pos in range(1, n):
        a, b = int(order[pos]), int(order[rng.integers(pos)])
        edges.add((min(a, b), max(a, b)))
    candidates = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if (i, j) not in edges]
    if extra_edges is None:
        extra_edges = rng.integers(0, len(candidates) + 1) if candidates else 0
    for idx in rng.permutation(len(candidates))[:extra_edges]:
        edges.add(candidates[idx])
    edges = sorted(edges)
    lead_pair = None
    if leads:
        a, b = rng.choice(np.arange(1, n + 1), size=2, replace=False)
        lead_pair = (int(a), int(b))
    return metric_graph(n, edges, rng.uniform(0.5, 2.0, len(edges)), lead_pair)


def random_bcs(g, rng, general_fraction=0.5, open_graph=False):
    """Random mix of named and general conditions; general ones sized for leads when ``open_graph``."""
    out = {}
    for v in g.topology.vertices:
        d = g.lead_degree(v) if open_graph else g.topology.degree(v)
        if rng.uniform() < general_fraction:
            out[v] = random_condition(d, rng)
        else:
            out[v] = [DIRICHLET, NEUMANN, KIRCHHOFF][rng.integers(3)]
    return out


def wave_matching_scattering(g, bcs, k):
    """Transmission and reflection amplitudes by matching plane waves directly.

    Edge (i, j), i < j, carries ``alpha e^{ikx} + beta e^{-ikx}`` with x from i;
    the entrance lead carries ``e^{-iky} + R e^{iky}`` and the exit lead
    ``T e^{iky}``, y outward.  Every vertex imposes ``A psi + B psi' = 0`` on
    values and outward derivatives, channels ordered as neighbours then lead.
    Returns ``(T, R)``.
    """
    from qgraph.evolution import resolve_bcs

    bcs = resolve_bcs(g, bcs)
    topo = g.topology
    E = len(topo.edges)
    entrance, exit_ = g.leads
    n_unk = 2 * E + 2
    iR, iT = 2 * E, 2 * E + 1
    rows, rhs = [], []
    for v in topo.vertices:
        chans = topo.neighbors(v)
        d = g.lead_degree(v)
        vals = np.zeros((d, n_unk), dtype=complex)
        ders = np.zeros((d, n_unk), dtype=complex)
        v0 = np.zeros(d, dtype=complex)
        d0 = np.zeros(d, dtype=complex)
        for c, u in enumerate(chans):
            i, j = min(u, v), max(u, v)
            e = topo.edges.index((i, j))
            z = np.exp(1j * k * g.lengths[e])
            if v == i:
                vals[c, 2 * e], vals[c, 2 * e + 1] = 1, 1
                ders[c, 2 * e], ders[c, 2 * e + 1] = 1j * k, -1j * k
            else:
                vals[c, 2 * e], vals[c, 2 * e + 1] = z, 1 / z
                ders[c, 2 * e], ders[c, 2 * e + 1] = -1j * k * z, 1j * k / z
        if v == entrance:
            vals[-1, iR], ders[-1, iR] = 1, 1j * k
            v0[-1], d0[-1] = 1, -1j * k
        if v == exit_:
            vals[-1, iT], ders[-1, iT] = 1, 1j * k
        A, B = bcs[v].matrices(d)
        rows.append(A @ vals + B @ ders)
        rhs.append(-(A @ v0 + B @ d0))
    sol = np.linalg.solve(np.vstack(rows), np.concatenate(rhs))
    return complex(sol[iT]), complex(sol[iR])

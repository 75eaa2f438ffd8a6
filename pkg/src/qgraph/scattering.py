"""Exact scattering Green's function of an open graph via families of paths.

Attach an entrance lead at vertex ``e`` and an exit lead at vertex ``x``.
For each bond ``i -> j`` the family ``p_ij`` collects every continuation of a
path that has just been launched along ``i -> j`` until it leaves through the
exit lead:

    p_ij = z_ij * sum_{l in E_j} sigma_j[(j,l), (i,j)] p_jl + [j == x] z_ij sigma_x[lead, (i,x)]

The reflection term ``l = i`` is part of the sum.  In matrix form this is
``(1 - D S_open^T) p = s`` where ``S_open`` is the bond scattering matrix with
lead-augmented vertex matrices at ``e`` and ``x``; the transpose appears
because the families are accumulated backwards from the exit.  Only bonds
of actual edges carry a family, which is the adjacency mask ``P o A``.

The transmission amplitude and Green's function follow as

    T = sum_{j in E_e} sigma_e[(e,j), lead] p_ej
    G(x_f, x_i; k) = m / (i hbar^2 k) * T * exp(i k (x_i + x_f)).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ExplosionError, GraphConstructionError, SingularityError
from .evolution import BCSpec, propagator_diagonal, resolve_bcs, scattering_from_sigmas, vertex_sigmas
from .graph import MetricGraph, star_graph
from .vertex import sigma_matrix


@dataclass(frozen=True)
class UnitsConvention:
    """``hbar`` and ``mass``; the defaults make ``E = k^2`` and ``m/(i hbar^2 k) = 1/(2ik)``."""

    hbar: float = 1.0
    mass: float = 0.5

    def __post_init__(self):
        if not (self.hbar > 0 and self.mass > 0):
            raise ValueError("hbar and mass must be strictly positive")

    def prefactor(self, k) -> complex:
        return self.mass / (1j * self.hbar**2 * k)


@dataclass(frozen=True)
class PathFamilySystem:
    k: float
    matrix: np.ndarray = field(repr=False)   # 1 - D S_open^T
    exit_source: np.ndarray = field(repr=False)
    entrance_source: np.ndarray = field(repr=False)
    entrance_out: np.ndarray = field(repr=False)   # sigma_e[(e,j), lead] on bonds e->j
    direct_reflection: complex = 0j


@dataclass(frozen=True)
class ScatteringResult:
    k: float
    T: complex
    R: complex
    p: np.ndarray = field(repr=False)

    @property
    def transmission(self) -> float:
        return abs(self.T) ** 2

    @property
    def reflection(self) -> float:
        return abs(self.R) ** 2

    @property
    def flux(self) -> float:
        return self.transmission + self.reflection


def _require_leads(g: MetricGraph):
    if g.leads is None:
        raise GraphConstructionError("scattering needs an entrance and an exit lead")
    return g.leads


def _check_k(k):
    if not (np.isreal(k) and np.real(k) > 0):
        raise ValueError(f"wavenumber must be real and > 0, got {k!r}")
    return float(np.real(k))


def family_system(g: MetricGraph, bcs: BCSpec | None, k) -> PathFamilySystem:
    entrance, exit_ = _require_leads(g)
    bcs = resolve_bcs(g, bcs)
    sigmas = vertex_sigmas(g, bcs, k, closed=False)
    S = scattering_from_sigmas(g, sigmas)
    z = propagator_diagonal(g, k)
    basis = g.basis
    N = len(basis)
    M = np.eye(N) - z[:, None] * S.T

    def lead_source(v):
        s = np.zeros(N, dtype=complex)
        sig = sigmas[v]
        for c, i in enumerate(g.topology.neighbors(v)):
            b = basis.index(i, v)
            s[b] = z[b] * sig[-1, c]
        return s

    out = np.zeros(N, dtype=complex)
    sig_e = sigmas[entrance]
    for c, j in enumerate(g.topology.neighbors(entrance)):
        out[basis.index(entrance, j)] = sig_e[c, -1]
    return PathFamilySystem(k, M, lead_source(exit_), lead_source(entrance), out, complex(sig_e[-1, -1]))


def solve_families(g: MetricGraph, bcs: BCSpec | None, k) -> ScatteringResult:
    """Solve the family system and read out transmission and reflection amplitudes.

    The reflection amplitude uses a second family set that ends in the
    entrance lead, together with the direct reflection at the entrance vertex.
    """
    k = _check_k(k)
    system = family_system(g, bcs, k)
    M = system.matrix
    if np.linalg.cond(M) > 1e13:
        raise SingularityError(
            f"family system is singular at k={k!r}; perturb k slightly (e.g. k*(1+1e-9))", k=k
        )
    sol = np.linalg.solve(M, np.column_stack([system.exit_source, system.entrance_source]))
    p, q = sol[:, 0], sol[:, 1]
    T = complex(system.entrance_out @ p)
    R = system.direct_reflection + complex(system.entrance_out @ q)
    return ScatteringResult(k, T, R, p)


def family_matrix(g: MetricGraph, p: np.ndarray) -> np.ndarray:
    """Arrange a family vector as the n x n matrix ``P o A`` (zero off the edges)."""
    P = np.zeros((g.n, g.n), dtype=complex)
    for b, (i, j) in enumerate(g.basis.bonds):
        P[i - 1, j - 1] = p[b]
    return P * g.topology.adjacency


def greens_function(g: MetricGraph, bcs: BCSpec | None, k, x_i: float = 0.0, x_f: float = 0.0,
                    units: UnitsConvention = UnitsConvention()) -> complex:
    if x_i < 0 or x_f < 0:
        raise ValueError("lead positions are measured outward from the vertex and must be >= 0")
    T = solve_families(g, bcs, k).T
    return complex(units.prefactor(k) * T * np.exp(1j * k * (x_i + x_f)))


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------

def _uniform_entries(sigma, tol=1e-12):
    d = sigma.shape[0]
    r = sigma[0, 0]
    t = sigma[1, 0] if d > 1 else 0j
    expected = np.full((d, d), t) + (r - t) * np.eye(d)
    if np.max(np.abs(sigma - expected)) > tol:
        raise ValueError("closed-form star formulas need a centre with equal reflections and equal transmissions")
    return complex(r), complex(t)


def star_secular_oracle(lengths: Sequence[float], bcs: BCSpec | None, k, exit_leaf: Optional[int] = None) -> complex:
    """Closed-form ``det(1 - U)`` of a star with centre 1 and leaves ``2..n``.

    With ``u_i = r_i z_i^2`` and ``c = r_1 - t_1`` the determinant is
    ``prod_i (1 - c u_i) - t_1 sum_i u_i prod_{j != i} (1 - c u_j)``; for two
    leaves it expands to ``(1 - r1 r2 z12^2)(1 - r1 r3 z13^2) - r2 r3 t1^2 z12^2 z13^2``.
    If ``exit_leaf`` is given, that leaf and the centre carry leads.
    """
    n = len(lengths) + 1
    leaves = range(2, n + 1)
    bcs = {v: b for v, b in resolve_bcs(star_graph(n, list(lengths)), bcs).items()}
    centre_degree = n - 1 + (1 if exit_leaf is not None else 0)
    r1, t1 = _uniform_entries(sigma_matrix(bcs[1], centre_degree, k))
    c = r1 - t1
    u = np.array([
        sigma_matrix(bcs[j], 2 if j == exit_leaf else 1, k)[0, 0] * np.exp(2j * k * lengths[j - 2])
        for j in leaves
    ])
    g_i = 1 - c * u
    others = np.array([np.prod(np.delete(g_i, i)) for i in range(len(g_i))])
    return complex(np.prod(g_i) - t1 * np.sum(u * others))


def star3_secular(r1, t1, r2, r3, z12, z13, r1_13=None, t1_back=None) -> complex:
    """The two-leaf star determinant written out with its three periodic orbits.

    ``r1_13`` (centre reflection on the second edge) and ``t1_back``
    (transmission in the opposite direction) default to ``r1`` and ``t1``;
    pass them for a centre whose vertex matrix is not uniform.
    """
    r1_13 = r1 if r1_13 is None else r1_13
    t1_back = t1 if t1_back is None else t1_back
    return (1 - r1 * r2 * z12**2) * (1 - r1_13 * r3 * z13**2) - r2 * r3 * t1 * t1_back * z12**2 * z13**2


def star_gf_oracle(n: int, lengths: Sequence[float], bcs: BCSpec | None, k, x_i: float = 0.0,
                   x_f: float = 0.0, units: UnitsConvention = UnitsConvention()) -> complex:
    """Closed-form Green's function of the open star (entrance at the centre, exit at leaf n).

    ``G = m/(i hbar^2 k) * t_1 t_n z_1n / g * prod_{i != n} (g_1i + r_i t_1 z_1i^2) * e^{ik(x_i+x_f)}``
    with ``g_1i = 1 - r_1 r_i z_1i^2``; ``r_1, t_1`` belong to the centre with
    its lead and ``t_n`` is the leaf-to-lead transmission at leaf n.
    """
    if len(lengths) != n - 1:
        raise ValueError(f"S_{n} has {n - 1} edges, got {len(lengths)} lengths")
    k = _check_k(k)
    bcs = resolve_bcs(star_graph(n, list(lengths)), bcs)
    r1, t1 = _uniform_entries(sigma_matrix(bcs[1], n, k))
    sig_n = sigma_matrix(bcs[n], 2, k)
    t_n = sig_n[1, 0]
    g = star_secular_oracle(lengths, bcs, k, exit_leaf=n)
    if abs(g) < 1e-14:
        raise SingularityError(f"k={k!r} is a pole of the star Green's function", k=k)
    num = t1 * t_n * np.exp(1j * k * lengths[n - 2])
    for i in range(2, n):
        r_i = sigma_matrix(bcs[i], 1, k)[0, 0]
        z2 = np.exp(2j * k * lengths[i - 2])
        num *= (1 - r1 * r_i * z2) + r_i * t1 * z2
    return complex(units.prefactor(k) * num / g * np.exp(1j * k * (x_i + x_f)))


@dataclass(frozen=True)
class PathSum:
    value: complex
    n_paths: int
    truncated: bool


def brute_force_transmission(g: MetricGraph, bcs: BCSpec | None, k, max_path_length: float,
                             max_paths: int = 10**7, strict: bool = False) -> PathSum:
    """Direct sum of ``W e^{ikL}`` over all paths from entrance to exit lead no longer than the cutoff.

    Paths through zero amplitudes are pruned.  When more than ``max_paths``
    partial paths are explored the sum is returned with ``truncated=True``,
    or :class:`ExplosionError` is raised when ``strict``.
    """
    entrance, exit_ = _require_leads(g)
    if not np.isfinite(max_path_length):
        raise ValueError("max_path_length must be finite")
    k = _check_k(k)
    sigmas = vertex_sigmas(g, bcs, k, closed=False)
    basis = g.basis
    lengths = basis.lengths
    z = propagator_diagonal(g, k)
    topo = g.topology
    chan = {v: {u: c for c, u in enumerate(topo.neighbors(v))} for v in topo.vertices}
    succ = [[basis.index(basis.head(b), l) for l in topo.neighbors(basis.head(b))] for b in range(len(basis))]

    total = 0j
    count = 0
    truncated = False
    # stack entries: (bond just entered, amplitude including its propagation, length so far)
    stack = []
    for j in topo.neighbors(entrance):
        b = basis.index(entrance, j)
        w = sigmas[entrance][chan[entrance][j], -1]
        if w != 0 and lengths[b] <= max_path_length:
            stack.append((b, w * z[b], lengths[b]))
    while stack:
        b, amp, L = stack.pop()
        count += 1
        if count > max_paths:
            truncated = True
            break
        head, tail = basis.bonds[b][1], basis.bonds[b][0]
        sig = sigmas[head]
        c_in = chan[head][tail]
        if head == exit_:
            total += amp * sig[-1, c_in]
        for nb in succ[b]:
            L2 = L + lengths[nb]
            if L2 > max_path_length:
                continue
            w = sig[chan[head][basis.bonds[nb][1]], c_in]
            if w != 0:
                stack.append((nb, amp * w * z[nb], L2))
    if truncated and strict:
        raise ExplosionError(f"more than {max_paths} paths below length {max_path_length}")
    return PathSum(complex(total), count, truncated)

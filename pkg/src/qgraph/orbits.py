"""Periodic orbits, traces of the evolution map and the trace formula.

The oscillatory part of the eigenvalue counting function is

    N_osc(k) = (1/pi) Im sum_{nu >= 1} tr[U_G(k)^nu] / nu,

and ``tr U^nu`` is a sum over closed bond walks of period ``nu``: each walk
contributes ``W_p exp(i k l_p)`` once for every distinct rotation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ExplosionError
from .evolution import GREENS, BCSpec, evolution_matrix, propagator_diagonal, resolve_bcs, scattering_from_sigmas, vertex_sigmas
from .graph import MetricGraph
from .vertex import sigma_derivative


@dataclass(frozen=True)
class PeriodicOrbit:
    bonds: tuple[int, ...]
    labels: tuple[str, ...]
    length: float
    amplitude: complex
    repetitions: int = 1

    @property
    def period(self) -> int:
        return len(self.bonds)

    @property
    def primitive_period(self) -> int:
        return self.period // self.repetitions

    @property
    def primitive(self) -> bool:
        return self.repetitions == 1

    def weight(self, k: float) -> complex:
        """``W_p e^{i k l_p}``: this orbit's contribution to one diagonal entry of ``U^nu``."""
        return self.amplitude * np.exp(1j * k * self.length)

    def visits_edges(self) -> set[int]:
        return {b // 2 for b in self.bonds}


def trace_power(g: MetricGraph, bcs: BCSpec | None, k: float, nu: int) -> complex:
    """``tr[U_G(k)^nu]`` by repeated multiplication."""
    if nu < 1:
        raise ValueError("nu must be >= 1")
    U = evolution_matrix(g.closed(), bcs, k, GREENS)
    return complex(np.trace(np.linalg.matrix_power(U, nu)))


def _minimal_rotation(seq):
    return min(seq[i:] + seq[:i] for i in range(len(seq)))


def _repetitions(seq):
    n = len(seq)
    for p in range(1, n + 1):
        if n % p == 0 and seq == seq[p:] + seq[:p]:
            return n // p
    return 1


def enumerate_orbits(g: MetricGraph, bcs: BCSpec | None, k: Optional[float], nu: int,
                     max_cycles: int = 10**6, include_zero: bool = True) -> list[PeriodicOrbit]:
    """All closed bond walks of period ``nu`` up to cyclic shift.

    Both traversal directions are kept as distinct orbits.  The amplitude is
    the product of vertex-matrix entries along the walk, evaluated at ``k``
    (which may be ``None`` when every condition is k-independent).
    ``max_cycles`` bounds the number of explored partial walks.
    """
    if nu < 1:
        raise ValueError("nu must be >= 1")
    g = g.closed()
    bcs = resolve_bcs(g, bcs)
    if k is None:
        if not all(bc.k_independent for bc in bcs.values()):
            raise ValueError("k is required when some vertex condition depends on k")
        k = 1.0
    S = scattering_from_sigmas(g, vertex_sigmas(g, bcs, k))
    basis = g.basis
    N = len(basis)
    succ = [[b2 for b2 in range(N) if basis.tail(b2) == basis.head(b)] for b in range(N)]

    orbits = []
    explored = 0
    for b0 in range(N):
        stack = [(b0,)]
        while stack:
            walk = stack.pop()
            explored += 1
            if explored > max_cycles:
                raise ExplosionError(
                    f"more than {max_cycles} partial walks at period {nu}; use a smaller period"
                )
            if len(walk) == nu:
                if basis.head(walk[-1]) != basis.tail(b0) or walk != _minimal_rotation(walk):
                    continue
                amp = complex(np.prod([S[walk[(t + 1) % nu], walk[t]] for t in range(nu)]))
                if amp == 0 and not include_zero:
                    continue
                orbits.append(PeriodicOrbit(
                    bonds=walk,
                    labels=tuple(basis.label(b) for b in walk),
                    length=float(sum(basis.lengths[b] for b in walk)),
                    amplitude=amp,
                    repetitions=_repetitions(walk),
                ))
                continue
            for nb in succ[walk[-1]]:
                if nb >= b0:
                    stack.append(walk + (nb,))
    orbits.sort(key=lambda o: (o.length, o.bonds))
    return orbits


def orbit_trace_sum(orbits, k: float) -> complex:
    """``sum_p (primitive period) W_p e^{ik l_p}``, equal to ``tr U^nu`` over a complete orbit list."""
    return complex(sum(o.primitive_period * o.weight(k) for o in orbits))


# ---------------------------------------------------------------------------
# counting function and density of states
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralFunctions:
    k: np.ndarray = field(repr=False)
    N_smooth: Optional[np.ndarray] = field(repr=False)
    N_oscillatory: np.ndarray = field(repr=False)
    N: np.ndarray = field(repr=False)
    d: np.ndarray = field(repr=False)
    d_smoothed: np.ndarray = field(repr=False)
    nu_max: int
    total_length: float
    eta: float

    @property
    def smooth_slope(self) -> float:
        return self.total_length / (2 * np.pi)


def neumann_class(g: MetricGraph, bcs: BCSpec | None) -> bool:
    return all(bc.kind in ("neumann", "kirchhoff") for bc in resolve_bcs(g, bcs).values())


def _trace_sums(g, bcs, ks, nu_max):
    """Truncated ``sum tr(U^nu)/nu`` and its k-derivative for each (possibly complex) k."""
    g = g.closed()
    bcs = resolve_bcs(g, bcs)
    ell = g.basis.lengths
    K, N = len(ks), len(g.basis)
    U = np.empty((K, N, N), dtype=complex)
    dU = np.empty((K, N, N), dtype=complex)
    for idx, k in enumerate(ks):
        sig = vertex_sigmas(g, bcs, k)
        S = scattering_from_sigmas(g, sig)
        z = propagator_diagonal(g, k)
        U[idx] = z[:, None] * S
        dU[idx] = (1j * ell * z)[:, None] * S
        if not all(bc.k_independent for bc in bcs.values()):
            dsig = {v: sigma_derivative(bcs[v], g.topology.degree(v), k) for v in bcs}
            dU[idx] += z[:, None] * scattering_from_sigmas(g, dsig)
    series = np.zeros(K, dtype=complex)
    dseries = np.zeros(K, dtype=complex)
    power = np.broadcast_to(np.eye(N, dtype=complex), (K, N, N)).copy()   # U^(nu-1)
    for nu in range(1, nu_max + 1):
        dseries += np.einsum("kij,kji->k", power, dU)
        power = power @ U
        series += np.trace(power, axis1=1, axis2=2) / nu
    return series, dseries


def counting_function(g: MetricGraph, bcs: BCSpec | None, grid, nu_max: int = 100,
                      smooth_offset: Optional[float] = None, eta: Optional[float] = None) -> SpectralFunctions:
    """Truncated trace formula on a k-grid.

    The smooth term ``k L/(2 pi) + 1/2`` with ``L = 2 sum(lengths)`` is built in
    for Neumann/Kirchhoff graphs.  For other conditions pass ``smooth_offset``
    explicitly; otherwise ``N_smooth`` is ``None`` and ``N`` holds only the
    oscillatory part.  ``d_smoothed`` is the density convolved with a
    Lorentzian of half-width ``eta`` (evaluation at ``k + i eta``).
    """
    ks = np.asarray(grid, dtype=float)
    if np.any(ks <= 0):
        raise ValueError("grid must be strictly positive")
    if nu_max < 0:
        raise ValueError("nu_max must be >= 0")
    total_length = 2 * g.total_length
    if eta is None:
        eta = 2 * float(np.min(np.diff(ks))) if len(ks) > 1 else 0.05
    series, dseries = _trace_sums(g, bcs, ks, nu_max)
    _, dseries_eta = _trace_sums(g, bcs, ks + 1j * eta, nu_max)

    if smooth_offset is None and neumann_class(g, bcs):
        smooth_offset = 0.5
    slope = total_length / (2 * np.pi)
    osc = series.imag / np.pi
    if smooth_offset is None:
        smooth = None
        total = osc
        d = dseries.imag / np.pi
        d_eta = dseries_eta.imag / np.pi
    else:
        smooth = slope * ks + smooth_offset
        total = smooth + osc
        d = slope + dseries.imag / np.pi
        d_eta = slope + dseries_eta.imag / np.pi
    return SpectralFunctions(ks, smooth, osc, total, d, d_eta, nu_max, total_length, float(eta))


def density_of_states(g: MetricGraph, bcs: BCSpec | None, grid, nu_max: int = 100,
                      eta: Optional[float] = None, smooth_offset: Optional[float] = None) -> SpectralFunctions:
    """Exact k-derivative of the truncated counting function (see :func:`counting_function`)."""
    return counting_function(g, bcs, grid, nu_max, smooth_offset=smooth_offset, eta=eta)

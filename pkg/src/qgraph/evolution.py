"""Edge propagation, bond scattering and the two quantum evolution maps.

In the bond basis of :mod:`qgraph.graph`:

* ``D(k) = diag(exp(i k l_b))`` propagates along each bond;
* ``S(k)[j->l, i->j] = sigma_j[l, i]`` scatters an amplitude arriving at
  ``j`` along ``i->j`` into ``j->l``;
* ``U_S = S D`` (propagate, then scatter) acts on amplitudes leaving
  vertices, ``U_G = D S`` (scatter, then propagate) on amplitudes arriving.

Both maps are unitary and share their spectrum, so ``det(1 - U_S)`` and
``det(1 - U_G)`` vanish at the same wavenumbers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

import numpy as np

from .errors import BoundaryConditionError
from .graph import MetricGraph
from .vertex import KIRCHHOFF, VertexCondition, sigma_matrix

SCHRODINGER = "schrodinger"
GREENS = "greens"

BCSpec = Union[VertexCondition, Mapping[int, VertexCondition]]


def resolve_bcs(g: MetricGraph, bcs: BCSpec | None) -> dict[int, VertexCondition]:
    """Expand a single condition or a partial mapping into one condition per vertex."""
    if bcs is None:
        return {v: KIRCHHOFF for v in g.topology.vertices}
    if isinstance(bcs, VertexCondition):
        return {v: bcs for v in g.topology.vertices}
    out = {}
    for v in g.topology.vertices:
        if v not in bcs:
            raise BoundaryConditionError(f"no boundary condition given for vertex {v}")
        out[v] = bcs[v]
    return out


def _check_k(k):
    if not (np.isreal(k) and np.real(k) > 0):
        raise ValueError(f"wavenumber must be real and > 0, got {k!r}")
    return float(np.real(k))


def vertex_sigmas(g: MetricGraph, bcs: BCSpec | None, k, closed: bool = True) -> dict[int, np.ndarray]:
    """Scattering matrix for every vertex; lead vertices are augmented when ``closed`` is false."""
    bcs = resolve_bcs(g, bcs)
    out = {}
    for v in g.topology.vertices:
        d = g.topology.degree(v) if closed else g.lead_degree(v)
        out[v] = sigma_matrix(bcs[v], d, k)
    return out


def scattering_from_sigmas(g: MetricGraph, sigmas: Mapping[int, np.ndarray]) -> np.ndarray:
    basis = g.basis
    N = len(basis)
    S = np.zeros((N, N), dtype=complex)
    for j in g.topology.vertices:
        chans = g.topology.neighbors(j)
        sigma = sigmas[j]
        for a, i in enumerate(chans):
            col = basis.index(i, j)
            for c, l in enumerate(chans):
                S[basis.index(j, l), col] = sigma[c, a]
    return S


def propagator_diagonal(g: MetricGraph, k) -> np.ndarray:
    return np.exp(1j * k * g.basis.lengths)


@dataclass(frozen=True)
class EdgePropagator:
    k: float
    z: np.ndarray = field(repr=False)

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.z)


@dataclass(frozen=True)
class BondScatteringMatrix:
    k: float
    matrix: np.ndarray = field(repr=False)
    closed: bool = True

    def unitarity_residual(self) -> float:
        S = self.matrix
        return float(np.max(np.abs(S @ S.conj().T - np.eye(S.shape[0]))))


@dataclass(frozen=True)
class EvolutionMap:
    k: float
    matrix: np.ndarray = field(repr=False)
    convention: str
    S: np.ndarray = field(repr=False)
    D: np.ndarray = field(repr=False)

    def unitarity_residual(self) -> float:
        U = self.matrix
        return float(np.max(np.abs(U @ U.conj().T - np.eye(U.shape[0]))))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.matrix)


def build_propagator(g: MetricGraph, k) -> EdgePropagator:
    k = _check_k(k)
    return EdgePropagator(k, propagator_diagonal(g, k))


def build_bond_scattering(g: MetricGraph, bcs: BCSpec | None, k, closed: bool = True) -> BondScatteringMatrix:
    """Bond scattering matrix ``S(k)``.

    With ``closed=False`` the vertices carrying leads use their augmented
    vertex matrices restricted to the interior channels, so ``S`` is then
    sub-unitary (flux leaks into the leads).
    """
    k = _check_k(k)
    S = scattering_from_sigmas(g, vertex_sigmas(g, bcs, k, closed))
    return BondScatteringMatrix(k, S, closed)


def _matrix(g, bcs, k, convention, closed=True):
    S = scattering_from_sigmas(g, vertex_sigmas(g, bcs, k, closed))
    D = np.diag(propagator_diagonal(g, k))
    if convention == SCHRODINGER:
        return S @ D, S, D
    if convention == GREENS:
        return D @ S, S, D
    raise ValueError(f"convention must be {SCHRODINGER!r} or {GREENS!r}, got {convention!r}")


def evolution_map(g: MetricGraph, bcs: BCSpec | None, k, convention: str = GREENS) -> EvolutionMap:
    """Closed-graph evolution map in either ordering (leads are ignored)."""
    k = _check_k(k)
    U, S, D = _matrix(g, bcs, k, convention)
    return EvolutionMap(k, U, convention, S, D)


def evolution_matrix(g: MetricGraph, bcs: BCSpec | None, k, convention: str = GREENS) -> np.ndarray:
    """Unchecked variant of :func:`evolution_map` that accepts complex ``k``."""
    return _matrix(g, bcs, k, convention)[0]


def secular_determinant(g: MetricGraph, bcs: BCSpec | None, k, convention: str = GREENS) -> complex:
    k = _check_k(k)
    U = _matrix(g, bcs, k, convention)[0]
    return complex(np.linalg.det(np.eye(U.shape[0]) - U))

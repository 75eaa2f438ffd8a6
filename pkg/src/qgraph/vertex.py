"""Vertex boundary conditions and their k-dependent scattering matrices.

A condition at a vertex of degree ``d`` is the pair ``(A, B)`` acting on the
vector of edge values and outward derivatives, ``A psi + B psi' = 0``.  For an
incoming wave on channel ``c`` the outgoing amplitudes are the column
``sigma[:, c]`` of

    sigma(k) = -(A + i k B)^{-1} (A - i k B),

so ``sigma[out, in]`` is the amplitude from channel ``in`` into channel
``out``.  Channels are the neighbours of the vertex in increasing order; at a
vertex carrying a lead the lead is appended as the last channel.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import BoundaryConditionError, SingularityError

KINDS = ("dirichlet", "neumann", "kirchhoff", "general")

HERMITIAN_TOL = 1e-12
RANK_TOL = 1e-12
UNITARY_TOL = 1e-10


@dataclass(frozen=True)
class VertexCondition:
    """Boundary data for one vertex.

    Named kinds work at any degree.  ``general`` carries explicit ``A`` and
    ``B`` and is only valid at the degree matching their size.
    """

    kind: str
    A: Optional[np.ndarray] = field(default=None, repr=False, compare=False)
    B: Optional[np.ndarray] = field(default=None, repr=False, compare=False)
    hermitian_tol: float = HERMITIAN_TOL
    rank_tol: float = RANK_TOL

    def __post_init__(self):
        kind = self.kind.lower()
        object.__setattr__(self, "kind", kind)
        if kind not in KINDS:
            raise BoundaryConditionError(f"unknown boundary condition kind {self.kind!r}")
        if kind != "general":
            return
        if self.A is None or self.B is None:
            raise BoundaryConditionError("general condition needs both A and B")
        A = np.atleast_2d(np.asarray(self.A, dtype=complex))
        B = np.atleast_2d(np.asarray(self.B, dtype=complex))
        if A.shape != B.shape or A.shape[0] != A.shape[1]:
            raise BoundaryConditionError(f"A and B must be square and equal-sized, got {A.shape} and {B.shape}")
        AB = A @ B.conj().T
        herm = np.max(np.abs(AB - AB.conj().T)) if AB.size else 0.0
        if herm > self.hermitian_tol * max(1.0, np.max(np.abs(AB))):
            raise BoundaryConditionError(f"A B^dagger is not Hermitian (residual {herm:.3e})")
        sv = np.linalg.svd(np.hstack([A, B]), compute_uv=False)
        if sv[-1] <= self.rank_tol * sv[0]:
            raise BoundaryConditionError(
                f"(A, B) does not have maximal rank {A.shape[0]} (singular values {sv})"
            )
        A.setflags(write=False)
        B.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def k_independent(self) -> bool:
        return self.kind != "general"

    @property
    def dimension(self) -> Optional[int]:
        return None if self.A is None else self.A.shape[0]

    def matrices(self, degree: int) -> tuple[np.ndarray, np.ndarray]:
        """The canonical ``(A, B)`` pair at the given degree."""
        d = int(degree)
        if d < 1:
            raise BoundaryConditionError("vertex degree must be at least 1")
        if self.kind == "dirichlet":
            return np.eye(d, dtype=complex), np.zeros((d, d), dtype=complex)
        if self.kind == "neumann":
            return np.zeros((d, d), dtype=complex), np.eye(d, dtype=complex)
        if self.kind == "kirchhoff":
            A = np.zeros((d, d), dtype=complex)
            B = np.zeros((d, d), dtype=complex)
            for row in range(d - 1):
                A[row, row], A[row, row + 1] = 1, -1
            B[d - 1, :] = 1
            return A, B
        if self.dimension != d:
            raise BoundaryConditionError(
                f"general condition has dimension {self.dimension} but the vertex degree is {d}"
            )
        return self.A, self.B


DIRICHLET = VertexCondition("dirichlet")
NEUMANN = VertexCondition("neumann")
KIRCHHOFF = VertexCondition("kirchhoff")


def general(A, B) -> VertexCondition:
    return VertexCondition("general", np.asarray(A, dtype=complex), np.asarray(B, dtype=complex))


def delta_condition(degree: int, strength: float) -> VertexCondition:
    """Continuity plus ``sum psi' = strength * psi`` (a delta coupling).

    The resulting scattering matrix has equal reflections and equal
    transmissions, but they depend on k.
    """
    A, B = KIRCHHOFF.matrices(degree)
    A = A.copy()
    A[degree - 1, 0] = -strength
    return general(A, B)


def random_condition(degree: int, rng: np.random.Generator) -> VertexCondition:
    """A random valid general condition built from a Haar-random unitary ``V``.

    ``A = (1 - V)/2`` and ``B = i (1 + V) / (2c)`` with a random scale ``c``;
    this pair is self-adjoint and of full rank for every unitary ``V``, and
    the resulting sigma genuinely depends on k.
    """
    z = rng.normal(size=(degree, degree)) + 1j * rng.normal(size=(degree, degree))
    q, r = np.linalg.qr(z)
    V = q * (np.diag(r) / np.abs(np.diag(r)))
    scale = rng.uniform(0.5, 2.0)
    A = (np.eye(degree) - V) / 2
    B = 1j * (np.eye(degree) + V) / (2 * scale)
    return general(A, B)


@dataclass(frozen=True)
class ScatteringMatrix:
    matrix: np.ndarray
    k: complex
    vertex: Optional[int] = None
    channels: Optional[tuple] = None

    @property
    def degree(self) -> int:
        return self.matrix.shape[0]

    def reflection(self, channel: int = 0) -> complex:
        return complex(self.matrix[channel, channel])

    def amplitude(self, out_channel: int, in_channel: int) -> complex:
        return complex(self.matrix[out_channel, in_channel])

    def unitarity_residual(self) -> float:
        s = self.matrix
        return float(np.max(np.abs(s @ s.conj().T - np.eye(s.shape[0]))))


def sigma_matrix(bc: VertexCondition, degree: int, k: complex) -> np.ndarray:
    """Raw scattering matrix; ``k`` may be complex or negative here."""
    d = int(degree)
    if bc.kind == "dirichlet":
        return -np.eye(d, dtype=complex)
    if bc.kind == "neumann":
        return np.eye(d, dtype=complex)
    if bc.kind == "kirchhoff":
        return np.full((d, d), 2.0 / d, dtype=complex) - np.eye(d)
    A, B = bc.matrices(d)
    lhs = A + 1j * k * B
    if np.linalg.cond(lhs) > 1e13:
        raise SingularityError(f"A + ikB is singular at k={k!r}", k=k)
    return -np.linalg.solve(lhs, A - 1j * k * B)


def sigma_derivative(bc: VertexCondition, degree: int, k: complex) -> np.ndarray:
    """d sigma / dk = i (A + ikB)^{-1} B (1 - sigma)."""
    if bc.k_independent:
        return np.zeros((degree, degree), dtype=complex)
    A, B = bc.matrices(degree)
    sigma = sigma_matrix(bc, degree, k)
    return 1j * np.linalg.solve(A + 1j * k * B, B @ (np.eye(degree) - sigma))


def _check_k(k):
    if not (np.isreal(k) and np.real(k) > 0):
        raise ValueError(f"wavenumber must be real and > 0, got {k!r}")
    return float(np.real(k))


def sigma_of_k(bc: VertexCondition, degree: int, k: float, vertex=None, channels=None) -> ScatteringMatrix:
    """Vertex scattering matrix at real ``k > 0``."""
    k = _check_k(k)
    if degree < 1:
        raise BoundaryConditionError("vertex degree must be at least 1")
    return ScatteringMatrix(sigma_matrix(bc, degree, k), k, vertex, channels)


def lead_augmented_sigma(bc: VertexCondition, interior_degree: int, k: float,
                         vertex=None, neighbors: Optional[Sequence[int]] = None) -> ScatteringMatrix:
    """Scattering matrix at a vertex carrying a lead.

    The same condition kind is applied at degree ``interior_degree + 1``; the
    lead is the last channel, labelled ``"lead"``.
    """
    channels = None
    if neighbors is not None:
        channels = tuple(neighbors) + ("lead",)
    return sigma_of_k(bc, interior_degree + 1, k, vertex, channels)


@dataclass(frozen=True)
class SigmaRelations:
    unitarity: float      # max |sigma sigma^dagger - 1|
    column_unitarity: float   # max |sigma^dagger sigma - 1|
    reciprocity: float    # max |sigma(k) - sigma(-k)^dagger|

    def passed(self, tol=UNITARY_TOL) -> bool:
        return max(self.unitarity, self.column_unitarity, self.reciprocity) < tol


def verify_sigma_relations(bc: VertexCondition, degree: int, k: float) -> SigmaRelations:
    k = _check_k(k)
    s = sigma_matrix(bc, degree, k)
    s_neg = sigma_matrix(bc, degree, -k)
    eye = np.eye(degree)
    return SigmaRelations(
        unitarity=float(np.max(np.abs(s @ s.conj().T - eye))),
        column_unitarity=float(np.max(np.abs(s.conj().T @ s - eye))),
        reciprocity=float(np.max(np.abs(s - s_neg.conj().T))),
    )

"""Eigenvalues of closed quantum graphs on the positive real k-axis.

Roots of ``det(1 - U_G(k))`` are located by following the eigenphases of the
unitary map across a k-grid and catching every phase that passes through
zero.  For unitary maps the phases move transversally through zero, which
makes this more robust than bracketing minima of ``|det(1 - U)|``.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import NotAnEigenvalueError, SingularityError
from .evolution import GREENS, BCSpec, evolution_matrix, resolve_bcs, scattering_from_sigmas, vertex_sigmas
from .graph import MetricGraph

logger = logging.getLogger(__name__)

MAX_PHASE_STEP = np.pi / 4
MAX_SUBDIVISION = 14


class CoarseGridWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ScanConfig:
    k_min: float
    k_max: float
    samples: int = 1000
    refine_tolerance: float = 1e-10
    kernel_threshold: float = 1e-8

    def __post_init__(self):
        if not (0 < self.k_min < self.k_max):
            raise ValueError(f"need 0 < k_min < k_max, got {self.k_min}, {self.k_max}")
        if self.samples < 2:
            raise ValueError("samples must be at least 2")


@dataclass(frozen=True)
class SpectralPoint:
    """A root with its kernel.  ``p_vectors`` and ``a_vectors`` hold one column per kernel vector."""

    k: float
    multiplicity: int
    p_vectors: np.ndarray = field(repr=False)
    a_vectors: np.ndarray = field(repr=False)


def _wrap(x):
    return (x + np.pi) % (2 * np.pi) - np.pi


def _phases(g, bcs, k):
    return np.angle(np.linalg.eigvals(evolution_matrix(g, bcs, k, GREENS)))


def _crosses(s0, s1):
    # half-open so that a zero sitting exactly on a grid point is counted once
    return (s0 < 0 <= s1) or (s1 < 0 <= s0)


class _Scanner:
    def __init__(self, g, bcs, cfg):
        self.g, self.bcs, self.cfg = g, bcs, cfg
        self.resampled = 0
        # phases of D S turn at a rate of order the longest bond
        self.speed = float(np.max(g.basis.lengths))

    def phases(self, k):
        return _phases(self.g, self.bcs, k)

    def cell(self, k0, th0, k1, th1, depth=0):
        """Return the tracked phase pairs (s0, s1) crossing zero inside ``[k0, k1]``."""
        cost = np.abs(_wrap(th0[:, None] - th1[None, :]))
        rows, cols = linear_sum_assignment(cost)
        steps = cost[rows, cols]
        too_wide = (k1 - k0) * self.speed > MAX_PHASE_STEP
        if (too_wide or steps.max() > MAX_PHASE_STEP) and depth < MAX_SUBDIVISION:
            self.resampled += 1
            km = 0.5 * (k0 + k1)
            thm = self.phases(km)
            return self.cell(k0, th0, km, thm, depth + 1) + self.cell(km, thm, k1, th1, depth + 1)
        out = []
        for r, c in zip(rows, cols):
            s0 = th0[r]
            s1 = s0 + _wrap(th1[c] - s0)
            if _crosses(s0, s1):
                out.append((k0, s0, k1, s1))
        return out

    def refine(self, k0, s0, k1, s1):
        tol = self.cfg.refine_tolerance
        while k1 - k0 > tol:
            km = 0.5 * (k0 + k1)
            target = 0.5 * (s0 + s1)
            th = self.phases(km)
            sm = target + _wrap(th - target)[np.argmin(np.abs(_wrap(th - target)))]
            if _crosses(s0, sm):
                k1, s1 = km, sm
            else:
                k0, s0 = km, sm
        return 0.5 * (k0 + k1)


def find_spectrum(g: MetricGraph, bcs: BCSpec | None, cfg: ScanConfig) -> list[SpectralPoint]:
    """All roots in ``(k_min, k_max)`` with multiplicities and kernels.

    Leads are ignored.  Degenerate roots are reported once with their
    multiplicity.  Samples where a vertex matrix is singular are skipped.
    """
    g = g.closed()
    bcs = resolve_bcs(g, bcs)
    scan = _Scanner(g, bcs, cfg)

    samples = []
    for k in np.linspace(cfg.k_min, cfg.k_max, cfg.samples):
        try:
            samples.append((k, scan.phases(k)))
        except SingularityError as exc:
            warnings.warn(f"skipping sample k={k}: {exc}", RuntimeWarning, stacklevel=2)

    brackets = []
    for (k0, th0), (k1, th1) in zip(samples, samples[1:]):
        brackets += scan.cell(k0, th0, k1, th1)
    if scan.resampled:
        warnings.warn(
            f"k-grid too coarse for eigenphase tracking; re-sampled {scan.resampled} cells locally",
            CoarseGridWarning,
            stacklevel=2,
        )

    roots = sorted(scan.refine(*b) for b in brackets)
    merge_tol = max(100 * cfg.refine_tolerance, 1e-9)
    clusters: list[list[float]] = []
    for r in roots:
        if clusters and r - clusters[-1][-1] < merge_tol:
            clusters[-1].append(r)
        else:
            clusters.append([r])

    points = []
    for cl in clusters:
        k_star = float(np.mean(cl))
        point = eigenvectors_at(g, bcs, k_star, cfg.kernel_threshold)
        if point.multiplicity != len(cl):
            logger.info("root near k=%.12g: %d phase crossings, kernel dimension %d",
                        k_star, len(cl), point.multiplicity)
        points.append(point)
    return points


def multiplicity_at(g: MetricGraph, bcs: BCSpec | None, k: float, threshold: float = 1e-8) -> int:
    """Number of eigenvalues of ``U_G(k)`` within ``threshold`` of 1."""
    lam = np.linalg.eigvals(evolution_matrix(g.closed(), bcs, k, GREENS))
    return int(np.sum(np.abs(lam - 1) < threshold))


def eigenvectors_at(g: MetricGraph, bcs: BCSpec | None, k_star: float,
                    kernel_threshold: float = 1e-8) -> SpectralPoint:
    """Kernel of ``1 - U_G(k*)`` and the matching outgoing amplitudes ``a = S p``."""
    g = g.closed()
    S = scattering_from_sigmas(g, vertex_sigmas(g, bcs, k_star))
    U = np.diag(np.exp(1j * k_star * g.basis.lengths)) @ S
    _, sv, vh = np.linalg.svd(np.eye(U.shape[0]) - U)
    mask = sv < kernel_threshold
    if not mask.any():
        raise NotAnEigenvalueError(
            f"k={k_star!r} is not an eigenvalue: smallest singular value {sv[-1]:.3e}",
            smallest_singular_value=float(sv[-1]),
        )
    p = vh.conj().T[:, mask]
    return SpectralPoint(float(k_star), int(mask.sum()), p, S @ p)


def wavefunction(g: MetricGraph, a: np.ndarray, k: float, edge: tuple[int, int], x):
    """Value on ``edge = (i, j)`` at distance ``x`` from ``i``.

    ``a`` holds outgoing amplitudes: ``psi = a_{i->j} e^{ikx} + a_{j->i} e^{ik(l - x)}``.
    """
    i, j = edge
    basis = g.basis
    ell = g.length(i, j)
    x = np.asarray(x, dtype=float)
    return a[basis.index(i, j)] * np.exp(1j * k * x) + a[basis.index(j, i)] * np.exp(1j * k * (ell - x))


def bc_residual(g: MetricGraph, bcs: BCSpec | None, k: float, a: np.ndarray) -> float:
    """Largest relative residual of ``A psi + B psi' = 0`` over all vertices.

    Values and outward derivatives are reconstructed from the outgoing
    amplitudes ``a``; the residual is scaled by ``(|A| + k|B|) |a|``.
    """
    g = g.closed()
    bcs = resolve_bcs(g, bcs)
    basis = g.basis
    a = np.asarray(a).ravel()
    z = np.exp(1j * k * basis.lengths)
    worst = 0.0
    for j in g.topology.vertices:
        chans = g.topology.neighbors(j)
        out = np.array([a[basis.index(j, l)] for l in chans])
        inc = np.array([z[basis.index(l, j)] * a[basis.index(l, j)] for l in chans])
        A, B = bcs[j].matrices(len(chans))
        res = A @ (out + inc) + B @ (1j * k * (out - inc))
        scale = (np.linalg.norm(A, 2) + k * np.linalg.norm(B, 2)) * np.linalg.norm(a)
        worst = max(worst, float(np.linalg.norm(res) / scale))
    return worst

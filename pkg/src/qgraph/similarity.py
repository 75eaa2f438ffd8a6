"""Unitary-similarity tests: eigenvalue matching and Specht word traces.

Two ``n x n`` matrices ``A`` and ``B`` are unitarily similar exactly when
``tr w(A, A*) == tr w(B, B*)`` for every word ``w(s, t)`` whose length does
not exceed ``n sqrt(2 n^2 / (n - 1) + 1/4) + n/2 - 2``.

Full enumeration grows like ``2^L`` and becomes impractical beyond
``n ~ 5``.  When both matrices are unitary, ``A* = A^{-1}`` collapses every
word to a power ``A^m`` with ``|m| <= L``, so the complete word set is
covered by ``tr A^m`` for ``m = 1..L``; :func:`specht_check` uses this
reduction automatically and says so in its report.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ExplosionError

S_LETTER, T_LETTER = 0, 1


@dataclass(frozen=True, order=True)
class Word:
    """``s^m1 t^n1 s^m2 t^n2 ...`` stored as its exponent pairs."""

    exponents: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if any(m < 0 or n < 0 for m, n in self.exponents):
            raise ValueError("word exponents must be non-negative")
        if self.length < 1:
            raise ValueError("a word must have length >= 1")

    @classmethod
    def from_letters(cls, letters) -> "Word":
        pairs = []
        m = n = 0
        for c in letters:
            if c == S_LETTER:
                if n:
                    pairs.append((m, n))
                    m = n = 0
                m += 1
            else:
                n += 1
        pairs.append((m, n))
        return cls(tuple(pairs))

    @classmethod
    def parse(cls, text: str) -> "Word":
        """``"s^2 t s"`` or ``"sst s"`` style strings."""
        letters = []
        for token in text.replace("*", " ").split():
            base, _, power = token.partition("^")
            if power:
                if len(base) != 1:
                    raise ValueError(f"bad word token {token!r}")
                letters += [base] * int(power)
            else:
                letters += list(base)
        if any(c not in "st" for c in letters):
            raise ValueError(f"words use the letters s and t only, got {text!r}")
        return cls.from_letters([S_LETTER if c == "s" else T_LETTER for c in letters])

    @property
    def letters(self) -> tuple[int, ...]:
        out = []
        for m, n in self.exponents:
            out += [S_LETTER] * m + [T_LETTER] * n
        return tuple(out)

    @property
    def length(self) -> int:
        return sum(m + n for m, n in self.exponents)

    def __str__(self):
        parts = []
        for m, n in self.exponents:
            for sym, e in (("s", m), ("t", n)):
                if e == 1:
                    parts.append(sym)
                elif e > 1:
                    parts.append(f"{sym}^{e}")
        return " ".join(parts)

    def evaluate(self, M: np.ndarray) -> np.ndarray:
        Mh = M.conj().T
        out = np.eye(M.shape[0], dtype=complex)
        for c in self.letters:
            out = out @ (M if c == S_LETTER else Mh)
        return out

    def trace(self, M: np.ndarray) -> complex:
        return complex(np.trace(self.evaluate(M)))


def specht_bound(n: int) -> float:
    """Maximal word length needed for ``n x n`` matrices."""
    if n < 2:
        raise ValueError("the word-length bound is defined for n >= 2")
    return n * math.sqrt(2 * n * n / (n - 1) + 0.25) + n / 2 - 2


def _is_canonical(letters) -> bool:
    return all(letters <= letters[i:] + letters[:i] for i in range(1, len(letters)))


def necklace_count(length: int) -> int:
    """Number of binary words of this length up to rotation."""
    total = sum(_phi(d) * 2 ** (length // d) for d in range(1, length + 1) if length % d == 0)
    return total // length


def _phi(n):
    return sum(1 for i in range(1, n + 1) if math.gcd(i, n) == 1)


def enumerate_words(max_length: int, reduction: bool = True, max_words: int = 10**6) -> list[Word]:
    """Every word up to ``max_length``, ordered by length then lexicographically (``s < t``).

    With ``reduction`` only one representative per rotation class is kept,
    which loses nothing because the trace is invariant under rotation.
    """
    if max_length < 1:
        raise ValueError("max_length must be >= 1")
    expected = sum(necklace_count(L) if reduction else 2**L for L in range(1, max_length + 1))
    if expected > max_words:
        raise ExplosionError(f"{expected} words up to length {max_length} exceed the guard of {max_words}")
    words = []
    for L in range(1, max_length + 1):
        for letters in product((S_LETTER, T_LETTER), repeat=L):
            if not reduction or _is_canonical(letters):
                words.append(Word.from_letters(letters))
    return words


def _word_traces(A, B, max_length):
    """Traces of every rotation-canonical word up to ``max_length``, sharing prefix products."""
    n = A.shape[0]
    mats = ((A, A.conj().T), (B, B.conj().T))
    out = []
    stack = [((), np.eye(n, dtype=complex), np.eye(n, dtype=complex))]
    while stack:
        letters, pa, pb = stack.pop()
        if letters and _is_canonical(letters):
            out.append((letters, complex(np.trace(pa)), complex(np.trace(pb))))
        if len(letters) < max_length:
            for c in (T_LETTER, S_LETTER):
                stack.append((letters + (c,), pa @ mats[0][c], pb @ mats[1][c]))
    out.sort(key=lambda item: (len(item[0]), item[0]))
    return [(Word.from_letters(l), ta, tb) for l, ta, tb in out]


@dataclass(frozen=True)
class EigenMatch:
    residual: float
    clusters_a: tuple[int, ...]
    clusters_b: tuple[int, ...]

    @property
    def degeneracy_match(self) -> bool:
        return self.clusters_a == self.clusters_b


def _clusters(vals, tol):
    sizes = []
    remaining = list(vals)
    while remaining:
        v = remaining.pop(0)
        close = [w for w in remaining if abs(w - v) < tol]
        for w in close:
            remaining.remove(w)
        sizes.append(1 + len(close))
    return tuple(sorted(sizes))


def _unitarity(M):
    return float(np.max(np.abs(M @ M.conj().T - np.eye(M.shape[0]))))


def eigen_match(A, B, tolerance: float = 1e-10, cluster_tol: float = 1e-6) -> EigenMatch:
    """Compare spectra with degeneracy.

    Eigenvalues are paired by an optimal assignment on ``|a_i - b_j|``, which
    is insensitive to the branch cut that a plain phase sort trips over.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    if max(_unitarity(A), _unitarity(B)) > tolerance:
        warnings.warn("eigen_match input is not unitary within tolerance", RuntimeWarning, stacklevel=2)
    la = np.linalg.eigvals(A)
    lb = np.linalg.eigvals(B)
    cost = np.abs(la[:, None] - lb[None, :])
    rows, cols = linear_sum_assignment(cost)
    residual = float(cost[rows, cols].max()) if len(rows) else 0.0
    return EigenMatch(residual, _clusters(la, cluster_tol), _clusters(lb, cluster_tol))


@dataclass(frozen=True)
class SimilarityReport:
    dimension: int
    bound: float
    max_length: int
    method: str        # "words", "unitary-reduction" or "partial-words"
    words: tuple[Word, ...] = field(repr=False)
    traces_a: np.ndarray = field(repr=False)
    traces_b: np.ndarray = field(repr=False)
    differences: np.ndarray = field(repr=False)
    tolerance: float
    eigen_residual: float
    verdict: str       # "similar", "not similar" or "inconclusive"

    @property
    def max_difference(self) -> float:
        return float(self.differences.max()) if len(self.differences) else 0.0

    def summary(self) -> str:
        return (f"dimension {self.dimension}, word length <= {self.max_length} "
                f"(bound {self.bound:.3f}), method {self.method}, {len(self.words)} words, "
                f"max trace difference {self.max_difference:.3e} (tol {self.tolerance:.3e}), "
                f"eigenvalue residual {self.eigen_residual:.3e}: {self.verdict}")


FULL_WORD_BUDGET = 2**17     # prefix products evaluated in full enumeration
CORROBORATION_BUDGET = 2**12


def _length_for_budget(budget):
    return max(1, int(math.log2(budget)) - 1)


def specht_check(A, B, tolerance=None, method: str = "auto", unitary_tol: float = 1e-10) -> SimilarityReport:
    """Test unitary similarity of ``A`` and ``B``.

    ``method`` is ``"words"`` (every rotation class up to the bound, may raise
    :class:`ExplosionError`), ``"unitary"`` (power traces, valid only for
    unitary input) or ``"auto"``: full words when affordable, else the
    unitary reduction when both inputs are unitary, else as many words as the
    budget allows with an ``inconclusive`` verdict if they all agree.

    ``tolerance`` defaults to ``1e-8 * (1 + max |trace|)``.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    n = A.shape[0]
    bound = specht_bound(n) if n >= 2 else 1.0
    L = max(1, int(math.floor(bound)))
    unitary = max(_unitarity(A), _unitarity(B)) < unitary_tol
    full_cost = 2 ** (L + 1)

    if method == "auto":
        if full_cost <= FULL_WORD_BUDGET:
            method = "words"
        elif unitary:
            method = "unitary-reduction"
        else:
            method = "partial-words"
    elif method == "unitary":
        if not unitary:
            raise ValueError("the unitary reduction needs unitary input")
        method = "unitary-reduction"
    elif method == "words":
        if necklace_count(L) > 10**6:
            raise ExplosionError(f"full word enumeration up to length {L} exceeds the guard")
    else:
        raise ValueError(f"unknown method {method!r}")

    if method == "words":
        triples = _word_traces(A, B, L)
    elif method == "partial-words":
        triples = _word_traces(A, B, _length_for_budget(FULL_WORD_BUDGET))
    else:
        # every word is A^(#s - #t); s^m represents power m, and short words corroborate
        triples = _word_traces(A, B, min(L, _length_for_budget(CORROBORATION_BUDGET)))
        pa = pb = np.eye(n, dtype=complex)
        seen = {w.letters for w, _, _ in triples}
        for m in range(1, L + 1):
            pa, pb = pa @ A, pb @ B
            if (S_LETTER,) * m not in seen:
                triples.append((Word(((m, 0),)), complex(np.trace(pa)), complex(np.trace(pb))))

    words = tuple(w for w, _, _ in triples)
    ta = np.array([t for _, t, _ in triples])
    tb = np.array([t for _, _, t in triples])
    diffs = np.abs(ta - tb)
    if tolerance is None:
        scale = max(np.max(np.abs(ta)), np.max(np.abs(tb))) if len(ta) else 0.0
        tolerance = 1e-8 * (1 + scale)
    eig = eigen_match(A, B, tolerance) if unitary else _quiet_eigen_match(A, B, tolerance)

    if np.any(diffs >= tolerance) or eig.residual >= tolerance:
        verdict = "not similar"
    elif method == "partial-words":
        verdict = "inconclusive"
    else:
        verdict = "similar"
    return SimilarityReport(n, bound, L, method, words, ta, tb, diffs, float(tolerance), eig.residual, verdict)


def _quiet_eigen_match(A, B, tol):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return eigen_match(A, B, tol)

"""Discrete and metric graphs and the directed-bond basis.

Vertices are labelled ``1..n`` everywhere in the public API.  Each undirected
edge ``{i, j}`` (stored with ``i < j``) yields two directed bonds: bond
``2e`` runs ``i -> j`` and bond ``2e + 1`` runs ``j -> i``, where ``e`` is
the position of the edge in the edge list.  Every matrix in the package is
expressed in this basis.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import GraphConstructionError

Edge = tuple[int, int]
Bond = tuple[int, int]


@dataclass(frozen=True)
class DiscreteGraph:
    """Simple connected graph on vertices ``1..n``."""

    n: int
    edges: tuple[Edge, ...]
    adjacency: np.ndarray = field(repr=False, compare=False)

    def degree(self, i: int) -> int:
        self._check_vertex(i)
        return int(self.adjacency[i - 1].sum())

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def neighbors(self, i: int) -> tuple[int, ...]:
        """Sorted neighbours of ``i``; this is also the channel order of its vertex matrix."""
        self._check_vertex(i)
        return tuple(int(j) + 1 for j in np.flatnonzero(self.adjacency[i - 1]))

    def _check_vertex(self, i):
        if not (isinstance(i, (int, np.integer)) and 1 <= i <= self.n):
            raise GraphConstructionError(f"invalid vertex id {i!r} (graph has vertices 1..{self.n})")


def build_discrete_graph(n: int, edges: Iterable[Sequence[int]]) -> DiscreteGraph:
    """Build a simple connected graph from a 1-based edge list.

    Edges keep their input order; each pair is normalised to ``(min, max)``.
    Raises :class:`GraphConstructionError` naming the offending edge for
    self-loops, duplicates and out-of-range ids, and for disconnected input.
    """
    if int(n) != n or n < 1:
        raise GraphConstructionError(f"vertex count must be a positive integer, got {n!r}")
    n = int(n)
    adjacency = np.zeros((n, n), dtype=int)
    normalised = []
    for pos, pair in enumerate(edges):
        if len(pair) != 2:
            raise GraphConstructionError(f"edge #{pos + 1} {pair!r} is not a vertex pair")
        i, j = (int(v) for v in pair)
        if not (1 <= i <= n and 1 <= j <= n):
            raise GraphConstructionError(f"edge #{pos + 1} {{{i},{j}}}: vertex out of range 1..{n}")
        if i == j:
            raise GraphConstructionError(f"edge #{pos + 1} {{{i},{j}}}: self-loop")
        if adjacency[i - 1, j - 1]:
            raise GraphConstructionError(f"edge #{pos + 1} {{{i},{j}}}: duplicate edge")
        adjacency[i - 1, j - 1] = adjacency[j - 1, i - 1] = 1
        normalised.append((min(i, j), max(i, j)))

    # connectivity by breadth-first search from vertex 1
    seen = {0}
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for w in np.flatnonzero(adjacency[v]):
            if w not in seen:
                seen.add(int(w))
                frontier.append(int(w))
    if len(seen) != n:
        missing = sorted(set(range(n)) - seen)
        raise GraphConstructionError(
            f"graph is disconnected: vertices {[m + 1 for m in missing]} unreachable from vertex 1"
        )
    adjacency.setflags(write=False)
    return DiscreteGraph(n=n, edges=tuple(normalised), adjacency=adjacency)


def neighborhood(g: DiscreteGraph | "MetricGraph", i: int, exclude: Optional[int] = None) -> set[int]:
    """Neighbour set of ``i``, optionally with ``exclude`` removed."""
    topo = g.topology if isinstance(g, MetricGraph) else g
    out = set(topo.neighbors(i))
    if exclude is not None:
        topo._check_vertex(exclude)
        out.discard(exclude)
    return out


@dataclass(frozen=True)
class MetricGraph:
    """A discrete graph with positive edge lengths and optional entrance/exit leads."""

    topology: DiscreteGraph
    lengths: tuple[float, ...]
    leads: Optional[tuple[int, int]] = None

    def __post_init__(self):
        if len(self.lengths) != len(self.topology.edges):
            raise GraphConstructionError(
                f"{len(self.lengths)} lengths given for {len(self.topology.edges)} edges"
            )
        for (i, j), ell in zip(self.topology.edges, self.lengths):
            if not (np.isfinite(ell) and ell > 0):
                raise GraphConstructionError(f"edge {{{i},{j}}}: length must be finite and > 0, got {ell!r}")
        if self.leads is not None:
            entrance, exit_ = self.leads
            self.topology._check_vertex(entrance)
            self.topology._check_vertex(exit_)
            if entrance == exit_:
                raise GraphConstructionError("entrance and exit leads must sit on different vertices")

    @property
    def n(self) -> int:
        return self.topology.n

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self.topology.edges

    @property
    def entrance(self) -> Optional[int]:
        return None if self.leads is None else self.leads[0]

    @property
    def exit(self) -> Optional[int]:
        return None if self.leads is None else self.leads[1]

    @property
    def total_length(self) -> float:
        return float(sum(self.lengths))

    def length(self, i: int, j: int) -> float:
        return self.lengths[self.topology.edges.index((min(i, j), max(i, j)))]

    def lead_degree(self, i: int) -> int:
        """Degree of ``i`` counting an attached lead."""
        return self.topology.degree(i) + (1 if self.leads is not None and i in self.leads else 0)

    def closed(self) -> "MetricGraph":
        return MetricGraph(self.topology, self.lengths, None)

    def with_leads(self, entrance: int, exit: int) -> "MetricGraph":
        return MetricGraph(self.topology, self.lengths, (entrance, exit))

    @cached_property
    def basis(self) -> "BondBasis":
        return bond_basis(self)


def metric_graph(n, edges, lengths, leads=None) -> MetricGraph:
    topo = build_discrete_graph(n, edges)
    if np.isscalar(lengths):
        lengths = [lengths] * len(topo.edges)
    return MetricGraph(topo, tuple(float(x) for x in lengths), None if leads is None else tuple(leads))


@dataclass(frozen=True)
class BondBasis:
    bonds: tuple[Bond, ...]
    lengths: np.ndarray = field(repr=False, compare=False)

    @cached_property
    def _index(self) -> dict[Bond, int]:
        return {b: idx for idx, b in enumerate(self.bonds)}

    def __len__(self):
        return len(self.bonds)

    def index(self, tail: int, head: int) -> int:
        try:
            return self._index[(tail, head)]
        except KeyError:
            raise GraphConstructionError(f"no bond {tail}->{head}: vertices not adjacent") from None

    @staticmethod
    def reverse(b: int) -> int:
        return b ^ 1

    def tail(self, b: int) -> int:
        return self.bonds[b][0]

    def head(self, b: int) -> int:
        return self.bonds[b][1]

    def edge(self, b: int) -> int:
        return b // 2

    def outgoing(self, v: int) -> list[int]:
        return [b for b, (t, _) in enumerate(self.bonds) if t == v]

    def incoming(self, v: int) -> list[int]:
        return [b for b, (_, h) in enumerate(self.bonds) if h == v]

    def label(self, b: int) -> str:
        t, h = self.bonds[b]
        return f"{t}>{h}"


def bond_basis(g: MetricGraph) -> BondBasis:
    bonds = []
    lengths = []
    for (i, j), ell in zip(g.edges, g.lengths):
        bonds += [(i, j), (j, i)]
        lengths += [ell, ell]
    arr = np.array(lengths, dtype=float)
    arr.setflags(write=False)
    return BondBasis(tuple(bonds), arr)


# ---------------------------------------------------------------------------
# common families
# ---------------------------------------------------------------------------

def interval(length=1.0, leads=None) -> MetricGraph:
    return metric_graph(2, [(1, 2)], [length], leads)


def star_graph(n: int, lengths=1.0, leads=None) -> MetricGraph:
    """Star ``S_n``: centre 1 joined to leaves ``2..n`` (``n - 1`` edges)."""
    if n < 2:
        raise GraphConstructionError("a star needs at least 2 vertices")
    return metric_graph(n, [(1, j) for j in range(2, n + 1)], lengths, leads)


def cycle_graph(n: int, lengths=1.0, leads=None) -> MetricGraph:
    if n < 3:
        raise GraphConstructionError("a simple cycle needs at least 3 vertices")
    edges = [(j, j + 1) for j in range(1, n)] + [(1, n)]
    return metric_graph(n, edges, lengths, leads)


def complete_graph(n: int, lengths=1.0, leads=None) -> MetricGraph:
    edges = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return metric_graph(n, edges, lengths, leads)

"""Reading graph description files.

The format is YAML (JSON is accepted as a subset)::

    graph: {n: 3}
    edges:
      - {i: 1, j: 2, length: 1.0}
      - {i: 1, j: 3, length: 1.7}
    vertices:
      - {id: 1, bc: kirchhoff}
      - {id: 2, bc: neumann}
      - id: 3
        bc: general
        A: [[[1, 0]]]          # complex entries as [re, im]
        B: [[[0, 0]]]
    leads: {entrance: 1, exit: 3}     # optional
    units: {hbar: 1.0, mass: 0.5}     # optional

Vertices without an entry get the Kirchhoff condition.  A ``general``
condition at a vertex carrying a lead must have the lead-augmented size.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from .errors import QuantumGraphError
from .graph import MetricGraph, build_discrete_graph
from .scattering import UnitsConvention
from .vertex import VertexCondition


class GraphSpecError(QuantumGraphError):
    def __init__(self, path, section, entry, message, line=None):
        where = f"{path}"
        if line is not None:
            where += f":{line}"
        where += f": [{section}]"
        if entry is not None:
            where += f" entry {entry}"
        super().__init__(f"{where}: {message}")
        self.path, self.section, self.entry, self.line = path, section, entry, line


@dataclass(frozen=True)
class GraphSpec:
    graph: MetricGraph
    bcs: dict[int, VertexCondition]
    units: UnitsConvention
    path: Optional[str] = None


def _line_of(root, section, index=None):
    """1-based source line of ``section`` (or its ``index``-th item) in a composed YAML tree."""
    if not isinstance(root, yaml.MappingNode):
        return None
    for key, value in root.value:
        if key.value == section:
            if index is not None and isinstance(value, yaml.SequenceNode) and index < len(value.value):
                return value.value[index].start_mark.line + 1
            return value.start_mark.line + 1
    return None


def _complex_matrix(raw, what):
    try:
        arr = np.array(raw, dtype=float)
    except (TypeError, ValueError):
        raise ValueError(f"{what} must be a matrix of [re, im] pairs") from None
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{what} must be a square matrix of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def parse_graph_spec(text: str, path: str = "<string>") -> GraphSpec:
    try:
        data = yaml.safe_load(text)
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise GraphSpecError(path, "document", None, f"not valid YAML: {exc}",
                             None if mark is None else mark.line + 1) from None
    if not isinstance(data, dict):
        raise GraphSpecError(path, "document", None, "expected a mapping at top level")

    def fail(section, entry, message, index=None):
        raise GraphSpecError(path, section, entry, message, _line_of(root, section, index))

    graph = data.get("graph")
    if not isinstance(graph, dict) or "n" not in graph:
        fail("graph", None, "missing vertex count 'n'")
    n = graph["n"]
    if not isinstance(n, int) or n < 1:
        fail("graph", None, f"n must be a positive integer, got {n!r}")

    raw_edges = data.get("edges")
    if not isinstance(raw_edges, list) or not raw_edges:
        fail("edges", None, "expected a non-empty list of {i, j, length}")
    pairs, lengths = [], []
    for idx, e in enumerate(raw_edges):
        label = f"#{idx + 1}"
        if not isinstance(e, dict) or not {"i", "j", "length"} <= set(e):
            fail("edges", label, "each edge needs i, j and length", idx)
        label = f"#{idx + 1} {{{e['i']},{e['j']}}}"
        try:
            ell = float(e["length"])
        except (TypeError, ValueError):
            fail("edges", label, f"length {e['length']!r} is not a number", idx)
        if not (np.isfinite(ell) and ell > 0):
            fail("edges", label, f"length must be finite and > 0, got {e['length']!r}", idx)
        pairs.append((e["i"], e["j"]))
        lengths.append(ell)
    try:
        topo = build_discrete_graph(n, pairs)
    except QuantumGraphError as exc:
        fail("edges", None, str(exc))

    leads = None
    if data.get("leads") is not None:
        raw = data["leads"]
        if not isinstance(raw, dict) or not {"entrance", "exit"} <= set(raw):
            fail("leads", None, "leads need both 'entrance' and 'exit'")
        leads = (raw["entrance"], raw["exit"])
    try:
        g = MetricGraph(topo, tuple(lengths), leads)
    except QuantumGraphError as exc:
        fail("leads", None, str(exc))

    bcs: dict[int, VertexCondition] = {}
    for idx, v in enumerate(data.get("vertices") or []):
        if not isinstance(v, dict) or "id" not in v or "bc" not in v:
            fail("vertices", f"#{idx + 1}", "each vertex entry needs id and bc", idx)
        vid = v["id"]
        label = f"#{idx + 1} (vertex {vid})"
        if not isinstance(vid, int) or not 1 <= vid <= n:
            fail("vertices", label, f"vertex id out of range 1..{n}", idx)
        if vid in bcs:
            fail("vertices", label, "duplicate boundary condition entry", idx)
        kind = str(v["bc"]).lower()
        try:
            if kind == "general":
                if "A" not in v or "B" not in v:
                    raise ValueError("general bc requires both A and B")
                A = _complex_matrix(v["A"], "A")
                B = _complex_matrix(v["B"], "B")
                if A.shape[0] != g.lead_degree(vid):
                    raise ValueError(
                        f"A, B have dimension {A.shape[0]} but the vertex degree (with leads) is {g.lead_degree(vid)}"
                    )
                bcs[vid] = VertexCondition("general", A, B)
            else:
                bcs[vid] = VertexCondition(kind)
        except (QuantumGraphError, ValueError) as exc:
            fail("vertices", label, str(exc), idx)
    for vid in topo.vertices:
        bcs.setdefault(vid, VertexCondition("kirchhoff"))

    units = UnitsConvention()
    if data.get("units") is not None:
        raw = data["units"]
        try:
            units = UnitsConvention(float(raw.get("hbar", 1.0)), float(raw.get("mass", 0.5)))
        except (AttributeError, TypeError, ValueError) as exc:
            fail("units", None, str(exc))
    return GraphSpec(g, bcs, units, path)


def load_graph_spec(path) -> GraphSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise GraphSpecError(str(path), "file", None, f"cannot read: {exc.strerror}") from None
    return parse_graph_spec(text, str(path))


def dump_graph_spec(spec_graph: MetricGraph, bcs: dict[int, VertexCondition], units: Optional[UnitsConvention] = None) -> str:
    """Serialise a graph with named or general conditions back to the file format."""
    def cm(M):
        return [[[float(x.real), float(x.imag)] for x in row] for row in np.asarray(M)]

    doc = {
        "graph": {"n": spec_graph.n},
        "edges": [{"i": i, "j": j, "length": float(ell)} for (i, j), ell in zip(spec_graph.edges, spec_graph.lengths)],
        "vertices": [],
    }
    for v in spec_graph.topology.vertices:
        bc = bcs[v]
        entry = {"id": v, "bc": bc.kind}
        if bc.kind == "general":
            entry["A"], entry["B"] = cm(bc.A), cm(bc.B)
        doc["vertices"].append(entry)
    if spec_graph.leads is not None:
        doc["leads"] = {"entrance": spec_graph.leads[0], "exit": spec_graph.leads[1]}
    if units is not None:
        doc["units"] = {"hbar": units.hbar, "mass": units.mass}
    return yaml.safe_dump(doc, sort_keys=False)

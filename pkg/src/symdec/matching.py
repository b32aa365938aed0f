"""Matching decoder built on a symmetry's defect-parity conservation law.

Detection events are paired by exact minimum-weight perfect matching on
shortest-path distances through the detector graph, and each pair's path
is turned back into a Pauli correction.
"""

from __future__ import annotations

import math
import threading
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from symdec.blossom import Matching, NoPerfectMatching, min_weight_perfect_matching
from symdec.codes import StabilizerCode
from symdec.detector import DetectorGraph, NotMatchable, build_detector_graph
from symdec.pauli import PauliString
from symdec.symmetry import CleaningResult, Symmetry, default_symmetries
from symdec.syndrome import DetectionEvents
from symdec.unionfind import grow_clusters, peel

__all__ = [
    "NotMatchable",
    "ParityViolation",
    "DetectorGraph",
    "DecodingGraph",
    "SectorResult",
    "DecodeResult",
    "build_detector_graph",
    "build_matching_graph",
    "mwpm",
    "correction_from_matching",
    "decode",
    "decode_with_symmetries",
    "commutator_via_boundary",
    "SymmetryDecoder",
]

DEFAULT_NEAREST = 20
FULL_GRAPH_LIMIT = 40


class ParityViolation(RuntimeError):
    """Odd number of events for a symmetry that has no boundary."""


@dataclass
class DecodingGraph:
    """Complete graph on events, plus one boundary twin per event when Σ has a boundary.

    Vertex ``i < len(event_nodes)`` is an event; vertex ``len + i`` is the
    boundary twin of event ``i``. Twins pair with each other at no cost,
    so any number of events can be sent to the boundary.
    """

    detector: DetectorGraph
    event_nodes: list[int]
    edges: list[tuple[int, int, float]]
    num_vertices: int
    boundary_twins: bool = False
    boundary_distance: list[float] = field(default_factory=list)


def build_matching_graph(detector: DetectorGraph, events: DetectionEvents | Sequence,
                         nearest: int | None = DEFAULT_NEAREST) -> DecodingGraph:
    """Shortest-path distances between events (and to the boundary).

    When there are more than :data:`FULL_GRAPH_LIMIT` events only edges to
    each event's ``nearest`` neighbours are kept; ``nearest=None`` always
    builds the full graph.
    """
    pairs = events.events if isinstance(events, DetectionEvents) else events
    nodes = sorted(detector.node(g, t) for g, t in pairs if detector.has_member(g))
    k = len(nodes)
    if k == 0:
        return DecodingGraph(detector, [], [], 0, detector.boundary is not None)
    if detector.boundary is None and k % 2:
        raise ParityViolation(f"{k} events on a symmetry without a boundary")
    dist = [detector.shortest_paths(u)[0] for u in nodes]
    bdist = [float(d[detector.boundary]) if detector.boundary is not None else math.inf for d in dist]
    keep_all = nearest is None or k <= FULL_GRAPH_LIMIT
    allowed = None
    if not keep_all:
        allowed = set()
        for i in range(k):
            row = sorted(range(k), key=lambda j: (dist[i][nodes[j]], j))
            for j in row[1:nearest + 1]:
                allowed.add((min(i, j), max(i, j)))
    edges = []
    for i in range(k):
        for j in range(i + 1, k):
            if allowed is not None and (i, j) not in allowed:
                continue
            w = float(dist[i][nodes[j]])
            if not math.isfinite(w):
                continue
            if w >= bdist[i] + bdist[j]:
                continue  # sending both to the boundary is never worse
            edges.append((i, j, w))
    twins = detector.boundary is not None
    if twins:
        for i in range(k):
            if math.isfinite(bdist[i]):
                edges.append((i, k + i, bdist[i]))
        for i in range(k):
            for j in range(i + 1, k):
                edges.append((k + i, k + j, 0.0))
    return DecodingGraph(detector, nodes, edges, 2 * k if twins else k, twins, bdist)


def mwpm(graph: DecodingGraph) -> Matching:
    """Exact minimum-weight perfect matching of a decoding graph."""
    try:
        return min_weight_perfect_matching(graph.num_vertices, graph.edges)
    except NoPerfectMatching:
        k = len(graph.event_nodes)
        if k <= FULL_GRAPH_LIMIT or not graph.edges:
            raise
    # a truncated graph can lack a perfect matching: retry on the full graph
    full = build_matching_graph(graph.detector, [graph.detector.site(u) for u in graph.event_nodes], None)
    graph.edges, graph.num_vertices = full.edges, full.num_vertices
    return min_weight_perfect_matching(graph.num_vertices, graph.edges)


def _boundary_side(code: StabilizerCode, payload: PauliString | None) -> str:
    if payload is None or payload.is_identity():
        return "boundary"
    rows = [code.qubit_coords[q][0] for q in payload.qubits]
    cols = [code.qubit_coords[q][1] for q in payload.qubits]
    top_r = max(r for r, _ in code.qubit_coords)
    top_c = max(c for _, c in code.qubit_coords)
    if code.name in ("surface", "xzzx"):
        if min(rows) == 0:
            return "top"
        if max(rows) == top_r:
            return "bottom"
    if min(cols) == 0:
        return "left"
    if max(cols) == top_c:
        return "right"
    return "boundary"


@dataclass
class PathRecord:
    """One matched pair: its detector nodes, the data payload, and whether it ends on the boundary."""

    nodes: tuple[int, int | None]
    payload: PauliString
    to_boundary: bool
    side: str | None = None


def _pair_paths(detector: DetectorGraph, graph: DecodingGraph, matching: Matching) -> list[PathRecord]:
    k = len(graph.event_nodes)
    n = detector.code.n
    out = []
    for a, b in matching.pairs:
        if a >= k and b >= k:
            continue
        if b >= k:
            src = graph.event_nodes[a]
            path = detector.path_edges(src, detector.boundary)
            target = None
        else:
            src, target = graph.event_nodes[a], graph.event_nodes[b]
            path = detector.path_edges(src, target)
        x = z = 0
        last_payload = None
        for e in path:
            if e.payload is not None:
                x ^= e.payload.x
                z ^= e.payload.z
                if detector.boundary in (e.u, e.v):
                    last_payload = e.payload
        payload = PauliString(n, x, z)
        side = _boundary_side(detector.code, last_payload) if target is None else None
        out.append(PathRecord((src, target), payload, target is None, side))
    return out


def correction_from_matching(detector: DetectorGraph, graph: DecodingGraph,
                             matching: Matching) -> tuple[PauliString, Counter]:
    """Product of the data payloads along every matched path.

    Measurement-flip edges carry no Pauli. Also returns how many matched
    paths ended on each boundary side.
    """
    corr = PauliString(detector.code.n)
    counts: Counter = Counter()
    for rec in _pair_paths(detector, graph, matching):
        corr = corr * rec.payload
        if rec.to_boundary:
            counts[rec.side] += 1
    return corr, counts


@dataclass
class SectorResult:
    sigma: Symmetry
    matching: Matching | None
    paths: list[PathRecord]
    correction: PauliString
    boundary_counts: Counter


@dataclass
class DecodeResult:
    correction: PauliString
    sectors: list[SectorResult]


class SymmetryDecoder:
    """Detector graphs for a list of symmetries, built once and reused per shot.

    ``method`` is ``"mwpm"`` or ``"unionfind"``. The per-symmetry
    corrections are multiplied together.
    """

    def __init__(self, code: StabilizerCode, channel, symmetries: Sequence[Symmetry] | None = None,
                 method: str = "mwpm", nearest: int | None = DEFAULT_NEAREST):
        if method not in ("mwpm", "unionfind"):
            raise ValueError(f"unknown decoding method {method!r}")
        self.code = code
        self.channel = channel
        self.symmetries = list(default_symmetries(code) if symmetries is None else symmetries)
        self.method = method
        self.nearest = nearest
        self.detectors = [build_detector_graph(code, channel, s) for s in self.symmetries]

    def decode_full(self, events: DetectionEvents) -> DecodeResult:
        total = PauliString(self.code.n)
        sectors = []
        for det in self.detectors:
            if self.method == "unionfind":
                corr = peel(grow_clusters(det, events))
                sectors.append(SectorResult(det.sigma, None, [], corr, Counter()))
            else:
                graph = build_matching_graph(det, events, self.nearest)
                matching = mwpm(graph)
                paths = _pair_paths(det, graph, matching)
                corr = PauliString(self.code.n)
                counts: Counter = Counter()
                for rec in paths:
                    corr = corr * rec.payload
                    if rec.to_boundary:
                        counts[rec.side] += 1
                sectors.append(SectorResult(det.sigma, matching, paths, corr, counts))
            total = total * corr
        return DecodeResult(total, sectors)

    def decode(self, events: DetectionEvents) -> PauliString:
        return self.decode_full(events).correction


_decoder_cache: dict = {}
_decoder_lock = threading.Lock()


def _cached_decoder(code, channel, symmetries, method) -> SymmetryDecoder:
    key = (code, channel, None if symmetries is None else tuple(symmetries), method)
    dec = _decoder_cache.get(key)
    if dec is None:
        dec = SymmetryDecoder(code, channel, symmetries, method)
        with _decoder_lock:
            if len(_decoder_cache) > 64:
                _decoder_cache.clear()
            _decoder_cache[key] = dec
    return dec


def _as_events(events) -> DetectionEvents:
    if isinstance(events, DetectionEvents):
        return events
    pairs = [(int(e), 0) if isinstance(e, (int, np.integer)) else (int(e[0]), int(e[1])) for e in events]
    rounds = 1 + max((t for _, t in pairs), default=0)
    return DetectionEvents(frozenset(pairs), rounds)


def decode_with_symmetries(code: StabilizerCode, channel, events, symmetries: Sequence[Symmetry] | None = None,
                           method: str = "mwpm") -> DecodeResult:
    return _cached_decoder(code, channel, symmetries, method).decode_full(_as_events(events))


def decode(code: StabilizerCode, channel, events, method: str = "mwpm") -> PauliString:
    """Correction for ``events`` from the code's default decoding halves.

    CSS codes split into Z-type and X-type problems; the XZZX code into its
    two face colours, which is the same split seen through the Hadamard
    relabelling.
    """
    return decode_with_symmetries(code, channel, events, None, method).correction


def commutator_via_boundary(result: DecodeResult, target) -> int:
    """Whether the decoded error anticommutes with a cleaned logical.

    ``target`` is the :class:`CleaningResult` (or its logical). Counts the
    matched paths, in symmetries carrying a boundary operator, whose payload
    crosses the logical's support an odd number of times; paths into the
    boundary on the logical's side are the ones that do.
    """
    logical = target.logical if isinstance(target, CleaningResult) else target
    relevant = [s for s in result.sectors if s.sigma.boundary_member is not None]
    if not relevant:
        raise ValueError("no decoded symmetry carries a designated boundary")
    parity = 0
    for sector in relevant:
        if sector.matching is None:
            parity ^= int(not sector.correction.commutes(logical))
            continue
        for rec in sector.paths:
            parity ^= int(not rec.payload.commutes(logical))
    return parity

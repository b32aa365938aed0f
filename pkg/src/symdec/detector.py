"""Detector graphs: elementary faults as edges between symmetry members.

For a symmetry every elementary fault flips at most two of its members, so
faults are edges of a graph whose nodes are ``(generator, round)`` sites,
with the boundary operator (if the symmetry has one) as one extra node.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from symdec.blossom import NoPerfectMatching
from symdec.codes import StabilizerCode
from symdec.noise import (
    BallisticChannel,
    MeasurementFlip,
    PauliChannel,
    PhenomenologicalChannel,
    data_mechanisms,
)
from symdec.pauli import PauliString
from symdec.symmetry import Symmetry, default_symmetries
from symdec.syndrome import syndrome_bits

__all__ = [
    "NotMatchable",
    "DetectorEdge",
    "DetectorGraph",
    "build_detector_graph",
    "fault_weight",
    "MIN_WEIGHT",
]

# weights of faults with probability >= 1/2 are clamped to this floor
MIN_WEIGHT = 1e-9


class NotMatchable(ValueError):
    """An elementary fault flips three or more members of the symmetry."""


@dataclass(frozen=True)
class DetectorEdge:
    u: int
    v: int
    weight: float
    probability: float
    payload: PauliString | None = None
    flip: MeasurementFlip | None = None


def fault_weight(prob: float) -> float:
    """``-log(p / (1 - p))``, floored at :data:`MIN_WEIGHT`."""
    if prob >= 0.5:
        return MIN_WEIGHT
    return max(MIN_WEIGHT, math.log((1.0 - prob) / prob))


class DetectorGraph:
    """One node per ``(generator, round)`` member site plus an optional boundary node."""

    def __init__(self, code: StabilizerCode, sigma: Symmetry, rounds: int,
                 edges: list[DetectorEdge], has_boundary: bool):
        self.code = code
        self.sigma = sigma
        self.rounds = rounds
        self.members = tuple(sigma.generator_members)
        self._pos = {g: i for i, g in enumerate(self.members)}
        self.boundary = len(self.members) * rounds if has_boundary else None
        self.num_nodes = len(self.members) * rounds + (1 if has_boundary else 0)
        self.edges = edges
        self.adjacency: list[list[int]] = [[] for _ in range(self.num_nodes)]
        best: dict[tuple[int, int], int] = {}
        for k, e in enumerate(edges):
            self.adjacency[e.u].append(k)
            if e.v != e.u:
                self.adjacency[e.v].append(k)
            key = (min(e.u, e.v), max(e.u, e.v))
            if key not in best or e.weight < edges[best[key]].weight:
                best[key] = k
        self._best = best
        rows = [a for a, _ in best] + [b for _, b in best]
        cols = [b for _, b in best] + [a for a, _ in best]
        data = [edges[k].weight for k in best.values()] * 2
        self._csr = csr_matrix((data, (rows, cols)), shape=(self.num_nodes, self.num_nodes))
        self._sp: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        self._lock = threading.Lock()

    def node(self, generator: int, round: int = 0) -> int:
        return round * len(self.members) + self._pos[generator]

    def site(self, node: int) -> tuple[int, int] | None:
        if node == self.boundary:
            return None
        t, i = divmod(node, len(self.members))
        return self.members[i], t

    def has_member(self, generator: int) -> bool:
        return generator in self._pos

    def shortest_paths(self, source: int) -> tuple[np.ndarray, np.ndarray]:
        """Distances and predecessors from ``source`` (memoised per source)."""
        hit = self._sp.get(source)
        if hit is None:
            dist, pred = dijkstra(self._csr, directed=False, indices=source, return_predecessors=True)
            hit = (dist, pred)
            with self._lock:
                self._sp[source] = hit
        return hit

    def path_edges(self, source: int, target: int) -> list[DetectorEdge]:
        _, pred = self.shortest_paths(source)
        out = []
        node = target
        while node != source:
            prev = int(pred[node])
            if prev < 0:
                raise NoPerfectMatching(f"node {target} unreachable from {source}")
            out.append(self.edges[self._best[(min(prev, node), max(prev, node))]])
            node = prev
        return out


def _projection_masks(code: StabilizerCode, sigma: Symmetry) -> tuple[int, int]:
    """Bits of a fault to keep, as (x mask, z mask).

    On a qubit where every member acts as Z only the X component is seen,
    where every member acts as X only the Z component is seen; anything
    else keeps the whole fault.
    """
    all_bits = (1 << code.n) - 1
    if not sigma.project:
        return all_bits, all_bits
    xs = zs = 0
    for op in sigma.operators(code):
        xs |= op.x
        zs |= op.z
    only_z = zs & ~xs
    only_x = xs & ~zs
    keep_x = all_bits & ~only_x
    keep_z = all_bits & ~only_z
    return keep_x, keep_z


def _data_faults(code, channel, sigma, ops, aux_ops):
    """Merged data faults as ``(member bits, aux parity, probability, payload)``."""
    keep_x, keep_z = _projection_masks(code, sigma)
    out = []
    for mechanism in data_mechanisms(channel, code):
        merged: dict[tuple[int, int], list] = {}
        for op, prob in mechanism:
            proj = PauliString(code.n, op.x & keep_x, op.z & keep_z)
            bits = syndrome_bits(ops, proj)
            aux = sum(1 for a in aux_ops if not a.commutes(proj)) & 1
            if not bits and not aux:
                continue
            key = (bits, aux)
            if key in merged:
                merged[key][0] += prob
            else:
                merged[key] = [prob, proj]
        for (bits, aux), (prob, proj) in merged.items():
            out.append((bits, aux, prob, proj))
    return out


def build_detector_graph(code: StabilizerCode, channel, sigma: Symmetry | None = None,
                         rounds: int | None = None) -> DetectorGraph:
    """Unit edges for every elementary fault of ``channel``, as seen by ``sigma``."""
    if sigma is None:
        sigma = default_symmetries(code)[0]
    members = sigma.generator_members
    if len(set(members)) != len(members):
        raise NotMatchable("repeated members cannot be matched on a detector graph")
    if isinstance(channel, PhenomenologicalChannel):
        rounds = channel.rounds if rounds is None else rounds
        q = channel.q
    elif isinstance(channel, (PauliChannel, BallisticChannel)):
        rounds = 1 if rounds is None else rounds
        q = 0.0
    else:
        raise TypeError(f"unsupported channel {type(channel).__name__}")
    ops = [code.generators[g] for g in members]
    aux_ops = sigma.aux_members
    m = len(members)
    has_boundary = bool(aux_ops)
    boundary = m * rounds
    edges: list[DetectorEdge] = []
    for bits, aux, prob, payload in _data_faults(code, channel, sigma, ops, aux_ops):
        hit = [i for i in range(m) if (bits >> i) & 1]
        if len(hit) + aux > 2:
            raise NotMatchable(f"fault {payload} flips {len(hit) + aux} members of {sigma.label or 'the symmetry'}")
        if len(hit) + aux == 1:
            raise NotMatchable(f"fault {payload} flips a single member and the symmetry has no boundary")
        if not hit:
            continue  # flips the boundary operator twice: invisible
        w = fault_weight(prob)
        for t in range(rounds):
            u = t * m + hit[0]
            v = t * m + hit[1] if len(hit) == 2 else boundary
            edges.append(DetectorEdge(u, v, w, prob, payload))
    if q > 0:
        w = fault_weight(q)
        for t in range(rounds - 1):
            for i, g in enumerate(members):
                edges.append(DetectorEdge(t * m + i, (t + 1) * m + i, w, q, None, MeasurementFlip(g, t)))
    return DetectorGraph(code, sigma, rounds, edges, has_boundary)

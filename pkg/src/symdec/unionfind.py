"""Union-find decoder: grow odd clusters by half edges, then peel a spanning forest."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from symdec.detector import DetectorGraph
from symdec.pauli import PauliString
from symdec.syndrome import DetectionEvents

__all__ = ["ClusterState", "grow_clusters", "peel", "decode_unionfind"]


@dataclass
class ClusterState:
    """Disjoint-set forest over detector nodes after growth.

    ``support[k]`` counts grown halves of edge ``k`` (2 = fully grown).
    Roots carry the defect parity and boundary contact of their cluster.
    """

    detector: DetectorGraph
    defects: set[int]
    parent: list[int]
    size: list[int]
    parity: list[int]
    touches_boundary: list[bool]
    support: list[int]
    members: dict[int, list[int]] = field(default_factory=dict)
    rounds_grown: int = 0

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if (self.size[ra], -ra) < (self.size[rb], -rb):
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.parity[ra] ^= self.parity[rb]
        self.touches_boundary[ra] = self.touches_boundary[ra] or self.touches_boundary[rb]
        self.members.setdefault(ra, [ra]).extend(self.members.pop(rb, [rb]))
        return ra

    def frozen(self, root: int) -> bool:
        return self.parity[root] == 0 or self.touches_boundary[root]

    def clusters(self) -> dict[int, list[int]]:
        """Nodes of every cluster that holds at least one defect, by root."""
        roots = {self.find(u) for u in self.defects}
        return {r: sorted(self.members.get(r, [r])) for r in sorted(roots)}


def grow_clusters(detector: DetectorGraph, events: DetectionEvents) -> ClusterState:
    """Grow every odd, boundary-free cluster by half an edge per round until all freeze.

    Clusters grow smallest first, ties by lowest root; merges happen after
    each full round so the schedule does not depend on processing order.
    """
    n = detector.num_nodes
    defects: set[int] = set()
    for g, t in events.events:
        if detector.has_member(g):
            defects ^= {detector.node(g, t)}
    state = ClusterState(
        detector=detector,
        defects=defects,
        parent=list(range(n)),
        size=[1] * n,
        parity=[1 if u in defects else 0 for u in range(n)],
        touches_boundary=[u == detector.boundary for u in range(n)],
        support=[0] * len(detector.edges),
    )
    edges = detector.edges
    while True:
        active = sorted({state.find(u) for u in defects}, key=lambda r: (state.size[r], r))
        active = [r for r in active if not state.frozen(r)]
        if not active:
            return state
        state.rounds_grown += 1
        fused = []
        grew = False
        for root in active:
            for u in state.members.get(root, [root]):
                for k in detector.adjacency[u]:
                    if state.support[k] >= 2:
                        continue
                    e = edges[k]
                    other = e.v if e.u == u else e.u
                    if state.find(other) == root:
                        continue
                    state.support[k] += 1
                    grew = True
                    if state.support[k] == 2:
                        fused.append(k)
        if not grew:
            raise RuntimeError("an odd cluster cannot grow any further")
        for k in fused:
            state.union(edges[k].u, edges[k].v)


def peel(state: ClusterState) -> PauliString:
    """Correction from a spanning forest of each frozen cluster, peeled leaf-inward."""
    det = state.detector
    edges = det.edges
    x = z = 0
    for root, nodes in state.clusters().items():
        if not state.frozen(root):
            raise RuntimeError("peeling needs every cluster frozen")
        inside = set(nodes)
        start = det.boundary if det.boundary in inside else nodes[0]
        parent_edge = {start: None}
        order = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for k in det.adjacency[u]:
                if state.support[k] < 2:
                    continue
                e = edges[k]
                w = e.v if e.u == u else e.u
                if w in inside and w not in parent_edge:
                    parent_edge[w] = k
                    order.append(w)
                    queue.append(w)
        marked = {u for u in nodes if u in state.defects}
        for u in reversed(order[1:]):
            if u not in marked:
                continue
            k = parent_edge[u]
            e = edges[k]
            if e.payload is not None:
                x ^= e.payload.x
                z ^= e.payload.z
            marked.discard(u)
            p = e.v if e.u == u else e.u
            marked ^= {p}
        marked.discard(det.boundary)
        assert not marked, "peeling left a defect unpaired"
    return PauliString(det.code.n, x, z)


def decode_unionfind(detector: DetectorGraph, events: DetectionEvents) -> PauliString:
    return peel(grow_clusters(detector, events))

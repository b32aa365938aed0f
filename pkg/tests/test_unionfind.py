import itertools
import time

import numpy as np
import pytest

from symdec.codes import build_surface_code, logical_class
from symdec.detector import build_detector_graph
from symdec.matching import SymmetryDecoder
from symdec.noise import PauliChannel, PhenomenologicalChannel, sample
from symdec.pauli import PauliString
from symdec.symmetry import sector_symmetry
from symdec.syndrome import DetectionEvents, detection_events, extract_syndrome
from symdec.unionfind import decode_unionfind, grow_clusters, peel

BITFLIP = PauliChannel.bitflip(0.1)


@pytest.fixture(scope="module")
def det3(surface3):
    return build_detector_graph(surface3, BITFLIP, sector_symmetry(surface3, "Z"))


def events_of(code, error):
    return DetectionEvents.from_syndrome(extract_syndrome(code, error))


def test_empty(det3):
    state = grow_clusters(det3, DetectionEvents(frozenset()))
    assert state.clusters() == {} and state.rounds_grown == 0
    assert peel(state).is_identity()


def test_adjacent_pair_one_round(det3, surface3):
    e = PauliString.single(9, 4, "X")
    state = grow_clusters(det3, events_of(surface3, e))
    assert state.rounds_grown == 1
    [(root, nodes)] = state.clusters().items()
    assert len(nodes) == 2 and state.parity[root] == 0
    assert peel(state) == e


def test_boundary_freeze(det3, surface3):
    e = PauliString.single(9, 1, "X")
    state = grow_clusters(det3, events_of(surface3, e))
    [root] = state.clusters()
    assert state.touches_boundary[root] and state.frozen(root)
    c = peel(state)
    assert c.weight == 1 and logical_class(surface3, c * e) == ("I",)


def test_distance_guarantee_d5(surface5):
    dec = SymmetryDecoder(surface5, PauliChannel.depolarizing(0.1), method="unionfind")
    for w in (1, 2):
        for qs in itertools.combinations(range(25), w):
            for labs in itertools.product("XYZ", repeat=w):
                e = PauliString.from_support(25, dict(zip(qs, labs)))
                c = dec.decode(events_of(surface5, e))
                assert all(x == "I" for x in logical_class(surface5, c * e))


def test_clears_syndrome_random(surface5, rng):
    det = build_detector_graph(surface5, BITFLIP, sector_symmetry(surface5, "Z"))
    for _ in range(300):
        e = PauliString(25, int(rng.integers(0, 2**25)) & int(rng.integers(0, 2**25)), 0)
        c = decode_unionfind(det, events_of(surface5, e))
        assert extract_syndrome(surface5, c * e).defects == frozenset()


def test_phenomenological(surface3, rng):
    ch = PhenomenologicalChannel(PauliChannel.bitflip(0.05), rounds=4)
    det = build_detector_graph(surface3, ch, sector_symmetry(surface3, "Z"))
    for _ in range(200):
        s = sample(ch, surface3, rng)
        c = decode_unionfind(det, detection_events(surface3, s))
        assert extract_syndrome(surface3, c * s.final_error).defects == frozenset()


def test_union_find_structure(det3, surface3):
    e = PauliString.from_literal(9, "X3 X5")
    state = grow_clusters(det3, events_of(surface3, e))
    for u in range(det3.num_nodes):
        r = state.find(u)
        assert state.parent[r] == r and state.find(r) == r
    assert all(state.frozen(r) for r in state.clusters())


def test_scaling_sanity():
    ch = PauliChannel.bitflip(0.02)

    def per_shot(d, shots):
        code = build_surface_code(d)
        det = build_detector_graph(code, ch, sector_symmetry(code, "Z"))
        rng = np.random.default_rng(d)
        evs = [events_of(code, sample(ch, code, rng).final_error) for _ in range(shots)]
        start = time.perf_counter()
        for ev in evs:
            decode_unionfind(det, ev)
        return (time.perf_counter() - start) / shots

    small, large = per_shot(7, 200), per_shot(21, 50)
    # nine times the qubits; allow generous slack over linear for timing noise
    assert large < 40 * small

import itertools

import numpy as np
import pytest

from symdec.codes import build_surface_code
from symdec.noise import ErrorSample, MeasurementFlip, PauliChannel, PhenomenologicalChannel, sample
from symdec.pauli import DimensionError, PauliString
from symdec.syndrome import (
    DetectionEvents,
    Syndrome,
    detection_events,
    events_from_json,
    events_to_json,
    extract_syndrome,
    syndrome_bits,
)


def X(n, q):
    return PauliString.single(n, q, "X")


def test_identity_empty(surface3):
    assert extract_syndrome(surface3, PauliString(9)).defects == frozenset()


def test_bulk_x_two_adjacent_faces(surface3):
    syn = extract_syndrome(surface3, X(9, 4))
    assert len(syn) == 2
    for g in syn.defects:
        assert g in surface3.z_indices
        assert 4 in surface3.generators[g].qubits


def test_boundary_qubits_single_defect(surface3):
    single = [q for q in range(9) if len(extract_syndrome(surface3, X(9, q))) == 1]
    # top and bottom rows of the rotated lattice
    assert single == [0, 1, 2, 6, 7, 8]


def test_linearity(surface5, rng):
    for _ in range(200):
        a = PauliString(25, int(rng.integers(0, 2**25)), int(rng.integers(0, 2**25)))
        b = PauliString(25, int(rng.integers(0, 2**25)), int(rng.integers(0, 2**25)))
        sa, sb = extract_syndrome(surface5, a), extract_syndrome(surface5, b)
        assert extract_syndrome(surface5, a * b).defects == sa.defects ^ sb.defects


def test_stabilizers_invisible(surface5):
    for g in surface5.generators:
        assert extract_syndrome(surface5, g).defects == frozenset()


def test_syndrome_bits_matches_commutes(surface3, rng):
    for _ in range(50):
        e = PauliString(9, int(rng.integers(0, 512)), int(rng.integers(0, 512)))
        bits = syndrome_bits(surface3.generators, e)
        for i, g in enumerate(surface3.generators):
            assert ((bits >> i) & 1) == (not g.commutes(e))


def test_aux_outcomes(surface3):
    b = PauliString.from_literal(9, "Z0 Z1 Z2")
    syn = extract_syndrome(surface3, X(9, 1), aux=[b])
    assert syn.aux[b] is True


def test_dimension_error(surface3):
    with pytest.raises(DimensionError):
        extract_syndrome(surface3, PauliString(4))


def test_no_fault_events(surface3):
    s = ErrorSample([PauliString(9)] * 3)
    assert detection_events(surface3, s).events == frozenset()


def test_measurement_flip_pair(surface3):
    s = ErrorSample([PauliString(9)] * 3, {MeasurementFlip(2, 1)})
    assert detection_events(surface3, s).events == {(2, 1), (2, 2)}


def test_data_error_space_like(surface3):
    e = X(9, 4)
    s = ErrorSample([PauliString(9), e, e])
    ev = detection_events(surface3, s)
    assert len(ev) == 2 and all(t == 1 for _, t in ev.events)
    assert ev.spacelike() == extract_syndrome(surface3, e).defects


def test_spacelike_equals_final_syndrome(surface3):
    ch = PhenomenologicalChannel(PauliChannel.bitflip(0.1), q=0.1, rounds=4)
    rng = np.random.default_rng(4)
    for _ in range(200):
        s = sample(ch, surface3, rng)
        ev = detection_events(surface3, s)
        assert ev.spacelike() == extract_syndrome(surface3, s.final_error).defects


def test_event_round_validation(surface3):
    with pytest.raises(ValueError):
        detection_events(surface3, ErrorSample([PauliString(9)], {MeasurementFlip(0, 3)}))


def test_from_syndrome():
    op = PauliString.from_literal(3, "Z0")
    ev = DetectionEvents.from_syndrome(Syndrome(frozenset({1}), {op: True}))
    assert ev.events == {(1, 0)} and ev.aux == {op: {0}}


def test_json_round_trip():
    ev = DetectionEvents(frozenset({(3, 0), (1, 2)}), 3)
    assert events_to_json(ev) == "[[1, 2], [3, 0]]"
    back = events_from_json(events_to_json(ev))
    assert back.events == ev.events and back.rounds == 3
    assert events_from_json("[0, 5]").events == {(0, 0), (5, 0)}


def test_exhaustive_event_structure():
    code = build_surface_code(3)
    rounds = 4
    m = len(code.generators)
    # every single measurement flip gives a time-adjacent pair
    for g, t in itertools.product(range(m), range(rounds - 1)):
        ev = detection_events(code, ErrorSample([PauliString(9)] * rounds, {MeasurementFlip(g, t)}))
        assert ev.events == {(g, t), (g, t + 1)}
    # every single data X at every round gives at most two same-round events
    for q, t in itertools.product(range(9), range(rounds)):
        errs = [PauliString(9)] * t + [X(9, q)] * (rounds - t)
        ev = detection_events(code, ErrorSample(errs))
        assert 1 <= len(ev) <= 2 and {r for _, r in ev.events} == {t}

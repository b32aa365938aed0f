import json
import math

import numpy as np
import pytest
from scipy.stats import binomtest

from symdec.codes import build_repetition_code, build_surface_code, build_xzzx_code
from symdec.harness import (
    CSV_HEADER,
    ExperimentConfig,
    ResultRow,
    derive_seed,
    find_crossing,
    rows_to_csv,
    run_point,
    run_sweep,
    symmetries_for,
    wilson,
)
from symdec.matching import ParityViolation, SymmetryDecoder
from symdec.noise import BallisticChannel, PauliChannel, PhenomenologicalChannel
from symdec.symmetry import Symmetry


def test_wilson_against_scipy():
    for k, n in [(0, 10), (3, 10), (28, 1000), (500, 1000), (10, 10)]:
        lo, hi = wilson(k, n)
        ci = binomtest(k, n).proportion_ci(confidence_level=0.95, method="wilson")
        assert lo == pytest.approx(ci.low, abs=1e-6) and hi == pytest.approx(ci.high, abs=1e-6)
    with pytest.raises(ValueError):
        wilson(0, 0)


def test_result_row_validation():
    with pytest.raises(ValueError):
        ResultRow(3, 0.1, 10, 11, 1.1, 0, 1)
    r = ResultRow.from_counts(3, 0.1, 100, 5)
    assert r.rate == 0.05 and r.lo95 < 0.05 < r.hi95


def test_zero_noise_never_fails(surface3):
    for ch in (PauliChannel.bitflip(0.0), PauliChannel.depolarizing(0.0),
               PhenomenologicalChannel(PauliChannel.bitflip(0.0), rounds=3)):
        assert run_point(surface3, ch, shots=300).failures == 0


def test_run_point_deterministic(surface3):
    ch = PauliChannel.bitflip(0.1)
    a = run_point(surface3, ch, shots=600, seed=5, timing=False)
    b = run_point(surface3, ch, shots=600, seed=5, timing=False)
    assert a == b and a.ns_per_shot is None
    assert run_point(surface3, ch, shots=10, seed=5).ns_per_shot > 0


def test_repetition_small_analytic():
    p = 0.1
    expect = 3 * p**2 * (1 - p) + p**3
    r = run_point(build_repetition_code(3), PauliChannel.bitflip(p), shots=20_000, seed=3)
    sigma = math.sqrt(expect * (1 - expect) / r.shots)
    assert abs(r.rate - expect) < 5 * sigma


def test_audit_catches_wrong_symmetry(surface3):
    # the bare Z faces are not a symmetry: boundary errors break their parity
    bare = Symmetry(tuple(surface3.z_indices))
    dec = SymmetryDecoder(surface3, PauliChannel.bitflip(0.3))
    dec.symmetries = [bare]
    from symdec.harness import _block_counts

    with pytest.raises(ParityViolation):
        _block_counts(surface3, PauliChannel.bitflip(0.3), dec, 0, 0, 50, True)


def test_symmetries_for():
    s = build_surface_code(5)
    assert len(symmetries_for(s, PauliChannel.bitflip(0.1))) == 2
    assert len(symmetries_for(s, BallisticChannel(0.1, 2))) == 2
    assert len(symmetries_for(build_xzzx_code(3), PauliChannel(0, 0, 0.1), "rows")) == 5
    with pytest.raises(ValueError):
        symmetries_for(s, PauliChannel.bitflip(0.1), "ballistic")
    with pytest.raises(ValueError):
        symmetries_for(s, PauliChannel.bitflip(0.1), "magic")


def test_derive_seed():
    assert derive_seed(1, 3, 0.1) == derive_seed(1, 3, 0.1)
    assert derive_seed(1, 3, 0.1) != derive_seed(1, 5, 0.1)
    assert derive_seed(1, 3, 0.1) != derive_seed(2, 3, 0.1)
    assert 0 <= derive_seed(2**70, 3, 0.1) < 2**64


def _cfg(**kw):
    doc = {"code": "surface", "sizes": [3], "channel": {"kind": "bitflip", "p": 0.1},
           "rates": [0.1], "shots": 300, "seed": 17}
    doc.update(kw)
    return ExperimentConfig.from_dict(doc, env={})


def test_sweep_row_counts():
    assert len(run_sweep(_cfg())) == 1
    rates = [round(0.01 + 0.02 * i, 2) for i in range(8)]
    cfg = _cfg(sizes=[3, 5, 7], rates=rates, shots=1)
    rows = run_sweep(cfg)
    assert len(rows) == 24
    assert [(r.d, r.p) for r in rows] == [(d, p) for d in (3, 5, 7) for p in rates]


def test_sweep_byte_identical(tmp_path):
    cfg = _cfg(sizes=[3, 5], rates=[0.05, 0.1], shots=700)
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    run_sweep(cfg, workers=1, out=str(a))
    run_sweep(cfg, workers=1, out=str(b))
    run_sweep(cfg, workers=3, out=str(c))
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER) and len(lines) == 5
    assert lines[1].endswith(",")  # no timing column unless asked


def test_sweep_csv_matches_rows(tmp_path):
    out = tmp_path / "r.csv"
    rows = run_sweep(_cfg(), out=str(out))
    assert out.read_text() == rows_to_csv(rows)


def test_seed_env_override():
    doc = {"code": "surface", "sizes": [3], "channel": {"kind": "bitflip", "p": 0.1}, "rates": [0.1], "seed": 1}
    assert ExperimentConfig.from_dict(doc, env={}).seed == 1
    assert ExperimentConfig.from_dict(doc, env={"SYMDEC_SEED": "99"}).seed == 99
    assert ExperimentConfig.from_json(json.dumps(doc), env={"SYMDEC_SEED": "7"}).seed == 7


def test_seed_env_changes_results(monkeypatch):
    doc = {"code": "surface", "sizes": [3], "channel": {"kind": "bitflip", "p": 0.15}, "rates": [0.15],
           "shots": 2000, "seed": 1}
    monkeypatch.delenv("SYMDEC_SEED", raising=False)
    base = run_sweep(ExperimentConfig.from_dict(doc))
    monkeypatch.setenv("SYMDEC_SEED", "123456")
    other = run_sweep(ExperimentConfig.from_dict(doc))
    again = run_sweep(ExperimentConfig.from_dict(dict(doc, seed=123456), env={}))
    assert other == again and other != base


def test_config_validation():
    with pytest.raises(ValueError):
        _cfg(sizes=[])
    with pytest.raises(ValueError):
        _cfg(shots=0)
    with pytest.raises(ValueError):
        _cfg(decoder="neural")
    with pytest.raises(ValueError):
        _cfg(colour="red")
    single = ExperimentConfig.from_dict({"code": "surface", "d": 5, "channel": {"kind": "bitflip", "p": 0.02}},
                                        env={})
    assert single.sizes == [5] and single.rates == [0.02]


def _synthetic(sizes, rates, f):
    return [ResultRow.from_counts(d, p, 10**9, round(f(d, p) * 10**9)) for d in sizes for p in rates]


def test_crossing_synthetic_exact():
    rates = [0.05, 0.075, 0.1, 0.125, 0.15]
    [c] = find_crossing(_synthetic([3, 5], rates, lambda d, p: min(1.0, (p / 0.1) ** d)))
    assert c.p == pytest.approx(0.1) and c.resolved and c.monotone


def test_crossing_interpolated():
    rates = [0.06, 0.09, 0.12, 0.15]
    [c] = find_crossing(_synthetic([3, 5], rates, lambda d, p: 0.1 * (p / 0.1) ** d))
    assert c.bracket == (0.09, 0.12) and 0.09 < c.p < 0.12


def test_crossing_none_in_range():
    rates = [0.01, 0.02, 0.03]
    crossings = find_crossing(_synthetic([3, 5, 7], rates, lambda d, p: (p / 0.1) ** d))
    assert len(crossings) == 2 and all(c.p is None for c in crossings)
    assert "none in range" in str(crossings[0])


def test_crossing_flags_non_monotone():
    rows = [ResultRow.from_counts(d, p, 1000, k) for d, p, k in [
        (3, 0.1, 10), (5, 0.1, 5), (3, 0.2, 10), (5, 0.2, 20), (3, 0.3, 30), (5, 0.3, 10), (3, 0.4, 10), (5, 0.4, 40)]]
    [c] = find_crossing(rows)
    assert not c.monotone and c.notes


def test_crossing_needs_data():
    with pytest.raises(ValueError):
        find_crossing(_synthetic([3], [0.1, 0.2, 0.3], lambda d, p: p))
    with pytest.raises(ValueError):
        find_crossing(_synthetic([3, 5], [0.1, 0.2], lambda d, p: p))

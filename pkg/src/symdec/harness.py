"""Monte Carlo estimation of logical failure rates, sweeps and threshold crossings.

Shots are split into fixed-size blocks, each with its own random stream
derived from ``(seed, block index)``. Results therefore depend only on the
configuration and seed, never on how many workers ran the blocks.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from symdec.codes import StabilizerCode, build_code, logical_class
from symdec.matching import ParityViolation, SymmetryDecoder
from symdec.noise import BallisticChannel, channel_from_dict, sample, with_rate
from symdec.symmetry import (
    Symmetry,
    ballistic_symmetries,
    default_symmetries,
    total_event_parity,
    xzzx_row_symmetries,
)
from symdec.syndrome import detection_events

__all__ = [
    "ResultRow",
    "ExperimentConfig",
    "Crossing",
    "wilson",
    "derive_seed",
    "symmetries_for",
    "run_point",
    "run_sweep",
    "find_crossing",
    "rows_to_csv",
    "CSV_HEADER",
]

CSV_HEADER = ("d", "p", "shots", "failures", "rate", "lo95", "hi95", "ns_per_shot")
BLOCK_SHOTS = 256
Z95 = 1.959963984540054


def wilson(failures: int, shots: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if shots <= 0:
        raise ValueError("shots must be positive")
    phat = failures / shots
    denom = 1 + z * z / shots
    centre = (phat + z * z / (2 * shots)) / denom
    half = z * math.sqrt(phat * (1 - phat) / shots + z * z / (4 * shots * shots)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass(frozen=True)
class ResultRow:
    d: int
    p: float
    shots: int
    failures: int
    rate: float
    lo95: float
    hi95: float
    ns_per_shot: float | None = None

    def __post_init__(self):
        if not 0 <= self.failures <= self.shots:
            raise ValueError("failures must lie between 0 and shots")

    @classmethod
    def from_counts(cls, d, p, shots, failures, ns_per_shot=None) -> "ResultRow":
        lo, hi = wilson(failures, shots)
        return cls(d, p, shots, failures, failures / shots, lo, hi, ns_per_shot)


def derive_seed(master: int, d: int, p: float) -> int:
    """``master XOR hash(d, p)`` with a platform-independent 64-bit hash."""
    digest = hashlib.blake2b(f"{int(d)}:{float(p)!r}".encode(), digest_size=8).digest()
    return (int(master) ^ int.from_bytes(digest, "little")) & ((1 << 64) - 1)


def symmetries_for(code: StabilizerCode, channel, choice: str = "auto") -> list[Symmetry]:
    """Symmetries to decode with: ``default``, ``rows`` (XZZX), ``ballistic`` or ``auto``."""
    if choice == "auto":
        if isinstance(channel, BallisticChannel):
            choice = "ballistic"
        else:
            choice = "default"
    if choice == "default":
        return default_symmetries(code)
    if choice == "rows":
        return xzzx_row_symmetries(code)
    if choice == "ballistic":
        if not isinstance(channel, BallisticChannel):
            raise ValueError("ballistic symmetries need a ballistic channel")
        return ballistic_symmetries(code, channel.xi)
    raise ValueError(f"unknown symmetry choice {choice!r}")


def _block_counts(code, channel, decoder: SymmetryDecoder, seed: int, block: int,
                  shots: int, audit: bool) -> int:
    rng = np.random.default_rng([seed, block])
    aux = [op for s in decoder.symmetries for op in s.aux_members]
    failures = 0
    for _ in range(shots):
        smp = sample(channel, code, rng)
        events = detection_events(code, smp, aux)
        if audit:
            for sigma in decoder.symmetries:
                if total_event_parity(events, sigma):
                    raise ParityViolation(f"odd event parity on symmetry {sigma.label!r}")
        corr = decoder.decode(events)
        cls = logical_class(code, corr * smp.final_error)
        if any(label != "I" for label in cls):
            failures += 1
    return failures


def _blocks(shots: int) -> list[tuple[int, int]]:
    return [(b, min(BLOCK_SHOTS, shots - b * BLOCK_SHOTS))
            for b in range(math.ceil(shots / BLOCK_SHOTS))]


def run_point(code: StabilizerCode, channel, decoder: str | SymmetryDecoder = "mwpm",
              shots: int = 1000, seed: int = 0, symmetries: str | Sequence[Symmetry] = "auto",
              audit: bool = True, timing: bool = True) -> ResultRow:
    """Estimate the logical failure rate of one (code, channel, decoder) point.

    A shot fails when the correction times the error acts as a non-trivial
    logical. With ``audit`` every shot's detection events are checked
    against each decoding symmetry's parity law.
    """
    if int(shots) != shots or shots < 1:
        raise ValueError(f"shots must be a positive integer, got {shots!r}")
    if not isinstance(decoder, SymmetryDecoder):
        syms = symmetries_for(code, channel, symmetries) if isinstance(symmetries, str) else list(symmetries)
        decoder = SymmetryDecoder(code, channel, syms, decoder)
    start = time.perf_counter()
    failures = sum(_block_counts(code, channel, decoder, seed, b, n, audit) for b, n in _blocks(shots))
    elapsed = time.perf_counter() - start
    return ResultRow.from_counts(code.size, _headline_rate(channel), shots, failures,
                                 elapsed * 1e9 / shots if timing else None)


def _headline_rate(channel) -> float:
    if isinstance(channel, BallisticChannel):
        return channel.p_string
    data = getattr(channel, "data", channel)
    return data.p


# sweeps -------------------------------------------------------------------


@dataclass
class ExperimentConfig:
    """A sweep over code sizes and physical rates.

    ``channel`` is a channel descriptor whose headline rate is replaced by
    each entry of ``rates``.
    """

    code: str
    sizes: list[int]
    channel: dict
    rates: list[float]
    decoder: str = "mwpm"
    shots: int = 1000
    seed: int = 0
    workers: int = 1
    out: str | None = None
    symmetries: str = "auto"
    timing: bool = False
    audit: bool = True

    def __post_init__(self):
        if not self.sizes:
            raise ValueError("sizes must not be empty")
        if not self.rates:
            raise ValueError("rates must not be empty")
        if int(self.shots) != self.shots or self.shots < 1:
            raise ValueError("shots must be a positive integer")
        if self.decoder not in ("mwpm", "unionfind"):
            raise ValueError(f"decoder must be mwpm or unionfind, got {self.decoder!r}")
        if int(self.workers) != self.workers or self.workers < 1:
            raise ValueError("workers must be a positive integer")

    @classmethod
    def from_dict(cls, doc: dict, env: dict | None = None) -> "ExperimentConfig":
        """Build from JSON; ``SYMDEC_SEED`` in ``env`` (default: the process environment) wins over ``seed``."""
        env = os.environ if env is None else env
        doc = dict(doc)
        sizes = doc.pop("sizes", None)
        if sizes is None and "d" in doc:
            sizes = [doc.pop("d")]
        rates = doc.pop("rates", None)
        if rates is None:
            rates = [float(doc["channel"]["p"])] if "p" in doc.get("channel", {}) else []
        known = {f for f in cls.__dataclass_fields__}
        extra = set(doc) - known
        if extra:
            raise ValueError(f"unknown config fields: {sorted(extra)}")
        cfg = cls(sizes=[int(s) for s in sizes], rates=[float(r) for r in rates], **doc)
        if env.get("SYMDEC_SEED"):
            cfg.seed = int(env["SYMDEC_SEED"])
        return cfg

    @classmethod
    def from_json(cls, text: str, env: dict | None = None) -> "ExperimentConfig":
        return cls.from_dict(json.loads(text), env)

    def to_dict(self) -> dict:
        return asdict(self)


def _format(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows: Iterable[ResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([_format(getattr(r, k)) for k in CSV_HEADER])
    return buf.getvalue()


_worker_cache: dict = {}


def _point_task(args) -> int:
    family, size, channel_doc, method, sym_choice, seed, block, shots, audit = args
    key = (family, size, json.dumps(channel_doc, sort_keys=True), method, sym_choice)
    hit = _worker_cache.get(key)
    if hit is None:
        code = build_code(family, size)
        channel = channel_from_dict(channel_doc)
        decoder = SymmetryDecoder(code, channel, symmetries_for(code, channel, sym_choice), method)
        if len(_worker_cache) > 32:
            _worker_cache.clear()
        hit = _worker_cache[key] = (code, channel, decoder)
    code, channel, decoder = hit
    return _block_counts(code, channel, decoder, seed, block, shots, audit)


def run_sweep(config: ExperimentConfig | dict, workers: int | None = None,
              out: str | None = None) -> list[ResultRow]:
    """Every (size, rate) point of ``config``; rows are appended to the CSV as they finish."""
    if isinstance(config, dict):
        config = ExperimentConfig.from_dict(config)
    workers = config.workers if workers is None else workers
    out = config.out if out is None else out
    points = [(d, p) for d in config.sizes for p in config.rates]
    handle = None
    if out is not None:
        handle = open(out, "w", newline="")
        handle.write(",".join(CSV_HEADER) + "\n")
        handle.flush()
    rows = []
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for d, p in points:
            seed = derive_seed(config.seed, d, p)
            doc = with_rate(config.channel, p)
            tasks = [(config.code, d, doc, config.decoder, config.symmetries, seed, b, n, config.audit)
                     for b, n in _blocks(config.shots)]
            start = time.perf_counter()
            if pool is None:
                counts = [_point_task(t) for t in tasks]
            else:
                counts = list(pool.map(_point_task, tasks))
            elapsed = time.perf_counter() - start
            ns = elapsed * 1e9 / config.shots if config.timing else None
            row = ResultRow.from_counts(d, p, config.shots, sum(counts), ns)
            rows.append(row)
            if handle is not None:
                handle.write(rows_to_csv([row]).split("\n", 1)[1])
                handle.flush()
    finally:
        if pool is not None:
            pool.shutdown()
        if handle is not None:
            handle.close()
    return rows


# thresholds -------------------------------------------------------------


@dataclass(frozen=True)
class Crossing:
    """Where the failure curves of sizes ``d1 < d2`` cross, if they do in range."""

    d1: int
    d2: int
    p: float | None
    bracket: tuple[float, float] | None = None
    resolved: bool = True
    monotone: bool = True
    notes: list = field(default_factory=list, compare=False)

    def __str__(self):
        if self.p is None:
            return f"d={self.d1}/{self.d2}: none in range"
        flag = "" if self.resolved else " (unresolved)"
        return f"d={self.d1}/{self.d2}: p={self.p:.4g} in [{self.bracket[0]:.4g}, {self.bracket[1]:.4g}]{flag}"


def find_crossing(rows: Sequence[ResultRow]) -> list[Crossing]:
    """Linear-interpolation crossing of each adjacent pair of size curves.

    The crossing is where the larger code stops beating the smaller one.
    ``resolved`` is False when the Wilson intervals overlap at both ends of
    the bracketing rate interval; ``monotone`` is False when the sign of the
    difference changes more than once.
    """
    by_size: dict[int, dict[float, ResultRow]] = {}
    for r in rows:
        by_size.setdefault(r.d, {})[r.p] = r
    sizes = sorted(by_size)
    if len(sizes) < 2:
        raise ValueError("need at least two code sizes")
    out = []
    for d1, d2 in zip(sizes, sizes[1:]):
        rates = sorted(set(by_size[d1]) & set(by_size[d2]))
        if len(rates) < 3:
            raise ValueError(f"need at least three common rates for d={d1}/{d2}")
        diff = [by_size[d2][p].rate - by_size[d1][p].rate for p in rates]
        signs = [(-1 if x < 0 else 1 if x > 0 else 0) for x in diff]
        nonzero = [s for s in signs if s]
        changes = sum(1 for a, b in zip(nonzero, nonzero[1:]) if a != b)
        monotone = changes <= 1
        found = None
        for i in range(len(rates)):
            if diff[i] == 0 and 0 < i < len(rates) - 1 and diff[i - 1] < 0 < diff[i + 1]:
                found = (rates[i], (rates[i], rates[i]), i, i)
                break
            if i + 1 < len(rates) and diff[i] < 0 <= diff[i + 1]:
                if diff[i + 1] == 0:
                    found = (rates[i + 1], (rates[i], rates[i + 1]), i, i + 1)
                else:
                    t = -diff[i] / (diff[i + 1] - diff[i])
                    found = (rates[i] + t * (rates[i + 1] - rates[i]), (rates[i], rates[i + 1]), i, i + 1)
                break
        if found is None:
            out.append(Crossing(d1, d2, None, None, True, monotone, ["none in range"]))
            continue
        p, bracket, i, j = found

        def overlap(p_):
            a, b = by_size[d1][p_], by_size[d2][p_]
            return a.lo95 <= b.hi95 and b.lo95 <= a.hi95

        resolved = not (overlap(rates[i]) and overlap(rates[j]))
        notes = [] if monotone else ["difference changes sign more than once"]
        out.append(Crossing(d1, d2, p, bracket, resolved, monotone, notes))
    return out

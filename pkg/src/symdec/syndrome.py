"""Syndromes of data errors and space-time detection events of noisy histories."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from symdec.codes import StabilizerCode
from symdec.noise import ErrorSample
from symdec.pauli import DimensionError, PauliString

__all__ = [
    "Syndrome",
    "DetectionEvents",
    "extract_syndrome",
    "syndrome_bits",
    "detection_events",
    "events_to_json",
    "events_from_json",
]


@dataclass(frozen=True)
class Syndrome:
    """Generators reporting -1, plus directly evaluated auxiliary operators.

    ``aux`` holds outcomes of operators outside the generator list (such as
    a boundary operator) when they were evaluated against the error itself
    rather than inferred from generator outcomes.
    """

    defects: frozenset
    aux: dict = field(default_factory=dict, compare=False)

    def __len__(self):
        return len(self.defects)


@dataclass(frozen=True)
class DetectionEvents:
    """Detection events as ``(generator, round)`` pairs over ``rounds`` rounds."""

    events: frozenset
    rounds: int = 1
    aux: dict = field(default_factory=dict, compare=False)

    def __len__(self):
        return len(self.events)

    @classmethod
    def from_syndrome(cls, syndrome: Syndrome) -> "DetectionEvents":
        return cls(
            frozenset((g, 0) for g in syndrome.defects),
            1,
            {op: {0} if bit else set() for op, bit in syndrome.aux.items()},
        )

    def spacelike(self) -> frozenset:
        """Generators with an odd number of events over all rounds.

        With a perfect final round this is the syndrome of the final error.
        """
        out: set[int] = set()
        for g, _ in self.events:
            out ^= {g}
        return frozenset(out)


def syndrome_bits(generators: Sequence[PauliString], error: PauliString) -> int:
    """Syndrome packed into an int: bit ``i`` set iff generator ``i`` anticommutes."""
    bits = 0
    ex, ez = error.x, error.z
    for i, g in enumerate(generators):
        if ((g.x & ez) ^ (g.z & ex)).bit_count() & 1:
            bits |= 1 << i
    return bits


def extract_syndrome(code: StabilizerCode, error: PauliString,
                     aux: Iterable[PauliString] = ()) -> Syndrome:
    if error.n != code.n:
        raise DimensionError(f"error acts on {error.n} qubits, code has {code.n}")
    bits = syndrome_bits(code.generators, error)
    defects = []
    i = 0
    while bits:
        if bits & 1:
            defects.append(i)
        bits >>= 1
        i += 1
    return Syndrome(frozenset(defects), {op: not op.commutes(error) for op in aux})


def detection_events(code: StabilizerCode, sample: ErrorSample,
                     aux: Iterable[PauliString] = ()) -> DetectionEvents:
    """XOR of consecutive measurement rounds, the first against all +1.

    Auxiliary operators in ``aux`` are evaluated against the cumulative
    error each round without measurement noise.
    """
    if sample.rounds < 1:
        raise ValueError("an error sample needs at least one round")
    for e in sample.data_errors:
        if e.n != code.n:
            raise DimensionError("sample and code disagree on the qubit count")
    m = len(code.generators)
    flips_by_round: dict[int, int] = {}
    for f in sample.measurement_flips:
        if not 0 <= f.generator < m or not 0 <= f.round < sample.rounds:
            raise ValueError(f"measurement flip {f} does not fit the code/sample")
        flips_by_round[f.round] = flips_by_round.get(f.round, 0) ^ (1 << f.generator)
    aux = list(aux)
    events = []
    aux_events = {op: set() for op in aux}
    prev = 0
    prev_aux = {op: False for op in aux}
    for t, err in enumerate(sample.data_errors):
        raw = syndrome_bits(code.generators, err) ^ flips_by_round.get(t, 0)
        diff = raw ^ prev
        g = 0
        while diff:
            if diff & 1:
                events.append((g, t))
            diff >>= 1
            g += 1
        prev = raw
        for op in aux:
            val = not op.commutes(err)
            if val != prev_aux[op]:
                aux_events[op].add(t)
            prev_aux[op] = val
    return DetectionEvents(frozenset(events), sample.rounds, aux_events)


def events_to_json(events: DetectionEvents) -> str:
    return json.dumps(sorted([g, t] for g, t in events.events))


def events_from_json(text: str, rounds: int | None = None) -> DetectionEvents:
    """Parse ``[[g, t], ...]``; a flat list ``[g, ...]`` means round 0."""
    doc = json.loads(text)
    pairs = []
    for item in doc:
        if isinstance(item, int):
            pairs.append((item, 0))
        else:
            g, t = item
            pairs.append((int(g), int(t)))
    if rounds is None:
        rounds = 1 + max((t for _, t in pairs), default=0)
    return DetectionEvents(frozenset(pairs), rounds)

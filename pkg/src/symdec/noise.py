"""Error channels: samplers and single-event prior probabilities.

All samplers take a :class:`numpy.random.Generator`; identical seeds give
identical samples. Probabilities refer to one qubit (or one string anchor,
or one measurement) per round.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from symdec.codes import StabilizerCode
from symdec.pauli import PauliString

__all__ = [
    "PauliChannel",
    "PhenomenologicalChannel",
    "BallisticChannel",
    "MeasurementFlip",
    "ErrorSample",
    "sample_iid",
    "sample_phenomenological",
    "sample_ballistic",
    "sample",
    "event_probability",
    "channel_from_dict",
    "channel_to_dict",
    "data_mechanisms",
    "with_rate",
]


def _check_prob(name, value):
    if not (0.0 <= value <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")


@dataclass(frozen=True)
class PauliChannel:
    """Independent single-qubit Pauli noise."""

    p_x: float = 0.0
    p_y: float = 0.0
    p_z: float = 0.0

    def __post_init__(self):
        for name in ("p_x", "p_y", "p_z"):
            _check_prob(name, getattr(self, name))
        if self.p_x + self.p_y + self.p_z > 1.0 + 1e-12:
            raise ValueError("p_x + p_y + p_z exceeds 1")

    @classmethod
    def bitflip(cls, p: float) -> "PauliChannel":
        return cls(p, 0.0, 0.0)

    @classmethod
    def dephasing(cls, p: float) -> "PauliChannel":
        return cls(0.0, 0.0, p)

    @classmethod
    def depolarizing(cls, p: float) -> "PauliChannel":
        return cls(p / 3, p / 3, p / 3)

    @property
    def p(self) -> float:
        return self.p_x + self.p_y + self.p_z

    def prob(self, label: str) -> float:
        return {"X": self.p_x, "Y": self.p_y, "Z": self.p_z}[label]

    def marginal(self, component: str) -> float:
        """Probability that the error on a qubit has an X (or Z) component."""
        if component == "X":
            return self.p_x + self.p_y
        if component == "Z":
            return self.p_z + self.p_y
        raise ValueError(f"component must be X or Z, got {component!r}")


@dataclass(frozen=True)
class PhenomenologicalChannel:
    """Data noise every round plus independent measurement-outcome flips.

    ``q`` defaults to the total data error rate. The last round is read out
    without measurement errors.
    """

    data: PauliChannel
    q: float | None = None
    rounds: int = 1

    def __post_init__(self):
        if self.q is None:
            object.__setattr__(self, "q", self.data.p)
        _check_prob("q", self.q)
        if int(self.rounds) != self.rounds or self.rounds < 1:
            raise ValueError(f"rounds must be a positive integer, got {self.rounds!r}")


@dataclass(frozen=True)
class BallisticChannel:
    """Axis-aligned strings of ``xi`` bit flips, one trial per anchor and orientation."""

    p_string: float
    xi: int

    def __post_init__(self):
        _check_prob("p_string", self.p_string)
        if int(self.xi) != self.xi or self.xi < 1:
            raise ValueError(f"xi must be a positive integer, got {self.xi!r}")

    def strings(self, code: StabilizerCode) -> list[PauliString]:
        """Every string the channel can apply, anchor-major, horizontal first.

        Strings running off the lattice keep only their in-lattice qubits.
        """
        return _ballistic_strings(code, self.xi)


_string_cache: dict[tuple, list[PauliString]] = {}


def _ballistic_strings(code: StabilizerCode, xi: int) -> list[PauliString]:
    key = (code.qubit_coords, xi)
    hit = _string_cache.get(key)
    if hit is not None:
        return hit
    where = {rc: q for q, rc in enumerate(code.qubit_coords)}
    out = []
    for q, (r, c) in enumerate(code.qubit_coords):
        for dr, dc in ((0, 1), (1, 0)):
            run = [where[(r + s * dr, c + s * dc)] for s in range(xi)
                   if (r + s * dr, c + s * dc) in where]
            out.append(PauliString.from_qubits(code.n, run, "X"))
    _string_cache[key] = out
    return out


@dataclass(frozen=True)
class MeasurementFlip:
    """A wrong outcome for ``generator`` at measurement ``round``."""

    generator: int
    round: int


@dataclass
class ErrorSample:
    """Cumulative data error after each round, plus flipped measurements."""

    data_errors: list[PauliString]
    measurement_flips: frozenset = field(default_factory=frozenset)

    @property
    def rounds(self) -> int:
        return len(self.data_errors)

    @property
    def final_error(self) -> PauliString:
        return self.data_errors[-1]


def _mask_from_bools(bits: np.ndarray) -> int:
    if not bits.any():
        return 0
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def sample_iid(channel: PauliChannel, n: int, rng: np.random.Generator) -> PauliString:
    u = rng.random(n)
    a = channel.p_x
    b = a + channel.p_y
    c = b + channel.p_z
    xs = u < a
    ys = (u >= a) & (u < b)
    zs = (u >= b) & (u < c)
    return PauliString(n, _mask_from_bools(xs | ys), _mask_from_bools(zs | ys))


def sample_phenomenological(channel: PhenomenologicalChannel, code: StabilizerCode,
                            rng: np.random.Generator) -> ErrorSample:
    m = len(code.generators)
    current = PauliString(code.n)
    errors = []
    flips = []
    for t in range(channel.rounds):
        current = current * sample_iid(channel.data, code.n, rng)
        errors.append(current)
        if t < channel.rounds - 1:
            hit = np.flatnonzero(rng.random(m) < channel.q)
            flips.extend(MeasurementFlip(int(g), t) for g in hit)
    return ErrorSample(errors, frozenset(flips))


def sample_ballistic(channel: BallisticChannel, code: StabilizerCode,
                     rng: np.random.Generator) -> PauliString:
    strings = channel.strings(code)
    hit = np.flatnonzero(rng.random(len(strings)) < channel.p_string)
    x = 0
    for i in hit:
        x ^= strings[i].x
    return PauliString(code.n, x, 0)


def sample(channel, code: StabilizerCode, rng: np.random.Generator) -> ErrorSample:
    """Draw one shot from any supported channel as an :class:`ErrorSample`."""
    if isinstance(channel, PauliChannel):
        return ErrorSample([sample_iid(channel, code.n, rng)])
    if isinstance(channel, PhenomenologicalChannel):
        return sample_phenomenological(channel, code, rng)
    if isinstance(channel, BallisticChannel):
        return ErrorSample([sample_ballistic(channel, code, rng)])
    raise TypeError(f"unsupported channel {type(channel).__name__}")


def _is_ballistic_string(channel: BallisticChannel, code: StabilizerCode, event: PauliString) -> bool:
    return event.z == 0 and event.x != 0 and event in set(channel.strings(code))


def event_probability(channel, event, code: StabilizerCode | None = None,
                      component: str | None = None) -> float:
    """Prior probability of one elementary error event.

    ``event`` is a single-qubit :class:`PauliString`, a
    :class:`MeasurementFlip`, or (ballistic noise) one string. With
    ``component`` set to ``"X"`` or ``"Z"`` the probability is the marginal
    seen by that half of a CSS decoding problem, so a Z event under
    depolarising noise has probability ``p_z + p_y``.
    """
    if isinstance(channel, PhenomenologicalChannel):
        if isinstance(event, MeasurementFlip):
            return channel.q
        return event_probability(channel.data, event, code, component)
    if isinstance(event, MeasurementFlip):
        raise ValueError("this channel has no measurement errors")
    if isinstance(channel, PauliChannel):
        if event.weight != 1:
            raise ValueError("an i.i.d. channel only produces single-qubit events")
        (label,) = event.support.values()
        if component is None:
            return channel.prob(label)
        if label not in ("X", "Z") or label != component:
            raise ValueError(f"event {event} is not a {component} component")
        return channel.marginal(component)
    if isinstance(channel, BallisticChannel):
        if code is None:
            raise ValueError("ballistic events need the code geometry")
        if not _is_ballistic_string(channel, code, event):
            raise ValueError(f"{event} is not a ballistic string of length {channel.xi}")
        return channel.p_string
    raise TypeError(f"unsupported channel {type(channel).__name__}")


def data_mechanisms(channel, code: StabilizerCode) -> list[list[tuple[PauliString, float]]]:
    """Independent data-fault mechanisms, each a list of exclusive outcomes."""
    if isinstance(channel, PhenomenologicalChannel):
        channel = channel.data
    n = code.n
    if isinstance(channel, PauliChannel):
        out = []
        for q in range(n):
            outcomes = [(PauliString.single(n, q, lab), channel.prob(lab))
                        for lab in ("X", "Y", "Z") if channel.prob(lab) > 0]
            if outcomes:
                out.append(outcomes)
        return out
    if isinstance(channel, BallisticChannel):
        if channel.p_string <= 0:
            return []
        return [[(s, channel.p_string)] for s in channel.strings(code)]
    raise TypeError(f"unsupported channel {type(channel).__name__}")


# serialisation ----------------------------------------------------------

def channel_from_dict(doc: dict):
    kind = doc.get("kind")
    if kind == "bitflip":
        return PauliChannel.bitflip(float(doc["p"]))
    if kind == "dephasing":
        return PauliChannel.dephasing(float(doc["p"]))
    if kind == "depolarizing":
        return PauliChannel.depolarizing(float(doc["p"]))
    if kind == "biased":
        return PauliChannel(float(doc.get("px", 0)), float(doc.get("py", 0)), float(doc.get("pz", 0)))
    if kind == "phenomenological":
        data = channel_from_dict(doc["data"]) if "data" in doc else PauliChannel.bitflip(float(doc["p"]))
        q = doc.get("q")
        return PhenomenologicalChannel(data, None if q is None else float(q), int(doc.get("rounds", 1)))
    if kind == "ballistic":
        return BallisticChannel(float(doc["p_string"]), int(doc["xi"]))
    raise ValueError(f"unknown channel kind {kind!r}")


def channel_to_dict(channel) -> dict:
    if isinstance(channel, PauliChannel):
        if channel.p_y == 0 and channel.p_z == 0:
            return {"kind": "bitflip", "p": channel.p_x}
        return {"kind": "biased", "px": channel.p_x, "py": channel.p_y, "pz": channel.p_z}
    if isinstance(channel, PhenomenologicalChannel):
        out = {"kind": "phenomenological", "q": channel.q, "rounds": channel.rounds}
        if channel.data.p_y == 0 and channel.data.p_z == 0:
            out["p"] = channel.data.p_x
        else:
            out["data"] = channel_to_dict(channel.data)
        return out
    if isinstance(channel, BallisticChannel):
        return {"kind": "ballistic", "p_string": channel.p_string, "xi": channel.xi}
    raise TypeError(f"unsupported channel {type(channel).__name__}")


def with_rate(doc: dict, p: float) -> dict:
    """Copy of a channel descriptor with its headline rate replaced by ``p``.

    Used by parameter sweeps: ``p`` (and ``q`` when it tracked ``p``) for
    bitflip, dephasing, depolarising and phenomenological channels, the
    per-anchor probability for ballistic ones, and a common scale factor for
    biased channels whose ``px + py + pz`` becomes ``p``.
    """
    out = dict(doc)
    kind = doc.get("kind")
    if kind in ("bitflip", "dephasing", "depolarizing"):
        out["p"] = p
    elif kind == "phenomenological":
        if "q" not in doc or doc.get("q") == doc.get("p"):
            out["q"] = p
        if "data" in doc:
            out["data"] = with_rate(doc["data"], p)
        else:
            out["p"] = p
    elif kind == "ballistic":
        out["p_string"] = p
    elif kind == "biased":
        total = sum(float(doc.get(k, 0)) for k in ("px", "py", "pz"))
        if total <= 0:
            raise ValueError("cannot rescale a biased channel with zero total rate")
        for k in ("px", "py", "pz"):
            out[k] = float(doc.get(k, 0)) * p / total
    else:
        raise ValueError(f"unknown channel kind {kind!r}")
    return out

"""Argument checks shared by the estimators, harness and CLI."""

from __future__ import annotations

import numbers
from typing import Iterable

import numpy as np
from sklearn.utils.validation import check_array

from symdec.codes import StabilizerCode, build_code
from symdec.noise import channel_from_dict
from symdec.pauli import PauliString
from symdec.syndrome import DetectionEvents

__all__ = [
    "check_probability",
    "check_positive_int",
    "check_code",
    "check_channel",
    "check_events",
    "check_errors",
]


def check_probability(value, name: str = "p") -> float:
    if not isinstance(value, numbers.Real) or not 0.0 <= float(value) <= 1.0:
        raise ValueError(f"{name} must be a probability in [0, 1], got {value!r}")
    return float(value)


def check_positive_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_code(code, size: int | None = None) -> StabilizerCode:
    """A :class:`StabilizerCode`, or a family name built at ``size``."""
    if isinstance(code, StabilizerCode):
        return code
    if isinstance(code, str):
        if size is None:
            raise ValueError(f"code family {code!r} needs a size")
        return build_code(code, check_positive_int(size, "size"))
    raise TypeError(f"expected a StabilizerCode or family name, got {type(code).__name__}")


def check_channel(channel):
    """A channel object, or a JSON-style descriptor dict."""
    if isinstance(channel, dict):
        return channel_from_dict(channel)
    if channel is None:
        raise ValueError("a noise channel is required")
    return channel


def check_events(X, num_generators: int) -> list[DetectionEvents]:
    """Normalise a batch of syndromes to detection events.

    Accepts a list of :class:`DetectionEvents`, or a 2-D 0/1 array with one
    row per shot and one column per generator (single round).
    """
    if isinstance(X, DetectionEvents):
        return [X]
    if isinstance(X, (list, tuple)) and X and all(isinstance(x, DetectionEvents) for x in X):
        return list(X)
    arr = check_array(X, dtype=np.int8, ensure_min_samples=1)
    if arr.shape[1] != num_generators:
        raise ValueError(f"expected {num_generators} syndrome columns, got {arr.shape[1]}")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("syndrome entries must be 0 or 1")
    return [DetectionEvents(frozenset((int(g), 0) for g in np.flatnonzero(row)), 1) for row in arr]


def check_errors(errors: Iterable, n: int) -> list[PauliString]:
    """Pauli strings from objects or literals such as ``"X0 Z3"``."""
    out = []
    for e in errors:
        p = PauliString.from_literal(n, e) if isinstance(e, str) else e
        if not isinstance(p, PauliString) or p.n != n:
            raise ValueError(f"expected a Pauli string on {n} qubits, got {e!r}")
        out.append(p)
    return out

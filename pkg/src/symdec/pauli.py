"""Phase-free Pauli operators and GF(2) linear algebra over their symplectic form.

A Pauli string on ``n`` qubits is stored as two Python integers used as bit
vectors: bit ``q`` of ``x`` is set when the operator has an X or Y on qubit
``q``, bit ``q`` of ``z`` when it has a Z or Y. Python integers give us
word-packed XOR and popcount for free, which is all the decoding problem
needs. Phases are never tracked.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

__all__ = [
    "PauliString",
    "SymplecticVector",
    "GF2Basis",
    "DimensionError",
    "commutes",
    "multiply",
    "weight",
    "in_group",
    "product",
    "echelon_basis",
    "gf2_rank",
]

_LITERAL_TOKEN = re.compile(r"^([XYZ])(\d+)$")


class DimensionError(ValueError):
    """Raised when operators acting on different qubit counts are combined."""


@dataclass(frozen=True)
class SymplecticVector:
    """Binary (x | z) representation of a Pauli string."""

    x_bits: tuple[int, ...]
    z_bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.x_bits) != len(self.z_bits):
            raise DimensionError("x and z parts must have equal length")


@dataclass(frozen=True)
class PauliString:
    """A Pauli operator on ``n`` qubits, modulo phase.

    Equality and hashing are by ``(n, x, z)``, so two strings compare equal
    exactly when they act identically up to a phase.
    """

    n: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("qubit count must be non-negative")
        limit = 1 << self.n
        if self.x < 0 or self.z < 0 or self.x >= limit or self.z >= limit:
            raise ValueError(f"support exceeds {self.n} qubits")

    # construction -----------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n)

    @classmethod
    def from_support(cls, n: int, support: Mapping[int, str]) -> "PauliString":
        x = z = 0
        for q, label in support.items():
            if not 0 <= q < n:
                raise ValueError(f"qubit {q} out of range for n={n}")
            if label == "I":
                continue
            if label not in ("X", "Y", "Z"):
                raise ValueError(f"unknown Pauli label {label!r}")
            if label in ("X", "Y"):
                x |= 1 << q
            if label in ("Z", "Y"):
                z |= 1 << q
        return cls(n, x, z)

    @classmethod
    def single(cls, n: int, qubit: int, label: str) -> "PauliString":
        return cls.from_support(n, {qubit: label})

    @classmethod
    def from_qubits(cls, n: int, qubits: Iterable[int], label: str) -> "PauliString":
        """Same Pauli ``label`` on every qubit in ``qubits`` (repeats cancel)."""
        mask = 0
        for q in qubits:
            if not 0 <= q < n:
                raise ValueError(f"qubit {q} out of range for n={n}")
            mask ^= 1 << q
        return cls(
            n,
            mask if label in ("X", "Y") else 0,
            mask if label in ("Z", "Y") else 0,
        )

    @classmethod
    def from_literal(cls, n: int, literal: str) -> "PauliString":
        """Parse ``"X0 Z4 Y7"``; the empty string (or ``"I"``) is the identity."""
        support: dict[int, str] = {}
        text = literal.strip()
        if text in ("", "I"):
            return cls(n)
        for token in text.split():
            m = _LITERAL_TOKEN.match(token)
            if m is None:
                raise ValueError(f"bad Pauli token {token!r}")
            q = int(m.group(2))
            if q in support:
                raise ValueError(f"qubit {q} appears twice in {literal!r}")
            support[q] = m.group(1)
        return cls.from_support(n, support)

    @classmethod
    def from_symplectic(cls, vec: SymplecticVector) -> "PauliString":
        x = sum(1 << q for q, b in enumerate(vec.x_bits) if b)
        z = sum(1 << q for q, b in enumerate(vec.z_bits) if b)
        return cls(len(vec.x_bits), x, z)

    # views ------------------------------------------------------------

    @property
    def support(self) -> dict[int, str]:
        out = {}
        mask = self.x | self.z
        while mask:
            low = mask & -mask
            q = low.bit_length() - 1
            xb, zb = bool(self.x & low), bool(self.z & low)
            out[q] = "Y" if xb and zb else ("X" if xb else "Z")
            mask ^= low
        return out

    @property
    def qubits(self) -> list[int]:
        return _bits(self.x | self.z)

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def is_identity(self) -> bool:
        return not (self.x or self.z)

    def to_symplectic(self) -> SymplecticVector:
        return SymplecticVector(
            tuple((self.x >> q) & 1 for q in range(self.n)),
            tuple((self.z >> q) & 1 for q in range(self.n)),
        )

    def to_literal(self) -> str:
        return " ".join(f"{p}{q}" for q, p in sorted(self.support.items())) or "I"

    def x_part(self) -> "PauliString":
        return PauliString(self.n, self.x, 0)

    def z_part(self) -> "PauliString":
        return PauliString(self.n, 0, self.z)

    def pauli_at(self, qubit: int) -> str:
        xb, zb = (self.x >> qubit) & 1, (self.z >> qubit) & 1
        return "IXZY"[xb | (zb << 1)]

    # algebra ----------------------------------------------------------

    def _check(self, other: "PauliString"):
        if self.n != other.n:
            raise DimensionError(f"qubit counts differ: {self.n} vs {other.n}")

    def commutes(self, other: "PauliString") -> bool:
        self._check(other)
        return not (((self.x & other.z) ^ (self.z & other.x)).bit_count() & 1)

    def __mul__(self, other: "PauliString") -> "PauliString":
        self._check(other)
        return PauliString(self.n, self.x ^ other.x, self.z ^ other.z)

    def __str__(self):
        return self.to_literal()


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def commutes(a: PauliString, b: PauliString) -> bool:
    return a.commutes(b)


def multiply(a: PauliString, b: PauliString) -> PauliString:
    return a * b


def weight(p: PauliString) -> int:
    return p.weight


def product(ops: Iterable[PauliString], n: int | None = None) -> PauliString:
    """Phase-free product of ``ops``; ``n`` is required when ``ops`` may be empty."""
    acc = None if n is None else PauliString(n)
    for op in ops:
        acc = op if acc is None else acc * op
    if acc is None:
        raise ValueError("empty product needs an explicit qubit count")
    return acc


class GF2Basis:
    """Echelon basis of a set of GF(2) row vectors, each a Python int.

    Every stored row has a distinct leading (highest) bit. Rows also carry a
    mask recording which input vectors were combined to produce them, so
    :meth:`decompose` can express a member of the span in terms of the
    original generators.
    """

    def __init__(self, rows: Sequence[int]):
        self._pivots: dict[int, tuple[int, int]] = {}
        for i, row in enumerate(rows):
            vec, combo = self._reduce(row, 1 << i)
            if vec:
                self._pivots[vec.bit_length() - 1] = (vec, combo)
        self._order = sorted(self._pivots, reverse=True)
        self.size = len(rows)

    def _reduce(self, vec: int, combo: int) -> tuple[int, int]:
        while vec:
            top = vec.bit_length() - 1
            hit = self._pivots.get(top)
            if hit is None:
                return vec, combo
            vec ^= hit[0]
            combo ^= hit[1]
        return 0, combo

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def contains(self, vec: int) -> bool:
        for top in self._order:
            if (vec >> top) & 1:
                vec ^= self._pivots[top][0]
        return vec == 0

    def decompose(self, vec: int) -> list[int] | None:
        """Indices of input rows whose XOR is ``vec``, or None if outside the span."""
        combo = 0
        for top in self._order:
            if (vec >> top) & 1:
                row, c = self._pivots[top]
                vec ^= row
                combo ^= c
        if vec:
            return None
        return _bits(combo)


def _packed(p: PauliString) -> int:
    return (p.x << p.n) | p.z


_basis_cache: dict[tuple[PauliString, ...], GF2Basis] = {}
_basis_lock = threading.Lock()


def echelon_basis(generators: Sequence[PauliString]) -> GF2Basis:
    """Cached echelon basis for ``generators``; built once per generator tuple."""
    key = tuple(generators)
    basis = _basis_cache.get(key)
    if basis is None:
        if key:
            n = key[0].n
            for g in key:
                if g.n != n:
                    raise DimensionError("generators act on different qubit counts")
        basis = GF2Basis([_packed(g) for g in key])
        with _basis_lock:
            if len(_basis_cache) > 256:
                _basis_cache.clear()
            _basis_cache[key] = basis
    return basis


def gf2_rank(generators: Sequence[PauliString]) -> int:
    return echelon_basis(generators).rank


def in_group(generators: Sequence[PauliString], p: PauliString) -> bool:
    """True iff ``p`` is (up to phase) a product of ``generators``."""
    if generators and generators[0].n != p.n:
        raise DimensionError(f"qubit counts differ: {generators[0].n} vs {p.n}")
    if p.is_identity():
        return True
    return echelon_basis(generators).contains(_packed(p))


def decompose(generators: Sequence[PauliString], p: PauliString) -> list[int] | None:
    """Generator indices whose product is ``p``, or None if ``p`` is not in the group."""
    if generators and generators[0].n != p.n:
        raise DimensionError(f"qubit counts differ: {generators[0].n} vs {p.n}")
    return echelon_basis(generators).decompose(_packed(p))

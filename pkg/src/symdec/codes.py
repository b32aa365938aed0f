"""Stabilizer code families with lattice metadata, and parameter checks.

Lattice conventions
-------------------
Planar codes (surface, XZZX) put qubit ``(r, c)`` at index ``r * d + c`` for
``r, c`` in ``0..d-1``. Face ``(i, j)`` has its top-left corner at qubit
``(i, j)`` and centre ``(i + 0.5, j + 0.5)``; it is *light* (Z-type in the
surface code) when ``i + j`` is even. Bulk faces have ``0 <= i, j <= d-2``;
weight-two boundary faces sit at ``i = -1`` / ``i = d-1`` (X-type, top and
bottom) and ``j = -1`` / ``j = d-1`` (Z-type, left and right).

The toric code is the edge layout on an ``L x L`` torus: horizontal edge
``h(r, c)`` is qubit ``r * L + c`` and vertical edge ``v(r, c)`` is qubit
``L * L + r * L + c``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from symdec.pauli import PauliString, gf2_rank, in_group

__all__ = [
    "Face",
    "StabilizerCode",
    "CodeParameters",
    "NOT_IN_NORMALIZER",
    "build_surface_code",
    "build_xzzx_code",
    "build_toric_code",
    "build_repetition_code",
    "build_code",
    "code_parameters",
    "logical_class",
    "hadamard_relabel",
]

NOT_IN_NORMALIZER = "not-in-normalizer"


@dataclass(frozen=True)
class Face:
    """Geometry record for one stabilizer generator."""

    center: tuple[float, float]
    color: str  # "light" / "dark", or "row" for chain-like codes
    boundary: bool = False


@dataclass(frozen=True, eq=False)
class StabilizerCode:
    """Generators, canonical logical pairs and lattice geometry of a code.

    ``z_indices`` / ``x_indices`` list the pure-Z and pure-X generators of a
    CSS code; both are empty for codes with mixed generators.
    ``distance_paulis`` restricts the distance search: ``("X", "Z")`` means
    pure-X and pure-Z candidates only (CSS), ``("X",)`` bit flips only, and
    ``None`` a search over all Paulis.
    """

    name: str
    n: int
    generators: tuple[PauliString, ...]
    logical_pairs: tuple[tuple[PauliString, PauliString], ...]
    qubit_coords: tuple[tuple[int, int], ...]
    faces: tuple[Face, ...] = ()
    z_indices: tuple[int, ...] = ()
    x_indices: tuple[int, ...] = ()
    boundaries: dict = field(default_factory=dict)
    distance_paulis: tuple[str, ...] | None = None
    size: int = 0

    @property
    def k(self) -> int:
        return len(self.logical_pairs)

    @property
    def z_generators(self) -> list[PauliString]:
        return [self.generators[i] for i in self.z_indices]

    @property
    def x_generators(self) -> list[PauliString]:
        return [self.generators[i] for i in self.x_indices]

    @property
    def logical_x(self) -> list[PauliString]:
        return [lx for lx, _ in self.logical_pairs]

    @property
    def logical_z(self) -> list[PauliString]:
        return [lz for _, lz in self.logical_pairs]

    @property
    def is_css(self) -> bool:
        return bool(self.z_indices or self.x_indices)

    def rank(self) -> int:
        return gf2_rank(self.generators)

    def check(self) -> None:
        """Raise ValueError if a structural invariant of the code is broken."""
        gens = self.generators
        for a, b in itertools.combinations(range(len(gens)), 2):
            if not gens[a].commutes(gens[b]):
                raise ValueError(f"generators {a} and {b} anticommute")
        for j, (lx, lz) in enumerate(self.logical_pairs):
            for op in (lx, lz):
                if any(not op.commutes(g) for g in gens):
                    raise ValueError(f"logical {j} anticommutes with a generator")
                if in_group(gens, op):
                    raise ValueError(f"logical {j} lies in the stabilizer group")
            if lx.commutes(lz):
                raise ValueError(f"logical pair {j} commutes")
            for i, (mx, mz) in enumerate(self.logical_pairs):
                if i != j and not (lx.commutes(mx) and lx.commutes(mz)):
                    raise ValueError(f"logical pairs {i} and {j} interact")
        if self.n - self.rank() != self.k:
            raise ValueError("n - rank(S) does not match the number of logical pairs")

    # serialisation ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "generators": [g.to_literal() for g in self.generators],
            "logical_x": [p.to_literal() for p in self.logical_x],
            "logical_z": [p.to_literal() for p in self.logical_z],
            "coords": [list(c) for c in self.qubit_coords],
            "boundaries": dict(self.boundaries),
            "faces": [
                {"center": list(f.center), "color": f.color, "boundary": f.boundary}
                for f in self.faces
            ],
            "size": self.size,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, doc: dict) -> "StabilizerCode":
        n = int(doc["n"])
        gens = tuple(PauliString.from_literal(n, s) for s in doc["generators"])
        lx = [PauliString.from_literal(n, s) for s in doc["logical_x"]]
        lz = [PauliString.from_literal(n, s) for s in doc["logical_z"]]
        if len(lx) != len(lz):
            raise ValueError("logical_x and logical_z must pair up")
        z_idx = tuple(i for i, g in enumerate(gens) if g.x == 0 and g.z)
        x_idx = tuple(i for i, g in enumerate(gens) if g.z == 0 and g.x)
        css = len(z_idx) + len(x_idx) == len(gens)
        coords = doc.get("coords") or [(0, q) for q in range(n)]
        faces = tuple(
            Face(tuple(f["center"]), f.get("color", "light"), bool(f.get("boundary")))
            for f in doc.get("faces", ())
        )
        return cls(
            name=doc.get("name", "custom"),
            n=n,
            generators=gens,
            logical_pairs=tuple(zip(lx, lz)),
            qubit_coords=tuple(tuple(int(v) for v in c) for c in coords),
            faces=faces,
            z_indices=z_idx if css else (),
            x_indices=x_idx if css else (),
            boundaries=dict(doc.get("boundaries", {})),
            distance_paulis=("X", "Z") if css else None,
            size=int(doc.get("size", 0)),
        )

    @classmethod
    def from_json(cls, text: str) -> "StabilizerCode":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class CodeParameters:
    """``[[n, k, d]]``. ``d`` is None when no logical of weight <= ``searched`` exists."""

    n: int
    k: int
    d: int | None
    searched: int

    def __post_init__(self):
        if self.d is not None and self.k >= 1 and self.d < 1:
            raise ValueError("distance must be positive when k >= 1")

    def __str__(self):
        d = self.d if self.d is not None else f">{self.searched}"
        return f"[[{self.n},{self.k},{d}]]"


def _check_odd_distance(d: int):
    if not isinstance(d, int) or d < 3 or d % 2 == 0:
        raise ValueError(f"distance must be an odd integer >= 3, got {d!r}")


def _planar_faces(d: int) -> list[tuple[int, int, bool]]:
    """All faces ``(i, j, is_boundary)`` of the rotated planar layout."""
    faces = [(i, j, False) for i in range(d - 1) for j in range(d - 1)]
    for j in range(d - 1):
        if j % 2 == 0:
            faces.append((-1, j, True))
        if j % 2 == 1:
            faces.append((d - 1, j, True))
    for i in range(d - 1):
        if i % 2 == 1:
            faces.append((i, -1, True))
        if i % 2 == 0:
            faces.append((i, d - 1, True))
    return faces


def _corners(d: int, i: int, j: int) -> dict[str, int]:
    """In-grid corners of face (i, j) keyed by TL/TR/BL/BR."""
    out = {}
    for key, (r, c) in (("TL", (i, j)), ("TR", (i, j + 1)),
                        ("BL", (i + 1, j)), ("BR", (i + 1, j + 1))):
        if 0 <= r < d and 0 <= c < d:
            out[key] = r * d + c
    return out


def _sorted_planar_faces(d: int):
    faces = _planar_faces(d)
    light = sorted((f for f in faces if (f[0] + f[1]) % 2 == 0), key=lambda f: f[:2])
    dark = sorted((f for f in faces if (f[0] + f[1]) % 2 == 1), key=lambda f: f[:2])
    return light, dark


def build_surface_code(d: int) -> StabilizerCode:
    """Rotated planar surface code of odd distance ``d`` on ``d * d`` qubits.

    Light faces carry Z-type generators (listed first), dark faces X-type.
    The logical Z is the top row of qubits, the logical X the left column.
    """
    _check_odd_distance(d)
    n = d * d
    light, dark = _sorted_planar_faces(d)
    gens, faces = [], []
    for label, group, color in (("Z", light, "light"), ("X", dark, "dark")):
        for i, j, bdry in group:
            gens.append(PauliString.from_qubits(n, _corners(d, i, j).values(), label))
            faces.append(Face((i + 0.5, j + 0.5), color, bdry))
    lz = PauliString.from_qubits(n, range(d), "Z")
    lx = PauliString.from_qubits(n, (r * d for r in range(d)), "X")
    return StabilizerCode(
        name="surface",
        n=n,
        generators=tuple(gens),
        logical_pairs=((lx, lz),),
        qubit_coords=tuple((q // d, q % d) for q in range(n)),
        faces=tuple(faces),
        z_indices=tuple(range(len(light))),
        x_indices=tuple(range(len(light), len(light) + len(dark))),
        boundaries={"top": "X", "bottom": "X", "left": "Z", "right": "Z"},
        distance_paulis=("X", "Z"),
        size=d,
    )


def hadamard_relabel(p: PauliString, qubits: Iterable[int]) -> PauliString:
    """Swap X and Z on ``qubits`` (conjugation by Hadamard, phases dropped)."""
    m = 0
    for q in qubits:
        m |= 1 << q
    keep = ~m
    return PauliString(p.n, (p.x & keep) | (p.z & m), (p.z & keep) | (p.x & m))


def xzzx_hadamard_qubits(d: int) -> list[int]:
    """Qubits whose Hadamard maps the surface code onto the XZZX code."""
    return [r * d + c for r in range(d) for c in range(d) if (r + c) % 2 == 0]


def build_xzzx_code(d: int) -> StabilizerCode:
    """XZZX code on the same faces as :func:`build_surface_code`.

    Every face acts as X on its top-left and bottom-right corners and Z on
    the other diagonal. Generator order matches the surface code, so a
    Hadamard on every qubit with ``r + c`` even maps one generator list onto
    the other, entry by entry.
    """
    _check_odd_distance(d)
    n = d * d
    light, dark = _sorted_planar_faces(d)
    gens, faces = [], []
    for group, color in ((light, "light"), (dark, "dark")):
        for i, j, bdry in group:
            support = {q: ("X" if key in ("TL", "BR") else "Z")
                       for key, q in _corners(d, i, j).items()}
            gens.append(PauliString.from_support(n, support))
            faces.append(Face((i + 0.5, j + 0.5), color, bdry))
    h = xzzx_hadamard_qubits(d)
    lz = hadamard_relabel(PauliString.from_qubits(n, range(d), "Z"), h)
    lx = hadamard_relabel(PauliString.from_qubits(n, (r * d for r in range(d)), "X"), h)
    return StabilizerCode(
        name="xzzx",
        n=n,
        generators=tuple(gens),
        logical_pairs=((lx, lz),),
        qubit_coords=tuple((q // d, q % d) for q in range(n)),
        faces=tuple(faces),
        boundaries={"top": "X", "bottom": "X", "left": "Z", "right": "Z"},
        distance_paulis=None,
        size=d,
    )


def build_toric_code(L: int) -> StabilizerCode:
    """Kitaev toric code with ``2 L^2`` edge qubits; plaquettes (Z) listed first."""
    if not isinstance(L, int) or L < 2:
        raise ValueError(f"toric code needs L >= 2, got {L!r}")
    n = 2 * L * L

    def h(r, c):
        return (r % L) * L + (c % L)

    def v(r, c):
        return L * L + (r % L) * L + (c % L)

    gens, faces = [], []
    for r in range(L):
        for c in range(L):
            gens.append(PauliString.from_qubits(n, (h(r, c), h(r + 1, c), v(r, c), v(r, c + 1)), "Z"))
            faces.append(Face((2 * r + 1, 2 * c + 1), "light"))
    for r in range(L):
        for c in range(L):
            gens.append(PauliString.from_qubits(n, (h(r, c), h(r, c - 1), v(r, c), v(r - 1, c)), "X"))
            faces.append(Face((2 * r, 2 * c), "dark"))
    coords = [(2 * r, 2 * c + 1) for r in range(L) for c in range(L)]
    coords += [(2 * r + 1, 2 * c) for r in range(L) for c in range(L)]
    pairs = (
        (PauliString.from_qubits(n, (h(r, 0) for r in range(L)), "X"),
         PauliString.from_qubits(n, (h(0, c) for c in range(L)), "Z")),
        (PauliString.from_qubits(n, (v(0, c) for c in range(L)), "X"),
         PauliString.from_qubits(n, (v(r, 0) for r in range(L)), "Z")),
    )
    return StabilizerCode(
        name="toric",
        n=n,
        generators=tuple(gens),
        logical_pairs=pairs,
        qubit_coords=tuple(coords),
        faces=tuple(faces),
        z_indices=tuple(range(L * L)),
        x_indices=tuple(range(L * L, 2 * L * L)),
        boundaries={"horizontal": "periodic", "vertical": "periodic"},
        distance_paulis=("X", "Z"),
        size=L,
    )


def build_repetition_code(d: int) -> StabilizerCode:
    """Bit-flip repetition code: checks ``Z_i Z_{i+1}``, logical Z on qubit 0."""
    if not isinstance(d, int) or d < 2:
        raise ValueError(f"repetition code needs d >= 2, got {d!r}")
    gens = tuple(PauliString.from_qubits(d, (i, i + 1), "Z") for i in range(d - 1))
    return StabilizerCode(
        name="repetition",
        n=d,
        generators=gens,
        logical_pairs=((PauliString.from_qubits(d, range(d), "X"),
                        PauliString.single(d, 0, "Z")),),
        qubit_coords=tuple((0, i) for i in range(d)),
        faces=tuple(Face((0, i + 0.5), "row") for i in range(d - 1)),
        z_indices=tuple(range(d - 1)),
        boundaries={"left": "end", "right": "end"},
        distance_paulis=("X",),
        size=d,
    )


_BUILDERS = {
    "surface": build_surface_code,
    "xzzx": build_xzzx_code,
    "toric": build_toric_code,
    "repetition": build_repetition_code,
}


def build_code(family: str, size: int) -> StabilizerCode:
    try:
        builder = _BUILDERS[family]
    except KeyError:
        raise ValueError(f"unknown code family {family!r}") from None
    return builder(size)


def logical_class(code: StabilizerCode, p: PauliString):
    """Coset label per logical qubit, or :data:`NOT_IN_NORMALIZER`.

    Returns a tuple like ``("I",)``: X when ``p`` flips the logical Z,
    Z when it flips the logical X, Y when both.
    """
    if p.n != code.n:
        raise ValueError(f"operator on {p.n} qubits, code has {code.n}")
    if any(not p.commutes(g) for g in code.generators):
        return NOT_IN_NORMALIZER
    out = []
    for lx, lz in code.logical_pairs:
        flips_z = not p.commutes(lz)
        flips_x = not p.commutes(lx)
        out.append("IXZY"[flips_z | (flips_x << 1)])
    return tuple(out)


def _syndrome_mask(gens: Sequence[PauliString], p: PauliString) -> int:
    mask = 0
    for i, g in enumerate(gens):
        if not g.commutes(p):
            mask |= 1 << i
    return mask


def _min_logical_weight(code: StabilizerCode, labels: Sequence[str], max_weight: int) -> int | None:
    """Smallest weight of a logical built from ``labels`` on each qubit."""
    gens = code.generators
    n = code.n
    elem = {}
    for q in range(n):
        for lab in labels:
            op = PauliString.single(n, q, lab)
            elem[(q, lab)] = (_syndrome_mask(gens, op), op)

    def is_logical(ops):
        p = PauliString(n)
        for op in ops:
            p = p * op
        return not in_group(gens, p)

    # last element looked up by syndrome, the rest enumerated
    by_syn: dict[int, list[tuple[int, PauliString]]] = {}
    for (q, lab), (syn, op) in elem.items():
        by_syn.setdefault(syn, []).append((q, op))
    for w in range(1, max_weight + 1):
        for head in itertools.combinations(range(n), w - 1):
            start = head[-1] + 1 if head else 0
            for labs in itertools.product(labels, repeat=w - 1):
                syn = 0
                ops = []
                for q, lab in zip(head, labs):
                    s, op = elem[(q, lab)]
                    syn ^= s
                    ops.append(op)
                for q, op in by_syn.get(syn, ()):
                    if q >= start and is_logical(ops + [op]):
                        return w
    return None


def code_parameters(code: StabilizerCode, max_search_weight: int) -> CodeParameters:
    """Exact ``n`` and ``k``; exact ``d`` when a logical of weight <= the bound exists."""
    k = code.n - code.rank()
    if code.distance_paulis is None:
        d = _min_logical_weight(code, ("X", "Y", "Z"), max_search_weight)
    else:
        found = [_min_logical_weight(code, (lab,), max_search_weight) for lab in code.distance_paulis]
        found = [f for f in found if f is not None]
        d = min(found) if found else None
    return CodeParameters(code.n, k, d, max_search_weight)

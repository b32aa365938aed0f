"""Defect-parity conservation laws: materialised and system symmetries.

A :class:`Symmetry` is a multiset of stabilizers. Members are generator
indices of a code or explicit auxiliary operators (typically a boundary
operator ``b``). When the product of all members is the identity every
error flips an even number of members; when it merely commutes with a
restricted error set the same holds for those errors only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from symdec.codes import StabilizerCode, logical_class
from symdec.noise import BallisticChannel
from symdec.pauli import DimensionError, PauliString, decompose, in_group, product
from symdec.syndrome import DetectionEvents, Syndrome, syndrome_bits

__all__ = [
    "Symmetry",
    "CleaningResult",
    "verify_materialised",
    "verify_system",
    "defect_parity",
    "total_event_parity",
    "default_symmetries",
    "sector_symmetry",
    "clean_logical",
    "xzzx_row_symmetries",
    "ballistic_symmetries",
    "symmetry_from_dict",
]


@dataclass(frozen=True)
class Symmetry:
    """Multiset of stabilizers whose product is constrained.

    ``members`` holds ints (generator indices) and :class:`PauliString`
    auxiliaries. ``boundary_member`` points at the member playing the role
    of the boundary operator. ``project`` asks decoders to keep only the
    error component each member actually detects on every qubit (the usual
    split of a CSS problem into X and Z halves).
    """

    members: tuple
    restriction: tuple[PauliString, ...] | None = None
    boundary_member: int | None = None
    label: str = ""
    project: bool = True
    decompositions: dict = field(default_factory=dict, compare=False)

    @property
    def generator_members(self) -> list[int]:
        return [m for m in self.members if isinstance(m, int)]

    @property
    def aux_members(self) -> list[PauliString]:
        return [m for m in self.members if isinstance(m, PauliString)]

    @property
    def boundary(self) -> PauliString | None:
        if self.boundary_member is None:
            return None
        return self.members[self.boundary_member]

    def operators(self, code: StabilizerCode) -> list[PauliString]:
        ops = []
        for m in self.members:
            if isinstance(m, PauliString):
                if m.n != code.n:
                    raise DimensionError(f"auxiliary member acts on {m.n} qubits, code has {code.n}")
                ops.append(m)
            else:
                if not 0 <= m < len(code.generators):
                    raise IndexError(f"generator index {m} out of range")
                ops.append(code.generators[m])
        return ops

    def product(self, code: StabilizerCode) -> PauliString:
        return product(self.operators(code), code.n)

    def to_dict(self) -> dict:
        out: dict = {"members": self.generator_members}
        aux = self.aux_members
        if len(aux) == 1:
            out["aux"] = aux[0].to_literal()
        elif aux:
            out["aux"] = [a.to_literal() for a in aux]
        if self.label:
            out["label"] = self.label
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def symmetry_from_dict(doc, code: StabilizerCode) -> Symmetry:
    """Load ``[g, ...]`` or ``{"members": [...], "aux": "Z0 Z2"}``."""
    if isinstance(doc, list):
        doc = {"members": doc}
    members: list = [int(g) for g in doc.get("members", ())]
    aux = doc.get("aux")
    if isinstance(aux, str):
        aux = [aux]
    boundary = None
    decomps = {}
    for lit in aux or ():
        op = PauliString.from_literal(code.n, lit)
        if boundary is None:
            boundary = len(members)
        members.append(op)
        decomps[op] = tuple(decompose(code.generators, op) or ())
    return Symmetry(tuple(members), boundary_member=boundary,
                    label=doc.get("label", ""), decompositions=decomps)


def _with_boundary(code: StabilizerCode, indices: Sequence[int], label: str,
                   restriction=None, project=True) -> Symmetry:
    """Members ``indices`` plus their product as a boundary operator, if non-trivial."""
    indices = tuple(indices)
    b = product((code.generators[g] for g in indices), code.n)
    if b.is_identity():
        return Symmetry(indices, restriction, None, label, project)
    return Symmetry(indices + (b,), restriction, len(indices), label, project, {b: indices})


def verify_materialised(code: StabilizerCode, sigma: Symmetry) -> bool:
    return sigma.product(code).is_identity()


def verify_system(code: StabilizerCode, sigma: Symmetry,
                  error_generators: Iterable[PauliString] | None = None) -> bool:
    """True iff the member product commutes with every error generator."""
    gens = sigma.restriction if error_generators is None else tuple(error_generators)
    if not gens:
        raise ValueError("a system symmetry needs a non-empty error generating set")
    prod = sigma.product(code)
    for e in gens:
        if e.n != code.n:
            raise DimensionError(f"error generator acts on {e.n} qubits, code has {code.n}")
        if not prod.commutes(e):
            return False
    return True


def _aux_value(sigma: Symmetry, op: PauliString, observed: dict, defects) -> int:
    if op in observed:
        return int(bool(observed[op]))
    parts = sigma.decompositions.get(op)
    if parts is None:
        raise ValueError(f"no outcome or decomposition for auxiliary member {op}")
    return sum(1 for g in parts if g in defects) & 1


def defect_parity(sigma: Symmetry, syndrome: Syndrome) -> int:
    """Parity of defects over the members, counting repeats."""
    total = 0
    for m in sigma.members:
        if isinstance(m, PauliString):
            total += _aux_value(sigma, m, syndrome.aux, syndrome.defects)
        elif m in syndrome.defects:
            total += 1
    return total & 1


def total_event_parity(events: DetectionEvents, sigma: Symmetry) -> int:
    """Parity of detection events on the members, over all rounds."""
    counts: dict[int, int] = {}
    for g, _ in events.events:
        counts[g] = counts.get(g, 0) + 1
    total = 0
    for m in sigma.members:
        if isinstance(m, PauliString):
            if m in events.aux:
                total += len(events.aux[m])
            else:
                parts = sigma.decompositions.get(m)
                if parts is None:
                    raise ValueError(f"no events or decomposition for auxiliary member {m}")
                total += sum(counts.get(g, 0) for g in parts)
        else:
            total += counts.get(m, 0)
    return total & 1


def sector_symmetry(code: StabilizerCode, sector: str) -> Symmetry:
    """Materialised symmetry of one decoding half.

    ``sector`` names the generators: ``"Z"`` / ``"X"`` for the pure
    generators of a CSS code, ``"light"`` / ``"dark"`` for face colours.
    """
    if sector in ("Z", "X"):
        indices = code.z_indices if sector == "Z" else code.x_indices
    else:
        indices = tuple(i for i, f in enumerate(code.faces) if f.color == sector)
    if not indices:
        raise ValueError(f"code {code.name!r} has no {sector!r} generators")
    return _with_boundary(code, indices, sector)


def default_symmetries(code: StabilizerCode) -> list[Symmetry]:
    """One materialised symmetry per independent decoding half of ``code``."""
    if code.is_css:
        return [sector_symmetry(code, s) for s, idx in (("Z", code.z_indices), ("X", code.x_indices)) if idx]
    colors = sorted({f.color for f in code.faces})
    if set(colors) == {"dark", "light"} and len(code.faces) == len(code.generators):
        return [sector_symmetry(code, "light"), sector_symmetry(code, "dark")]
    raise ValueError(f"no default symmetries for code {code.name!r}")


# cleaning ---------------------------------------------------------------


@dataclass(frozen=True)
class CleaningResult:
    """Outcome of cleaning a logical operator onto far-away support."""

    logical: PauliString
    b: PauliString
    sigma: Symmetry
    far_logical: PauliString
    generator_decomposition: tuple[int, ...]
    separation: float
    trivial: bool = False


def _separation(code: StabilizerCode, a: PauliString, b: PauliString) -> float:
    if a.is_identity() or b.is_identity():
        return float("-inf")
    coords = code.qubit_coords
    return min(abs(coords[p][0] - coords[q][0]) + abs(coords[p][1] - coords[q][1])
               for p in a.qubits for q in b.qubits)


def _mean_distance(code: StabilizerCode, a: PauliString, b: PauliString) -> float:
    coords = code.qubit_coords
    aq = a.qubits
    bq = b.qubits
    if not aq or not bq:
        return 0.0
    total = 0
    for q in bq:
        total += min(abs(coords[p][0] - coords[q][0]) + abs(coords[p][1] - coords[q][1]) for p in aq)
    return total / len(bq)


def _candidates(code: StabilizerCode, logical: PauliString) -> list[int]:
    if logical.x == 0 and code.z_indices:
        return list(code.z_indices)
    if logical.z == 0 and code.x_indices:
        return list(code.x_indices)
    return list(range(len(code.generators)))


def _sweep(code, logical, cands):
    """Multiply in every candidate touching the current support, layer by layer."""
    gens = code.generators
    remaining = set(cands)
    current = logical
    used = []
    while True:
        support = current.x | current.z
        layer = sorted(g for g in remaining if (gens[g].x | gens[g].z) & support)
        if not layer:
            return used, current
        for g in layer:
            current = current * gens[g]
            used.append(g)
            remaining.discard(g)


def _greedy(code, logical, cands):
    """Hill-climb on toggling adjacent generators, scored by separation.

    Plateau moves are allowed; the climb stops after ``n`` consecutive
    steps without a new best state, or when every neighbour was visited.
    """
    gens = code.generators

    def score(op):
        return (_separation(code, logical, op),
                -((op.x | op.z) & (logical.x | logical.z)).bit_count(),
                _mean_distance(code, logical, op))

    region: frozenset = frozenset()
    current = logical
    best = (score(current), region, current)
    seen = {region}
    stale = 0
    while stale < code.n:
        support = current.x | current.z
        moves = []
        for g in cands:
            if not (gens[g].x | gens[g].z) & support:
                continue
            nxt = region ^ {g}
            if nxt in seen:
                continue
            op = current * gens[g]
            moves.append((score(op), -g, nxt, op))
        if not moves:
            break
        s, _, region, current = max(moves, key=lambda m: (m[0], m[1]))
        seen.add(region)
        if s > best[0]:
            best = (s, region, current)
            stale = 0
        else:
            stale += 1
    return sorted(best[1]), best[2]


def clean_logical(code: StabilizerCode, logical: PauliString,
                  strategy: str = "sweep") -> CleaningResult:
    """Move ``logical`` away from itself by multiplying in stabilizers.

    ``"sweep"`` multiplies in, layer by layer, every candidate generator
    touching the current support until none is left; on a planar code this
    pushes the logical onto the opposite boundary and on a torus carries it
    all the way round. ``"greedy"`` hill-climbs on the minimum lattice
    distance between the supports of the old and new logical.
    """
    if logical.n != code.n:
        raise DimensionError(f"logical acts on {logical.n} qubits, code has {code.n}")
    if any(not logical.commutes(g) for g in code.generators) or in_group(code.generators, logical):
        raise ValueError("not a logical operator of this code")
    cands = _candidates(code, logical)
    if strategy == "sweep":
        used, far = _sweep(code, logical, cands)
    elif strategy == "greedy":
        used, far = _greedy(code, logical, cands)
    else:
        raise ValueError(f"unknown cleaning strategy {strategy!r}")
    used = tuple(sorted(used))
    b = logical * far
    sigma = _with_boundary(code, used, "cleaning")
    assert logical_class(code, far) == logical_class(code, logical)
    return CleaningResult(
        logical=logical,
        b=b,
        sigma=sigma,
        far_logical=far,
        generator_decomposition=used,
        separation=_separation(code, logical, far),
        trivial=b.is_identity(),
    )


# geometric system symmetries ----------------------------------------------


def _face_ij(code: StabilizerCode, g: int) -> tuple[int, int]:
    r, c = code.faces[g].center
    return round(r - 0.5), round(c - 0.5)


def xzzx_row_symmetries(code: StabilizerCode) -> list[Symmetry]:
    """One symmetry per diagonal line of faces, for pure dephasing noise.

    A Z error on qubit ``(r, c)`` flips the faces having it as top-left or
    bottom-right corner, ``(r, c)`` and ``(r-1, c-1)``; both lie on the line
    ``i - j = r - c``. Each line is therefore an independent repetition
    code for Z errors. Lines ending at the lattice edge carry their product
    as a boundary operator.
    """
    if code.name != "xzzx":
        raise ValueError(f"row symmetries need an XZZX code, got {code.name!r}")
    rows: dict[int, list[int]] = {}
    for g in range(len(code.generators)):
        i, j = _face_ij(code, g)
        rows.setdefault(i - j, []).append(g)
    restriction = tuple(PauliString.single(code.n, q, "Z") for q in range(code.n))
    out = []
    for k in sorted(rows):
        members = sorted(rows[k], key=lambda g: _face_ij(code, g))
        out.append(_with_boundary(code, members, f"row{k}", restriction, project=False))
    return out


def ballistic_symmetries(code: StabilizerCode, xi: int) -> list[Symmetry]:
    """Classes of Z-type faces linked by full-length ballistic strings.

    Two faces share a class when some in-lattice string of ``xi`` bit flips
    flips both. Every string then flips an even number of faces of each
    class, apart from strings at the lattice edge, which the class boundary
    operator absorbs. For ``xi = 1`` this is the single materialised Z-type
    symmetry; for ``xi = 2`` the faces split into alternate rows.
    """
    if code.name != "surface":
        raise ValueError(f"ballistic symmetries need a surface code, got {code.name!r}")
    if int(xi) != xi or xi < 1:
        raise ValueError(f"xi must be a positive integer, got {xi!r}")
    zgens = [code.generators[g] for g in code.z_indices]
    parent = list(range(len(zgens)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    strings = BallisticChannel(0.0, xi).strings(code)
    for s in strings:
        if s.weight != xi:
            continue
        bits = syndrome_bits(zgens, s)
        flipped = [i for i in range(len(zgens)) if (bits >> i) & 1]
        for a in flipped[1:]:
            ra, rb = find(a), find(flipped[0])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    classes: dict[int, list[int]] = {}
    for i in range(len(zgens)):
        classes.setdefault(find(i), []).append(code.z_indices[i])
    restriction = tuple(strings)
    return [
        _with_boundary(code, members, f"ballistic{c}", restriction)
        for c, members in enumerate(classes[r] for r in sorted(classes))
    ]

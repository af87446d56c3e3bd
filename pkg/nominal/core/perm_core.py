# =========================================
# ATOMS AND FINITE PERMUTATIONS
# Nominal Equational Logic - reasoning kernel
# =========================================
"""
Atoms, finite permutations of atoms and the operations the rest of the kernel
is built on: composition, inversion, supports, disagreement sets and
generalised transpositions.

Permutations are stored in canonical form (fixpoints never recorded), so two
``Perm`` values are equal exactly when they denote the same bijection.
Composition follows ``compose(p2, p1)(a) == p2(p1(a))``.

>>> a, b, c = atoms("a b c")
>>> str(compose(transposition(a, b), transposition(b, c)))
'(a b c)'
"""

import functools
import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, List, Mapping, Sequence, Tuple, Union

from nominal.core.errors import PermError

_NUMBERED = re.compile(r"^(.*?)(\d+)$")


@functools.total_ordering
@dataclass(frozen=True)
class Atom:
    """A name. Atoms are totally ordered by (stem, numeric suffix, name)."""

    name: str
    sort_key: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        match = _NUMBERED.match(self.name)
        if match and match.group(1):
            key = (match.group(1), int(match.group(2)), self.name)
        else:
            key = (self.name, -1, self.name)
        object.__setattr__(self, "sort_key", key)

    def __lt__(self, other):
        if not isinstance(other, Atom):
            return NotImplemented
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return self.name


AtomSet = frozenset
AtomTuple = Tuple[Atom, ...]


def atom(name: str) -> Atom:
    return Atom(name)


def atoms(names: Union[str, Iterable[str]]) -> AtomTuple:
    """Atoms from a whitespace separated string or an iterable of names"""
    if isinstance(names, str):
        names = names.split()
    return tuple(Atom(n) for n in names)


def atom_set(names: Union[str, Iterable[str]]) -> frozenset:
    return frozenset(atoms(names))


def check_atom_tuple(values: Sequence[Atom]) -> AtomTuple:
    """Validate membership in A^(n): entries pairwise distinct"""
    result = tuple(values)
    if len(set(result)) != len(result):
        dupes = sorted({a for a in result if result.count(a) > 1})
        raise PermError(f"atom tuple has repeated entries: {' '.join(map(str, dupes))}")
    return result


def sorted_atoms(values: Iterable[Atom]) -> AtomTuple:
    """An atom set as a tuple in the global atom order"""
    return tuple(sorted(values))


class Perm:
    """A finitely supported bijection on atoms, stored without fixpoints"""

    __slots__ = ("_map", "_key", "_hash")

    def __init__(self, mapping: Union[Mapping[Atom, Atom], Iterable[Tuple[Atom, Atom]]] = ()):
        raw = dict(mapping)
        canonical = {a: b for a, b in raw.items() if a != b}
        images = list(canonical.values())
        if len(set(images)) != len(images) or set(images) != set(canonical):
            raise PermError("mapping is not a bijection on a finite carrier")
        self._set(canonical)

    @classmethod
    def _canonical(cls, canonical: dict) -> "Perm":
        perm = cls.__new__(cls)
        perm._set(canonical)
        return perm

    def _set(self, canonical: dict) -> None:
        self._map = canonical
        self._key = tuple(sorted(canonical.items()))
        self._hash = hash(self._key)

    def __call__(self, a: Atom) -> Atom:
        return self._map.get(a, a)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Perm):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __mul__(self, other: "Perm") -> "Perm":
        return compose(self, other)

    def __bool__(self) -> bool:
        return bool(self._map)

    @property
    def mapping(self) -> Mapping[Atom, Atom]:
        return MappingProxyType(self._map)

    def items(self) -> Tuple[Tuple[Atom, Atom], ...]:
        return self._key

    def is_identity(self) -> bool:
        return not self._map

    def support(self) -> frozenset:
        return frozenset(self._map)

    def inverse(self) -> "Perm":
        return invert(self)

    def cycles(self) -> List[AtomTuple]:
        """Disjoint cycles, each starting at its least atom, ordered by that atom"""
        seen = set()
        result = []
        for start, _ in self._key:
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            nxt = self._map[start]
            while nxt != start:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = self._map[nxt]
            result.append(tuple(cycle))
        return result

    def __str__(self) -> str:
        if not self._map:
            return "id"
        return "".join("(" + " ".join(str(a) for a in cycle) + ")" for cycle in self.cycles())

    def __repr__(self) -> str:
        return f"Perm({self})"


IDENTITY = Perm._canonical({})


# =========================================
# GROUP OPERATIONS
# =========================================

def apply(p: Perm, a: Atom) -> Atom:
    return p(a)


def compose(p2: Perm, p1: Perm) -> Perm:
    """The permutation a -> p2(p1(a))"""
    if not p1._map:
        return p2
    if not p2._map:
        return p1
    carrier = set(p1._map) | set(p2._map)
    result = {}
    for a in carrier:
        image = p2(p1(a))
        if image != a:
            result[a] = image
    return Perm._canonical(result)


def compose_all(perms: Iterable[Perm]) -> Perm:
    """Left-to-right product p1 p2 ... pn, so pn acts first"""
    result = IDENTITY
    for p in reversed(list(perms)):
        result = compose(p, result)
    return result


def invert(p: Perm) -> Perm:
    return Perm._canonical({b: a for a, b in p._map.items()})


def conjugate(p: Perm, q: Perm) -> Perm:
    """p q p^-1"""
    if not p._map or not q._map:
        return q
    return compose(compose(p, q), invert(p))


def support_perm(p: Perm) -> frozenset:
    return frozenset(p._map)


def disagreement_set(p1: Perm, p2: Perm) -> frozenset:
    """{a | p1(a) != p2(a)}"""
    carrier = set(p1._map) | set(p2._map)
    return frozenset(a for a in carrier if p1(a) != p2(a))


def transposition(a: Atom, b: Atom) -> Perm:
    if a == b:
        return IDENTITY
    return Perm._canonical({a: b, b: a})


def gen_transposition(src: Sequence[Atom], dst: Sequence[Atom]) -> Perm:
    """(a1 b1)(a2 b2)...(an bn) for disjoint tuples src and dst"""
    src = tuple(src)
    dst = tuple(dst)
    if len(src) != len(dst):
        raise PermError(f"generalised transposition needs equal lengths, got {len(src)} and {len(dst)}")
    check_atom_tuple(src)
    check_atom_tuple(dst)
    overlap = set(src) & set(dst)
    if overlap:
        raise PermError(
            "generalised transposition needs disjoint tuples, shared: "
            + " ".join(str(a) for a in sorted(overlap))
        )
    mapping = {}
    for a, b in zip(src, dst):
        mapping[a] = b
        mapping[b] = a
    return Perm._canonical(mapping)


def perm_sending(src: Sequence[Atom], dst: Sequence[Atom]) -> Perm:
    """
    A permutation with src[i] -> dst[i], supported inside set(src) | set(dst).

    Atoms of dst outside src are sent to the atoms of src outside dst, pairing
    both in the global atom order.
    """
    src = check_atom_tuple(src)
    dst = check_atom_tuple(dst)
    if len(src) != len(dst):
        raise PermError("perm_sending needs tuples of equal length")
    mapping = dict(zip(src, dst))
    holes = sorted(set(src) - set(dst))
    pending = sorted(set(dst) - set(src))
    mapping.update(zip(pending, holes))
    return Perm(mapping)


def from_cycles(cycles: Iterable[Sequence[Atom]]) -> Perm:
    """Product of cycles written left to right and applied right to left"""
    perms = []
    for cycle in cycles:
        cycle = check_atom_tuple(cycle)
        if len(cycle) < 2:
            continue
        mapping = {cycle[i]: cycle[(i + 1) % len(cycle)] for i in range(len(cycle))}
        perms.append(Perm._canonical(mapping))
    return compose_all(perms)


def act_atoms(p: Perm, s):
    """Elementwise action on an atom set or an atom tuple"""
    if not p._map:
        return s
    if isinstance(s, (frozenset, set)):
        return frozenset(p(a) for a in s)
    return tuple(p(a) for a in s)


def iter_transpositions(universe: Sequence[Atom]) -> Iterator[Perm]:
    """All transpositions over universe, in the global atom order"""
    ordered = sorted(universe)
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            yield transposition(a, b)

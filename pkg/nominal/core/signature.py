# =========================================
# NEL SIGNATURES
# Nominal Equational Logic - reasoning kernel
# =========================================
"""
Sorts, atom-indexed operation-symbol families and signatures.

An ``OpFamily`` such as ``lam[1] : (tm) -> tm`` stands for the orbit of
symbols ``lam[a]``; an ``OpSymbol`` fixes the atom parameters. Typing lives on
the family, so every member of an orbit has the same type.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Tuple

from nominal.core.errors import SignatureError, SortError
from nominal.core.perm_core import Atom, AtomTuple, Perm, act_atoms, check_atom_tuple


@dataclass(frozen=True, order=True)
class Sort:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class OpFamily:
    name: str
    atom_arity: int
    arg_sorts: Tuple[Sort, ...]
    result_sort: Sort

    def __post_init__(self):
        if self.atom_arity < 0:
            raise SignatureError(f"family {self.name}: negative atom arity")
        object.__setattr__(self, "arg_sorts", tuple(self.arg_sorts))

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)

    def __call__(self, *params: Atom) -> "OpSymbol":
        return OpSymbol(self, tuple(params))

    def __str__(self) -> str:
        head = self.name if self.atom_arity == 0 else f"{self.name}[{self.atom_arity}]"
        if not self.arg_sorts:
            return f"{head} : {self.result_sort}"
        args = ", ".join(str(s) for s in self.arg_sorts)
        return f"{head} : ({args}) -> {self.result_sort}"


@dataclass(frozen=True)
class OpSymbol:
    family: OpFamily
    params: AtomTuple = ()

    def __post_init__(self):
        params = check_atom_tuple(self.params)
        if len(params) != self.family.atom_arity:
            raise SortError(
                f"{self.family.name} takes {self.family.atom_arity} atom parameter(s), got {len(params)}"
            )
        object.__setattr__(self, "params", params)

    @property
    def name(self) -> str:
        return self.family.name

    def __str__(self) -> str:
        if self.family.atom_arity == 0:
            return self.family.name
        return f"{self.family.name}[{', '.join(str(a) for a in self.params)}]"


def op_act(p: Perm, op: OpSymbol) -> OpSymbol:
    """p . op: same family, parameters renamed"""
    if not op.params or p.is_identity():
        return op
    return OpSymbol(op.family, act_atoms(p, op.params))


def op_support(op: OpSymbol) -> frozenset:
    return frozenset(op.params)


def op_type(op: OpSymbol) -> Tuple[Tuple[Sort, ...], Sort]:
    return op.family.arg_sorts, op.family.result_sort


@dataclass(frozen=True)
class Signature:
    """Sorts and operation families with referential integrity"""

    sorts: frozenset = frozenset()
    families: Mapping[str, OpFamily] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "sorts", frozenset(self.sorts))
        object.__setattr__(self, "families", dict(self.families))
        for name, family in self.families.items():
            if name != family.name:
                raise SignatureError(f"family registered as {name} is named {family.name}")
            for sort in family.arg_sorts + (family.result_sort,):
                if sort not in self.sorts:
                    raise SignatureError(f"family {family.name} uses undeclared sort {sort}")

    def __hash__(self) -> int:
        return hash((self.sorts, tuple(sorted(self.families))))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Signature):
            return NotImplemented
        return self.sorts == other.sorts and self.families == other.families

    @classmethod
    def build(cls, sorts: Iterable[str], families: Iterable[OpFamily] = ()) -> "Signature":
        sort_set = set()
        for name in sorts:
            if Sort(name) in sort_set:
                raise SignatureError(f"duplicate sort {name}")
            sort_set.add(Sort(name))
        table: Dict[str, OpFamily] = {}
        for family in families:
            if family.name in table:
                raise SignatureError(f"duplicate operation family {family.name}")
            table[family.name] = family
        return cls(frozenset(sort_set), table)

    def sort(self, name: str) -> Sort:
        sort = Sort(name)
        if sort not in self.sorts:
            raise SortError(f"unknown sort {name}")
        return sort

    def family(self, name: str) -> OpFamily:
        try:
            return self.families[name]
        except KeyError:
            raise SortError(f"unknown operation family {name}") from None

    def lookup(self, name: str) -> Optional[OpFamily]:
        return self.families.get(name)

    def has_family(self, family: OpFamily) -> bool:
        return self.families.get(family.name) == family

    def extend(self, sorts: Iterable[str] = (), families: Iterable[OpFamily] = ()) -> "Signature":
        """A larger signature; redeclaring an identical item is allowed"""
        new_sorts = set(self.sorts) | {Sort(s) for s in sorts}
        table = dict(self.families)
        for family in families:
            existing = table.get(family.name)
            if existing is not None and existing != family:
                raise SignatureError(f"conflicting declarations of operation family {family.name}")
            table[family.name] = family
        return Signature(frozenset(new_sorts), table)

    def ordered_sorts(self) -> Tuple[Sort, ...]:
        return tuple(sorted(self.sorts))

    def ordered_families(self) -> Tuple[OpFamily, ...]:
        return tuple(self.families[name] for name in sorted(self.families))

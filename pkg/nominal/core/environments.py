# =========================================
# FRESHNESS ENVIRONMENTS, JUDGEMENTS, THEORIES
# Nominal Equational Logic - reasoning kernel
# =========================================

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

from nominal.core.errors import JudgementError, SortError
from nominal.core.perm_core import Perm, act_atoms
from nominal.core.signature import Signature, Sort
from nominal.core.terms import SortingEnv, Term, Var, sort_check, term_support

logger = logging.getLogger(__name__)


class Flavour(str, Enum):
    NEL = "nel"
    NEOL = "neol"


@dataclass(frozen=True)
class FreshnessEnv:
    """Finite partial map Var -> (atom set, sort); an empty atom set is still a binding"""

    entries: Tuple[Tuple[Var, frozenset, Sort], ...] = ()
    _table: Dict[Var, Tuple[frozenset, Sort]] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        table = {}
        for var, fresh, sort in self.entries:
            if var in table:
                raise JudgementError(f"freshness environment binds {var} twice")
            table[var] = (frozenset(fresh), sort)
        object.__setattr__(
            self, "entries", tuple((v, table[v][0], table[v][1]) for v in sorted(table))
        )
        object.__setattr__(self, "_table", table)

    @classmethod
    def of(cls, bindings: Union[Mapping[Var, Tuple[Iterable, Sort]], Iterable[Tuple[Var, Iterable, Sort]]]):
        if isinstance(bindings, Mapping):
            return cls(tuple((v, frozenset(a), s) for v, (a, s) in bindings.items()))
        return cls(tuple((v, frozenset(a), s) for v, a, s in bindings))

    @classmethod
    def single(cls, var: Var, fresh: Iterable, sort: Sort) -> "FreshnessEnv":
        return cls(((var, frozenset(fresh), sort),))

    @classmethod
    def from_sorting(cls, se: SortingEnv) -> "FreshnessEnv":
        return cls(tuple((v, frozenset(), s) for v, s in se.entries))

    def __contains__(self, var: Var) -> bool:
        return var in self._table

    def __getitem__(self, var: Var) -> Tuple[frozenset, Sort]:
        return self._table[var]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Tuple[Var, frozenset, Sort]]:
        return iter(self.entries)

    def get(self, var: Var):
        return self._table.get(var)

    def atoms_of(self, var: Var) -> frozenset:
        return self._table[var][0]

    def sort_of(self, var: Var) -> Sort:
        return self._table[var][1]

    def domain(self) -> Tuple[Var, ...]:
        return tuple(v for v, _, _ in self.entries)

    def restrict(self, variables: Iterable[Var]) -> "FreshnessEnv":
        keep = set(variables)
        return FreshnessEnv(tuple(e for e in self.entries if e[0] in keep))

    def __str__(self) -> str:
        from nominal.frontend.printer import print_env

        return print_env(self)


def underlying_sorting_env(fe: FreshnessEnv) -> SortingEnv:
    return SortingEnv(tuple((v, s) for v, _, s in fe.entries))


def fe_leq(fe1: FreshnessEnv, fe2: FreshnessEnv) -> bool:
    """dom grows, sorts agree, atom sets grow"""
    for var, fresh, sort in fe1.entries:
        other = fe2.get(var)
        if other is None:
            return False
        other_fresh, other_sort = other
        if other_sort != sort or not fresh <= other_fresh:
            return False
    return True


def fe_extend(fe: FreshnessEnv, extra: Iterable) -> FreshnessEnv:
    """fe^{#extra}"""
    extra = frozenset(extra)
    if not extra:
        return fe
    return FreshnessEnv(tuple((v, a | extra, s) for v, a, s in fe.entries))


def fe_act(p: Perm, fe: FreshnessEnv) -> FreshnessEnv:
    if p.is_identity():
        return fe
    return FreshnessEnv(tuple((v, act_atoms(p, a), s) for v, a, s in fe.entries))


def fe_support(fe: FreshnessEnv) -> frozenset:
    result = set()
    for _, fresh, _ in fe.entries:
        result |= fresh
    return frozenset(result)


@dataclass(frozen=True)
class Judgement:
    """fe |- fresh # lhs ~ rhs : sort, with both sides sorted at sort under fe"""

    fe: FreshnessEnv
    fresh: frozenset
    lhs: Term
    rhs: Term
    sort: Sort
    flavour: Flavour = field(default=Flavour.NEL, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "fresh", frozenset(self.fresh))
        if self.flavour is Flavour.NEOL and self.fresh:
            raise JudgementError("an NEoL judgement cannot carry a freshness set")
        _check_sides(None, self)

    @classmethod
    def checked(
        cls,
        sig: Signature,
        fe: FreshnessEnv,
        fresh: Iterable,
        lhs: Term,
        rhs: Optional[Term],
        sort: Sort,
        flavour: Flavour = Flavour.NEL,
    ) -> "Judgement":
        """Construct and sort-check both sides; rhs None abbreviates rhs = lhs"""
        judgement = cls(fe, frozenset(fresh), lhs, lhs if rhs is None else rhs, sort, flavour)
        check_judgement(sig, judgement)
        return judgement

    @property
    def is_equation(self) -> bool:
        return not self.fresh

    def with_flavour(self, flavour: Flavour) -> "Judgement":
        return Judgement(self.fe, self.fresh, self.lhs, self.rhs, self.sort, flavour)

    def __str__(self) -> str:
        from nominal.frontend.printer import print_judgement

        return print_judgement(self)


def check_judgement(sig: Signature, j: Judgement) -> None:
    """Both sides sort at j.sort in the sorting environment underlying j.fe"""
    if j.sort not in sig.sorts:
        raise JudgementError(f"unknown sort {j.sort}")
    _check_sides(sig, j)


def _check_sides(sig: Optional[Signature], j: Judgement) -> None:
    se = underlying_sorting_env(j.fe)
    for side, term in (("left", j.lhs), ("right", j.rhs)):
        try:
            found = sort_check(sig, se, term)
        except SortError as e:
            raise JudgementError(f"{side} side does not sort: {e}") from e
        if found != j.sort:
            raise JudgementError(f"{side} side has sort {found}, judgement states {j.sort}")


def judgement_support(j: Judgement) -> frozenset:
    return fe_support(j.fe) | j.fresh | term_support(j.lhs) | term_support(j.rhs)


@dataclass(frozen=True)
class Axiom:
    name: str
    judgement: Judgement


@dataclass(frozen=True)
class Theory:
    """Named axioms over a signature"""

    name: str
    sig: Signature
    axioms: Tuple[Axiom, ...] = ()
    flavour: Flavour = Flavour.NEL
    _by_name: Dict[str, Axiom] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "axioms", tuple(self.axioms))
        table = {}
        for axiom in self.axioms:
            if axiom.name in table:
                raise JudgementError(f"theory {self.name}: duplicate axiom {axiom.name}")
            try:
                check_judgement(self.sig, axiom.judgement)
            except JudgementError as e:
                raise JudgementError(f"theory {self.name}, axiom {axiom.name}: {e}") from e
            if self.flavour is Flavour.NEOL and axiom.judgement.fresh:
                raise JudgementError(
                    f"theory {self.name}: NEoL axiom {axiom.name} carries a freshness set"
                )
            table[axiom.name] = axiom
        object.__setattr__(self, "_by_name", table)

    def axiom(self, name: str) -> Optional[Axiom]:
        return self._by_name.get(name)

    def names(self) -> Tuple[str, ...]:
        return tuple(a.name for a in self.axioms)

    def __len__(self) -> int:
        return len(self.axioms)


def empty_theory(sig: Signature, flavour: Flavour = Flavour.NEOL, name: str = "empty") -> Theory:
    return Theory(name, sig, (), flavour)

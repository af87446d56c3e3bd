# =========================================
# TERMS, ACTIONS AND SUBSTITUTION
# Nominal Equational Logic - reasoning kernel
# =========================================
"""
Terms over a signature: suspensions ``pi x`` and constructed terms
``op(t1, ..., tn)``.

Two permutation actions are provided. ``object_act`` pushes a permutation
into suspensions by left composition and is the action substitution uses;
``meta_act`` conjugates suspensions and is the action under which terms form
a nominal set (and hence the one ``term_support`` is the least support for).
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

from nominal.core.errors import SortError
from nominal.core.perm_core import IDENTITY, Perm, compose, conjugate, invert, support_perm
from nominal.core.signature import OpSymbol, Signature, Sort, op_act, op_support

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Suspension:
    perm: Perm
    var: Var

    def __str__(self) -> str:
        from nominal.frontend.printer import print_term

        return print_term(self)


@dataclass(frozen=True)
class Constructed:
    op: OpSymbol
    args: Tuple["Term", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def __str__(self) -> str:
        from nominal.frontend.printer import print_term

        return print_term(self)


Term = Union[Suspension, Constructed]


def var_term(var: Union[Var, str], perm: Perm = IDENTITY) -> Suspension:
    if isinstance(var, str):
        var = Var(var)
    return Suspension(perm, var)


def construct(op: OpSymbol, *args: Term) -> Constructed:
    return Constructed(op, tuple(args))


# =========================================
# SORTING ENVIRONMENTS AND SUBSTITUTIONS
# =========================================

@dataclass(frozen=True)
class SortingEnv:
    """Finite partial map Var -> Sort, kept sorted by variable"""

    entries: Tuple[Tuple[Var, Sort], ...] = ()
    _table: Dict[Var, Sort] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        table = dict(self.entries)
        if len(table) != len(self.entries):
            raise SortError("sorting environment binds a variable twice")
        object.__setattr__(self, "entries", tuple(sorted(table.items())))
        object.__setattr__(self, "_table", table)

    @classmethod
    def of(cls, mapping: Union[Mapping[Var, Sort], Iterable[Tuple[Var, Sort]]]) -> "SortingEnv":
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        return cls(tuple(items))

    def __contains__(self, var: Var) -> bool:
        return var in self._table

    def __getitem__(self, var: Var) -> Sort:
        return self._table[var]

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, var: Var):
        return self._table.get(var)

    def domain(self) -> Tuple[Var, ...]:
        return tuple(v for v, _ in self.entries)

    def __str__(self) -> str:
        return "(" + ", ".join(f"{v} : {s}" for v, s in self.entries) + ")"


@dataclass(frozen=True)
class Substitution:
    """A map from every variable of source to a term over target"""

    mapping: Tuple[Tuple[Var, Term], ...]
    source: SortingEnv
    target: SortingEnv
    _table: Dict[Var, Term] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        table = dict(self.mapping)
        if len(table) != len(self.mapping):
            raise SortError("substitution binds a variable twice")
        object.__setattr__(self, "mapping", tuple(sorted(table.items(), key=lambda kv: kv[0])))
        object.__setattr__(self, "_table", table)
        if set(table) != set(self.source.domain()):
            missing = sorted(set(self.source.domain()) - set(table))
            extra = sorted(set(table) - set(self.source.domain()))
            detail = []
            if missing:
                detail.append("missing " + ", ".join(map(str, missing)))
            if extra:
                detail.append("outside source " + ", ".join(map(str, extra)))
            raise SortError("substitution domain differs from its source: " + "; ".join(detail))

    @classmethod
    def of(cls, mapping: Mapping[Var, Term], source: SortingEnv, target: SortingEnv) -> "Substitution":
        return cls(tuple(mapping.items()), source, target)

    def __getitem__(self, var: Var) -> Term:
        return self._table[var]

    def get(self, var: Var):
        return self._table.get(var)

    def check(self, sig: Signature) -> None:
        """Every image sorts at the source sort in the target environment"""
        for var, sort in self.source.entries:
            found = sort_check(sig, self.target, self._table[var])
            if found != sort:
                raise SortError(f"substitution sends {var} : {sort} to a term of sort {found}")


# =========================================
# OPERATIONS
# =========================================

def sort_check(sig: Optional[Signature], se: SortingEnv, t: Term) -> Sort:
    """The unique sort of t in se, or SortError; sig None trusts the families the term carries"""
    match t:
        case Suspension(_, var):
            sort = se.get(var)
            if sort is None:
                raise SortError(f"unbound variable {var}")
            return sort
        case Constructed(op, args):
            family = op.family
            if sig is not None and not sig.has_family(family):
                raise SortError(f"unknown operation family {family.name}")
            if len(args) != family.arity:
                raise SortError(f"{family.name} expects {family.arity} argument(s), got {len(args)}")
            for index, (arg, expected) in enumerate(zip(args, family.arg_sorts)):
                found = sort_check(sig, se, arg)
                if found != expected:
                    raise SortError(
                        f"argument {index + 1} of {family.name} has sort {found}, expected {expected}"
                    )
            return family.result_sort
    raise SortError(f"not a term: {t!r}")


def object_act(p: Perm, t: Term) -> Term:
    """p * t"""
    if p.is_identity():
        return t
    match t:
        case Suspension(perm, var):
            return Suspension(compose(p, perm), var)
        case Constructed(op, args):
            return Constructed(op_act(p, op), tuple(object_act(p, a) for a in args))
    raise SortError(f"not a term: {t!r}")


def meta_act(p: Perm, t: Term) -> Term:
    """p . t"""
    if p.is_identity():
        return t
    match t:
        case Suspension(perm, var):
            return Suspension(conjugate(p, perm), var)
        case Constructed(op, args):
            return Constructed(op_act(p, op), tuple(meta_act(p, a) for a in args))
    raise SortError(f"not a term: {t!r}")


def apply_map(t: Term, images: Mapping[Var, Term]) -> Term:
    """(pi x){s} = pi * s(x), without domain bookkeeping"""
    match t:
        case Suspension(perm, var):
            if var not in images:
                raise SortError(f"variable {var} outside the substitution domain")
            return object_act(perm, images[var])
        case Constructed(op, args):
            return Constructed(op, tuple(apply_map(a, images) for a in args))
    raise SortError(f"not a term: {t!r}")


def substitute(t: Term, s: Substitution) -> Term:
    return apply_map(t, s._table)


def term_support(t: Term) -> frozenset:
    match t:
        case Suspension(perm, _):
            return support_perm(perm)
        case Constructed(op, args):
            result = set(op_support(op))
            for a in args:
                result |= term_support(a)
            return frozenset(result)
    raise SortError(f"not a term: {t!r}")


def term_vars(t: Term) -> frozenset:
    match t:
        case Suspension(_, var):
            return frozenset((var,))
        case Constructed(_, args):
            result = set()
            for a in args:
                result |= term_vars(a)
            return frozenset(result)
    raise SortError(f"not a term: {t!r}")


def subterms(t: Term) -> Iterator[Term]:
    """t and all its subterms, parents first"""
    yield t
    if isinstance(t, Constructed):
        for a in t.args:
            yield from subterms(a)


def term_depth(t: Term) -> int:
    if isinstance(t, Suspension) or not t.args:
        return 1
    return 1 + max(term_depth(a) for a in t.args)


def inverse_renaming(p: Perm, se: SortingEnv) -> Substitution:
    """The substitution x -> p^-1 x on every variable of se"""
    inv = invert(p)
    return Substitution(tuple((v, Suspension(inv, v)) for v in se.domain()), se, se)

# =========================================
# THEORY COMPILER
# Nominal Equational Logic - reasoning kernel
# =========================================
"""
Deterministic fresh-atom allocation and the NEL -> NEoL theory compiler.

Fresh atoms come from the canonical supply ``a0, a1, a2, ...`` (the stem is
``settings.FRESH_ATOM_PREFIX``); an allocation always takes the least atoms of
that supply outside the avoid set.

Compilation replaces every axiom ``fe |- as # t ~ t' : s`` by

* ``name``:        ``fe |- t ~ t' : s``
* ``name_fresh``:  ``fe^{#bs} |- t ~ (as bs) * t : s``  (only when ``as`` is non-empty)

with ``as`` in the global atom order and ``bs`` the canonical fresh tuple for
``(fe, as, t)``.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Tuple

from config.settings import settings
from nominal.core.environments import Axiom, Flavour, FreshnessEnv, Judgement, Theory, fe_extend, fe_support
from nominal.core.perm_core import Atom, AtomTuple, gen_transposition, sorted_atoms
from nominal.core.terms import Term, object_act, term_support

logger = logging.getLogger(__name__)

FRESH_SUFFIX = "_fresh"


@dataclass
class FreshAllocator:
    """Hands out distinct atoms of the canonical supply, never touching avoid"""

    avoid: set = field(default_factory=set)
    prefix: str = ""
    _next: int = field(default=0, repr=False)

    def __post_init__(self):
        self.avoid = set(self.avoid)
        if not self.prefix:
            self.prefix = settings.FRESH_ATOM_PREFIX

    def take(self) -> Atom:
        while True:
            candidate = Atom(f"{self.prefix}{self._next}")
            self._next += 1
            if candidate not in self.avoid:
                self.avoid.add(candidate)
                return candidate

    def take_tuple(self, n: int) -> AtomTuple:
        return tuple(self.take() for _ in range(n))

    def reserve(self, atoms: Iterable[Atom]) -> None:
        self.avoid.update(atoms)


def fresh_tuple(n: int, avoid: Iterable[Atom] = ()) -> AtomTuple:
    """n pairwise distinct atoms, least in the canonical supply, outside avoid"""
    return FreshAllocator(set(avoid)).take_tuple(n)


def canonical_fresh(fe: FreshnessEnv, fresh: Iterable[Atom], t: Term) -> Tuple[AtomTuple, AtomTuple]:
    """
    The deterministic pairing used by compilation and translation:
    (fresh in atom order, least tuple fresh for fe, fresh and t).
    """
    fresh = frozenset(fresh)
    order = sorted_atoms(fresh)
    return order, fresh_tuple(len(order), fe_support(fe) | fresh | term_support(t))


def fresh_axiom_name(name: str) -> str:
    return name + FRESH_SUFFIX


def compile_axiom(axiom: Axiom) -> List[Axiom]:
    j = axiom.judgement
    result = [Axiom(axiom.name, Judgement(j.fe, frozenset(), j.lhs, j.rhs, j.sort, Flavour.NEOL))]
    if j.fresh:
        order, chosen = canonical_fresh(j.fe, j.fresh, j.lhs)
        swapped = object_act(gen_transposition(order, chosen), j.lhs)
        result.append(
            Axiom(
                fresh_axiom_name(axiom.name),
                Judgement(fe_extend(j.fe, chosen), frozenset(), j.lhs, swapped, j.sort, Flavour.NEOL),
            )
        )
        logger.debug("compiled %s with fresh tuple %s", axiom.name, " ".join(map(str, chosen)))
    return result


def compile_theory(t: Theory, name: str = None) -> Theory:
    """The NEoL theory T° over the same signature"""
    axioms: List[Axiom] = []
    for axiom in t.axioms:
        axioms.extend(compile_axiom(axiom))
    compiled = Theory(name or t.name, t.sig, tuple(axioms), Flavour.NEOL)
    logger.info("compiled theory %s: %d axiom(s) -> %d", t.name, len(t), len(compiled))
    return compiled

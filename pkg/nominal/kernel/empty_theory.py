# =========================================
# EMPTY THEORY: DECISION PROCEDURES
# Nominal Equational Logic - reasoning kernel
# =========================================
"""
Syntax-directed equality and freshness in the empty theory.

Equality: two suspensions of the same variable are equal when their
disagreement set is among the atoms assumed fresh for that variable; two
constructed terms are equal when they share the operation symbol and their
arguments are pairwise equal.

Freshness: ``as # pi x`` holds when ``pi^-1 . as`` is assumed fresh for x;
``as # op(ts)`` holds when ``as`` misses the parameters of op and is fresh for
every argument.

Both run by structural recursion; no proof search is involved.
"""

import logging
from typing import Iterable

from nominal.core.environments import FreshnessEnv, Judgement, check_judgement, fe_extend, underlying_sorting_env
from nominal.core.errors import BuildError, JudgementError, SortError
from nominal.core.perm_core import act_atoms, disagreement_set, gen_transposition, invert
from nominal.core.signature import Signature, Sort, op_support
from nominal.core.terms import Constructed, Suspension, Term, object_act, sort_check
from nominal.kernel.builders import congruence_node, eq_to_fresh, weak_to
from nominal.kernel.proof_kernel import Derivation, refl_node, susp_node
from nominal.kernel.theory_compiler import canonical_fresh
from nominal.kernel.translation import embed_neol_derivation

logger = logging.getLogger(__name__)


def _require_sorted(sig: Signature, fe: FreshnessEnv, s: Sort, *terms: Term) -> None:
    se = underlying_sorting_env(fe)
    for t in terms:
        found = sort_check(sig, se, t)
        if found != s:
            raise SortError(f"{t} has sort {found}, expected {s}")


def _equal(fe: FreshnessEnv, t1: Term, t2: Term) -> bool:
    match t1, t2:
        case Suspension(p1, x1), Suspension(p2, x2):
            if x1 != x2:
                return False
            return disagreement_set(p1, p2) <= fe.atoms_of(x1)
        case Constructed(op1, args1), Constructed(op2, args2):
            if op1 != op2:
                return False
            return all(_equal(fe, a, b) for a, b in zip(args1, args2))
    return False


def _fresh(fe: FreshnessEnv, atoms: frozenset, t: Term) -> bool:
    if not atoms:
        return True
    match t:
        case Suspension(perm, var):
            return act_atoms(invert(perm), atoms) <= fe.atoms_of(var)
        case Constructed(op, args):
            if atoms & op_support(op):
                return False
            return all(_fresh(fe, atoms, a) for a in args)
    return False


def decide_eq(sig: Signature, fe: FreshnessEnv, t1: Term, t2: Term, s: Sort) -> bool:
    """fe |- t1 ~ t2 : s in the empty theory"""
    _require_sorted(sig, fe, s, t1, t2)
    return _equal(fe, t1, t2)


def decide_fresh(sig: Signature, fe: FreshnessEnv, atoms: Iterable, t: Term, s: Sort) -> bool:
    """fe |- atoms # t : s in the empty theory"""
    _require_sorted(sig, fe, s, t)
    return _fresh(fe, frozenset(atoms), t)


def decide_judgement(sig: Signature, j: Judgement) -> bool:
    """
    Any judgement: fe |- as # t ~ t' holds exactly when t ~ t' and as # t.
    """
    try:
        check_judgement(sig, j)
    except JudgementError as e:
        raise SortError(str(e)) from e
    return _equal(j.fe, j.lhs, j.rhs) and _fresh(j.fe, j.fresh, j.lhs)


def _certify(fe: FreshnessEnv, t1: Term, t2: Term, s: Sort) -> Derivation:
    if t1 == t2:
        return refl_node(fe, t1, s)
    match t1, t2:
        case Suspension(p1, var), Suspension(p2, _):
            return weak_to(susp_node(p1, p2, var, s), fe)
        case Constructed(op, args1), Constructed(_, args2):
            premises = [
                _certify(fe, a, b, arg_sort) for a, b, arg_sort in zip(args1, args2, op.family.arg_sorts)
            ]
            return congruence_node(op, fe, args1, args2, premises)
    raise BuildError(f"certify_eq: no rule relates {t1} and {t2}")


def certify_eq(sig: Signature, fe: FreshnessEnv, t1: Term, t2: Term, s: Sort) -> Derivation:
    """An NEoL derivation of fe |- t1 ~ t2 : s over the empty theory"""
    if not decide_eq(sig, fe, t1, t2, s):
        raise BuildError(f"certify_eq: {t1} ~ {t2} does not hold in the empty theory")
    d = _certify(fe, t1, t2, s)
    logger.debug("certified %s ~ %s", t1, t2)
    return d


def certify_fresh(sig: Signature, fe: FreshnessEnv, atoms: Iterable, t: Term, s: Sort) -> Derivation:
    """An NEL derivation of fe |- atoms # t : s over the empty theory"""
    atoms = frozenset(atoms)
    if not decide_fresh(sig, fe, atoms, t, s):
        raise BuildError(f"certify_fresh: freshness does not hold in the empty theory for {t}")
    order, chosen = canonical_fresh(fe, atoms, t)
    swapped = object_act(gen_transposition(order, chosen), t)
    equation = certify_eq(sig, fe_extend(fe, chosen), t, swapped, s)
    return eq_to_fresh(fe, order, chosen, t, s, embed_neol_derivation(equation))

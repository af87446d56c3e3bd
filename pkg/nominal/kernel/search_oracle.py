# =========================================
# BOUNDED PROOF SEARCH (untrusted)
# Nominal Equational Logic - reasoning kernel
# =========================================
"""
Backward, depth-bounded search for derivations, used to cross-validate the
decision procedures and the kernel on small goals.

Rule instances are drawn from a finite SearchBudget. Alternatives are tried in
a fixed order and the first success wins, so results are deterministic for a
given budget. Every derivation returned has been re-checked by the kernel;
``None`` only means "not found within budget".
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Set, Tuple

from config.settings import settings
from nominal.core.environments import (
    Flavour,
    FreshnessEnv,
    Judgement,
    Theory,
    fe_extend,
    fe_leq,
    judgement_support,
    underlying_sorting_env,
)
from nominal.core.errors import CheckError, NominalError
from nominal.core.perm_core import (
    IDENTITY,
    act_atoms,
    compose,
    gen_transposition,
    invert,
    iter_transpositions,
    sorted_atoms,
)
from nominal.core.terms import (
    Constructed,
    Substitution,
    Suspension,
    Term,
    Var,
    object_act,
    sort_check,
    subterms,
    term_support,
    term_vars,
)
from nominal.kernel.builders import congruence_node, eq_to_fresh, weak_to
from nominal.kernel.proof_kernel import (
    Derivation,
    atm_elim_node,
    atm_intro_node,
    axiom_node,
    check,
    derivation_depth,
    equivar_node,
    refl_node,
    subst_node,
    susp_node,
    symm_node,
    trans_node,
)
from nominal.kernel.theory_compiler import canonical_fresh, fresh_tuple

logger = logging.getLogger(__name__)


def _by_text(items: Iterable) -> list:
    return sorted(items, key=str)


@dataclass(frozen=True)
class SearchBudget:
    max_depth: int
    atom_universe: frozenset = frozenset()
    candidate_perms: frozenset = frozenset()
    candidate_terms: frozenset = frozenset()

    @classmethod
    def default_for(
        cls,
        theory: Theory,
        goal: Judgement,
        depth: Optional[int] = None,
        atoms: Optional[int] = None,
        perm_len: Optional[int] = None,
        max_terms: Optional[int] = None,
    ) -> "SearchBudget":
        """
        A budget around the goal: its atoms plus ``atoms`` fresh ones, products of
        up to ``perm_len`` transpositions over them, and the goal's subterms
        moved by those permutations.
        """
        depth = settings.SEARCH_MAX_DEPTH if depth is None else depth
        atoms = settings.SEARCH_ATOMS if atoms is None else atoms
        perm_len = settings.SEARCH_PERM_LEN if perm_len is None else perm_len
        max_terms = settings.SEARCH_MAX_CANDIDATE_TERMS if max_terms is None else max_terms

        base = set(judgement_support(goal))
        for axiom in theory.axioms:
            base |= judgement_support(axiom.judgement)
        universe = frozenset(base) | frozenset(fresh_tuple(atoms, base))

        perms = {IDENTITY}
        layer = {IDENTITY}
        transpositions = list(iter_transpositions(sorted_atoms(universe)))
        for _ in range(perm_len):
            layer = {compose(t, p) for p in layer for t in transpositions}
            perms |= layer

        terms: List[Term] = []
        seen = set()
        for source in (goal.lhs, goal.rhs):
            for sub in subterms(source):
                if sub not in seen:
                    seen.add(sub)
                    terms.append(sub)
        for p in _by_text(perms):
            if len(terms) >= max_terms:
                break
            for source in (goal.lhs, goal.rhs):
                moved = object_act(p, source)
                if moved not in seen and len(terms) < max_terms:
                    seen.add(moved)
                    terms.append(moved)
        return cls(depth, universe, frozenset(perms), frozenset(terms[:max_terms]))


def match_term(pattern: Term, target: Term, bindings: Dict[Var, Term]) -> bool:
    """Extend bindings so that pattern{bindings} = target; no atom renaming"""
    match pattern:
        case Suspension(perm, var):
            image = object_act(invert(perm), target)
            bound = bindings.get(var)
            if bound is None:
                bindings[var] = image
                return True
            return bound == image
        case Constructed(op, args):
            if not isinstance(target, Constructed) or target.op != op:
                return False
            return all(match_term(p, t, bindings) for p, t in zip(args, target.args))
    return False


@dataclass
class _Search:
    theory: Theory
    budget: SearchBudget
    failed: Set[Tuple[Judgement, int, bool]] = field(default_factory=set)
    found: Dict[Judgement, Tuple[int, Derivation]] = field(default_factory=dict)
    visited: int = 0

    def __post_init__(self):
        self.nel = self.theory.flavour is Flavour.NEL
        self.sig = self.theory.sig
        self.terms = _by_text(self.budget.candidate_terms)
        self.atoms = sorted_atoms(self.budget.atom_universe)

    def prove(self, goal: Judgement, depth: int, allow_symm: bool = True) -> Optional[Derivation]:
        if depth <= 0:
            return None
        cached = self.found.get(goal)
        if cached is not None and cached[0] <= depth:
            return cached[1]
        key = (goal, depth, allow_symm)
        if key in self.failed:
            return None
        self.visited += 1
        for candidate in self._alternatives(goal, depth, allow_symm):
            if candidate is not None and candidate.conclusion == goal:
                self.found[goal] = (depth, candidate)
                return candidate
        self.failed.add(key)
        return None

    # -----------------------------------------

    def _alternatives(self, goal: Judgement, depth: int, allow_symm: bool) -> Iterator[Optional[Derivation]]:
        yield from self._leaves(goal)
        if depth < 2:
            return
        yield from self._weakened_leaves(goal)
        yield self._restrict(goal, depth)
        yield from self._congruence(goal, depth)
        yield from self._axiom_instances(goal, depth)
        if self.nel:
            yield self._atm_intro(goal, depth)
            yield self._split_freshness(goal, depth)
            yield self._via_swap(goal, depth)
        if allow_symm:
            yield self._symm(goal, depth)
        yield self._atm_elim(goal, depth)
        if depth >= 3:
            yield from self._trans(goal, depth)

    def _leaves(self, goal: Judgement) -> Iterator[Optional[Derivation]]:
        fe, t, u, s = goal.fe, goal.lhs, goal.rhs, goal.sort
        if not goal.fresh and t == u:
            yield refl_node(fe, t, s)
        for axiom in self.theory.axioms:
            if axiom.judgement == goal:
                yield axiom_node(self.theory, axiom.name)
        if isinstance(t, Suspension) and isinstance(u, Suspension) and t.var == u.var and not goal.fresh:
            yield susp_node(t.perm, u.perm, t.var, s)
        if self.nel and isinstance(t, Suspension) and t == u and len(fe) == 1 and t.var in fe:
            yield equivar_node(t.perm, t.var, fe.atoms_of(t.var), s)

    def _weakened_leaves(self, goal: Judgement) -> Iterator[Optional[Derivation]]:
        fe, t, u, s = goal.fe, goal.lhs, goal.rhs, goal.sort
        for axiom in self.theory.axioms:
            j = axiom.judgement
            if (j.fresh, j.lhs, j.rhs, j.sort) == (goal.fresh, t, u, s) and j.fe != fe and fe_leq(j.fe, fe):
                yield weak_to(axiom_node(self.theory, axiom.name), fe)
        if not isinstance(t, Suspension) or not isinstance(u, Suspension) or t.var != u.var:
            return
        if t.var not in fe or fe.sort_of(t.var) != s:
            return
        if not goal.fresh:
            leaf = susp_node(t.perm, u.perm, t.var, s)
            if leaf.conclusion.fe != fe and fe_leq(leaf.conclusion.fe, fe):
                yield weak_to(leaf, fe)
        if self.nel and t == u:
            leaf = equivar_node(t.perm, t.var, act_atoms(invert(t.perm), goal.fresh), s)
            if leaf.conclusion.fe != fe and fe_leq(leaf.conclusion.fe, fe):
                yield weak_to(leaf, fe)

    def _restrict(self, goal: Judgement, depth: int) -> Optional[Derivation]:
        used = term_vars(goal.lhs) | term_vars(goal.rhs)
        smaller = goal.fe.restrict(used)
        if smaller == goal.fe:
            return None
        premise = self.prove(Judgement(smaller, goal.fresh, goal.lhs, goal.rhs, goal.sort), depth - 1)
        return weak_to(premise, goal.fe) if premise else None

    def _congruence(self, goal: Judgement, depth: int) -> Iterator[Optional[Derivation]]:
        t, u = goal.lhs, goal.rhs
        if goal.fresh or not isinstance(t, Constructed) or not isinstance(u, Constructed) or t.op != u.op:
            return
        if t == u:
            return
        premises = []
        for a, b, arg_sort in zip(t.args, u.args, t.op.family.arg_sorts):
            premise = self.prove(Judgement(goal.fe, frozenset(), a, b, arg_sort), depth - 1)
            if premise is None:
                return
            premises.append(premise)
        yield congruence_node(t.op, goal.fe, t.args, u.args, premises)

    def _axiom_instances(self, goal: Judgement, depth: int) -> Iterator[Optional[Derivation]]:
        for axiom in self.theory.axioms:
            j = axiom.judgement
            if j.sort != goal.sort or j.fresh != goal.fresh or not len(j.fe):
                continue
            left: Dict[Var, Term] = {}
            right: Dict[Var, Term] = {}
            if not match_term(j.lhs, goal.lhs, left) or not match_term(j.rhs, goal.rhs, right):
                continue
            variables = j.fe.domain()
            for var in variables:
                if var not in left and var in right:
                    left[var] = right[var]
                if var not in right and var in left:
                    right[var] = left[var]
            if any(var not in left for var in variables):
                continue
            try:
                source = underlying_sorting_env(j.fe)
                target = underlying_sorting_env(goal.fe)
                sigma = Substitution.of({v: left[v] for v in variables}, source, target)
                sigma_prime = Substitution.of({v: right[v] for v in variables}, source, target)
                sigma.check(self.sig)
                sigma_prime.check(self.sig)
            except NominalError:
                continue
            yield self._instance(goal, depth, axiom.name, sigma, sigma_prime)

    def _instance(self, goal, depth, name, sigma, sigma_prime) -> Optional[Derivation]:
        source = self.theory.axiom(name).judgement.fe
        equations, fresh_premises, tuples = [], [], []
        for var, fresh, sort in source.entries:
            wanted = fresh if self.nel else frozenset()
            premise = self.prove(Judgement(goal.fe, wanted, sigma[var], sigma_prime[var], sort), depth - 1)
            if premise is None:
                return None
            equations.append(premise)
        if not self.nel:
            for var, fresh, sort in source.entries:
                if not fresh:
                    continue
                image = sigma[var]
                order, chosen = canonical_fresh(goal.fe, fresh, image)
                swapped = object_act(gen_transposition(order, chosen), image)
                extended = Judgement(fe_extend(goal.fe, chosen), frozenset(), image, swapped, sort)
                premise = self.prove(extended, depth - 1)
                if premise is None:
                    return None
                fresh_premises.append(premise)
                tuples.append((var, order, chosen))
        main = axiom_node(self.theory, name)
        return subst_node(sigma, sigma_prime, goal.fe, equations, main, fresh_premises, tuples)

    def _atm_intro(self, goal: Judgement, depth: int) -> Optional[Derivation]:
        if not goal.fresh:
            return None
        loose = goal.fresh - term_support(goal.lhs) - term_support(goal.rhs)
        for _, fresh, _ in goal.fe.entries:
            loose &= fresh
        if not loose:
            return None
        smaller = FreshnessEnv(tuple((v, a - loose, s) for v, a, s in goal.fe.entries))
        premise = self.prove(
            Judgement(smaller, goal.fresh - loose, goal.lhs, goal.rhs, goal.sort), depth - 1
        )
        if premise is None:
            return None
        node = atm_intro_node(premise, loose)
        return node if node.conclusion.fe == goal.fe else None

    def _split_freshness(self, goal: Judgement, depth: int) -> Optional[Derivation]:
        if not goal.fresh or goal.lhs == goal.rhs:
            return None
        freshness = self.prove(Judgement(goal.fe, goal.fresh, goal.lhs, goal.lhs, goal.sort), depth - 1)
        if freshness is None:
            return None
        equation = self.prove(Judgement(goal.fe, frozenset(), goal.lhs, goal.rhs, goal.sort), depth - 1)
        return trans_node(freshness, equation) if equation else None

    def _via_swap(self, goal: Judgement, depth: int) -> Optional[Derivation]:
        if not goal.fresh or goal.lhs != goal.rhs:
            return None
        order, chosen = canonical_fresh(goal.fe, goal.fresh, goal.lhs)
        swapped = object_act(gen_transposition(order, chosen), goal.lhs)
        equation = self.prove(Judgement(fe_extend(goal.fe, chosen), frozenset(), goal.lhs, swapped, goal.sort), depth - 1)
        if equation is None:
            return None
        return eq_to_fresh(goal.fe, order, chosen, goal.lhs, goal.sort, equation)

    def _symm(self, goal: Judgement, depth: int) -> Optional[Derivation]:
        if goal.lhs == goal.rhs:
            return None
        premise = self.prove(
            Judgement(goal.fe, goal.fresh, goal.rhs, goal.lhs, goal.sort), depth - 1, allow_symm=False
        )
        return symm_node(premise) if premise else None

    def _atm_elim(self, goal: Judgement, depth: int) -> Optional[Derivation]:
        if not len(goal.fe):
            return None
        taken = judgement_support(goal)
        spare = [a for a in self.atoms if a not in taken]
        if not spare:
            return None
        atom = spare[0]
        premise = self.prove(
            Judgement(fe_extend(goal.fe, (atom,)), goal.fresh, goal.lhs, goal.rhs, goal.sort), depth - 1
        )
        return atm_elim_node(premise, (atom,), goal.fe) if premise else None

    def _trans(self, goal: Judgement, depth: int) -> Iterator[Optional[Derivation]]:
        se = underlying_sorting_env(goal.fe)
        middles = []
        for candidate in self.terms:
            if candidate in (goal.lhs, goal.rhs):
                continue
            try:
                if sort_check(self.sig, se, candidate) != goal.sort:
                    continue
            except NominalError:
                continue
            middles.append(candidate)
        for middle in middles:
            first = self.prove(Judgement(goal.fe, goal.fresh, goal.lhs, middle, goal.sort), depth - 1)
            if first is None:
                continue
            second = self.prove(Judgement(goal.fe, frozenset(), middle, goal.rhs, goal.sort), depth - 1)
            if second is not None:
                yield trans_node(first, second)


def bounded_search(theory: Theory, goal: Judgement, budget: SearchBudget) -> Optional[Derivation]:
    """Iterative deepening up to budget.max_depth; the result always re-checks"""
    search = _Search(theory, budget)
    for depth in range(1, budget.max_depth + 1):
        found = search.prove(goal, depth)
        if found is None:
            continue
        try:
            check(theory, found)
        except CheckError as e:
            logger.warning("search produced a derivation the kernel rejects: %s", e)
            return None
        logger.debug(
            "search: found at depth %d (tree depth %d) after %d goal visits",
            depth,
            derivation_depth(found),
            search.visited,
        )
        return found
    logger.debug("search: nothing within depth %d after %d goal visits", budget.max_depth, search.visited)
    return None

# =========================================
# PROOF KERNEL
# Nominal Equational Logic - reasoning kernel
# =========================================
"""
Derivations and the trusted checkers for NEL and NEoL.

A derivation is an explicit tree: every node records its rule, the rule's
instantiation data, its premises and its conclusion. The checkers never
search; they recompute what each rule instance demands and compare.

Subst nodes list their premises as follows (variables in variable order):

* NEL:  one premise ``fe' |- a_i # s(x_i) ~ s'(x_i)`` per variable, then the main premise.
* NEoL: one equation premise per variable, then one freshness premise
  ``fe'^{#b_i} |- s(x_i) ~ (a_i b_i) * s(x_i)`` per variable whose atom set is
  non-empty, then the main premise.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from nominal.core.environments import (
    Flavour,
    FreshnessEnv,
    Judgement,
    Theory,
    check_judgement,
    fe_act,
    fe_extend,
    fe_leq,
    fe_support,
    underlying_sorting_env,
)
from nominal.core.errors import CheckError, JudgementError, NominalError, PermError, SortError
from nominal.core.perm_core import (
    AtomTuple,
    Perm,
    act_atoms,
    check_atom_tuple,
    conjugate,
    disagreement_set,
    gen_transposition,
)
from nominal.core.signature import Sort
from nominal.core.terms import (
    Substitution,
    Suspension,
    Term,
    Var,
    meta_act,
    object_act,
    substitute,
    term_support,
)

logger = logging.getLogger(__name__)


# =========================================
# RULES
# =========================================

@dataclass(frozen=True)
class AxiomRef:
    name: str
    label = "axiom"


@dataclass(frozen=True)
class Refl:
    label = "refl"


@dataclass(frozen=True)
class Symm:
    label = "symm"


@dataclass(frozen=True)
class Trans:
    label = "trans"


@dataclass(frozen=True)
class Weak:
    target: FreshnessEnv
    label = "weak"


@dataclass(frozen=True)
class Subst:
    sigma: Substitution
    sigma_prime: Substitution
    fresh_tuples: Tuple[Tuple[Var, AtomTuple, AtomTuple], ...] = ()
    label = "subst"

    def __post_init__(self):
        object.__setattr__(
            self, "fresh_tuples", tuple(sorted(self.fresh_tuples, key=lambda item: item[0]))
        )

    def fresh_table(self) -> Dict[Var, Tuple[AtomTuple, AtomTuple]]:
        return {var: (order, fresh) for var, order, fresh in self.fresh_tuples}


@dataclass(frozen=True)
class AtmIntro:
    atoms: frozenset
    label = "atm-intro"


@dataclass(frozen=True)
class AtmElim:
    atoms: frozenset
    label = "atm-elim"


@dataclass(frozen=True)
class FreshEquivar:
    perm: Perm
    label = "#-equivar"


@dataclass(frozen=True)
class Susp:
    perm1: Perm
    perm2: Perm
    var: Var
    sort: Sort
    label = "susp"


Rule = Union[AxiomRef, Refl, Symm, Trans, Weak, Subst, AtmIntro, AtmElim, FreshEquivar, Susp]

NEOL_RULES = (AxiomRef, Refl, Symm, Trans, Weak, Subst, AtmElim, Susp)
NEL_RULES = NEOL_RULES + (AtmIntro, FreshEquivar)


@dataclass(frozen=True)
class Derivation:
    rule: Rule
    premises: Tuple["Derivation", ...]
    conclusion: Judgement

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))

    @property
    def label(self) -> str:
        return self.rule.label


def derivation_size(d: Derivation) -> int:
    return 1 + sum(derivation_size(p) for p in d.premises)


def derivation_depth(d: Derivation) -> int:
    if not d.premises:
        return 1
    return 1 + max(derivation_depth(p) for p in d.premises)


def iter_nodes(d: Derivation):
    """Pre-order walk"""
    yield d
    for p in d.premises:
        yield from iter_nodes(p)


def _act_judgement(p: Perm, j: Judgement) -> Judgement:
    return Judgement(
        fe_act(p, j.fe), act_atoms(p, j.fresh), meta_act(p, j.lhs), meta_act(p, j.rhs), j.sort, j.flavour
    )


def _act_substitution(p: Perm, s: Substitution) -> Substitution:
    return Substitution(tuple((v, meta_act(p, t)) for v, t in s.mapping), s.source, s.target)


def _act_rule(p: Perm, rule: Rule) -> Rule:
    match rule:
        case Weak(target):
            return Weak(fe_act(p, target))
        case Subst(sigma, sigma_prime, fresh_tuples):
            return Subst(
                _act_substitution(p, sigma),
                _act_substitution(p, sigma_prime),
                tuple((v, act_atoms(p, order), act_atoms(p, chosen)) for v, order, chosen in fresh_tuples),
            )
        case AtmIntro(atoms):
            return AtmIntro(act_atoms(p, atoms))
        case AtmElim(atoms):
            return AtmElim(act_atoms(p, atoms))
        case FreshEquivar(perm):
            return FreshEquivar(conjugate(p, perm))
        case Susp(perm1, perm2, var, sort):
            return Susp(conjugate(p, perm1), conjugate(p, perm2), var, sort)
    return rule


def act_derivation(p: Perm, d: Derivation) -> Derivation:
    """p . d: the meta-level action on every judgement and every piece of rule data"""
    if p.is_identity():
        return d
    return Derivation(
        _act_rule(p, d.rule), tuple(act_derivation(p, q) for q in d.premises), _act_judgement(p, d.conclusion)
    )


# =========================================
# NODE CONSTRUCTORS (conclusions computed, nothing checked)
# =========================================

def refl_node(fe: FreshnessEnv, t: Term, sort: Sort) -> Derivation:
    return Derivation(Refl(), (), Judgement(fe, frozenset(), t, t, sort))


def axiom_node(theory: Theory, name: str) -> Derivation:
    axiom = theory.axiom(name)
    if axiom is None:
        raise CheckError(f"no axiom named {name} in theory {theory.name}", "axiom")
    return Derivation(AxiomRef(name), (), axiom.judgement)


def symm_node(d: Derivation) -> Derivation:
    c = d.conclusion
    return Derivation(Symm(), (d,), Judgement(c.fe, c.fresh, c.rhs, c.lhs, c.sort))


def trans_node(d1: Derivation, d2: Derivation) -> Derivation:
    c1, c2 = d1.conclusion, d2.conclusion
    return Derivation(Trans(), (d1, d2), Judgement(c1.fe, c1.fresh | c2.fresh, c1.lhs, c2.rhs, c1.sort))


def weak_node(d: Derivation, target: FreshnessEnv) -> Derivation:
    c = d.conclusion
    return Derivation(Weak(target), (d,), Judgement(target, c.fresh, c.lhs, c.rhs, c.sort))


def susp_node(perm1: Perm, perm2: Perm, var: Var, sort: Sort) -> Derivation:
    fe = FreshnessEnv.single(var, disagreement_set(perm1, perm2), sort)
    return Derivation(
        Susp(perm1, perm2, var, sort),
        (),
        Judgement(fe, frozenset(), Suspension(perm1, var), Suspension(perm2, var), sort),
    )


def equivar_node(perm: Perm, var: Var, fresh: Iterable, sort: Sort) -> Derivation:
    fresh = frozenset(fresh)
    fe = FreshnessEnv.single(var, fresh, sort)
    term = Suspension(perm, var)
    return Derivation(FreshEquivar(perm), (), Judgement(fe, act_atoms(perm, fresh), term, term, sort))


def atm_intro_node(d: Derivation, atoms: Iterable) -> Derivation:
    atoms = frozenset(atoms)
    c = d.conclusion
    return Derivation(
        AtmIntro(atoms), (d,), Judgement(fe_extend(c.fe, atoms), c.fresh | atoms, c.lhs, c.rhs, c.sort)
    )


def atm_elim_node(d: Derivation, atoms: Iterable, target: FreshnessEnv) -> Derivation:
    c = d.conclusion
    return Derivation(AtmElim(frozenset(atoms)), (d,), Judgement(target, c.fresh, c.lhs, c.rhs, c.sort))


def subst_node(
    sigma: Substitution,
    sigma_prime: Substitution,
    target: FreshnessEnv,
    var_premises: Sequence[Derivation],
    main: Derivation,
    fresh_premises: Sequence[Derivation] = (),
    fresh_tuples: Iterable[Tuple[Var, AtomTuple, AtomTuple]] = (),
) -> Derivation:
    c = main.conclusion
    conclusion = Judgement(target, c.fresh, substitute(c.lhs, sigma), substitute(c.rhs, sigma_prime), c.sort)
    return Derivation(
        Subst(sigma, sigma_prime, tuple(fresh_tuples)),
        tuple(var_premises) + tuple(fresh_premises) + (main,),
        conclusion,
    )


# =========================================
# CONCLUSION INFERENCE (for scripts that omit a conclusion)
# =========================================

def infer_conclusion(theory: Theory, rule: Rule, premises: Sequence[Derivation]) -> Judgement:
    match rule:
        case AxiomRef(name):
            axiom = theory.axiom(name)
            if axiom is None:
                raise CheckError(f"no axiom named {name} in theory {theory.name}", "axiom")
            return axiom.judgement
        case Symm() if len(premises) == 1:
            return symm_node(premises[0]).conclusion
        case Trans() if len(premises) == 2:
            return trans_node(premises[0], premises[1]).conclusion
        case AtmIntro(atoms) if len(premises) == 1:
            return atm_intro_node(premises[0], atoms).conclusion
    raise CheckError("this rule needs an explicit conclusion", rule.label)


# =========================================
# CHECKERS
# =========================================

def _atoms(values) -> str:
    return " ".join(str(a) for a in sorted(values))


class _Checker:
    """One checking run; verdicts are memoised per node object"""

    def __init__(self, theory: Theory, flavour: Flavour):
        self.theory = theory
        self.sig = theory.sig
        self.flavour = flavour
        self.allowed = NEL_RULES if flavour is Flavour.NEL else NEOL_RULES
        self._verified: Dict[int, Derivation] = {}
        self.nodes = 0

    def check(self, d: Derivation) -> Judgement:
        key = id(d)
        if key in self._verified:
            return d.conclusion
        if not isinstance(d, Derivation):
            raise CheckError(f"not a derivation: {d!r}")
        for index, premise in enumerate(d.premises):
            try:
                self.check(premise)
            except CheckError as e:
                raise e.at(index) from None
        try:
            self._check_node(d)
        except CheckError:
            raise
        except (NominalError, AttributeError, TypeError, KeyError, ValueError) as e:
            raise CheckError(f"malformed node: {e}", getattr(d.rule, "label", None)) from e
        self._verified[key] = d
        self.nodes += 1
        return d.conclusion

    # -----------------------------------------

    def _fail(self, d: Derivation, message: str, atoms: Iterable = ()):
        raise CheckError(message, getattr(d.rule, "label", None), (), atoms)

    def _premises(self, d: Derivation, count: int) -> List[Judgement]:
        if len(d.premises) != count:
            self._fail(d, f"expected {count} premise(s), found {len(d.premises)}")
        return [p.conclusion for p in d.premises]

    def _expect(self, d: Derivation, expected: Judgement) -> None:
        if d.conclusion != expected:
            self._fail(d, f"conclusion mismatch: expected {expected}, found {d.conclusion}")

    def _expect_premise(self, d: Derivation, index: int, expected: Judgement) -> None:
        found = d.premises[index].conclusion
        if found != expected:
            self._fail(d, f"premise {index} mismatch: expected {expected}, found {found}")

    def _check_node(self, d: Derivation) -> None:
        rule = d.rule
        if not isinstance(rule, self.allowed):
            self._fail(d, f"rule {getattr(rule, 'label', rule)!s} is not a {self.flavour.value.upper()} rule")
        c = d.conclusion
        if not isinstance(c, Judgement):
            self._fail(d, "node carries no judgement")
        if self.flavour is Flavour.NEOL and c.fresh:
            self._fail(d, "NEoL judgements carry no freshness set", c.fresh)
        try:
            check_judgement(self.sig, c)
        except JudgementError as e:
            self._fail(d, f"ill-formed conclusion: {e}")

        match rule:
            case AxiomRef(name):
                self._premises(d, 0)
                axiom = self.theory.axiom(name)
                if axiom is None:
                    self._fail(d, f"axiom {name} not found in theory {self.theory.name}")
                self._expect(d, axiom.judgement)
            case Refl():
                self._premises(d, 0)
                if c.fresh or c.lhs != c.rhs:
                    self._fail(d, "refl concludes t ~ t with no freshness set")
            case Symm():
                (p,) = self._premises(d, 1)
                self._expect(d, Judgement(p.fe, p.fresh, p.rhs, p.lhs, p.sort))
            case Trans():
                p1, p2 = self._premises(d, 2)
                if p1.fe != p2.fe:
                    self._fail(d, "premises use different freshness environments")
                if p1.sort != p2.sort:
                    self._fail(d, "premises have different sorts")
                if p1.rhs != p2.lhs:
                    self._fail(d, f"middle terms differ: {p1.rhs} and {p2.lhs}")
                self._expect(d, Judgement(p1.fe, p1.fresh | p2.fresh, p1.lhs, p2.rhs, p1.sort))
            case Weak(target):
                (p,) = self._premises(d, 1)
                if not fe_leq(p.fe, target):
                    self._fail(d, f"{p.fe} is not below {target}")
                self._expect(d, Judgement(target, p.fresh, p.lhs, p.rhs, p.sort))
            case Subst():
                self._check_subst(d, rule)
            case AtmIntro(atoms):
                (p,) = self._premises(d, 1)
                clash = atoms & (p.fresh | term_support(p.lhs) | term_support(p.rhs))
                if clash:
                    self._fail(d, "introduced atoms are not fresh for the premise", clash)
                self._expect(d, Judgement(fe_extend(p.fe, atoms), p.fresh | atoms, p.lhs, p.rhs, p.sort))
            case AtmElim(atoms):
                (p,) = self._premises(d, 1)
                if p.fe != fe_extend(c.fe, atoms):
                    self._fail(d, f"premise environment {p.fe} is not {c.fe} extended by {{{_atoms(atoms)}}}")
                clash = atoms & (fe_support(c.fe) | c.fresh | term_support(c.lhs) | term_support(c.rhs))
                if clash:
                    self._fail(d, "eliminated atoms are not fresh for the conclusion", clash)
                self._expect(d, Judgement(c.fe, p.fresh, p.lhs, p.rhs, p.sort))
            case FreshEquivar(perm):
                self._premises(d, 0)
                if len(c.fe) != 1:
                    self._fail(d, "#-equivar concludes over a single-variable environment")
                var, fresh, sort = c.fe.entries[0]
                term = Suspension(perm, var)
                self._expect(d, Judgement(c.fe, act_atoms(perm, fresh), term, term, sort))
            case Susp(perm1, perm2, var, sort):
                self._premises(d, 0)
                fe = FreshnessEnv.single(var, disagreement_set(perm1, perm2), sort)
                self._expect(
                    d, Judgement(fe, frozenset(), Suspension(perm1, var), Suspension(perm2, var), sort)
                )
            case _:
                self._fail(d, f"unknown rule {rule!r}")

    def _check_subst(self, d: Derivation, rule: Subst) -> None:
        if not d.premises:
            self._fail(d, "subst needs a main premise")
        main = d.premises[-1].conclusion
        target = d.conclusion.fe
        source = main.fe
        source_se = underlying_sorting_env(source)
        target_se = underlying_sorting_env(target)
        for label, sigma in (("sigma", rule.sigma), ("sigma'", rule.sigma_prime)):
            if sigma.source != source_se:
                self._fail(d, f"{label} is not defined on the main premise's variables")
            if sigma.target != target_se:
                self._fail(d, f"{label} does not land in the conclusion's sorting environment")
            try:
                sigma.check(self.sig)
            except SortError as e:
                self._fail(d, f"{label} is ill-sorted: {e}")

        variables = source.domain()
        guarded = [v for v in variables if source.atoms_of(v)]
        if self.flavour is Flavour.NEL:
            self._premises(d, len(variables) + 1)
            if rule.fresh_tuples:
                self._fail(d, "NEL subst records no fresh tuples")
            for index, var in enumerate(variables):
                fresh, sort = source[var]
                self._expect_premise(
                    d, index, Judgement(target, fresh, rule.sigma[var], rule.sigma_prime[var], sort)
                )
        else:
            self._premises(d, len(variables) + len(guarded) + 1)
            table = rule.fresh_table()
            if set(table) != set(guarded):
                self._fail(d, "fresh tuples must be recorded exactly for the variables with atom sets")
            for index, var in enumerate(variables):
                sort = source.sort_of(var)
                self._expect_premise(
                    d, index, Judgement(target, frozenset(), rule.sigma[var], rule.sigma_prime[var], sort)
                )
            target_support = fe_support(target)
            for offset, var in enumerate(guarded):
                fresh, sort = source[var]
                order, chosen = table[var]
                image = rule.sigma[var]
                if frozenset(order) != fresh or len(order) != len(fresh):
                    self._fail(d, f"recorded ordering for {var} is not an ordering of {{{_atoms(fresh)}}}")
                try:
                    check_atom_tuple(chosen)
                    swap = gen_transposition(order, chosen)
                except PermError as e:
                    self._fail(d, f"recorded fresh tuple for {var}: {e}")
                clash = frozenset(chosen) & (target_support | fresh | term_support(image))
                if clash:
                    self._fail(d, f"recorded fresh tuple for {var} is not fresh enough", clash)
                self._expect_premise(
                    d,
                    len(variables) + offset,
                    Judgement(fe_extend(target, chosen), frozenset(), image, object_act(swap, image), sort),
                )

        self._expect(
            d,
            Judgement(
                target,
                main.fresh,
                substitute(main.lhs, rule.sigma),
                substitute(main.rhs, rule.sigma_prime),
                main.sort,
            ),
        )


def _run(theory: Theory, d: Derivation, flavour: Flavour) -> Judgement:
    checker = _Checker(theory, flavour)
    conclusion = checker.check(d)
    logger.debug("checked %s derivation against %s: %d distinct nodes", flavour.value, theory.name, checker.nodes)
    return conclusion


def check_nel(theory: Theory, d: Derivation) -> Judgement:
    """Check d against the NEL rules; returns its conclusion or raises CheckError"""
    if theory.flavour is not Flavour.NEL:
        raise CheckError(f"theory {theory.name} is not an NEL theory")
    return _run(theory, d, Flavour.NEL)


def check_neol(theory: Theory, d: Derivation) -> Judgement:
    """Check d against the NEoL rules; returns its conclusion or raises CheckError"""
    if theory.flavour is not Flavour.NEOL:
        raise CheckError(f"theory {theory.name} is not an NEoL theory")
    return _run(theory, d, Flavour.NEOL)


def check(theory: Theory, d: Derivation) -> Judgement:
    """Dispatch on the theory's flavour"""
    if theory.flavour is Flavour.NEL:
        return check_nel(theory, d)
    return check_neol(theory, d)


def is_valid(theory: Theory, d: Derivation) -> bool:
    try:
        check(theory, d)
    except CheckError:
        return False
    return True

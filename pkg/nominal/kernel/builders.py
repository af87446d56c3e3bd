# =========================================
# DERIVATION BUILDERS
# Nominal Equational Logic - reasoning kernel
# =========================================
"""
Constructive builders for the standard derived rules.

Every builder returns an explicit derivation; nothing here is trusted. The
``derive_*`` functions validate their input derivation with the kernel and
are the public entry points. The unchecked workers (``fresh_to_eq``,
``object_act_derivation``, ...) are shared with the translator, which calls
them on derivations it has just built.

Freshness of a tuple ``as`` for a term ``t`` is carried around as a
``FreshCert``: a derivation of ``fe^{#bs} |- t ~ (as bs) * t : s`` together with
the pairing ``(as, bs)`` it was built for.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

from nominal.core.environments import (
    FreshnessEnv,
    Judgement,
    Theory,
    fe_act,
    fe_extend,
    fe_leq,
    fe_support,
    underlying_sorting_env,
)
from nominal.core.errors import BuildError, CheckError, NominalError
from nominal.core.perm_core import (
    IDENTITY,
    AtomTuple,
    Perm,
    compose,
    disagreement_set,
    gen_transposition,
    invert,
    perm_sending,
    sorted_atoms,
    support_perm,
)
from nominal.core.signature import OpSymbol, Sort, op_act
from nominal.core.terms import (
    Constructed,
    SortingEnv,
    Substitution,
    Suspension,
    Term,
    Var,
    inverse_renaming,
    meta_act,
    object_act,
    sort_check,
    term_support,
    var_term,
)
from nominal.kernel.proof_kernel import (
    Derivation,
    atm_elim_node,
    atm_intro_node,
    check,
    equivar_node,
    refl_node,
    subst_node,
    susp_node,
    symm_node,
    trans_node,
    weak_node,
)
from nominal.kernel.theory_compiler import canonical_fresh, fresh_tuple

logger = logging.getLogger(__name__)

LOCAL_VAR = Var("x")


# =========================================
# SMALL HELPERS
# =========================================

def local_vars(n: int) -> Tuple[Var, ...]:
    return tuple(Var(f"x{i + 1}") for i in range(n))


def single_substitution(var: Var, sort: Sort, image: Term, fe: FreshnessEnv) -> Substitution:
    return Substitution(((var, image),), SortingEnv(((var, sort),)), underlying_sorting_env(fe))


def weak_to(d: Derivation, target: FreshnessEnv) -> Derivation:
    """d itself when its environment already is target, else a weak node"""
    fe = d.conclusion.fe
    if fe == target:
        return d
    if not fe_leq(fe, target):
        raise BuildError(f"cannot weaken {fe} to {target}")
    return weak_node(d, target)


def chain(steps: Sequence[Derivation]) -> Derivation:
    """Right-nested trans over consecutive equations"""
    result = steps[-1]
    for step in reversed(steps[:-1]):
        result = trans_node(step, result)
    return result


def congruence_node(
    op: OpSymbol,
    target: FreshnessEnv,
    lefts: Sequence[Term],
    rights: Sequence[Term],
    premises: Sequence[Derivation],
) -> Derivation:
    """subst over the main premise refl op(x1..xk), one equation premise per argument"""
    family = op.family
    local = local_vars(family.arity)
    local_fe = FreshnessEnv(tuple((v, frozenset(), s) for v, s in zip(local, family.arg_sorts)))
    main = refl_node(local_fe, Constructed(op, tuple(var_term(v) for v in local)), family.result_sort)
    source = underlying_sorting_env(local_fe)
    target_se = underlying_sorting_env(target)
    sigma = Substitution(tuple(zip(local, lefts)), source, target_se)
    sigma_prime = Substitution(tuple(zip(local, rights)), source, target_se)
    return subst_node(sigma, sigma_prime, target, premises, main)


def _expect(d: Derivation, expected: Judgement, what: str) -> Derivation:
    if d.conclusion != expected:
        raise BuildError(f"{what}: built {d.conclusion}, expected {expected}")
    return d


def _require(theory: Theory, proof: Derivation, expected: Judgement, what: str) -> None:
    try:
        check(theory, proof)
    except CheckError as e:
        raise BuildError(f"{what}: input derivation does not check: {e}") from e
    if proof.conclusion != expected:
        raise BuildError(f"{what}: input concludes {proof.conclusion}, expected {expected}")


# =========================================
# FRESHNESS <-> EQUATION
# =========================================

def fresh_to_eq(
    fe: FreshnessEnv, order: AtomTuple, chosen: AtomTuple, t: Term, s: Sort, proof: Derivation
) -> Derivation:
    """fe |- as # t : s  to  fe^{#bs} |- t ~ (as bs) * t : s"""
    if not order:
        return refl_node(fe, t, s)
    swap = gen_transposition(order, chosen)
    intro = atm_intro_node(proof, chosen)
    main = susp_node(IDENTITY, swap, LOCAL_VAR, s)
    sigma = single_substitution(LOCAL_VAR, s, t, fe)
    return subst_node(sigma, sigma, fe_extend(fe, chosen), [intro], main)


def eq_to_fresh(
    fe: FreshnessEnv, order: AtomTuple, chosen: AtomTuple, t: Term, s: Sort, proof: Derivation
) -> Derivation:
    """fe^{#bs} |- t ~ (as bs) * t : s  to  fe |- as # t : s"""
    if not order:
        return refl_node(fe, t, s)
    swap = gen_transposition(order, chosen)
    extended = fe_extend(fe, chosen)
    intro = atm_intro_node(refl_node(fe, t, s), chosen)
    equivar = equivar_node(swap, LOCAL_VAR, chosen, s)
    sigma = single_substitution(LOCAL_VAR, s, t, fe)
    moved = subst_node(sigma, sigma, extended, [intro], equivar)
    loop = trans_node(proof, trans_node(moved, symm_node(proof)))
    return atm_elim_node(loop, chosen, fe)


def derive_fresh_to_eq(
    theory: Theory, fe: FreshnessEnv, atoms: Iterable, t: Term, s: Sort, proof: Derivation
) -> Derivation:
    atoms = frozenset(atoms)
    _require(theory, proof, Judgement(fe, atoms, t, t, s), "fresh_to_eq")
    order, chosen = canonical_fresh(fe, atoms, t)
    logger.debug("fresh_to_eq: pairing %s with %s", order, chosen)
    return fresh_to_eq(fe, order, chosen, t, s, proof)


def derive_eq_to_fresh(
    theory: Theory,
    fe: FreshnessEnv,
    atoms: Iterable,
    t: Term,
    s: Sort,
    proof: Derivation,
    pairing: Optional[Tuple[AtomTuple, AtomTuple]] = None,
) -> Derivation:
    """
    Inverse of derive_fresh_to_eq. ``pairing`` defaults to the canonical one;
    any ordering of atoms with a tuple fresh for (fe, atoms, t) is accepted.
    """
    atoms = frozenset(atoms)
    order, chosen = pairing if pairing is not None else canonical_fresh(fe, atoms, t)
    order, chosen = tuple(order), tuple(chosen)
    if frozenset(order) != atoms or len(order) != len(atoms):
        raise BuildError("eq_to_fresh: pairing does not order the given atoms")
    clash = frozenset(chosen) & (fe_support(fe) | atoms | term_support(t))
    if clash:
        raise BuildError(f"eq_to_fresh: tuple not fresh: {' '.join(map(str, sorted(clash)))}")
    swapped = object_act(gen_transposition(order, chosen), t)
    _require(theory, proof, Judgement(fe_extend(fe, chosen), frozenset(), t, swapped, s), "eq_to_fresh")
    return eq_to_fresh(fe, order, chosen, t, s, proof)


# =========================================
# PERMUTATION ACTIONS ON DERIVATIONS
# =========================================

def object_act_derivation(d: Derivation, p: Perm) -> Derivation:
    """fe |- t ~ t'  to  fe |- p * t ~ p * t'"""
    if p.is_identity():
        return d
    c = d.conclusion
    if c.fresh:
        raise BuildError("object_act: the input must be an equation")
    main = refl_node(FreshnessEnv.single(LOCAL_VAR, (), c.sort), Suspension(p, LOCAL_VAR), c.sort)
    sigma = single_substitution(LOCAL_VAR, c.sort, c.lhs, c.fe)
    sigma_prime = single_substitution(LOCAL_VAR, c.sort, c.rhs, c.fe)
    return subst_node(sigma, sigma_prime, c.fe, [d], main)


def meta_act_derivation(d: Derivation, p: Perm) -> Derivation:
    """fe |- t ~ t'  to  p.fe |- p.t ~ p.t' (NEoL)"""
    if p.is_identity():
        return d
    c = d.conclusion
    moved = object_act_derivation(d, p)
    source = c.fe
    target = fe_act(p, source)
    inv = invert(p)
    rho = inverse_renaming(p, underlying_sorting_env(source))
    equations = [refl_node(target, rho[v], s) for v, _, s in source.entries]
    fresh_premises, tuples = [], []
    target_support = fe_support(target)
    for var, fresh, sort in source.entries:
        if not fresh:
            continue
        order = sorted_atoms(fresh)
        chosen = fresh_tuple(len(order), target_support | fresh | support_perm(p))
        swap = gen_transposition(order, chosen)
        leaf = susp_node(inv, compose(swap, inv), var, sort)
        fresh_premises.append(weak_to(leaf, fe_extend(target, chosen)))
        tuples.append((var, order, chosen))
    return subst_node(rho, rho, target, equations, moved, fresh_premises, tuples)


def susp_perm_derivation(fe: FreshnessEnv, t: Term, s: Sort, p1: Perm, p2: Perm) -> Derivation:
    """fe^{#ds(p1,p2)} |- p1 * t ~ p2 * t, for ds(p1,p2) # t"""
    target = fe_extend(fe, disagreement_set(p1, p2))
    left, right = object_act(p1, t), object_act(p2, t)
    if left == right:
        return refl_node(target, left, s)
    match t:
        case Suspension(perm, var):
            return weak_to(susp_node(compose(p1, perm), compose(p2, perm), var, s), target)
        case Constructed(op, args):
            moved = op_act(p1, op)
            if moved != op_act(p2, op):
                raise BuildError(f"susp_perm: the permutations disagree on the parameters of {op}")
            premises = [
                susp_perm_derivation(fe, arg, arg_sort, p1, p2)
                for arg, arg_sort in zip(args, op.family.arg_sorts)
            ]
            return congruence_node(
                moved,
                target,
                [object_act(p1, a) for a in args],
                [object_act(p2, a) for a in args],
                premises,
            )
    raise BuildError(f"susp_perm: not a term: {t!r}")


def derive_object_act(theory: Theory, d: Derivation, p: Perm) -> Derivation:
    c = d.conclusion
    _require(theory, d, c, "object_act")
    return _expect(
        object_act_derivation(d, p),
        Judgement(c.fe, frozenset(), object_act(p, c.lhs), object_act(p, c.rhs), c.sort),
        "object_act",
    )


def derive_meta_act(theory: Theory, d: Derivation, p: Perm) -> Derivation:
    c = d.conclusion
    _require(theory, d, c, "meta_act")
    if c.fresh:
        raise BuildError("meta_act: the input must be an equation")
    return _expect(
        meta_act_derivation(d, p),
        Judgement(fe_act(p, c.fe), frozenset(), meta_act(p, c.lhs), meta_act(p, c.rhs), c.sort),
        "meta_act",
    )


def derive_susp_perm(theory: Theory, fe: FreshnessEnv, t: Term, p1: Perm, p2: Perm) -> Derivation:
    ds = disagreement_set(p1, p2)
    clash = ds & term_support(t)
    if clash:
        raise BuildError(
            "susp_perm: disagreement set is not fresh for the term: " + " ".join(map(str, sorted(clash)))
        )
    try:
        s = sort_check(theory.sig, underlying_sorting_env(fe), t)
    except NominalError as e:
        raise BuildError(f"susp_perm: {e}") from e
    return susp_perm_derivation(fe, t, s, p1, p2)


# =========================================
# FRESHNESS CERTIFICATES
# =========================================

@dataclass(frozen=True)
class FreshCert:
    """A derivation of base^{#fresh} |- term ~ (order fresh) * term : sort"""

    base: FreshnessEnv
    order: AtomTuple
    fresh: AtomTuple
    term: Term
    sort: Sort
    derivation: Derivation

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        object.__setattr__(self, "fresh", tuple(self.fresh))
        clash = frozenset(self.fresh) & self.avoid()
        if clash:
            raise BuildError(f"certificate tuple is not fresh: {' '.join(map(str, sorted(clash)))}")
        _expect(self.derivation, self.judgement(), "freshness certificate")

    @classmethod
    def trivial(cls, base: FreshnessEnv, term: Term, sort: Sort) -> "FreshCert":
        return cls(base, (), (), term, sort, refl_node(base, term, sort))

    @property
    def atoms(self) -> frozenset:
        return frozenset(self.order)

    @property
    def swap(self) -> Perm:
        return gen_transposition(self.order, self.fresh)

    def avoid(self) -> frozenset:
        return fe_support(self.base) | frozenset(self.order) | term_support(self.term)

    def judgement(self) -> Judgement:
        return Judgement(
            fe_extend(self.base, self.fresh), frozenset(), self.term, object_act(self.swap, self.term), self.sort
        )

    def retuple(
        self,
        order: Optional[Sequence] = None,
        fresh: Optional[Sequence] = None,
        avoid: Iterable = (),
    ) -> "FreshCert":
        """Same atoms under another ordering and fresh tuple, moved by the meta-level action"""
        order = self.order if order is None else tuple(order)
        if frozenset(order) != self.atoms or len(order) != len(self.order):
            raise BuildError("retuple: ordering does not cover the certified atoms")
        partner = dict(zip(self.order, self.fresh))
        current = tuple(partner[a] for a in order)
        if fresh is None:
            fresh = fresh_tuple(len(order), self.avoid() | frozenset(avoid))
        fresh = tuple(fresh)
        if len(fresh) != len(order):
            raise BuildError("retuple: fresh tuple has the wrong length")
        if fresh == current:
            if order == self.order:
                return self
            return FreshCert(self.base, order, fresh, self.term, self.sort, self.derivation)
        rho = perm_sending(current, fresh)
        moved = weak_to(meta_act_derivation(self.derivation, rho), fe_extend(self.base, fresh))
        return FreshCert(self.base, order, fresh, self.term, self.sort, moved)

    def avoiding(self, atoms: Iterable) -> "FreshCert":
        """self, or a retupled copy whose fresh tuple misses atoms"""
        atoms = frozenset(atoms)
        if not frozenset(self.fresh) & atoms:
            return self
        return self.retuple(avoid=atoms | frozenset(self.fresh))


def throw_fresh(cert: FreshCert, sub_order: Sequence, sub_fresh: Sequence) -> FreshCert:
    """Restrict a certificate to sub_order, paired with sub_fresh (both subsets of the originals)"""
    sub_order, sub_fresh = tuple(sub_order), tuple(sub_fresh)
    base, t, s = cert.base, cert.term, cert.sort
    if not sub_order:
        return FreshCert.trivial(base, t, s)
    if sub_order == cert.order and sub_fresh == cert.fresh:
        return cert
    n, m = len(cert.order), len(sub_order)
    target = fe_extend(base, sub_fresh)
    extra = fresh_tuple(n + m, cert.avoid() | frozenset(cert.fresh))
    c, c_prime = extra[:n], extra[n:]
    bigger = fe_extend(target, extra)

    main = weak_to(
        susp_node(IDENTITY, gen_transposition(sub_order, sub_fresh), LOCAL_VAR, s),
        FreshnessEnv.single(LOCAL_VAR, cert.atoms | frozenset(sub_fresh), s),
    )
    moved = weak_to(meta_act_derivation(cert.derivation, gen_transposition(cert.fresh, c)), bigger)
    p1 = gen_transposition(cert.order, c)
    p2 = compose(p1, gen_transposition(sub_fresh, c_prime))
    shuffled = weak_to(susp_perm_derivation(base, t, s, p1, p2), bigger)
    sigma = single_substitution(LOCAL_VAR, s, t, target)
    d = subst_node(
        sigma,
        sigma,
        target,
        [refl_node(target, t, s)],
        main,
        [trans_node(moved, shuffled)],
        [(LOCAL_VAR, cert.order + sub_fresh, extra)],
    )
    return FreshCert(base, sub_order, sub_fresh, t, s, d)


def add_fresh(cert: FreshCert, new_atoms: Iterable) -> FreshCert:
    """From a certificate over fe, one over fe^{#new} for the atoms plus new (new # term)"""
    new = frozenset(new_atoms)
    if not new:
        return cert
    t, s = cert.term, cert.sort
    clash = new & (cert.atoms | term_support(t))
    if clash:
        raise BuildError(f"add_fresh: atoms are not fresh for the term: {' '.join(map(str, sorted(clash)))}")
    cert = cert.avoiding(new)
    outer = fe_extend(cert.base, new)
    new_order = sorted_atoms(new)
    new_fresh = fresh_tuple(len(new_order), cert.avoid() | new | frozenset(cert.fresh))
    target = fe_extend(outer, frozenset(cert.fresh) | frozenset(new_fresh))

    main = susp_node(IDENTITY, gen_transposition(new_order, new_fresh), LOCAL_VAR, s)
    sigma = single_substitution(LOCAL_VAR, s, t, target)
    sigma_prime = single_substitution(LOCAL_VAR, s, object_act(cert.swap, t), target)
    inner_order = new_order + new_fresh
    extra = fresh_tuple(len(inner_order), fe_support(target) | frozenset(inner_order) | term_support(t))
    shuffled = weak_to(
        susp_perm_derivation(target, t, s, IDENTITY, gen_transposition(inner_order, extra)),
        fe_extend(target, extra),
    )
    d = subst_node(
        sigma,
        sigma_prime,
        target,
        [weak_to(cert.derivation, target)],
        main,
        [shuffled],
        [(LOCAL_VAR, inner_order, extra)],
    )
    return FreshCert(outer, cert.order + new_order, cert.fresh + new_fresh, t, s, d)


def derive_throw_fresh(
    theory: Theory,
    d: Derivation,
    a: Sequence,
    b: Sequence,
    a_prime: Sequence,
    b_prime: Sequence,
) -> Derivation:
    """
    From fe^{#b} |- t ~ (a b) * t : s derive fe^{#b'} |- t ~ (a' b') * t : s.

    Preconditions: b # (a, t), a' within a, b' within b, |a'| = |b'|.
    The base environment is read off the conclusion by removing b.
    """
    a, b, a_prime, b_prime = tuple(a), tuple(b), tuple(a_prime), tuple(b_prime)
    if len(a) != len(b):
        raise BuildError("throw_fresh: a and b have different lengths")
    if len(a_prime) != len(b_prime):
        raise BuildError("throw_fresh: a' and b' have different lengths")
    if not set(a_prime) <= set(a):
        raise BuildError("throw_fresh: a' is not contained in a")
    if not set(b_prime) <= set(b):
        raise BuildError("throw_fresh: b' is not contained in b")
    c = d.conclusion
    t = c.lhs
    if set(b) & (set(a) | term_support(t)):
        raise BuildError("throw_fresh: b is not fresh for (a, t)")
    base = FreshnessEnv(tuple((v, fresh - frozenset(b), s) for v, fresh, s in c.fe.entries))
    if fe_extend(base, b) != c.fe:
        raise BuildError("throw_fresh: the conclusion environment does not carry b on every variable")
    _require(theory, d, c, "throw_fresh")
    cert = FreshCert(base, a, b, t, c.sort, d)
    return throw_fresh(cert, a_prime, b_prime).derivation

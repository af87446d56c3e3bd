# =========================================
# NEL <-> NEoL DERIVATION TRANSLATION
# Nominal Equational Logic - reasoning kernel
# =========================================
"""
translate_derivation turns an NEL derivation of ``fe |- as # t ~ t' : s`` into
the pair of NEoL derivations

* ``fe |- t ~ t' : s``
* ``fe^{#bs} |- t ~ (as bs) * t : s``  (canonical pairing)

over the compiled theory. embed_neol_derivation goes the other way: an NEoL
derivation becomes an NEL derivation with the same conclusion.
"""

import logging
from typing import Dict, Tuple

from nominal.core.environments import Axiom, Flavour, Judgement, Theory, fe_extend, fe_support
from nominal.core.errors import BuildError
from nominal.core.perm_core import compose, gen_transposition
from nominal.core.terms import term_support
from nominal.kernel.builders import (
    FreshCert,
    add_fresh,
    chain,
    eq_to_fresh,
    object_act_derivation,
    throw_fresh,
    weak_to,
)
from nominal.kernel.proof_kernel import (
    AtmElim,
    AtmIntro,
    AxiomRef,
    Derivation,
    FreshEquivar,
    Refl,
    Subst,
    Susp,
    Symm,
    Trans,
    Weak,
    atm_elim_node,
    axiom_node,
    check_nel,
    refl_node,
    subst_node,
    susp_node,
    symm_node,
    trans_node,
)
from nominal.kernel.theory_compiler import canonical_fresh, fresh_axiom_name

logger = logging.getLogger(__name__)


class _Translator:
    """One translation run over a checked NEL derivation; results memoised per node"""

    def __init__(self, compiled: Theory):
        self.compiled = compiled
        self._done: Dict[int, Tuple[Derivation, FreshCert]] = {}

    def run(self, d: Derivation) -> Tuple[Derivation, FreshCert]:
        key = id(d)
        if key not in self._done:
            self._done[key] = self._translate(d)
        return self._done[key]

    def _translate(self, d: Derivation) -> Tuple[Derivation, FreshCert]:
        c = d.conclusion
        match d.rule:
            case AxiomRef(name):
                eq = axiom_node(self.compiled, name)
                if not c.fresh:
                    return eq, FreshCert.trivial(c.fe, c.lhs, c.sort)
                order, chosen = canonical_fresh(c.fe, c.fresh, c.lhs)
                swapped = axiom_node(self.compiled, fresh_axiom_name(name))
                return eq, FreshCert(c.fe, order, chosen, c.lhs, c.sort, swapped)
            case Refl() | Susp():
                return d, FreshCert.trivial(c.fe, c.lhs, c.sort)
            case FreshEquivar(perm):
                var, _, sort = c.fe.entries[0]
                order, chosen = canonical_fresh(c.fe, c.fresh, c.lhs)
                swap = gen_transposition(order, chosen)
                leaf = susp_node(perm, compose(swap, perm), var, sort)
                cert = FreshCert(c.fe, order, chosen, c.lhs, sort, weak_to(leaf, fe_extend(c.fe, chosen)))
                return refl_node(c.fe, c.lhs, sort), cert
            case Symm():
                return self._symm(d)
            case Trans():
                return self._trans(d)
            case Weak(target):
                (premise,) = d.premises
                eq, cert = self.run(premise)
                eq = weak_to(eq, target)
                if not cert.order:
                    return eq, FreshCert.trivial(target, c.lhs, c.sort)
                cert = cert.avoiding(fe_support(target))
                moved = weak_to(cert.derivation, fe_extend(target, cert.fresh))
                return eq, FreshCert(target, cert.order, cert.fresh, c.lhs, c.sort, moved)
            case AtmElim(atoms):
                (premise,) = d.premises
                eq, cert = self.run(premise)
                eq = atm_elim_node(eq, atoms, c.fe)
                if not cert.order:
                    return eq, FreshCert.trivial(c.fe, c.lhs, c.sort)
                cert = cert.avoiding(atoms)
                extended = fe_extend(c.fe, cert.fresh)
                moved = atm_elim_node(cert.derivation, atoms, extended)
                return eq, FreshCert(c.fe, cert.order, cert.fresh, c.lhs, c.sort, moved)
            case AtmIntro(atoms):
                (premise,) = d.premises
                eq, cert = self.run(premise)
                return weak_to(eq, c.fe), add_fresh(cert, atoms)
            case Subst():
                return self._subst(d)
        raise BuildError(f"translate: unexpected rule {d.rule!r}")

    def _symm(self, d: Derivation) -> Tuple[Derivation, FreshCert]:
        (premise,) = d.premises
        p = premise.conclusion
        eq, cert = self.run(premise)
        flipped = symm_node(eq)
        if not cert.order:
            return flipped, FreshCert.trivial(p.fe, p.rhs, p.sort)
        cert = cert.avoiding(term_support(p.rhs))
        extended = fe_extend(p.fe, cert.fresh)
        steps = [
            weak_to(flipped, extended),
            cert.derivation,
            weak_to(object_act_derivation(eq, cert.swap), extended),
        ]
        return flipped, FreshCert(p.fe, cert.order, cert.fresh, p.rhs, p.sort, chain(steps))

    def _trans(self, d: Derivation) -> Tuple[Derivation, FreshCert]:
        first, second = d.premises
        c, c1, c2 = d.conclusion, first.conclusion, second.conclusion
        e1, f1 = self.run(first)
        e2, f2 = self.run(second)
        eq = trans_node(e1, e2)
        extra = c2.fresh - c1.fresh
        if not extra:
            return eq, f1
        partner = dict(zip(f2.order, f2.fresh))
        kept = tuple(a for a in f2.order if a in extra)
        f2 = throw_fresh(f2, kept, tuple(partner[a] for a in kept))
        everything = (
            fe_support(c.fe)
            | c.fresh
            | term_support(c1.lhs)
            | term_support(c1.rhs)
            | term_support(c2.rhs)
        )
        f1 = f1.avoiding(everything)
        f2 = f2.avoiding(everything | frozenset(f1.fresh))
        tau1, tau2 = f1.swap, f2.swap
        star = fe_extend(c.fe, frozenset(f1.fresh) | frozenset(f2.fresh))
        steps = [
            weak_to(f1.derivation, star),
            weak_to(object_act_derivation(e1, tau1), star),
            weak_to(object_act_derivation(f2.derivation, tau1), star),
            weak_to(object_act_derivation(symm_node(e1), compose(tau1, tau2)), star),
        ]
        logger.debug("trans: joined %d + %d fresh atom(s)", len(f1.order), len(f2.order))
        return eq, FreshCert(c.fe, f1.order + f2.order, f1.fresh + f2.fresh, c1.lhs, c.sort, chain(steps))

    def _subst(self, d: Derivation) -> Tuple[Derivation, FreshCert]:
        rule: Subst = d.rule
        c = d.conclusion
        main = d.premises[-1]
        mc = main.conclusion
        variables = mc.fe.domain()
        target = c.fe

        e_main, f_main = self.run(main)
        equations, certs = [], {}
        for var, premise in zip(variables, d.premises):
            e_i, f_i = self.run(premise)
            equations.append(e_i)
            certs[var] = f_i
        guarded = [v for v in variables if certs[v].order]
        eq = subst_node(
            rule.sigma,
            rule.sigma_prime,
            target,
            equations,
            e_main,
            [certs[v].derivation for v in guarded],
            [(v, certs[v].order, certs[v].fresh) for v in guarded],
        )
        if not f_main.order:
            return eq, FreshCert.trivial(target, c.lhs, c.sort)

        everything = fe_support(target) | mc.fresh | term_support(c.lhs)
        for var in variables:
            everything |= certs[var].atoms | term_support(rule.sigma[var])
        f_main = f_main.avoiding(everything)
        b = frozenset(f_main.fresh)
        outer = fe_extend(target, b)
        equations = [refl_node(outer, rule.sigma[v], mc.fe.sort_of(v)) for v in variables]
        grown = [add_fresh(certs[v], b) for v in variables]
        lifted = subst_node(
            rule.sigma,
            rule.sigma,
            outer,
            equations,
            f_main.derivation,
            [g.derivation for g in grown],
            [(v, g.order, g.fresh) for v, g in zip(variables, grown)],
        )
        return eq, FreshCert(target, f_main.order, f_main.fresh, c.lhs, c.sort, lifted)


def translate_derivation(nel_theory: Theory, compiled: Theory, d: Derivation) -> Tuple[Derivation, Derivation]:
    """The NEoL equation and freshness derivations for an NEL derivation"""
    check_nel(nel_theory, d)
    eq, cert = _Translator(compiled).run(d)
    c = d.conclusion
    if not c.fresh:
        return eq, refl_node(c.fe, c.lhs, c.sort)
    order, chosen = canonical_fresh(c.fe, c.fresh, c.lhs)
    cert = cert.retuple(order, chosen)
    logger.debug("translated derivation for %s", c)
    return eq, cert.derivation


# =========================================
# NEoL -> NEL
# =========================================

def as_nel_theory(t: Theory) -> Theory:
    """The same axioms read as an NEL theory"""
    axioms = tuple(Axiom(a.name, a.judgement.with_flavour(Flavour.NEL)) for a in t.axioms)
    return Theory(t.name, t.sig, axioms, Flavour.NEL)


def _embed(d: Derivation, done: Dict[int, Derivation]) -> Derivation:
    key = id(d)
    if key in done:
        return done[key]
    if isinstance(d.rule, Subst):
        rule = d.rule
        main = d.premises[-1]
        source = main.conclusion.fe
        variables = source.domain()
        target = d.conclusion.fe
        guarded = [v for v in variables if source.atoms_of(v)]
        fresh_by_var = dict(zip(guarded, d.premises[len(variables):-1]))
        table = rule.fresh_table()
        premises = []
        for var, premise in zip(variables, d.premises):
            e = _embed(premise, done)
            if var in fresh_by_var:
                order, chosen = table[var]
                swapped = _embed(fresh_by_var[var], done)
                freshness = eq_to_fresh(target, order, chosen, rule.sigma[var], source.sort_of(var), swapped)
                e = trans_node(freshness, e)
            premises.append(e)
        result = subst_node(rule.sigma, rule.sigma_prime, target, premises, _embed(main, done))
    else:
        result = Derivation(d.rule, tuple(_embed(p, done) for p in d.premises), d.conclusion)
    done[key] = result
    return result


def embed_neol_derivation(d: Derivation) -> Derivation:
    """An NEL derivation with the conclusion of the NEoL derivation d"""
    return _embed(d, {})

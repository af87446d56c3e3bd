# =========================================
# SHIPPED CORPUS
# Nominal Equational Logic - reasoning kernel
# =========================================
"""
The untyped lambda calculus modulo alpha, beta and eta, built in Python, plus
a handful of derivations over it made with the kernel's builders.

The same signature and theory ship as text in ``corpus/lambda_abe.nel``.
"""

import logging
from pathlib import Path
from typing import Dict

from nominal.core.environments import Axiom, Flavour, FreshnessEnv, Judgement, Theory
from nominal.core.perm_core import IDENTITY, Perm, atom, transposition
from nominal.core.signature import OpFamily, Signature, Sort
from nominal.core.terms import Constructed, SortingEnv, Substitution, Term, Var, var_term
from nominal.frontend.printer import print_named_derivation, print_signature, print_theory
from nominal.kernel.builders import derive_eq_to_fresh, derive_fresh_to_eq, weak_to
from nominal.kernel.proof_kernel import (
    Derivation,
    atm_intro_node,
    axiom_node,
    check_nel,
    refl_node,
    subst_node,
    symm_node,
    trans_node,
)

logger = logging.getLogger(__name__)

CORPUS_DIR = Path(__file__).resolve().parent.parent / "corpus"
THEORY_FILE = "lambda_abe.nel"
DERIVATIONS_FILE = "lambda_abe_derivations.nel"
COMPILED_FILE = "lambda_abe_compiled.neol"
SAMPLES_FILE = "lambda_abe_samples.nel"

TM = Sort("tm")
NM = Sort("nm")

APP = OpFamily("app", 0, (TM, TM), TM)
LAM = OpFamily("lam", 1, (TM,), TM)
VAR = OpFamily("var", 1, (), TM)
PAIR = OpFamily("pair", 2, (), NM)


def lambda_signature() -> Signature:
    return Signature.build(["tm"], [APP, LAM, VAR])


def pair_signature() -> Signature:
    """One sort of atom pairs: pair[a, b] with two distinct parameters"""
    return Signature.build(["nm"], [PAIR])


# =========================================
# TERM SHORTHANDS
# =========================================

def app(t1: Term, t2: Term) -> Term:
    return Constructed(APP(), (t1, t2))


def lam(a: str, body: Term) -> Term:
    return Constructed(LAM(atom(a)), (body,))


def var(a: str) -> Term:
    return Constructed(VAR(atom(a)))


def mv(name: str = "x", perm: Perm = IDENTITY) -> Term:
    """A variable under a suspended permutation"""
    return var_term(name, perm)


def env(*bindings) -> FreshnessEnv:
    """env(("x", "a b"), ("y", "")) with atoms given as a space separated string"""
    return FreshnessEnv(tuple((Var(v), frozenset(atom(a) for a in fresh.split()), TM) for v, fresh in bindings))


def lambda_abe_theory() -> Theory:
    """alpha, beta1-beta5 and eta as an NEL theory"""
    sig = lambda_signature()
    a, b = atom("a"), atom("b")
    x, y = mv("x"), mv("y")
    x1, x2 = mv("x1"), mv("x2")
    axioms = [
        ("alpha", env(("x", "")), {a}, lam("a", x), lam("a", x)),
        ("beta1", env(("x", "a"), ("y", "")), (), app(lam("a", x), y), x),
        ("beta2", env(("y", "")), (), app(lam("a", var("a")), y), y),
        (
            "beta3",
            env(("x", ""), ("y", "b")),
            (),
            app(lam("a", lam("b", x)), y),
            lam("b", app(lam("a", x), y)),
        ),
        (
            "beta4",
            env(("x1", ""), ("x2", ""), ("y", "")),
            (),
            app(lam("a", app(x1, x2)), y),
            app(app(lam("a", x1), y), app(lam("a", x2), y)),
        ),
        ("beta5", env(("x", "b")), (), app(lam("a", x), var("b")), mv("x", transposition(a, b))),
        ("eta", env(("x", "a")), (), lam("a", app(x, var("a"))), x),
    ]
    return Theory(
        "lambda_abe",
        sig,
        tuple(Axiom(name, Judgement(fe, frozenset(fresh), lhs, rhs, TM)) for name, fe, fresh, lhs, rhs in axioms),
        Flavour.NEL,
    )


# =========================================
# SAMPLE DERIVATIONS
# =========================================

def _alpha_as_equation(theory: Theory) -> Derivation:
    return derive_fresh_to_eq(theory, env(("x", "")), {atom("a")}, lam("a", mv()), TM, axiom_node(theory, "alpha"))


def _beta2_at_var(theory: Theory) -> Derivation:
    y = Var("y")
    target = FreshnessEnv()
    sigma = Substitution(((y, var("b")),), SortingEnv(((y, TM),)), SortingEnv())
    return subst_node(sigma, sigma, target, [refl_node(target, var("b"), TM)], axiom_node(theory, "beta2"))


def _beta1_fresh_loop(theory: Theory) -> Derivation:
    step = atm_intro_node(axiom_node(theory, "beta1"), {atom("c")})
    return trans_node(step, symm_node(step))


def sample_derivations(theory: Theory = None) -> Dict[str, Derivation]:
    """Named NEL derivations over lambda_abe; each one is kernel-checked"""
    theory = theory or lambda_abe_theory()
    a = atom("a")
    as_equation = _alpha_as_equation(theory)
    samples = {
        "alpha_as_equation": as_equation,
        "alpha_recovered": derive_eq_to_fresh(theory, env(("x", "")), {a}, lam("a", mv()), TM, as_equation),
        "beta2_at_var": _beta2_at_var(theory),
        "beta1_weakened": weak_to(axiom_node(theory, "beta1"), env(("x", "a b"), ("y", ""), ("z", ""))),
        "beta1_fresh_loop": _beta1_fresh_loop(theory),
        "alpha_extra_atom": atm_intro_node(axiom_node(theory, "alpha"), {atom("b")}),
    }
    for name, d in samples.items():
        check_nel(theory, d)
        logger.debug("sample derivation %s: %s", name, d.conclusion)
    return samples


def samples_source(theory: Theory = None) -> str:
    """The sample derivations as a source file that includes the theory file"""
    theory = theory or lambda_abe_theory()
    blocks = [f'include "{THEORY_FILE}";']
    for name, d in sample_derivations(theory).items():
        blocks.append("")
        blocks.append(print_named_derivation(name, theory.name, d))
    return "\n".join(blocks) + "\n"


def theory_source(theory: Theory = None) -> str:
    theory = theory or lambda_abe_theory()
    return print_signature(theory.sig) + "\n\n" + print_theory(theory) + "\n"

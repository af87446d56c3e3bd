import pytest
from hypothesis import given, settings

from nominal.core.environments import FreshnessEnv, Judgement
from nominal.core.errors import CheckError
from nominal.core.perm_core import IDENTITY, atoms, transposition
from nominal.core.terms import SortingEnv, Substitution, Var
from nominal.corpus import TM, app, env, lam, mv, sample_derivations, var
from nominal.kernel.empty_theory import certify_eq
from nominal.kernel.proof_kernel import (
    AxiomRef,
    Derivation,
    Refl,
    Symm,
    Weak,
    act_derivation,
    atm_elim_node,
    atm_intro_node,
    axiom_node,
    check,
    check_nel,
    check_neol,
    derivation_depth,
    derivation_size,
    equivar_node,
    infer_conclusion,
    is_valid,
    iter_nodes,
    refl_node,
    subst_node,
    susp_node,
    symm_node,
    trans_node,
    weak_node,
)
from tests.strategies import perms

a, b, c = atoms("a b c")
x, y = Var("x"), Var("y")


class TestLeaves:
    def test_axiom(self, abe):
        assert check_nel(abe, axiom_node(abe, "beta2")) == abe.axiom("beta2").judgement

    def test_unknown_axiom(self, abe):
        d = Derivation(AxiomRef("gamma"), (), abe.axiom("beta2").judgement)
        with pytest.raises(CheckError, match="axiom gamma not found"):
            check_nel(abe, d)

    def test_axiom_with_wrong_conclusion(self, abe):
        d = Derivation(AxiomRef("beta1"), (), abe.axiom("beta2").judgement)
        with pytest.raises(CheckError, match="conclusion mismatch"):
            check_nel(abe, d)

    def test_refl_cannot_carry_freshness(self, empty_nel):
        j = Judgement(env(("x", "")), frozenset({a}), mv(), mv(), TM)
        with pytest.raises(CheckError, match="refl"):
            check_nel(empty_nel, Derivation(Refl(), (), j))

    def test_susp_records_disagreement(self, empty_neol):
        d = susp_node(transposition(a, b), IDENTITY, x, TM)
        assert check_neol(empty_neol, d).fe == env(("x", "a b"))

    def test_equivar(self, empty_nel):
        d = equivar_node(transposition(a, b), x, {a}, TM)
        assert check_nel(empty_nel, d).fresh == {b}

    def test_equivar_is_not_an_neol_rule(self, empty_neol):
        with pytest.raises(CheckError, match="not a NEOL rule"):
            check_neol(empty_neol, equivar_node(IDENTITY, x, (), TM))


class TestStructuralRules:
    def test_symm_and_trans(self, abe):
        beta1 = axiom_node(abe, "beta1")
        loop = trans_node(beta1, symm_node(beta1))
        j = check_nel(abe, loop)
        assert j.lhs == j.rhs == app(lam("a", mv()), mv("y"))

    def test_trans_reports_middle_terms(self, abe):
        beta2 = axiom_node(abe, "beta2")
        with pytest.raises(CheckError, match="middle terms differ"):
            check_nel(abe, trans_node(beta2, beta2))

    def test_weak_must_grow(self, abe):
        beta1 = axiom_node(abe, "beta1")
        with pytest.raises(CheckError, match="is not below"):
            check_nel(abe, weak_node(beta1, env(("x", ""), ("y", ""))))

    def test_weak(self, abe):
        target = env(("x", "a b"), ("y", "c"))
        assert check_nel(abe, weak_node(axiom_node(abe, "beta1"), target)).fe == target

    def test_error_path_points_at_premise(self, abe):
        bad = Derivation(Symm(), (axiom_node(abe, "beta2"),), abe.axiom("beta2").judgement)
        with pytest.raises(CheckError) as info:
            check_nel(abe, weak_node(bad, env(("y", "a"))))
        assert info.value.path == (0,)
        assert info.value.rule == "symm"


class TestAtomRules:
    def test_atm_intro(self, abe):
        j = check_nel(abe, atm_intro_node(axiom_node(abe, "beta1"), {c}))
        assert j.fresh == {c}
        assert j.fe == env(("x", "a c"), ("y", "c"))

    def test_atm_intro_needs_fresh_atoms(self, abe):
        with pytest.raises(CheckError) as info:
            check_nel(abe, atm_intro_node(axiom_node(abe, "beta1"), {a}))
        assert info.value.atoms == (a,)

    def test_atm_intro_is_not_an_neol_rule(self, abe_compiled):
        with pytest.raises(CheckError, match="not a NEOL rule"):
            check_neol(abe_compiled, atm_intro_node(axiom_node(abe_compiled, "beta2"), {c}))

    def test_atm_elim(self, abe):
        intro = atm_intro_node(axiom_node(abe, "beta2"), {c})
        d = atm_elim_node(symm_node(symm_node(axiom_node(abe, "beta1"))), {c}, env(("x", "a"), ("y", "")))
        with pytest.raises(CheckError, match="is not"):
            check_nel(abe, d)
        elim = atm_elim_node(weak_node(axiom_node(abe, "beta2"), env(("y", "c"))), {c}, env(("y", "")))
        assert check_nel(abe, elim) == abe.axiom("beta2").judgement
        assert check_nel(abe, intro).fresh == {c}

    def test_atm_elim_atoms_must_be_fresh(self, abe):
        beta5 = axiom_node(abe, "beta5")
        d = atm_elim_node(weak_node(beta5, env(("x", "a b"))), {a}, env(("x", "b")))
        with pytest.raises(CheckError, match="not fresh for the conclusion"):
            check_nel(abe, d)


class TestSubst:
    def _instance(self, abe_compiled, chosen):
        target = FreshnessEnv()
        se = SortingEnv(((x, TM), (y, TM)))
        sigma = Substitution(((x, var("b")), (y, var("c"))), se, SortingEnv())
        equations = [refl_node(target, var("b"), TM), refl_node(target, var("c"), TM)]
        fresh = [refl_node(target, var("b"), TM)]
        return subst_node(
            sigma, sigma, target, equations, axiom_node(abe_compiled, "beta1"), fresh, [(x, (a,), chosen)]
        )

    def test_neol_instance(self, abe_compiled):
        j = check_neol(abe_compiled, self._instance(abe_compiled, atoms("a0")))
        assert j.lhs == app(lam("a", var("b")), var("c"))
        assert j.rhs == var("b")

    def test_neol_tuple_must_be_fresh(self, abe_compiled):
        with pytest.raises(CheckError, match="not fresh enough") as info:
            check_neol(abe_compiled, self._instance(abe_compiled, atoms("b")))
        assert info.value.atoms == (b,)

    def test_nel_instance_needs_freshness_premise(self, abe):
        target = FreshnessEnv()
        se = SortingEnv(((x, TM), (y, TM)))
        sigma = Substitution(((x, var("a")), (y, var("c"))), se, SortingEnv())
        premises = [refl_node(target, var("a"), TM), refl_node(target, var("c"), TM)]
        d = subst_node(sigma, sigma, target, premises, axiom_node(abe, "beta1"))
        with pytest.raises(CheckError, match="premise 0 mismatch"):
            check_nel(abe, d)

    def test_sample_instance(self, abe):
        d = sample_derivations(abe)["beta2_at_var"]
        assert check_nel(abe, d).lhs == app(lam("a", var("a")), var("b"))


class TestTreeQueries:
    def test_size_depth_and_walk(self, abe):
        beta1 = axiom_node(abe, "beta1")
        d = trans_node(beta1, symm_node(beta1))
        assert derivation_size(d) == 4
        assert derivation_depth(d) == 3
        assert [n.label for n in iter_nodes(d)] == ["trans", "axiom", "symm", "axiom"]

    def test_infer_conclusion(self, abe):
        beta2 = axiom_node(abe, "beta2")
        assert infer_conclusion(abe, Symm(), [beta2]) == symm_node(beta2).conclusion
        with pytest.raises(CheckError, match="explicit conclusion"):
            infer_conclusion(abe, Weak(env(("y", "a"))), [beta2])

    def test_dispatch_and_validity(self, abe, abe_compiled):
        assert check(abe, axiom_node(abe, "alpha")).fresh == {a}
        assert check(abe_compiled, axiom_node(abe_compiled, "alpha_fresh")).fe == env(("x", "a0"))
        assert is_valid(abe, axiom_node(abe, "eta"))
        assert not is_valid(abe, trans_node(axiom_node(abe, "beta2"), axiom_node(abe, "beta2")))

    def test_flavour_mismatch(self, abe, abe_compiled):
        with pytest.raises(CheckError, match="not an NEoL theory"):
            check_neol(abe, axiom_node(abe, "beta2"))
        with pytest.raises(CheckError, match="not an NEL theory"):
            check_nel(abe_compiled, axiom_node(abe_compiled, "beta2"))


@settings(max_examples=40, deadline=None)
@given(perms())
def test_checking_is_equivariant(empty_neol, p):
    fe = env(("x", "a b"), ("y", "b c"))
    left = app(mv("x", transposition(a, b)), lam("a", mv("y", transposition(b, c))))
    right = app(mv("x"), lam("a", mv("y")))
    d = certify_eq(empty_neol.sig, fe, left, right, TM)
    check_neol(empty_neol, d)
    check_neol(empty_neol, act_derivation(p, d))

import pytest

from nominal.core.environments import (
    Axiom,
    Flavour,
    FreshnessEnv,
    Judgement,
    Theory,
    check_judgement,
    empty_theory,
    fe_act,
    fe_extend,
    fe_leq,
    fe_support,
    judgement_support,
    underlying_sorting_env,
)
from nominal.core.errors import JudgementError
from nominal.core.perm_core import atom_set, atoms, transposition
from nominal.core.terms import Constructed, SortingEnv, Var
from nominal.corpus import NM, PAIR, TM, env, lam, lambda_signature, mv, var

a, b, c = atoms("a b c")
x, y = Var("x"), Var("y")


class TestFreshnessEnv:
    def test_entries_are_ordered_by_variable(self):
        fe = env(("y", "b"), ("x", "a"))
        assert fe.domain() == (x, y)
        assert fe.atoms_of(y) == {b}
        assert fe.sort_of(x) == TM
        assert fe == env(("x", "a"), ("y", "b"))

    def test_double_binding_rejected(self):
        with pytest.raises(JudgementError, match="binds x twice"):
            FreshnessEnv(((x, frozenset(), TM), (x, frozenset({a}), TM)))

    def test_printing(self):
        assert str(env(("x", ""), ("y", "b a"))) == "(x : tm, {a b} # y : tm)"
        assert str(FreshnessEnv()) == "()"

    def test_from_sorting_and_back(self):
        se = SortingEnv(((x, TM), (y, TM)))
        fe = FreshnessEnv.from_sorting(se)
        assert fe_support(fe) == frozenset()
        assert underlying_sorting_env(fe) == se

    def test_restrict(self):
        assert env(("x", "a"), ("y", "b")).restrict([y]) == env(("y", "b"))


class TestOrder:
    def test_reflexive(self):
        fe = env(("x", "a"))
        assert fe_leq(fe, fe)

    def test_grows_domain_and_atoms(self):
        assert fe_leq(env(("x", "a")), env(("x", "a b"), ("y", "")))

    def test_missing_variable(self):
        assert not fe_leq(env(("x", ""), ("y", "")), env(("x", "a")))

    def test_shrinking_atoms(self):
        assert not fe_leq(env(("x", "a b")), env(("x", "a")))

    def test_sort_mismatch(self):
        other = FreshnessEnv.single(x, (), NM)
        assert not fe_leq(env(("x", "")), other)


class TestExtendAndAct:
    def test_extend_adds_to_every_variable(self):
        assert fe_extend(env(("x", "a"), ("y", "")), {c}) == env(("x", "a c"), ("y", "c"))

    def test_extend_by_nothing(self):
        fe = env(("x", "a"))
        assert fe_extend(fe, ()) is fe

    def test_act_and_support(self):
        fe = env(("x", "a"), ("y", "b"))
        assert fe_act(transposition(a, c), fe) == env(("x", "c"), ("y", "b"))
        assert fe_support(fe) == {a, b}


class TestJudgement:
    def test_neol_judgement_has_no_freshness(self):
        with pytest.raises(JudgementError, match="NEoL"):
            Judgement(env(("x", "")), {a}, mv(), mv(), TM, Flavour.NEOL)

    def test_equality_ignores_flavour(self):
        j = Judgement(env(("x", "")), frozenset(), mv(), mv(), TM)
        assert j == j.with_flavour(Flavour.NEOL)

    def test_checked_defaults_rhs_to_lhs(self):
        j = Judgement.checked(lambda_signature(), env(("x", "")), {a}, lam("a", mv()), None, TM)
        assert j.rhs == j.lhs
        assert not j.is_equation
        assert str(j) == "(x : tm) |- {a} # lam[a] x : tm"

    def test_printing_with_both_sides(self):
        j = Judgement(env(("x", "a b")), frozenset(), mv("x", transposition(a, b)), mv(), TM)
        assert str(j) == "({a b} # x : tm) |- (a b) x ~ x : tm"

    def test_ill_sorted_side(self):
        with pytest.raises(JudgementError, match="right side"):
            Judgement.checked(lambda_signature(), env(("x", "")), (), mv(), mv("y"), TM)

    def test_construction_rejects_ill_sorted_sides(self):
        with pytest.raises(JudgementError, match="left side has sort tm"):
            Judgement(env(("x", "")), frozenset(), var("a"), var("a"), NM)
        with pytest.raises(JudgementError, match="unbound variable y"):
            Judgement(env(("x", "")), frozenset(), mv(), mv("y"), TM)

    def test_unknown_sort(self):
        fe = FreshnessEnv(((x, frozenset(), NM),))
        j = Judgement(fe, frozenset(), mv(), mv(), NM)
        with pytest.raises(JudgementError, match="unknown sort nm"):
            check_judgement(lambda_signature(), j)

    def test_support(self):
        j = Judgement(env(("x", "a")), frozenset({b}), lam("c", mv()), lam("c", mv()), TM)
        assert judgement_support(j) == atom_set("a b c")


class TestTheory:
    def test_duplicate_axiom(self):
        j = Judgement(env(("x", "")), frozenset(), mv(), mv(), TM)
        with pytest.raises(JudgementError, match="duplicate axiom"):
            Theory("t", lambda_signature(), (Axiom("r", j), Axiom("r", j)))

    def test_ill_formed_axiom(self):
        pair = Constructed(PAIR(a, b))
        j = Judgement(FreshnessEnv(), frozenset(), pair, pair, NM)
        with pytest.raises(JudgementError, match="axiom bad"):
            Theory("t", lambda_signature(), (Axiom("bad", j),))

    def test_neol_theory_rejects_freshness_axioms(self):
        j = Judgement(env(("x", "")), frozenset({a}), lam("a", mv()), lam("a", mv()), TM)
        with pytest.raises(JudgementError, match="carries a freshness set"):
            Theory("t", lambda_signature(), (Axiom("alpha", j),), Flavour.NEOL)

    def test_lookup(self, abe):
        assert len(abe) == 7
        assert abe.names()[0] == "alpha"
        assert abe.axiom("beta2").judgement.fresh == frozenset()
        assert abe.axiom("gamma") is None

    def test_empty_theory(self):
        t = empty_theory(lambda_signature())
        assert t.flavour is Flavour.NEOL
        assert len(t) == 0
        assert empty_theory(lambda_signature(), Flavour.NEL).flavour is Flavour.NEL

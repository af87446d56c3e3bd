import pytest
from hypothesis import assume, given

from nominal.core.environments import Judgement, fe_extend
from nominal.core.errors import BuildError, SortError
from nominal.core.perm_core import IDENTITY, atoms, disagreement_set, gen_transposition, transposition
from nominal.core.terms import Constructed, object_act
from nominal.corpus import APP, LAM, TM, app, env, lam, mv, var
from nominal.kernel.empty_theory import certify_eq, certify_fresh, decide_eq, decide_fresh, decide_judgement
from nominal.kernel.proof_kernel import check_nel, check_neol, derivation_size
from nominal.kernel.theory_compiler import canonical_fresh
from tests.strategies import DECISIONS, atom_sets, atom_st, environments, perms, terms

a, b, c = atoms("a b c")


class TestDecideEq:
    def test_swap_under_freshness(self, sig):
        assert decide_eq(sig, env(("x", "a b")), mv("x", transposition(a, b)), mv(), TM)

    def test_identical_suspensions(self, sig):
        assert decide_eq(sig, env(("x", "")), mv(), mv(), TM)

    def test_swap_without_freshness(self, sig):
        assert not decide_eq(sig, env(("x", "")), mv("x", transposition(a, b)), mv(), TM)

    def test_different_variables(self, sig):
        assert not decide_eq(sig, env(("x", "a"), ("y", "a")), mv("x"), mv("y"), TM)

    def test_different_symbols(self, sig):
        assert not decide_eq(sig, env(("x", "")), lam("a", mv()), lam("b", mv()), TM)
        assert not decide_eq(sig, env(("x", "")), var("a"), lam("a", mv()), TM)

    def test_congruence(self, sig):
        fe = env(("x", "a b"), ("y", ""))
        assert decide_eq(sig, fe, app(mv("x", transposition(a, b)), mv("y")), app(mv(), mv("y")), TM)

    def test_ill_sorted_input(self, sig):
        with pytest.raises(SortError):
            decide_eq(sig, env(("x", "")), mv("y"), mv("y"), TM)


class TestDecideFresh:
    def test_through_binder(self, sig):
        assert decide_fresh(sig, env(("x", "a")), {a}, lam("b", mv()), TM)

    def test_binder_needs_alpha(self, sig):
        assert not decide_fresh(sig, env(("x", "")), {a}, lam("a", mv()), TM)

    def test_empty_atom_set(self, sig):
        assert decide_fresh(sig, env(("x", "")), (), app(var("a"), mv()), TM)

    def test_suspension_pulls_back_atoms(self, sig):
        assert decide_fresh(sig, env(("x", "b")), {a}, mv("x", transposition(a, b)), TM)
        assert not decide_fresh(sig, env(("x", "a")), {a}, mv("x", transposition(a, b)), TM)

    def test_judgement(self, sig):
        j = Judgement(env(("x", "a b")), frozenset({c}), mv("x", transposition(a, b)), mv(), TM)
        assert not decide_judgement(sig, j)
        j = Judgement(env(("x", "a b c")), frozenset({c}), mv("x", transposition(a, b)), mv(), TM)
        assert decide_judgement(sig, j)


class TestCertify:
    def test_suspension_certificate(self, sig, empty_neol):
        fe = env(("x", "a b"), ("y", ""))
        d = certify_eq(sig, fe, mv("x", transposition(a, b)), mv(), TM)
        assert [n.label for n in (d, d.premises[0])] == ["weak", "susp"]
        assert check_neol(empty_neol, d).fe == fe

    def test_refl_certificate(self, sig):
        d = certify_eq(sig, env(("x", "")), mv(), mv(), TM)
        assert d.label == "refl"
        assert derivation_size(d) == 1

    def test_congruence_certificate(self, sig, empty_neol):
        fe = env(("x", "a b"))
        d = certify_eq(sig, fe, app(mv("x", transposition(a, b)), var("c")), app(mv(), var("c")), TM)
        assert d.label == "subst"
        check_neol(empty_neol, d)

    def test_non_theorem(self, sig):
        with pytest.raises(BuildError):
            certify_eq(sig, env(("x", "")), mv("x", transposition(a, b)), mv(), TM)

    def test_freshness_certificate(self, sig, empty_nel):
        d = certify_fresh(sig, env(("x", "a")), {a}, lam("b", mv()), TM)
        j = check_nel(empty_nel, d)
        assert j.fresh == {a}
        assert j.fe == env(("x", "a"))


class TestProperties:
    @DECISIONS
    @given(environments(), terms(), perms())
    def test_certificates_check(self, empty_neol, fe, t, p):
        sig = empty_neol.sig
        moved = object_act(p, t)
        assume(decide_eq(sig, fe, t, moved, TM))
        assert check_neol(empty_neol, certify_eq(sig, fe, t, moved, TM)).rhs == moved

    @DECISIONS
    @given(environments(), terms())
    def test_reflexive(self, sig, fe, t):
        assert decide_eq(sig, fe, t, t, TM)

    @DECISIONS
    @given(environments(), terms(), perms(), perms())
    def test_symmetric_and_transitive(self, sig, fe, t, p, q):
        u, v = object_act(p, t), object_act(q, t)
        assert decide_eq(sig, fe, t, u, TM) == decide_eq(sig, fe, u, t, TM)
        if decide_eq(sig, fe, t, u, TM) and decide_eq(sig, fe, u, v, TM):
            assert decide_eq(sig, fe, t, v, TM)

    @DECISIONS
    @given(environments(), terms(), terms(), perms(), atom_st)
    def test_congruence(self, sig, fe, t1, t2, p, name):
        u1, u2 = object_act(p, t1), object_act(p, t2)
        both = decide_eq(sig, fe, t1, u1, TM) and decide_eq(sig, fe, t2, u2, TM)
        if both:
            assert decide_eq(sig, fe, Constructed(APP(), (t1, t2)), Constructed(APP(), (u1, u2)), TM)
            assert decide_eq(sig, fe, Constructed(LAM(name), (t1,)), Constructed(LAM(name), (u1,)), TM)

    @DECISIONS
    @given(environments(), atom_sets(), terms())
    def test_freshness_is_a_swap_equation(self, sig, fe, fresh, t):
        order, chosen = canonical_fresh(fe, fresh, t)
        swapped = object_act(gen_transposition(order, chosen), t)
        assert decide_fresh(sig, fe, fresh, t, TM) == decide_eq(sig, fe_extend(fe, chosen), t, swapped, TM)

    @DECISIONS
    @given(environments(), atom_sets(max_size=2), terms(max_leaves=4))
    def test_freshness_certificates_check(self, empty_nel, fe, fresh, t):
        sig = empty_nel.sig
        assume(decide_fresh(sig, fe, fresh, t, TM))
        j = check_nel(empty_nel, certify_fresh(sig, fe, fresh, t, TM))
        assert (j.fe, j.fresh, j.lhs) == (fe, fresh, t)

    @DECISIONS
    @given(environments(), terms(max_leaves=4), perms(), perms(), perms())
    def test_permutations_agreeing_off_fresh_atoms(self, sig, fe, t, r, p1, p2):
        # t ~ t' and a swap of ds(p1, p2) with fresh atoms fixing t give p1 t ~ p2 t'
        t_prime = object_act(r, t)
        ds = disagreement_set(p1, p2)
        order, chosen = canonical_fresh(fe, ds, t)
        swapped = object_act(gen_transposition(order, chosen), t)
        equal = decide_eq(sig, fe, t, t_prime, TM)
        fixed = decide_eq(sig, fe_extend(fe, chosen), t, swapped, TM)
        if equal and fixed:
            assert decide_eq(sig, fe, object_act(p1, t), object_act(p2, t_prime), TM)

    def test_identity_moves_nothing(self, sig):
        assert decide_eq(sig, env(("x", "")), object_act(IDENTITY, mv()), mv(), TM)

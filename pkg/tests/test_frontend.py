import pytest
from hypothesis import given, settings

from nominal.core.environments import Flavour, Judgement
from nominal.core.errors import FrontendError
from nominal.core.perm_core import IDENTITY, atom_set, atoms, from_cycles, transposition
from nominal.corpus import (
    COMPILED_FILE,
    THEORY_FILE,
    TM,
    app,
    env,
    lam,
    lambda_abe_theory,
    lambda_signature,
    mv,
    sample_derivations,
    var,
)
from nominal.frontend.parser import (
    DerivationDecl,
    IncludeDecl,
    load_source,
    parse_derivation,
    parse_judgement,
    parse_perm,
    parse_source,
    parse_term,
)
from nominal.frontend.printer import (
    print_derivation,
    print_env,
    print_judgement,
    print_source,
    print_term,
    print_theory,
)
from nominal.kernel.proof_kernel import check_nel
from nominal.kernel.theory_compiler import compile_theory
from tests.strategies import atom_sets, environments, perms, terms

a, b, c, d = atoms("a b c d")

HEADER = "sort tm;\nop app : (tm, tm) -> tm;\nop lam[1] : (tm) -> tm;\nop var[1] : tm;\n"


class TestTerms:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("x", mv()),
            ("(a b) x", mv("x", transposition(a, b))),
            ("var[a]", var("a")),
            ("lam[a] x", lam("a", mv())),
            ("app(lam[a] x, y)", app(lam("a", mv()), mv("y"))),
            ("lam[a](app(x, var[a]))", lam("a", app(mv(), var("a")))),
            ("lam[a0]((a a0) x)", lam("a0", mv("x", transposition(a, atoms("a0")[0])))),
        ],
    )
    def test_parse_and_print(self, sig, text, expected):
        assert parse_term(text, sig) == expected
        assert print_term(expected) == text

    def test_nested_binders_print_with_parentheses(self):
        assert print_term(lam("a", lam("b", mv()))) == "lam[a](lam[b] x)"

    def test_unknown_operation(self, sig):
        with pytest.raises(FrontendError, match="not an operation") as info:
            parse_term("foo[a]", sig)
        assert (info.value.line, info.value.column) == (1, 1)

    def test_wrong_arity(self, sig):
        with pytest.raises(FrontendError, match="expects 2 argument"):
            parse_term("app(x)", sig)

    def test_permutation_on_operation(self, sig):
        with pytest.raises(FrontendError, match="permutation prefix"):
            parse_term("(a b) var[a]", sig)


class TestPerms:
    def test_identity(self):
        assert parse_perm("id") == IDENTITY

    def test_cycles(self):
        assert parse_perm("(a b c)") == from_cycles([atoms("a b c")])
        assert parse_perm("(a b)(c d)") == from_cycles([atoms("a b"), atoms("c d")])
        assert str(parse_perm("(c d)(a b)")) == "(a b)(c d)"


class TestJudgements:
    def test_equation(self, sig):
        j = parse_judgement("({a b} # x : tm) |- (a b) x ~ x : tm", sig)
        assert j == Judgement(env(("x", "a b")), frozenset(), mv("x", transposition(a, b)), mv(), TM)

    def test_freshness(self, sig):
        j = parse_judgement("(x : tm) |- {a} # lam[a] x : tm", sig)
        assert j.fresh == {a}
        assert j.lhs == j.rhs == lam("a", mv())

    def test_single_atom_without_braces(self, sig):
        assert parse_judgement("(a # x : tm) |- x : tm", sig).fe == env(("x", "a"))

    def test_neol_rejects_freshness(self, sig):
        with pytest.raises(FrontendError):
            parse_judgement("(x : tm) |- {a} # lam[a] x : tm", sig, Flavour.NEOL)

    @pytest.mark.parametrize(
        "text",
        [
            "({a b} # x : tm) |- (a b) x ~ x : tm",
            "(x : tm) |- {a} # lam[a] x : tm",
            "({a} # x : tm, y : tm) |- app(lam[a] x, y) ~ x : tm",
            "() |- app(lam[a] var[a], var[b]) ~ var[b] : tm",
        ],
    )
    def test_round_trip(self, sig, text):
        assert print_judgement(parse_judgement(text, sig)) == text

    def test_env_printing_sorts_atoms(self):
        assert print_env(env(("x", "b a"), ("y", ""))) == "({a b} # x : tm, y : tm)"


class TestSourceFiles:
    def test_declarations(self):
        source = parse_source(HEADER + "theory t : nel {\n  axiom eta : ({a} # x : tm) |- lam[a](app(x, var[a])) ~ x : tm;\n}\n")
        assert source.signature == lambda_signature()
        assert source.theory().names() == ("eta",)
        assert source.theory("t").flavour is Flavour.NEL

    def test_theory_lookup(self):
        source = parse_source(HEADER + "theory t : nel {}\ntheory u : neol {}\n")
        with pytest.raises(FrontendError, match="exactly one theory"):
            source.theory()
        with pytest.raises(FrontendError, match="no theory named v"):
            source.theory("v")
        assert len(source.theory("u")) == 0

    def test_syntax_error_has_a_position(self):
        with pytest.raises(FrontendError, match="syntax error") as info:
            parse_source("sort tm;\nop app : (tm, tm) -> ;\n")
        assert info.value.line == 2

    def test_resolution_error_has_a_position(self):
        text = HEADER + "theory t : nel {\n  axiom bad : (x : tm) |- lam[a] y : tm;\n}\n"
        with pytest.raises(FrontendError) as info:
            parse_source(text)
        assert info.value.line == 6

    @pytest.mark.parametrize(
        "text, message",
        [
            ("sort tm;\nsort tm;\n", "duplicate sort tm"),
            (HEADER + "op app : tm;\n", "duplicate operation family app"),
            (HEADER + "theory t : nel {}\ntheory t : nel {}\n", "duplicate theory t"),
            (HEADER + "derivation d in nope = symm (refl);\n", "unknown theory nope"),
        ],
    )
    def test_bad_declarations(self, text, message):
        with pytest.raises(FrontendError, match=message):
            parse_source(text)

    def test_comments_are_ignored(self):
        source = parse_source("// sorts\nsort tm; // trailing\n")
        assert source.signature.sorts == {TM}

    def test_print_source_round_trip(self, corpus_dir):
        source = load_source(corpus_dir / THEORY_FILE)
        again = parse_source(print_source(source))
        assert again.theories == source.theories
        assert again.judgements == source.judgements
        assert print_source(again) == print_source(source)


class TestIncludes:
    def test_include(self, tmp_path, corpus_dir):
        (tmp_path / "base.nel").write_text((corpus_dir / THEORY_FILE).read_text(encoding="utf-8"), encoding="utf-8")
        main = tmp_path / "main.nel"
        main.write_text('include "base.nel";\ninclude "base.nel";\nderivation e in lambda_abe = symm (axiom{eta});\n')
        source = load_source(main)
        assert [type(decl) for decl in source.declarations] == [IncludeDecl, IncludeDecl, DerivationDecl]
        assert "lambda_abe" in source.theories
        assert source.derivations["e"].derivation.label == "symm"
        assert print_source(source).startswith('include "base.nel";\ninclude "base.nel";\n\nderivation e in lambda_abe =\n  symm [')

    def test_missing_include(self, tmp_path):
        main = tmp_path / "main.nel"
        main.write_text('include "missing.nel";\n')
        with pytest.raises(FrontendError, match="cannot read"):
            load_source(main)

    def test_included_file_that_is_not_utf8(self, tmp_path):
        (tmp_path / "binary.nel").write_bytes(b"sort tm;\n\xff\xfe\n")
        main = tmp_path / "main.nel"
        main.write_text('include "binary.nel";\n')
        with pytest.raises(FrontendError, match="not UTF-8 text"):
            load_source(main)

    def test_error_in_included_file_names_it(self, tmp_path):
        (tmp_path / "broken.nel").write_text("sort tm\n")
        main = tmp_path / "main.nel"
        main.write_text('include "broken.nel";\n')
        with pytest.raises(FrontendError, match="broken.nel"):
            load_source(main)


class TestCorpusFiles:
    def test_theory_file(self, corpus_dir):
        source = load_source(corpus_dir / THEORY_FILE)
        assert source.theory("lambda_abe") == lambda_abe_theory()
        assert set(source.judgements) == {"swap_fixed", "lam_fresh"}

    def test_compiled_file(self, corpus_dir, abe):
        compiled = load_source(corpus_dir / COMPILED_FILE).theory()
        assert compiled.flavour is Flavour.NEOL
        assert compiled == compile_theory(abe)
        assert print_theory(compiled) == print_theory(compile_theory(abe))


class TestDerivations:
    def test_inferred_conclusions(self, abe):
        d = parse_derivation("symm (axiom{eta})", abe)
        eta = abe.axiom("eta").judgement
        assert (d.conclusion.lhs, d.conclusion.rhs) == (eta.rhs, eta.lhs)

    def test_explicit_conclusion_required(self, abe):
        with pytest.raises(FrontendError, match="needs an explicit conclusion"):
            parse_derivation("refl", abe)

    def test_unknown_axiom(self, abe):
        with pytest.raises(FrontendError, match="has no axiom gamma"):
            parse_derivation("axiom{gamma}", abe)

    def test_susp_shape(self, abe):
        with pytest.raises(FrontendError, match="two suspensions"):
            parse_derivation("susp [(x : tm) |- var[a] ~ x : tm]", abe)

    @pytest.mark.parametrize("name", sorted(sample_derivations()))
    def test_printed_derivations_parse_back(self, abe, name):
        original = sample_derivations(abe)[name]
        parsed = parse_derivation(print_derivation(original), abe)
        assert check_nel(abe, parsed) == original.conclusion
        assert print_derivation(parsed) == print_derivation(original)


class TestRoundTrip:
    @settings(max_examples=80, deadline=None)
    @given(terms())
    def test_terms(self, sig, t):
        assert parse_term(print_term(t), sig) == t

    @settings(max_examples=60, deadline=None)
    @given(environments(), atom_sets(), terms(max_leaves=4), terms(max_leaves=4))
    def test_judgements(self, sig, fe, fresh, lhs, rhs):
        j = Judgement(fe, fresh, lhs, rhs, TM)
        assert parse_judgement(print_judgement(j), sig) == j

    @settings(max_examples=60, deadline=None)
    @given(perms())
    def test_perms(self, p):
        assert parse_perm(str(p)) == p

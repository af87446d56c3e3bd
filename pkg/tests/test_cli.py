import json

import pytest
from click.testing import CliRunner

from cli.nominal_cli import EXIT_FALSE, EXIT_OK, EXIT_USAGE, cli
from config.settings import settings
from nominal.core.environments import Judgement
from nominal.corpus import COMPILED_FILE, DERIVATIONS_FILE, SAMPLES_FILE, THEORY_FILE, lambda_abe_theory
from nominal.frontend.parser import load_source
from nominal.frontend.printer import print_judgement
from nominal.utils.reasoning_service import reasoning_service

SWAP = "({a b} # x : tm) |- (a b) x ~ x : tm"
UNSWAPPED = "(x : tm) |- (a b) x ~ x : tm"
BETA2_AT_VAR = "() |- app(lam[a] var[a], var[b]) ~ var[b] : tm"


@pytest.fixture
def runner(monkeypatch):
    monkeypatch.setattr(settings, "LOG_LEVEL", "CRITICAL")
    return CliRunner()


@pytest.fixture
def theory_file(corpus_dir):
    return str(corpus_dir / THEORY_FILE)


def write_with_include(tmp_path, include, body):
    path = tmp_path / "extra.nel"
    path.write_text(f'include "{include.as_posix()}";\n{body}\n', encoding="utf-8")
    return str(path)


class TestCheck:
    def test_corpus_derivations_pass(self, runner, corpus_dir):
        result = runner.invoke(cli, ["check", str(corpus_dir / DERIVATIONS_FILE)])
        assert result.exit_code == EXIT_OK, result.output
        assert "derivation(s) check" in result.output

    def test_rejected_derivation(self, runner, tmp_path, corpus_dir):
        path = write_with_include(
            tmp_path,
            corpus_dir / THEORY_FILE,
            "derivation bad in lambda_abe = symm [(y : tm) |- app(lam[a] var[a], y) ~ y : tm] (axiom{beta2});",
        )
        result = runner.invoke(cli, ["check", path])
        assert result.exit_code == EXIT_FALSE
        assert "rejected" in result.output

    def test_json(self, runner, corpus_dir):
        result = runner.invoke(cli, ["check", str(corpus_dir / DERIVATIONS_FILE), "--format", "json"])
        payload = json.loads(result.stdout)
        assert payload["success"] is True
        assert payload["data"]["failed"] == 0
        assert payload["count"] == payload["data"]["passed"] == 9

    def test_unknown_theory_filter(self, runner, corpus_dir):
        result = runner.invoke(cli, ["check", str(corpus_dir / DERIVATIONS_FILE), "--theory", "nope"])
        assert result.exit_code == EXIT_USAGE

    def test_syntax_error(self, runner, tmp_path):
        path = tmp_path / "broken.nel"
        path.write_text("sort tm;\nop app : (tm, tm) -> ;\n")
        result = runner.invoke(cli, ["check", str(path), "--format", "json"])
        assert result.exit_code == EXIT_USAGE
        payload = json.loads(result.stdout)
        assert payload["success"] is False
        assert payload["data"]["line"] is not None


class TestCompile:
    def test_output_matches_the_shipped_file(self, runner, corpus_dir, theory_file):
        result = runner.invoke(cli, ["compile", theory_file])
        assert result.exit_code == EXIT_OK
        assert result.stdout == (corpus_dir / COMPILED_FILE).read_text(encoding="utf-8")

    def test_output_file(self, runner, tmp_path, theory_file):
        target = tmp_path / "out.neol"
        result = runner.invoke(cli, ["compile", theory_file, "-o", str(target), "--format", "json"])
        assert result.exit_code == EXIT_OK
        payload = json.loads(result.stdout)
        assert payload["data"]["axioms_in"] == 7
        assert payload["data"]["axioms_out"] == 8
        assert load_source(target).theory().names()[:2] == ("alpha", "alpha_fresh")

    def test_neol_input_is_refused(self, runner, corpus_dir):
        result = runner.invoke(cli, ["compile", str(corpus_dir / COMPILED_FILE)])
        assert result.exit_code == EXIT_USAGE


class TestDecide:
    def test_true(self, runner, theory_file):
        result = runner.invoke(cli, ["decide", SWAP, "--sig", theory_file])
        assert result.exit_code == EXIT_OK
        assert result.stdout.strip() == "true"

    def test_false(self, runner, theory_file):
        result = runner.invoke(cli, ["decide", UNSWAPPED, "--sig", theory_file])
        assert result.exit_code == EXIT_FALSE
        assert result.stdout.strip() == "false"

    def test_named_judgement_with_certificate(self, runner, theory_file):
        result = runner.invoke(cli, ["decide", "swap_fixed", "--sig", theory_file, "--certify"])
        assert result.exit_code == EXIT_OK
        assert result.output.startswith("true\n")
        assert "susp [" in result.output

    def test_freshness_certificate(self, runner, theory_file):
        result = runner.invoke(cli, ["decide", "({a} # x : tm) |- {a} # lam[b] x : tm", "--sig", theory_file, "--certify"])
        assert result.exit_code == EXIT_OK
        assert "true" in result.output

    def test_json(self, runner, theory_file):
        result = runner.invoke(cli, ["decide", UNSWAPPED, "--sig", theory_file, "--format", "json"])
        payload = json.loads(result.stdout)
        assert payload["data"]["verdict"] == "false"
        assert payload["data"]["judgement"] == UNSWAPPED

    def test_parse_error(self, runner, theory_file):
        result = runner.invoke(cli, ["decide", "(x : tm |- x : tm", "--sig", theory_file])
        assert result.exit_code == EXIT_USAGE
        assert "syntax error" in result.output


class TestFresh:
    @pytest.mark.parametrize(
        "judgement, code",
        [
            ("({a} # x : tm) |- {a} # lam[b] x : tm", EXIT_OK),
            ("(x : tm) |- {a} # lam[b] x : tm", EXIT_FALSE),
            ("lam_fresh", EXIT_FALSE),
        ],
    )
    def test_verdicts(self, runner, theory_file, judgement, code):
        assert runner.invoke(cli, ["fresh", judgement, "--sig", theory_file]).exit_code == code

    def test_single_term_only(self, runner, theory_file):
        assert runner.invoke(cli, ["fresh", SWAP, "--sig", theory_file]).exit_code == EXIT_USAGE


class TestSearch:
    def test_found(self, runner, theory_file):
        result = runner.invoke(cli, ["search", BETA2_AT_VAR, "--theory", theory_file, "--depth", "2"])
        assert result.exit_code == EXIT_OK
        assert result.output.startswith("subst{y := var[b]}")

    def test_not_found(self, runner, theory_file):
        result = runner.invoke(cli, ["search", UNSWAPPED, "--theory", theory_file, "--depth", "1"])
        assert result.exit_code == EXIT_FALSE
        assert result.stdout.strip() == "not found"

    def test_json(self, runner, theory_file):
        result = runner.invoke(cli, ["search", BETA2_AT_VAR, "--theory", theory_file, "--depth", "2", "--format", "json"])
        payload = json.loads(result.stdout)
        assert payload["data"]["verdict"] == "found"
        assert payload["data"]["theory"] == "lambda_abe"

    def test_bad_budget(self, runner, theory_file):
        assert runner.invoke(cli, ["search", BETA2_AT_VAR, "--theory", theory_file, "--depth", "0"]).exit_code == EXIT_USAGE


class TestUnreadableInput:
    @pytest.fixture
    def garbled(self, tmp_path, corpus_dir):
        text = (corpus_dir / DERIVATIONS_FILE).read_bytes()
        path = tmp_path / "garbled.nel"
        path.write_bytes(text[:40] + b"\xff\xfe" + text[40:])
        return str(path)

    def test_check(self, runner, garbled):
        result = runner.invoke(cli, ["check", garbled])
        assert result.exit_code == EXIT_USAGE
        assert "UTF-8" in result.output
        assert "Traceback" not in result.output

    def test_check_json(self, runner, garbled):
        result = runner.invoke(cli, ["check", garbled, "--format", "json"])
        assert result.exit_code == EXIT_USAGE
        payload = json.loads(result.stdout)
        assert payload["success"] is False
        assert "not UTF-8 text" in payload["data"]["message"]

    def test_decide(self, runner, garbled):
        result = runner.invoke(cli, ["decide", SWAP, "--sig", garbled])
        assert result.exit_code == EXIT_USAGE
        assert "UTF-8" in result.output


class TestTranslate:
    def test_translate(self, runner, corpus_dir):
        result = runner.invoke(cli, ["translate", str(corpus_dir / DERIVATIONS_FILE), "--derivation", "alpha_recovered"])
        assert result.exit_code == EXIT_OK
        assert "// equation" in result.output
        assert "// freshness" in result.output

    def test_unknown_derivation(self, runner, corpus_dir):
        result = runner.invoke(cli, ["translate", str(corpus_dir / DERIVATIONS_FILE), "--derivation", "nope"])
        assert result.exit_code == EXIT_USAGE


class TestCorpusAndConfig:
    def test_corpus(self, runner, tmp_path):
        result = runner.invoke(cli, ["corpus", "-o", str(tmp_path)])
        assert result.exit_code == EXIT_OK
        assert load_source(tmp_path / THEORY_FILE).theory() == lambda_abe_theory()
        samples = load_source(tmp_path / SAMPLES_FILE)
        assert len(samples.derivations) == 6

    def test_config(self, runner):
        result = runner.invoke(cli, ["config"])
        assert result.exit_code == EXIT_OK
        assert "Kernel Configuration" in result.output


class TestEmbed:
    @pytest.fixture
    def neol_file(self, tmp_path, corpus_dir):
        return write_with_include(
            tmp_path, corpus_dir / COMPILED_FILE, "derivation back in lambda_abe = symm (axiom{beta2});"
        )

    def test_service(self, neol_file):
        record = reasoning_service.embed(neol_file, "back")
        beta2 = load_source(neol_file).theory().axiom("beta2").judgement
        assert record.theory == "lambda_abe"
        assert record.conclusion == print_judgement(Judgement(beta2.fe, frozenset(), beta2.rhs, beta2.lhs, beta2.sort))

    def test_embed(self, runner, neol_file):
        result = runner.invoke(cli, ["embed", neol_file, "--derivation", "back"])
        assert result.exit_code == EXIT_OK
        assert result.stdout.startswith("symm [")

    def test_json(self, runner, neol_file):
        result = runner.invoke(cli, ["embed", neol_file, "--derivation", "back", "--format", "json"])
        payload = json.loads(result.stdout)
        assert payload["success"] is True
        assert payload["data"]["name"] == "back"

    def test_nel_derivation_is_refused(self, runner, corpus_dir):
        result = runner.invoke(cli, ["embed", str(corpus_dir / DERIVATIONS_FILE), "--derivation", "alpha_recovered"])
        assert result.exit_code == EXIT_USAGE

    def test_rejected_derivation(self, runner, tmp_path, corpus_dir):
        path = write_with_include(
            tmp_path,
            corpus_dir / COMPILED_FILE,
            "derivation bad in lambda_abe = symm [(y : tm) |- app(lam[a] var[a], y) ~ y : tm] (axiom{beta2});",
        )
        assert runner.invoke(cli, ["embed", path, "--derivation", "bad"]).exit_code == EXIT_FALSE

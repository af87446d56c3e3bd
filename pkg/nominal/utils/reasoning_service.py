# =========================================
# REASONING SERVICE LAYER
# Nominal Equational Logic - reasoning kernel
# =========================================

import logging
from pathlib import Path
from typing import List, Optional, Tuple, Union

from nominal.core.environments import Flavour, Judgement, empty_theory
from nominal.core.errors import CheckError, FrontendError, NominalError
from nominal.corpus import SAMPLES_FILE, THEORY_FILE, lambda_abe_theory, samples_source, theory_source
from nominal.frontend.parser import SourceFile, load_source, parse_judgement
from nominal.frontend.printer import print_derivation, print_judgement, print_signature, print_theory
from nominal.kernel.empty_theory import certify_eq, certify_fresh, decide_fresh, decide_judgement
from nominal.kernel.proof_kernel import check, check_nel, check_neol, derivation_size, trans_node
from nominal.kernel.search_oracle import SearchBudget, bounded_search
from nominal.kernel.theory_compiler import compile_theory
from nominal.kernel.translation import as_nel_theory, embed_neol_derivation, translate_derivation
from nominal.models.result_models import (
    CheckRecord,
    CompileRecord,
    DecideRecord,
    DerivationCheckRecord,
    EmbedRecord,
    ErrorRecord,
    SearchRecord,
    TranslateRecord,
    Verdict,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def error_record(e: NominalError) -> ErrorRecord:
    """Diagnostic fields of any kernel or front-end error"""
    if isinstance(e, CheckError):
        return ErrorRecord(
            message=e.message, path=list(e.path), rule=e.rule, atoms=[str(a) for a in e.atoms]
        )
    if isinstance(e, FrontendError):
        return ErrorRecord(message=e.message, line=e.line, column=e.column)
    return ErrorRecord(message=str(e))


class ReasoningService:
    """
    Operations behind the command line: load, check, compile, decide, search
    and translate. Every method raises NominalError subclasses on bad input.
    """

    # =========================================
    # LOADING
    # =========================================

    @staticmethod
    def load(path: PathLike) -> SourceFile:
        """Parse a source file together with its includes"""
        try:
            return load_source(path)
        except NominalError as e:
            logger.error(f"Error loading {path}: {e}")
            raise

    @staticmethod
    def goal(text: str, source: SourceFile, flavour: Flavour = Flavour.NEL) -> Judgement:
        """A judgement given inline, or the name of one declared in source"""
        if "|-" not in text and text.strip() in source.judgements:
            return source.judgements[text.strip()].with_flavour(flavour)
        return parse_judgement(text, source.signature, flavour)

    # =========================================
    # KERNEL CHECKING
    # =========================================

    @staticmethod
    def check_file(path: PathLike, theory: Optional[str] = None) -> CheckRecord:
        """Kernel-check every derivation in the file, optionally only those over one theory"""
        source = ReasoningService.load(path)
        if theory is not None and theory not in source.theories:
            raise FrontendError(f"no theory named {theory} in {path}")
        results: List[DerivationCheckRecord] = []
        for name, decl in source.derivations.items():
            if theory is not None and decl.theory != theory:
                continue
            target = source.theories[decl.theory]
            try:
                conclusion = check(target, decl.derivation)
                results.append(
                    DerivationCheckRecord(
                        name=name,
                        theory=decl.theory,
                        nodes=derivation_size(decl.derivation),
                        conclusion=print_judgement(conclusion),
                        verdict=Verdict.PASS,
                    )
                )
            except CheckError as e:
                logger.error(f"Derivation {name} rejected: {e}")
                results.append(
                    DerivationCheckRecord(
                        name=name,
                        theory=decl.theory,
                        nodes=derivation_size(decl.derivation),
                        verdict=Verdict.FAIL,
                        error=error_record(e),
                    )
                )
        passed = sum(1 for r in results if r.verdict == Verdict.PASS)
        logger.info(f"Checked {len(results)} derivation(s) in {path}: {passed} passed")
        return CheckRecord(file=str(path), passed=passed, failed=len(results) - passed, results=results)

    # =========================================
    # THEORY COMPILATION
    # =========================================

    @staticmethod
    def compile_file(path: PathLike, theory: Optional[str] = None) -> Tuple[str, CompileRecord]:
        """The compiled NEoL theory as source text, with a summary record"""
        path = Path(path)
        source = ReasoningService.load(path)
        original = source.theory(theory)
        if original.flavour is not Flavour.NEL:
            raise FrontendError(f"theory {original.name} is already an NEoL theory")
        compiled = compile_theory(original)
        text = (
            f"// compiled from {path.name}\n"
            + print_signature(compiled.sig)
            + "\n\n"
            + print_theory(compiled)
            + "\n"
        )
        record = CompileRecord(
            source=str(path), theory=compiled.name, axioms_in=len(original), axioms_out=len(compiled)
        )
        return text, record

    # =========================================
    # EMPTY THEORY DECISIONS
    # =========================================

    @staticmethod
    def decide(text: str, sig_path: PathLike, certify: bool = False) -> DecideRecord:
        """Decide a judgement in the empty theory; with certify, attach a checked derivation"""
        source = ReasoningService.load(sig_path)
        j = ReasoningService.goal(text, source)
        holds = decide_judgement(source.signature, j)
        certificate = None
        if holds and certify:
            certificate = print_derivation(ReasoningService.certificate(j, source))
        return DecideRecord(
            judgement=print_judgement(j), verdict=Verdict.TRUE if holds else Verdict.FALSE, certificate=certificate
        )

    @staticmethod
    def certificate(j: Judgement, source: SourceFile):
        """
        A derivation of a judgement that holds in the empty theory: an NEoL
        derivation for a plain equation, an NEL one when freshness is involved.
        """
        sig = source.signature
        if not j.fresh:
            d = certify_eq(sig, j.fe, j.lhs, j.rhs, j.sort)
            check_neol(empty_theory(sig, Flavour.NEOL), d)
            return d
        d = certify_fresh(sig, j.fe, j.fresh, j.lhs, j.sort)
        if j.rhs != j.lhs:
            d = trans_node(d, embed_neol_derivation(certify_eq(sig, j.fe, j.lhs, j.rhs, j.sort)))
        check_nel(empty_theory(sig, Flavour.NEL), d)
        return d

    @staticmethod
    def fresh(text: str, sig_path: PathLike) -> DecideRecord:
        """Decide fe |- as # t : s in the empty theory"""
        source = ReasoningService.load(sig_path)
        j = ReasoningService.goal(text, source)
        if j.rhs != j.lhs:
            raise FrontendError("a freshness query has a single term; drop the '~' part")
        holds = decide_fresh(source.signature, j.fe, j.fresh, j.lhs, j.sort)
        return DecideRecord(judgement=print_judgement(j), verdict=Verdict.TRUE if holds else Verdict.FALSE)

    # =========================================
    # SEARCH
    # =========================================

    @staticmethod
    def search(
        text: str,
        theory_path: PathLike,
        theory: Optional[str] = None,
        depth: Optional[int] = None,
        atoms: Optional[int] = None,
        perm_len: Optional[int] = None,
    ) -> SearchRecord:
        """Bounded proof search for a goal in a theory of the file"""
        source = ReasoningService.load(theory_path)
        target = source.theory(theory)
        goal = ReasoningService.goal(text, source, target.flavour)
        budget = SearchBudget.default_for(target, goal, depth, atoms, perm_len)
        found = bounded_search(target, goal, budget)
        if found is None:
            logger.info(f"No derivation of {goal} within depth {budget.max_depth}")
            return SearchRecord(goal=print_judgement(goal), theory=target.name, verdict=Verdict.NOT_FOUND)
        return SearchRecord(
            goal=print_judgement(goal),
            theory=target.name,
            verdict=Verdict.FOUND,
            depth=budget.max_depth,
            derivation=print_derivation(found),
        )

    # =========================================
    # TRANSLATION
    # =========================================

    @staticmethod
    def translate(path: PathLike, name: str) -> TranslateRecord:
        """The two NEoL derivations over the compiled theory for a named NEL derivation"""
        source = ReasoningService.load(path)
        decl = source.derivations.get(name)
        if decl is None:
            raise FrontendError(f"no derivation named {name} in {path}")
        theory = source.theories[decl.theory]
        if theory.flavour is not Flavour.NEL:
            raise FrontendError(f"derivation {name} is over an NEoL theory; translation starts from NEL")
        compiled = compile_theory(theory)
        try:
            equation, freshness = translate_derivation(theory, compiled, decl.derivation)
            check_neol(compiled, equation)
            check_neol(compiled, freshness)
        except NominalError as e:
            logger.error(f"Error translating {name}: {e}")
            raise
        logger.info(
            f"Translated {name}: {derivation_size(equation)} + {derivation_size(freshness)} node(s)"
        )
        return TranslateRecord(
            name=name, equation=print_derivation(equation), freshness=print_derivation(freshness)
        )

    @staticmethod
    def embed(path: PathLike, name: str) -> EmbedRecord:
        """A named NEoL derivation replayed with NEL rules over the same axioms"""
        source = ReasoningService.load(path)
        decl = source.derivations.get(name)
        if decl is None:
            raise FrontendError(f"no derivation named {name} in {path}")
        theory = source.theories[decl.theory]
        if theory.flavour is not Flavour.NEOL:
            raise FrontendError(f"derivation {name} is over an NEL theory; embedding starts from NEoL")
        check_neol(theory, decl.derivation)
        embedded = embed_neol_derivation(decl.derivation)
        conclusion = check_nel(as_nel_theory(theory), embedded)
        logger.info(f"Embedded {name}: {derivation_size(embedded)} node(s)")
        return EmbedRecord(
            name=name,
            theory=theory.name,
            conclusion=print_judgement(conclusion),
            derivation=print_derivation(embedded),
        )

    # =========================================
    # CORPUS
    # =========================================

    @staticmethod
    def write_corpus(out_dir: PathLike) -> List[Path]:
        """Write the theory file and the builder-made sample derivations into out_dir"""
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        theory = lambda_abe_theory()
        written = []
        for filename, text in ((THEORY_FILE, theory_source(theory)), (SAMPLES_FILE, samples_source(theory))):
            target = out_dir / filename
            target.write_text(text, encoding="utf-8")
            written.append(target)
        logger.info(f"Wrote corpus to {out_dir}")
        return written


# Global service instance
reasoning_service = ReasoningService()

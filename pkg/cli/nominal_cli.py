#!/usr/bin/env python3
# =========================================
# COMMAND LINE INTERFACE
# Nominal Equational Logic - reasoning kernel
# =========================================

import logging
import os
import sys

import click
from rich.console import Console
from rich.markup import escape
from rich.table import Table

# Add the project root to Python path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config.settings import configure_logging, print_config, settings
from nominal.core.errors import CheckError, FrontendError, NominalError
from nominal.models.result_models import ResultResponse, Verdict
from nominal.utils.reasoning_service import error_record, reasoning_service

logger = logging.getLogger(__name__)

# Exit codes
EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2

# Initialize rich console
console = Console()

FORMAT_OPTION = click.option(
    "--format",
    "fmt",
    type=click.Choice(["text", "json"]),
    default=lambda: settings.OUTPUT_FORMAT,
    show_default="text",
    help="Output format",
)


def print_success(message):
    """Print success message"""
    console.print(f"✅ {escape(str(message))}", style="green")


def print_error(message):
    """Print error message"""
    console.print(f"❌ {escape(str(message))}", style="red")


def print_info(message):
    """Print info message"""
    console.print(f"ℹ️  {escape(str(message))}", style="blue")


def emit_json(success: bool, message: str, record=None, count=None):
    response = ResultResponse(
        success=success,
        message=message,
        data=record.model_dump(mode="json") if record is not None else None,
        count=count,
    )
    click.echo(response.model_dump_json(indent=2))


def fail(e: NominalError, fmt: str, where: str = None):
    """Report a usage, parse or reference error and exit with code 2"""
    if fmt == "json":
        emit_json(False, str(e), error_record(e))
    else:
        prefix = f"{where}:" if where and isinstance(e, FrontendError) and e.line is not None else ""
        print_error(f"{prefix}{e}")
    sys.exit(EXIT_USAGE)


@click.group()
@click.version_option(version=settings.APP_VERSION)
@click.option("--verbose", is_flag=True, help="Debug logging")
def cli(verbose):
    """
    Nominal Equational Logic - Command Line Interface

    Check, compile, decide and search NEL / NEoL derivations.
    """
    configure_logging(logging.DEBUG if verbose else None)


# =========================================
# KERNEL CHECKING
# =========================================

@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--theory", help="Only derivations over this theory")
@FORMAT_OPTION
def check(file, theory, fmt):
    """Kernel-check every derivation in FILE"""
    try:
        record = reasoning_service.check_file(file, theory)
    except NominalError as e:
        fail(e, fmt, file)

    ok = record.failed == 0
    if fmt == "json":
        emit_json(ok, f"{record.passed} passed, {record.failed} failed", record, len(record.results))
        sys.exit(EXIT_OK if ok else EXIT_FALSE)

    if not record.results:
        print_info(f"No derivations in {file}")
        sys.exit(EXIT_OK)

    table = Table(title=f"Derivations in {file}")
    table.add_column("Derivation", style="cyan")
    table.add_column("Theory")
    table.add_column("Nodes", justify="right")
    table.add_column("Verdict")
    for r in record.results:
        verdict = "[green]pass[/green]" if r.verdict == Verdict.PASS else "[red]fail[/red]"
        table.add_row(escape(r.name), escape(r.theory), str(r.nodes), verdict)
    console.print(table)

    for r in record.results:
        if r.error is not None:
            print_error(f"{r.name}: {r.error.message}")
            if r.error.path:
                print_info("at premise " + ".".join(str(i) for i in r.error.path))

    if ok:
        print_success(f"All {record.passed} derivation(s) check")
        sys.exit(EXIT_OK)
    print_error(f"{record.failed} of {len(record.results)} derivation(s) rejected")
    sys.exit(EXIT_FALSE)


# =========================================
# THEORY COMPILATION
# =========================================

@cli.command(name="compile")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the NEoL theory here")
@click.option("--theory", help="Theory to compile when FILE declares several")
@FORMAT_OPTION
def compile_command(file, output, theory, fmt):
    """Compile the NEL theory in FILE to an NEoL theory"""
    try:
        text, record = reasoning_service.compile_file(file, theory)
    except NominalError as e:
        fail(e, fmt, file)

    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        record.target = output

    if fmt == "json":
        emit_json(True, f"compiled {record.theory}", record)
    elif output:
        print_success(f"Compiled {record.theory}: {record.axioms_in} axiom(s) -> {record.axioms_out}, written to {output}")
    else:
        click.echo(text, nl=False)
    sys.exit(EXIT_OK)


# =========================================
# EMPTY THEORY
# =========================================

@cli.command()
@click.argument("judgement")
@click.option("--sig", "sig_file", required=True, type=click.Path(exists=True, dir_okay=False), help="File declaring the signature")
@click.option("--certify", is_flag=True, help="Print a kernel-checked derivation when true")
@FORMAT_OPTION
def decide(judgement, sig_file, certify, fmt):
    """Decide JUDGEMENT in the empty theory (prints true or false)"""
    try:
        record = reasoning_service.decide(judgement, sig_file, certify)
    except NominalError as e:
        fail(e, fmt, "<judgement>")

    holds = record.verdict == Verdict.TRUE
    if fmt == "json":
        emit_json(True, record.verdict, record)
    else:
        click.echo(record.verdict)
        if record.certificate:
            click.echo(record.certificate)
    sys.exit(EXIT_OK if holds else EXIT_FALSE)


@cli.command()
@click.argument("judgement")
@click.option("--sig", "sig_file", required=True, type=click.Path(exists=True, dir_okay=False), help="File declaring the signature")
@FORMAT_OPTION
def fresh(judgement, sig_file, fmt):
    """Decide a freshness judgement in the empty theory"""
    try:
        record = reasoning_service.fresh(judgement, sig_file)
    except NominalError as e:
        fail(e, fmt, "<judgement>")

    if fmt == "json":
        emit_json(True, record.verdict, record)
    else:
        click.echo(record.verdict)
    sys.exit(EXIT_OK if record.verdict == Verdict.TRUE else EXIT_FALSE)


# =========================================
# SEARCH
# =========================================

@cli.command()
@click.argument("judgement")
@click.option("--theory", "theory_file", required=True, type=click.Path(exists=True, dir_okay=False), help="File declaring the theory")
@click.option("--name", "theory_name", help="Theory to search in when the file declares several")
@click.option("--depth", type=int, default=lambda: settings.SEARCH_MAX_DEPTH, show_default="settings", help="Maximum depth")
@click.option("--atoms", type=int, default=lambda: settings.SEARCH_ATOMS, show_default="settings", help="Extra atoms")
@click.option("--perm-len", type=int, default=lambda: settings.SEARCH_PERM_LEN, show_default="settings", help="Transpositions per candidate permutation")
@FORMAT_OPTION
def search(judgement, theory_file, theory_name, depth, atoms, perm_len, fmt):
    """Bounded proof search for JUDGEMENT"""
    if depth < 1 or atoms < 0 or perm_len < 0:
        print_error("--depth must be positive, --atoms and --perm-len non-negative")
        sys.exit(EXIT_USAGE)
    try:
        record = reasoning_service.search(judgement, theory_file, theory_name, depth, atoms, perm_len)
    except NominalError as e:
        fail(e, fmt, "<judgement>")

    found = record.verdict == Verdict.FOUND
    if fmt == "json":
        emit_json(True, record.verdict, record)
    elif found:
        click.echo(record.derivation)
    else:
        click.echo("not found")
    sys.exit(EXIT_OK if found else EXIT_FALSE)


# =========================================
# TRANSLATION
# =========================================

@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--derivation", "name", required=True, help="Name of an NEL derivation in FILE")
@FORMAT_OPTION
def translate(file, name, fmt):
    """Translate an NEL derivation into NEoL derivations over the compiled theory"""
    try:
        record = reasoning_service.translate(file, name)
    except NominalError as e:
        fail(e, fmt, file)

    if fmt == "json":
        emit_json(True, f"translated {name}", record)
    else:
        click.echo(f"// equation\n{record.equation}\n\n// freshness\n{record.freshness}")
    sys.exit(EXIT_OK)


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--derivation", "name", required=True, help="Name of an NEoL derivation in FILE")
@FORMAT_OPTION
def embed(file, name, fmt):
    """Replay an NEoL derivation as an NEL derivation over the same axioms"""
    try:
        record = reasoning_service.embed(file, name)
    except CheckError as e:
        if fmt == "json":
            emit_json(False, str(e), error_record(e))
        else:
            print_error(f"{name}: {e}")
        sys.exit(EXIT_FALSE)
    except NominalError as e:
        fail(e, fmt, file)

    if fmt == "json":
        emit_json(True, f"embedded {name}", record)
    else:
        click.echo(record.derivation)
    sys.exit(EXIT_OK)


# =========================================
# CORPUS AND CONFIGURATION
# =========================================

@cli.command()
@click.option("-o", "--output", "out_dir", required=True, type=click.Path(file_okay=False), help="Directory to write into")
def corpus(out_dir):
    """Regenerate the builder-made corpus files"""
    try:
        written = reasoning_service.write_corpus(out_dir)
    except (NominalError, OSError) as e:
        print_error(f"Error writing corpus: {e}")
        sys.exit(EXIT_USAGE)
    for path in written:
        print_success(f"Wrote {path}")


@cli.command()
def config():
    """Show the active configuration"""
    print_config()


if __name__ == "__main__":
    cli()

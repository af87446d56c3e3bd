# =========================================
# PRETTY PRINTER
# Nominal Equational Logic - reasoning kernel
# =========================================
"""
Canonical text for every kernel value. The output is what the parser reads
back: atoms, atom sets and tuples are listed in the global atom order and
permutations as disjoint cycles, so printing is diff-stable.

    (x : tm, {a} # y : tm) |- {b} # lam[a] x ~ y : tm
"""

from typing import Iterable, List

from nominal.core.environments import FreshnessEnv, Judgement, Theory
from nominal.core.perm_core import Perm, sorted_atoms
from nominal.core.signature import Signature
from nominal.core.terms import Constructed, Suspension, Term

INDENT = "  "


def print_atoms(atoms: Iterable) -> str:
    """{a b c}"""
    return "{" + " ".join(str(a) for a in sorted_atoms(atoms)) + "}"


def print_atom_list(atoms: Iterable) -> str:
    return ", ".join(str(a) for a in sorted_atoms(atoms))


def print_tuple(atoms: Iterable) -> str:
    """[a, b] keeping the given order"""
    return "[" + ", ".join(str(a) for a in atoms) + "]"


def print_perm(p: Perm) -> str:
    return str(p)


def _simple(t: Term) -> bool:
    if isinstance(t, Suspension):
        return t.perm.is_identity()
    return not t.args


def print_term(t: Term) -> str:
    match t:
        case Suspension(perm, var):
            if perm.is_identity():
                return str(var)
            return f"{perm} {var}"
        case Constructed(op, args):
            head = str(op)
            if not args:
                return head
            if len(args) == 1 and _simple(args[0]):
                return f"{head} {print_term(args[0])}"
            return head + "(" + ", ".join(print_term(a) for a in args) + ")"
    return repr(t)


def print_env(fe: FreshnessEnv) -> str:
    parts = []
    for var, fresh, sort in fe.entries:
        if fresh:
            parts.append(f"{print_atoms(fresh)} # {var} : {sort}")
        else:
            parts.append(f"{var} : {sort}")
    return "(" + ", ".join(parts) + ")"


def print_judgement(j: Judgement) -> str:
    text = print_env(j.fe) + " |- "
    if j.fresh:
        text += print_atoms(j.fresh) + " # "
    text += print_term(j.lhs)
    if j.rhs != j.lhs:
        text += " ~ " + print_term(j.rhs)
    return text + f" : {j.sort}"


def print_signature(sig: Signature) -> str:
    lines = [f"sort {s};" for s in sig.ordered_sorts()]
    lines += [f"op {family};" for family in sig.ordered_families()]
    return "\n".join(lines)


def print_theory(t: Theory) -> str:
    if not t.axioms:
        return f"theory {t.name} : {t.flavour.value} {{}}"
    lines = [f"theory {t.name} : {t.flavour.value} {{"]
    for axiom in t.axioms:
        lines.append(f"{INDENT}axiom {axiom.name} : {print_judgement(axiom.judgement)};")
    lines.append("}")
    return "\n".join(lines)


# =========================================
# DERIVATIONS
# =========================================

def print_rule(rule) -> str:
    """Rule keyword with its instantiation data; data implied by the conclusion is left out"""
    from nominal.kernel.proof_kernel import AtmElim, AtmIntro, AxiomRef, FreshEquivar, Subst

    match rule:
        case AxiomRef(name):
            return f"axiom{{{name}}}"
        case AtmIntro(atoms) | AtmElim(atoms):
            return f"{rule.label}{{{print_atom_list(atoms)}}}"
        case FreshEquivar(perm):
            return f"#-equivar{{{perm}}}"
        case Subst(sigma, sigma_prime, fresh_tuples):
            items = []
            for var, image in sigma.mapping:
                other = sigma_prime[var]
                if other == image:
                    items.append(f"{var} := {print_term(image)}")
                else:
                    items.append(f"{var} := {print_term(image)} ~ {print_term(other)}")
            for var, order, chosen in fresh_tuples:
                items.append(f"fresh {var} : {print_tuple(order)} -> {print_tuple(chosen)}")
            return "subst{" + "; ".join(items) + "}"
    return rule.label


def _derivation_lines(d, depth: int, out: List[str], suffix: str) -> None:
    pad = INDENT * depth
    head = f"{pad}{print_rule(d.rule)} [{print_judgement(d.conclusion)}]"
    if not d.premises:
        out.append(head + suffix)
        return
    out.append(head + " (")
    last = len(d.premises) - 1
    for index, premise in enumerate(d.premises):
        _derivation_lines(premise, depth + 1, out, "" if index == last else ",")
    out.append(f"{pad}){suffix}")


def print_derivation(d, depth: int = 0) -> str:
    """Every node on its own line with its conclusion"""
    out: List[str] = []
    _derivation_lines(d, depth, out, "")
    return "\n".join(out)


def print_named_derivation(name: str, theory_name: str, d) -> str:
    return f"derivation {name} in {theory_name} =\n{print_derivation(d, 1)};"


# =========================================
# SOURCE FILES
# =========================================

def _spaced(blocks: List[str], text: str) -> str:
    return "\n" + text if blocks else text


def print_source(source) -> str:
    """The declarations of one source file, in order (included files are not inlined)"""
    from nominal.frontend.parser import (
        DerivationDecl,
        IncludeDecl,
        JudgementDecl,
        OpDecl,
        SortDecl,
        TheoryDecl,
    )

    blocks: List[str] = []
    for decl in source.declarations:
        match decl:
            case IncludeDecl(path):
                blocks.append(f'include "{path}";')
            case SortDecl(sort):
                blocks.append(f"sort {sort};")
            case OpDecl(family):
                blocks.append(f"op {family};")
            case TheoryDecl(theory):
                blocks.append(_spaced(blocks, print_theory(theory)))
            case JudgementDecl(name, judgement):
                blocks.append(f"judgement {name} : {print_judgement(judgement)};")
            case DerivationDecl(name, theory_name, derivation):
                blocks.append(_spaced(blocks, print_named_derivation(name, theory_name, derivation)))
    return "\n".join(blocks) + "\n"

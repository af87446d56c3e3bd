# =========================================
# SOURCE PARSER
# Nominal Equational Logic - reasoning kernel
# =========================================
"""
Grammar and loader for ``.nel`` / ``.neol`` source files.

Parsing runs in two stages. Lark turns the text into raw nodes that only
record names and positions; the loader then walks the declarations in order,
growing the signature, and resolves every name against it. An identifier
that names a declared operation family is an operation, any other is a
variable; atoms are identifiers in atom positions and are never declared.

    sort tm;
    op app : (tm, tm) -> tm;
    op lam[1] : (tm) -> tm;
    op var[1] : tm;
    theory demo : nel {
      axiom eta : ({a} # x : tm) |- lam[a](app(x, var[a])) ~ x : tm;
    }
    derivation again in demo = symm (axiom{eta});
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from lark import Lark, Token, Transformer, exceptions, v_args

from nominal.core.environments import Axiom, Flavour, FreshnessEnv, Judgement, Theory, underlying_sorting_env
from nominal.core.errors import CheckError, FrontendError, NominalError
from nominal.core.perm_core import IDENTITY, Atom, Perm, from_cycles
from nominal.core.signature import OpFamily, Signature, Sort
from nominal.core.terms import Constructed, Substitution, Suspension, Term, Var
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
    infer_conclusion,
)

logger = logging.getLogger(__name__)

GRAMMAR = r"""
    start: _item*

    _item: include_decl
         | sort_decl
         | op_decl
         | theory_decl
         | judgement_decl
         | derivation_decl

    include_decl: "include" ESCAPED_STRING ";"
    sort_decl: "sort" NAME ";"
    op_decl: "op" NAME arity ":" op_type ";"
    arity: ("[" INT "]")?
    op_type: NAME                            -> const_type
           | "(" name_list ")" "->" NAME     -> fun_type
    theory_decl: "theory" NAME ":" flavour "{" axiom_decl* "}"
    flavour: "nel"                           -> nel
           | "neol"                          -> neol
    axiom_decl: "axiom" NAME ":" judgement ";"
    judgement_decl: "judgement" NAME ":" judgement ";"
    derivation_decl: "derivation" NAME "in" NAME "=" node ";"

    judgement: env "|-" fresh term rhs ":" NAME
    fresh: (atom_set "#")?
    rhs: ("~" term)?
    env: "(" (binding ("," binding)*)? ")"
    binding: fresh NAME ":" NAME
    atom_set: "{" NAME* "}"
            | NAME

    term: cycle* NAME params                            -> term_plain
        | cycle* NAME params "(" term ("," term)* ")"   -> term_list
        | cycle* NAME params NAME params                -> term_juxt
    params: ("[" name_list "]")?
    cycle: "(" NAME NAME+ ")"
    name_list: (NAME ("," NAME)*)?

    perm: "id"                               -> perm_id
        | cycle+                             -> perm_cycles

    node: step conclusion premises
    conclusion: ("[" judgement "]")?
    premises: ("(" node ("," node)* ")")?
    step: "axiom" "{" NAME "}"               -> r_axiom
        | "refl"                             -> r_refl
        | "symm"                             -> r_symm
        | "trans"                            -> r_trans
        | "weak"                             -> r_weak
        | "susp"                             -> r_susp
        | "subst" "{" subst_items "}"        -> r_subst
        | "atm-intro" "{" name_list "}"      -> r_atm_intro
        | "atm-elim" "{" name_list "}"       -> r_atm_elim
        | "#-equivar" "{" perm "}"           -> r_equivar
    subst_items: (subst_item (";" subst_item)*)?
    subst_item: NAME ":=" term rhs                                     -> subst_map
              | "fresh" NAME ":" "[" name_list "]" "->" "[" name_list "]" -> subst_fresh

    judgement_only: judgement
    term_only: term
    perm_only: perm
    node_only: node

    NAME: /[A-Za-z_][A-Za-z0-9_]*/
    COMMENT: /\/\/[^\n]*/

    %import common.INT
    %import common.ESCAPED_STRING
    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

_parser = Lark(
    GRAMMAR,
    start=["start", "judgement_only", "term_only", "perm_only", "node_only"],
    parser="earley",
    propagate_positions=True,
)


# =========================================
# DECLARATIONS AND SOURCE FILES
# =========================================

@dataclass(frozen=True)
class IncludeDecl:
    path: str


@dataclass(frozen=True)
class SortDecl:
    sort: Sort


@dataclass(frozen=True)
class OpDecl:
    family: OpFamily


@dataclass(frozen=True)
class TheoryDecl:
    theory: Theory


@dataclass(frozen=True)
class JudgementDecl:
    name: str
    judgement: Judgement


@dataclass(frozen=True)
class DerivationDecl:
    name: str
    theory: str
    derivation: Derivation


Declaration = Union[IncludeDecl, SortDecl, OpDecl, TheoryDecl, JudgementDecl, DerivationDecl]


@dataclass
class SourceFile:
    """One parsed file; the tables also hold what its includes declared"""

    path: Optional[Path] = None
    declarations: List[Declaration] = field(default_factory=list)
    signature: Signature = field(default_factory=Signature)
    theories: Dict[str, Theory] = field(default_factory=dict)
    judgements: Dict[str, Judgement] = field(default_factory=dict)
    derivations: Dict[str, DerivationDecl] = field(default_factory=dict)

    def theory(self, name: Optional[str] = None) -> Theory:
        """The named theory, or the only one when name is None"""
        if name is not None:
            if name not in self.theories:
                raise FrontendError(f"no theory named {name}")
            return self.theories[name]
        if len(self.theories) != 1:
            raise FrontendError(f"expected exactly one theory, found {len(self.theories)}; name one")
        return next(iter(self.theories.values()))


# =========================================
# RAW TREE (names and positions only)
# =========================================

@dataclass(frozen=True)
class _Raw:
    line: Optional[int]
    column: Optional[int]


@dataclass(frozen=True)
class _RawTerm(_Raw):
    cycles: Tuple[Tuple[str, ...], ...]
    name: str
    params: Optional[Tuple[str, ...]]
    args: Optional[Tuple["_RawTerm", ...]]


@dataclass(frozen=True)
class _RawJudgement(_Raw):
    env: Tuple[Tuple[Tuple[str, ...], str, str], ...]
    fresh: Tuple[str, ...]
    lhs: _RawTerm
    rhs: Optional[_RawTerm]
    sort: str


@dataclass(frozen=True)
class _RawStep(_Raw):
    kind: str
    data: object = None


@dataclass(frozen=True)
class _RawNode(_Raw):
    step: _RawStep
    conclusion: Optional[_RawJudgement]
    premises: Tuple["_RawNode", ...]


@dataclass(frozen=True)
class _RawDecl(_Raw):
    kind: str
    name: str
    body: object = None


def _pos(meta) -> Tuple[Optional[int], Optional[int]]:
    return getattr(meta, "line", None), getattr(meta, "column", None)


def _term(meta, children, args) -> _RawTerm:
    head = next(i for i, c in enumerate(children) if isinstance(c, Token))
    return _RawTerm(*_pos(meta), tuple(children[:head]), str(children[head]), children[head + 1], args)


@v_args(meta=True)
class _SourceTransformer(Transformer):
    """Parse tree to raw nodes"""

    def start(self, meta, children):
        return list(children)

    def include_decl(self, meta, children):
        return _RawDecl(*_pos(meta), "include", str(children[0])[1:-1])

    def sort_decl(self, meta, children):
        return _RawDecl(*_pos(meta), "sort", str(children[0]))

    def op_decl(self, meta, children):
        name, arity, op_type = children
        return _RawDecl(*_pos(meta), "op", str(name), (arity, op_type))

    def arity(self, meta, children):
        return int(children[0]) if children else 0

    def const_type(self, meta, children):
        return (), str(children[0])

    def fun_type(self, meta, children):
        return tuple(children[0]), str(children[1])

    def nel(self, meta, children):
        return Flavour.NEL

    def neol(self, meta, children):
        return Flavour.NEOL

    def theory_decl(self, meta, children):
        name, flavour, *axioms = children
        return _RawDecl(*_pos(meta), "theory", str(name), (flavour, tuple(axioms)))

    def axiom_decl(self, meta, children):
        return _RawDecl(*_pos(meta), "axiom", str(children[0]), children[1])

    def judgement_decl(self, meta, children):
        return _RawDecl(*_pos(meta), "judgement", str(children[0]), children[1])

    def derivation_decl(self, meta, children):
        name, theory, node = children
        return _RawDecl(*_pos(meta), "derivation", str(name), (str(theory), node))

    def judgement(self, meta, children):
        env, fresh, lhs, rhs, sort = children
        return _RawJudgement(*_pos(meta), tuple(env), fresh, lhs, rhs, str(sort))

    def fresh(self, meta, children):
        return children[0] if children else ()

    def rhs(self, meta, children):
        return children[0] if children else None

    def env(self, meta, children):
        return list(children)

    def binding(self, meta, children):
        fresh, var, sort = children
        return fresh, str(var), str(sort)

    def atom_set(self, meta, children):
        return tuple(str(c) for c in children)

    def term_plain(self, meta, children):
        return _term(meta, children, None)

    def term_list(self, meta, children):
        head = next(i for i, c in enumerate(children) if isinstance(c, Token))
        return _term(meta, children, tuple(children[head + 2:]))

    def term_juxt(self, meta, children):
        name, params = children[-2:]
        line, column = getattr(name, "line", None), getattr(name, "column", None)
        arg = _RawTerm(line, column, (), str(name), params, None)
        return _term(meta, children[:-2], (arg,))

    def params(self, meta, children):
        return tuple(children[0]) if children else None

    def cycle(self, meta, children):
        return tuple(str(c) for c in children)

    def name_list(self, meta, children):
        return [str(c) for c in children]

    def perm_id(self, meta, children):
        return ()

    def perm_cycles(self, meta, children):
        return tuple(children)

    def node(self, meta, children):
        step, conclusion, premises = children
        return _RawNode(*_pos(meta), step, conclusion, premises)

    def conclusion(self, meta, children):
        return children[0] if children else None

    def premises(self, meta, children):
        return tuple(children)

    def r_axiom(self, meta, children):
        return _RawStep(*_pos(meta), "axiom", str(children[0]))

    def r_refl(self, meta, children):
        return _RawStep(*_pos(meta), "refl")

    def r_symm(self, meta, children):
        return _RawStep(*_pos(meta), "symm")

    def r_trans(self, meta, children):
        return _RawStep(*_pos(meta), "trans")

    def r_weak(self, meta, children):
        return _RawStep(*_pos(meta), "weak")

    def r_susp(self, meta, children):
        return _RawStep(*_pos(meta), "susp")

    def r_subst(self, meta, children):
        return _RawStep(*_pos(meta), "subst", children[0])

    def r_atm_intro(self, meta, children):
        return _RawStep(*_pos(meta), "atm-intro", tuple(children[0]))

    def r_atm_elim(self, meta, children):
        return _RawStep(*_pos(meta), "atm-elim", tuple(children[0]))

    def r_equivar(self, meta, children):
        return _RawStep(*_pos(meta), "#-equivar", children[0])

    def subst_items(self, meta, children):
        return tuple(children)

    def subst_map(self, meta, children):
        var, image, other = children
        return "map", str(var), image, other

    def subst_fresh(self, meta, children):
        var, order, chosen = children
        return "fresh", str(var), tuple(order), tuple(chosen)

    def judgement_only(self, meta, children):
        return children[0]

    term_only = judgement_only
    perm_only = judgement_only
    node_only = judgement_only


def _parse(text: str, start: str):
    try:
        tree = _parser.parse(text, start=start)
    except exceptions.UnexpectedInput as e:
        line = e.line if getattr(e, "line", -1) not in (None, -1) else None
        column = e.column if getattr(e, "column", -1) not in (None, -1) else None
        summary = str(e).strip().splitlines()[0] if str(e).strip() else "unexpected input"
        raise FrontendError(f"syntax error: {summary}", line, column) from None
    except exceptions.LarkError as e:
        raise FrontendError(f"syntax error: {e}") from None
    return _SourceTransformer().transform(tree)


# =========================================
# RESOLUTION
# =========================================

def _located(raw: _Raw, e: Exception) -> FrontendError:
    if isinstance(e, FrontendError):
        return e
    message = e.describe() if isinstance(e, CheckError) else str(e)
    return FrontendError(message, raw.line, raw.column)


def _perm(cycles: Sequence[Sequence[str]]) -> Perm:
    if not cycles:
        return IDENTITY
    return from_cycles([[Atom(a) for a in cycle] for cycle in cycles])


def _atoms(names: Sequence[str]) -> frozenset:
    return frozenset(Atom(n) for n in names)


class _Resolver:
    """Name resolution against a fixed signature"""

    def __init__(self, sig: Signature):
        self.sig = sig

    def term(self, raw: _RawTerm) -> Term:
        family = self.sig.lookup(raw.name)
        if family is None:
            if raw.params is not None or raw.args is not None:
                raise FrontendError(f"{raw.name} is not an operation of the signature", raw.line, raw.column)
            try:
                return Suspension(_perm(raw.cycles), Var(raw.name))
            except NominalError as e:
                raise _located(raw, e) from e
        if raw.cycles:
            raise FrontendError(f"permutation prefix on operation {raw.name}", raw.line, raw.column)
        params = tuple(Atom(a) for a in (raw.params or ()))
        args = tuple(self.term(a) for a in (raw.args or ()))
        if len(args) != family.arity:
            raise FrontendError(
                f"{family.name} expects {family.arity} argument(s), got {len(args)}", raw.line, raw.column
            )
        try:
            return Constructed(family(*params), args)
        except NominalError as e:
            raise _located(raw, e) from e

    def env(self, raw: _RawJudgement) -> FreshnessEnv:
        try:
            return FreshnessEnv(
                tuple((Var(var), _atoms(fresh), self.sig.sort(sort)) for fresh, var, sort in raw.env)
            )
        except NominalError as e:
            raise _located(raw, e) from e

    def judgement(self, raw: _RawJudgement, flavour: Flavour = Flavour.NEL) -> Judgement:
        fe = self.env(raw)
        lhs = self.term(raw.lhs)
        rhs = None if raw.rhs is None else self.term(raw.rhs)
        try:
            return Judgement.checked(self.sig, fe, _atoms(raw.fresh), lhs, rhs, self.sig.sort(raw.sort), flavour)
        except NominalError as e:
            raise _located(raw, e) from e

    # -----------------------------------------

    def derivation(self, raw: _RawNode, theory: Theory) -> Derivation:
        premises = tuple(self.derivation(p, theory) for p in raw.premises)
        conclusion = None
        if raw.conclusion is not None:
            conclusion = self.judgement(raw.conclusion, theory.flavour)
        try:
            rule = self._rule(raw, theory, premises, conclusion)
            if conclusion is None:
                conclusion = infer_conclusion(theory, rule, premises)
        except NominalError as e:
            raise _located(raw, e) from e
        return Derivation(rule, premises, conclusion)

    def _needs(self, raw: _RawNode, conclusion: Optional[Judgement]) -> Judgement:
        if conclusion is None:
            raise FrontendError(f"{raw.step.kind} needs an explicit conclusion", raw.line, raw.column)
        return conclusion

    def _rule(self, raw: _RawNode, theory: Theory, premises, conclusion: Optional[Judgement]):
        step = raw.step
        match step.kind:
            case "axiom":
                if theory.axiom(step.data) is None:
                    raise FrontendError(f"theory {theory.name} has no axiom {step.data}", step.line, step.column)
                return AxiomRef(step.data)
            case "refl":
                self._needs(raw, conclusion)
                return Refl()
            case "symm":
                return Symm()
            case "trans":
                return Trans()
            case "weak":
                return Weak(self._needs(raw, conclusion).fe)
            case "atm-intro":
                return AtmIntro(_atoms(step.data))
            case "atm-elim":
                self._needs(raw, conclusion)
                return AtmElim(_atoms(step.data))
            case "#-equivar":
                self._needs(raw, conclusion)
                return FreshEquivar(_perm(step.data))
            case "susp":
                c = self._needs(raw, conclusion)
                if not (
                    isinstance(c.lhs, Suspension) and isinstance(c.rhs, Suspension) and c.lhs.var == c.rhs.var
                ):
                    raise FrontendError("susp relates two suspensions of one variable", raw.line, raw.column)
                return Susp(c.lhs.perm, c.rhs.perm, c.lhs.var, c.sort)
            case "subst":
                return self._subst(raw, premises, self._needs(raw, conclusion))
        raise FrontendError(f"unknown rule {step.kind}", step.line, step.column)

    def _subst(self, raw: _RawNode, premises, conclusion: Judgement) -> Subst:
        if not premises:
            raise FrontendError("subst needs a main premise", raw.line, raw.column)
        source = underlying_sorting_env(premises[-1].conclusion.fe)
        target = underlying_sorting_env(conclusion.fe)
        images, others, fresh_tuples = [], [], []
        for item in raw.step.data:
            if item[0] == "map":
                _, var, image, other = item
                image_term = self.term(image)
                images.append((Var(var), image_term))
                others.append((Var(var), image_term if other is None else self.term(other)))
            else:
                _, var, order, chosen = item
                fresh_tuples.append(
                    (Var(var), tuple(Atom(a) for a in order), tuple(Atom(a) for a in chosen))
                )
        sigma = Substitution(tuple(images), source, target)
        sigma_prime = Substitution(tuple(others), source, target)
        return Subst(sigma, sigma_prime, tuple(fresh_tuples))


# =========================================
# LOADER
# =========================================

class _Loader:
    """Declarations in order; included files share the tables"""

    def __init__(self):
        self.sig = Signature()
        self.theories: Dict[str, Theory] = {}
        self.judgements: Dict[str, Judgement] = {}
        self.derivations: Dict[str, DerivationDecl] = {}
        self.loaded: set = set()

    def load(self, items: Sequence[_RawDecl], base: Optional[Path], record: Optional[list]) -> None:
        for raw in items:
            try:
                decl = self._declare(raw, base)
            except NominalError as e:
                raise _located(raw, e) from e
            if record is not None and decl is not None:
                record.append(decl)

    def include(self, path: Path) -> None:
        resolved = path.resolve()
        if resolved in self.loaded:
            return
        self.loaded.add(resolved)
        try:
            text = resolved.read_text(encoding="utf-8")
        except OSError as e:
            raise FrontendError(f"cannot read {path}: {e.strerror}") from e
        except UnicodeDecodeError as e:
            raise FrontendError(f"cannot read {path}: not UTF-8 text ({e.reason} at byte {e.start})") from e
        try:
            items = _parse(text, "start")
            self.load(items, resolved.parent, None)
        except FrontendError as e:
            raise FrontendError(f"{path.name}: {e.message}", e.line, e.column) from e
        logger.debug("included %s", resolved)

    def _declare(self, raw: _RawDecl, base: Optional[Path]) -> Optional[Declaration]:
        match raw.kind:
            case "include":
                self.include((base or Path.cwd()) / raw.name)
                return IncludeDecl(raw.name)
            case "sort":
                if Sort(raw.name) in self.sig.sorts:
                    raise FrontendError(f"duplicate sort {raw.name}", raw.line, raw.column)
                self.sig = self.sig.extend(sorts=[raw.name])
                return SortDecl(Sort(raw.name))
            case "op":
                arity, (arg_sorts, result) = raw.body
                if self.sig.lookup(raw.name) is not None:
                    raise FrontendError(f"duplicate operation family {raw.name}", raw.line, raw.column)
                family = OpFamily(
                    raw.name, arity, tuple(self.sig.sort(s) for s in arg_sorts), self.sig.sort(result)
                )
                self.sig = self.sig.extend(families=[family])
                return OpDecl(family)
            case "theory":
                if raw.name in self.theories:
                    raise FrontendError(f"duplicate theory {raw.name}", raw.line, raw.column)
                flavour, raw_axioms = raw.body
                resolver = _Resolver(self.sig)
                axioms = []
                for axiom in raw_axioms:
                    axioms.append(Axiom(axiom.name, resolver.judgement(axiom.body, flavour)))
                theory = Theory(raw.name, self.sig, tuple(axioms), flavour)
                self.theories[raw.name] = theory
                return TheoryDecl(theory)
            case "judgement":
                if raw.name in self.judgements:
                    raise FrontendError(f"duplicate judgement {raw.name}", raw.line, raw.column)
                judgement = _Resolver(self.sig).judgement(raw.body)
                self.judgements[raw.name] = judgement
                return JudgementDecl(raw.name, judgement)
            case "derivation":
                theory_name, node = raw.body
                if raw.name in self.derivations:
                    raise FrontendError(f"duplicate derivation {raw.name}", raw.line, raw.column)
                theory = self.theories.get(theory_name)
                if theory is None:
                    raise FrontendError(f"unknown theory {theory_name}", raw.line, raw.column)
                derivation = _Resolver(theory.sig).derivation(node, theory)
                decl = DerivationDecl(raw.name, theory_name, derivation)
                self.derivations[raw.name] = decl
                return decl
        raise FrontendError(f"unknown declaration {raw.kind}", raw.line, raw.column)


# =========================================
# ENTRY POINTS
# =========================================

def parse_source(text: str, path: Optional[Union[str, Path]] = None) -> SourceFile:
    """Parse a whole file; includes resolve against path's directory (or the cwd)"""
    path = Path(path) if path is not None else None
    loader = _Loader()
    if path is not None:
        loader.loaded.add(path.resolve())
    declarations: List[Declaration] = []
    items = _parse(text, "start")
    loader.load(items, path.resolve().parent if path is not None else None, declarations)
    return SourceFile(path, declarations, loader.sig, loader.theories, loader.judgements, loader.derivations)


def load_source(path: Union[str, Path]) -> SourceFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise FrontendError(f"cannot read {path}: {e.strerror}") from e
    except UnicodeDecodeError as e:
        raise FrontendError(f"cannot read {path}: not UTF-8 text ({e.reason} at byte {e.start})") from e
    source = parse_source(text, path)
    logger.info(
        "loaded %s: %d theory(ies), %d derivation(s)", path, len(source.theories), len(source.derivations)
    )
    return source


def parse_term(text: str, sig: Signature) -> Term:
    return _Resolver(sig).term(_parse(text, "term_only"))


def parse_judgement(text: str, sig: Signature, flavour: Flavour = Flavour.NEL) -> Judgement:
    return _Resolver(sig).judgement(_parse(text, "judgement_only"), flavour)


def parse_perm(text: str) -> Perm:
    return _perm(_parse(text, "perm_only"))


def parse_derivation(text: str, theory: Theory) -> Derivation:
    return _Resolver(theory.sig).derivation(_parse(text, "node_only"), theory)


parse = parse_source

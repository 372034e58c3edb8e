"""Concrete syntax: lark grammar, tree builder and `.lct` file loader."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Tuple

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from core.errors import KernelError, SignatureError, TermSyntaxError
from core.syntax import (
    DEFAULT_SIGNATURE, FALSUM, And, App, Atom, Abort, Case, Const, Efq, ExCase, ExistsInd,
    Formula, ForallInd, ForallPred, FunApp, Imp, IndApp, IndLam, IndVar, Inj, Lam, Or, Pair,
    Par, PredAbs, PredApp, PredLam, PredVarAtom, ProofTerm, Proj, Signature, Var, Witness,
    children, fresh_name, free_pred_vars, replace_child,
)

logger = logging.getLogger(__name__)

GRAMMAR = r"""
    file:           decl* term
    term_start:     term
    formula_start:  formula

    ?decl:          "hyp" NAME ":" formula ";"                  -> hyp
                  | "goal" formula ";"                          -> goal

    ?term:          app
                  | app "par" par_binder term                   -> par
                  | "fun" NAME [":" formula] "=>" term          -> lam
                  | "fun" "@" NAME "=>" term                    -> ind_lam
                  | "Fun" NAME "=>" term                        -> pred_lam

    par_binder:     NAME                                        -> par_plain
                  | "[" NAME ":" formula ["," formula] "]"      -> par_annotated

    ?app:           atom
                  | app atom                                    -> app
                  | app "@" indterm                             -> ind_app
                  | app PROJ                                    -> proj
                  | app "{" NAME "." formula "}"                -> pred_app
                  | "inj0" [annot] atom                         -> inj0
                  | "inj1" [annot] atom                         -> inj1
                  | "wit" [annot] indterm atom                  -> wit
                  | "efq" [annot] atom                          -> efq

    annot:          "[" formula "]"

    ?atom:          NAME                                        -> var
                  | "(" term ")"
                  | "<" term "," term ">"                       -> pair
                  | "abort" [annot]                             -> abort
                  | "case" term "of" "[" NAME [":" formula] "=>" term "|" NAME [":" formula] "=>" term "]" -> case
                  | "excase" term "of" "[" "(" NAME "," NAME [":" formula] ")" "=>" term "]" -> excase

    ?formula:       implication
                  | "forall" NAME "." formula                   -> forall_ind
                  | "exists" NAME "." formula                   -> exists_ind
                  | "forall2" NAME "." formula                  -> forall_pred
                  | "exists2" NAME "." formula                  -> exists_pred

    ?implication:   disjunction
                  | disjunction "->" implication                -> implies

    ?disjunction:   conjunction
                  | disjunction "|" conjunction                 -> or_

    ?conjunction:   negation
                  | conjunction "&" negation                    -> and_

    ?negation:      formula_atom
                  | "~" negation                                -> not_

    ?formula_atom:  "False"                                     -> falsum
                  | NAME                                        -> prop
                  | CALL indterm ("," indterm)* ")"             -> atom
                  | "(" formula ")"

    ?indterm:       NAME                                        -> ind_name
                  | CALL indterm ("," indterm)* ")"             -> ind_call

    NAME:           /[A-Za-z_][A-Za-z0-9_']*/
    CALL.2:         /[A-Za-z_][A-Za-z0-9_']*\(/
    PROJ:           /\.[01]/
    COMMENT:        /#[^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

_PARSER = Lark(GRAMMAR, parser="lalr", start=["file", "term_start", "formula_start"],
               maybe_placeholders=True)


@dataclass(frozen=True)
class LctFile:
    """A parsed `.lct` file: hypotheses, optional goal, and the proof term."""
    hyps: Tuple[Tuple[str, Formula], ...]
    goal: Optional[Formula]
    term: ProofTerm
    source: Optional[str] = None

    @property
    def hyp_map(self) -> Dict[str, Formula]:
        return dict(self.hyps)


@v_args(inline=True)
class _TreeBuilder(Transformer):
    """Builds syntax nodes, resolving names against a signature."""

    def __init__(self, signature: Signature):
        super().__init__()
        self.signature = signature

    # entry points
    def file(self, *items):
        *decls, term = items
        hyps = []
        goal = None
        for decl in decls:
            if decl[0] == "hyp":
                hyps.append((decl[1], decl[2]))
            elif goal is not None:
                raise TermSyntaxError("more than one goal declaration")
            else:
                goal = decl[1]
        return tuple(hyps), goal, term

    def term_start(self, term):
        return term

    def formula_start(self, formula):
        return formula

    def hyp(self, name, formula):
        return ("hyp", str(name), formula)

    def goal(self, formula):
        return ("goal", formula)

    # proof terms
    def par(self, left, binder, right):
        name, left_ann, right_ann = binder
        return Par(name, left_ann, right_ann, left, right)

    def par_plain(self, name):
        return (str(name), None, None)

    def par_annotated(self, name, left_ann, right_ann):
        if right_ann is None and isinstance(left_ann, Imp):
            right_ann = Imp(left_ann.right, left_ann.left)
        return (str(name), left_ann, right_ann)

    def lam(self, name, ann, body):
        return Lam(str(name), ann, body)

    def ind_lam(self, name, body):
        self._check_bindable(name)
        return IndLam(str(name), body)

    def pred_lam(self, name, body):
        return PredLam(str(name), body)

    def app(self, fun, arg):
        return App(fun, arg)

    def ind_app(self, term, ind):
        return IndApp(term, ind)

    def proj(self, term, token):
        return Proj(term, int(token[1]))

    def pred_app(self, term, name, body):
        self._check_bindable(name)
        return PredApp(term, PredAbs(str(name), body))

    def inj0(self, ann, term):
        return Inj(0, term, ann)

    def inj1(self, ann, term):
        return Inj(1, term, ann)

    def wit(self, ann, ind, term):
        return Witness(ind, term, ann)

    def efq(self, ann, term):
        return Efq(ann, term)

    def annot(self, formula):
        return formula

    def var(self, name):
        return Var(str(name))

    def pair(self, left, right):
        return Pair(left, right)

    def abort(self, ann):
        return Abort(ann)

    def case(self, scrut, x, x_ann, left, y, y_ann, right):
        return Case(scrut, str(x), x_ann, left, str(y), y_ann, right)

    def excase(self, scrut, alpha, x, ann, body):
        self._check_bindable(alpha)
        return ExCase(scrut, str(alpha), str(x), ann, body)

    # formulas
    def forall_ind(self, name, body):
        self._check_bindable(name)
        return ForallInd(str(name), body)

    def exists_ind(self, name, body):
        self._check_bindable(name)
        return ExistsInd(str(name), body)

    def forall_pred(self, name, body):
        return ForallPred(str(name), body)

    def exists_pred(self, name, body):
        # exists2 X. A  ==  forall2 Y. (forall2 X. (A -> Y(c))) -> Y(c)
        result = fresh_name("Y", free_pred_vars(body) | {str(name)})
        c = self.signature.first_constant
        goal = PredVarAtom(result, c)
        return ForallPred(result, Imp(ForallPred(str(name), Imp(body, goal)), goal))

    def implies(self, left, right):
        return Imp(left, right)

    def or_(self, left, right):
        return Or(left, right)

    def and_(self, left, right):
        return And(left, right)

    def not_(self, formula):
        return Imp(formula, FALSUM)

    def falsum(self):
        return FALSUM

    def prop(self, name):
        if self.signature.predicate_arity(str(name)) == 0:
            return Atom(str(name), ())
        raise TermSyntaxError(f"'{name}' is not a declared proposition", name.line, name.column)

    def atom(self, call, *args):
        name = str(call)[:-1]
        arity = self.signature.predicate_arity(name)
        if arity is None:
            if len(args) != 1:
                raise TermSyntaxError(f"predicate variable '{name}' takes exactly one argument",
                                      call.line, call.column)
            return PredVarAtom(name, args[0])
        if arity != len(args):
            raise TermSyntaxError(f"predicate '{name}' expects {arity} argument(s), got {len(args)}",
                                  call.line, call.column)
        return Atom(name, tuple(args))

    def ind_name(self, name):
        if self.signature.is_constant(str(name)):
            return Const(str(name))
        if self.signature.function_arity(str(name)) is not None:
            raise TermSyntaxError(f"function '{name}' used without arguments", name.line, name.column)
        return IndVar(str(name))

    def ind_call(self, call, *args):
        name = str(call)[:-1]
        arity = self.signature.function_arity(name)
        if arity is None:
            raise TermSyntaxError(f"unknown function '{name}'", call.line, call.column)
        if arity != len(args):
            raise TermSyntaxError(f"function '{name}' expects {arity} argument(s), got {len(args)}",
                                  call.line, call.column)
        return FunApp(name, tuple(args))

    def _check_bindable(self, name):
        if self.signature.is_constant(str(name)):
            raise TermSyntaxError(f"constant '{name}' cannot be bound", name.line, name.column)


def _parse(text: str, start: str, signature: Signature):
    try:
        tree = _PARSER.parse(text, start=start)
    except UnexpectedInput as e:
        line = getattr(e, "line", None)
        column = getattr(e, "column", None)
        if line is not None and line < 0:
            line, column = None, None
        raise TermSyntaxError(f"unexpected input: {str(e).splitlines()[0]}", line, column) from e
    try:
        return _TreeBuilder(signature).transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, KernelError):
            raise e.orig_exc from None
        raise


def attach_occurrence_annotations(term: ProofTerm, hyps: Optional[Dict[str, Formula]] = None) -> ProofTerm:
    """Copy binder and hypothesis annotations onto unannotated variable occurrences."""

    def walk(node: ProofTerm, env: Dict[str, Optional[Formula]]) -> ProofTerm:
        match node:
            case Var(name, None):
                return Var(name, env.get(name))
            case Var():
                return node
            case Lam(x, ann, body):
                return Lam(x, ann, walk(body, {**env, x: ann}))
            case Case(s, x, xa, l, y, ya, r):
                return Case(walk(s, env), x, xa, walk(l, {**env, x: xa}), y, ya, walk(r, {**env, y: ya}))
            case ExCase(s, alpha, x, ann, body):
                return ExCase(walk(s, env), alpha, x, ann, walk(body, {**env, x: ann}))
            case Par(a, la, ra, l, r):
                return Par(a, la, ra, walk(l, {**env, a: la}), walk(r, {**env, a: ra}))
        for index, child in enumerate(children(node)):
            node = replace_child(node, index, walk(child, env))
        return node

    return walk(term, dict(hyps or {}))


def parse_term(text: str, signature: Signature = DEFAULT_SIGNATURE,
               hyps: Optional[Dict[str, Formula]] = None) -> ProofTerm:
    return attach_occurrence_annotations(_parse(text, "term_start", signature), hyps)


def parse_formula(text: str, signature: Signature = DEFAULT_SIGNATURE) -> Formula:
    return _parse(text, "formula_start", signature)


def parse_file_text(text: str, signature: Signature = DEFAULT_SIGNATURE,
                    source: Optional[str] = None) -> LctFile:
    hyps, goal, term = _parse(text, "file", signature)
    names = [name for name, _ in hyps]
    if len(set(names)) != len(names):
        raise TermSyntaxError("hypothesis declared twice")
    term = attach_occurrence_annotations(term, dict(hyps))
    return LctFile(hyps, goal, term, source)


def parse_file(path, signature: Signature = DEFAULT_SIGNATURE) -> LctFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise TermSyntaxError(f"cannot read {path}: {e}") from e
    lct = parse_file_text(text, signature, str(path))
    logger.debug(f"Parsed {path} ({len(lct.hyps)} hypotheses)")
    return lct


def load_signature(path=None) -> Signature:
    """Signature from a file, or the default one."""
    if path is None:
        return DEFAULT_SIGNATURE
    try:
        return Signature.load(path)
    except OSError as e:
        raise SignatureError(f"cannot read signature {path}: {e}") from e

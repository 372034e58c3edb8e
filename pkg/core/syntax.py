"""Abstract syntax for individual terms, formulas and proof terms.

All nodes are frozen dataclasses. Variables are named; bound names are
renamed only when a substitution would capture, and alpha-equivalence is
decided by comparing canonical forms in which every bound variable gets a
positional name.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

from core.errors import SignatureError
from core.models import DEFAULT_CONSTANTS, DEFAULT_FUNCTIONS, DEFAULT_PREDICATES, RESERVED_NAMES


# ---------------------------------------------------------------------------
# Individual terms

@dataclass(frozen=True)
class IndVar:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class FunApp:
    name: str
    args: Tuple["IndTerm", ...]


IndTerm = Union[IndVar, Const, FunApp]


# ---------------------------------------------------------------------------
# Formulas

@dataclass(frozen=True)
class Atom:
    pred: str
    args: Tuple[IndTerm, ...] = ()


@dataclass(frozen=True)
class PredVarAtom:
    var: str
    arg: IndTerm


@dataclass(frozen=True)
class Falsum:
    pass


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ForallInd:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ExistsInd:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ForallPred:
    var: str
    body: "Formula"


Formula = Union[Atom, PredVarAtom, Falsum, And, Or, Imp, ForallInd, ExistsInd, ForallPred]

FALSUM = Falsum()


@dataclass(frozen=True)
class PredAbs:
    """Predicate abstraction `{var. body}`."""
    var: str
    body: Formula


def neg(formula: Formula) -> Formula:
    return Imp(formula, FALSUM)


def is_atomic(formula: Formula) -> bool:
    return isinstance(formula, (Atom, PredVarAtom, Falsum))


# ---------------------------------------------------------------------------
# Proof terms

@dataclass(frozen=True)
class Var:
    name: str
    ann: Optional[Formula] = None


@dataclass(frozen=True)
class Lam:
    var: str
    ann: Optional[Formula]
    body: "ProofTerm"


@dataclass(frozen=True)
class App:
    fun: "ProofTerm"
    arg: "ProofTerm"


@dataclass(frozen=True)
class Pair:
    left: "ProofTerm"
    right: "ProofTerm"


@dataclass(frozen=True)
class Proj:
    term: "ProofTerm"
    index: int


@dataclass(frozen=True)
class Inj:
    index: int
    term: "ProofTerm"
    ann: Optional[Formula] = None


@dataclass(frozen=True)
class Case:
    scrut: "ProofTerm"
    left_var: str
    left_ann: Optional[Formula]
    left: "ProofTerm"
    right_var: str
    right_ann: Optional[Formula]
    right: "ProofTerm"


@dataclass(frozen=True)
class IndLam:
    var: str
    body: "ProofTerm"


@dataclass(frozen=True)
class IndApp:
    term: "ProofTerm"
    ind: IndTerm


@dataclass(frozen=True)
class Witness:
    ind: IndTerm
    term: "ProofTerm"
    ann: Optional[Formula] = None


@dataclass(frozen=True)
class ExCase:
    scrut: "ProofTerm"
    ind_var: str
    var: str
    ann: Optional[Formula]
    body: "ProofTerm"


@dataclass(frozen=True)
class Efq:
    target: Optional[Formula]
    term: "ProofTerm"


@dataclass(frozen=True)
class Par:
    """`left par[var : left_ann, right_ann] right`, binding `var` in both branches."""
    var: str
    left_ann: Optional[Formula]
    right_ann: Optional[Formula]
    left: "ProofTerm"
    right: "ProofTerm"


@dataclass(frozen=True)
class Abort:
    ann: Optional[Formula] = None


@dataclass(frozen=True)
class PredLam:
    var: str
    body: "ProofTerm"


@dataclass(frozen=True)
class PredApp:
    term: "ProofTerm"
    abs: PredAbs


ProofTerm = Union[Var, Lam, App, Pair, Proj, Inj, Case, IndLam, IndApp, Witness,
                  ExCase, Efq, Par, Abort, PredLam, PredApp]

VALUE_TYPES = (Lam, IndLam, PredLam, Pair, Inj, Witness, Efq, Abort)


# ---------------------------------------------------------------------------
# Stacks

@dataclass(frozen=True)
class Arg:
    term: ProofTerm


@dataclass(frozen=True)
class IndArg:
    ind: IndTerm


@dataclass(frozen=True)
class ProjFrame:
    index: int


@dataclass(frozen=True)
class CaseFrame:
    left_var: str
    left_ann: Optional[Formula]
    left: ProofTerm
    right_var: str
    right_ann: Optional[Formula]
    right: ProofTerm


@dataclass(frozen=True)
class ExCaseFrame:
    ind_var: str
    var: str
    ann: Optional[Formula]
    body: ProofTerm


@dataclass(frozen=True)
class PredFrame:
    abs: PredAbs


Frame = Union[Arg, IndArg, ProjFrame, CaseFrame, ExCaseFrame, PredFrame]
Stack = Tuple[Frame, ...]


def apply_frame(term: ProofTerm, frame: Frame) -> ProofTerm:
    match frame:
        case Arg(arg):
            return App(term, arg)
        case IndArg(ind):
            return IndApp(term, ind)
        case ProjFrame(index):
            return Proj(term, index)
        case CaseFrame(x, x_ann, left, y, y_ann, right):
            return Case(term, x, x_ann, left, y, y_ann, right)
        case ExCaseFrame(alpha, x, ann, body):
            return ExCase(term, alpha, x, ann, body)
        case PredFrame(abs_):
            return PredApp(term, abs_)
    raise TypeError(f"not a stack frame: {frame!r}")


def apply_stack(term: ProofTerm, stack: Iterable[Frame]) -> ProofTerm:
    """Left-nested application of `stack` to `term`."""
    for frame in stack:
        term = apply_frame(term, frame)
    return term


def unwind(term: ProofTerm) -> Tuple[ProofTerm, Stack]:
    """Split `term` into its head and the eliminations applied to it."""
    frames: List[Frame] = []
    while True:
        match term:
            case App(fun, arg):
                frames.append(Arg(arg))
                term = fun
            case IndApp(inner, ind):
                frames.append(IndArg(ind))
                term = inner
            case Proj(inner, index):
                frames.append(ProjFrame(index))
                term = inner
            case Case(inner, x, x_ann, left, y, y_ann, right):
                frames.append(CaseFrame(x, x_ann, left, y, y_ann, right))
                term = inner
            case ExCase(inner, alpha, x, ann, body):
                frames.append(ExCaseFrame(alpha, x, ann, body))
                term = inner
            case PredApp(inner, abs_):
                frames.append(PredFrame(abs_))
                term = inner
            case _:
                break
    frames.reverse()
    return term, tuple(frames)


# ---------------------------------------------------------------------------
# Free variables

def free_ind_vars(node) -> FrozenSet[str]:
    """Free individual variables of an individual term, formula, abstraction or proof term."""
    match node:
        case None | Const() | Falsum() | Abort(None) | ProjFrame():
            return frozenset()
        case IndVar(name):
            return frozenset({name})
        case FunApp(_, args) | Atom(_, args):
            return _union(free_ind_vars(a) for a in args)
        case PredVarAtom(_, arg):
            return free_ind_vars(arg)
        case And(l, r) | Or(l, r) | Imp(l, r):
            return free_ind_vars(l) | free_ind_vars(r)
        case ForallInd(v, body) | ExistsInd(v, body) | PredAbs(v, body):
            return free_ind_vars(body) - {v}
        case ForallPred(_, body):
            return free_ind_vars(body)
        case Var(_, ann) | Abort(ann):
            return free_ind_vars(ann)
        case Lam(_, ann, body):
            return free_ind_vars(ann) | free_ind_vars(body)
        case App(l, r) | Pair(l, r):
            return free_ind_vars(l) | free_ind_vars(r)
        case Proj(t, _) | PredLam(_, t) | Arg(t):
            return free_ind_vars(t)
        case Inj(_, t, ann):
            return free_ind_vars(t) | free_ind_vars(ann)
        case Case(s, _, xa, l, _, ya, r):
            return _union(free_ind_vars(n) for n in (s, xa, l, ya, r))
        case CaseFrame(_, xa, l, _, ya, r):
            return _union(free_ind_vars(n) for n in (xa, l, ya, r))
        case IndLam(v, body):
            return free_ind_vars(body) - {v}
        case IndApp(t, m):
            return free_ind_vars(t) | free_ind_vars(m)
        case IndArg(m):
            return free_ind_vars(m)
        case Witness(m, t, ann):
            return free_ind_vars(m) | free_ind_vars(t) | free_ind_vars(ann)
        case ExCase(s, alpha, _, ann, body):
            return free_ind_vars(s) | ((free_ind_vars(ann) | free_ind_vars(body)) - {alpha})
        case ExCaseFrame(alpha, _, ann, body):
            return (free_ind_vars(ann) | free_ind_vars(body)) - {alpha}
        case Efq(target, t):
            return free_ind_vars(target) | free_ind_vars(t)
        case Par(_, la, ra, l, r):
            return free_ind_vars(la) | free_ind_vars(ra) | free_ind_vars(l) | free_ind_vars(r)
        case PredApp(t, abs_):
            return free_ind_vars(t) | free_ind_vars(abs_)
        case PredFrame(abs_):
            return free_ind_vars(abs_)
    raise TypeError(f"unexpected node: {node!r}")


def free_pred_vars(node) -> FrozenSet[str]:
    """Free predicate variables of a formula, abstraction or proof term."""
    match node:
        case None | IndVar() | Const() | FunApp() | Atom() | Falsum() | ProjFrame() | IndArg():
            return frozenset()
        case PredVarAtom(var, _):
            return frozenset({var})
        case And(l, r) | Or(l, r) | Imp(l, r):
            return free_pred_vars(l) | free_pred_vars(r)
        case ForallInd(_, body) | ExistsInd(_, body) | PredAbs(_, body):
            return free_pred_vars(body)
        case ForallPred(v, body) | PredLam(v, body):
            return free_pred_vars(body) - {v}
        case Var(_, ann) | Abort(ann):
            return free_pred_vars(ann)
        case Lam(_, ann, body):
            return free_pred_vars(ann) | free_pred_vars(body)
        case App(l, r) | Pair(l, r):
            return free_pred_vars(l) | free_pred_vars(r)
        case Proj(t, _) | IndLam(_, t) | IndApp(t, _) | Arg(t):
            return free_pred_vars(t)
        case Inj(_, t, ann) | Witness(_, t, ann):
            return free_pred_vars(t) | free_pred_vars(ann)
        case Case(s, _, xa, l, _, ya, r):
            return _union(free_pred_vars(n) for n in (s, xa, l, ya, r))
        case CaseFrame(_, xa, l, _, ya, r):
            return _union(free_pred_vars(n) for n in (xa, l, ya, r))
        case ExCase(s, _, _, ann, body):
            return free_pred_vars(s) | free_pred_vars(ann) | free_pred_vars(body)
        case ExCaseFrame(_, _, ann, body):
            return free_pred_vars(ann) | free_pred_vars(body)
        case Efq(target, t):
            return free_pred_vars(target) | free_pred_vars(t)
        case Par(_, la, ra, l, r):
            return _union(free_pred_vars(n) for n in (la, ra, l, r))
        case PredApp(t, abs_):
            return free_pred_vars(t) | free_pred_vars(abs_)
        case PredFrame(abs_):
            return free_pred_vars(abs_)
    raise TypeError(f"unexpected node: {node!r}")


def free_proof_vars(node) -> FrozenSet[str]:
    """Free proof variables of a proof term or stack frame."""
    match node:
        case Var(name, _):
            return frozenset({name})
        case Abort() | IndArg() | ProjFrame() | PredFrame():
            return frozenset()
        case Lam(x, _, body):
            return free_proof_vars(body) - {x}
        case App(l, r) | Pair(l, r):
            return free_proof_vars(l) | free_proof_vars(r)
        case (Proj(t, _) | Inj(_, t, _) | IndLam(_, t) | IndApp(t, _) | Witness(_, t, _)
              | Efq(_, t) | PredLam(_, t) | PredApp(t, _) | Arg(t)):
            return free_proof_vars(t)
        case Case(s, x, _, l, y, _, r):
            return free_proof_vars(s) | (free_proof_vars(l) - {x}) | (free_proof_vars(r) - {y})
        case CaseFrame(x, _, l, y, _, r):
            return (free_proof_vars(l) - {x}) | (free_proof_vars(r) - {y})
        case ExCase(s, _, x, _, body):
            return free_proof_vars(s) | (free_proof_vars(body) - {x})
        case ExCaseFrame(_, x, _, body):
            return free_proof_vars(body) - {x}
        case Par(a, _, _, l, r):
            return (free_proof_vars(l) | free_proof_vars(r)) - {a}
    raise TypeError(f"unexpected node: {node!r}")


def free_var_annotations(term: ProofTerm) -> Dict[str, List[Optional[Formula]]]:
    """Annotations carried by the free occurrences of each free proof variable."""
    found: Dict[str, List[Optional[Formula]]] = {}

    def walk(node: ProofTerm, bound: FrozenSet[str]) -> None:
        match node:
            case Var(name, ann):
                if name not in bound:
                    found.setdefault(name, []).append(ann)
            case Lam(x, _, body):
                walk(body, bound | {x})
            case Case(s, x, _, l, y, _, r):
                walk(s, bound)
                walk(l, bound | {x})
                walk(r, bound | {y})
            case ExCase(s, _, x, _, body):
                walk(s, bound)
                walk(body, bound | {x})
            case Par(a, _, _, l, r):
                walk(l, bound | {a})
                walk(r, bound | {a})
            case _:
                for child in children(node):
                    walk(child, bound)

    walk(term, frozenset())
    return found


def contains_abort(term: ProofTerm) -> bool:
    if isinstance(term, Abort):
        return True
    return any(contains_abort(child) for child in children(term))


def _union(sets: Iterable[FrozenSet[str]]) -> FrozenSet[str]:
    result: FrozenSet[str] = frozenset()
    for s in sets:
        result = result | s
    return result


_TRAILING_DIGITS = re.compile(r"\d+$")


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    """`base` if unused, otherwise `base` with the first free numeric suffix."""
    avoid = set(avoid)
    if base not in avoid and not base.startswith("%"):
        return base
    stem = _TRAILING_DIGITS.sub("", base.lstrip("%")) or "v"
    index = 1
    while f"{stem}{index}" in avoid:
        index += 1
    return f"{stem}{index}"


# ---------------------------------------------------------------------------
# Substitution

class _Substitution:
    """Simultaneous capture-avoiding substitution for all three binding sorts."""

    def __init__(self,
                 proof: Optional[Dict[str, ProofTerm]] = None,
                 ind: Optional[Dict[str, IndTerm]] = None,
                 pred: Optional[Dict[str, PredAbs]] = None,
                 renames: Optional[Dict[str, str]] = None):
        self.proof = proof or {}
        self.ind = ind or {}
        self.pred = pred or {}
        self.renames = renames or {}

    def is_empty(self) -> bool:
        return not (self.proof or self.ind or self.pred or self.renames)

    # binders ------------------------------------------------------------

    def _under_proof_binder(self, name: str, scopes) -> Tuple[str, "_Substitution"]:
        if not (self.proof or self.renames):
            return name, self
        fv = _union(free_proof_vars(s) for s in scopes)
        proof = {k: v for k, v in self.proof.items() if k != name and k in fv}
        renames = {k: v for k, v in self.renames.items() if k != name and k in fv}
        avoid = _union(free_proof_vars(v) for v in proof.values()) | frozenset(renames.values())
        if name in avoid:
            new = fresh_name(name, avoid | fv)
            renames[name] = new
            name = new
        return name, _Substitution(proof, self.ind, self.pred, renames)

    def _relevant(self, scopes):
        scopes = [s for s in scopes if s is not None]
        fv_proof = _union(free_proof_vars(s) for s in scopes if not _is_formula_like(s)) \
            if self.proof else frozenset()
        fv_ind = _union(free_ind_vars(s) for s in scopes) if self.ind else frozenset()
        fv_pred = _union(free_pred_vars(s) for s in scopes) if self.pred else frozenset()
        proof = {k: v for k, v in self.proof.items() if k in fv_proof}
        ind = {k: v for k, v in self.ind.items() if k in fv_ind}
        pred = {k: v for k, v in self.pred.items() if k in fv_pred}
        return proof, ind, pred

    def _under_ind_binder(self, name: str, scopes) -> Tuple[str, "_Substitution"]:
        if not (self.proof or self.ind or self.pred):
            return name, self
        proof, ind, pred = self._relevant(scopes)
        ind.pop(name, None)
        avoid = _union(free_ind_vars(v) for v in ind.values()) \
            | _union(free_ind_vars(v) for v in proof.values()) \
            | _union(free_ind_vars(v) for v in pred.values())
        if name in avoid:
            new = fresh_name(name, avoid | _union(free_ind_vars(s) for s in scopes if s is not None))
            ind[name] = IndVar(new)
            name = new
        return name, _Substitution(proof, ind, pred, self.renames)

    def _under_pred_binder(self, name: str, scopes) -> Tuple[str, "_Substitution"]:
        if not (self.proof or self.pred):
            return name, self
        proof, ind, pred = self._relevant(scopes)
        pred.pop(name, None)
        avoid = _union(free_pred_vars(v) for v in pred.values()) \
            | _union(free_pred_vars(v) for v in proof.values())
        if name in avoid:
            new = fresh_name(name, avoid | _union(free_pred_vars(s) for s in scopes if s is not None))
            pred[name] = PredAbs("%x", PredVarAtom(new, IndVar("%x")))
            name = new
        return name, _Substitution(proof, ind, pred, self.renames)

    # individual terms and formulas --------------------------------------

    def indterm(self, m: IndTerm) -> IndTerm:
        match m:
            case IndVar(name):
                return self.ind.get(name, m)
            case FunApp(name, args):
                return FunApp(name, tuple(self.indterm(a) for a in args))
        return m

    def formula(self, f: Optional[Formula]) -> Optional[Formula]:
        if f is None or not (self.ind or self.pred):
            return f
        match f:
            case Atom(pred, args):
                return Atom(pred, tuple(self.indterm(a) for a in args))
            case PredVarAtom(var, arg):
                arg = self.indterm(arg)
                if var in self.pred:
                    abs_ = self.pred[var]
                    return _Substitution(ind={abs_.var: arg}).formula(abs_.body)
                return PredVarAtom(var, arg)
            case Falsum():
                return f
            case And(l, r):
                return And(self.formula(l), self.formula(r))
            case Or(l, r):
                return Or(self.formula(l), self.formula(r))
            case Imp(l, r):
                return Imp(self.formula(l), self.formula(r))
            case ForallInd(v, body):
                v, inner = self._under_ind_binder(v, [body])
                return ForallInd(v, inner.formula(body))
            case ExistsInd(v, body):
                v, inner = self._under_ind_binder(v, [body])
                return ExistsInd(v, inner.formula(body))
            case ForallPred(v, body):
                v, inner = self._under_pred_binder(v, [body])
                return ForallPred(v, inner.formula(body))
        raise TypeError(f"not a formula: {f!r}")

    def pred_abs(self, abs_: PredAbs) -> PredAbs:
        v, inner = self._under_ind_binder(abs_.var, [abs_.body])
        return PredAbs(v, inner.formula(abs_.body))

    # proof terms --------------------------------------------------------

    def term(self, t: ProofTerm) -> ProofTerm:
        if self.is_empty():
            return t
        match t:
            case Var(name, ann):
                if name in self.proof:
                    return self.proof[name]
                return Var(self.renames.get(name, name), self.formula(ann))
            case Lam(x, ann, body):
                ann = self.formula(ann)
                x, inner = self._under_proof_binder(x, [body])
                return Lam(x, ann, inner.term(body))
            case App(fun, arg):
                return App(self.term(fun), self.term(arg))
            case Pair(l, r):
                return Pair(self.term(l), self.term(r))
            case Proj(inner_t, index):
                return Proj(self.term(inner_t), index)
            case Inj(index, inner_t, ann):
                return Inj(index, self.term(inner_t), self.formula(ann))
            case Case(s, x, xa, l, y, ya, r):
                s = self.term(s)
                xa, ya = self.formula(xa), self.formula(ya)
                x, left_sub = self._under_proof_binder(x, [l])
                y, right_sub = self._under_proof_binder(y, [r])
                return Case(s, x, xa, left_sub.term(l), y, ya, right_sub.term(r))
            case IndLam(alpha, body):
                alpha, inner = self._under_ind_binder(alpha, [body])
                return IndLam(alpha, inner.term(body))
            case IndApp(inner_t, m):
                return IndApp(self.term(inner_t), self.indterm(m))
            case Witness(m, inner_t, ann):
                return Witness(self.indterm(m), self.term(inner_t), self.formula(ann))
            case ExCase(s, alpha, x, ann, body):
                s = self.term(s)
                alpha, ind_sub = self._under_ind_binder(alpha, [ann, body])
                ann = ind_sub.formula(ann)
                x, inner = ind_sub._under_proof_binder(x, [body])
                return ExCase(s, alpha, x, ann, inner.term(body))
            case Efq(target, inner_t):
                return Efq(self.formula(target), self.term(inner_t))
            case Par(a, la, ra, l, r):
                la, ra = self.formula(la), self.formula(ra)
                a, inner = self._under_proof_binder(a, [l, r])
                return Par(a, la, ra, inner.term(l), inner.term(r))
            case Abort(ann):
                return Abort(self.formula(ann))
            case PredLam(var, body):
                var, inner = self._under_pred_binder(var, [body])
                return PredLam(var, inner.term(body))
            case PredApp(inner_t, abs_):
                return PredApp(self.term(inner_t), self.pred_abs(abs_))
        raise TypeError(f"not a proof term: {t!r}")

    def frame(self, frame: Frame) -> Frame:
        # A frame is substituted as the eliminator of a placeholder head.
        placeholder = Var("%head")
        head, frames = unwind(self.term(apply_frame(placeholder, frame)))
        return frames[0]

    def apply(self, node):
        if isinstance(node, (IndVar, Const, FunApp)):
            return self.indterm(node)
        if isinstance(node, PredAbs):
            return self.pred_abs(node)
        if _is_formula_like(node):
            return self.formula(node)
        return self.term(node)


_FORMULA_TYPES = (Atom, PredVarAtom, Falsum, And, Or, Imp, ForallInd, ExistsInd, ForallPred)


def _is_formula_like(node) -> bool:
    return isinstance(node, _FORMULA_TYPES + (PredAbs, IndVar, Const, FunApp))


def is_formula(node) -> bool:
    return isinstance(node, _FORMULA_TYPES)


def subst_proof(term: ProofTerm, name: str, value: ProofTerm) -> ProofTerm:
    """`term[value/name]`, capture-avoiding."""
    return _Substitution(proof={name: value}).term(term)


def subst_ind(node, name: str, value: IndTerm):
    """`node[value/name]` for a formula, individual term or proof term."""
    return _Substitution(ind={name: value}).apply(node)


def subst_pred(node, name: str, value: PredAbs):
    """Replace every `name(m)` in a formula or proof term by the instance of `value` at m."""
    return _Substitution(pred={name: value}).apply(node)


def rename_proof_var(term: ProofTerm, old: str, new: str) -> ProofTerm:
    """Rename free occurrences of `old`, keeping their annotations."""
    return _Substitution(renames={old: new}).term(term)


def instantiate(abs_: PredAbs, arg: IndTerm) -> Formula:
    return subst_ind(abs_.body, abs_.var, arg)


# ---------------------------------------------------------------------------
# Alpha-equivalence

class _Canonicalizer:
    """Renames every bound variable to `%n`, n counting binders in pre-order."""

    def __init__(self):
        self.counter = 0

    def _next(self) -> str:
        name = f"%{self.counter}"
        self.counter += 1
        return name

    def indterm(self, m: IndTerm, ind: Dict[str, str]) -> IndTerm:
        match m:
            case IndVar(name):
                return IndVar(ind.get(name, name))
            case FunApp(name, args):
                return FunApp(name, tuple(self.indterm(a, ind) for a in args))
        return m

    def formula(self, f: Optional[Formula], ind: Dict[str, str], pred: Dict[str, str]):
        match f:
            case None | Falsum():
                return f
            case Atom(name, args):
                return Atom(name, tuple(self.indterm(a, ind) for a in args))
            case PredVarAtom(var, arg):
                return PredVarAtom(pred.get(var, var), self.indterm(arg, ind))
            case And(l, r):
                return And(self.formula(l, ind, pred), self.formula(r, ind, pred))
            case Or(l, r):
                return Or(self.formula(l, ind, pred), self.formula(r, ind, pred))
            case Imp(l, r):
                return Imp(self.formula(l, ind, pred), self.formula(r, ind, pred))
            case ForallInd(v, body):
                new = self._next()
                return ForallInd(new, self.formula(body, {**ind, v: new}, pred))
            case ExistsInd(v, body):
                new = self._next()
                return ExistsInd(new, self.formula(body, {**ind, v: new}, pred))
            case ForallPred(v, body):
                new = self._next()
                return ForallPred(new, self.formula(body, ind, {**pred, v: new}))
        raise TypeError(f"not a formula: {f!r}")

    def term(self, t: ProofTerm, proof: Dict[str, str], ind: Dict[str, str], pred: Dict[str, str]):
        f = lambda g: self.formula(g, ind, pred)  # noqa: E731
        match t:
            case Var(name, ann):
                return Var(proof.get(name, name), f(ann))
            case Lam(x, ann, body):
                new = self._next()
                return Lam(new, f(ann), self.term(body, {**proof, x: new}, ind, pred))
            case App(fun, arg):
                return App(self.term(fun, proof, ind, pred), self.term(arg, proof, ind, pred))
            case Pair(l, r):
                return Pair(self.term(l, proof, ind, pred), self.term(r, proof, ind, pred))
            case Proj(inner, index):
                return Proj(self.term(inner, proof, ind, pred), index)
            case Inj(index, inner, ann):
                return Inj(index, self.term(inner, proof, ind, pred), f(ann))
            case Case(s, x, xa, l, y, ya, r):
                s = self.term(s, proof, ind, pred)
                new_x = self._next()
                l = self.term(l, {**proof, x: new_x}, ind, pred)
                new_y = self._next()
                r = self.term(r, {**proof, y: new_y}, ind, pred)
                return Case(s, new_x, f(xa), l, new_y, f(ya), r)
            case IndLam(alpha, body):
                new = self._next()
                return IndLam(new, self.term(body, proof, {**ind, alpha: new}, pred))
            case IndApp(inner, m):
                return IndApp(self.term(inner, proof, ind, pred), self.indterm(m, ind))
            case Witness(m, inner, ann):
                return Witness(self.indterm(m, ind), self.term(inner, proof, ind, pred), f(ann))
            case ExCase(s, alpha, x, ann, body):
                s = self.term(s, proof, ind, pred)
                new_alpha = self._next()
                new_x = self._next()
                inner_ind = {**ind, alpha: new_alpha}
                return ExCase(s, new_alpha, new_x, self.formula(ann, inner_ind, pred),
                              self.term(body, {**proof, x: new_x}, inner_ind, pred))
            case Efq(target, inner):
                return Efq(f(target), self.term(inner, proof, ind, pred))
            case Par(a, la, ra, l, r):
                new = self._next()
                inner_proof = {**proof, a: new}
                return Par(new, f(la), f(ra),
                           self.term(l, inner_proof, ind, pred), self.term(r, inner_proof, ind, pred))
            case Abort(ann):
                return Abort(f(ann))
            case PredLam(var, body):
                new = self._next()
                return PredLam(new, self.term(body, proof, ind, {**pred, var: new}))
            case PredApp(inner, abs_):
                inner = self.term(inner, proof, ind, pred)
                new = self._next()
                return PredApp(inner, PredAbs(new, self.formula(abs_.body, {**ind, abs_.var: new}, pred)))
        raise TypeError(f"not a proof term: {t!r}")


def canonicalize(node):
    """Canonical representative of the alpha-class of a formula or proof term."""
    if node is None:
        return None
    canon = _Canonicalizer()
    if isinstance(node, PredAbs):
        new = canon._next()
        return PredAbs(new, canon.formula(node.body, {node.var: new}, {}))
    if is_formula(node):
        return canon.formula(node, {}, {})
    return canon.term(node, {}, {}, {})


def alpha_equal(left, right) -> bool:
    if left is None or right is None:
        return left is None and right is None
    return canonicalize(left) == canonicalize(right)


# ---------------------------------------------------------------------------
# Positions

TermPath = Tuple[int, ...]


def children(term: ProofTerm) -> Tuple[ProofTerm, ...]:
    """Immediate proof-term children in printed order."""
    match term:
        case Var() | Abort():
            return ()
        case Lam(_, _, body) | IndLam(_, body) | PredLam(_, body):
            return (body,)
        case App(l, r) | Pair(l, r):
            return (l, r)
        case Proj(t, _) | Inj(_, t, _) | IndApp(t, _) | Witness(_, t, _) | Efq(_, t) | PredApp(t, _):
            return (t,)
        case Case(s, _, _, l, _, _, r):
            return (s, l, r)
        case ExCase(s, _, _, _, body):
            return (s, body)
        case Par(_, _, _, l, r):
            return (l, r)
    raise TypeError(f"not a proof term: {term!r}")


def replace_child(term: ProofTerm, index: int, new: ProofTerm) -> ProofTerm:
    match term:
        case Lam(x, ann, _):
            return Lam(x, ann, new)
        case IndLam(alpha, _):
            return IndLam(alpha, new)
        case PredLam(var, _):
            return PredLam(var, new)
        case App(l, r):
            return App(new, r) if index == 0 else App(l, new)
        case Pair(l, r):
            return Pair(new, r) if index == 0 else Pair(l, new)
        case Proj(_, i):
            return Proj(new, i)
        case Inj(i, _, ann):
            return Inj(i, new, ann)
        case IndApp(_, m):
            return IndApp(new, m)
        case Witness(m, _, ann):
            return Witness(m, new, ann)
        case Efq(target, _):
            return Efq(target, new)
        case PredApp(_, abs_):
            return PredApp(new, abs_)
        case Case(s, x, xa, l, y, ya, r):
            parts = [s, l, r]
            parts[index] = new
            return Case(parts[0], x, xa, parts[1], y, ya, parts[2])
        case ExCase(s, alpha, x, ann, body):
            return ExCase(new, alpha, x, ann, body) if index == 0 else ExCase(s, alpha, x, ann, new)
        case Par(a, la, ra, l, r):
            return Par(a, la, ra, new, r) if index == 0 else Par(a, la, ra, l, new)
    raise IndexError(f"no child {index} in {type(term).__name__}")


def subterm_at(term: ProofTerm, path: TermPath) -> ProofTerm:
    for index in path:
        term = children(term)[index]
    return term


def replace_at(term: ProofTerm, path: TermPath, new: ProofTerm) -> ProofTerm:
    if not path:
        return new
    child = children(term)[path[0]]
    return replace_child(term, path[0], replace_at(child, path[1:], new))


def term_size(term: ProofTerm) -> int:
    return 1 + sum(term_size(child) for child in children(term))


# ---------------------------------------------------------------------------
# Signatures

@dataclass(frozen=True)
class Signature:
    """Constants, function symbols and predicate symbols with their arities."""
    constants: Tuple[str, ...] = DEFAULT_CONSTANTS
    functions: Dict[str, int] = field(default_factory=lambda: dict(DEFAULT_FUNCTIONS))
    predicates: Dict[str, int] = field(default_factory=lambda: dict(DEFAULT_PREDICATES))

    def __post_init__(self):
        seen = set()
        for name in list(self.constants) + list(self.functions) + list(self.predicates):
            if name in RESERVED_NAMES or name in ("bot", "⊥"):
                raise SignatureError(f"'{name}' is reserved and cannot be declared")
            if name in seen:
                raise SignatureError(f"'{name}' is declared twice")
            seen.add(name)
        for name, arity in self.functions.items():
            if arity < 1:
                raise SignatureError(f"function '{name}' must have arity at least 1")
        for name, arity in self.predicates.items():
            if arity < 0:
                raise SignatureError(f"predicate '{name}' has negative arity")

    def __hash__(self):
        return hash((self.constants, tuple(sorted(self.functions.items())),
                     tuple(sorted(self.predicates.items()))))

    def is_constant(self, name: str) -> bool:
        return name in self.constants

    def function_arity(self, name: str) -> Optional[int]:
        return self.functions.get(name)

    def predicate_arity(self, name: str) -> Optional[int]:
        return self.predicates.get(name)

    @property
    def first_constant(self) -> Const:
        if not self.constants:
            raise SignatureError("signature has no constant")
        return Const(self.constants[0])

    @classmethod
    def from_text(cls, text: str) -> "Signature":
        """Read `const`, `func` and `pred` declaration lines."""
        constants: List[str] = []
        functions: Dict[str, int] = {}
        predicates: Dict[str, int] = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            keyword, *items = line.split()
            if keyword == "const":
                constants.extend(items)
                continue
            if keyword not in ("func", "pred"):
                raise SignatureError(f"line {number}: unknown declaration '{keyword}'")
            target = functions if keyword == "func" else predicates
            for item in items:
                name, sep, arity = item.partition("/")
                if not sep or not arity.isdigit():
                    raise SignatureError(f"line {number}: expected name/arity, got '{item}'")
                if name in target:
                    raise SignatureError(f"'{name}' is declared twice")
                target[name] = int(arity)
        if len(set(constants)) != len(constants):
            raise SignatureError("a constant is declared twice")
        return cls(tuple(constants), functions, predicates)

    @classmethod
    def load(cls, path) -> "Signature":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


DEFAULT_SIGNATURE = Signature()

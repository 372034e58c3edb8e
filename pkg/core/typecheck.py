"""Type checking for LC, LC*, LC2 and LC2* proof terms.

The checker is bidirectional. `infer` needs enough annotations to read the
type off the term; `check` pushes an expected type down, which is how
injections, witnesses and unannotated binders get their types. Both return
an elaborated copy of the term in which every variable occurrence and every
injection, witness, efq and case binder carries its annotation, so the
reducer can later type subterms without a context.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, Optional, Tuple

from core.errors import (
    AbortNotAdmitted, AnnotationMismatch, EfqNonAtomicTarget, EigenvariableViolation,
    KernelError, MissingAnnotation, ParHypothesesNotDual, SecondOrderNotAdmitted,
    SubjectReductionViolation, TypeMismatch, UnboundVariable,
)
from core.models import SystemFlavor
from core.printer import print_formula
from core.syntax import (
    FALSUM, Abort, And, App, Case, Efq, ExCase, ExistsInd, ForallInd, ForallPred,
    Formula, Imp, IndApp, IndLam, IndVar, Inj, Lam, Or, Pair, Par, PredAbs, PredApp, PredLam,
    PredVarAtom, ProofTerm, Proj, Var, Witness, alpha_equal, free_ind_vars, free_pred_vars,
    free_proof_vars, free_var_annotations, is_atomic, subst_ind, subst_pred,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Context:
    """Ordered proof-variable bindings, at most one per name."""
    entries: Tuple[Tuple[str, Formula], ...] = ()

    @classmethod
    def from_dict(cls, bindings: Optional[Dict[str, Formula]]) -> "Context":
        return cls(tuple((bindings or {}).items()))

    def lookup(self, name: str) -> Optional[Formula]:
        for bound, formula in self.entries:
            if bound == name:
                return formula
        return None

    def extend(self, name: str, formula: Formula) -> "Context":
        kept = tuple((n, f) for n, f in self.entries if n != name)
        return Context(kept + ((name, formula),))

    def __contains__(self, name: str) -> bool:
        return self.lookup(name) is not None

    def __iter__(self) -> Iterator[Tuple[str, Formula]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


EMPTY_CONTEXT = Context()


def _describe(formula: Formula) -> str:
    return print_formula(formula)


def _has_second_order(formula: Optional[Formula]) -> bool:
    match formula:
        case None:
            return False
        case PredVarAtom() | ForallPred():
            return True
        case And(l, r) | Or(l, r) | Imp(l, r):
            return _has_second_order(l) or _has_second_order(r)
        case ForallInd(_, body) | ExistsInd(_, body):
            return _has_second_order(body)
    return False


class _Checker:
    def __init__(self, flavor: SystemFlavor):
        self.flavor = flavor

    # admissibility ---------------------------------------------------------

    def formula_ok(self, formula: Optional[Formula]) -> None:
        if not self.flavor.admits_second_order and _has_second_order(formula):
            raise SecondOrderNotAdmitted(
                f"second-order formula {_describe(formula)} needs an lc2 flavor, not {self.flavor}")

    def _eigen_ind(self, ctx: Context, alpha: str, body: ProofTerm, excluded: FrozenSet[str] = frozenset()):
        for name in free_proof_vars(body) - excluded:
            formula = ctx.lookup(name)
            if formula is not None and alpha in free_ind_vars(formula):
                raise EigenvariableViolation(
                    f"eigenvariable {alpha} is free in the type of {name}: {_describe(formula)}")

    def _eigen_pred(self, ctx: Context, var: str, body: ProofTerm):
        for name in free_proof_vars(body):
            formula = ctx.lookup(name)
            if formula is not None and var in free_pred_vars(formula):
                raise EigenvariableViolation(
                    f"eigenvariable {var} is free in the type of {name}: {_describe(formula)}")

    def _par_hypotheses(self, par: Par) -> Tuple[Formula, Formula]:
        if par.left_ann is None or par.right_ann is None:
            raise MissingAnnotation(f"par binder {par.var} needs its hypothesis annotations")
        self.formula_ok(par.left_ann)
        self.formula_ok(par.right_ann)
        left = par.left_ann
        if not isinstance(left, Imp) or not alpha_equal(par.right_ann, Imp(left.right, left.left)):
            raise ParHypothesesNotDual(
                f"par binder {par.var}: {_describe(par.left_ann)} and {_describe(par.right_ann)} are not dual")
        return par.left_ann, par.right_ann

    # inference -------------------------------------------------------------

    def infer(self, ctx: Context, t: ProofTerm) -> Tuple[ProofTerm, Formula]:
        match t:
            case Var(name, ann):
                bound = ctx.lookup(name)
                if bound is None:
                    raise UnboundVariable(f"variable {name} is not bound")
                if ann is not None and not alpha_equal(ann, bound):
                    raise AnnotationMismatch(
                        f"{name} is annotated {_describe(ann)} but bound to {_describe(bound)}")
                return Var(name, bound), bound

            case Lam(x, ann, body):
                if ann is None:
                    raise MissingAnnotation(f"cannot infer the type of unannotated binder {x}")
                self.formula_ok(ann)
                body, body_type = self.infer(ctx.extend(x, ann), body)
                return Lam(x, ann, body), Imp(ann, body_type)

            case App(fun, arg):
                fun, fun_type = self.infer(ctx, fun)
                if not isinstance(fun_type, Imp):
                    raise TypeMismatch(f"applied term has type {_describe(fun_type)}, not an implication")
                arg = self.check(ctx, arg, fun_type.left)
                return App(fun, arg), fun_type.right

            case Pair(left, right):
                left, left_type = self.infer(ctx, left)
                right, right_type = self.infer(ctx, right)
                return Pair(left, right), And(left_type, right_type)

            case Proj(inner, index):
                inner, inner_type = self.infer(ctx, inner)
                if not isinstance(inner_type, And):
                    raise TypeMismatch(f"projection from {_describe(inner_type)}, not a conjunction")
                return Proj(inner, index), inner_type.left if index == 0 else inner_type.right

            case Inj(_, _, ann) | Witness(_, _, ann):
                if ann is None:
                    kind = "injection" if isinstance(t, Inj) else "witness"
                    raise MissingAnnotation(f"cannot infer the type of an unannotated {kind} without a goal")
                self.formula_ok(ann)
                return self.check(ctx, t, ann), ann

            case Case(scrut, x, x_ann, left, y, y_ann, right):
                scrut, x_type, y_type = self._case_scrutinee(ctx, scrut, x, x_ann, y, y_ann)
                left, left_type = self.infer(ctx.extend(x, x_type), left)
                right = self.check(ctx.extend(y, y_type), right, left_type)
                return Case(scrut, x, x_type, left, y, y_type, right), left_type

            case IndLam(alpha, body):
                body, body_type = self.infer(ctx, body)
                self._eigen_ind(ctx, alpha, body)
                return IndLam(alpha, body), ForallInd(alpha, body_type)

            case IndApp(inner, m):
                inner, inner_type = self.infer(ctx, inner)
                if not isinstance(inner_type, ForallInd):
                    raise TypeMismatch(f"individual application to {_describe(inner_type)}")
                return IndApp(inner, m), subst_ind(inner_type.body, inner_type.var, m)

            case ExCase(scrut, alpha, x, ann, body):
                scrut, x_type = self._excase_scrutinee(ctx, scrut, alpha, x, ann)
                body, body_type = self.infer(ctx.extend(x, x_type), body)
                self._excase_eigen(ctx, alpha, x, body, body_type)
                return ExCase(scrut, alpha, x, x_type, body), body_type

            case Efq(target, inner):
                if target is None:
                    raise MissingAnnotation("cannot infer the target of an unannotated efq without a goal")
                self.formula_ok(target)
                if not is_atomic(target):
                    raise EfqNonAtomicTarget(f"efq target {_describe(target)} is not atomic")
                return Efq(target, self.check(ctx, inner, FALSUM)), target

            case Par(a, _, _, left, right):
                left_hyp, right_hyp = self._par_hypotheses(t)
                left, conclusion = self.infer(ctx.extend(a, left_hyp), left)
                right = self.check(ctx.extend(a, right_hyp), right, conclusion)
                return Par(a, left_hyp, right_hyp, left, right), conclusion

            case Abort(ann):
                if not self.flavor.admits_abort:
                    raise AbortNotAdmitted(f"abort is not admitted in {self.flavor}")
                if ann is None:
                    raise MissingAnnotation("abort needs its type annotation")
                self.formula_ok(ann)
                if not isinstance(ann, Imp):
                    raise TypeMismatch(f"abort annotation {_describe(ann)} is not an implication")
                return t, ann

            case PredLam(var, body):
                self._second_order_term()
                body, body_type = self.infer(ctx, body)
                self._eigen_pred(ctx, var, body)
                return PredLam(var, body), ForallPred(var, body_type)

            case PredApp(inner, abs_):
                self._second_order_term()
                self.formula_ok(abs_.body)
                inner, inner_type = self.infer(ctx, inner)
                if not isinstance(inner_type, ForallPred):
                    raise TypeMismatch(f"predicate application to {_describe(inner_type)}")
                return PredApp(inner, abs_), subst_pred(inner_type.body, inner_type.var, abs_)

        raise TypeError(f"not a proof term: {t!r}")

    # checking --------------------------------------------------------------

    def check(self, ctx: Context, t: ProofTerm, goal: Formula) -> ProofTerm:
        match t:
            case Lam(x, ann, body) if isinstance(goal, Imp):
                if ann is not None:
                    self.formula_ok(ann)
                    if not alpha_equal(ann, goal.left):
                        raise TypeMismatch(f"binder {x} annotated {_describe(ann)}, expected {_describe(goal.left)}")
                ann = ann if ann is not None else goal.left
                return Lam(x, ann, self.check(ctx.extend(x, ann), body, goal.right))

            case Pair(left, right) if isinstance(goal, And):
                return Pair(self.check(ctx, left, goal.left), self.check(ctx, right, goal.right))

            case Inj(index, inner, ann):
                self._annotation_agrees(ann, goal, "injection")
                if not isinstance(goal, Or):
                    raise TypeMismatch(f"injection checked against {_describe(goal)}, not a disjunction")
                component = goal.left if index == 0 else goal.right
                return Inj(index, self.check(ctx, inner, component), goal if ann is None else ann)

            case Witness(m, inner, ann):
                self._annotation_agrees(ann, goal, "witness")
                if not isinstance(goal, ExistsInd):
                    raise TypeMismatch(f"witness checked against {_describe(goal)}, not an existential")
                inner = self.check(ctx, inner, subst_ind(goal.body, goal.var, m))
                return Witness(m, inner, goal if ann is None else ann)

            case Case(scrut, x, x_ann, left, y, y_ann, right):
                scrut, x_type, y_type = self._case_scrutinee(ctx, scrut, x, x_ann, y, y_ann)
                left = self.check(ctx.extend(x, x_type), left, goal)
                right = self.check(ctx.extend(y, y_type), right, goal)
                return Case(scrut, x, x_type, left, y, y_type, right)

            case ExCase(scrut, alpha, x, ann, body):
                scrut, x_type = self._excase_scrutinee(ctx, scrut, alpha, x, ann)
                body = self.check(ctx.extend(x, x_type), body, goal)
                self._excase_eigen(ctx, alpha, x, body, goal)
                return ExCase(scrut, alpha, x, x_type, body)

            case Efq(target, inner):
                if target is None:
                    self.formula_ok(goal)
                    if not is_atomic(goal):
                        raise EfqNonAtomicTarget(f"efq target {_describe(goal)} is not atomic")
                    return Efq(goal, self.check(ctx, inner, FALSUM))

            case Par(a, _, _, left, right):
                left_hyp, right_hyp = self._par_hypotheses(t)
                left = self.check(ctx.extend(a, left_hyp), left, goal)
                right = self.check(ctx.extend(a, right_hyp), right, goal)
                return Par(a, left_hyp, right_hyp, left, right)

            case IndLam(alpha, body) if isinstance(goal, ForallInd):
                if alpha in free_ind_vars(goal):
                    raise EigenvariableViolation(f"eigenvariable {alpha} is free in {_describe(goal)}")
                body = self.check(ctx, body, subst_ind(goal.body, goal.var, IndVar(alpha)))
                self._eigen_ind(ctx, alpha, body)
                return IndLam(alpha, body)

            case PredLam(var, body) if isinstance(goal, ForallPred):
                self._second_order_term()
                if var in free_pred_vars(goal):
                    raise EigenvariableViolation(f"eigenvariable {var} is free in {_describe(goal)}")
                renamed = PredAbs("%z", PredVarAtom(var, IndVar("%z")))
                body = self.check(ctx, body, subst_pred(goal.body, goal.var, renamed))
                self._eigen_pred(ctx, var, body)
                return PredLam(var, body)

        elaborated, inferred = self.infer(ctx, t)
        if not alpha_equal(inferred, goal):
            raise TypeMismatch(f"expected {_describe(goal)}, found {_describe(inferred)}")
        return elaborated

    # shared pieces ---------------------------------------------------------

    def _second_order_term(self):
        if not self.flavor.admits_second_order:
            raise SecondOrderNotAdmitted(f"second-order abstraction is not admitted in {self.flavor}")

    def _annotation_agrees(self, ann: Optional[Formula], goal: Formula, kind: str):
        if ann is not None:
            self.formula_ok(ann)
            if not alpha_equal(ann, goal):
                raise TypeMismatch(f"{kind} annotated {_describe(ann)}, expected {_describe(goal)}")

    def _case_scrutinee(self, ctx, scrut, x, x_ann, y, y_ann):
        scrut, scrut_type = self.infer(ctx, scrut)
        if not isinstance(scrut_type, Or):
            raise TypeMismatch(f"case on {_describe(scrut_type)}, not a disjunction")
        for name, ann, expected in ((x, x_ann, scrut_type.left), (y, y_ann, scrut_type.right)):
            if ann is not None:
                self.formula_ok(ann)
                if not alpha_equal(ann, expected):
                    raise AnnotationMismatch(
                        f"case binder {name} annotated {_describe(ann)}, expected {_describe(expected)}")
        return scrut, scrut_type.left, scrut_type.right

    def _excase_scrutinee(self, ctx, scrut, alpha, x, ann):
        scrut, scrut_type = self.infer(ctx, scrut)
        if not isinstance(scrut_type, ExistsInd):
            raise TypeMismatch(f"excase on {_describe(scrut_type)}, not an existential")
        if alpha in free_ind_vars(scrut_type):
            raise EigenvariableViolation(f"eigenvariable {alpha} is free in {_describe(scrut_type)}")
        x_type = subst_ind(scrut_type.body, scrut_type.var, IndVar(alpha))
        if ann is not None:
            self.formula_ok(ann)
            if not alpha_equal(ann, x_type):
                raise AnnotationMismatch(f"excase binder {x} annotated {_describe(ann)}, expected {_describe(x_type)}")
        return scrut, x_type

    def _excase_eigen(self, ctx, alpha, x, body, conclusion):
        if alpha in free_ind_vars(conclusion):
            raise EigenvariableViolation(f"eigenvariable {alpha} is free in the conclusion {_describe(conclusion)}")
        self._eigen_ind(ctx, alpha, body, frozenset({x}))


def _prepare(ctx: Context, flavor: SystemFlavor, goal: Optional[Formula]) -> _Checker:
    checker = _Checker(SystemFlavor(flavor))
    for _, formula in ctx:
        checker.formula_ok(formula)
    checker.formula_ok(goal)
    return checker


def elaborate_with_type(ctx: Context, term: ProofTerm, flavor: SystemFlavor = SystemFlavor.LC,
                        goal: Optional[Formula] = None) -> Tuple[ProofTerm, Formula]:
    checker = _prepare(ctx, flavor, goal)
    if goal is None:
        return checker.infer(ctx, term)
    return checker.check(ctx, term, goal), goal


def typecheck(ctx: Context, term: ProofTerm, flavor: SystemFlavor = SystemFlavor.LC,
              goal: Optional[Formula] = None) -> Formula:
    """The type of `term` in `ctx`, raising a TypingError if there is none."""
    return elaborate_with_type(ctx, term, flavor, goal)[1]


def elaborate(ctx: Context, term: ProofTerm, flavor: SystemFlavor = SystemFlavor.LC,
              goal: Optional[Formula] = None) -> ProofTerm:
    """Fully annotated copy of a well-typed term."""
    return elaborate_with_type(ctx, term, flavor, goal)[0]


def context_from_annotations(term: ProofTerm) -> Optional[Context]:
    """Context read off the annotations of free occurrences, if they are complete and agree."""
    entries = []
    for name, anns in free_var_annotations(term).items():
        first = anns[0]
        if first is None or any(ann is None or not alpha_equal(ann, first) for ann in anns[1:]):
            return None
        entries.append((name, first))
    return Context(tuple(entries))


def intrinsic_type(term: ProofTerm) -> Optional[Formula]:
    """Type of `term` read from its own annotations, or None."""
    ctx = context_from_annotations(term)
    if ctx is None:
        return None
    try:
        return _Checker(SystemFlavor.LC2_STAR).infer(ctx, term)[1]
    except KernelError:
        return None


@dataclass
class AuditReport:
    """Outcome of a subject-reduction audit for one step."""
    type_before: Optional[Formula] = None
    type_after: Optional[Formula] = None
    new_free_vars: FrozenSet[str] = field(default_factory=frozenset)
    reason: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.reason is None


def audit_step(ctx: Context, before: ProofTerm, after: ProofTerm,
               flavor: SystemFlavor = SystemFlavor.LC2_STAR) -> AuditReport:
    """Check that a step preserved the type and did not add free variables."""
    report = AuditReport(type_before=typecheck(ctx, before, flavor))
    report.new_free_vars = free_proof_vars(after) - free_proof_vars(before)
    try:
        report.type_after = typecheck(ctx, after, flavor)
    except KernelError as e:
        report.reason = f"reduct does not typecheck: {e}"
    if report.ok and not alpha_equal(report.type_before, report.type_after):
        report.reason = (f"type changed from {_describe(report.type_before)} "
                         f"to {_describe(report.type_after)}")
    if report.ok and report.new_free_vars:
        report.reason = f"new free variables {sorted(report.new_free_vars)}"
    if not report.ok:
        logger.error(f"✗ Subject reduction violated: {report.reason}")
        raise SubjectReductionViolation(report.reason, report)
    return report

"""Herbrand disjunction extraction from proofs of existential formulas.

A closed, abort-free proof of `exists a. A` normalizes to a parallel
composition of witness pairs `(m_i, v_i)`. Replacing each pair by `v_i`
injected into position i of `A[m_0/a] | (A[m_1/a] | ...)` gives a proof of
that disjunction with the same `par` skeleton.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from core.errors import (
    KernelBug, PreconditionAbort, PreconditionFreeVars, TypeMismatch, TypeNotExistential,
    TypingError,
)
from core.models import SystemFlavor, TraceStatus
from core.normalizer import Audit, Trace, normalize
from core.printer import print_formula, print_indterm
from core.reduction import decompose
from core.syntax import (
    ExistsInd, Formula, IndTerm, Inj, Or, ProofTerm, Witness, contains_abort,
    free_proof_vars, replace_at, subst_ind,
)
from core.typecheck import EMPTY_CONTEXT, Context, elaborate_with_type, typecheck

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HerbrandForm:
    """A normal form whose elementary processes are all witness pairs."""
    tree: ProofTerm
    leaves: Tuple[Tuple[IndTerm, ProofTerm], ...]

    @property
    def witnesses(self) -> List[IndTerm]:
        return [m for m, _ in self.leaves]


@dataclass(frozen=True)
class HerbrandResult:
    witnesses: Tuple[IndTerm, ...]
    disjunction: Formula
    proof: ProofTerm
    source_trace: Optional[Trace] = None

    def describe(self) -> str:
        names = ", ".join(print_indterm(m) for m in self.witnesses)
        return f"witnesses [{names}] for {print_formula(self.disjunction)}"


def as_herbrand_form(term: ProofTerm) -> Optional[HerbrandForm]:
    parts = decompose(term)
    leaves = []
    for _, process in parts.leaves:
        if not isinstance(process, Witness):
            return None
        leaves.append((process.ind, process.term))
    return HerbrandForm(term, tuple(leaves))


def herbrand_disjunction(goal: ExistsInd, witnesses) -> Tuple[Formula, List[Formula]]:
    """Right-nested disjunction of the instances of `goal` and the instances themselves."""
    instances = [subst_ind(goal.body, goal.var, m) for m in witnesses]
    disjunction = instances[-1]
    for instance in reversed(instances[:-1]):
        disjunction = Or(instance, disjunction)
    return disjunction, instances


def _inject(proof: ProofTerm, position: int, disjunction: Formula, count: int) -> ProofTerm:
    if count == 1:
        return proof
    if position == 0:
        return Inj(0, proof, disjunction)
    return Inj(1, _inject(proof, position - 1, disjunction.right, count - 1), disjunction)


def build_disjunction_proof(form: HerbrandForm, goal: Formula, ctx: Context = EMPTY_CONTEXT,
                            flavor: SystemFlavor = SystemFlavor.LC2) -> HerbrandResult:
    """Turn a Herbrand normal form of type `goal` into a proof of its Herbrand disjunction."""
    if not isinstance(goal, ExistsInd):
        raise TypeNotExistential(f"{print_formula(goal)} is not an existential formula")
    try:
        typecheck(ctx, form.tree, flavor, goal)
    except TypingError as e:
        raise TypeMismatch(f"Herbrand form does not have type {print_formula(goal)}: {e}") from e

    disjunction, _ = herbrand_disjunction(goal, form.witnesses)
    count = len(form.leaves)
    proof = form.tree
    for position, ((path, _), (_, body)) in enumerate(zip(decompose(form.tree).leaves, form.leaves)):
        proof = replace_at(proof, path, _inject(body, position, disjunction, count))

    try:
        typecheck(ctx, proof, flavor, disjunction)
    except TypingError as e:
        raise TypeMismatch(f"disjunction proof does not typecheck: {e}") from e
    return HerbrandResult(tuple(form.witnesses), disjunction, proof)


def herbrand_pipeline(term: ProofTerm, flavor: SystemFlavor = SystemFlavor.LC2,
                      goal: Optional[Formula] = None, fuel: Optional[int] = None) -> HerbrandResult:
    """Normalize a closed proof of an existential formula and extract its witnesses."""
    ctx = EMPTY_CONTEXT
    free = free_proof_vars(term)
    if free:
        raise PreconditionFreeVars(f"term has free proof variables {sorted(free)}")
    if contains_abort(term):
        raise PreconditionAbort("term contains abort")
    if goal is not None and not isinstance(goal, ExistsInd):
        raise TypeNotExistential(f"{print_formula(goal)} is not an existential formula")

    elaborated, goal = elaborate_with_type(ctx, term, flavor, goal)
    if not isinstance(goal, ExistsInd):
        raise TypeNotExistential(f"{print_formula(goal)} is not an existential formula")

    trace = normalize(elaborated, fuel, Audit(ctx, flavor))
    if trace.status is not TraceStatus.NORMALIZED:
        raise KernelBug(f"typed term did not normalize within {trace.fuel_used} steps")
    form = as_herbrand_form(trace.final)
    if form is None:
        raise KernelBug("normal form of an existential proof is not a parallel composition of witnesses")

    result = build_disjunction_proof(form, goal, ctx, flavor)
    logger.info(f"✓ Extracted {len(result.witnesses)} witness(es)")
    return HerbrandResult(result.witnesses, result.disjunction, result.proof, trace)


def is_par_skeleton_preserved(source: ProofTerm, target: ProofTerm) -> bool:
    """Whether two terms have the same `par` nodes at the same paths."""
    left, right = decompose(source), decompose(target)
    return [p for p, _ in left.leaves] == [p for p, _ in right.leaves] and left.pars == right.pars

"""Executable check that communication can be simulated by abort.

For a typed subject `u par[a : A -> B] v` of type C, the terms

    left_sim  = fun x : A => abort[C -> B] (v[fun y : B => x / a])
    right_sim = fun z : B => abort[C -> A] (u[fun y : A => z / a])

stand in for the communication variable: every head step of the subject
that rewrites the left branch from u to u' is matched by one or more head
steps from u[left_sim/a] to u'[left_sim/a], and symmetrically on the right.
"""

import logging
import os
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from core.errors import MissingAnnotation, ParHypothesesNotDual, SimulationFailure, TypeMismatch
from core.models import RedexKind
from core.reduction import RedexSite, head_step
from core.syntax import (
    Abort, App, Imp, Lam, Par, ProofTerm, Var, alpha_equal, fresh_name, free_proof_vars,
    subst_proof,
)
from core.typecheck import intrinsic_type

logger = logging.getLogger(__name__)

SIMULATION_FUEL = int(os.getenv("LCT_SIMULATION_FUEL", "10000"))


@dataclass(frozen=True)
class SimulationInstance:
    subject: Par
    left_sim: ProofTerm
    right_sim: ProofTerm
    left_hyp: Imp
    right_hyp: Imp
    conclusion: object


@dataclass(frozen=True)
class SimulatedStep:
    index: int
    site: RedexSite
    side: int
    simulated_steps: int
    abort_firings: int


@dataclass
class SimulationReport:
    steps: List[SimulatedStep] = field(default_factory=list)
    subject_normalized: bool = False

    @property
    def communication_steps(self) -> List[SimulatedStep]:
        return [step for step in self.steps if step.site.kind.is_communication]


def build_instance(subject: ProofTerm) -> SimulationInstance:
    if not isinstance(subject, Par):
        raise TypeMismatch("simulation needs a par term")
    conclusion = intrinsic_type(subject)
    if conclusion is None:
        raise MissingAnnotation("simulation needs a fully annotated, well-typed subject")
    left_hyp, right_hyp = subject.left_ann, subject.right_ann
    if not isinstance(left_hyp, Imp) or not isinstance(right_hyp, Imp):
        raise ParHypothesesNotDual(f"par binder {subject.var} has no implication hypotheses")
    a_type, b_type = left_hyp.left, left_hyp.right

    used = free_proof_vars(subject.left) | free_proof_vars(subject.right) | {subject.var}
    x = fresh_name("x", used)
    y = fresh_name("y", used | {x})
    z = fresh_name("z", used | {y})
    left_sim = Lam(x, a_type, App(Abort(Imp(conclusion, b_type)),
                                  subst_proof(subject.right, subject.var, Lam(y, b_type, Var(x, a_type)))))
    right_sim = Lam(z, b_type, App(Abort(Imp(conclusion, a_type)),
                                   subst_proof(subject.left, subject.var, Lam(y, a_type, Var(z, b_type)))))
    return SimulationInstance(subject, left_sim, right_sim, left_hyp, right_hyp, conclusion)


def site_side(site: RedexSite) -> int:
    """0 when a step rewrites the left branch of the root `par`, 1 for the right."""
    if not site.path:
        return 0 if site.kind is RedexKind.D_LEFT else 1
    return site.path[0]


def _simulate(start: ProofTerm, target: ProofTerm, fuel: int) -> Tuple[int, int]:
    current = start
    aborts = 0
    for count in range(1, fuel + 1):
        step = head_step(current)
        if step is None:
            break
        site, current = step
        if site.kind is RedexKind.ABORT_RULE:
            aborts += 1
        if alpha_equal(current, target):
            return count, aborts
    raise SimulationFailure("simulated reduction did not reach the image of the subject step")


def check_simulation(subject: ProofTerm, max_steps: Optional[int] = None,
                     fuel: Optional[int] = None) -> SimulationReport:
    """Check every head step of `subject` against its abort simulation."""
    fuel = SIMULATION_FUEL if fuel is None else fuel
    build_instance(subject)
    report = SimulationReport()
    current = subject
    index = 0
    while max_steps is None or index < max_steps:
        step = head_step(current)
        if step is None:
            report.subject_normalized = True
            break
        site, after = step
        instance = build_instance(current)
        side = site_side(site)
        name = current.var
        if side == 0:
            start = subst_proof(current.left, name, instance.left_sim)
            target = subst_proof(after.left, name, instance.left_sim)
        else:
            start = subst_proof(current.right, name, instance.right_sim)
            target = subst_proof(after.right, name, instance.right_sim)
        index += 1
        try:
            count, aborts = _simulate(start, target, fuel)
        except SimulationFailure as e:
            logger.error(f"✗ Step {index} ({site.kind}) is not simulated")
            raise SimulationFailure(f"step {index} ({site.kind} at {list(site.path)}): {e}") from e
        report.steps.append(SimulatedStep(index, site, side, count, aborts))
        logger.debug(f"Step {index} {site.kind} simulated in {count} step(s)")
        current = after
    logger.info(f"✓ Simulated {len(report.steps)} step(s)")
    return report

"""Head-reduction driver, traces, and head-normal-form classification."""

import logging
import os
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from core.errors import NotNormal
from core.models import SystemFlavor, TraceStatus
from core.reduction import RedexSite, head_step, leftmost_head_redex, spine_binders, decompose
from core.syntax import (
    Abort, Arg, Par, ProofTerm, Stack, TermPath, Var, VALUE_TYPES, term_size, unwind,
)
from core.typecheck import Context, audit_step

logger = logging.getLogger(__name__)

DEFAULT_FUEL = int(os.getenv("LCT_FUEL", "1000000"))
TRACE_TERM_CAP = int(os.getenv("LCT_TRACE_TERM_CAP", "20000"))


@dataclass(frozen=True)
class Audit:
    """Typed-mode auditing: every step is checked against this context."""
    context: Context
    flavor: SystemFlavor = SystemFlavor.LC2_STAR


@dataclass(frozen=True)
class TraceStep:
    index: int
    site: RedexSite
    before: Optional[ProofTerm]
    after: Optional[ProofTerm]


@dataclass
class Trace:
    initial: ProofTerm
    steps: List[TraceStep] = field(default_factory=list)
    status: TraceStatus = TraceStatus.NORMALIZED
    fuel_used: int = 0
    final: Optional[ProofTerm] = None

    @property
    def kinds(self) -> List[str]:
        return [str(step.site.kind) for step in self.steps]

    def __len__(self) -> int:
        return len(self.steps)


def normalize(term: ProofTerm, fuel: Optional[int] = None, audit: Optional[Audit] = None,
              term_cap: Optional[int] = None) -> Trace:
    """Reduce to head normal form, recording every step."""
    fuel = DEFAULT_FUEL if fuel is None else fuel
    term_cap = TRACE_TERM_CAP if term_cap is None else term_cap
    trace = Trace(initial=term)
    current = term
    while True:
        if trace.fuel_used >= fuel:
            if leftmost_head_redex(current) is not None:
                trace.status = TraceStatus.FUEL_EXHAUSTED
                logger.warning(f"Fuel exhausted after {trace.fuel_used} step(s)")
            break
        step = head_step(current)
        if step is None:
            break
        site, reduct = step
        if audit is not None:
            audit_step(audit.context, current, reduct, audit.flavor)
        trace.fuel_used += 1
        keep = term_size(current) <= term_cap and term_size(reduct) <= term_cap
        trace.steps.append(TraceStep(trace.fuel_used, site,
                                     current if keep else None, reduct if keep else None))
        current = reduct
    trace.final = current
    if trace.status is TraceStatus.NORMALIZED:
        logger.info(f"✓ Normalized in {trace.fuel_used} step(s)")
    return trace


# ---------------------------------------------------------------------------
# Head normal forms

def is_value(term: ProofTerm) -> bool:
    return isinstance(term, VALUE_TYPES)


def is_neutral(term: ProofTerm) -> bool:
    return not is_value(term) and not isinstance(term, Par)


@dataclass(frozen=True)
class NeutralVarHead:
    var: str
    stack: Stack


@dataclass(frozen=True)
class StuckAbort:
    arg: ProofTerm
    stack: Stack


@dataclass(frozen=True)
class BareCommVar:
    var: str


@dataclass(frozen=True)
class Value:
    kind: str


@dataclass
class HnfReport:
    shapes: List[Tuple[TermPath, object]] = field(default_factory=list)
    violations: List[Tuple[TermPath, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _classify_process(process: ProofTerm, binders: List[str]):
    head, frames = unwind(process)
    if isinstance(head, Var):
        if head.name not in binders:
            return NeutralVarHead(head.name, frames)
        if not frames:
            return BareCommVar(head.name)
        return f"communication variable {head.name} applied to a stack"
    if isinstance(head, Abort) and frames:
        if isinstance(frames[0], Arg):
            return StuckAbort(frames[0].term, frames[1:])
        return "abort applied to a non-argument frame"
    if not frames and is_value(head):
        return Value(type(head).__name__)
    return f"{type(head).__name__} applied to {type(frames[0]).__name__ if frames else 'nothing'}"


def classify_hnf(term: ProofTerm) -> HnfReport:
    """Shape of every elementary process of a head normal form."""
    if leftmost_head_redex(term) is not None:
        raise NotNormal("term still has a head redex")
    report = HnfReport()
    for path, process in decompose(term).leaves:
        shape = _classify_process(process, spine_binders(term, path))
        if isinstance(shape, str):
            report.violations.append((path, shape))
        else:
            report.shapes.append((path, shape))
    return report

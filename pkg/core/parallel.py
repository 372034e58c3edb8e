"""Branch-parallel normalization of `u par a v`.

Each branch is reduced in its own phase while the other branch stays
read-only; the phases run concurrently in worker threads and their results
are merged under the original binder.

A `par` nested inside a branch is reduced by that branch's phase loop like any
other head redex of the branch, not by a recursive parallel run; when the
phase ends the branch has no head redex left, nested `par` included.
"""

import asyncio
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from core.errors import FuelExhausted, ShapeViolation, SubjectReductionViolation
from core.herbrand import as_herbrand_form
from core.models import RedexKind, TraceStatus
from core.normalizer import DEFAULT_FUEL, Audit, normalize
from core.printer import print_indterm
from core.reduction import contract, leftmost_head_redex
from core.simulation import site_side
from core.syntax import Par, ProofTerm, alpha_equal
from core.typecheck import typecheck

logger = logging.getLogger(__name__)


@dataclass
class ParallelResult:
    term: ProofTerm
    left_steps: int = 0
    right_steps: int = 0
    left_kinds: List[str] = field(default_factory=list)
    right_kinds: List[str] = field(default_factory=list)

    @property
    def steps(self) -> int:
        return self.left_steps + self.right_steps


def _swap(par: Par) -> Par:
    return Par(par.var, par.right_ann, par.left_ann, par.right, par.left)


def run_left_phase(par: Par, fuel: Optional[int] = None) -> Tuple[ProofTerm, List[str]]:
    """Reduce the left branch of `par` until its head redexes are exhausted."""
    fuel = DEFAULT_FUEL if fuel is None else fuel
    current = par
    kinds: List[str] = []
    while True:
        site = leftmost_head_redex(current)
        if site is None or site_side(site) != 0:
            return current.left, kinds
        if len(kinds) >= fuel:
            raise FuelExhausted(f"phase ran out of fuel after {len(kinds)} step(s)")
        current = contract(current, site)
        kinds.append(str(site.kind))


_MIRRORED = {str(RedexKind.D_LEFT): str(RedexKind.D_RIGHT), str(RedexKind.D_RIGHT): str(RedexKind.D_LEFT)}


def run_right_phase(par: Par, fuel: Optional[int] = None) -> Tuple[ProofTerm, List[str]]:
    # runs on the swapped par, so communication kinds come back mirrored
    right, kinds = run_left_phase(_swap(par), fuel)
    return right, [_MIRRORED.get(kind, kind) for kind in kinds]


async def parallel_normalize_async(term: ProofTerm, fuel: Optional[int] = None,
                                   audit: Optional[Audit] = None) -> ParallelResult:
    if not isinstance(term, Par):
        trace = normalize(term, fuel, audit)
        if trace.status is TraceStatus.FUEL_EXHAUSTED:
            raise FuelExhausted(f"ran out of fuel after {trace.fuel_used} step(s)")
        return ParallelResult(trace.final, trace.fuel_used, 0, trace.kinds, [])

    (left, left_kinds), (right, right_kinds) = await asyncio.gather(
        asyncio.to_thread(run_left_phase, term, fuel),
        asyncio.to_thread(run_right_phase, term, fuel),
    )
    merged = Par(term.var, term.left_ann, term.right_ann, left, right)
    if leftmost_head_redex(merged) is not None:
        logger.error("✗ Merged phases are not in head normal form")
        raise ShapeViolation("merged branches still have a head redex")
    if audit is not None:
        before = typecheck(audit.context, term, audit.flavor)
        after = typecheck(audit.context, merged, audit.flavor)
        if not alpha_equal(before, after):
            raise SubjectReductionViolation("parallel normal form changed the type")
    logger.info(f"✓ Parallel phases finished ({len(left_kinds)} left, {len(right_kinds)} right)")
    return ParallelResult(merged, len(left_kinds), len(right_kinds), left_kinds, right_kinds)


def parallel_normalize(term: ProofTerm, fuel: Optional[int] = None,
                       audit: Optional[Audit] = None) -> ParallelResult:
    return asyncio.run(parallel_normalize_async(term, fuel, audit))


@dataclass(frozen=True)
class StrategyComparison:
    sequential_witnesses: Tuple[str, ...]
    parallel_witnesses: Tuple[str, ...]

    @property
    def same_multiset(self) -> bool:
        return Counter(self.sequential_witnesses) == Counter(self.parallel_witnesses)


def compare_strategies(term: ProofTerm, fuel: Optional[int] = None,
                       audit: Optional[Audit] = None) -> Optional[StrategyComparison]:
    """Herbrand witnesses found by head and by parallel normalization, if both are Herbrand forms."""
    sequential = normalize(term, fuel, audit).final
    parallel = parallel_normalize(term, fuel, audit).term
    left, right = as_herbrand_form(sequential), as_herbrand_form(parallel)
    if left is None or right is None:
        return None
    return StrategyComparison(tuple(print_indterm(m) for m in left.witnesses),
                              tuple(print_indterm(m) for m in right.witnesses))

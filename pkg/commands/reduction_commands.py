"""Normalization and simulation commands for the LC kernel CLI."""

import logging

from core.errors import FuelExhausted, ShapeViolation
from core.models import ExitCode, Strategy, SystemFlavor, TraceStatus, get_all_flavors, get_all_strategies
from core.normalizer import Audit, classify_hnf, normalize
from core.parallel import parallel_normalize_async
from core.printer import print_term
from core.records import render_trace, serialize_record
from core.simulation import check_simulation
from core.typecheck import Context, elaborate

logger = logging.getLogger(__name__)


class ReductionCommands:
    """Commands that run the reduction engine."""

    def __init__(self, cli):
        self.cli = cli

    def register(self, subparsers):
        reduce = subparsers.add_parser("reduce", help="head-normalize a .lct file")
        reduce.add_argument("file")
        reduce.add_argument("--trace", action="store_true", help="print one JSON record per step")
        reduce.add_argument("--fuel", type=int, default=None)
        reduce.add_argument("--untyped", action="store_true", help="skip elaboration and auditing")
        reduce.add_argument("--strategy", choices=get_all_strategies(), default=str(Strategy.HEAD))
        reduce.add_argument("--flavor", choices=get_all_flavors(), default=str(SystemFlavor.LC2_STAR))

        simulate = subparsers.add_parser("simulate", help="check the abort simulation of a par term")
        simulate.add_argument("file")
        simulate.add_argument("--max-steps", type=int, default=None)
        simulate.add_argument("--fuel", type=int, default=None)
        return {"reduce": self.reduce, "simulate": self.simulate}

    async def reduce(self, args) -> ExitCode:
        lct = self.cli.load_file(args.file)
        term, audit = lct.term, None
        if not args.untyped:
            flavor = SystemFlavor(args.flavor)
            ctx = Context(lct.hyps)
            term = elaborate(ctx, term, flavor, lct.goal)
            audit = Audit(ctx, flavor)

        if args.strategy == Strategy.PARALLEL:
            return await self._reduce_parallel(term, args, audit)

        trace = normalize(term, args.fuel, audit)
        if trace.status is TraceStatus.FUEL_EXHAUSTED and audit is not None:
            raise FuelExhausted(f"typed term did not normalize within {trace.fuel_used} step(s)")
        if audit is not None:
            report = classify_hnf(trace.final)
            if not report.ok:
                raise ShapeViolation(f"normal form has malformed processes: {report.violations}")

        if args.trace:
            print(render_trace(trace), end="")
        else:
            print(print_term(trace.final))
        return ExitCode.OK

    async def _reduce_parallel(self, term, args, audit) -> ExitCode:
        result = await parallel_normalize_async(term, args.fuel, audit)
        if args.trace:
            for phase, kinds in (("left", result.left_kinds), ("right", result.right_kinds)):
                for index, kind in enumerate(kinds, start=1):
                    print(serialize_record({"phase": phase, "step": index, "kind": kind}))
            print(serialize_record({
                "status": str(TraceStatus.NORMALIZED),
                "steps": result.steps,
                "left_steps": result.left_steps,
                "right_steps": result.right_steps,
                "term": print_term(result.term),
            }))
        else:
            print(print_term(result.term))
        return ExitCode.OK

    async def simulate(self, args) -> ExitCode:
        """Replay each head step of a typed par term through its abort simulation."""
        lct = self.cli.load_file(args.file)
        term = elaborate(Context(lct.hyps), lct.term, SystemFlavor.LC2_STAR, lct.goal)
        report = check_simulation(term, args.max_steps, args.fuel)
        for step in report.steps:
            print(serialize_record({
                "step": step.index,
                "kind": str(step.site.kind),
                "side": "left" if step.side == 0 else "right",
                "simulated_steps": step.simulated_steps,
                "abort_firings": step.abort_firings,
            }))
        status = "normalized" if report.subject_normalized else "stopped"
        print(serialize_record({"status": status, "steps": len(report.steps)}))
        return ExitCode.OK


def setup(cli):
    """Set up the reduction commands."""
    cli.add_command_group(ReductionCommands(cli))

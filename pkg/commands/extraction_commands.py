"""Herbrand witness extraction command for the LC kernel CLI."""

import logging

from core.herbrand import herbrand_pipeline
from core.models import ExitCode, SystemFlavor, get_all_flavors
from core.printer import print_formula, print_indterm, print_term
from core.records import serialize_record

logger = logging.getLogger(__name__)


class ExtractionCommands:
    """Commands that read witnesses off normal forms."""

    def __init__(self, cli):
        self.cli = cli

    def register(self, subparsers):
        herbrand = subparsers.add_parser("herbrand", help="extract Herbrand witnesses of a closed existential proof")
        herbrand.add_argument("file")
        herbrand.add_argument("--flavor", choices=get_all_flavors(), default=str(SystemFlavor.LC2))
        herbrand.add_argument("--fuel", type=int, default=None)
        return {"herbrand": self.herbrand}

    async def herbrand(self, args) -> ExitCode:
        lct = self.cli.load_file(args.file)
        result = herbrand_pipeline(lct.term, SystemFlavor(args.flavor), lct.goal, fuel=args.fuel)
        logger.info(f"✓ {result.describe()}")
        print(serialize_record({
            "witnesses": [print_indterm(m) for m in result.witnesses],
            "disjunction": print_formula(result.disjunction),
            "proof": print_term(result.proof),
            "steps": result.source_trace.fuel_used if result.source_trace is not None else 0,
        }))
        return ExitCode.OK


def setup(cli):
    """Set up the extraction commands."""
    cli.add_command_group(ExtractionCommands(cli))

"""Type checking commands for the LC kernel CLI."""

import logging

from core.models import ExitCode, SystemFlavor, get_all_flavors
from core.printer import print_formula
from core.typecheck import Context, typecheck

logger = logging.getLogger(__name__)


class TypingCommands:
    """Commands that only type check."""

    def __init__(self, cli):
        self.cli = cli

    def register(self, subparsers):
        check = subparsers.add_parser("check", help="type check a .lct file and print its formula")
        check.add_argument("file")
        check.add_argument("--flavor", choices=get_all_flavors(), default=str(SystemFlavor.LC))
        return {"check": self.check}

    async def check(self, args) -> ExitCode:
        """Print the type of the file's term under its hypotheses."""
        lct = self.cli.load_file(args.file)
        formula = typecheck(Context(lct.hyps), lct.term, SystemFlavor(args.flavor), lct.goal)
        logger.info(f"✓ {args.file} checks in {args.flavor}")
        print(print_formula(formula))
        return ExitCode.OK


def setup(cli):
    """Set up the typing commands."""
    cli.add_command_group(TypingCommands(cli))

"""
LC Proof-Term Kernel - Main Entry Point

Command-line front end for type checking, normalizing and analysing proof
terms of first- and second-order Dummett logic. Command groups live in the
`commands` package and are loaded as extensions at startup.
"""

import argparse
import asyncio
import importlib
import logging
import os
import sys
from typing import Dict, List, Optional

from dotenv import load_dotenv

# Load environment variables before the kernel reads its defaults
load_dotenv()

from core import errors  # noqa: E402
from core.models import ExitCode  # noqa: E402
from core.parser import LctFile, load_signature, parse_file  # noqa: E402
from core.syntax import Signature  # noqa: E402

# Configuration
LOG_LEVEL = os.getenv("LCT_LOG_LEVEL", "WARNING").upper()
LOG_FILE = os.getenv("LCT_LOG_FILE")
DEFAULT_SIGNATURE_PATH = os.getenv("LCT_SIGNATURE")

# Set up logging
_handlers: List[logging.Handler] = [logging.StreamHandler()]
if LOG_FILE:
    _handlers.append(logging.FileHandler(LOG_FILE))
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL, logging.WARNING),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=_handlers
)
logger = logging.getLogger(__name__)


def exit_code_for(error: BaseException) -> ExitCode:
    """Map a kernel exception to the process exit code."""
    if isinstance(error, errors.PreconditionError):
        return ExitCode.PRECONDITION
    if isinstance(error, (errors.KernelBug, errors.FuelExhausted)):
        return ExitCode.KERNEL_BUG
    if isinstance(error, errors.KernelError):
        return ExitCode.USER_ERROR
    return ExitCode.KERNEL_BUG


class KernelCli:
    """Argument parser plus the command groups registered on it."""

    def __init__(self):
        self.parser = argparse.ArgumentParser(
            prog="lct",
            description="Proof-term kernel for Dummett logic LC"
        )
        self.parser.add_argument(
            "--signature",
            default=DEFAULT_SIGNATURE_PATH,
            help="signature file (const/func/pred declarations); defaults to c0 c1 c2, f/1, P/1 Q/1 R/2"
        )
        self.parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
        self.subparsers = self.parser.add_subparsers(dest="command", required=True)
        self.handlers: Dict[str, object] = {}
        self.groups: List[object] = []
        self.signature: Signature = load_signature(None)
        self.initial_extensions = [
            'commands.typing_commands',
            'commands.reduction_commands',
            'commands.extraction_commands'
        ]

    def load_commands(self):
        """Load all command groups."""
        for extension in self.initial_extensions:
            try:
                module = importlib.import_module(extension)
                module.setup(self)
                logger.debug(f"✓ Loaded {extension}")
            except Exception as e:
                logger.error(f"✗ Failed to load {extension}: {e}")
                raise

    def add_command_group(self, group):
        """Register a command group's subcommands."""
        self.groups.append(group)
        for name, handler in group.register(self.subparsers).items():
            self.handlers[name] = handler

    def load_file(self, path) -> LctFile:
        return parse_file(path, self.signature)

    async def run(self, argv: Optional[List[str]] = None) -> int:
        args = self.parser.parse_args(argv)
        if args.verbose:
            logging.getLogger().setLevel(logging.DEBUG)
        try:
            self.signature = load_signature(args.signature)
            return int(await self.handlers[args.command](args))
        except errors.KernelError as e:
            code = exit_code_for(e)
            if code is ExitCode.KERNEL_BUG:
                logger.error(f"✗ Kernel bug in {args.command}: {e}")
            print(f"✗ {type(e).__name__}: {e}", file=sys.stderr)
            return int(code)
        except Exception as e:
            logger.exception(f"✗ Unexpected error in {args.command}: {e}")
            print(f"✗ {type(e).__name__}: {e}", file=sys.stderr)
            return int(ExitCode.KERNEL_BUG)


async def main(argv: Optional[List[str]] = None) -> int:
    """Main function to run the CLI."""
    cli = KernelCli()
    cli.load_commands()
    return await cli.run(argv)


if __name__ == "__main__":
    sys.exit(asyncio.run(main()))

from enum import IntEnum

try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        """Backport of enum.StrEnum (Python 3.11+)."""

        def __str__(self) -> str:
            return str.__str__(self)

        def __format__(self, format_spec: str) -> str:
            return str.__format__(str(self), format_spec)

        @staticmethod
        def _generate_next_value_(name, start, count, last_values):
            return name.lower()


class SystemFlavor(StrEnum):
    """Type systems the checker accepts."""
    LC = "lc"
    LC_STAR = "lcstar"
    LC2 = "lc2"
    LC2_STAR = "lc2star"

    @property
    def admits_abort(self) -> bool:
        return self in (SystemFlavor.LC_STAR, SystemFlavor.LC2_STAR)

    @property
    def admits_second_order(self) -> bool:
        return self in (SystemFlavor.LC2, SystemFlavor.LC2_STAR)


class RedexKind(StrEnum):
    """Reduction rules."""
    BETA = "Beta"
    IND_BETA = "IndBeta"
    PROJ_PAIR = "ProjPair"
    CASE_INJ = "CaseInj"
    EXCASE_WITNESS = "ExCaseWitness"
    PERM_ARG = "PermArg"
    PERM_PROJ = "PermProj"
    PERM_CASE = "PermCase"
    PERM_EXCASE = "PermExCase"
    D_LEFT = "DLeft"
    D_RIGHT = "DRight"
    ABORT_RULE = "AbortRule"
    PRED_BETA = "PredBeta"

    @property
    def is_permutation(self) -> bool:
        return self in PERMUTATION_KINDS

    @property
    def is_communication(self) -> bool:
        return self in (RedexKind.D_LEFT, RedexKind.D_RIGHT)


PERMUTATION_KINDS = frozenset({
    RedexKind.PERM_ARG,
    RedexKind.PERM_PROJ,
    RedexKind.PERM_CASE,
    RedexKind.PERM_EXCASE,
})


class TraceStatus(StrEnum):
    """How a normalization run ended."""
    NORMALIZED = "normalized"
    FUEL_EXHAUSTED = "fuel_exhausted"


class Strategy(StrEnum):
    """Reduction strategies offered by the CLI."""
    HEAD = "head"
    PARALLEL = "parallel"


class ExitCode(IntEnum):
    """Process exit codes."""
    OK = 0
    USER_ERROR = 1
    USAGE = 2
    PRECONDITION = 3
    KERNEL_BUG = 4


# Default signature: name -> arity
DEFAULT_CONSTANTS = ("c0", "c1", "c2")
DEFAULT_FUNCTIONS = {"f": 1}
DEFAULT_PREDICATES = {"P": 1, "Q": 1, "R": 2}

# Names that cannot be declared
RESERVED_NAMES = frozenset({
    "False", "fun", "Fun", "par", "wit", "inj0", "inj1", "efq", "abort",
    "case", "of", "excase", "forall", "exists", "forall2", "exists2",
    "hyp", "goal",
})


def get_all_flavors() -> list:
    """Get list of all flavor names."""
    return [flavor.value for flavor in SystemFlavor]


def get_all_strategies() -> list:
    """Get list of all strategy names."""
    return [strategy.value for strategy in Strategy]

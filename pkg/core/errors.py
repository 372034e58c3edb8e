"""Custom exception classes for the LC proof-term kernel."""

from typing import Optional


class KernelError(Exception):
    """Base exception for kernel errors."""
    pass


class TermSyntaxError(KernelError):
    """Concrete syntax could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class SignatureError(KernelError):
    """Bad signature declaration or use of an undeclared symbol."""
    pass


class TypingError(KernelError):
    """The term has no type in the requested system."""
    pass


class UnboundVariable(TypingError):
    """Proof variable not bound by the context."""
    pass


class AnnotationMismatch(TypingError):
    """Occurrence annotation differs from the context binding."""
    pass


class MissingAnnotation(TypingError):
    """A binder lacks the annotation needed to infer a type."""
    pass


class TypeMismatch(TypingError):
    """A rule was applied to a term of the wrong shape."""
    pass


class EigenvariableViolation(TypingError):
    """An eigenvariable occurs free where it must not."""
    pass


class ParHypothesesNotDual(TypingError):
    """Par hypotheses are not A -> B and B -> A."""
    pass


class AbortNotAdmitted(TypingError):
    """Abort used outside a star flavor."""
    pass


class SecondOrderNotAdmitted(TypingError):
    """Second-order construct used outside a second-order flavor."""
    pass


class EfqNonAtomicTarget(TypingError):
    """Ex falso target is not atomic."""
    pass


class ReductionError(KernelError):
    """A contraction could not be applied."""
    pass


class SiteStale(ReductionError):
    """The redex site no longer names a redex of that kind."""
    pass


class AbortTypeMismatch(ReductionError):
    """Abort argument does not have the type of the abort process."""
    pass


class NotNormal(KernelError):
    """Term still has a head redex."""
    pass


class FuelExhausted(KernelError):
    """Reduction ran out of fuel."""
    pass


class PreconditionError(KernelError):
    """Input does not meet the precondition of an operation."""
    pass


class PreconditionFreeVars(PreconditionError):
    """Term has free proof variables."""
    pass


class PreconditionAbort(PreconditionError):
    """Term contains abort."""
    pass


class TypeNotExistential(PreconditionError):
    """Term type is not an existential formula."""
    pass


class KernelBug(KernelError):
    """An internal property that must always hold was broken."""
    pass


class SubjectReductionViolation(KernelBug):
    """A reduction step changed the type or added free variables."""

    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


class SimulationFailure(KernelBug):
    """Simulated reduction did not reach the expected term."""
    pass


class ShapeViolation(KernelBug):
    """A normal form does not have head-normal shape."""
    pass

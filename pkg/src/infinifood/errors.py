"""Exception types shared across the package."""


class InfinifoodError(Exception):
    """Base class for every error raised by this package."""


class DomainError(InfinifoodError, ValueError):
    """An argument lies outside its mathematically meaningful range."""


class BasisError(InfinifoodError, ValueError):
    """Operands disagree about the ingredient basis, or an ingredient is unknown."""


class NonConvergence(InfinifoodError, RuntimeError):
    """An iterative solve exhausted its iteration budget before reaching tolerance.

    The ``partial`` attribute carries whatever trace was accumulated, so a
    caller can inspect how far the iteration got.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class SolveError(InfinifoodError, RuntimeError):
    """The stationary linear system could not be solved."""


class QuiverError(InfinifoodError, ValueError):
    """A quiver violates a structural invariant."""


class UnknownVertexError(InfinifoodError, LookupError):
    """A food name does not exist in the quiver."""


class QuiverParseError(InfinifoodError, ValueError):
    """A .quiver source failed to parse; carries every diagnostic collected."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = "\n".join(str(d) for d in self.diagnostics)
        super().__init__(f"{len(self.diagnostics)} parse diagnostic(s):\n{lines}")

"""Exception types shared across the package."""


class ScrewTrajError(Exception):
    """Base class for all errors raised by this package."""


class MixedKind(ScrewTrajError):
    """Arithmetic or windowing attempted on screws of different kinds."""


class ZeroAlpha(ScrewTrajError):
    """Screw-axis direction requested for a screw with (near-)zero alpha."""


class NonPositiveStep(ScrewTrajError):
    """Progress step must be strictly positive."""


class ParseError(ScrewTrajError):
    """Malformed trajectory file; carries the offending line number."""

    def __init__(self, path, line, message):
        super().__init__(f"{path}:{line}: {message}")
        self.path = str(path)
        self.line = line


class NonMonotoneProgress(ScrewTrajError):
    """Progress values are not strictly increasing."""


class TooShort(ScrewTrajError):
    """Trajectory has fewer than three screw samples."""


class InvalidSpec(ScrewTrajError):
    """Synthetic-trajectory specification is inconsistent."""


class DegenerateColumns(ScrewTrajError):
    """First two matrix columns are linearly dependent."""


class Singular(ScrewTrajError):
    """Diagonal pivot too small to solve for the anchor point."""


class IrregularWindow(ScrewTrajError):
    """Window fails the regularity conditions of the exact decomposition."""

    def __init__(self, regularity):
        super().__init__(f"window is not regular: {regularity}")
        self.regularity = regularity


class DegenerateU2(ScrewTrajError):
    """Lower block is too degenerate to triangularize."""


class IrregularPair(ScrewTrajError):
    """Screw pair has zero or parallel direction vectors; axis geometry undefined."""

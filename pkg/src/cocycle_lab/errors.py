"""Exception types raised by the library.

Everything derives from CocycleLabError (a ValueError) so the CLI can catch a
single type and turn it into an error banner plus exit code 1.
"""


class CocycleLabError(ValueError):
    """Base class for invalid inputs to cocycle-lab operations."""


class DimensionError(CocycleLabError):
    """Operands have different sizes."""


class InvalidPermutationError(CocycleLabError):
    """Targets are not a bijection or signs are not +-1."""


class UnknownGeneratorError(CocycleLabError):
    """A word references a generator name the representation does not define."""


class NotAnOrbitError(CocycleLabError):
    """An index set is not a single orbit of the representation."""


class DisconnectedGraphError(CocycleLabError):
    """A spectral quantity was requested on a disconnected graph."""


class GraphTooSmallError(CocycleLabError):
    """The graph has fewer than two vertices."""


class ExhaustiveCapError(CocycleLabError):
    """Brute-force search refused: the graph exceeds the exhaustive cap."""


class ExponentError(CocycleLabError):
    """An exponent lies outside its admissible range."""


class NegativeCoordinateError(CocycleLabError):
    """The power map received a negative coordinate."""


class ArcTooLargeError(CocycleLabError):
    """A marked subset exceeds half of its component (or is empty)."""


class ComponentTooLargeError(CocycleLabError):
    """A component exceeds the bound D of the bounded-components case."""


class ClassSpecError(CocycleLabError):
    """A bounded-family class spec is not transitive, too large or duplicated."""


class RepresentationFormatError(CocycleLabError):
    """Malformed representation, vector or cocycle JSON."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        location = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{location}")
        self.line = line
        self.column = column

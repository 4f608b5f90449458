"""Exception types shared across the package."""


class PairGuessError(Exception):
    """Base class for all errors raised by pairguess."""


class DomainError(PairGuessError, ValueError):
    """An argument lies outside the domain an operation accepts."""


class NormalizationError(DomainError):
    """Amplitudes do not describe a unit vector."""


class DimensionMismatch(PairGuessError, ValueError):
    """A strategy and a game specification disagree on d."""


class ResourceLimit(PairGuessError):
    """A requested exhaustive search is larger than the configured guard."""


class InvalidRecord(PairGuessError, ValueError):
    """A round record is inconsistent with the game or could not be parsed.

    ``location`` is the 1-based record number (or file line number) of the
    offending entry, when known.
    """

    def __init__(self, message: str, location: int | None = None, unit: str = "record"):
        self.location = location
        if location is not None:
            message = f"{unit} {location}: {message}"
        super().__init__(message)


class InsufficientData(PairGuessError, ValueError):
    """Not enough rounds to evaluate a statistic.

    ``empty_cells`` lists the (i, j) cells that had no rounds.
    """

    def __init__(self, message: str, empty_cells=()):
        self.empty_cells = list(empty_cells)
        super().__init__(message)

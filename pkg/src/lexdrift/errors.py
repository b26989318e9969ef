"""Exception types shared across the toolkit."""


class LexDriftError(Exception):
    """Base class for all toolkit errors."""


class LexError(LexDriftError):
    """Source text cannot be lexed (unterminated string/comment, illegal char)."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at char {position})")
        self.position = position


class ConfigError(LexDriftError):
    """A configuration file references unknown names or is malformed."""


class StyleError(LexDriftError):
    """An identifier does not match the casing style it was claimed to have."""


class FormatError(LexDriftError):
    """A tokenizer definition file could not be parsed."""


class ValidationError(LexDriftError):
    """A tokenizer definition parsed but violates its invariants.

    Carries the full list of violations so callers see every breach at once.
    """

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


class EncodingError(LexDriftError):
    """Text contains characters outside a non-byte-level tokenizer's alphabet."""


class ContractError(LexDriftError):
    """An edit-event log violates the classifier's input contract."""


class RangeError(LexDriftError, ValueError):
    """A numeric argument is outside its documented range."""


class MissingLabelError(LexDriftError):
    """Correctness labels are absent for some required (sample, assignment) pairs."""

    def __init__(self, missing: list[tuple[str, str]]):
        pairs = ", ".join(f"{s}@{a}" for s, a in missing)
        super().__init__(f"missing labels: {pairs}")
        self.missing = list(missing)


class EmptySubsetError(LexDriftError):
    """Accuracy was requested over an empty sample subset."""


class PartitionGapError(LexDriftError):
    """A fragment-label partition does not cover every affected sample."""

    def __init__(self, uncovered: list[str]):
        super().__init__(f"partition does not cover samples: {', '.join(uncovered)}")
        self.uncovered = list(uncovered)


class IoError(LexDriftError):
    """A corpus file could not be read."""

"""Exception types shared across the toolkit."""


class SlpkitError(Exception):
    """Base class for all toolkit errors."""


class EmptyString(SlpkitError):
    """An operation received or would produce an empty string."""


class SymbolOutOfRange(SlpkitError):
    """A symbol index is not smaller than the alphabet size."""


class LengthOverflow(SlpkitError):
    """A decompressed length would exceed the 63-bit limit."""


class TooLarge(SlpkitError):
    """An input exceeds a configured decompression or search cap."""


class IndexOutOfRange(SlpkitError):
    """A position is outside the decompressed string."""


class ParseError(SlpkitError):
    """A text-format file is malformed.

    Carries the 1-based line number when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ForwardReference(ParseError):
    """A rule refers to a rule index not defined yet."""


class AlphabetMismatch(SlpkitError):
    """Two inputs that must share an alphabet do not."""


class PatternLongerThanText(SlpkitError):
    """The pattern is longer than the text."""


class UnequalLength(SlpkitError):
    """Two strings that must have equal length do not."""


class NonBinaryAlphabet(SlpkitError):
    """An operation requires bit-strings."""


class UndeclaredSymbol(SlpkitError):
    """The text uses a symbol the grammar or pairing does not declare."""


class TypeMismatch(SlpkitError):
    """Gadget inputs do not all share the required (length, alphabet) type."""


class InvalidAlignment(SlpkitError):
    """An alignment is not strictly increasing on both sides."""


class WeightBoundViolated(SlpkitError):
    """A guarded payload exceeds its declared weight budget."""


class NoHalfClique(SlpkitError):
    """The source graph has no clique of the required half size."""

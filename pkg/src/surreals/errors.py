"""Exception hierarchy shared by all modules.

Everything raised on bad *values* derives from DomainError so the CLI can
map it to exit code 1; parse problems derive from ParseError (exit code 2).
"""


class SurrealError(Exception):
    pass


class DomainError(SurrealError):
    pass


class ParseError(SurrealError):
    def __init__(self, message, line=1, column=0):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class UnknownIdentifier(ParseError):
    pass


# ordinal
class NotEpsilon(DomainError):
    pass


class IndexBeyondGamma(DomainError):
    pass


# signseq
class UptoBeyondLength(DomainError):
    pass


class NotSeparated(DomainError):
    pass


class BirthdayBoundExceeded(DomainError):
    pass


class NonDyadicCoefficient(DomainError):
    pass


class UnsupportedExponent(DomainError):
    pass


# core
class DivisionByZero(DomainError):
    pass


class PowOfNonPositiveLeading(DomainError):
    pass


class ExpOfIrrationalConstant(DomainError):
    pass


class NonPositiveArgument(DomainError):
    pass


class UnsupportedIndex(DomainError):
    pass


class NonRepresentableConstant(DomainError):
    """Constant arithmetic left the rational + rational-multiples-of-log-p ring."""


class TruncatedInput(DomainError):
    pass


# gonshor
class OutsideFragment(DomainError):
    pass


# rank
class InfiniteTree(DomainError):
    pass


class ZeroArgument(DomainError):
    pass


class NoLogAtomicLeaf(DomainError):
    pass


# calculus
class NotLogAtomic(DomainError):
    pass


class SearchBoundExceeded(DomainError):
    pass


class MaxIterExceeded(DomainError):
    pass


class ContractionViolated(DomainError):
    pass

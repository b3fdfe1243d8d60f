"""Shared exception hierarchy.

Every error raised by this package derives from RelbettiError so callers can
catch one base class. Concrete classes live here (leaf module, no imports)
and are re-exported by the module that raises them.
"""


class RelbettiError(Exception):
    pass


# linear algebra
class NoSolution(RelbettiError):
    pass


class ComplexInvalid(RelbettiError):
    pass


# posets
class CyclicCovers(RelbettiError):
    pass


class RedundantCover(RelbettiError):
    pass


class SizeBoundExceeded(RelbettiError):
    pass


class NotSemilattice(RelbettiError):
    pass


# modules
class FunctorialityViolation(RelbettiError):
    pass


class PosetMismatch(RelbettiError):
    pass


class InvalidSpread(RelbettiError):
    pass


# homological algebra
class MeetHypothesisFailed(RelbettiError):
    pass


class NotSubfunctor(RelbettiError):
    pass


# relative machinery
class NotThin(RelbettiError):
    pass


class HypothesisNotVerified(RelbettiError):
    pass


class DmaxReached(RelbettiError):
    pass

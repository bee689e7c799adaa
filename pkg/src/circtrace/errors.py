"""Exception types raised across the package."""


class CircTraceError(Exception):
    """Base class for all package errors."""


class NoOnes(CircTraceError, ValueError):
    pass


class ModulusMismatch(CircTraceError, ValueError):
    pass


class NotADivisor(CircTraceError, ValueError):
    pass


class InvalidProbability(CircTraceError, ValueError):
    pass


class TooLarge(CircTraceError, ValueError):
    pass


class DomainError(CircTraceError, ValueError):
    pass


class ZeroDenominator(CircTraceError, ZeroDivisionError):
    pass


class InvalidInstance(CircTraceError, ValueError):
    pass


class NoUsableTrace(CircTraceError, RuntimeError):
    """No trace with all k ones appeared among the constant-size draw."""


class NoUsefulTraces(CircTraceError, RuntimeError):
    """Every drawn trace failed the usefulness filter or alignment."""


class NoDistinguishingStat(CircTraceError, RuntimeError):
    """Internal invariant failure: cyclically distinct inputs with no separating statistic."""


class NoAlignment(CircTraceError, ValueError):
    pass

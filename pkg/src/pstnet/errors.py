from __future__ import annotations


class PSTError(Exception):
    """Base class for every error raised by pstnet."""


class ArrayValidationError(PSTError, ValueError):
    pass


class InfeasibleError(PSTError):
    """The scheme cannot support antipodal perfect state transfer."""


class NotAntipodal(InfeasibleError):
    def __init__(self, kappa_d: int):
        self.kappa_d = kappa_d
        super().__init__(f"last stratum has {kappa_d} vertices; transfer needs kappa_d = 1")


class ModulusMismatch(InfeasibleError):
    def __init__(self, k: int, modulus: float, table=None):
        self.k = k
        self.modulus = modulus
        self.table = table
        super().__init__(f"|P_d(x_{k})| = {modulus:.15g}, expected 1")


class NumericalInconsistency(PSTError, ArithmeticError):
    """Two independent computations of the same quantity disagree."""


class GraphError(PSTError, ValueError):
    pass


class EdgeListParseError(GraphError):
    def __init__(self, lineno: int, line: str, reason: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {reason}: {line!r}")


class Disconnected(GraphError):
    pass


class NotDistanceRegular(GraphError):
    def __init__(self, base: int, vertex: int, distance: int, observed, expected):
        self.base = base
        self.vertex = vertex
        self.distance = distance
        self.observed = observed
        self.expected = expected
        super().__init__(
            f"base {base}, vertex {vertex} at distance {distance}: "
            f"(c, a, b) = {observed}, expected {expected}"
        )


class DimensionMismatch(PSTError, ValueError):
    pass


class OracleLimitExceeded(PSTError, ValueError):
    pass


class UnknownName(PSTError, KeyError):
    def __str__(self):
        return f"unknown catalog name {self.args[0]!r}"

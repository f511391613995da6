"""Intersection arrays of P-polynomial schemes and their exact polynomial systems.

Indexing follows the usual convention for distance-regular graphs: ``b`` holds
``b_0 .. b_{d-1}`` and ``c`` holds ``c_1 .. c_d``.  The boundary values
``c_0 = 0`` and ``b_d = 0`` are never stored; use :meth:`IntersectionArray.b_at`
and :meth:`IntersectionArray.c_at`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ArrayValidationError
from .polynomial import Poly, evaluate_polynomial

__all__ = [
    "IntersectionArray",
    "SchemeParameters",
    "PolynomialSystem",
    "validate_intersection_array",
    "parse_intersection_array",
    "derive_parameters",
    "build_polynomials",
    "evaluate_polynomial",
]


@dataclass(frozen=True)
class IntersectionArray:
    b: tuple[int, ...]
    c: tuple[int, ...]

    @property
    def d(self) -> int:
        return len(self.b)

    @property
    def kappa(self) -> int:
        return self.b[0]

    def b_at(self, i: int) -> int:
        return 0 if i == self.d else self.b[i]

    def c_at(self, i: int) -> int:
        return 0 if i == 0 else self.c[i - 1]

    def a_at(self, i: int) -> int:
        if i == 0:
            return 0
        return self.kappa - self.b_at(i) - self.c_at(i)

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.b)) + ";" + ",".join(map(str, self.c)) + "}"

    def compact(self) -> str:
        return ",".join(map(str, self.b)) + ";" + ",".join(map(str, self.c))


def validate_intersection_array(b, c) -> IntersectionArray:
    b = [int(x) for x in b]
    c = [int(x) for x in c]
    if not b or not c:
        raise ArrayValidationError("intersection array needs at least one b and one c entry")
    if len(b) != len(c):
        raise ArrayValidationError(f"len(b) = {len(b)} differs from len(c) = {len(c)}")
    if any(x < 1 for x in b + c):
        raise ArrayValidationError("entries b_0..b_{d-1}, c_1..c_d must all be >= 1")
    if c[0] != 1:
        raise ArrayValidationError(f"c_1 = 1 is required, got c_1 = {c[0]}")
    arr = IntersectionArray(tuple(b), tuple(c))
    kappa = arr.kappa
    for i in range(1, arr.d + 1):
        a_i = kappa - arr.b_at(i) - arr.c_at(i)
        if a_i < 0:
            raise ArrayValidationError(
                f"a_{i} = kappa - b_{i} - c_{i} = {kappa} - {arr.b_at(i)} - {arr.c_at(i)} = {a_i} < 0"
            )
    k_prev = 1
    for i in range(1, arr.d + 1):
        num = k_prev * arr.b_at(i - 1)
        if num % arr.c_at(i):
            raise ArrayValidationError(
                f"kappa_{i} = kappa_{i-1} b_{i-1} / c_{i} = {num}/{arr.c_at(i)} is not an integer"
            )
        k_prev = num // arr.c_at(i)
    return arr


_ARRAY_RE = re.compile(r"^\{?([\d,]+);([\d,]+)\}?$")


def parse_intersection_array(text: str) -> IntersectionArray:
    """Parse ``"b0,b1,...;c1,c2,..."`` (braces and whitespace tolerated)."""
    compact = re.sub(r"\s+", "", text)
    m = _ARRAY_RE.match(compact)
    if not m:
        raise ArrayValidationError(f"cannot parse intersection array {text!r}; expected 'b0,b1,...;c1,c2,...'")
    try:
        b = [int(t) for t in m.group(1).split(",")]
        c = [int(t) for t in m.group(2).split(",")]
    except ValueError:
        raise ArrayValidationError(f"empty entry in intersection array {text!r}") from None
    return validate_intersection_array(b, c)


@dataclass(frozen=True)
class SchemeParameters:
    array: IntersectionArray
    kappa: tuple[int, ...]
    a: tuple[int, ...]
    alpha: tuple[int, ...]
    omega: tuple[int, ...]
    v: int

    @property
    def d(self) -> int:
        return self.array.d

    @property
    def antipodal(self) -> bool:
        return self.kappa[-1] == 1


def derive_parameters(arr: IntersectionArray) -> SchemeParameters:
    d = arr.d
    kappa = [1]
    for i in range(1, d + 1):
        kappa.append(kappa[-1] * arr.b_at(i - 1) // arr.c_at(i))
    a = tuple(arr.a_at(i) for i in range(d + 1))
    omega = tuple(arr.b_at(k - 1) * arr.c_at(k) for k in range(1, d + 1))
    return SchemeParameters(
        array=arr,
        kappa=tuple(kappa),
        a=a,
        alpha=a,
        omega=omega,
        v=sum(kappa),
    )


@dataclass(frozen=True)
class PolynomialSystem:
    """Distance polynomials ``P``, monic orthogonal ``Q`` (through degree d+1),
    and the associated ``Q1`` polynomials (through degree d)."""

    P: tuple[Poly, ...]
    Q: tuple[Poly, ...]
    Q1: tuple[Poly, ...]


def build_polynomials(params: SchemeParameters) -> PolynomialSystem:
    arr = params.array
    d = arr.d
    x = Poly.x()

    P = [Poly.const(1), x]
    for i in range(1, d):
        nxt = ((x - arr.a_at(i)) * P[i] - P[i - 1] * arr.b_at(i - 1)) / arr.c_at(i + 1)
        P.append(nxt)

    alpha, omega = params.alpha, params.omega
    Q = [Poly.const(1), x - alpha[0]]
    for k in range(1, d + 1):
        Q.append((x - alpha[k]) * Q[k] - Q[k - 1] * omega[k - 1])

    # associated polynomials: coefficients shifted by one step
    Q1 = [Poly.const(1)]
    if d >= 1:
        Q1.append(x - alpha[1])
    for k in range(1, d):
        Q1.append((x - alpha[k + 1]) * Q1[k] - Q1[k - 1] * omega[k])

    return PolynomialSystem(P=tuple(P[: d + 1]), Q=tuple(Q), Q1=tuple(Q1))


def leading_coefficient_expected(arr: IntersectionArray, i: int) -> Fraction:
    prod = 1
    for j in range(1, i + 1):
        prod *= arr.c_at(j)
    return Fraction(1, prod)

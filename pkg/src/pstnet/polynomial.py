"""Univariate polynomials with exact rational coefficients."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    raise TypeError(f"exact coefficient required, got {type(value).__name__}")


class Poly:
    """Immutable polynomial; ``coeffs[j]`` multiplies ``x**j``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = (0,)):
        cs = [_frac(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs:
            cs = [Fraction(0)]
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def from_descending(cls, coeffs: Sequence, denominator=1) -> "Poly":
        """Build from highest-power-first integer coefficients over a common denominator."""
        den = _frac(denominator)
        return cls([_frac(c) / den for c in reversed(coeffs)])

    @property
    def degree(self) -> int:
        if len(self.coeffs) == 1 and self.coeffs[0] == 0:
            return -1
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1]

    def monic(self) -> "Poly":
        return self / self.leading

    def derivative(self) -> "Poly":
        return Poly([j * c for j, c in enumerate(self.coeffs)][1:] or [0])

    def __call__(self, x):
        # Horner; exact for int/Fraction input, float/complex otherwise
        if isinstance(x, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def _coerce(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly.const(other)

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return Poly(p + q for p, q in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            f = _frac(other)
            return Poly(c * f for c in self.coeffs)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, p in enumerate(self.coeffs):
            if p:
                for j, q in enumerate(other.coeffs):
                    out[i + j] += p * q
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        f = _frac(scalar)
        return Poly(c / f for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == (Fraction(other),)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        terms = []
        for j in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[j]
            if c == 0 and self.degree >= 0:
                continue
            mag = abs(c)
            if j == 0:
                body = str(mag)
            else:
                body = "" if mag == 1 else f"{mag}*"
                body += "x" if j == 1 else f"x^{j}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def evaluate_polynomial(poly: Poly, x):
    """Evaluate ``poly`` at ``x``: exactly for int/Fraction, in floating point otherwise."""
    return poly(x)

"""Exact arithmetic on y^2 = x^3 - 147x + 610 and the birational maps to the
quartic y^2 = 3(x^4 + 2x^3 - x^2 - 2x + 3)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .singular import quartic_value


@dataclass(frozen=True)
class CurvePoint:
    x: Fraction | None = None
    y: Fraction | None = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    @classmethod
    def affine(cls, x, y) -> "CurvePoint":
        return cls(Fraction(x), Fraction(y))

    def __str__(self) -> str:
        return "O" if self.is_infinity else f"({self.x}, {self.y})"


INFINITY = CurvePoint()


@dataclass(frozen=True)
class EllipticCurve:
    a: int = -147
    b: int = 610

    @property
    def disc_cubic(self) -> int:
        return -4 * self.a**3 - 27 * self.b**2

    @property
    def discriminant(self) -> int:
        return 16 * self.disc_cubic

    @property
    def j_invariant(self) -> Fraction:
        return Fraction(1728 * 4 * self.a**3, -self.disc_cubic)

    def on_curve(self, P: CurvePoint) -> bool:
        if P.is_infinity:
            return True
        return P.y * P.y == P.x**3 + self.a * P.x + self.b

    def _check(self, P):
        if not self.on_curve(P):
            raise ValueError(f"point {P} is not on the curve")

    def negate(self, P: CurvePoint) -> CurvePoint:
        self._check(P)
        return P if P.is_infinity else CurvePoint(P.x, -P.y)

    def add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        self._check(P)
        self._check(Q)
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        if P.x == Q.x:
            if P.y + Q.y == 0:
                return INFINITY
            lam = (3 * P.x * P.x + self.a) / (2 * P.y)
        else:
            lam = (Q.y - P.y) / (Q.x - P.x)
        x3 = lam * lam - P.x - Q.x
        return CurvePoint(x3, lam * (P.x - x3) - P.y)

    def scalar_mul(self, n: int, P: CurvePoint) -> CurvePoint:
        self._check(P)
        if n < 0:
            return self.scalar_mul(-n, self.negate(P))
        out, base = INFINITY, P
        while n:
            if n & 1:
                out = self.add(out, base)
            base = self.add(base, base)
            n >>= 1
        return out

    def combination(self, n1: int, n2: int, torsion: int = 0) -> CurvePoint:
        """n1 R1 + n2 R2 + torsion T."""
        P = self.add(self.scalar_mul(n1, R1), self.scalar_mul(n2, R2))
        return self.add(P, T) if torsion % 2 else P


E = EllipticCurve()
R1 = CurvePoint.affine(9, 4)
R2 = CurvePoint.affine(11, 18)
T = CurvePoint.affine(5, 0)


def on_curve(P: CurvePoint) -> bool:
    return E.on_curve(P)


def add(P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    return E.add(P, Q)


def negate(P: CurvePoint) -> CurvePoint:
    return E.negate(P)


def scalar_mul(n: int, P: CurvePoint) -> CurvePoint:
    return E.scalar_mul(n, P)


def birational_X(variant: int, P: CurvePoint) -> tuple:
    """Image of a curve point on the quartic, checked exactly."""
    if P.is_infinity:
        raise ValueError("the point at infinity has no affine image")
    E._check(P)
    x, y = P.x, P.y
    if variant == 1:
        den = 17 + y - x
        if den == 0:
            raise ZeroDivisionError(f"X1 undefined at {P}")
        out = (-(-7 * x + 35 + y) / den, 3 * (-2 * x**3 + y * y + 9 * x * x + 28 * y + 169) / den**2)
    elif variant == 2:
        den = -17 + x + y
        if den == 0:
            raise ZeroDivisionError(f"X2 undefined at {P}")
        out = (-(7 * x - 35 + y) / den, 3 * (-2 * x**3 + y * y + 9 * x * x - 28 * y + 169) / den**2)
    else:
        raise ValueError("variant must be 1 or 2")
    u, v = out
    if 3 * (u**4 + 2 * u**3 - u**2 - 2 * u + 3) != v * v:
        raise ArithmeticError(f"X{variant}{P} = {out} misses the quartic")
    return out


def on_quartic(x, y) -> bool:
    x, y = Fraction(x), Fraction(y)
    return 3 * (x**4 + 2 * x**3 - x**2 - 2 * x + 3) == y * y


__all__ = ["CurvePoint", "EllipticCurve", "INFINITY", "E", "R1", "R2", "T", "on_curve", "add",
           "negate", "scalar_mul", "birational_X", "on_quartic", "quartic_value"]

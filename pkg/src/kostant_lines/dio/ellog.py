"""Periods, elliptic logarithm and the linear-form constants for
y^2 = x^3 - 147x + 610.

The elliptic logarithm integral from u0 to infinity is evaluated after the
change of variables u = u0 + t^2/(1-t)^2 on [0, 1), which turns the integrand
into 2t / sqrt(prod_i (a_i (1-t)^2 + t^2)) with a_i = u0 - e_i. That is bounded
on the closed interval, including the square-root endpoint u0 = e1.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from scipy.integrate import quad

from .curve import INFINITY, R1, R2, CurvePoint
from ..liealg import VerificationError

SQRT57 = math.sqrt(57)
E1 = (-5 + 3 * SQRT57) / 2
E2 = 5.0
E3 = (-5 - 3 * SQRT57) / 2
ROOTS = (E1, E2, E3)

X0 = 6 * math.sqrt(3) - 1
R0 = (X0, 6 * (3 - math.sqrt(3)))

QUAD_EPSABS = 1e-12


def q(u: float) -> float:
    return u**3 - 147 * u + 610


def agm(a: complex, b: complex, tol: float = 1e-16) -> complex:
    """Arithmetic-geometric mean, taking the root nearer to the mean at each step."""
    a, b = complex(a), complex(b)
    for _ in range(100):
        m = (a + b) / 2
        g = cmath.sqrt(a * b)
        if abs(m - g) > abs(m + g):
            g = -g
        a, b = m, g
        if abs(a - b) <= tol * abs(a):
            break
    return (a + b) / 2


def elliptic_log_integral(u0: float) -> float:
    """int_{u0}^infinity du / sqrt(q(u)) for u0 >= e1."""
    if u0 < E1:
        raise ValueError(f"u = {u0} lies below e1 = {E1}; the point is on the bounded oval")
    a = [u0 - e for e in ROOTS]

    def integrand(t):
        c = (1 - t) ** 2
        t2 = t * t
        if a[0] == 0.0:
            return 2.0 / math.sqrt((a[1] * c + t2) * (a[2] * c + t2))
        return 2 * t / math.sqrt((a[0] * c + t2) * (a[1] * c + t2) * (a[2] * c + t2))

    val, _ = quad(integrand, 0.0, 1.0, epsabs=QUAD_EPSABS, epsrel=1e-13, limit=400)
    return val


@dataclass(frozen=True)
class Periods:
    omega: float
    omega1: float
    omega2: complex
    omega_quad: float


def real_periods() -> Periods:
    """(omega, omega1, omega2) from the AGM, with omega cross-checked by quadrature."""
    omega1 = (2 * math.pi / agm(math.sqrt(E1 - E3), math.sqrt(E1 - E2))).real
    omega2 = 2 * math.pi / agm(math.sqrt(E1 - E3), 1j * math.sqrt(E2 - E3))
    omega = omega1 / 2
    half_loop = elliptic_log_integral(E1)
    if abs(half_loop - omega) > 1e-9 * omega:
        raise VerificationError(f"AGM period {omega!r} disagrees with quadrature {half_loop!r}")
    return Periods(omega, omega1, omega2, half_loop)


def _coords(P):
    if isinstance(P, CurvePoint):
        if P.is_infinity:
            return None
        return float(P.x), float(P.y)
    return float(P[0]), float(P[1])


def elliptic_log(P, periods: Periods | None = None) -> float:
    """phi(P) in [0, 1) for P on the unbounded real component.

    Normalized by the full real period omega1 (the loop integral), so that phi
    is an isomorphism from the unbounded component onto R/Z.
    """
    c = _coords(P) if P is not INFINITY else None
    if c is None:
        return 0.0
    u, v = c
    periods = periods or real_periods()
    z = elliptic_log_integral(u) / periods.omega1
    if v < 0:
        z = -z
    return z % 1.0


def circle_distance(a: float, b: float) -> float:
    """Distance between a and b in R/Z."""
    r = (a - b) % 1.0
    return min(r, 1.0 - r)


REFERENCE = {
    "omega": 0.9810124566,
    "omega1": 1.962095763,
    "omega2": complex(1.177161295, -1.128478211),
    "tau": complex(0.1849446113, 1.171782212),
    "abs_tau": 1.186287512,
    "h_inf_j": 9.018703988,
    "c11": 3.285408400,
    "h_E": 13.06175526,
    "c4": 2.043497279e110,
    "c6": 15.95212702,
    "M": 6.123e59,
    "omega_phi_R1": 0.8918445254,
    "omega_phi_R2": 0.6925571056,
    "omega_phi_R0": 0.8235278325,
}

C1_REGULATOR = 0.303868  # smallest regulator eigenvalue bound, taken as data
A_CHOICE = 13.5
E_CHOICE = 9.0


@dataclass(frozen=True)
class EllogConstants:
    omega: float
    omega1: float
    omega2: complex
    tau: complex
    e1: float
    e2: float
    e3: float
    j_E: tuple
    h_inf_j: float
    h_delta: float
    h_E: float
    c1: float
    c4: float
    c5: float
    c6: float
    c9: float
    c10: float
    c11: float
    A: tuple
    A_lower: tuple
    E_param: float
    E_upper: float
    M: float
    omega_phi: dict = field(default_factory=dict)


def _solve_M(c1, c4, c5, c6, c9, c10, c11):
    rhs_const = math.log(c9) + c10 / 2 + c11

    def gap(x):
        # x = log M
        return c1 * math.exp(2 * x) - rhs_const - c4 * (x + c5) * (math.log(x) + c6) ** 5

    lo, hi = math.log(10.0), math.log(1e80)
    if not (gap(lo) < 0 < gap(hi)):
        raise ArithmeticError("bound equation is not bracketed on [10, 1e80]")
    for _ in range(300):
        mid = (lo + hi) / 2
        if gap(mid) < 0:
            lo = mid
        else:
            hi = mid
    return math.exp(hi)


def ellog_constants() -> EllogConstants:
    per = real_periods()
    z = -per.omega2 / per.omega1
    tau = z / (z + 1)
    delta = 16 * 2659392
    h_inf_j = math.log(470596 / 57)
    h_delta = math.log(delta)
    h_E = math.log(470596)
    c11 = (h_delta + h_inf_j) / 12 + 1.07
    c4 = 2.9e30 * 2**10 * 4.0**32 * 5**80.3 * math.log(E_CHOICE) ** -9 * 13.5**4
    c5 = math.log(2 * E_CHOICE)
    c6 = math.log(2 * E_CHOICE) + h_E
    c9 = 1 / math.sqrt(3)
    c10 = 3.0
    omega_phi = {
        "R0": elliptic_log_integral(R0[0]),
        "R1": elliptic_log_integral(float(R1.x)),
        "R2": elliptic_log_integral(float(R2.x)),
    }
    w, w1, im = per.omega, abs(per.omega1), tau.imag
    A_lower = [max(h_E, 3 * math.pi * w**2 / (w1**2 * im))]
    bounds = [w1 / w * math.sqrt(2 * A_CHOICE * im / (3 * math.pi))]
    for key in ("R0", "R1", "R2"):
        phi = omega_phi[key] / w
        A_lower.append(max(h_E, 3 * math.pi * w**2 * phi**2 / (w1**2 * im)))
        bounds.append(w1 / omega_phi[key] * math.sqrt(2 * A_CHOICE * im / (3 * math.pi)))
    E_upper = math.e * min(bounds)
    if not math.e <= E_CHOICE <= E_upper:
        raise VerificationError(f"E = {E_CHOICE} outside [e, {E_upper}]")
    M = _solve_M(C1_REGULATOR, c4, c5, c6, c9, c10, c11)
    return EllogConstants(
        omega=per.omega, omega1=per.omega1, omega2=per.omega2, tau=tau,
        e1=E1, e2=E2, e3=E3, j_E=(470596, 57), h_inf_j=h_inf_j, h_delta=h_delta, h_E=h_E,
        c1=C1_REGULATOR, c4=c4, c5=c5, c6=c6, c9=c9, c10=c10, c11=c11,
        A=(A_CHOICE,) * 4, A_lower=tuple(A_lower), E_param=E_CHOICE, E_upper=E_upper,
        M=M, omega_phi=omega_phi,
    )

"""Diophantine side: singular Kostant lines, the sigma_3 quartic and its
elliptic curve."""
from .singular import (SingularTriple, family_members, q3, quartic_solutions, quartic_value,
                       recover_d, sigma3_poly, sigma3_zeros, singular_scan)
from .curve import (E, INFINITY, R1, R2, T, CurvePoint, EllipticCurve, add, birational_X,
                    negate, on_curve, on_quartic, scalar_mul)
from .ellog import (REFERENCE, EllogConstants, Periods, agm, circle_distance, elliptic_log,
                    elliptic_log_integral, ellog_constants, real_periods)

__all__ = [
    "SingularTriple", "family_members", "q3", "quartic_solutions", "quartic_value", "recover_d",
    "sigma3_poly", "sigma3_zeros", "singular_scan", "E", "INFINITY", "R1", "R2", "T",
    "CurvePoint", "EllipticCurve", "add", "birational_X", "negate", "on_curve", "on_quartic",
    "scalar_mul", "REFERENCE", "EllogConstants", "Periods", "agm", "circle_distance", "elliptic_log",
    "elliptic_log_integral", "ellog_constants", "real_periods",
]

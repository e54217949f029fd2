"""Gauss hypergeometric series, Eisenstein series, Klein's j and its inverse.

Everything is evaluated from truncated series with computed tail bounds.
j is assembled as Q(q)^3 / Delta(q) from the exact-integer coefficient
tables in qseries; its tau-derivative comes from the term-wise
differentiated division series.  The inverse of J(t) = j(it) on x >= 1728
is the ratio of two sextic hypergeometric values.
"""
from __future__ import annotations

import cmath
import math
import warnings

import numpy as np

from .errors import AsymptoticFallbackWarning, DomainError, PrecisionLossError
from .poly import AnalyticFunction
from .qseries import standard_series

TWO_PI = 2.0 * math.pi
SEXTIC_A, SEXTIC_B = 1.0 / 6.0, 5.0 / 6.0


def _is_nonpositive_integer(c: float) -> bool:
    return c <= 0 and abs(c - round(c)) < 1e-12


def _hyp_series(a: float, b: float, c: float, d: float, z,
                rtol: float = 1e-14, max_terms: int = 200000):
    """sum_m w_m with w_0 = 1 and w_{m+1}/w_m = z (a+m)(b+m)/((c+m)(d+m)).

    Requires c, d > 0.  Returns (value, max absolute tail bound); the tail
    bound comes from the geometric majorant ratio
    |z| (n+|a|)(n+|b|)/n^2 >= |w_{k+1}/w_k| for all k >= n.
    """
    z = np.asarray(z, dtype=complex)
    amax = float(np.abs(z).max()) if z.size else 0.0
    term = np.ones_like(z)
    acc = np.ones_like(z)
    aa, ab = abs(a), abs(b)
    n = 0
    tail = np.inf
    while n < max_terms:
        term = term * (z * ((a + n) * (b + n) / ((c + n) * (d + n))))
        acc = acc + term
        n += 1
        r = amax * (n + aa) * (n + ab) / (n * n)
        if r < 1.0:
            tail = np.abs(term) * (r / (1.0 - r))
            if np.all(tail <= rtol * (np.abs(acc) + 1e-290)):
                return acc, float(np.max(tail))
    achieved = float(np.max(tail / (np.abs(acc) + 1e-290)))
    raise PrecisionLossError("hypergeometric series did not converge", achieved)


def hyp2f1(a: float, b: float, c: float, z, rtol: float = 1e-14,
           delta: float = 1e-3, max_terms: int = 200000):
    """2F1(a, b, c; z) for |z| <= 1 - delta, c not a non-positive integer."""
    val, _ = hyp2f1_with_bound(a, b, c, z, rtol, delta, max_terms)
    return val


def hyp2f1_with_bound(a: float, b: float, c: float, z, rtol: float = 1e-14,
                      delta: float = 1e-3, max_terms: int = 200000):
    if _is_nonpositive_integer(c):
        raise DomainError(f"c={c} is a non-positive integer")
    zs = np.asarray(z, dtype=complex)
    amax = float(np.abs(zs).max()) if zs.size else 0.0
    if amax > 1.0 - delta:
        raise PrecisionLossError(
            f"|z|={amax:.6f} exceeds 1-delta={1.0 - delta:.6f}",
            amax**max_terms / max(1.0 - amax, 1e-300))
    val, bound = _hyp_series(a, b, c, 1.0, zs, rtol, max_terms)
    if np.isscalar(z) or np.ndim(z) == 0:
        return complex(val), bound
    return val, bound


def hyp2f1_prime(a: float, b: float, c: float, z, rtol: float = 1e-14,
                 delta: float = 1e-3, max_terms: int = 200000):
    """d/dz 2F1(a, b, c; z) by term-wise differentiation of the series."""
    if _is_nonpositive_integer(c):
        raise DomainError(f"c={c} is a non-positive integer")
    zs = np.asarray(z, dtype=complex)
    amax = float(np.abs(zs).max()) if zs.size else 0.0
    if amax > 1.0 - delta:
        raise PrecisionLossError(
            f"|z|={amax:.6f} exceeds 1-delta={1.0 - delta:.6f}", np.inf)
    val, _ = _hyp_series(a + 1.0, b + 1.0, c + 1.0, 1.0, zs, rtol, max_terms)
    out = (a * b / c) * val
    if np.isscalar(z) or np.ndim(z) == 0:
        return complex(out)
    return out


def _cm1_times_F_cminus(a: float, b: float, c: float, z):
    """(c - 1) * 2F1(a, b, c - 1; z), as one series that is smooth in c.

    (c-1)_n = (c-1) (c)_{n-1} turns the pole of F(c-) at c = 1 into the
    finite series (c-1) + a b z * sum_m (a+1)_m (b+1)_m z^m/((c)_m (2)_m).
    """
    val, _ = _hyp_series(a + 1.0, b + 1.0, c, 2.0, z)
    return (c - 1.0) + a * b * np.asarray(z, dtype=complex) * val


def gauss_relation_residuals(a: float, b: float, c: float, z: float):
    """Absolute residuals of the two contiguous relations for z dF/dz.

    First: z F' = (c-1)(F(c-) - F).  Second:
    z F' = z [(c-a)(c-b) F(c+) + c(a+b-c) F] / (c(1-z)).
    The first is evaluated through (c-1) F(c-) as a single series, so
    c = 1 needs no special casing.
    """
    if not 0.0 < z < 1.0:
        raise DomainError(f"z={z} outside (0, 1)")
    F = hyp2f1(a, b, c, z)
    lhs = z * hyp2f1_prime(a, b, c, z)
    rhs1 = _cm1_times_F_cminus(a, b, c, z) - (c - 1.0) * F
    Fcp = hyp2f1(a, b, c + 1.0, z)
    rhs2 = z * ((c - a) * (c - b) * Fcp + c * (a + b - c) * F) / (c * (1.0 - z))
    return abs(lhs - complex(rhs1)), abs(lhs - rhs2)


def _lambert_sum(q: complex, power: int, rtol: float = 1e-15,
                 max_terms: int = 40000) -> complex:
    """sum_{n>=1} n^power q^n / (1 - q^n) with a geometric tail cutoff."""
    x = abs(q)
    acc = 0.0 + 0.0j
    qn = 1.0 + 0.0j
    n = 0
    while n < max_terms:
        n += 1
        qn = qn * q
        acc += n**power * qn / (1.0 - qn)
        r = x * ((n + 2) / (n + 1)) ** power
        if r < 1.0:
            head = (n + 1) ** power * x ** (n + 1) / (1.0 - x)
            if head / (1.0 - r) <= rtol * max(abs(acc), 1.0):
                return acc
    raise PrecisionLossError("Lambert series did not converge", x)


def eisenstein_Q(q) -> complex:
    """Q(q) = 1 + 240 sum sigma_3(n) q^n via the Lambert form, |q| <= 0.95."""
    q = complex(q)
    if abs(q) > 0.95:
        raise DomainError(f"|q|={abs(q):.4f} > 0.95")
    return 1.0 + 240.0 * _lambert_sum(q, 3)


def eisenstein_R(q) -> complex:
    """R(q) = 1 - 504 sum sigma_5(n) q^n via the Lambert form, |q| <= 0.95."""
    q = complex(q)
    if abs(q) > 0.95:
        raise DomainError(f"|q|={abs(q):.4f} > 0.95")
    return 1.0 - 504.0 * _lambert_sum(q, 5)


_MIN_IM_TAU = 0.5 - 1e-12


def klein_j(tau):
    """j(tau) = Q(q)^3 / Delta(q), q = e^{2 pi i tau}, for Im tau >= 1/2.

    Delta is evaluated from its own exact-integer series, so the
    cancellation in Q^3 - R^2 never happens in floating point.
    """
    taus = np.asarray(tau, dtype=complex)
    if np.any(taus.imag < _MIN_IM_TAU):
        raise DomainError("klein_j requires Im tau >= 0.5")
    tables = standard_series()
    q = np.exp(2j * math.pi * taus)
    Qv = tables["Q"].eval(q)
    delta = q * np.polynomial.polynomial.polyval(
        q, tables["delta_over_q"].coefficients)
    if np.any(np.abs(delta) < 1e-280):
        raise DomainError("Delta(q) vanished to working precision")
    out = Qv**3 / delta
    if np.isscalar(tau) or np.ndim(tau) == 0:
        return complex(out)
    return out


def klein_j_derivative(tau):
    """dj/dtau = 2 pi i * (q dj/dq), from the differentiated j series."""
    taus = np.asarray(tau, dtype=complex)
    if np.any(taus.imag < _MIN_IM_TAU):
        raise DomainError("klein_j_derivative requires Im tau >= 0.5")
    tables = standard_series()
    q = np.exp(2j * math.pi * taus)
    out = 2j * math.pi * tables["j_qdq"].eval(q)
    if np.isscalar(tau) or np.ndim(tau) == 0:
        return complex(out)
    return out


def j_analytic() -> AnalyticFunction:
    return AnalyticFunction(klein_j, klein_j_derivative, name="j")


def j_inverse(x: float, large_threshold: float = 1e6) -> float:
    """J^{-1}(x) for x >= 1728, where J(t) = j(it) on t >= 1.

    Uses the hypergeometric ratio
    2F1(1/6,5/6,1, 1/2 + y/2) / 2F1(1/6,5/6,1, 1/2 - y/2) with
    y = sqrt(1 - 1728/x).  Beyond large_threshold the argument crowds the
    unit circle, so the value is instead found by Newton iteration on the
    q-expansion of j; that route is flagged with a warning.
    """
    x = float(x)
    if x < 1728.0:
        raise DomainError(f"j_inverse requires x >= 1728, got {x}")
    if x == 1728.0:
        return 1.0
    if x > large_threshold:
        warnings.warn(
            "j_inverse falling back to q-expansion Newton iteration for "
            f"x={x:.3e} > {large_threshold:.3e}", AsymptoticFallbackWarning)
        t = math.log(x - 744.0) / TWO_PI
        for _ in range(6):
            Jt = klein_j(1j * t).real
            dJt = (1j * klein_j_derivative(1j * t)).real
            step = (Jt - x) / dJt
            t -= step
            if abs(step) < 1e-14 * t:
                break
        return t
    y = math.sqrt(1.0 - 1728.0 / x)
    num = hyp2f1(SEXTIC_A, SEXTIC_B, 1.0, 0.5 + 0.5 * y,
                 delta=2.5e-4, max_terms=400000)
    den = hyp2f1(SEXTIC_A, SEXTIC_B, 1.0, 0.5 - 0.5 * y,
                 delta=2.5e-4, max_terms=400000)
    return num.real / den.real


def ramanujan_inversion_residual(x: float) -> float:
    """|x(1-x) - (Q(q)^3 - R(q)^2)/(4 Q(q)^3)| for the sextic nome
    q = exp(-2 pi F(1-x)/F(x)), F = 2F1(1/6, 5/6, 1; .)."""
    x = float(x)
    if not 1e-3 <= x <= 1.0 - 1e-3:
        raise DomainError(f"x={x} outside [1e-3, 1 - 1e-3]")
    Fx = hyp2f1(SEXTIC_A, SEXTIC_B, 1.0, x).real
    F1mx = hyp2f1(SEXTIC_A, SEXTIC_B, 1.0, 1.0 - x).real
    q = math.exp(-TWO_PI * F1mx / Fx)
    Qv = eisenstein_Q(q).real
    Rv = eisenstein_R(q).real
    return abs(x * (1.0 - x) - (Qv**3 - Rv**2) / (4.0 * Qv**3))

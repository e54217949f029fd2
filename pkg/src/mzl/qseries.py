"""Truncated q-expansions with computed tail bounds.

The integer coefficient tables for the weight-4 series Q = 1 + 240*sum
sigma_3(n) q^n, the weight-6 series R = 1 - 504*sum sigma_5(n) q^n, the
discriminant series Delta = (Q^3 - R^2)/1728 and the series for
j = Q^3/Delta (starting at q^-1) are all derived here by exact integer
arithmetic: a divisor-power sieve, integer convolution, and exact series
division.  No coefficient is taken on trust; the test suite rebuilds the
tables independently at higher truncation and compares.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import exp, pi, sqrt
from typing import Callable

import numpy as np

DEFAULT_ORDER = 72


def sigma_powers(N: int, k: int) -> list[int]:
    """[sigma_k(1), ..., sigma_k(N)] by sieving divisors."""
    out = [0] * (N + 1)
    for d in range(1, N + 1):
        dk = d**k
        for m in range(d, N + 1, d):
            out[m] += dk
    return out[1:]


def series_mul(a: list[int], b: list[int], N: int) -> list[int]:
    out = [0] * (N + 1)
    for i, ai in enumerate(a[: N + 1]):
        if ai == 0:
            continue
        for j, bj in enumerate(b[: N + 1 - i]):
            out[i + j] += ai * bj
    return out


def series_inverse(a: list[int], N: int) -> list[int]:
    """Inverse of a series with a[0] == 1, exact integers."""
    if a[0] != 1:
        raise ValueError("series_inverse requires unit leading coefficient")
    inv = [1] + [0] * N
    for n in range(1, N + 1):
        acc = 0
        for k in range(1, min(n, len(a) - 1) + 1):
            acc += a[k] * inv[n - k]
        inv[n] = -acc
    return inv


@lru_cache(maxsize=8)
def integer_tables(N: int = DEFAULT_ORDER):
    """(Q, R, Delta/q, j) coefficient lists through order N, exact ints.

    Q and R are ascending in q from q^0; Delta/q from q^0 (leading 1);
    j from q^-1 (leading 1, then 744, 196884, ...).
    """
    M = N + 2
    s3 = sigma_powers(M, 3)
    s5 = sigma_powers(M, 5)
    q_c = [1] + [240 * v for v in s3]
    r_c = [1] + [-504 * v for v in s5]
    q3 = series_mul(series_mul(q_c, q_c, M), q_c, M)
    r2 = series_mul(r_c, r_c, M)
    diff = [x - y for x, y in zip(q3, r2)]
    if diff[0] != 0 or any(v % 1728 for v in diff):
        raise AssertionError("Q^3 - R^2 must be divisible by 1728*q")
    delta_over_q = [v // 1728 for v in diff[1:]]
    if delta_over_q[0] != 1:
        raise AssertionError("Delta/q must have leading coefficient 1")
    j_c = series_mul(q3, series_inverse(delta_over_q, M), M)
    return (q_c[: N + 1], r_c[: N + 1], delta_over_q[: N + 1], j_c[: N + 1])


def _geometric_tail(first_abs: float, ratio: float) -> float:
    if ratio >= 1.0:
        return float("inf")
    return first_abs / (1.0 - ratio)


@dataclass(frozen=True)
class QSeries:
    """A truncated power series in q plus a bound on the discarded tail.

    coefficients run from q^n0 upward; tail_bound_fn maps |q| to a bound
    on |full series - truncated sum|, valid for |q| <= 0.9 * radius.
    """

    n0: int
    coefficients: np.ndarray
    truncation_order: int
    tail_bound_fn: Callable[[float], float]
    radius: float
    label: str = ""

    def eval(self, q):
        q = np.asarray(q, dtype=complex)
        val = np.polynomial.polynomial.polyval(q, self.coefficients)
        if self.n0 != 0:
            val = val * q**self.n0
        return val

    def eval_with_bound(self, q):
        q = np.asarray(q, dtype=complex)
        amax = float(np.abs(q).max())
        return self.eval(q), self.tail_bound_fn(amax)


def _power_majorant_tail(N: int, const: float, power: int) -> Callable[[float], float]:
    # |a_n| <= const * n^power; ratio of consecutive majorant terms at
    # n >= N+1 is x * ((n+1)/n)^power <= x * ((N+2)/(N+1))^power
    def tail(x: float) -> float:
        first = const * (N + 1) ** power * x ** (N + 1)
        ratio = x * ((N + 2) / (N + 1)) ** power
        return _geometric_tail(first, ratio)

    return tail


def _j_majorant_tail(N: int, rate: float = 4.0 * pi) -> Callable[[float], float]:
    # |c_n| <= e^{rate sqrt(n)}; consecutive ratio <= x * e^{rate/(2 sqrt(n))}
    def tail(x: float) -> float:
        n1 = N + 1
        first = exp(rate * sqrt(n1)) * x**n1
        ratio = x * exp(rate / (2.0 * sqrt(n1)))
        return _geometric_tail(first, ratio)

    return tail


@lru_cache(maxsize=8)
def standard_series(N: int = DEFAULT_ORDER) -> dict[str, QSeries]:
    """QSeries bundle: Q, R, Delta/q, j, and the q d/dq of j."""
    q_c, r_c, t_c, j_c = integer_tables(N)
    asf = lambda xs: np.array([float(v) for v in xs])
    # zeta(3) < 1.2021, zeta(5) < 1.0370 bound sigma_k(n) <= zeta(k) n^k
    out = {
        "Q": QSeries(0, asf(q_c), N, _power_majorant_tail(N, 240 * 1.2021, 3),
                     0.95, "Q"),
        "R": QSeries(0, asf(r_c), N, _power_majorant_tail(N, 504 * 1.0370, 5),
                     0.95, "R"),
        # |tau(k+1)| <= (k+1)^6.5 <= 1.5 k^7 in the tail region k > 60
        "delta_over_q": QSeries(0, asf(t_c), N,
                                _power_majorant_tail(N, 1.5, 7), 0.5,
                                "Delta/q"),
        "j": QSeries(-1, asf(j_c), N - 1, _j_majorant_tail(N), exp(-pi), "j"),
        # q d/dq of the j series: coefficient n * c_n from n = -1;
        # n e^{4 pi sqrt n} <= e^{(4 pi + 1) sqrt n} covers the factor n
        "j_qdq": QSeries(-1, asf([(n - 1) * c for n, c in enumerate(j_c)]),
                         N - 1, _j_majorant_tail(N, 4.0 * pi + 1.0),
                         exp(-pi), "q dj/dq"),
    }
    return out

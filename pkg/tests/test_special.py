"""Hypergeometric, Eisenstein, and Klein-j evaluation."""
from __future__ import annotations

import math

import numpy as np
import pytest

import oracles
from mzl.errors import (AsymptoticFallbackWarning, DomainError,
                        PrecisionLossError)
from mzl.special import (eisenstein_Q, eisenstein_R, gauss_relation_residuals,
                         hyp2f1, hyp2f1_prime, hyp2f1_with_bound, j_inverse,
                         klein_j, klein_j_derivative,
                         ramanujan_inversion_residual)


# ---------------------------------------------------------------------------
# 2F1


def test_hyp2f1_at_zero_is_one():
    assert hyp2f1(0.3, 1.7, 0.9, 0.0) == 1.0


def test_hyp2f1_log_closed_form():
    # 2F1(1, 1, 2, z) = -log(1 - z)/z
    got = hyp2f1(1.0, 1.0, 2.0, 0.5)
    assert abs(got - 2.0 * math.log(2.0)) < 1e-12


def test_hyp2f1_parameter_symmetry(rng):
    for _ in range(25):
        a, b = rng.uniform(0.1, 2.0, 2)
        c = rng.uniform(0.3, 2.5)
        z = complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.5, 0.5))
        assert abs(hyp2f1(a, b, c, z) - hyp2f1(b, a, c, z)) < 1e-13


def test_hyp2f1_rejects_bad_c_and_edge_z():
    with pytest.raises(DomainError):
        hyp2f1(0.5, 0.5, -2.0, 0.3)
    with pytest.raises(PrecisionLossError) as exc:
        hyp2f1(0.5, 0.5, 1.0, 0.9999)
    assert exc.value.achieved > 0.0


def test_hyp2f1_bound_is_honest(rng):
    for _ in range(20):
        a, b = rng.uniform(0.1, 1.5, 2)
        c = rng.uniform(0.4, 2.0)
        z = rng.uniform(-0.8, 0.8)
        v, bound = hyp2f1_with_bound(a, b, c, z)
        tight, _ = hyp2f1_with_bound(a, b, c, z, rtol=1e-16)
        assert abs(v - tight) <= bound + 1e-15


def test_hyp2f1_prime_matches_central_difference(rng):
    for _ in range(15):
        a, b = rng.uniform(0.2, 1.4, 2)
        c = rng.uniform(0.5, 1.8)
        z = rng.uniform(0.1, 0.7)
        fd = oracles.central_difference(lambda t: hyp2f1(a, b, c, t), z)
        got = hyp2f1_prime(a, b, c, z)
        assert abs(got - fd) < 5e-8 * (1.0 + abs(fd))


# ---------------------------------------------------------------------------
# Gauss contiguous relations


def test_gauss_residuals_sextic_point():
    r1, r2 = gauss_relation_residuals(1.0 / 6.0, 5.0 / 6.0, 1.0, 0.3)
    assert r1 < 1e-10 and r2 < 1e-10


def test_gauss_residuals_vanish_toward_zero():
    r1, r2 = gauss_relation_residuals(0.4, 1.1, 0.9, 1e-8)
    assert r1 < 1e-12 and r2 < 1e-12


def test_gauss_residual_sweep(rng):
    # the absolute residual stays tiny where F is moderate, and under
    # 1e-7 even with c down at 0.1 where F(c-1) is nearly singular
    worst_safe = 0.0
    for _ in range(100):
        a, b = rng.uniform(0.1, 1.5, 2)
        c = rng.uniform(0.4, 2.0)
        z = rng.uniform(0.05, 0.9)
        worst_safe = max(worst_safe, *gauss_relation_residuals(a, b, c, z))
    assert worst_safe < 1e-9
    worst_full = 0.0
    for _ in range(200):
        a, b, c = rng.uniform(0.1, 2.0, 3)
        z = rng.uniform(0.05, 0.95)
        worst_full = max(worst_full, *gauss_relation_residuals(a, b, c, z))
    assert worst_full < 1e-7


# ---------------------------------------------------------------------------
# Eisenstein series and the discriminant


def test_eisenstein_constant_terms():
    assert eisenstein_Q(0.0) == 1.0
    assert eisenstein_R(0.0) == 1.0


def test_discriminant_matches_eta_product():
    # (Q^3 - R^2)/1728 = q prod (1 - q^n)^24, eta-product oracle
    q = math.exp(-2.0 * math.pi)
    lhs = (eisenstein_Q(q) ** 3 - eisenstein_R(q) ** 2) / 1728.0
    eta24 = oracles.eisenstein_eval(oracles.delta_product_over_q(80), q)
    assert abs(lhs - q * eta24) < 1e-10 * abs(q * eta24)


def test_R_vanishes_at_q_exp_minus_2pi():
    # weight-6 series has a zero forced by j(i) = 1728
    assert abs(eisenstein_R(math.exp(-2.0 * math.pi))) < 1e-10


def test_eisenstein_range_guard():
    with pytest.raises(DomainError):
        eisenstein_Q(0.97)


# ---------------------------------------------------------------------------
# Klein j


def test_klein_j_special_values():
    assert abs(klein_j(1j) - 1728.0) < 1e-6
    assert abs(klein_j(2j) - 287496.0) < 1e-3
    rho = complex(-0.5, math.sqrt(3.0) / 2.0)
    assert abs(klein_j(rho)) < 1e-6


def test_klein_j_matches_eta_oracle(rng):
    for _ in range(10):
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.6, 2.0))
        ref = oracles.j_eval_eta(tau)
        assert abs(klein_j(tau) - ref) < 1e-9 * (1.0 + abs(ref))


def test_klein_j_requires_upper_strip():
    with pytest.raises(DomainError):
        klein_j(0.1 + 0.3j)


def test_j_real_on_imaginary_axis():
    t = np.linspace(1.0, 4.0, 40)
    vals = klein_j(1j * t)
    assert np.abs(vals.imag).max() < 1e-9


def test_J_strictly_increasing():
    t = np.linspace(1.0, 4.0, 100)
    vals = klein_j(1j * t).real
    assert np.all(np.diff(vals) > 0)


def test_klein_j_derivative_critical_points():
    assert abs(klein_j_derivative(1j)) < 1e-4
    rho = complex(-0.5, math.sqrt(3.0) / 2.0)
    assert abs(klein_j_derivative(rho)) < 1e-4


def test_klein_j_derivative_central_difference(rng):
    for _ in range(12):
        tau = complex(rng.uniform(-0.4, 0.4), rng.uniform(0.6, 2.0))
        fd = oracles.central_difference(klein_j, tau)
        got = klein_j_derivative(tau)
        assert abs(got - fd) < 1e-6 * (1.0 + abs(got))


# ---------------------------------------------------------------------------
# inverse of J(t) = j(it)


def test_j_inverse_fixed_point_exact():
    assert j_inverse(1728.0) == 1.0


def test_j_inverse_at_j_of_2i():
    assert abs(j_inverse(287496.0) - 2.0) < 1e-6


def test_j_inverse_roundtrip():
    for x in (2000.0, 1e4, 1e5):
        t = j_inverse(x)
        assert abs(klein_j(1j * t) - x) < 1e-7 * x


def test_j_inverse_domain_error():
    with pytest.raises(DomainError):
        j_inverse(1500.0)


def test_j_inverse_large_x_fallback_flagged():
    with pytest.warns(AsymptoticFallbackWarning):
        t = j_inverse(1e7)
    assert abs(klein_j(1j * t) - 1e7) < 1e-6 * 1e7


# ---------------------------------------------------------------------------
# Ramanujan inversion


def test_ramanujan_residual_at_half():
    assert ramanujan_inversion_residual(0.5) < 1e-9
    # at x = 1/2 the hypergeometric ratio is 1, so q = e^{-2 pi}
    F = hyp2f1(1.0 / 6.0, 5.0 / 6.0, 1.0, 0.5)
    q = math.exp(-2.0 * math.pi * (F / F).real)
    assert abs(q - math.exp(-2.0 * math.pi)) < 1e-15


def test_ramanujan_residual_generic_points():
    assert ramanujan_inversion_residual(0.1) < 1e-8
    for x in (0.2, 0.35, 0.65):
        assert abs(ramanujan_inversion_residual(x)
                   - ramanujan_inversion_residual(1.0 - x)) < 1e-9

"""Lattice invariants and the Weierstrass functions on <1, i tau>."""
from __future__ import annotations

import numpy as np
import pytest

import oracles
from mzl.elliptic import (lattice, reduce_to_cell, wp_eval, wp_invariants,
                          wp_pair, wp_prime)
from mzl.errors import DomainError, PoleProximityError


# ---------------------------------------------------------------------------
# invariants


def test_square_lattice_g2_closed_form(lat1):
    assert abs(lat1.g2 - oracles.g2_square_lattice()) < 1e-9 * lat1.g2


def test_square_lattice_g3_vanishes(lat1):
    assert abs(lat1.g3) < 1e-10


def test_invariant_homogeneity():
    # i * (Z + 0.5i Z) = 0.5 * (Z + 2i Z); g2 has weight -4, g3 weight -6,
    # and multiplying the lattice by i flips the sign of g3 only
    half, two = lattice(0.5), lattice(2.0)
    assert abs(two.g2 - half.g2 / 16.0) < 1e-10 * abs(half.g2)
    assert abs(two.g3 + half.g3 / 64.0) < 1e-10 * (1.0 + abs(half.g3))


def test_laurent_coefficients_start_from_invariants(lat15):
    assert abs(lat15.laurent[0] - lat15.g2 / 20.0) < 1e-12 * abs(lat15.g2)
    assert abs(lat15.laurent[1] - lat15.g3 / 28.0) < 1e-12 * abs(lat15.g3)


def test_tau_range_guard():
    with pytest.raises(DomainError):
        wp_invariants(0.05)
    with pytest.raises(DomainError):
        wp_invariants(12.0)


def test_half_period_values_sum_to_zero(lat15):
    e1, e2, e3 = lat15.half_period_values
    assert e1 > e2 > e3
    assert abs(e1 + e2 + e3) < 1e-9 * e1


def test_half_period_values_match_cubic_oracle(lat15):
    got = lat15.half_period_values
    want = oracles.cubic_real_roots(lat15.g2, lat15.g3)
    for g, w in zip(got, want):
        assert abs(g - w) < 1e-9 * (1.0 + abs(w))


# ---------------------------------------------------------------------------
# pointwise values


def test_wp_at_half_periods(lat1, lat15):
    for L in (lat1, lat15):
        e1, e2, e3 = L.half_period_values
        assert abs(wp_eval(0.5, L) - e1) < 1e-8 * (1.0 + abs(e1))
        assert abs(wp_eval(0.5 + 0.5j * L.tau, L) - e2) < 1e-8 * (1.0 + abs(e2))
        assert abs(wp_eval(0.5j * L.tau, L) - e3) < 1e-8 * (1.0 + abs(e3))
        # critical points of wp
        assert abs(wp_prime(0.5, L)) < 1e-8
        assert abs(wp_prime(0.5j * L.tau, L)) < 1e-8


def test_square_lattice_symmetry(lat1):
    # for the square lattice e2 = 0 and e3 = -e1
    e1, e2, e3 = lat1.half_period_values
    assert abs(e2) < 1e-9 * e1
    assert abs(e3 + e1) < 1e-9 * e1


def test_wp_matches_row_sum_oracle(lat1, lat15, rng):
    for L in (lat1, lat15):
        for _ in range(12):
            z = complex(rng.uniform(0.1, 0.9),
                        L.tau * rng.uniform(0.1, 0.9))
            p, dp = wp_pair(z, L)
            p_ref = oracles.wp_rowsum(z, L.tau)
            dp_ref = oracles.wp_prime_rowsum(z, L.tau)
            assert abs(p - p_ref) < 1e-11 * (1.0 + abs(p_ref))
            assert abs(dp - dp_ref) < 1e-11 * (1.0 + abs(dp_ref))


def test_wp_parity(lat15, rng):
    for _ in range(10):
        z = complex(rng.uniform(0.05, 0.45), lat15.tau * rng.uniform(0.05, 0.45))
        p_plus, dp_plus = wp_pair(z, lat15)
        p_minus, dp_minus = wp_pair(-z, lat15)
        assert abs(p_plus - p_minus) < 1e-10 * (1.0 + abs(p_plus))
        assert abs(dp_plus + dp_minus) < 1e-10 * (1.0 + abs(dp_plus))


def test_wp_periodicity(lat1, lat15, rng):
    for L in (lat1, lat15):
        for _ in range(8):
            z = complex(rng.uniform(0.1, 0.9), L.tau * rng.uniform(0.1, 0.9))
            base = wp_eval(z, L)
            for shift in (1.0, 1j * L.tau, 3.0 - 2j * L.tau):
                moved = wp_eval(z + shift, L)
                assert abs(moved - base) < 1e-9 * (1.0 + abs(base))


def test_differential_equation_residual(lat1, rng):
    # |wp'^2 - (4 wp^3 - g2 wp - g3)| stays below 1e-8 with a 0.12 margin
    # from the lattice in each coordinate
    x = rng.uniform(0.12, 0.88, 1000)
    y = rng.uniform(0.12, 0.88, 1000)
    z = x + 1j * lat1.tau * y
    p, dp = wp_pair(z, lat1)
    resid = np.abs(dp**2 - (4.0 * p**3 - lat1.g2 * p - lat1.g3))
    assert float(resid.max()) < 1e-8


def test_wp_real_on_symmetry_lines(lat15, rng):
    L = lat15
    t = rng.uniform(0.1, 0.9, 25)
    lines = [t + 0j,                          # real axis
             0.5 + 1j * L.tau * t,            # Re z = 1/2
             1j * L.tau * t,                  # imaginary axis
             t + 0.5j * L.tau]                # Im z = tau/2
    for zs in lines:
        p = wp_eval(np.asarray(zs, dtype=complex), L)
        assert float(np.abs(p.imag).max()) < 1e-9 * (1.0 + float(np.abs(p).max()))


# ---------------------------------------------------------------------------
# domain handling


def test_pole_proximity_guard(lat1):
    with pytest.raises(PoleProximityError):
        wp_eval(1e-9 + 0j, lat1)
    with pytest.raises(PoleProximityError):
        wp_eval(1.0 + 1j * lat1.tau + 1e-10, lat1)
    # the error carries the offending distance
    try:
        wp_eval(1e-9 + 0j, lat1)
    except PoleProximityError as exc:
        assert exc.distance < 1e-8


def test_reduce_to_cell_lands_in_cell(lat15, rng):
    tau = lat15.tau
    z = rng.uniform(-8, 8, 40) + 1j * tau * rng.uniform(-8, 8, 40)
    w = reduce_to_cell(z, tau)
    assert float(np.abs(w.real).max()) <= 0.5 + 1e-12
    assert float(np.abs(w.imag).max()) <= 0.5 * tau + 1e-12
    # reduction never changes the function value
    keep = (np.abs(w) > 1e-3) & (np.abs(w - 0.5) > 1e-3)
    p_orig = wp_eval(z[keep], lat15)
    p_red = wp_eval(w[keep], lat15)
    assert float(np.abs(p_orig - p_red).max()) < 1e-9 * (1.0 + float(np.abs(p_red).max()))


def test_wp_vectorized_matches_scalar(lat1, rng):
    z = rng.uniform(0.15, 0.85, 20) + 1j * rng.uniform(0.15, 0.85, 20)
    p_vec, dp_vec = wp_pair(z, lat1)
    for i in range(z.size):
        p_s, dp_s = wp_pair(complex(z[i]), lat1)
        assert p_s == pytest.approx(p_vec[i], rel=1e-14, abs=1e-14)
        assert dp_s == pytest.approx(dp_vec[i], rel=1e-14, abs=1e-14)

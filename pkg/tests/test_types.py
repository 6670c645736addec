"""Tests for the shared result types, domain checks, and numeric helpers."""

import math

import pytest

from cotlattice import (
    DEFAULT_TOLERANCE,
    DomainStatus,
    EvalResult,
    Method,
    Tolerance,
    validate_domain,
)
from cotlattice.numerics import Kahan, ipow, richardson, zeta_tail, zeta_tail_upper
from cotlattice.types import require_finite_scalar, require_order

ZETA2 = math.pi**2 / 6.0


class TestTolerance:
    """Tolerance.target mixes absolute and relative floors."""

    def test_target_absolute_floor(self):
        tol = Tolerance(abs_tol=1e-8, rel_tol=1e-10)
        assert tol.target(0.0) == 1e-8
        assert tol.target(1.0) == 1e-8

    def test_target_relative_dominates_large_scale(self):
        tol = Tolerance(abs_tol=1e-8, rel_tol=1e-10)
        assert abs(tol.target(1e6) - 1e-4) < 1e-19

    def test_defaults(self):
        assert DEFAULT_TOLERANCE.abs_tol == 1e-10
        assert DEFAULT_TOLERANCE.rel_tol == 1e-10
        assert DEFAULT_TOLERANCE.max_terms == 10_000_000
        assert DEFAULT_TOLERANCE.max_nodes == 100_000

    def test_rejects_nonpositive_pair(self):
        with pytest.raises(ValueError):
            Tolerance(abs_tol=0.0, rel_tol=0.0)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            Tolerance(abs_tol=-1e-10, rel_tol=1e-10)

    def test_rejects_empty_budget(self):
        with pytest.raises(ValueError):
            Tolerance(abs_tol=1e-10, rel_tol=1e-10, max_terms=0)


class TestEvalResult:
    """EvalResult rejects non-finite values and negative error bars."""

    def test_accepts_finite(self):
        r = EvalResult(value=1.5 + 0j, err_estimate=1e-12,
                       method=Method.CLOSED_FORM, work=3)
        assert r.value == 1.5 + 0j

    def test_rejects_nan_value(self):
        with pytest.raises(ValueError):
            EvalResult(value=complex(float("nan"), 0.0), err_estimate=0.0,
                       method=Method.CLOSED_FORM, work=1)

    def test_rejects_negative_err(self):
        with pytest.raises(ValueError):
            EvalResult(value=1 + 0j, err_estimate=-1e-30,
                       method=Method.CLOSED_FORM, work=1)

    def test_zero_work_allowed(self):
        r = EvalResult(value=1 + 0j, err_estimate=0.0,
                       method=Method.CLOSED_FORM, work=0)
        assert r.work == 0


class TestRequire:
    """Argument guards reject the right shapes."""

    def test_order_rejects_zero(self):
        with pytest.raises(ValueError):
            require_order(0)

    def test_order_rejects_bool(self):
        with pytest.raises(TypeError):
            require_order(True)

    def test_order_rejects_float(self):
        with pytest.raises(TypeError):
            require_order(2.0)

    def test_order_accepts(self):
        assert require_order(7) == 7

    def test_scalar_rejects_inf(self):
        with pytest.raises(ValueError):
            require_finite_scalar(complex(float("inf"), 0.0))

    def test_scalar_coerces(self):
        assert require_finite_scalar(2) == 2 + 0j


class TestValidateDomain:
    """validate_domain separates OK, excluded, and pole points."""

    def test_origin_even_excluded(self):
        assert validate_domain(2, 0j) is DomainStatus.EXCLUDED

    def test_origin_odd_pole(self):
        assert validate_domain(3, 0j) is DomainStatus.POLE

    def test_odd_integer_pole(self):
        # k = -z cancels k^n + z^n for odd n at every nonzero integer z.
        assert validate_domain(1, 2 + 0j) is DomainStatus.POLE
        assert validate_domain(3, -5 + 0j) is DomainStatus.POLE

    def test_odd_half_integer_ok(self):
        assert validate_domain(1, 0.5 + 0j) is DomainStatus.OK
        assert validate_domain(5, 7.5 + 0j) is DomainStatus.OK

    def test_even_real_ok(self):
        assert validate_domain(2, 3 + 0j) is DomainStatus.OK
        assert validate_domain(4, 1000.25 + 0j) is DomainStatus.OK

    def test_even_imaginary_pole(self):
        # z = i: k = 1 gives 1 + i^2 = 0.
        assert validate_domain(2, 1j) is DomainStatus.POLE

    def test_eighth_root_pole(self):
        z = complex(math.cos(math.pi / 4), math.sin(math.pi / 4))
        assert validate_domain(4, z) is DomainStatus.POLE

    def test_generic_complex_ok(self):
        assert validate_domain(4, 0.5 + 0.5j) is DomainStatus.OK


class TestIpow:
    """ipow matches ** and keeps conjugate symmetry exactly."""

    def test_matches_float_pow(self):
        for b in (0.3, 1.7, 2.0):
            for e in (0, 1, 2, 5, 16, 31):
                assert abs(ipow(b, e) - b**e) <= 1e-13 * abs(b**e)

    def test_conjugate_symmetry(self):
        z = 0.37 + 0.89j
        for e in (2, 3, 7, 12):
            assert ipow(z.conjugate(), e) == ipow(z, e).conjugate()

    def test_rejects_negative_exponent(self):
        with pytest.raises(ValueError):
            ipow(2.0, -1)


class TestKahan:
    """Compensated accumulation keeps sub-ulp contributions."""

    def test_small_terms_survive(self):
        acc = Kahan(1.0 + 0j)
        for _ in range(10_000):
            acc.add(1e-16 + 0j)
        assert abs(acc.total.real - (1.0 + 1e-12)) < 1e-15

    def test_plain_sum(self):
        acc = Kahan()
        for k in range(1, 101):
            acc.add(complex(1.0 / k, 0.0))
        expected = sum(1.0 / k for k in range(1, 101))
        assert abs(acc.total.real - expected) < 1e-13


class TestZetaTail:
    """Tail estimates are accurate and their bounds are honest."""

    def test_tail_s2_matches_zeta2(self):
        cutoff = 10
        partial = sum(1.0 / k**2 for k in range(1, cutoff + 1))
        est, rem = zeta_tail(2.0, cutoff)
        true_tail = ZETA2 - partial
        assert abs(est - true_tail) <= rem
        assert rem < 2e-9

    def test_tail_s4(self):
        cutoff = 8
        zeta4 = math.pi**4 / 90.0
        partial = sum(1.0 / k**4 for k in range(1, cutoff + 1))
        est, rem = zeta_tail(4.0, cutoff)
        assert abs(est - (zeta4 - partial)) <= rem

    def test_upper_bound_majorizes(self):
        for s in (2.0, 3.0, 6.0):
            for cutoff in (4, 16, 64):
                brute = sum(float(k) ** -s for k in range(cutoff + 1, 200_000))
                assert zeta_tail_upper(s, cutoff) >= brute

    def test_rejects_s_at_most_one(self):
        with pytest.raises(ValueError):
            zeta_tail(1.0, 10)
        with pytest.raises(ValueError):
            zeta_tail_upper(0.5, 10)


class TestRichardson:
    """Richardson extrapolation removes the modeled error powers."""

    def test_single_power_exact(self):
        limit = 3.7
        values = [limit + 0.9 * 0.5**j for j in range(5)]
        best, err = richardson(values, step_ratio=2.0)
        assert abs(best - limit) < 1e-12
        assert abs(best - limit) <= err

    def test_two_powers(self):
        limit = -1.25
        values = [limit + 0.4 * 0.5**j + 0.07 * 0.25**j for j in range(6)]
        best, err = richardson(values, step_ratio=2.0)
        assert abs(best - limit) < 1e-10
        assert abs(best - limit) <= err

    def test_noise_floor_reported(self):
        limit = 2.0
        noise = [1e-6] * 4
        values = [limit + 0.3 * 0.5**j for j in range(4)]
        best, err = richardson(values, step_ratio=2.0, noise=noise)
        assert err >= 1e-6
        assert abs(best - limit) <= err

    def test_needs_two_values(self):
        with pytest.raises(ValueError):
            richardson([1.0], step_ratio=2.0)

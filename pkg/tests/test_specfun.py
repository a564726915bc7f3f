import math

import numpy as np
import pytest

from qma import energy
from qma.specfun import (
    SpecialValue,
    beta,
    beta_value,
    digamma,
    digamma_value,
    log_beta,
    log_gamma,
    log_gamma_value,
)

from oracles import oracle_beta, oracle_digamma, oracle_log_gamma


def test_log_gamma_examples():
    assert log_gamma(1.0) == 0.0
    assert abs(log_gamma(0.5) - float(oracle_log_gamma(0.5))) <= 1e-13
    assert abs(log_gamma(5.0) - math.log(24.0)) <= 1e-12


def test_log_gamma_against_oracle_grid():
    for x in np.geomspace(1e-3, 1e6, 60):
        ref = float(oracle_log_gamma(float(x)))
        err = abs(log_gamma(float(x)) - ref) / max(1.0, abs(ref))
        assert err <= 1e-12, f"x={x}: rel err {err:.3e}"


def test_beta_examples():
    assert beta(1.0, 1.0) == 1.0
    assert abs(beta(3.0, 1.5) - 16.0 / 105.0) <= 1e-11 * (16.0 / 105.0)
    assert abs(beta(2.0, 3.0) - 1.0 / 12.0) <= 1e-11 / 12.0


def test_beta_against_oracle_grid():
    for x in (0.3, 1.0, 2.5, 7.0):
        for y in (0.4, 1.5, 6.0, 20.0):
            ref = float(oracle_beta(x, y))
            assert abs(beta(x, y) - ref) <= 1e-11 * abs(ref)


def test_beta_symmetric_exactly():
    rng = np.random.default_rng(3)
    for _ in range(50):
        x, y = np.exp(rng.uniform(np.log(1e-2), np.log(50.0), size=2))
        assert beta(float(x), float(y)) == beta(float(y), float(x))


def test_digamma_examples():
    assert abs(digamma(1.0) - float(oracle_digamma(1.0))) <= 1e-12
    assert abs(digamma(2.0) - (float(oracle_digamma(1.0)) + 1.0)) <= 1e-12
    assert abs(digamma(0.5) - float(oracle_digamma(0.5))) <= 1e-12


def test_digamma_against_oracle_grid():
    for x in np.geomspace(1e-3, 1e6, 60):
        assert abs(digamma(float(x)) - float(oracle_digamma(float(x)))) <= 1e-12


def test_digamma_recurrence_property():
    for x in np.geomspace(1e-2, 1e4, 80):
        x = float(x)
        assert abs(digamma(x + 1.0) - digamma(x) - 1.0 / x) <= 1e-12


def test_beta_derivative_identity():
    # d/dy B(x, y) = B(x, y) (psi(y) - psi(x + y))
    rng = np.random.default_rng(5)
    for _ in range(20):
        x, y = np.exp(rng.uniform(np.log(0.5), np.log(8.0), size=2))
        x, y = float(x), float(y)
        h = 1e-5 * max(1.0, y)
        fd = (beta(x, y + h) - beta(x, y - h)) / (2.0 * h)
        closed = beta(x, y) * (digamma(y) - digamma(x + y))
        assert abs(fd - closed) <= 1e-6 * abs(closed)


def test_beta_quadrature_consistency():
    # defining integral split at 1/2 and folded by symmetry, so both
    # singular corners land on the well-resolved left endpoint
    spec = energy.QuadratureSpec(rel_tol=1e-8)

    def half_integral(x, y):
        def integrand(u):
            return u ** (x - 1.0) * (1.0 - 0.5 * u) ** (y - 1.0)

        return 0.5**x * energy.integrate_unit_interval(integrand, spec)

    for x in (0.5, 1.5, 4.0, 10.0):
        for y in (0.5, 2.5, 10.0):
            quad = half_integral(x, y) + half_integral(y, x)
            assert abs(quad - beta(x, y)) <= 1e-8 * beta(x, y)


def test_domain_errors():
    for bad in (0.0, -1.0, math.nan, math.inf):
        with pytest.raises(ValueError):
            log_gamma(bad)
        with pytest.raises(ValueError):
            digamma(bad)
        with pytest.raises(ValueError):
            beta(bad, 1.0)
        with pytest.raises(ValueError):
            beta(1.0, bad)


def test_special_value_invariants():
    sv = beta_value(3.0, 1.5)
    assert sv.abs_error_bound >= 0.0
    assert abs(sv.value - 16.0 / 105.0) <= sv.abs_error_bound
    assert log_gamma_value(5.0).abs_error_bound >= 0.0
    assert digamma_value(2.0).abs_error_bound == 1e-12
    with pytest.raises(ValueError):
        SpecialValue(math.nan, 0.0)
    with pytest.raises(ValueError):
        SpecialValue(1.0, -1.0)


def test_log_beta_matches_beta():
    assert math.exp(log_beta(2.0, 3.0)) == beta(2.0, 3.0)

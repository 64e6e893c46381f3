import math

import numpy as np
import pytest

from errors import AccuracyError, DomainError
from quad import EvalResult, QuadConfig, integrate_exp_tail, transformed_integrand


@pytest.mark.parametrize("rate", [1e-3, 0.05, 1.0, 100.0])
def test_pure_exponential(rate):
    result = integrate_exp_tail(lambda r: np.exp(-rate * r), decay_rate=rate)
    assert result.value == pytest.approx(1.0 / rate, rel=1e-12)
    assert result.err_estimate <= 1e-10 * result.value


@pytest.mark.parametrize("alpha", [-0.9, -0.5, -1.0 / 3.0, 0.5, 2.3])
def test_power_singularity(alpha):
    result = integrate_exp_tail(
        lambda r: np.power(r, alpha) * np.exp(-r), decay_rate=1.0, singularity_exponent=alpha)
    assert result.value == pytest.approx(math.gamma(alpha + 1.0), rel=1e-9)


def test_small_decay_rate_with_singularity():
    # ∫ r^{-1/2} e^{-λr} dr = √(π/λ)
    rate = 1e-3
    result = integrate_exp_tail(
        lambda r: np.exp(-rate * r) / np.sqrt(r), decay_rate=rate, singularity_exponent=-0.5)
    assert result.value == pytest.approx(math.sqrt(math.pi / rate), rel=1e-9)


def test_evaluation_count_in_whole_rules():
    result = integrate_exp_tail(lambda r: np.exp(-r), decay_rate=1.0)
    assert result.n_evals > 0
    assert result.n_evals % 15 == 0


def test_tolerance_monotonicity():
    f = lambda r: np.power(r, -0.25) * np.exp(-2.0 * r) * (1.0 + np.sin(r))
    loose = integrate_exp_tail(f, 2.0, -0.25, QuadConfig(rel_tol=1e-6))
    tight = integrate_exp_tail(f, 2.0, -0.25, QuadConfig(rel_tol=1e-7))
    assert abs(tight.value - loose.value) <= loose.err_estimate


@pytest.mark.parametrize("alpha", [-0.9, -0.5, 0.3, 1.5])
def test_transformed_integrand_bounded_at_origin(alpha):
    g = transformed_integrand(lambda r: np.power(r, alpha) * np.exp(-r), alpha)
    # r = w^p turns r^alpha e^{-r} dr into p e^{-w^p} dw
    p = 1.0 / (alpha + 1.0)
    w = 1e-12
    value = g(np.array([w]))
    assert np.all(np.isfinite(value))
    assert value[0] == pytest.approx(p * math.exp(-w ** p), rel=1e-9)


def test_zero_exponent_skips_substitution():
    f = lambda r: np.exp(-r)
    assert transformed_integrand(f, 0.0) is f


def test_finite_support_with_breakpoints():
    # hat function on [0, 2] with a kink at 1
    hat = lambda r: np.where(r < 1.0, r, 2.0 - r)
    result = integrate_exp_tail(hat, decay_rate=1.0, breakpoints=(1.0,), upper=2.0)
    assert result.value == pytest.approx(1.0, rel=1e-13)


@pytest.mark.parametrize("alpha", [-1.0, -1.5, math.nan])
def test_non_integrable_singularity(alpha):
    with pytest.raises(DomainError, match="singularity exponent must exceed -1"):
        integrate_exp_tail(lambda r: np.exp(-r), decay_rate=1.0, singularity_exponent=alpha)


@pytest.mark.parametrize("rate", [0.0, -1.0, math.inf])
def test_bad_decay_rate(rate):
    with pytest.raises(DomainError, match="decay rate must be positive"):
        integrate_exp_tail(lambda r: np.exp(-r), decay_rate=rate)


def test_non_convergence_carries_best_estimate():
    cfg = QuadConfig(rel_tol=1e-14, max_refinements=1)
    with pytest.raises(AccuracyError) as excinfo:
        integrate_exp_tail(lambda r: np.abs(np.sin(37.0 * r)) * np.exp(-r), 1.0, cfg=cfg)
    best = excinfo.value.best_estimate
    assert isinstance(best, EvalResult)
    assert best.value > 0.0 and best.err_estimate > 1e-14 * best.value


def test_non_finite_integrand():
    with pytest.raises(AccuracyError, match="not finite"):
        integrate_exp_tail(lambda r: np.where(r > 3.0, np.nan, np.exp(-r)), decay_rate=1.0)


@pytest.mark.parametrize("kwargs", [
    {'rel_tol': 0.0},
    {'abs_tol': -1.0},
    {'max_refinements': 0},
    {'tail_cutoff': 0.0},
    {'max_intervals': 1},
])
def test_quad_config_validation(kwargs):
    with pytest.raises(DomainError):
        QuadConfig(**kwargs)


def test_rel_err():
    assert EvalResult(2.0, 1e-10, 15).rel_err == pytest.approx(5e-11)
    assert EvalResult(0.0, 0.0, 15).rel_err == 0.0
    assert EvalResult(0.0, 1.0, 15).rel_err == math.inf


@pytest.mark.parametrize("alpha", [-0.9, -0.5, 0.0, 0.5, 3.0])
@pytest.mark.parametrize("rate", [0.1, 1.0, 10.0])
def test_gamma_integral_grid(alpha, rate):
    # ∫ r^alpha e^{-λr} dr = Γ(alpha+1)/λ^{alpha+1}
    result = integrate_exp_tail(
        lambda r: np.power(r, alpha) * np.exp(-rate * r), decay_rate=rate, singularity_exponent=alpha)
    expected = math.gamma(alpha + 1.0) / rate ** (alpha + 1.0)
    assert result.value == pytest.approx(expected, rel=1e-9)
    assert result.err_estimate <= 1e-9 * expected

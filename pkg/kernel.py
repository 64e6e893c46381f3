"""
Evaluators for the Krätzel kernel λ_ν^(n)(x) and the Bessel function K_ν(x).

Both come from the same kind of integral,

    λ_ν^(n)(x) = (2π)^{(n−1)/2} √n (x/n)^{nν} / Γ(ν+1−1/n) · ∫₁^∞ (t^n−1)^{ν−1/n} e^{−xt} dt
    K_ν(x)     = √π (x/2)^ν / Γ(ν+1/2) · ∫₁^∞ (t²−1)^{ν−1/2} e^{−xt} dt

which is shifted to the origin (t = 1 + r), so that e^{−x} comes out
analytically and the remaining integral has decay rate x and the algebraic
singularity r^{ν−1/n} at r = 0. The prefactors are assembled in log space.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from errors import DomainError
from quad import DEFAULT_CONFIG, EvalResult, QuadConfig, integrate_exp_tail
from specfun import ln_gamma

logger = logging.getLogger(__name__)

_LOG_TWO_PI = math.log(2.0 * math.pi)
_HALF_LOG_PI = 0.5 * math.log(math.pi)
_HALF_INTEGER_TOL = 1e-14


@dataclass(frozen=True)
class KernelParams:
    """The pair (n, ν) indexing λ_ν^(n); requires n ≥ 1 and ν > 1/n − 1."""
    n: int
    nu: float

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            logger.error(f"Invalid kernel order n={self.n}")
            raise DomainError("n must be an integer >= 1")
        if not math.isfinite(self.nu):
            raise DomainError("nu must be finite")
        if not self.nu > 1.0 / self.n - 1.0:
            logger.error(f"nu={self.nu} violates nu > 1/n - 1 for n={self.n}")
            raise DomainError(f"nu must exceed 1/n - 1 = {1.0 / self.n - 1.0:g}")

    @property
    def singularity_exponent(self) -> float:
        """Exponent ν − 1/n of the integrand at t = 1."""
        return self.nu - 1.0 / self.n


@dataclass(frozen=True)
class BesselArg:
    """Order and argument of K_ν(x); ν ≥ 0, x > 0."""
    nu: float
    x: float

    def __post_init__(self):
        if not (math.isfinite(self.nu) and self.nu >= 0.0):
            logger.error(f"Invalid Bessel order nu={self.nu}")
            raise DomainError("nu must be non-negative")
        _check_argument(self.x)


def _check_argument(x: float, name: str = "x") -> None:
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite")
    if x <= 0.0:
        logger.error(f"{name}={x} is not positive")
        raise DomainError(f"{name} must be positive")


def shifted_integral(n: int, exponent: float, x: float, cfg: QuadConfig) -> EvalResult:
    """
    ∫₀^∞ ((1+r)^n − 1)^{exponent} e^{−xr} dr, i.e. the kernel integral times e^{x}.
    """
    def integrand(r: np.ndarray) -> np.ndarray:
        if exponent == 0.0:
            return np.exp(-x * r)
        base = np.expm1(n * np.log1p(r))
        return np.exp(exponent * np.log(base) - x * r)

    return integrate_exp_tail(integrand, decay_rate=x, singularity_exponent=exponent, cfg=cfg)


def _assemble(log_prefactor: float, integral: EvalResult) -> EvalResult:
    if not integral.value > 0.0:
        logger.error(f"Non-positive kernel integral {integral.value}")
        raise DomainError("kernel integral must be positive")
    value = math.exp(log_prefactor + math.log(integral.value))
    err = value * (integral.err_estimate / integral.value) + 8.0 * np.finfo(float).eps * value
    return EvalResult(value=value, err_estimate=err, n_evals=integral.n_evals)


def kratzel_kernel(p: KernelParams, x: float, cfg: Optional[QuadConfig] = None) -> EvalResult:
    """
    Krätzel kernel λ_ν^(n)(x) by quadrature of its integral representation.

    Args:
        p (KernelParams): Kernel index (n, ν).
        x (float): Positive argument.
        cfg (QuadConfig): Quadrature settings.

    Returns:
        EvalResult: λ_ν^(n)(x) with its propagated error estimate.

    Raises:
        DomainError: If x is not positive.
        AccuracyError: If the quadrature does not converge.
    """
    cfg = cfg or DEFAULT_CONFIG
    _check_argument(x)
    n, nu = p.n, p.nu
    integral = shifted_integral(n, p.singularity_exponent, x, cfg)
    log_prefactor = (
        0.5 * (n - 1) * _LOG_TWO_PI
        + 0.5 * math.log(n)
        + n * nu * math.log(x / n)
        - ln_gamma(nu + 1.0 - 1.0 / n)
        - x
    )
    result = _assemble(log_prefactor, integral)
    logger.debug(f"lambda_{nu}^({n})({x}) = {result.value:.15g} +/- {result.err_estimate:.3g}")
    return result


def bessel_k(a: BesselArg, cfg: Optional[QuadConfig] = None, closed_form: bool = True) -> EvalResult:
    """
    Modified Bessel function of the second kind K_ν(x) for ν ≥ 0, x > 0.

    Uses √(π/(2x))e^{−x} when ν = 1/2 (within 1e-14) and closed_form is set,
    quadrature of the integral representation otherwise.
    """
    cfg = cfg or DEFAULT_CONFIG
    nu, x = a.nu, a.x
    if closed_form and abs(nu - 0.5) <= _HALF_INTEGER_TOL:
        value = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x)
        return EvalResult(value=value, err_estimate=4.0 * np.finfo(float).eps * value, n_evals=1)

    exponent = nu - 0.5
    integral = shifted_integral(2, exponent, x, cfg)
    log_prefactor = _HALF_LOG_PI + nu * math.log(0.5 * x) - ln_gamma(nu + 0.5) - x
    result = _assemble(log_prefactor, integral)
    logger.debug(f"K_{nu}({x}) = {result.value:.15g} +/- {result.err_estimate:.3g}")
    return result


def closed_form_kernel(p: KernelParams, x: float) -> Optional[float]:
    """
    λ_ν^(n)(x) in the cases with an elementary closed form, else None.

    n = 1 gives e^{−x} for every ν > 0; (n, ν) = (2, 1/2) gives √π·e^{−x}.
    """
    _check_argument(x)
    if p.n == 1:
        return math.exp(-x)
    if p.n == 2 and abs(p.nu - 0.5) <= _HALF_INTEGER_TOL:
        return math.sqrt(math.pi) * math.exp(-x)
    return None


def _check_relation_inputs(nu: float, x: float, value: float, name: str) -> None:
    if not (math.isfinite(nu) and nu >= 0.0):
        raise DomainError("nu must be non-negative")
    _check_argument(x)
    if not (math.isfinite(value) and value > 0.0):
        logger.error(f"{name}={value} is not positive")
        raise DomainError(f"{name} must be positive")


def kernel_from_bessel(nu: float, x: float, k_value: float) -> float:
    """λ_ν^(2)(x) = 2(x/2)^ν K_ν(x)."""
    _check_relation_inputs(nu, x, k_value, "k_value")
    return 2.0 * math.pow(0.5 * x, nu) * k_value


def bessel_from_kernel(nu: float, x: float, lambda_value: float) -> float:
    """K_ν(x) = λ_ν^(2)(x) / (2(x/2)^ν)."""
    _check_relation_inputs(nu, x, lambda_value, "lambda_value")
    return lambda_value / (2.0 * math.pow(0.5 * x, nu))

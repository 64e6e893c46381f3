"""
The inequalities for λ_ν^(n) and K_ν as evaluable bounds.

Each bound is a plain function returning the bound value; bound_direction()
says which way the inequality points for given (n, ν), and verify_point()
checks every applicable inequality at one parameter point against quadrature
values, producing BoundReports.

Identifiers used in reports:
    eq5               kernel bound (Theorem, part i)
    eq6               Bessel bound (Theorem, part ii)
    corollary_lower   (x/(x+1/2−ν))^{ν+1/2} < √(2x/π)e^x K_ν(x)
    corollary_upper   √(2x/π)e^x K_ν(x) < 1
    luke_lower        Luke's lower bound on √(2x/π)e^x K_ν(x)
    luke_upper        Luke's upper bound on the same quantity
    gautschi          Γ(x+a)/Γ(x+1) > (x+a)^{a−1} with a = 1/2 − ν
    eq1_left          1/√(x+1/2) < Γ(x+1/2)/Γ(x+1)
    eq1_right         Γ(x+1/2)/Γ(x+1) < √(2/π)e^x K_0(x)
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from errors import AccuracyError, DomainError
from kernel import BesselArg, KernelParams, bessel_k, kratzel_kernel
from quad import DEFAULT_CONFIG, EvalResult, QuadConfig, integrate_exp_tail
from specfun import beta, gamma_ratio, ln_gamma_ratio

logger = logging.getLogger(__name__)

TOL_EQ = 1e-9

_LOG_TWO_PI = math.log(2.0 * math.pi)
_SQRT_TWO_OVER_PI = math.sqrt(2.0 / math.pi)


class Direction(Enum):
    STRICT_LOWER = 'StrictLower'
    EQUALITY = 'Equality'
    STRICT_UPPER = 'StrictUpper'


@dataclass(frozen=True)
class BoundDirection:
    """
    Direction of a bound and the x-range on which it holds.

    For the theorem bounds, STRICT_UPPER (the reversed regime) carries
    valid_x_min = (n−1)(ν−1/n) > 0 and the bound holds only for x above it.
    Envelope upper bounds use STRICT_UPPER with valid_x_min 0.
    """
    kind: Direction
    valid_x_min: float = 0.0

    def admits(self, x: float) -> bool:
        return self.kind is not Direction.STRICT_UPPER or x > self.valid_x_min


@dataclass
class BoundReport:
    """One verified inequality instance; margin > 0 means satisfied with slack."""
    n: int
    nu: float
    x: float
    exact: float
    bound: float
    direction: BoundDirection
    margin: float
    satisfied: bool
    which: str
    err_estimate: float = 0.0
    indeterminate: bool = False
    note: str = ''

    @property
    def status(self) -> str:
        if self.indeterminate:
            return 'indeterminate'
        return 'satisfied' if self.satisfied else 'failed'

    def to_row(self) -> Dict[str, object]:
        return {
            'n': self.n,
            'nu': self.nu,
            'x': self.x,
            'which': self.which,
            'direction': self.direction.kind.value,
            'valid_x_min': self.direction.valid_x_min,
            'exact': self.exact,
            'bound': self.bound,
            'margin': self.margin,
            'err_estimate': self.err_estimate,
            'status': self.status,
        }


REPORT_COLUMNS = [
    'n', 'nu', 'x', 'which', 'direction', 'valid_x_min',
    'exact', 'bound', 'margin', 'err_estimate', 'status',
]


def _require_positive(name: str, value: float) -> None:
    if not math.isfinite(value) or value <= 0.0:
        logger.error(f"{name}={value} is not positive")
        raise DomainError(f"{name} must be positive")


def _require_order(n: int) -> None:
    if isinstance(n, bool) or int(n) != n or n < 2:
        logger.error(f"Kernel bound requested for n={n}")
        raise DomainError("n must be an integer >= 2 (the kernel bound divides by n - 1)")


def bound_direction(n: int, nu: float) -> BoundDirection:
    """
    Direction of the theorem bound for λ_ν^(n) (use n = 2 for K_ν).

    ν below 1/n gives a strict lower bound for every x > 0, ν = 1/n (within
    TOL_EQ) equality, and ν above 1/n a strict upper bound for x > (n−1)(ν−1/n).
    """
    _require_order(n)
    if not (math.isfinite(nu) and nu >= 0.0):
        raise DomainError("nu must be non-negative")
    threshold = 1.0 / n
    if nu < threshold - TOL_EQ:
        return BoundDirection(Direction.STRICT_LOWER)
    if nu <= threshold + TOL_EQ:
        return BoundDirection(Direction.EQUALITY)
    return BoundDirection(Direction.STRICT_UPPER, valid_x_min=(n - 1) * (nu - threshold))


def _check_validity(direction: BoundDirection, x: float, label: str) -> None:
    if not direction.admits(x):
        logger.error(f"{label}: x={x} not above {direction.valid_x_min}")
        raise DomainError(
            f"x must exceed {direction.valid_x_min:.15g} in the reversed regime"
        )


def theorem_kernel_bound(p: KernelParams, x: float) -> float:
    """
    Gamma-ratio bound on the Krätzel kernel λ_ν^(n)(x), n ≥ 2, ν ≥ 0.

    (2π)^{(n−1)/2} · √n/(n−1) · (n/(n−1))^{ν−1/n} · (x/n)^{nν}
        · Γ(x/(n−1)+1/n−ν)/Γ(x/(n−1)+1) · e^{−x}

    A lower bound for ν < 1/n, attained for ν = 1/n, an upper bound for
    ν > 1/n where it exists only for x > (n−1)(ν−1/n).

    Raises:
        DomainError: n = 1, ν < 0, x <= 0, or x at/below the reversed-regime threshold.
    """
    n, nu = p.n, p.nu
    _require_order(n)
    _require_positive("x", x)
    direction = bound_direction(n, nu)
    _check_validity(direction, x, "theorem_kernel_bound")
    log_value = (
        0.5 * (n - 1) * _LOG_TWO_PI
        + 0.5 * math.log(n)
        - math.log(n - 1)
        + (nu - 1.0 / n) * math.log(n / (n - 1))
        + n * nu * math.log(x / n)
        + ln_gamma_ratio(x / (n - 1), 1.0 / n - nu)
        - x
    )
    return math.exp(log_value)


def theorem_bessel_bound(nu: float, x: float) -> float:
    """
    Gamma-ratio bound √(π/2)·x^ν·Γ(x+1/2−ν)/Γ(x+1)·e^{−x} on K_ν(x).

    Lower for ν < 1/2, equal at ν = 1/2, upper for ν > 1/2 and x > ν − 1/2.
    """
    _require_positive("x", x)
    direction = bound_direction(2, nu)
    _check_validity(direction, x, "theorem_bessel_bound")
    log_value = 0.5 * math.log(math.pi / 2.0) + nu * math.log(x) + ln_gamma_ratio(x, 0.5 - nu) - x
    return math.exp(log_value)


def _require_envelope_order(nu: float) -> None:
    if not (math.isfinite(nu) and 0.0 <= nu < 0.5):
        logger.error(f"Envelope requested for nu={nu}")
        raise DomainError("nu must lie in [0, 1/2)")


def corollary_envelope(nu: float, x: float) -> Tuple[float, float]:
    """
    Bounds (lower, upper) on √(2x/π)e^x K_ν(x) for 0 ≤ ν < 1/2.

    lower = (x/(x+1/2−ν))^{ν+1/2}, upper = 1.
    """
    _require_envelope_order(nu)
    _require_positive("x", x)
    lower = math.pow(x / (x + 0.5 - nu), nu + 0.5)
    return lower, 1.0


def luke_envelope(nu: float, x: float) -> Tuple[float, float]:
    """
    Luke's bounds (lower, upper) on √(2x/π)e^x K_ν(x) for 0 ≤ ν < 1/2.

    With c = (1/4 − ν²)/2: lower = 1 − c/(x+c), upper = 1 − c/(x + (9/4 − ν²)/4).
    """
    _require_envelope_order(nu)
    _require_positive("x", x)
    c = 0.5 * (0.25 - nu * nu)
    lower = 1.0 - c / (x + c)
    upper = 1.0 - c / (x + 0.25 * (2.25 - nu * nu))
    return lower, upper


def luke_lower_bessel(nu: float, x: float) -> float:
    """Luke's lower bound expressed as a bound on K_ν(x) itself."""
    lower, _ = luke_envelope(nu, x)
    return math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) * lower


def scaled_bessel(nu: float, x: float, cfg: Optional[QuadConfig] = None) -> EvalResult:
    """√(2x/π)e^x K_ν(x), the quantity sandwiched by the corollary and by Luke's envelope."""
    k = bessel_k(BesselArg(nu, x), cfg)
    factor = math.sqrt(2.0 * x / math.pi) * math.exp(x)
    return EvalResult(value=factor * k.value, err_estimate=factor * k.err_estimate, n_evals=k.n_evals)


def k0_chain(x: float, cfg: Optional[QuadConfig] = None) -> Tuple[float, float, float]:
    """
    The K_0 chain a < b < c with a = 1/√(x+1/2), b = Γ(x+1/2)/Γ(x+1),
    c = √(2/π)e^x K_0(x).
    """
    _require_positive("x", x)
    a = 1.0 / math.sqrt(x + 0.5)
    b = gamma_ratio(x, 0.5)
    c = _SQRT_TWO_OVER_PI * math.exp(x) * bessel_k(BesselArg(0.0, x), cfg).value
    return a, b, c


def gautschi_lower(x: float, a: float) -> float:
    """Gautschi's lower bound 1/(x+a)^{1−a} on Γ(x+a)/Γ(x+1), 0 < a < 1."""
    _require_positive("x", x)
    if not (0.0 < a < 1.0):
        logger.error(f"Gautschi bound requested for a={a}")
        raise DomainError("a must lie in (0, 1)")
    return math.pow(x + a, a - 1.0)


def series_inequality_gap(n: int, u: float) -> float:
    """
    (n/(n−1))(e^{2u}−1) − ((1+2u/(n−1))^n − 1), positive for n ≥ 2, u > 0.

    This is the comparison that turns the kernel integral into a beta integral.
    """
    _require_order(n)
    _require_positive("u", u)
    return n / (n - 1) * math.expm1(2.0 * u) - math.expm1(n * math.log1p(2.0 * u / (n - 1)))


def beta_integral_check(n: int, nu: float, x: float, cfg: Optional[QuadConfig] = None) -> Tuple[EvalResult, float]:
    """
    Quadrature of ∫₀^∞ e^{−(2x/(n−1)+2/n−2ν)u}(1−e^{−2u})^{ν−1/n} du and its
    closed form ½·B(ν+1−1/n, x/(n−1)+1/n−ν).
    """
    cfg = cfg or DEFAULT_CONFIG
    _require_order(n)
    _require_positive("x", x)
    direction = bound_direction(n, nu)
    _check_validity(direction, x, "beta_integral_check")
    exponent = nu - 1.0 / n
    rate = 2.0 * x / (n - 1) + 2.0 / n - 2.0 * nu

    def integrand(u: np.ndarray) -> np.ndarray:
        if exponent == 0.0:
            return np.exp(-rate * u)
        return np.exp(exponent * np.log(-np.expm1(-2.0 * u)) - rate * u)

    quadrature = integrate_exp_tail(integrand, decay_rate=rate, singularity_exponent=exponent, cfg=cfg)
    closed_form = 0.5 * beta(nu + 1.0 - 1.0 / n, x / (n - 1) + 1.0 / n - nu)
    return quadrature, closed_form


def relative_margin(direction: Direction, exact: float, bound: float) -> float:
    """Signed relative slack of exact against bound; negative means violated."""
    if direction is Direction.STRICT_LOWER:
        return (exact - bound) / abs(exact)
    if direction is Direction.STRICT_UPPER:
        return (bound - exact) / abs(exact)
    return -abs(exact - bound) / max(abs(exact), 1.0)


def _report(n: int, nu: float, x: float, which: str, direction: BoundDirection,
            exact: EvalResult, bound: float) -> BoundReport:
    margin = relative_margin(direction.kind, exact.value, bound)
    report = BoundReport(
        n=n, nu=nu, x=x, exact=exact.value, bound=bound, direction=direction,
        margin=margin, satisfied=margin >= -TOL_EQ, which=which,
        err_estimate=exact.rel_err,
    )
    if not report.satisfied:
        logger.warning(f"{which} violated at n={n}, nu={nu}, x={x}: margin={margin:.3g}")
    else:
        logger.debug(f"{which} at n={n}, nu={nu}, x={x}: margin={margin:.3g}")
    return report


def _indeterminate(n: int, nu: float, x: float, which: str, direction: BoundDirection,
                   bound: float, error: AccuracyError) -> BoundReport:
    best = error.best_estimate
    exact = best.value if best is not None else math.nan
    logger.warning(f"{which} indeterminate at n={n}, nu={nu}, x={x}: {error}")
    return BoundReport(
        n=n, nu=nu, x=x, exact=exact, bound=bound, direction=direction,
        margin=math.nan, satisfied=False, which=which,
        err_estimate=best.rel_err if best is not None else math.inf,
        indeterminate=True, note=str(error),
    )


@dataclass
class _PointContext:
    """Lazily computed exact values shared by the reports of one point."""
    nu: float
    x: float
    cfg: QuadConfig
    _bessel: Optional[EvalResult] = field(default=None, repr=False)

    def bessel(self) -> EvalResult:
        if self._bessel is None:
            self._bessel = bessel_k(BesselArg(self.nu, self.x), self.cfg)
        return self._bessel


def verify_point(n: int, nu: float, x: float, cfg: Optional[QuadConfig] = None) -> List[BoundReport]:
    """
    Check every inequality whose domain contains (n, ν, x).

    Inequalities whose domain excludes the point are skipped. A quadrature
    failure turns the affected reports indeterminate; they are never
    counted as satisfied.

    Args:
        n (int): Kernel order; the kernel bound needs n ≥ 2.
        nu (float): Order ν.
        x (float): Argument x > 0.
        cfg (QuadConfig): Quadrature settings for the exact values.

    Returns:
        List[BoundReport]: One report per applicable inequality.
    """
    cfg = cfg or DEFAULT_CONFIG
    _require_positive("x", x)
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError("n must be an integer >= 1")
    reports: List[BoundReport] = []
    if not (math.isfinite(nu) and nu >= 0.0):
        logger.warning(f"No inequality applies at nu={nu}")
        return reports

    ctx = _PointContext(nu=nu, x=x, cfg=cfg)

    if n >= 2:
        direction = bound_direction(n, nu)
        if direction.admits(x):
            bound = theorem_kernel_bound(KernelParams(n, nu), x)
            try:
                exact = kratzel_kernel(KernelParams(n, nu), x, cfg)
                reports.append(_report(n, nu, x, 'eq5', direction, exact, bound))
            except AccuracyError as e:
                reports.append(_indeterminate(n, nu, x, 'eq5', direction, bound, e))
        else:
            logger.debug(f"eq5 skipped: x={x} <= {direction.valid_x_min}")

    bessel_reports: List[Tuple[str, BoundDirection, Callable[[EvalResult], EvalResult], float]] = []
    direction = bound_direction(2, nu)
    if direction.admits(x):
        bessel_reports.append(('eq6', direction, lambda k: k, theorem_bessel_bound(nu, x)))
    else:
        logger.debug(f"eq6 skipped: x={x} <= {direction.valid_x_min}")

    if nu < 0.5:
        lower = BoundDirection(Direction.STRICT_LOWER)
        upper = BoundDirection(Direction.STRICT_UPPER)
        k0_scale = _SQRT_TWO_OVER_PI * math.exp(x)
        envelope_scale = math.sqrt(2.0 * x / math.pi) * math.exp(x)

        def scaled(factor: float) -> Callable[[EvalResult], EvalResult]:
            return lambda k: EvalResult(factor * k.value, factor * k.err_estimate, k.n_evals)

        c_low, c_up = corollary_envelope(nu, x)
        l_low, l_up = luke_envelope(nu, x)
        bessel_reports += [
            ('corollary_lower', lower, scaled(envelope_scale), c_low),
            ('corollary_upper', upper, scaled(envelope_scale), c_up),
            ('luke_lower', lower, scaled(envelope_scale), l_low),
            ('luke_upper', upper, scaled(envelope_scale), l_up),
        ]

        a = 0.5 - nu
        ratio = EvalResult(gamma_ratio(x, a), 0.0, 1)
        reports.append(_report(n, nu, x, 'gautschi', lower, ratio, gautschi_lower(x, a)))

        if nu == 0.0:
            chain_a = 1.0 / math.sqrt(x + 0.5)
            chain_b = gamma_ratio(x, 0.5)
            reports.append(_report(n, nu, x, 'eq1_left', lower, EvalResult(chain_b, 0.0, 1), chain_a))
            bessel_reports.append(('eq1_right', lower, scaled(k0_scale), chain_b))

    for which, direction, transform, bound in bessel_reports:
        try:
            exact = transform(ctx.bessel())
            reports.append(_report(n, nu, x, which, direction, exact, bound))
        except AccuracyError as e:
            reports.append(_indeterminate(n, nu, x, which, direction, bound, e))

    if not reports:
        logger.warning(f"No inequality applies at n={n}, nu={nu}, x={x}")
    return reports


def loglog_slope(fn: Callable[[float], float], x_values: Sequence[float]) -> float:
    """Least-squares slope of ln fn(x) against ln x."""
    xs = np.asarray(x_values, dtype=float)
    if xs.size < 2 or np.any(xs <= 0.0):
        raise DomainError("need at least two positive x values")
    ys = np.log([fn(float(x)) for x in xs])
    slope, _ = np.polyfit(np.log(xs), ys, 1)
    return float(slope)


def locate_crossover(nu: float, x_min: float = 1e-3, x_max: float = 1e2,
                     count: int = 200, rel_tol: float = 1e-10) -> Optional[float]:
    """
    First x where Luke's lower bound on K_ν overtakes the eq6 bound.

    Scans a log grid for a sign change of ln(eq6) − ln(luke) from positive
    to negative and refines it by bisection in ln x. Returns None when the
    order does not flip on [x_min, x_max].
    """
    _require_envelope_order(nu)
    _require_positive("x_min", x_min)
    if not x_max > x_min:
        raise DomainError("x_max must exceed x_min")

    def gap(x: float) -> float:
        return math.log(theorem_bessel_bound(nu, x)) - math.log(luke_lower_bessel(nu, x))

    grid = np.geomspace(x_min, x_max, count)
    gaps = [gap(float(x)) for x in grid]
    for i in range(len(grid) - 1):
        if gaps[i] > 0.0 >= gaps[i + 1]:
            lo, hi = math.log(grid[i]), math.log(grid[i + 1])
            while hi - lo > rel_tol:
                mid = 0.5 * (lo + hi)
                if gap(math.exp(mid)) > 0.0:
                    lo = mid
                else:
                    hi = mid
            crossover = math.exp(0.5 * (lo + hi))
            logger.info(f"Crossover for nu={nu}: eq6 bound better below x*={crossover:.10g}")
            return crossover
    logger.info(f"No crossover for nu={nu} on [{x_min}, {x_max}]")
    return None

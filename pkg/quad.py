"""
Semi-infinite adaptive quadrature for exponentially decaying integrands.

integrate_exp_tail() evaluates ∫₀^∞ f(r) dr when f behaves like r^α near the
origin (α > −1) and decays at least like e^{−λr} at infinity. Three steps:

1. The algebraic singularity at the origin is removed by r = w^p with
   p = 1/(α+1); the transformed integrand p·w^{p−1}·f(w^p) is bounded at w = 0.
2. The range is truncated where the envelope e^{−λr} drops below abs_tol and
   cut at geometric breakpoints r = s·2^k (s = min(1, 1/λ)), so that neither
   the scale 1 of the kernel singularity nor the decay scale 1/λ is missed.
3. Every piece is integrated with a 15-point Gauss–Kronrod rule with the
   embedded 7-point Gauss rule as error estimate; pieces carrying more than
   their share of the error are bisected, pass after pass.

Integrands are vectorised: f receives a 1-d numpy array of r values.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Tuple

import numpy as np

from errors import AccuracyError, DomainError

logger = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]

# Kronrod abscissae on [-1, 1] (positive half, descending) and weights
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
# 7-point Gauss weights, living on _XGK[1], _XGK[3], _XGK[5], _XGK[7]
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-node layout: -x0 .. -x6, 0, x6 .. x0
_NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
_KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
_GAUSS_WEIGHTS = np.zeros(15)
_GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
_GAUSS_WEIGHTS[7] = _WG[3]
_GAUSS_WEIGHTS[[9, 11, 13]] = _WG[2::-1]

_EPS = np.finfo(float).eps
_TINY = np.finfo(float).tiny
_BREAKPOINT_DEPTH = 8


@dataclass(frozen=True)
class QuadConfig:
    """
    Tolerances and limits of integrate_exp_tail.

    Attributes:
        rel_tol: Requested relative accuracy.
        abs_tol: Absolute accuracy floor; also sets the tail truncation point.
        max_refinements: Maximum number of bisection passes.
        tail_cutoff: Explicit truncation point in r; derived from the decay
            rate when None.
        max_intervals: Hard cap on the number of live subintervals.
    """
    rel_tol: float = 1e-10
    abs_tol: float = 1e-300
    max_refinements: int = 60
    tail_cutoff: Optional[float] = None
    max_intervals: int = 4000

    def __post_init__(self):
        if not (self.rel_tol > 0.0 and math.isfinite(self.rel_tol)):
            raise DomainError("rel_tol must be positive")
        if not self.abs_tol > 0.0:
            raise DomainError("abs_tol must be positive")
        if self.max_refinements < 1:
            raise DomainError("max_refinements must be at least 1")
        if self.tail_cutoff is not None and not self.tail_cutoff > 0.0:
            raise DomainError("tail_cutoff must be positive")
        if self.max_intervals < 2:
            raise DomainError("max_intervals must be at least 2")


@dataclass(frozen=True)
class EvalResult:
    """A computed value with an a-posteriori error estimate."""
    value: float
    err_estimate: float
    n_evals: int

    @property
    def rel_err(self) -> float:
        """err_estimate relative to |value| (inf when value is zero)."""
        if self.value == 0.0:
            return math.inf if self.err_estimate > 0.0 else 0.0
        return self.err_estimate / abs(self.value)


DEFAULT_CONFIG = QuadConfig()


def transformed_integrand(f: Integrand, alpha: float) -> Integrand:
    """
    Return g(w) = p·w^{p−1}·f(w^p) with p = 1/(α+1).

    For f(r) ~ r^α at the origin, g is bounded at w = 0. For α == 0 the
    substitution is the identity and f itself is returned.
    """
    if alpha <= -1.0:
        raise DomainError("singularity exponent must exceed -1")
    if alpha == 0.0:
        return f
    p = 1.0 / (alpha + 1.0)

    def g(w: np.ndarray) -> np.ndarray:
        r = np.power(w, p)
        return p * np.power(w, p - 1.0) * f(r)

    return g


def _gauss_kronrod(g: Integrand, a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Apply the 15-point Kronrod rule to many intervals at once."""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    points = center[:, None] + half[:, None] * _NODES[None, :]
    values = np.asarray(g(points.ravel()), dtype=float).reshape(points.shape)
    if not np.all(np.isfinite(values)):
        bad = points[~np.isfinite(values)]
        logger.error(f"Integrand is not finite at {bad[:3]}")
        raise AccuracyError(f"integrand is not finite at w={bad[0]:.6g}")

    kronrod = half * (values @ _KRONROD_WEIGHTS)
    gauss = half * (values @ _GAUSS_WEIGHTS)
    mean = kronrod / np.where(half > 0.0, 2.0 * half, 1.0)
    resabs = np.abs(half) * (np.abs(values) @ _KRONROD_WEIGHTS)
    resasc = np.abs(half) * (np.abs(values - mean[:, None]) @ _KRONROD_WEIGHTS)

    err = np.abs(kronrod - gauss)
    scaled = np.where(
        (resasc > 0.0) & (err > 0.0),
        resasc * np.minimum(1.0, np.power(200.0 * err / np.where(resasc > 0.0, resasc, 1.0), 1.5)),
        err,
    )
    roundoff = 50.0 * _EPS * resabs
    scaled = np.where(resabs > _TINY / (50.0 * _EPS), np.maximum(roundoff, scaled), scaled)
    return kronrod, scaled


def _tail_point(f: Integrand, decay_rate: float, cfg: QuadConfig) -> float:
    if cfg.tail_cutoff is not None:
        return cfg.tail_cutoff
    cutoff = -math.log(cfg.abs_tol) / decay_rate
    # polynomial growth in front of the exponential can push the tail out
    for _ in range(8):
        probe = abs(float(np.asarray(f(np.array([cutoff])))[0]))
        if not probe * cutoff > cfg.abs_tol:
            break
        cutoff *= 2.0
        logger.debug(f"Integrand still above abs_tol at tail; extending cutoff to {cutoff:.6g}")
    return cutoff


def _initial_breakpoints(decay_rate: float, upper: float, extra: Iterable[float]) -> np.ndarray:
    scale = min(1.0, 1.0 / decay_rate)
    points = [0.0, upper]
    k = -_BREAKPOINT_DEPTH
    while True:
        r = scale * 2.0 ** k
        if r >= upper:
            break
        points.append(r)
        k += 1
    points.extend(p for p in extra if 0.0 < p < upper)
    return np.unique(np.asarray(points, dtype=float))


def integrate_exp_tail(
    f: Integrand,
    decay_rate: float,
    singularity_exponent: float = 0.0,
    cfg: Optional[QuadConfig] = None,
    breakpoints: Iterable[float] = (),
    upper: Optional[float] = None,
) -> EvalResult:
    """
    Integrate f over [0, ∞) (or [0, upper]) for an exponentially decaying f.

    Args:
        f: Vectorised integrand in r.
        decay_rate: Known exponential decay rate λ > 0 of f.
        singularity_exponent: α > −1 with f(r) ~ r^α as r → 0.
        cfg: Tolerances; the module default when None.
        breakpoints: Extra r points where f is not smooth (kinks, nodes).
        upper: Finite end of the support of f, if any.

    Returns:
        EvalResult: value, summed Gauss–Kronrod error estimate, evaluation count.

    Raises:
        DomainError: If α <= −1 or λ <= 0.
        AccuracyError: If the tolerance is not met within cfg.max_refinements
            passes or cfg.max_intervals pieces; carries the best estimate.
    """
    cfg = cfg or DEFAULT_CONFIG
    alpha = singularity_exponent
    if not alpha > -1.0:
        logger.error(f"Singularity exponent {alpha} is not integrable")
        raise DomainError("singularity exponent must exceed -1")
    if not (decay_rate > 0.0 and math.isfinite(decay_rate)):
        logger.error(f"Decay rate {decay_rate} is not positive")
        raise DomainError("decay rate must be positive")

    cutoff = _tail_point(f, decay_rate, cfg)
    if upper is not None:
        if not upper > 0.0:
            raise DomainError("upper limit must be positive")
        cutoff = min(cutoff, upper)

    g = transformed_integrand(f, alpha)
    edges = _initial_breakpoints(decay_rate, cutoff, breakpoints)
    if alpha != 0.0:
        edges = np.power(edges, alpha + 1.0)

    a, b = edges[:-1], edges[1:]
    values, errors = _gauss_kronrod(g, a, b)
    n_evals = 15 * len(a)

    for refinement in range(cfg.max_refinements + 1):
        total = float(np.sum(values))
        total_err = float(np.sum(errors))
        tolerance = max(cfg.rel_tol * abs(total), cfg.abs_tol)
        logger.debug(
            f"pass {refinement}: {len(a)} intervals, value={total:.15g}, err={total_err:.3g}"
        )
        if total_err <= tolerance:
            return EvalResult(value=total, err_estimate=total_err, n_evals=n_evals)
        if refinement == cfg.max_refinements or len(a) >= cfg.max_intervals:
            break

        split = errors > tolerance / len(a)
        split[np.argmax(errors)] = True
        mid = 0.5 * (a[split] + b[split])
        left_vals, left_errs = _gauss_kronrod(g, a[split], mid)
        right_vals, right_errs = _gauss_kronrod(g, mid, b[split])
        n_evals += 30 * int(np.count_nonzero(split))

        keep = ~split
        a = np.concatenate([a[keep], a[split], mid])
        b = np.concatenate([b[keep], mid, b[split]])
        values = np.concatenate([values[keep], left_vals, right_vals])
        errors = np.concatenate([errors[keep], left_errs, right_errs])

    best = EvalResult(value=total, err_estimate=total_err, n_evals=n_evals)
    logger.error(
        f"Quadrature did not converge: value={total:.15g}, err={total_err:.3g}, "
        f"tolerance={tolerance:.3g}, intervals={len(a)}"
    )
    raise AccuracyError(
        f"quadrature did not reach rel_tol={cfg.rel_tol:g} "
        f"(estimate {total:.15g} +/- {total_err:.3g})",
        best_estimate=best,
    )

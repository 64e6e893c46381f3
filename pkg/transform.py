"""
Numerical Krätzel transform L_ν^(n){f}(z) = ∫₀^∞ λ_ν^(n)(zt) f(t) dt for real z > 0.

The outer integral runs through integrate_exp_tail with decay rate z (plus the
decay rate of f for the builtin integrands); every kernel value λ_ν^(n)(zt)
is itself a quadrature, memoised per distinct zt within one transform.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from tqdm import tqdm

from errors import AccuracyError, DomainError, InputFormatError, KratzelError
from kernel import KernelParams, kratzel_kernel
from quad import DEFAULT_CONFIG, EvalResult, QuadConfig, integrate_exp_tail
from specfun import ln_gamma

logger = logging.getLogger(__name__)

BUILTINS = ('exp-decay', 'power-exp')


@dataclass(frozen=True)
class FunctionSpec:
    """
    An integrand for the transform.

    kind 'exp-decay' is e^{−μt}; 'power-exp' is t^k e^{−μt} (k = power > −1);
    'sampled' interpolates (nodes, values) linearly, holds the first value on
    (0, t_0] and is zero beyond the last node.
    """
    kind: str
    mu: float = 1.0
    power: float = 0.0
    nodes: Optional[tuple] = None
    values: Optional[tuple] = None

    def __post_init__(self):
        if self.kind in BUILTINS:
            if not (math.isfinite(self.mu) and self.mu >= 0.0):
                raise DomainError("mu must be non-negative")
            if not (math.isfinite(self.power) and self.power > -1.0):
                raise DomainError("power must exceed -1")
        elif self.kind == 'sampled':
            _check_samples(self.nodes, self.values)
        else:
            raise DomainError(f"unknown function kind {self.kind!r}; expected one of {BUILTINS + ('sampled',)}")

    @classmethod
    def exp_decay(cls, mu: float = 1.0) -> 'FunctionSpec':
        return cls(kind='exp-decay', mu=mu)

    @classmethod
    def power_exp(cls, power: float, mu: float = 1.0) -> 'FunctionSpec':
        return cls(kind='power-exp', mu=mu, power=power)

    @classmethod
    def sampled(cls, nodes: Sequence[float], values: Sequence[float]) -> 'FunctionSpec':
        return cls(kind='sampled', nodes=tuple(float(t) for t in nodes),
                   values=tuple(float(v) for v in values))

    def __call__(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind == 'exp-decay':
            return np.exp(-self.mu * t)
        if self.kind == 'power-exp':
            return np.power(t, self.power) * np.exp(-self.mu * t)
        return np.interp(t, self.nodes, self.values, right=0.0)

    @property
    def decay_rate(self) -> float:
        return self.mu if self.kind in BUILTINS else 0.0

    @property
    def singularity_exponent(self) -> float:
        return self.power if self.kind == 'power-exp' else 0.0

    @property
    def support_end(self) -> Optional[float]:
        return self.nodes[-1] if self.kind == 'sampled' else None

    def laplace(self, z: float) -> Optional[float]:
        """Closed-form Laplace transform at z for the builtins, None for samples."""
        if self.kind == 'exp-decay':
            return 1.0 / (self.mu + z)
        if self.kind == 'power-exp':
            k = self.power
            return math.exp(ln_gamma(k + 1.0) - (k + 1.0) * math.log(self.mu + z))
        return None


def _check_samples(nodes, values) -> None:
    if nodes is None or values is None:
        raise DomainError("sampled functions need nodes and values")
    if len(nodes) != len(values):
        raise DomainError("nodes and values must have the same length")
    if len(nodes) < 2:
        raise DomainError("at least two nodes are required")
    t = np.asarray(nodes, dtype=float)
    f = np.asarray(values, dtype=float)
    if not (np.all(np.isfinite(t)) and np.all(np.isfinite(f))):
        raise DomainError("nodes and values must be finite")
    if t[0] <= 0.0:
        raise DomainError("nodes must be positive")
    if np.any(np.diff(t) <= 0.0):
        raise DomainError("nodes must be strictly increasing")


def load_sampled_csv(path: str) -> FunctionSpec:
    """
    Read a two-column CSV (t, f) with a header row into a sampled FunctionSpec.

    Raises:
        InputFormatError: On a wrong column count, a non-numeric cell,
            non-positive or non-increasing nodes; carries the line number.
    """
    logger.info(f"Reading sampled function from {path}")
    try:
        frame = pd.read_csv(path, dtype=str, skipinitialspace=True, skip_blank_lines=False)
    except FileNotFoundError:
        logger.error(f"Input file not found: {path}")
        raise
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        logger.error(f"Malformed CSV {path}: {e}")
        raise InputFormatError(f"malformed CSV: {e}")

    # rows stay aligned with physical lines; only trailing blanks are dropped
    blank = frame.isna().all(axis=1).to_numpy()
    while len(frame) and blank[len(frame) - 1]:
        frame = frame.iloc[:-1]
    interior = np.flatnonzero(blank[:len(frame)])
    if len(interior):
        raise InputFormatError("blank line", line=int(interior[0]) + 2)

    if frame.shape[1] != 2:
        raise InputFormatError(f"expected 2 columns (t, f), found {frame.shape[1]}", line=1)
    if len(frame) < 2:
        raise InputFormatError("at least two data rows are required", line=len(frame) + 1)

    numeric = frame.apply(pd.to_numeric, errors='coerce')
    for row, (t, f) in enumerate(numeric.itertuples(index=False, name=None)):
        line = row + 2
        if not (math.isfinite(t) and math.isfinite(f)):
            raise InputFormatError(f"non-numeric or non-finite entry {tuple(frame.iloc[row])}", line=line)
        if t <= 0.0:
            raise InputFormatError("nodes must be positive", line=line)
        if row > 0 and t <= numeric.iat[row - 1, 0]:
            raise InputFormatError("nodes must be strictly increasing", line=line)

    logger.debug(f"Loaded {len(numeric)} nodes on [{numeric.iat[0, 0]}, {numeric.iat[-1, 0]}]")
    return FunctionSpec.sampled(numeric.iloc[:, 0].tolist(), numeric.iloc[:, 1].tolist())


def kratzel_transform(f: FunctionSpec, p: KernelParams, z: float,
                      cfg: Optional[QuadConfig] = None) -> EvalResult:
    """
    Krätzel transform of f at z.

    Args:
        f (FunctionSpec): Integrand.
        p (KernelParams): Kernel index (n, ν).
        z (float): Positive transform variable.
        cfg (QuadConfig): Settings used for both the outer and the kernel quadratures.

    Returns:
        EvalResult: value with the outer error plus the propagated kernel error.

    Raises:
        DomainError: If z is not positive.
        AccuracyError: If the integral diverges or a quadrature does not converge.
    """
    cfg = cfg or DEFAULT_CONFIG
    if not (math.isfinite(z) and z > 0.0):
        logger.error(f"Transform requested at z={z}")
        raise DomainError("z must be positive")

    # λ_ν^(n)(x) ~ x^{nν} at the origin when ν < 0, bounded or logarithmic otherwise
    exponent = min(p.n * p.nu, 0.0) + f.singularity_exponent
    if exponent <= -1.0:
        logger.error(f"Transform integrand ~ t^{exponent} at the origin")
        raise AccuracyError(f"transform integral diverges at the origin (integrand ~ t^{exponent:g})")

    kernel_cache: Dict[float, EvalResult] = {}

    def kernel_at(x: float) -> EvalResult:
        cached = kernel_cache.get(x)
        if cached is None:
            cached = kratzel_kernel(p, x, cfg)
            kernel_cache[x] = cached
        return cached

    def integrand(t: np.ndarray) -> np.ndarray:
        kernel_values = np.array([kernel_at(float(z * ti)).value for ti in t])
        return kernel_values * f(t)

    breakpoints = f.nodes or ()
    outer = integrate_exp_tail(
        integrand,
        decay_rate=z + f.decay_rate,
        singularity_exponent=exponent,
        cfg=cfg,
        breakpoints=breakpoints,
        upper=f.support_end,
    )
    inner_rel = max((k.rel_err for k in kernel_cache.values() if k.value > 0.0), default=0.0)
    err = outer.err_estimate + abs(outer.value) * inner_rel
    n_evals = outer.n_evals + sum(k.n_evals for k in kernel_cache.values())
    logger.debug(
        f"L_{p.nu}^({p.n}){{{f.kind}}}({z}) = {outer.value:.15g} +/- {err:.3g} "
        f"({len(kernel_cache)} kernel values)"
    )
    return EvalResult(value=outer.value, err_estimate=err, n_evals=n_evals)


@dataclass
class TransformRow:
    z: float
    value: float
    err_estimate: float
    error: str = ''

    def to_row(self) -> Dict[str, object]:
        return {'z': self.z, 'value': self.value, 'err_estimate': self.err_estimate, 'error': self.error}


TRANSFORM_COLUMNS = ['z', 'value', 'err_estimate', 'error']


def transform_grid(f: FunctionSpec, p: KernelParams, z_values: Sequence[float],
                   cfg: Optional[QuadConfig] = None, progress: bool = False) -> List[TransformRow]:
    """
    Transform f at every z, in order; a failing point is recorded on its row
    (value and err_estimate NaN) without stopping the sweep.

    Raises:
        DomainError: If z_values is not strictly increasing and positive.
    """
    z = np.asarray(list(z_values), dtype=float)
    if z.size and (np.any(z <= 0.0) or np.any(np.diff(z) <= 0.0)):
        logger.error(f"Invalid z grid {z}")
        raise DomainError("z values must be positive and strictly increasing")

    rows: List[TransformRow] = []
    for zi in tqdm(z, desc="transform", unit="z", disable=not progress):
        try:
            result = kratzel_transform(f, p, float(zi), cfg)
            rows.append(TransformRow(float(zi), result.value, result.err_estimate))
        except KratzelError as e:
            logger.warning(f"Transform failed at z={zi}: {e}")
            rows.append(TransformRow(float(zi), math.nan, math.nan, str(e)))
    logger.info(f"Transformed {len(rows)} points, {sum(1 for r in rows if r.error)} failed")
    return rows

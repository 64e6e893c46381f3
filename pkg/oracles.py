#!/usr/bin/env python3
"""
High-precision reference values for the tests, computed with mpmath.

    python oracles.py            # print a short table of reference values
"""

import logging
import sys

import mpmath
from mpmath import mp, mpf

logger = logging.getLogger(__name__)

# K_0(1) to 38 digits
K0_AT_ONE = '0.42102443824070833333562737921260903614'

DEFAULT_DPS = 30


def reference_bessel_k(nu: float, x: float, dps: int = DEFAULT_DPS) -> float:
    """K_ν(x) from mpmath.besselk."""
    with mp.workdps(dps):
        return float(mpmath.besselk(mpf(nu), mpf(x)))


def _kernel_mp(n: int, nu, x):
    if n == 2:
        return 2 * (x / 2) ** nu * mpmath.besselk(nu, x)
    exponent = nu - mpf(1) / n

    # t = 1 + r and t^n − 1 = r·q(r), q smooth with q(0) = n
    def q(r):
        return mpmath.expm1(n * mpmath.log1p(r)) / r if r else mpf(n)

    if exponent < 0:
        # r = w^p absorbs the r^exponent singularity at the origin
        p = 1 / (exponent + 1)

        def integrand(w):
            r = w ** p
            return p * q(r) ** exponent * mpmath.exp(-x * r)

        integral = mpmath.quad(integrand, [0, 1, mpmath.inf])
    else:
        integral = mpmath.quad(lambda r: (r * q(r)) ** exponent * mpmath.exp(-x * r), [0, 1, mpmath.inf])
    prefactor = (2 * mpmath.pi) ** (mpf(n - 1) / 2) * mpmath.sqrt(n) * (x / n) ** (n * nu)
    return prefactor * mpmath.exp(-x) * integral / mpmath.gamma(nu + 1 - mpf(1) / n)


def reference_kernel(n: int, nu: float, x: float, dps: int = DEFAULT_DPS) -> float:
    """
    λ_ν^(n)(x) at extended precision: the Bessel relation for n = 2,
    tanh-sinh quadrature of the integral representation otherwise.
    """
    with mp.workdps(dps):
        return float(_kernel_mp(n, mpf(nu), mpf(x)))


def reference_transform(n: int, nu: float, z: float, mu: float = 1.0, power: float = 0.0,
                        dps: int = 20) -> float:
    """Krätzel transform of t^power·e^{−μt} at z by nested mpmath quadrature."""
    with mp.workdps(dps):
        nu_, z_, mu_, k = mpf(nu), mpf(z), mpf(mu), mpf(power)
        return float(mpmath.quad(
            lambda t: _kernel_mp(n, nu_, z_ * t) * t ** k * mpmath.exp(-mu_ * t),
            [0, 1, mpmath.inf],
        ))


def reference_gamma_ratio(x: float, a: float, dps: int = DEFAULT_DPS) -> float:
    """Γ(x+a)/Γ(x+1)."""
    with mp.workdps(dps):
        return float(mpmath.gammaprod([mpf(x) + mpf(a)], [mpf(x) + 1]))


def main() -> int:
    logging.basicConfig(level=logging.INFO,
                        format='%(asctime)s - %(levelname)s - %(message)s',
                        datefmt='%Y-%m-%d %H:%M:%S')
    logger.info("Computing reference values")
    print(f"K_0(1)            = {K0_AT_ONE}")
    for nu, x in ((0.0, 0.1), (0.25, 1.0), (0.5, 1.0), (1.0, 10.0)):
        print(f"K_{nu}({x}) = {reference_bessel_k(nu, x):.17g}")
    for n, nu, x in ((3, 0.0, 1.0), (3, 1.0 / 3.0, 2.0), (4, 0.5, 1.0)):
        print(f"lambda_{nu:.6g}^({n})({x}) = {reference_kernel(n, nu, x):.17g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

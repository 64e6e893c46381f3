#!/usr/bin/env python3
"""
Krätzel Tools command line

Evaluates the Krätzel kernel λ_ν^(n)(x) and the Bessel function K_ν(x), tabulates
the gamma-ratio bounds and envelopes of K_ν, verifies every inequality over a
parameter sweep, and computes Krätzel transforms. Tables are written as CSV.

Usage:
    python kratzel_cli.py eval --kind bessel --nu 0.5 --x 1
    python kratzel_cli.py bounds --nu 0 --x-min 0.01 --x-max 100 --x-count 40
    python kratzel_cli.py verify [--n 2 3] [--nu 0 0.25 1] [--x-count 40]
    python kratzel_cli.py transform --builtin exp-decay --mu 1 --n 1 --nu 0.5 --z 1 3
    python kratzel_cli.py rates --nu 0.1 0.3

Common options:
    --rel-tol <tol>      Quadrature relative tolerance (default 1e-10, env KRATZEL_RTOL)
    --out <path|stdout>  Where to write the CSV table (default: stdout)
    --no-progress        Hide the progress bar
    -v, --verbose        Enable debug logging

Exit codes:
    0  success
    1  verification failure (at least one inequality violated)
    2  usage or domain error
    3  indeterminate numerics (quadrature did not converge)
"""

import argparse
import logging
import math
import sys
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from bounds import (
    REPORT_COLUMNS, Direction, bound_direction, corollary_envelope,
    locate_crossover, loglog_slope, luke_envelope, luke_lower_bessel, theorem_bessel_bound,
    verify_point, relative_margin,
)
from config import Config
from errors import AccuracyError, DomainError, InputFormatError
from kernel import BesselArg, KernelParams, bessel_k, kratzel_kernel
from quad import QuadConfig
from transform import BUILTINS, TRANSFORM_COLUMNS, FunctionSpec, load_sampled_csv, transform_grid

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_INDETERMINATE = 3

BOUNDS_COLUMNS = [
    'x', 'exact', 'eq6_bound',
    'corollary_lower', 'corollary_upper', 'luke_lower', 'luke_upper',
    'eq6_margin', 'corollary_lower_margin', 'corollary_upper_margin',
    'luke_lower_margin', 'luke_upper_margin',
]
RATES_COLUMNS = ['nu', 'eq6_slope', 'luke_slope', 'crossover_x']


def setup_logging(verbose: bool = False) -> None:
    """
    Set up logging configuration.

    Args:
        verbose (bool): If True, set logging level to DEBUG. Otherwise, set to INFO.
    """
    log_level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(level=log_level,
                        format='%(asctime)s - %(levelname)s - %(message)s',
                        datefmt='%Y-%m-%d %H:%M:%S')
    logging.getLogger().setLevel(log_level)


@dataclass(frozen=True)
class SweepSpec:
    """Parameter sweep for the verify command."""
    n_values: Tuple[int, ...]
    nu_values: Tuple[float, ...]
    x_min: float
    x_max: float
    x_count: int
    x_log: bool
    rel_tol: float
    nu_eq_recip_n: bool = False

    def __post_init__(self):
        if not self.n_values or any(n < 2 for n in self.n_values):
            raise DomainError("n values must be integers >= 2")
        if any(not (math.isfinite(nu) and nu >= 0.0) for nu in self.nu_values):
            raise DomainError("nu values must be non-negative")
        if not self.nu_values and not self.nu_eq_recip_n:
            raise DomainError("at least one nu value is required")
        if not self.rel_tol > 0.0:
            raise DomainError("rel_tol must be positive")
        x_grid(self.x_min, self.x_max, self.x_count, self.x_log)

    def orders(self, n: int) -> List[float]:
        values = list(self.nu_values)
        if self.nu_eq_recip_n and 1.0 / n not in values:
            values.append(1.0 / n)
        return sorted(values)

    def points(self) -> Iterator[Tuple[int, float, float]]:
        xs = x_grid(self.x_min, self.x_max, self.x_count, self.x_log)
        for n in self.n_values:
            for nu in self.orders(n):
                for x in xs:
                    yield n, nu, float(x)

    def size(self) -> int:
        return sum(len(self.orders(n)) for n in self.n_values) * self.x_count


def x_grid(x_min: float, x_max: float, count: int, log: bool) -> np.ndarray:
    """Evaluation grid on [x_min, x_max] with count points."""
    if count < 2:
        logger.error(f"Grid count {count} is below 2")
        raise DomainError("x-count must be at least 2")
    if not (math.isfinite(x_min) and x_min > 0.0):
        raise DomainError("x-min must be positive")
    if not (math.isfinite(x_max) and x_max > x_min):
        raise DomainError("x-max must exceed x-min")
    return np.geomspace(x_min, x_max, count) if log else np.linspace(x_min, x_max, count)


def write_table(rows: List[Dict[str, object]], columns: Sequence[str], out: str) -> None:
    """Write rows as CSV with 15 significant digits; empty fields for NaN."""
    frame = pd.DataFrame(rows, columns=list(columns))
    text = frame.to_csv(index=False, float_format='%.15g', lineterminator='\n')
    if out in ('-', 'stdout'):
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        try:
            with open(out, 'w', encoding='utf-8', newline='') as f:
                f.write(text)
        except OSError as e:
            logger.error(f"Could not write {out}: {e}")
            raise
        logger.info(f"Wrote {len(rows)} rows to {out}")


def _progress_enabled(args: argparse.Namespace) -> bool:
    return not args.no_progress and sys.stderr.isatty()


def _resolve_nu(args: argparse.Namespace, n: int) -> float:
    if args.nu_eq_recip_n:
        return 1.0 / n
    if args.nu is None:
        raise DomainError("either --nu or --nu-eq-recip-n is required")
    return args.nu


def _x_values(args: argparse.Namespace) -> np.ndarray:
    if args.x is not None:
        if not args.x > 0.0:
            raise DomainError("x must be positive")
        return np.array([args.x])
    if args.x_min is None or args.x_max is None:
        raise DomainError("give either --x or --x-min/--x-max")
    return x_grid(args.x_min, args.x_max, args.x_count, args.x_log)


def cmd_eval(args: argparse.Namespace, cfg: QuadConfig) -> int:
    """Print one kernel or Bessel value with 15 significant digits."""
    n = args.n if args.n is not None else 2
    nu = _resolve_nu(args, n)
    if args.x is None:
        raise DomainError("--x is required")
    if args.kind == 'bessel':
        result = bessel_k(BesselArg(nu, args.x), cfg)
    else:
        result = kratzel_kernel(KernelParams(n, nu), args.x, cfg)
    logger.info(f"{args.kind}(n={n}, nu={nu}, x={args.x}) evaluated with {result.n_evals} integrand calls")
    print(f"{result.value:.15g}")
    print(f"err_estimate={result.err_estimate:.3g}")
    return EXIT_OK


def _bounds_row(nu: float, x: float, cfg: QuadConfig) -> Dict[str, object]:
    exact = bessel_k(BesselArg(nu, x), cfg).value
    row: Dict[str, object] = {'x': x, 'exact': exact}
    direction = bound_direction(2, nu)
    if direction.admits(x):
        eq6 = theorem_bessel_bound(nu, x)
        row['eq6_bound'] = eq6
        row['eq6_margin'] = relative_margin(direction.kind, exact, eq6)
    if nu < 0.5:
        # both envelopes bound √(2x/π)e^x K_ν(x)
        scale = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x)
        c_low, c_up = corollary_envelope(nu, x)
        l_low, l_up = luke_envelope(nu, x)
        for name, value, kind in (
            ('corollary_lower', scale * c_low, Direction.STRICT_LOWER),
            ('corollary_upper', scale * c_up, Direction.STRICT_UPPER),
            ('luke_lower', scale * l_low, Direction.STRICT_LOWER),
            ('luke_upper', scale * l_up, Direction.STRICT_UPPER),
        ):
            row[name] = value
            row[f'{name}_margin'] = relative_margin(kind, exact, value)
    return row


def cmd_bounds(args: argparse.Namespace, cfg: QuadConfig) -> int:
    """
    Tabulate K_ν(x) against the eq6 bound, the corollary envelope and Luke's
    envelope, all expressed as bounds on K_ν(x). Columns outside their
    domain are left empty.
    """
    nu = _resolve_nu(args, 2)
    if not (math.isfinite(nu) and nu >= 0.0):
        raise DomainError("nu must be non-negative")
    xs = _x_values(args)
    logger.info(f"Tabulating bounds for nu={nu} at {len(xs)} points")
    rows = [_bounds_row(nu, float(x), cfg)
            for x in tqdm(xs, desc="bounds", unit="x", disable=not _progress_enabled(args))]
    write_table(rows, BOUNDS_COLUMNS, args.out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, cfg: QuadConfig) -> int:
    """Verify every applicable inequality over the sweep; see module docstring for exit codes."""
    spec = SweepSpec(
        n_values=tuple(args.n or (2, 3)),
        nu_values=tuple(args.nu if args.nu is not None else (0.0, 0.25, 1.0)),
        x_min=args.x_min if args.x_min is not None else 1e-2,
        x_max=args.x_max if args.x_max is not None else 1e2,
        x_count=args.x_count,
        x_log=args.x_log,
        rel_tol=cfg.rel_tol,
        nu_eq_recip_n=args.nu_eq_recip_n,
    )
    logger.info(f"Verifying {spec.size()} parameter points")

    rows = []
    checked = failed = indeterminate = 0
    for n, nu, x in tqdm(spec.points(), total=spec.size(), desc="verify", unit="pt",
                         disable=not _progress_enabled(args)):
        for report in verify_point(n, nu, x, cfg):
            checked += 1
            if report.indeterminate:
                indeterminate += 1
            elif not report.satisfied:
                failed += 1
            rows.append(report.to_row())

    write_table(rows, REPORT_COLUMNS, args.out)
    summary = f"checked={checked} failed={failed} indeterminate={indeterminate}"
    print(summary, file=sys.stderr)
    logger.info(summary)
    if failed:
        return EXIT_FAILED
    if indeterminate:
        return EXIT_INDETERMINATE
    return EXIT_OK


def _function_spec(args: argparse.Namespace) -> FunctionSpec:
    if args.input and args.builtin:
        raise DomainError("give either --input or --builtin, not both")
    if args.input:
        return load_sampled_csv(args.input)
    if args.builtin == 'power-exp':
        return FunctionSpec.power_exp(args.power, args.mu)
    if args.builtin == 'exp-decay':
        return FunctionSpec.exp_decay(args.mu)
    raise DomainError("either --input or --builtin is required")


def cmd_transform(args: argparse.Namespace, cfg: QuadConfig) -> int:
    """Krätzel transform at each --z, rows in z order."""
    f = _function_spec(args)
    n = args.n if args.n is not None else 2
    p = KernelParams(n, _resolve_nu(args, n))
    if not args.z:
        raise DomainError("--z needs at least one value")
    rows = transform_grid(f, p, args.z, cfg, progress=_progress_enabled(args))
    write_table([row.to_row() for row in rows], TRANSFORM_COLUMNS, args.out)
    if any(row.error for row in rows):
        return EXIT_INDETERMINATE
    return EXIT_OK


def cmd_rates(args: argparse.Namespace, cfg: QuadConfig) -> int:
    """Small-x log-log slopes of the eq6 and Luke bounds and their crossover."""
    x_min = args.x_min if args.x_min is not None else 1e-4
    x_max = args.x_max if args.x_max is not None else 1e-2
    xs = x_grid(x_min, x_max, args.x_count, True)
    rows = []
    for nu in args.nu or (0.1, 0.25, 0.3):
        if not 0.0 <= nu < 0.5:
            raise DomainError("nu must lie in [0, 1/2)")
        crossover = locate_crossover(nu)
        rows.append({
            'nu': nu,
            'eq6_slope': loglog_slope(lambda x: theorem_bessel_bound(nu, x), xs),
            'luke_slope': loglog_slope(lambda x: luke_lower_bessel(nu, x), xs),
            'crossover_x': crossover if crossover is not None else math.nan,
        })
    write_table(rows, RATES_COLUMNS, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rel-tol", type=float, help="Quadrature relative tolerance (default 1e-10)")
    common.add_argument("--out", default="stdout", help="Output CSV path, or 'stdout' (default)")
    common.add_argument("--no-progress", action="store_true", help="Hide progress bars")
    common.add_argument("-v", "--verbose", action="store_true", help="Enable debug logging")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--x-min", type=float, help="Smallest x of the grid")
    grid.add_argument("--x-max", type=float, help="Largest x of the grid")
    grid.add_argument("--x-count", type=int, default=40, help="Number of grid points (default: 40)")
    grid.add_argument("--x-log", action=argparse.BooleanOptionalAction, default=True,
                      help="Logarithmic grid spacing (default); --no-x-log for linear")

    parser = argparse.ArgumentParser(
        description="Krätzel kernel, Bessel K and their gamma-ratio bounds.",
        epilog="Exit codes: 0 ok, 1 verification failure, 2 usage/domain error, 3 indeterminate numerics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", parents=[common], help="Evaluate the kernel or K_nu at one point")
    p_eval.add_argument("--kind", choices=("kernel", "bessel"), required=True)
    p_eval.add_argument("--n", type=int, help="Kernel order n (default 2)")
    p_eval.add_argument("--nu", type=float, help="Order nu")
    p_eval.add_argument("--nu-eq-recip-n", action="store_true", help="Use nu = 1/n exactly")
    p_eval.add_argument("--x", type=float, help="Argument x")
    p_eval.set_defaults(handler=cmd_eval)

    p_bounds = sub.add_parser("bounds", parents=[common, grid], help="Tabulate bounds on K_nu")
    p_bounds.add_argument("--nu", type=float, help="Order nu")
    p_bounds.add_argument("--nu-eq-recip-n", action="store_true", help="Use nu = 1/2 (n = 2)")
    p_bounds.add_argument("--x", type=float, help="Single argument x instead of a grid")
    p_bounds.set_defaults(handler=cmd_bounds)

    p_verify = sub.add_parser("verify", parents=[common, grid], help="Verify all inequalities on a sweep")
    p_verify.add_argument("--n", type=int, nargs="+", help="Kernel orders (default: 2 3)")
    p_verify.add_argument("--nu", type=float, nargs="*", help="Orders nu (default: 0 0.25 1)")
    p_verify.add_argument("--nu-eq-recip-n", action=argparse.BooleanOptionalAction, default=True,
                          help="Also check nu = 1/n for each n (default on)")
    p_verify.set_defaults(handler=cmd_verify)

    p_transform = sub.add_parser("transform", parents=[common], help="Krätzel transform on a z list")
    p_transform.add_argument("--input", help="Two-column CSV (t, f) with header")
    p_transform.add_argument("--builtin", choices=BUILTINS, help="Builtin integrand")
    p_transform.add_argument("--mu", type=float, default=1.0, help="Decay rate of the builtin (default: 1)")
    p_transform.add_argument("--power", type=float, default=0.0, help="Power k of power-exp (default: 0)")
    p_transform.add_argument("--n", type=int, help="Kernel order n (default 2)")
    p_transform.add_argument("--nu", type=float, help="Order nu")
    p_transform.add_argument("--nu-eq-recip-n", action="store_true", help="Use nu = 1/n exactly")
    p_transform.add_argument("--z", type=float, nargs="+", help="Transform variables, increasing")
    p_transform.set_defaults(handler=cmd_transform)

    p_rates = sub.add_parser("rates", parents=[common], help="Small-x slopes and eq6/Luke crossover")
    p_rates.add_argument("--nu", type=float, nargs="+", help="Orders nu in [0, 1/2) (default: 0.1 0.25 0.3)")
    p_rates.add_argument("--x-min", type=float, help="Slope fit range start (default: 1e-4)")
    p_rates.add_argument("--x-max", type=float, help="Slope fit range end (default: 1e-2)")
    p_rates.add_argument("--x-count", type=int, default=20, help="Slope fit points (default: 20)")
    p_rates.set_defaults(handler=cmd_rates)

    return parser


def main(args: Optional[Sequence[str]] = None) -> int:
    """
    Main function to run the script. Returns the process exit code.
    """
    parser = build_parser()
    if args is None:
        args = sys.argv[1:]
    try:
        parsed = parser.parse_args(args)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    setup_logging(parsed.verbose)
    logger.debug(f"Arguments: {vars(parsed)}")

    try:
        cfg = Config({'rel_tol': parsed.rel_tol}).quad_config()
        return parsed.handler(parsed, cfg)
    except (DomainError, InputFormatError) as e:
        logger.error(f"{parsed.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"{parsed.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except AccuracyError as e:
        logger.error(f"{parsed.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INDETERMINATE


if __name__ == "__main__":
    sys.exit(main())

"""
Command-line interface for Affine Lab.
"""

import argparse
import inspect
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from affine_lab.config import RunConfig, apply_overrides, load_config
from affine_lab.config.loader import OUTPUT_FORMATS
from affine_lab.errors import (
    BracketError,
    ConstructionError,
    ConvexityViolation,
    NonIntegrableError,
    ParameterRangeError,
)
from affine_lab.families import (
    THEOREMS,
    TW_VARIANTS,
    VARIANTS,
    build_solution,
    check_variant,
    critical_dimension_bounds,
    solve_alpha_full,
    solve_alpha_halfspace,
    theorem_range,
    theta_of_alpha,
    thm91_alphas,
)
from affine_lab.inequalities import (
    CHECKS,
    assemble_slab,
    corpus_for,
    holder_trend,
    implied_constant,
    normalized_corpus,
    power_counterexample,
    run_corpus,
    standard_corpus,
)
from affine_lab.mameasure import (
    average_density,
    doubling_ratio,
    halving_exponent,
    john_normalize,
    ma_mass,
    sublevel,
)
from affine_lab.models import RunReport, ScanRow, Solution
from affine_lab.operator import residual_batch
from affine_lab.output import WRITERS
from affine_lab.surfaces import ConvexFamily, Quadratic, family_from_dict, load_document

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

EXIT_PASS = 0
EXIT_GATE = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

# failures of a numeric construction or estimate, reported as a failed gate
GATE_ERRORS = (NonIntegrableError, ConstructionError, BracketError, ConvexityViolation)

ROUNDTRIP_TOL = 1e-10
SLAB_ALPHA = 0.75
GRID_EPS = 1e-9


def _mark(passed: bool, message: str) -> None:
    print(f"{'✓' if passed else '✗'} {message}")


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """
    Load the run configuration and lay the command-line flags over it.

    Args:
        args: Parsed arguments

    Returns:
        RunConfig
    """
    config = load_config(args.config) if args.config else RunConfig()
    config = apply_overrides(
        config,
        theorem=getattr(args, "theorem", None),
        N=args.N,
        theta=getattr(args, "theta", None),
        variant=getattr(args, "variant", None),
        seed=args.seed,
        workers=args.workers,
        samples=args.grid,
        tol=args.tol,
        out=args.out,
    )
    if args.format:
        config = replace(config, output=replace(config.output, formats=list(args.format)))
    if getattr(args, "family", None):
        config = replace(config, family=load_document(args.family))
    return config


def resolve_solution(config: RunConfig, alpha: Optional[float] = None) -> Solution:
    """
    The solution a run is about: a theorem's family, or a family document at theta.

    Raises:
        ValueError: If neither is given, or a document comes without theta
    """
    if config.theorem is not None:
        return build_solution(config.theorem, config.N, config.theta, config.variant, alpha)
    if config.family is not None:
        family = family_from_dict(config.family)
        if config.theta is None:
            raise ValueError("A family document needs --theta")
        return Solution("document", family.dim, float(config.theta), family)
    raise ValueError("Name a family with --theorem or --family")


def resolve_family(config: RunConfig, alpha: Optional[float] = None) -> ConvexFamily:
    """Family for the measure commands; |x|^2 when none is named."""
    if config.theorem is not None:
        return resolve_solution(config, alpha).family
    if config.family is not None:
        return family_from_dict(config.family)
    return Quadratic(2 * np.eye(config.N))


def save_report(report: RunReport, config: RunConfig) -> List[Path]:
    """
    Write a report in every configured format.

    Returns:
        Paths of the written files
    """
    return [WRITERS[fmt]().write(report, config.output.path) for fmt in config.output.formats]


def cmd_verify(config: RunConfig, args: argparse.Namespace) -> RunReport:
    """Residual of one solution family at random admissible points."""
    solution = resolve_solution(config, args.alpha)
    rng = np.random.default_rng(config.seed)
    points = solution.family.sample_points(rng, config.grid.samples)
    reports = residual_batch(solution.family, solution.theta, points, config.workers)
    worst = max(abs(r.normalized) for r in reports)
    passed = worst <= config.tolerances.residual

    bundle = solution.to_dict()
    bundle.update(
        samples=config.grid.samples,
        seed=config.seed,
        max_residual=worst,
        tolerance=config.tolerances.residual,
    )
    _mark(
        passed,
        f"verify {solution.theorem} N={solution.N} θ={solution.theta:.6g}: "
        f"max normalized residual {worst:.3e} (tol {config.tolerances.residual:g})",
    )
    return RunReport("verify", [r.to_row() for r in reports], bundle, passed)


def scan_thetas(
    theorem: str, N: int, start: Optional[float], stop: Optional[float], step: float
) -> List[float]:
    """
    Open theta grid start + k * step, k >= 1, strictly below stop.

    Theorems pinned to one theta return that theta; missing ends default to
    the theorem's range.
    """
    rng = theorem_range(theorem, N)
    if rng.is_point:
        return [rng.lower]
    start = rng.lower if start is None else float(start)
    stop = rng.upper if stop is None else float(stop)
    count = int(math.floor((stop - start) / step + GRID_EPS))
    thetas = [round(start + k * step, 12) for k in range(1, count + 1)]
    return [theta for theta in thetas if theta < stop - GRID_EPS * step]


def _scan_parameters(solution: Solution) -> Dict[str, Any]:
    theorem, theta, N = solution.theorem, solution.theta, solution.N
    if theorem == "8.1":
        return {"exponent": 2 - 1 / theta}
    if theorem == "8.2":
        return {"exponent": N + 1 - 1 / theta}
    row: Dict[str, Any] = {}
    for key, value in solution.family.parameters().items():
        if value is None:
            continue
        flat = np.ravel(np.asarray(value, dtype=float))
        if flat.size == 1 and np.ndim(value) == 0:
            row[key] = float(flat[0])
        else:
            row.update({f"{key}{i + 1}": float(v) for i, v in enumerate(flat)})
    return row


def cmd_scan(config: RunConfig, args: argparse.Namespace) -> RunReport:
    """Residual gate over a theta grid of one theorem."""
    if config.theorem is None:
        raise ValueError("scan needs --theorem")
    scan = config.scan
    scan = replace(
        scan,
        start=scan.start if args.start is None else args.start,
        stop=scan.stop if args.stop is None else args.stop,
        step=scan.step if args.step is None else args.step,
    )
    theorem, N = config.theorem, config.N
    admissible = theorem_range(theorem, N)
    check_variant(theorem, config.variant)
    branches: List[Optional[float]] = [None]
    if theorem == "9.1" and config.variant not in TW_VARIANTS:
        branches = list(thm91_alphas(N))

    rows: List[ScanRow] = []
    for theta in scan_thetas(theorem, N, scan.start, scan.stop, scan.step):
        if not admissible.contains(theta):
            logger.warning(f"Skipping θ={theta}: {admissible.describe()}")
            continue
        for alpha in branches:
            solution = build_solution(theorem, N, theta, config.variant, alpha)
            rng = np.random.default_rng(config.seed)
            points = solution.family.sample_points(rng, config.grid.samples)
            reports = residual_batch(solution.family, solution.theta, points, config.workers)
            worst = max(abs(r.normalized) for r in reports)
            rows.append(
                ScanRow(
                    theorem=theorem,
                    N=N,
                    theta=solution.theta,
                    parameters=_scan_parameters(solution),
                    max_residual=worst,
                    passed=worst <= config.tolerances.residual,
                )
            )
            logger.info(f"scan {theorem} θ={solution.theta:.6g}: max residual {worst:.3e}")
    if not rows:
        raise ValueError(f"No θ of the scan grid is admissible: {admissible.describe()}")

    passed = all(row.passed for row in rows)
    failures = sum(not row.passed for row in rows)
    _mark(passed, f"scan {theorem} N={N}: {len(rows)} rows, {failures} above tolerance")
    bundle = {
        "theorem": theorem,
        "N": N,
        "range": admissible.describe(),
        "step": scan.step,
        "samples": config.grid.samples,
        "tolerance": config.tolerances.residual,
        "rows": len(rows),
    }
    return RunReport(f"scan {theorem}", [row.to_row() for row in rows], bundle, passed)


def _check_options(check: str, args: argparse.Namespace) -> Dict[str, float]:
    accepted = inspect.signature(CHECKS[check]).parameters
    options = {}
    for name in ("s", "t", "sigma"):
        value = getattr(args, name)
        if value is None:
            continue
        if name not in accepted:
            raise ValueError(f"Check {check} takes no --{name}")
        options[name] = value
    return options


def cmd_inequality(config: RunConfig, args: argparse.Namespace) -> RunReport:
    """
    One inequality check over a corpus, at a mass level and its refinement.

    An entry passes when its ratio is finite, moves by at most the stability
    tolerance under refinement and, for the checks with explicit constants,
    the inequality itself holds.
    """
    check, N = args.check, config.N
    if args.corpus == "standard":
        entries = standard_corpus(N)
    elif args.corpus == "normalized":
        entries = normalized_corpus(N)
    else:
        entries = corpus_for(check, N)
    options = _check_options(check, args)
    level = config.grid.mass_level
    coarse = run_corpus(check, entries, level, config.workers, **options)
    fine = run_corpus(check, entries, level + 1, config.workers, **options)

    rows = []
    passed = True
    for c, f in zip(coarse, fine):
        spread = abs(f.ratio - c.ratio) / max(abs(f.ratio), 1e-300) if f.ratio != c.ratio else 0.0
        ok = (
            math.isfinite(c.ratio)
            and spread <= config.tolerances.stability
            and c.passed is not False
            and f.passed is not False
        )
        row = c.to_row()
        row.update(ratio_refined=f.ratio, spread=spread, stable=ok)
        rows.append(row)
        passed = passed and ok
        _mark(ok, f"{check} on {c.family}: ratio {c.ratio:.6g} -> {f.ratio:.6g}")

    constant = implied_constant(fine)
    bundle = {
        "check": check,
        "corpus": args.corpus or "default",
        "N": N,
        "mass_level": level,
        "stability": config.tolerances.stability,
        "implied_constant": constant,
        "options": options,
    }
    _mark(passed and math.isfinite(constant), f"{check}: implied constant {constant:.6g}")
    return RunReport(f"inequality {check}", rows, bundle, passed and math.isfinite(constant))


def _mass_rows(values: List[float]) -> List[Dict[str, Any]]:
    return [{"table": "mass", "level": k, "value": v} for k, v in enumerate(values)]


def cmd_counterexample(config: RunConfig, args: argparse.Namespace) -> RunReport:
    """Sharpness bundles: the slab family or the radial power family."""
    N = config.N
    if args.kind == "section3":
        slab = assemble_slab(args.gamma, args.lam, N, args.sigma0)
        mass = ma_mass(
            slab.family, slab.domain, levels=config.grid.mass_levels, workers=config.workers
        )
        trend = holder_trend(
            slab.family,
            slab.domain,
            args.alpha_exp,
            np.zeros(N),
            config.grid.refine_levels,
            seed=config.seed,
            workers=config.workers,
        )
        bundle = slab.to_dict()
        bundle.update(
            mass=mass.value,
            mass_error=mass.error_estimate,
            alpha_exp=args.alpha_exp,
            trend=trend.values,
            trend_growing=trend.is_growing,
        )
        rows = _mass_rows(mass.levels) + [{"table": "holder", **r} for r in trend.rows()]
        passed = trend.is_growing
        _mark(True, f"slab width ω={slab.omega:.6g}, mass {mass.value:.6g}")
        _mark(passed, f"Hölder seminorm at α={args.alpha_exp} grows toward the origin")
        return RunReport("counterexample section3", rows, bundle, passed)

    power = power_counterexample(
        args.beta, args.alpha, N, levels=config.grid.refine_levels, workers=config.workers
    )
    rows = _mass_rows(power.mass_levels)
    rows += [{"table": "gradient_holder", **r} for r in power.trend.rows()]
    _mark(power.mass_stable, f"mass {power.mass.value:.6g} stable under refinement")
    _mark(power.trend.is_growing, f"gradient Hölder quotient at α={args.alpha} grows")
    passed = power.mass_stable and power.trend.is_growing
    return RunReport("counterexample power", rows, power.to_dict(), passed)


def cmd_solve_alpha(config: RunConfig, args: argparse.Namespace) -> RunReport:
    """Exponents of a product family at theta, with the round trip through theta_of_alpha."""
    if config.theta is None:
        raise ValueError("solve-alpha needs --theta")
    theta, N = float(config.theta), config.N
    solver = solve_alpha_halfspace if args.variant == "halfspace" else solve_alpha_full
    alpha, trace = solver(theta, N)
    back = theta_of_alpha(alpha, N, args.variant)
    error = abs(back - theta)
    passed = error <= ROUNDTRIP_TOL

    bundle = {
        "theta": theta,
        "N": N,
        "variant": args.variant,
        "alpha": alpha.tolist(),
        "method": trace.method,
        "iterations": trace.iterations,
        "solve_residual": trace.residual,
        "theta_roundtrip": back,
        "critical_dimension": list(critical_dimension_bounds(theta)),
    }
    rows = [{"index": i + 1, "alpha": float(a)} for i, a in enumerate(alpha)]
    _mark(passed, f"α={alpha[0]:.12g} ({args.variant}), θ round trip error {error:.1e}")
    return RunReport(f"solve-alpha {args.variant}", rows, bundle, passed)


def _base_point(u: ConvexFamily, config: RunConfig, args: argparse.Namespace) -> np.ndarray:
    if args.x0 is not None:
        return np.asarray(args.x0, dtype=float)
    if isinstance(u, Quadratic):
        return np.zeros(u.dim)
    return u.sample_points(np.random.default_rng(config.seed), 1)[0]


def cmd_measure(config: RunConfig, args: argparse.Namespace) -> RunReport:
    """Section measurements: doubling, average density, halving exponent, John normalization."""
    u = resolve_family(config, args.alpha)
    x0 = _base_point(u, config, args)
    level, workers = config.grid.mass_level, config.workers
    bundle: Dict[str, Any] = {"family": u.to_dict(), "x0": x0.tolist()}

    if args.kind == "halving":
        z = np.eye(u.dim)[0] if args.z is None else np.asarray(args.z, dtype=float)
        table = halving_exponent(u, x0, z, args.levels)
        bundle.update(z=z.tolist(), exponent=table.values[-1])
        passed = all(math.isfinite(v) for v in table.values)
        _mark(passed, f"halving exponent 1+α ≈ {table.values[-1]:.6g}")
        return RunReport("measure halving", table.rows(), bundle, passed)

    S = sublevel(u, x0, args.height, args.resolution, level, workers)
    bundle["section"] = S.to_dict()
    if args.kind == "doubling":
        rows = []
        for sigma in args.sigma:
            ratio = doubling_ratio(u, S, sigma, level, workers)
            rows.append({"sigma": sigma, "ratio": ratio, "sigma_power": sigma ** (-u.dim)})
            _mark(math.isfinite(ratio), f"|S| / |σS| at σ={sigma}: {ratio:.6g}")
        passed = all(math.isfinite(row["ratio"]) for row in rows)
        return RunReport("measure doubling", rows, bundle, passed)
    if args.kind == "average":
        value = average_density(u, S, level, workers)
        rows = [{"t": S.t, "volume": S.volume, "diameter": S.diameter, "average": value}]
        passed = math.isfinite(value)
        _mark(passed, f"average det D²u over S(x0, {S.t:g}): {value:.6g}")
        return RunReport("measure average", rows, bundle, passed)

    norm = john_normalize(S)
    bundle.update(scale=norm.scale, center=norm.center.tolist(), rho=norm.rho)
    rows = [
        {"row": i, **{f"m{j}": float(v) for j, v in enumerate(line)}}
        for i, line in enumerate(norm.matrix)
    ]
    passed = math.isfinite(norm.rho)
    _mark(passed, f"John normalization: sandwich ratio ρ={norm.rho:.6g}")
    return RunReport("measure john", rows, bundle, passed)


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per experiment."""
    parser = argparse.ArgumentParser(
        description="Affine Lab - affine maximal type hypersurfaces and Monge-Ampere inequalities",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  affine-lab verify --theorem 9.1 --N 10 --variant tw-paper
  affine-lab verify --theorem 10.2 --N 3 --theta 0.6
  affine-lab scan --theorem 10.1 --N 4 --start 0.5 --stop 0.75 --step 0.01
  affine-lab inequality c1n --corpus standard
  affine-lab counterexample power --beta 1.1 --alpha 0.3
  affine-lab counterexample section3 --N 5 --gamma 0.205 --lambda 0.5
  affine-lab solve-alpha --theta 0.6 --N 3 --variant full
  affine-lab measure doubling --N 3 --sigma 0.3 0.5 0.7
        """,
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", help="Path to a YAML or JSON run configuration")
    common.add_argument("--N", type=int, help="Ambient dimension")
    common.add_argument("--seed", type=int, help="Random seed")
    common.add_argument("--workers", type=int, help="Worker pool size")
    common.add_argument("--grid", type=int, help="Number of random sample points")
    common.add_argument("--tol", type=float, help="Residual tolerance")
    common.add_argument("--out", help="Output directory")
    common.add_argument("--format", nargs="+", choices=OUTPUT_FORMATS, help="Output formats")
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    common.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only")

    family = argparse.ArgumentParser(add_help=False)
    family.add_argument("--theorem", choices=THEOREMS, help="Solution theorem")
    family.add_argument("--theta", type=float, help="Exponent theta")
    family.add_argument("--variant", help="Theorem variant: tw-paper (alias tw-r9) for 9.1")
    family.add_argument("--alpha", type=float, help="Branch exponent for Theorem 9.1")
    family.add_argument("--family", help="Path to a family document")

    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    subparsers.add_parser(
        "verify", parents=[common, family], help="Residual gate for one solution family"
    )

    scan_parser = subparsers.add_parser(
        "scan", parents=[common, family], help="Residual gate over a theta grid"
    )
    scan_parser.add_argument("--start", type=float, help="Open lower end of the grid")
    scan_parser.add_argument("--stop", type=float, help="Open upper end of the grid")
    scan_parser.add_argument("--step", type=float, help="Grid step")

    inequality_parser = subparsers.add_parser(
        "inequality", parents=[common], help="Run an inequality check over a corpus"
    )
    inequality_parser.add_argument("check", choices=sorted(CHECKS), help="Check to run")
    inequality_parser.add_argument(
        "--corpus", choices=["standard", "normalized"], help="Corpus (default: by check)"
    )
    inequality_parser.add_argument("--s", type=float, help="Lower section height")
    inequality_parser.add_argument("--t", type=float, help="Upper section height")
    inequality_parser.add_argument("--sigma", type=float, help="Dilation factor")

    counter_parser = subparsers.add_parser(
        "counterexample", parents=[common], help="Build a sharpness counterexample"
    )
    counter_parser.add_argument("kind", choices=["section3", "power"], help="Construction")
    counter_parser.add_argument("--gamma", type=float, default=0.205, help="Slab gamma")
    counter_parser.add_argument(
        "--lambda", dest="lam", type=float, default=0.5, help="Slab lambda"
    )
    counter_parser.add_argument("--sigma0", type=float, help="Slab ramp end")
    counter_parser.add_argument(
        "--alpha-exp", type=float, default=SLAB_ALPHA, help="Hölder exponent for the slab trend"
    )
    counter_parser.add_argument("--beta", type=float, default=1.1, help="Power exponent")
    counter_parser.add_argument("--alpha", type=float, default=0.3, help="Hölder exponent")

    solve_parser = subparsers.add_parser(
        "solve-alpha", parents=[common], help="Solve the product family exponents at theta"
    )
    solve_parser.add_argument("--theta", type=float, help="Exponent theta")
    solve_parser.add_argument("--variant", choices=VARIANTS, default="full", help="Product")

    measure_parser = subparsers.add_parser(
        "measure", parents=[common, family], help="Measure sections of a convex family"
    )
    measure_parser.add_argument(
        "kind", choices=["doubling", "average", "halving", "john"], help="Measurement"
    )
    measure_parser.add_argument("--x0", type=float, nargs="+", help="Base point")
    measure_parser.add_argument("--height", type=float, default=1.0, help="Section height t")
    measure_parser.add_argument(
        "--sigma", type=float, nargs="+", default=[0.5], help="Dilation factors"
    )
    measure_parser.add_argument("--z", type=float, nargs="+", help="Halving direction")
    measure_parser.add_argument("--levels", type=int, default=6, help="Halving steps")
    measure_parser.add_argument("--resolution", type=int, help="Section ray resolution")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT)

    try:
        config = resolve_config(args)
        if args.command == "verify":
            report = cmd_verify(config, args)
        elif args.command == "scan":
            report = cmd_scan(config, args)
        elif args.command == "inequality":
            report = cmd_inequality(config, args)
        elif args.command == "counterexample":
            report = cmd_counterexample(config, args)
        elif args.command == "solve-alpha":
            report = cmd_solve_alpha(config, args)
        else:
            report = cmd_measure(config, args)
        paths = save_report(report, config)
    except GATE_ERRORS as e:
        logger.error(f"{args.command} failed a numeric gate: {e}")
        print(f"\n✗ Error: {e}")
        return EXIT_GATE
    except (ParameterRangeError, ValueError, FileNotFoundError) as e:
        logger.error(f"{args.command} rejected: {e}")
        print(f"\n✗ Error: {e}")
        return EXIT_USAGE
    except Exception as e:
        logger.error(f"{args.command} failed: {e}", exc_info=True)
        print(f"\n✗ Error: {e}")
        return EXIT_INTERNAL

    print("  Output files:")
    for path in paths:
        print(f"    - {path}")
    return EXIT_PASS if report.passed else EXIT_GATE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: analyze, solve, fredholm-demo, influence, finite-check.

Exit codes: 0 success, 2 malformed input or violated precondition,
3 numerical failure.  All output is deterministic; floats carry 17
significant digits.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import diagnostics, finite_maps, fredholm, regularization, robustness
from .errors import IllposedError, InvalidInputError, NumericalFailureError
from .fileio import (
    json_flat,
    read_distribution_csv,
    read_matrix_csv,
    read_vector_csv,
    table_to_csv,
    vector_to_csv,
)
from .linop import linear_parameter_identifiable, pseudoinverse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="illposed",
        description="Identifiability, conditioning, and sensitivity diagnostics "
        "for linear inverse problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="classify an operator from a CSV matrix")
    p.add_argument("matrix", help="CSV matrix, one row per line, no header")
    p.add_argument("--rtol", type=float, default=None, help="rank tolerance")
    p.add_argument("--kappa-threshold", type=float, default=diagnostics.DEFAULT_KAPPA_THRESHOLD)
    p.add_argument("--param", default=None, help="CSV matrix of a linear parameter map")
    p.add_argument("--out", default=None, help="write the JSON report here instead of stdout")

    p = sub.add_parser("solve", help="solve A x = d, optionally regularized")
    p.add_argument("matrix")
    p.add_argument("data", help="one-column CSV right-hand side")
    p.add_argument("--method", choices=["tikhonov", "tsvd", "none"], default="none")
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--k", type=int, default=None, help="TSVD truncation level")
    p.add_argument("--noise", type=float, default=None,
                   help="noise level: select lambda by the discrepancy principle")
    p.add_argument("--tau", type=float, default=1.0, help="discrepancy safety factor")
    p.add_argument("--out", default=None, help="write the solution CSV here")

    p = sub.add_parser("fredholm-demo", help="reproduce the integral-equation instability")
    p.add_argument("--n", type=int, required=True, help="grid size")
    p.add_argument("--n-osc", type=int, required=True, help="number of oscillations")
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="also solve with this Tikhonov weight")
    p.add_argument("--noise", type=float, default=None,
                   help="also solve with a discrepancy-selected Tikhonov weight")
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--out", default=None, help="write the plot CSV here")

    p = sub.add_parser("influence", help="influence profile of a functional")
    p.add_argument("distribution", help="CSV of location,weight rows")
    p.add_argument("--functional", default="mean",
                   help="mean | median | trimmed:<fraction>")
    p.add_argument("--probes", required=True, help="min:max:count, log-spaced")
    p.add_argument("--out", default=None, help="write the profile CSV here")

    p = sub.add_parser("finite-check", help="verify the finite-map theorems exhaustively")
    p.add_argument("--max-domain", type=int, default=4)
    p.add_argument("--max-codomain", type=int, default=4)
    p.add_argument("--map", dest="map_text", default=None,
                   help="check one map 'dom cod : t0,t1,...' instead of sweeping")
    p.add_argument("--param", dest="param_text", default=None,
                   help="with --map: a parameter map on the same domain")
    p.add_argument("--out", default=None)
    return parser


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_analyze(args) -> int:
    a = read_matrix_csv(args.matrix)
    report = diagnostics.diagnose(a, rtol=args.rtol, kappa_threshold=args.kappa_threshold)
    payload = report.to_dict()
    if args.param is not None:
        q = read_matrix_csv(args.param)
        payload["parameter_identifiable"] = linear_parameter_identifiable(a, q, rtol=args.rtol)
    _emit(json_flat(payload), args.out)
    return 0


def _cmd_solve(args) -> int:
    if args.noise is not None and args.lam is not None:
        raise InvalidInputError("--noise and --lambda are mutually exclusive")
    if args.noise is not None and args.method == "tsvd":
        raise InvalidInputError("--noise selects a Tikhonov weight; not valid with tsvd")
    a = read_matrix_csv(args.matrix)
    d = read_vector_csv(args.data)

    if args.noise is not None:
        lam = regularization.discrepancy_select(a, d, args.noise, args.tau)
        config = regularization.RegularizationConfig(
            regularization.Method.TIKHONOV, lam=lam, tau=args.tau
        )
        x = regularization.solve_with(a, d, config)
        method, parameter = "tikhonov", lam
    elif args.method == "tikhonov":
        if args.lam is None:
            raise InvalidInputError("tikhonov requires --lambda or --noise")
        config = regularization.RegularizationConfig(
            regularization.Method.TIKHONOV, lam=args.lam
        )
        x = regularization.solve_with(a, d, config)
        method, parameter = "tikhonov", args.lam
    elif args.method == "tsvd":
        if args.k is None:
            raise InvalidInputError("tsvd requires --k")
        config = regularization.RegularizationConfig(
            regularization.Method.TSVD, truncation_k=args.k
        )
        x = regularization.solve_with(a, d, config)
        method, parameter = "tsvd", args.k
    else:
        if args.lam is not None or args.k is not None:
            raise InvalidInputError("--lambda/--k require --method tikhonov/tsvd")
        x = pseudoinverse(a).matrix @ d
        method, parameter = "none", None

    report = {
        "method": method,
        "parameter": parameter,
        "residual": float(np.linalg.norm(a.matrix @ x - d)),
        "solution_norm": float(np.linalg.norm(x)),
    }
    csv_text = vector_to_csv(x)
    if args.out is None:
        sys.stdout.write(csv_text)
        sys.stdout.write(json_flat(report))
    else:
        _emit(csv_text, args.out)
        sys.stdout.write(json_flat(report))
    return 0


def _cmd_fredholm_demo(args) -> int:
    if args.lam is not None and args.noise is not None:
        raise InvalidInputError("--lambda and --noise are mutually exclusive")
    result = fredholm.run_instability_experiment(args.n, args.n_osc)
    grid = fredholm.Grid(args.n)
    problem = fredholm.ramp_problem(args.n, args.n_osc)
    clean = fredholm.ramp_rhs(grid)
    recovered = fredholm.solve_unregularized(problem)
    analytic = fredholm.analytic_perturbed_solution(grid, args.n_osc)

    header = ["y", "F_unperturbed", "F_perturbed", "f_recovered", "f_analytic"]
    columns = [grid.points, clean, problem.rhs, recovered, analytic]
    summary = {
        "rhs_dev": result.rhs_dev,
        "sol_dev": result.sol_dev,
        "amplification": result.amplification,
        "delta": result.delta,
    }
    if args.lam is not None or args.noise is not None:
        k = problem.operator
        lam = (
            args.lam
            if args.lam is not None
            else regularization.discrepancy_select(k, problem.rhs, args.noise, args.tau)
        )
        regularized = regularization.tikhonov_solve(k, problem.rhs, lam)
        header.append("f_regularized")
        columns.append(regularized)
        summary["lambda"] = lam
        summary["regularized_sup_deviation"] = float(np.max(np.abs(regularized - 1.0)))

    csv_text = table_to_csv(header, columns)
    if args.out is None:
        sys.stdout.write(csv_text)
        sys.stdout.write(json_flat(summary))
    else:
        _emit(csv_text, args.out)
        sys.stdout.write(json_flat(summary))
    return 0


def _parse_functional(text: str) -> robustness.FunctionalKind:
    if text == "mean":
        return robustness.MEAN
    if text == "median":
        return robustness.MEDIAN
    if text.startswith("trimmed:"):
        try:
            frac = float(text.split(":", 1)[1])
        except ValueError as exc:
            raise InvalidInputError(f"bad trim fraction in {text!r}") from exc
        return robustness.trimmed_mean(frac)
    raise InvalidInputError(f"unknown functional {text!r}; use mean, median, or trimmed:<frac>")


def _parse_probes(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise InvalidInputError(f"--probes wants min:max:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise InvalidInputError(f"bad --probes {text!r}: {exc}") from exc
    if lo <= 0 or hi <= lo or count < 2:
        raise InvalidInputError("--probes needs 0 < min < max and count >= 2")
    return np.geomspace(lo, hi, count)


def _cmd_influence(args) -> int:
    dist = read_distribution_csv(args.distribution)
    kind = _parse_functional(args.functional)
    probes = _parse_probes(args.probes)
    profile = robustness.influence_profile(kind, dist, probes)
    summary = {
        "functional": args.functional,
        "gross_error_sensitivity": (
            "unbounded" if profile.unbounded_flag else profile.gross_error_sensitivity
        ),
        "asymptotic_variance": profile.asymptotic_variance,
    }
    csv_text = table_to_csv(["probe", "influence"], [profile.probe_points, profile.values])
    if args.out is None:
        sys.stdout.write(csv_text)
        sys.stdout.write(json_flat(summary))
    else:
        _emit(csv_text, args.out)
        sys.stdout.write(json_flat(summary))
    return 0


def _cmd_finite_check(args) -> int:
    if args.map_text is not None:
        p = finite_maps.parse_finite_map(args.map_text)
        estimator = finite_maps.fisher_consistent_estimator(p)
        payload = {
            "map": finite_maps.format_finite_map(p),
            "injective": finite_maps.is_injective(p),
            "estimator_exists": estimator is not None,
            "estimator": None if estimator is None else finite_maps.format_finite_map(estimator),
        }
        if args.param_text is not None:
            q = finite_maps.parse_finite_map(args.param_text)
            payload["parameter_identifiable_standard"] = (
                finite_maps.parameter_identifiable_standard(p, q)
            )
            payload["parameter_identifiable_sections"] = (
                finite_maps.parameter_identifiable_sections(p, finite_maps.restrict_to_range(q))
            )
        _emit(json_flat(payload), args.out)
        return 0

    if not 1 <= args.max_domain <= 5 or not 1 <= args.max_codomain <= 5:
        raise InvalidInputError(
            f"sweep bounds must lie in [1, 5], got max-domain {args.max_domain}, "
            f"max-codomain {args.max_codomain}"
        )
    t1_checked, t1_bad = finite_maps.check_fisher_consistency_theorem(
        args.max_domain, args.max_codomain
    )
    t2_checked, t2_bad = finite_maps.check_parameter_equivalence_theorem(
        args.max_domain, args.max_codomain
    )
    payload = {
        "max_domain": args.max_domain,
        "max_codomain": args.max_codomain,
        "theorem1_maps_checked": t1_checked,
        "theorem1_counterexamples": t1_bad,
        "theorem2_pairs_checked": t2_checked,
        "theorem2_disagreements": t2_bad,
    }
    _emit(json_flat(payload), args.out)
    return 0


_COMMANDS = {
    "analyze": _cmd_analyze,
    "solve": _cmd_solve,
    "fredholm-demo": _cmd_fredholm_demo,
    "influence": _cmd_influence,
    "finite-check": _cmd_finite_check,
}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except NumericalFailureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (IllposedError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

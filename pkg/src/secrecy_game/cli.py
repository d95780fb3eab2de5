"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 case conditions violated,
3 solver failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import analytic, discrete, verify
from .channel import baseline_no_jammer, check_conditions, corner_points, load_channel
from .errors import (
    ConditionsViolated,
    DegenerateGame,
    InvalidChannel,
    NormalizationFailure,
    SkewAtOne,
    SolverFailure,
    UnsupportedK,
)
from .payoff import pure_strategy_gap, reduce_game

EXIT_OK, EXIT_INPUT, EXIT_CONDITIONS, EXIT_SOLVER = 0, 1, 2, 3
METHODS = ("analytic", "discrete", "both")


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, keep exit code 2 for the case gate
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _round(obj):
    if isinstance(obj, float):
        return verify.sig12(obj)
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, np.generic):
        return _round(obj.item())
    return obj


def read_channel(source: str):
    """Channel description from a file path or an inline JSON object."""
    text = source
    if not source.lstrip().startswith("{"):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise InputError(f"cannot read config {source!r}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"config is not valid JSON: {exc}") from None
    return load_channel(doc)


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(_round(doc), indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _setup(args):
    powers = read_channel(args.config)
    corners = corner_points(powers)
    return powers, corners


def _try_analytic(rg):
    """(solution or None, status string)."""
    try:
        return analytic.solve_analytic(rg), "ok"
    except (UnsupportedK, SkewAtOne):
        return None, "unsupported_k"
    except NormalizationFailure:
        return None, "flagged"


def cmd_analyze(args) -> int:
    powers, corners = _setup(args)
    report = check_conditions(corners)
    doc = {
        "received_powers": powers.as_dict(),
        "corner_points": corners.as_dict(),
        "conditions": report.as_dict(),
        "conditions_hold": report.all_hold,
        "baseline": baseline_no_jammer(powers),
        "maximin": None,
        "minimax": None,
    }
    if report.all_hold:
        doc["maximin"], doc["minimax"] = pure_strategy_gap(corners)
        try:
            doc["reduced_game"] = reduce_game(corners).as_dict()
        except DegenerateGame:
            doc["reduced_game"] = None
    _emit(doc, args.out)
    return EXIT_OK if report.all_hold else EXIT_CONDITIONS


def cmd_solve(args) -> int:
    _, corners = _setup(args)
    rg = reduce_game(corners)
    doc = {"method": args.method, "t": args.t, "a": rg.skew, "L": rg.edge, "bound": discrete.discretization_bound(rg, args.t)}
    doc.update(k=None, alpha=None, value_analytic=None, value_discrete=None, gap=None)

    sol = None
    if args.method in ("analytic", "both"):
        sol, status = _try_analytic(rg)
        doc["analytic"] = status
        if sol is not None:
            doc.update(k=sol.k, alpha=sol.alpha, value_analytic=sol.value)
            check = verify.equilibrium_check(sol, rg, corners, epsilon=1e-3 * rg.edge)
            doc["equilibrium_check"] = check.to_dict()
            if not check.passed:
                doc["analytic"] = "flagged"
        else:
            try:
                doc["k"] = analytic.interval_index(rg.skew)
            except SkewAtOne:
                pass

    need_discrete = args.method != "analytic" or doc["analytic"] != "ok"
    if need_discrete:
        dsol = discrete.solve_grid_game(rg, corners, args.t, origin=args.grid_origin)
        doc["value_discrete"] = dsol.value
        doc["certificate"] = list(dsol.lp.certificate)
        if args.dump_matrix:
            discrete.write_matrix_csv(dsol.matrix, args.dump_matrix)
        if args.strategies:
            discrete.write_strategy_csv(dsol.source, f"{args.strategies}_source.csv")
            discrete.write_strategy_csv(dsol.jammer, f"{args.strategies}_jammer.csv")
        if doc["value_analytic"] is not None:
            doc["gap"] = abs(doc["value_analytic"] - dsol.value)
            if doc["gap"] > doc["bound"]:
                doc["analytic"] = "flagged"
    doc["authoritative"] = "analytic" if doc.get("analytic") == "ok" else "discrete"
    _emit(doc, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    _, corners = _setup(args)
    rg = reduce_game(corners)
    eps = 1e-3 * rg.edge
    doc = {"analytic": None, "discrete": None}
    sol = dsol = None
    if args.method in ("analytic", "both"):
        sol, status = _try_analytic(rg)
        doc["analytic_status"] = status
        if sol is not None:
            doc["analytic"] = verify.equilibrium_check(sol, rg, corners, eps).to_dict()
    if args.method in ("discrete", "both"):
        dsol = discrete.solve_grid_game(rg, corners, args.t)
        doc["discrete"] = verify.equilibrium_check(dsol, rg, corners, discrete.CERTIFICATE_TOL).to_dict()
    if sol is not None and dsol is not None:
        cross = discrete.discretization_bound(rg, args.t) + eps
        doc["analytic_vs_discrete_value"] = verify.equilibrium_check(
            sol, rg, corners, cross, claimed_value=dsol.value
        ).to_dict()
        doc["discrete_vs_analytic_value"] = verify.equilibrium_check(
            dsol, rg, corners, cross, grid_density=4 * args.t + 1, claimed_value=sol.value
        ).to_dict()
    reports = [v for k, v in doc.items() if isinstance(v, dict)]
    doc["passed"] = bool(reports) and all(r["passed"] for r in reports)
    _emit(doc, args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    _, corners = _setup(args)
    rg = reduce_game(corners)
    sol = None
    if args.method != "discrete":
        sol, _ = _try_analytic(rg)
    if sol is not None:
        source, jammer, target, used = sol.cdf_source, sol.cdf_jammer, sol.value, "analytic"
    else:
        dsol = discrete.solve_grid_game(rg, corners, args.t)
        source, jammer, target, used = dsol.source, dsol.jammer, dsol.value, "discrete"
    report = verify.simulate_blocks(source, jammer, corners, args.blocks, args.seed, target=target)
    doc = report.to_dict()
    doc["strategy"] = used
    _emit(doc, args.out)
    return EXIT_OK


def _write_cdf_csv(path_or_none, rates, f_source, f_jammer) -> None:
    fh = open(path_or_none, "w", newline="") if path_or_none else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["rate", "F_source", "F_jammer"])
        for r, fs, fj in zip(rates, f_source, f_jammer):
            w.writerow([f"{r:.12g}", f"{fs:.12g}", f"{fj:.12g}"])
    finally:
        if path_or_none:
            fh.close()


def cmd_export_cdf(args) -> int:
    _, corners = _setup(args)
    rg = reduce_game(corners)
    rates = rg.origin_xi + rg.edge * np.linspace(-0.05, 1.05, args.n + 1)
    jammer_rates = rates - rg.origin_xi + rg.origin_eta
    dsol = discrete.solve_grid_game(rg, corners, args.t)
    f_src_d, f_jam_d = dsol.source(rates), dsol.jammer(jammer_rates)

    sol, status = _try_analytic(rg)
    if sol is None:
        print(f"analytic c.d.f. unavailable ({status}); writing the discrete c.d.f.", file=sys.stderr)
        _write_cdf_csv(args.out, rates, f_src_d, f_jam_d)
        return EXIT_OK
    _write_cdf_csv(args.out, rates, sol.cdf_source(rates), sol.cdf_jammer(jammer_rates))
    if args.out:
        out = Path(args.out)
        _write_cdf_csv(out.with_name(out.stem + "_discrete" + out.suffix), rates, f_src_d, f_jam_d)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="secrecy-game", description="Source vs jammer-relay secrecy game solver.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, method_default="both"):
        p.add_argument("--config", required=True, help="channel JSON file or inline JSON object")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--t", type=int, default=discrete.DEFAULT_T, help="grid parameter T")
        p.add_argument("--method", choices=METHODS, default=method_default)
        return p

    p = common(sub.add_parser("analyze", help="powers, corner points, case conditions, baseline"))
    p.set_defaults(func=cmd_analyze)

    p = common(sub.add_parser("solve", help="equilibrium value (analytic and/or LP)"))
    p.add_argument("--dump-matrix", help="write the payoff matrix as CSV")
    p.add_argument("--strategies", help="prefix for LP strategy CSVs")
    p.add_argument("--grid-origin", choices=("big_omega_s", "small_omega_s"), default="big_omega_s", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_solve)

    p = common(sub.add_parser("verify", help="epsilon-equilibrium certification"))
    p.set_defaults(func=cmd_verify)

    p = common(sub.add_parser("simulate", help="block-level variable-rate simulation"), method_default="analytic")
    p.add_argument("--blocks", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_simulate)

    p = common(sub.add_parser("export-cdf", help="equilibrium c.d.f.s as CSV"))
    p.add_argument("--n", type=int, default=1000, help="number of intervals in the rate grid")
    p.set_defaults(func=cmd_export_cdf)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not 2 <= args.t <= 5000:
        parser.error("--t must lie in [2, 5000]")
    if getattr(args, "blocks", 1) < 1:
        parser.error("--blocks must be >= 1")
    if getattr(args, "n", 1) < 1:
        parser.error("--n must be >= 1")
    try:
        return args.func(args)
    except (InputError, InvalidChannel) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConditionsViolated, DegenerateGame) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONDITIONS
    except SolverFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())

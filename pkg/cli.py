#!/usr/bin/env python
"""
Command-line front end.

    python cli.py zeta --m 2 --n 2 --format latex
    python cli.py verify fn-eq --m 1 --n 3
    python cli.py verify all --m-max 3 --n-max 4 --depth 8
    python cli.py scan --m-max 500 --n-max 20 --format csv --out scan.csv

Results go to stdout (or --out); diagnostics go to stderr.
"""
import argparse
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple
from termcolor import cprint
import analysis
import oracle
import zetacore
from polyring import rational_equal, series_expand, specialize_prime
from settings import configure, current, print_config, report

SUBCOMMANDS = ["zeta", "dstar", "verify", "oracle", "abscissa", "scan", "fm", "params"]
CLAIMS = ["fn-eq", "dstar", "grenham", "oracle", "relations", "convexity", "fm", "limits", "c-set", "all"]
FORMATS = ["text", "latex", "json", "csv"]

# (passed, json-able result, text lines)
Outcome = Tuple[bool, object, List[str]]


class UsageError(ValueError):
    """A flag required by the chosen subcommand is missing or out of range."""


def _fraction(value: Fraction) -> List[int]:
    return [value.numerator, value.denominator]


def _fraction_text(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _prime(value: str):
    if value == "symbolic":
        return value
    try:
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--prime takes an integer or 'symbolic', got {value!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, help="first lattice parameter, m >= 1")
    common.add_argument("--n", type=int, help="second lattice parameter, n >= 2")
    common.add_argument("--depth", type=int, default=None, help="truncation degree in t")
    common.add_argument("--prime", type=_prime, default="symbolic", help="integer prime or 'symbolic'")
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--out", default=None, help="write results to this path instead of stdout")
    common.add_argument("--m-max", type=int, default=None)
    common.add_argument("--n-max", type=int, default=None)
    common.add_argument("--verbose", action="store_true", help="diagnostics on stderr")
    common.add_argument("--workers", type=int, default=None, help="worker processes for scans")

    parser = argparse.ArgumentParser(prog="cli.py", description="Local pro-isomorphic zeta functions of L_{m,n}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("zeta", parents=[common], help="closed-form local zeta function")
    sub.add_parser("dstar", parents=[common], help="the n = 2 closed form")
    verify = sub.add_parser("verify", parents=[common], help="check one identity family")
    verify.add_argument("claim", choices=CLAIMS)
    sub.add_parser("oracle", parents=[common], help="cone-sum series against the closed form")
    sub.add_parser("abscissa", parents=[common], help="abscissa of convergence")
    scan = sub.add_parser("scan", parents=[common], help="abscissae over a grid, CSV rows")
    scan.add_argument("--window", type=Fraction, nargs=2, default=(Fraction(0), Fraction(80)), metavar=("LOW", "HIGH"))
    sub.add_parser("fm", parents=[common], help="the polynomials f_m, g_m, h_m")
    sub.add_parser("params", parents=[common], help="exponent parameters")
    return parser


def _need(args, *names: str) -> None:
    missing = [name for name in names if getattr(args, name.replace("-", "_")) is None]
    if missing:
        raise UsageError(f"{args.command} needs " + ", ".join(f"--{name}" for name in missing))
    if "m" in names and args.m < 1:
        raise UsageError(f"--m must be >= 1, got {args.m}")
    if "n" in names and args.n < 2:
        raise UsageError(f"--n must be >= 2, got {args.n}")


def _render_zeta(zeta, fmt: str):
    if fmt == "latex":
        return zeta.to_json_obj(), [zeta.to_latex()]
    return zeta.to_json_obj(), [zeta.to_text()]


def cmd_zeta(args) -> Outcome:
    _need(args, "m", "n")
    zeta = zetacore.local_zeta(args.m, args.n)
    result, lines = _render_zeta(zeta, args.format)
    if args.prime != "symbolic":
        counts = zetacore.subgroup_counts(args.m, args.n, args.prime, args.depth)
        specialised = specialize_prime(zeta, args.prime)
        result = {"zeta": result, "prime": args.prime, "counts": counts}
        lines = lines + [f"p={args.prime}: {specialised.to_text()}", "counts: " + " ".join(map(str, counts))]
    return True, result, lines


def cmd_dstar(args) -> Outcome:
    _need(args, "m")
    result, lines = _render_zeta(zetacore.dstar_zeta(args.m), args.format)
    return True, result, lines


def cmd_oracle(args) -> Outcome:
    _need(args, "m", "n")
    series = oracle.cone_series(args.m, args.n, args.depth)
    rows = series.to_rows()
    agree = series == series_expand(zetacore.local_zeta(args.m, args.n), args.depth)
    lines = [f"t^{k}: " + (" + ".join(f"{c}*q^{eq}" for eq, c in row) or "0") for k, row in enumerate(rows)]
    lines.append(f"closed form agrees: {agree}")
    return agree, {"series": [[list(term) for term in row] for row in rows], "agree": agree}, lines


def cmd_abscissa(args) -> Outcome:
    _need(args, "m", "n")
    result = analysis.abscissa(args.m, args.n)
    lines = [
        f"alpha({args.m},{args.n}) = {_fraction_text(result.alpha)} ~ {analysis.decimal_string(result.alpha)}",
        f"regime: {result.regime}",
        f"beta = {_fraction_text(result.beta)}",
        f"in C: {result.in_exceptional_set}",
    ]
    return True, result.to_json_obj(), lines


def cmd_scan(args) -> Outcome:
    _need(args, "m-max", "n-max")
    rows = analysis.scan_abscissae(args.m_max, args.n_max, window=tuple(args.window))
    handle = io.StringIO()
    analysis.write_scan_csv(rows, handle)
    result = [dict(zip(analysis.CSV_HEADER, row.csv_row())) for row in rows]
    return True, result, handle.getvalue().rstrip("\n").split("\n")


def cmd_fm(args) -> Outcome:
    _need(args, "m")
    if args.m < 2:
        raise UsageError(f"f_m needs --m >= 2, got {args.m}")
    polys = {
        "f": analysis.f_m_polynomial(args.m),
        "g": analysis.g_m_polynomial(args.m),
        "h": analysis.h_m_polynomial(args.m),
    }
    lines = [f"{name}_{args.m} = {poly.to_text()}" for name, poly in polys.items()]
    return True, {name: list(poly.coefficients) for name, poly in polys.items()}, lines


def cmd_params(args) -> Outcome:
    _need(args, "m", "n")
    params = zetacore.zeta_parameters(args.m, args.n)
    lines = [f"A_{i} = {a}, B_{i} = {b}" for i, (a, b) in enumerate(zip(params.A, params.B))]
    lines += [
        f"A~_0 = {params.Atilde0}, B~_0 = {params.Btilde0}",
        f"A~_n = {params.Atilden}, B~_n = {params.Btilden}",
        f"functional equation: a = {params.fe_a}, b = {params.fe_b}",
    ]
    return True, params.model_dump(mode="json"), lines


# verify: one checker per identity family

def check_fn_eq(m: int, n: int, depth: int) -> Outcome:
    result = zetacore.functional_equation_check(m, n)
    sign = f"{result.sign:+d}"
    return result.holds, result.model_dump(), [f"({m},{n}) sign={sign} a={result.a} b={result.b}"]


def check_dstar(m: int, n: int, depth: int) -> Outcome:
    agree = rational_equal(zetacore.local_zeta(m, 2), zetacore.dstar_zeta(m))
    return agree, agree, [f"dstar m={m}: {agree}"]


def check_grenham(m: int, n: int, depth: int) -> Outcome:
    agree = zetacore.grenham_identity_check(n, depth)
    return agree, agree, [f"grenham n={n}: {agree}"]


def check_oracle(m: int, n: int, depth: int) -> Outcome:
    agree = oracle.oracle_compare(m, n, depth)
    return agree, agree, [f"oracle ({m},{n}) to t^{depth}: {agree}"]


def check_relations(m: int, n: int, depth: int) -> Outcome:
    holds = zetacore.parameter_relations_hold(m, n)
    return holds, holds, [f"relations ({m},{n}): {holds}"]


def check_convexity(m: int, n: int, depth: int) -> Outcome:
    holds = analysis.convexity_check(m, n)
    return holds, holds, [f"convexity ({m},{n}): {holds}"]


CHECKERS: Dict[str, Callable[[int, int, int], Outcome]] = {
    "fn-eq": check_fn_eq,
    "dstar": check_dstar,
    "grenham": check_grenham,
    "oracle": check_oracle,
    "relations": check_relations,
    "convexity": check_convexity,
}


def _run_task(task: Tuple[str, int, int, int]) -> Outcome:
    claim, m, n, depth = task
    return CHECKERS[claim](m, n, depth)


def verify_all_tasks(m_max: int, n_max: int, depth: int) -> List[Tuple[str, int, int, int]]:
    """The identity suite over 1 <= m <= m_max, 2 <= n <= n_max in a fixed order."""
    tasks = [("dstar", m, 2, depth) for m in range(1, m_max + 1)]
    tasks += [("grenham", 1, n, depth) for n in range(2, min(n_max, 7) + 1)]
    tasks += [("oracle", m, n, depth) for m in range(1, m_max + 1) for n in range(2, min(n_max, 6) + 1)]
    tasks += [("relations", m, n, depth) for m in range(1, m_max + 1) for n in range(2, n_max + 1)]
    tasks += [("convexity", m, n, depth) for m in range(2, m_max + 1) for n in range(2, n_max + 1)]
    return tasks


def _verify_all(args) -> Outcome:
    _need(args, "m-max", "n-max")
    tasks = verify_all_tasks(args.m_max, args.n_max, args.depth)
    workers = current().workers
    report(f"Running {len(tasks)} checks", "blue")
    if workers > 0:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(_run_task, tasks))
    else:
        outcomes = [_run_task(task) for task in tasks]
    passed = all(ok for ok, _, _ in outcomes)
    lines = [line for _, _, task_lines in outcomes for line in task_lines]
    lines.append(f"{sum(ok for ok, _, _ in outcomes)}/{len(outcomes)} checks passed")
    result = [{"claim": t[0], "m": t[1], "n": t[2], "pass": ok} for t, (ok, _, _) in zip(tasks, outcomes)]
    return passed, result, lines


def cmd_verify(args) -> Outcome:
    claim = args.claim
    if claim == "all":
        return _verify_all(args)
    if claim == "dstar":
        _need(args, "m")
        return check_dstar(args.m, 2, args.depth)
    if claim == "grenham":
        _need(args, "n")
        return check_grenham(1, args.n, args.depth)
    if claim in CHECKERS:
        _need(args, "m", "n")
        return CHECKERS[claim](args.m, args.n, args.depth)
    if claim == "fm":
        _need(args, "m", "n-max")
        consistent = analysis.fm_consistency(args.m, args.n_max)
        identity = analysis.gm_hm_check(args.m)
        f = analysis.f_m_polynomial(args.m)
        negative = [n for n in range(2, args.n_max + 1) if f(n) < 0]
        lines = [f"f_{args.m} = {f.to_text()}", f"f_{args.m}(n) < 0 for n in {negative}",
                 f"sign agreement: {consistent}", f"g/h identity: {identity}"]
        return consistent and identity, {"negative": negative, "consistent": consistent, "identity": identity}, lines
    if claim == "limits":
        _need(args, "n", "m-max")
        limit = analysis.limit_check(args.n, args.m_max)
        ok = limit.monotone_tail and limit.max_abs_error_at_m_max < 1
        lines = [f"limit {limit.limit}, |error| at m={args.m_max}: {_fraction_text(limit.max_abs_error_at_m_max)}"
                 f" ~ {analysis.decimal_string(limit.max_abs_error_at_m_max)}", f"monotone tail: {limit.monotone_tail}"]
        result = {"limit": limit.limit, "error": _fraction(limit.max_abs_error_at_m_max), "monotone_tail": limit.monotone_tail}
        return ok, result, lines
    # c-set
    _need(args, "m-max", "n-max")
    mismatches = [
        (m, n)
        for m in range(2, args.m_max + 1)
        for n in range(2, args.n_max + 1)
        if analysis.in_exceptional_set(m, n) != analysis.in_explicit_set(m, n)
    ]
    lines = [f"C tests agree on 2..{args.m_max} x 2..{args.n_max}: {not mismatches}"]
    lines += [f"mismatch at {pair}" for pair in mismatches]
    return not mismatches, [list(pair) for pair in mismatches], lines


COMMANDS: Dict[str, Callable] = {
    "zeta": cmd_zeta,
    "dstar": cmd_dstar,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "abscissa": cmd_abscissa,
    "scan": cmd_scan,
    "fm": cmd_fm,
    "params": cmd_params,
}


def _query(args) -> dict:
    query = {key: value for key, value in vars(args).items() if key not in ("out", "verbose", "workers", "format")}
    if "window" in query:
        query["window"] = [_fraction(Fraction(x)) for x in query["window"]]
    return query


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def run(argv: Sequence[str]) -> int:
    """Parse argv, dispatch, write the output; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exit_:
        return int(exit_.code or 0)

    overrides = {}
    if args.verbose:
        overrides["verbose"] = True
    if args.workers is not None:
        overrides["workers"] = args.workers
    if overrides:
        configure(**overrides)
    if current().verbose:
        print_config()
    if args.depth is None:
        args.depth = current().default_depth

    try:
        passed, result, lines = COMMANDS[args.command](args)
    except ValueError as e:
        cprint(f"Error: {e}", "red", file=sys.stderr)
        if isinstance(e, UsageError):
            parser.print_usage(sys.stderr)
        return 2

    if args.format == "json":
        payload = {"query": _query(args), "result": result}
        if args.command in ("verify", "oracle"):
            payload["pass"] = passed
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    report("Done" if passed else "Verification failed", "green" if passed else "red")
    return 0 if passed else 1


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

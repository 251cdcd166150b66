"""Command-line interface.

Exit codes: 0 on success, 2 for invalid input, 3 when a size guard refuses
to run a quadratic routine.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import __version__
from .audit import exact_audit, sampled_audit
from .bench import bench, load_matrix
from .clean import MatchOracle, alignment_cost, brute_force_clean_opt, solve_clean_alignment
from .detect import SourceProfile, detect_single_shot, preprocess_source, query_source
from .distance import LowDistanceRun, ed_exact
from .errors import GuardRefusal, InvalidInput
from .generate import KINDS, GenSpec, generate
from .reduction import PseudoParams, approx_ed, default_repetitions
from .script import apply_script, write_script
from .text import Rng, Text, WorkMeter, dump_text, load_texts

EXIT_INVALID = 2
EXIT_GUARD = 3
EXACT_CLI_GUARD = 1 << 28  # |x| * |y| cells for the quadratic table without --force


def _common() -> argparse.ArgumentParser:
    # SUPPRESS lets the flags appear before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="root seed (default 0)")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes for bench")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON")
    common.add_argument("--force", action="store_true", default=argparse.SUPPRESS,
                        help="lift the size guards on quadratic routines")
    return common


def _add_pair(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--x", required=True, type=Path, help="file holding x")
    sub.add_argument("--y", required=True, type=Path, help="file holding y")
    sub.add_argument("--alphabet", help="explicit alphabet letters (default: letters seen)")
    sub.add_argument("--emit-script", type=Path, help="write the edit script here")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="pseudoed", parents=[common],
                                     description="Approximate edit distance for pseudorandom strings.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("exact", parents=[common], help="exact edit distance")
    _add_pair(p)
    p.add_argument("--method", choices=("table", "low-distance"), default="table")

    p = subs.add_parser("approx", parents=[common], help="block-reduction estimate for known (p, B)")
    _add_pair(p)
    p.add_argument("--p", required=True, help="rational p with 1/p integral, e.g. 1/4")
    p.add_argument("--B", required=True, type=int, help="block size")
    p.add_argument("--reps", type=int, help="repetitions (default ceil(log2 n))")
    p.add_argument("--attempts-coeff", type=int, default=100)

    p = subs.add_parser("clean-align", parents=[common], help="solve a clean alignment instance")
    p.add_argument("--matrix", required=True, type=Path,
                   help="0/1 matrix, one row of u per line (whitespace ignored)")
    p.add_argument("--attempts-coeff", type=int, default=100)
    p.add_argument("--brute-force", action="store_true", help="also report the optimal clean cost")

    p = subs.add_parser("audit", parents=[common], help="pseudorandomness audit")
    p.add_argument("--x", required=True, type=Path)
    p.add_argument("--alphabet")
    p.add_argument("--p", required=True)
    p.add_argument("--B", required=True, type=int)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exhaustive audit (default)")
    mode.add_argument("--sampled", action="store_true", help="sampled test")
    p.add_argument("--threshold", type=float, help="n^eps threshold for the sampled test")
    p.add_argument("--c", type=float, default=8, help="sample coefficient")

    p = subs.add_parser("detect", parents=[common], help="estimate without knowing B")
    _add_pair(p)
    p.add_argument("--alpha", required=True, type=int)
    p.add_argument("--budget-coeff", type=float, default=4)
    p.add_argument("--reps", type=int)

    p = subs.add_parser("preprocess", parents=[common], help="detect B for a source string")
    p.add_argument("--x", required=True, type=Path)
    p.add_argument("--alphabet")
    p.add_argument("--alpha", required=True, type=int)
    p.add_argument("--out", required=True, type=Path)

    p = subs.add_parser("query", parents=[common], help="estimate against a preprocessed source")
    _add_pair(p)
    p.add_argument("--profile", required=True, type=Path)
    p.add_argument("--budget-coeff", type=float, default=4)
    p.add_argument("--reps", type=int)

    p = subs.add_parser("gen", parents=[common], help="generate an instance")
    p.add_argument("--kind", choices=KINDS, default="uniform-random")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alphabet-size", type=int, default=4)
    p.add_argument("--edits", type=int, default=0)
    p.add_argument("--perturb", type=float, default=0.1)
    p.add_argument("--period", type=int, default=16)
    p.add_argument("--scale", type=int, default=16)
    p.add_argument("--fraction", type=float, default=0.05)
    p.add_argument("--out-x", required=True, type=Path)
    p.add_argument("--out-y", type=Path)

    p = subs.add_parser("bench", parents=[common], help="run a benchmark matrix")
    p.add_argument("--matrix", required=True, type=Path, help="JSON list of cells")
    p.add_argument("--out", required=True, type=Path, help="output prefix for .csv and .jsonl")
    return parser


def _pair(args: argparse.Namespace) -> tuple[Text, Text]:
    x, y = load_texts([args.x, args.y], args.alphabet)
    return x, y


def _params(args: argparse.Namespace) -> PseudoParams:
    try:
        p = Fraction(args.p)
    except (ValueError, ZeroDivisionError):
        raise InvalidInput(f"--p: not a rational number: {args.p!r}") from None
    return PseudoParams(p, args.B)


def _emit(args: argparse.Namespace, payload: dict[str, Any], text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _finish_script(args: argparse.Namespace, x: Text, y: Text, script) -> bool:
    """Replay the script (always) and write it if asked; returns the replay verdict."""
    ok = apply_script(x, script) == y
    if getattr(args, "emit_script", None):
        write_script(script, x.letters, args.emit_script)
    return ok


def cmd_exact(args: argparse.Namespace) -> None:
    x, y = _pair(args)
    meter = WorkMeter()
    if args.method == "table":
        if len(x) * len(y) > EXACT_CLI_GUARD and not args.force:
            raise GuardRefusal(f"table of {len(x) * len(y)} cells exceeds {EXACT_CLI_GUARD}; use --force")
        if args.emit_script:
            dist, script = ed_exact(x, y, script=True, meter=meter)
        else:
            dist, script = ed_exact(x, y, meter=meter), None
    else:
        run = LowDistanceRun(x, y, None, meter)
        run.advance()
        dist, script = run.distance, run.script() if args.emit_script else None
    if script is not None:
        _finish_script(args, x, y, script)
    _emit(args, {"distance": dist, "method": args.method, "work_units": meter.units}, str(dist))


def cmd_approx(args: argparse.Namespace) -> None:
    x, y = _pair(args)
    params = _params(args)
    meter = WorkMeter()
    reps = default_repetitions(max(len(x), len(y))) if args.reps is None else args.reps
    result = approx_ed(x, y, params, Rng(args.seed), reps, meter, args.attempts_coeff)
    checked = _finish_script(args, x, y, result.script)
    _emit(args, {"estimate": result.estimate, "exact_lower_bound_checked": checked, "reps": reps,
                 "seed": args.seed, "work_units": meter.units, "method": result.method,
                 "params": params.as_dict()}, str(result.estimate))


def _read_matrix(path: Path) -> list[list[int]]:
    try:
        body = path.read_text(encoding="ascii")
    except (OSError, UnicodeDecodeError) as exc:
        raise InvalidInput(f"cannot read matrix {path}: {exc}") from None
    rows = []
    for lineno, line in enumerate(body.splitlines(), 1):
        cells = "".join(line.split())
        if not cells:
            continue
        if set(cells) - {"0", "1"}:
            raise InvalidInput(f"{path}:{lineno}: matrix rows must contain only 0 and 1")
        rows.append([int(c) for c in cells])
    return rows


def cmd_clean_align(args: argparse.Namespace) -> None:
    f = MatchOracle.from_matrix(_read_matrix(args.matrix))
    result = solve_clean_alignment(f, Rng(args.seed), args.attempts_coeff)
    cost = alignment_cost(result, f.u_len, f.v_len)
    payload = {"pairs": [list(e) for e in result.pairs], "cost": cost.as_dict(),
               "queries": f.queries, "evaluations": f.evaluations}
    lines = [f"pairs {' '.join(f'{i}:{j}' for i, j in result.pairs) or '-'}", f"cost {cost.total}"]
    if args.brute_force:
        best, best_cost = brute_force_clean_opt(f)
        payload["optimum"] = {"pairs": [list(e) for e in best.pairs], "cost": best_cost.as_dict()}
        lines.append(f"optimum {best_cost.total}")
    _emit(args, payload, "\n".join(lines))


def cmd_audit(args: argparse.Namespace) -> None:
    (x,) = load_texts([args.x], args.alphabet)
    params = _params(args)
    if args.sampled:
        if args.threshold is None:
            raise InvalidInput("--sampled needs --threshold")
        report = sampled_audit(x, params, args.threshold, Rng(args.seed), args.c)
        text = f"verdict {report.verdict} ({report.failures} of {report.sample_size} sampled blocks failed)"
    else:
        report = exact_audit(x, params, force=args.force)
        text = f"M {report.m_value}"
    _emit(args, report.as_dict(), text)


def _estimate_payload(result, checked: bool, args: argparse.Namespace) -> dict[str, Any]:
    return {"estimate": result.estimate, "method": result.method, "exact_lower_bound_checked": checked,
            "seed": args.seed, "detected_B": result.info.get("detected_B"), "info": result.info}


def cmd_detect(args: argparse.Namespace) -> None:
    x, y = _pair(args)
    meter = WorkMeter()
    result = detect_single_shot(x, y, args.alpha, Rng(args.seed), args.budget_coeff,
                                repetitions=args.reps, meter=meter)
    checked = _finish_script(args, x, y, result.script)
    payload = _estimate_payload(result, checked, args)
    payload["work_units"] = meter.units
    _emit(args, payload, f"{result.estimate} ({result.method})")


def cmd_preprocess(args: argparse.Namespace) -> None:
    (x,) = load_texts([args.x], args.alphabet)
    profile = preprocess_source(x, args.alpha, Rng(args.seed))
    profile.save(args.out)
    _emit(args, profile.as_dict(), f"detected_B {profile.detected_B}")


def cmd_query(args: argparse.Namespace) -> None:
    x, y = _pair(args)
    profile = SourceProfile.load(args.profile)
    meter = WorkMeter()
    result = query_source(profile, x, y, Rng(args.seed), args.budget_coeff, args.reps, meter)
    checked = _finish_script(args, x, y, result.script)
    payload = _estimate_payload(result, checked, args)
    payload["work_units"] = meter.units
    _emit(args, payload, f"{result.estimate} ({result.method})")


def cmd_gen(args: argparse.Namespace) -> None:
    spec = GenSpec(args.kind, args.n, args.alphabet_size, args.seed, args.edits, args.perturb,
                   args.period, args.scale, args.fraction)
    x, y = generate(spec)
    dump_text(x, args.out_x)
    if y is not None:
        if args.out_y is None:
            raise InvalidInput("this spec produces y; pass --out-y")
        dump_text(y, args.out_y)
    _emit(args, {"spec": spec.as_dict(), "x": str(args.out_x),
                 "y": str(args.out_y) if y is not None else None}, f"wrote {args.out_x}")


def cmd_bench(args: argparse.Namespace) -> None:
    records = bench(load_matrix(args.matrix), args.out, jobs=args.jobs, force=args.force)
    _emit(args, {"records": len(records), "csv": str(args.out.with_suffix(".csv")),
                 "jsonl": str(args.out.with_suffix(".jsonl"))}, f"{len(records)} records")


COMMANDS = {
    "exact": cmd_exact, "approx": cmd_approx, "clean-align": cmd_clean_align, "audit": cmd_audit,
    "detect": cmd_detect, "preprocess": cmd_preprocess, "query": cmd_query, "gen": cmd_gen,
    "bench": cmd_bench,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    for name, default in (("seed", 0), ("jobs", 1), ("json", False), ("force", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            COMMANDS[args.command](args)
    except GuardRefusal as exc:
        print(f"pseudoed: refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except InvalidInput as exc:
        print(f"pseudoed: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"pseudoed: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return 0


if __name__ == "__main__":
    sys.exit(main())

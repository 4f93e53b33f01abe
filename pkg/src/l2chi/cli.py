"""Command line front end: ``l2chi <command> [options] paths...``.

Exit codes: 0 success, 1 not L2-acyclic, 2 input or parse error,
3 size guard exceeded, 4 internal verification failure.  With several
records the largest code wins.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import List, Optional, Sequence

from l2chi import __version__
from l2chi.euler import (
    EulerResult,
    NotAcyclicError,
    Orbifold,
    QuotientError,
    chi2,
    jsj_sum,
    seifert_chi2,
)
from l2chi.fileformat import InputError, expand_paths, load_input, make_record, record_to_line
from l2chi.polytope import d_eval
from l2chi.presentation import PresentationError
from l2chi.reduction import SizeGuardError

EXIT_OK, EXIT_NOT_ACYCLIC, EXIT_INPUT, EXIT_SIZE, EXIT_VERIFY = 0, 1, 2, 3, 4


def _error(exc: BaseException) -> tuple:
    if isinstance(exc, NotAcyclicError):
        return EXIT_NOT_ACYCLIC, "not_acyclic"
    if isinstance(exc, SizeGuardError):
        return EXIT_SIZE, "size_guard"
    if isinstance(exc, AssertionError):
        return EXIT_VERIFY, "verification_failed"
    if isinstance(exc, (InputError, PresentationError, QuotientError, ValueError)):
        return EXIT_INPUT, "input_error"
    raise exc


def _frac(x: Fraction) -> str:
    return str(x)


# ---------------------------------------------------------------------------
# per-file jobs


def _euler(m, args) -> EulerResult:
    return chi2(m.presentation, m.quotient, m.phi, m.dual,
                all_columns=args.all_columns, limit_bytes=args.limit_bytes)


def _chi2_result(m, args) -> dict:
    res = _euler(m, args)
    out = res.as_dict()
    expected = m.metadata.get("expected_norm")
    if expected is not None:
        out["expected_norm"] = expected
        out["bound_ok"] = res.thurston_lower_bound <= expected
    if args.scaling_sweep:
        values = [
            chi2(m.presentation, m.quotient, m.phi.scaled(k), m.dual, limit_bytes=args.limit_bytes).chi2
            for k in range(1, args.scaling_sweep + 1)
        ]
        out["scaling"] = values
        if values != [k * res.chi2 for k in range(1, args.scaling_sweep + 1)]:
            raise AssertionError(f"scaling sweep {values} is not linear in k")
    return out


def _delta_result(m, args) -> dict:
    return {"delta": -_euler(m, args).chi2}


def _polytope_result(m, args) -> dict:
    from l2chi.oracles import fox_polytope

    res = _euler(m, args)
    if m.quotient.kind != "abelian":
        raise QuotientError("polytopes are computed for abelian quotients only")
    diff = fox_polytope(m.presentation, m.quotient, res.deleted_column, res.deleted_row)
    value = d_eval(diff, m.phi.values)
    half_degree = Fraction(sum(res.diagonal_degrees) * res.scale, 2)
    if value != half_degree:
        raise AssertionError(f"polytope evaluation {value} differs from half the degree sum {half_degree}")
    return {
        "plus": [list(v) for v in diff.plus.vertices],
        "minus": [list(v) for v in diff.minus.vertices],
        "d_eval": _frac(value),
        "half_degree": _frac(half_degree),
        "bridge_ok": True,
    }


JOBS = {"chi2": _chi2_result, "delta": _delta_result, "polytope": _polytope_result}


def _process(path: str, command: str, args) -> tuple:
    start = time.perf_counter()
    name = path
    try:
        m = load_input(path)
        name = m.name
        result = JOBS[command](m, args)
        rec = make_record(name, command, result, None, time.perf_counter() - start, __version__)
        return EXIT_OK, rec
    except Exception as exc:
        code, kind = _error(exc)
        rec = make_record(name, command, None, {"kind": kind, "message": str(exc)},
                          time.perf_counter() - start, __version__)
        return code, rec


# ---------------------------------------------------------------------------
# output


def _table(records: Sequence[dict], out) -> None:
    for rec in records:
        if rec["error"]:
            out.write(f"{rec['input']:<28} ERROR {rec['error']['kind']}: {rec['error']['message']}\n")
            continue
        r = rec["result"]
        fields = " ".join(f"{k}={_show(v)}" for k, v in r.items() if k != "reductions")
        out.write(f"{rec['input']:<28} {fields}  ({rec['wall_time']:.3f}s)\n")


def _show(v) -> str:
    if isinstance(v, list):
        return "[" + ",".join(_show(x) for x in v) + "]"
    return str(v)


def _emit(records: Sequence[dict], fmt: str, out) -> None:
    if fmt == "records":
        for rec in records:
            out.write(record_to_line(rec) + "\n")
    else:
        _table(records, out)


# ---------------------------------------------------------------------------
# commands


def cmd_files(args, out) -> int:
    paths = [str(p) for p in expand_paths(args.paths)]
    if args.jobs and args.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_process, paths, [args.command] * len(paths), [args] * len(paths)))
    else:
        results = [_process(p, args.command, args) for p in paths]
    _emit([r for _, r in results], args.format, out)
    return max((c for c, _ in results), default=EXIT_OK)


def cmd_seifert(args, out) -> int:
    start = time.perf_counter()
    try:
        orders = tuple(int(x) for x in args.cone_orders.split(",") if x.strip()) if args.cone_orders else ()
        base = Orbifold(args.genus, args.boundary, orders)
        value = seifert_chi2(base, args.fiber_index)
        rec = make_record("seifert", "seifert", {
            "chi2": _frac(value), "orbifold_euler": _frac(base.euler_characteristic()),
            "integral": value.denominator == 1,
        }, None, time.perf_counter() - start, __version__)
        code = EXIT_OK
    except ValueError as exc:
        rec = make_record("seifert", "seifert", None, {"kind": "input_error", "message": str(exc)},
                          time.perf_counter() - start, __version__)
        code = EXIT_INPUT
    _emit([rec], args.format, out)
    return code


def cmd_jsj_sum(args, out) -> int:
    start = time.perf_counter()
    pieces, names = [], []
    try:
        for p in expand_paths(args.paths):
            m = load_input(p)
            pieces.append(_euler(m, args))
            names.append(m.name)
        total = jsj_sum(pieces)
        rec = make_record("+".join(names), "jsj-sum", {
            "chi2": total.chi2, "thurston_lower_bound": total.thurston_lower_bound,
            "pieces": [p.chi2 for p in pieces],
        }, None, time.perf_counter() - start, __version__)
        code = EXIT_OK
    except Exception as exc:
        code, kind = _error(exc)
        rec = make_record("+".join(names), "jsj-sum", None, {"kind": kind, "message": str(exc)},
                          time.perf_counter() - start, __version__)
    _emit([rec], args.format, out)
    return code


def cmd_compare(args, out, err) -> int:
    """Compare lower bounds across a claimed epimorphism f: pi_1(M) -> pi_1(N)."""
    start = time.perf_counter()
    try:
        m, n = load_input(args.file_m), load_input(args.file_n)
        if m.quotient.kind != n.quotient.kind:
            raise InputError(f"quotient kinds differ: {m.quotient.kind} vs {n.quotient.kind}")
        bm, bn = _euler(m, args).thurston_lower_bound, _euler(n, args).thurston_lower_bound
        holds = bm >= bn
        result = {"bound_m": bm, "bound_n": bn, "holds": holds,
                  "relation": "equal" if bm == bn else ("greater" if bm > bn else "less")}
        if not holds:
            result["warning"] = ("bound(M) < bound(N): the asserted epimorphism hypotheses "
                                 "or the computation are wrong")
            err.write(f"WARNING: {result['warning']}\n")
        rec = make_record(f"{m.name} -> {n.name}", "compare", result, None, time.perf_counter() - start, __version__)
        code = EXIT_OK
    except Exception as exc:
        code, kind = _error(exc)
        rec = make_record(f"{args.file_m} -> {args.file_n}", "compare", None, {"kind": kind, "message": str(exc)},
                          time.perf_counter() - start, __version__)
    _emit([rec], args.format, out)
    return code


def cmd_selftest(args, out) -> int:
    from l2chi.acceptance import run_all

    results = run_all(lambda line: out.write(line + "\n"))
    passed = sum(c.passed for c in results)
    out.write(f"{passed}/{len(results)} criteria passed\n")
    return EXIT_OK if passed == len(results) else EXIT_VERIFY


# ---------------------------------------------------------------------------
# argument parsing


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="l2chi", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "records"), default="table")
    common.add_argument("--limit-bytes", type=_positive, default=None,
                        help="abort a reduction whose matrix grows beyond this many bytes")
    common.add_argument("--all-columns", action="store_true", help="verify every valid deleted column")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("chi2", "twisted L2-Euler characteristic"), ("delta", "higher-order Alexander degree"),
                       ("polytope", "polytope of the deleted Fox matrix (abelian quotients)")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("paths", nargs="+", help="presentation files or directories of them")
        p.add_argument("--jobs", type=_positive, default=1)
        if name == "chi2":
            p.add_argument("--scaling-sweep", type=_positive, default=0, metavar="K",
                           help="also check chi(k phi) = k chi(phi) for k = 1..K")
    p = sub.add_parser("seifert", parents=[common], help="Seifert fibred formula")
    p.add_argument("--genus", type=int, default=0)
    p.add_argument("--boundary", type=int, default=0)
    p.add_argument("--cone-orders", default="", help="comma separated, e.g. 2,3")
    p.add_argument("--fiber-index", type=int, required=True)
    p = sub.add_parser("jsj-sum", parents=[common], help="sum over JSJ pieces")
    p.add_argument("paths", nargs="+")
    p = sub.add_parser("compare", parents=[common], help="bounds across an epimorphism M -> N")
    p.add_argument("file_m")
    p.add_argument("file_n")
    sub.add_parser("selftest", help="run the acceptance criteria")
    return parser


def main(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.command in JOBS:
        args.scaling_sweep = getattr(args, "scaling_sweep", 0)
        return cmd_files(args, out)
    if args.command == "seifert":
        return cmd_seifert(args, out)
    if args.command == "jsj-sum":
        args.scaling_sweep = 0
        return cmd_jsj_sum(args, out)
    if args.command == "compare":
        return cmd_compare(args, out, err)
    return cmd_selftest(args, out)


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()

"""Command-line front end.

    telescf coeffs --k 3 --m 4 --format csv
    telescf verify --k-max 7 --m-max 6
    telescf bounds --n 1 --m 2
    telescf compare --n-max 10000
    telescf qd --m 6
    telescf conjectures --n-max 50 --m-max 8 --width 1e-30

Exit codes: 0 success, 1 a structural invariant failed, 2 the coefficient
algorithm terminated early, 3 an iteration cap was hit, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .binet import Interval, binet_interval, decimal_ceil, decimal_floor
from .bounds import (
    CLASSICAL, LB1, LB2, LB3, BoundSpec, compare_bounds, eval_g, sandwich_check,
    verify_dominance_inequalities,
)
from .errors import AlgorithmTerminated, DomainError, ResourceError, TelescfError
from .exact import format_rational, parse_rational
from .qd import qd_agreement_check, stirling_b
from .telescope import run_algorithm, stabilization_table, stabilized_coefficients

EXIT_OK, EXIT_INVARIANT, EXIT_TERMINATED, EXIT_RESOURCE, EXIT_USAGE = 0, 1, 2, 3, 64

# Published values of a_m for k = 2..7, m = 1..6.
PUBLISHED_A = {
    2: ("1/12", "1/18", "11/45", "39/70", "188/189", "925/594"),
    3: ("1/12", "1/30", "17/75", "27/50", "44/45", "305/198"),
    4: ("1/12", "1/30", "53/210", "1377/2597", "1198100/1192023", "80881615183/52930560375"),
    5: ("1/12", "1/30", "53/210", "195/371", "56428/55809", "248094749/163401381"),
    6: ("1/12", "1/30", "53/210", "195/371", "22999/22737", "329394523/217064562"),
    7: ("1/12", "1/30", "53/210", "195/371", "22999/22737", "29944523/19733142"),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {v}")
    return v


def _positive_rational(text: str) -> Fraction:
    try:
        v = parse_rational(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return v


@dataclass
class Output:
    """A command result: ``results`` is the JSON payload, ``rows`` the flat table."""

    command: str
    params: dict
    results: dict
    columns: list[str]
    rows: list[dict]
    exit_code: int = EXIT_OK
    latex: str | None = None
    notes: list[str] = field(default_factory=list)


# -- commands ----------------------------------------------------------------


def cmd_coeffs(args) -> Output:
    if args.k < 2:
        raise UsageError("--k must be >= 2")
    exit_code, notes = EXIT_OK, []
    try:
        coeffs, reports = run_algorithm(args.k, args.m)
        a = list(coeffs.a)
    except AlgorithmTerminated as exc:
        a, reports = exc.coefficients, exc.reports
        exit_code = EXIT_TERMINATED
        notes.append(str(exc))
    rows = []
    for rep in reports:
        row = {"m": rep.m, "a": format_rational(rep.a_m), "sign": rep.sign.kind.value,
               "method": rep.sign.method.value, "matches": rep.sign_matches_conjecture}
        if args.decimals is not None:
            row["a_decimal"] = decimal_floor(rep.a_m, args.decimals)
        rows.append(row)
    results = {
        "k": args.k,
        "a": [format_rational(x) for x in a],
        "steps": [r.to_json() for r in reports],
        "all_positive": all(x > 0 for x in a),
        "all_signs_match": all(r.sign_matches_conjecture for r in reports),
        "terminated": exit_code == EXIT_TERMINATED,
    }
    latex = _latex_coeff_grid({args.k: tuple(a)}, len(a))
    return Output("coeffs", {"k": args.k, "m": args.m}, results, list(rows[0]) if rows else ["m", "a"],
                  rows, exit_code, latex, notes)


def cmd_verify(args) -> Output:
    if args.k_max < 3:
        raise UsageError("--k-max must be >= 3")
    table = stabilization_table(args.k_max, args.m_max)
    signs_total = signs_ok = 0
    positive = True
    counterexamples = []
    for k in range(2, args.k_max + 1):
        try:
            _, reports = run_algorithm(k, args.m_max)
        except AlgorithmTerminated as exc:
            reports = exc.reports
        for rep in reports:
            signs_total += 1
            if rep.sign_matches_conjecture:
                signs_ok += 1
            else:
                counterexamples.append(rep.to_json())
            positive &= rep.a_m > 0
    t2_total = t2_ok = 0
    mismatches = []
    for k, published in PUBLISHED_A.items():
        row = table.rows.get(k, ())
        for m, value in enumerate(published, start=1):
            if m > args.m_max or k > args.k_max:
                continue
            t2_total += 1
            got = row[m - 1] if len(row) >= m else None
            if got == Fraction(value):
                t2_ok += 1
            else:
                mismatches.append({"k": k, "m": m, "published": value,
                                   "computed": None if got is None else format_rational(got)})
    results = {
        "published": {"checked": t2_total, "matched": t2_ok, "mismatches": mismatches},
        "signs": {"checked": signs_total, "matched": signs_ok, "counterexamples": counterexamples},
        "positivity": positive,
        "stabilization": {str(m): ok for m, ok in table.agrees.items()},
        "stabilized": [format_rational(x) for x in table.stabilized.a],
        "terminated": {str(k): m for k, m in table.terminated.items()},
        "rows": {str(k): [format_rational(x) for x in row] for k, row in table.rows.items()},
    }
    rows = [{"k": k, **{f"a{m}": format_rational(x) for m, x in enumerate(row, start=1)}}
            for k, row in table.rows.items()]
    cols = ["k"] + [f"a{m}" for m in range(1, args.m_max + 1)]
    # Published values and structural identities are invariants; signs,
    # positivity and stabilization are conjecture evidence and never fail the run.
    code = EXIT_INVARIANT if mismatches else EXIT_OK
    notes = [f"published values: {t2_ok}/{t2_total} match", f"signs: {signs_ok}/{signs_total} match (-1)^m",
             f"all a_m > 0: {positive}",
             "stabilized below diagonal: " + ", ".join(f"m={m}:{'yes' if ok else 'no'}"
                                                       for m, ok in table.agrees.items())]
    return Output("verify", {"k_max": args.k_max, "m_max": args.m_max}, results, cols, rows, code,
                  _latex_coeff_grid(table.rows, args.m_max), notes)


def cmd_bounds(args) -> Output:
    if args.stabilized:
        coeffs = stabilized_coefficients(args.m)
    else:
        if args.k < 2:
            raise UsageError("--k must be >= 2")
        coeffs, _ = run_algorithm(args.k, args.m)
    interval = binet_interval(args.n, args.width)
    rows = []
    for m in range(1, args.m + 1):
        g = eval_g(coeffs, m, args.n)
        direction = "lower" if m % 2 == 0 else "upper"
        if direction == "lower":
            certified = g < interval.lo
        else:
            certified = g > interval.hi
        row = {"bound": f"g{m}", "direction": direction, "value": format_rational(g),
               "certified_by_interval": certified}
        if args.decimals is not None:
            row["decimal"] = (decimal_floor if direction == "lower" else decimal_ceil)(g, args.decimals)
        rows.append(row)
    for name in CLASSICAL:
        spec = BoundSpec(name)
        v = spec(args.n)
        certified = v < interval.lo if spec.direction == "lower" else v > interval.hi
        row = {"bound": name, "direction": spec.direction, "value": format_rational(v),
               "certified_by_interval": certified}
        if args.decimals is not None:
            row["decimal"] = (decimal_floor if spec.direction == "lower" else decimal_ceil)(v, args.decimals)
        rows.append(row)
    r = {"coefficients": [format_rational(a) for a in coeffs.a],
         "interval": _interval_json(interval, args.decimals), "bounds": rows}
    params = {"n": args.n, "m": args.m, "k": None if args.stabilized else args.k,
              "width": format_rational(args.width)}
    return Output("bounds", params, r,
                  list(rows[0]), rows)


def cmd_compare(args) -> Output:
    g_lb1, g_lb2, g_lb3 = (BoundSpec.telescope(c) for c in (LB1, LB2, LB3))
    pairs = [(g_lb1, "RobbinsLower"), (g_lb1, "Cesaro"), (g_lb1, "Maria"),
             (g_lb2, "Nanjundiah"), (g_lb3, "Popov"), (g_lb2, g_lb1)]
    reports = [compare_bounds(a, b, args.n_max) for a, b in pairs]
    dom = verify_dominance_inequalities(max(args.n_max, 10))
    rows = [{"a": r.a.label, "b": r.b.label, "always_better": r.always_better,
             "threshold": "" if r.threshold is None else r.threshold,
             "crossovers": " ".join(map(str, r.crossovers))} for r in reports]
    results = {"comparisons": [r.to_json() for r in reports], "dominance": dom.to_json()}
    return Output("compare", {"n_max": args.n_max}, results, list(rows[0]), rows,
                  notes=[f"helper inequality certificate: {dom.helper_certificate.kind.value} "
                         f"({dom.helper_certificate.method.value}) for {dom.helper_polynomial}"])


def cmd_qd(args) -> Output:
    b = stirling_b(args.m)
    report = qd_agreement_check(args.m) if args.check else None
    rows = []
    for i, x in enumerate(b, start=1):
        row = {"m": i, "b": format_rational(x)}
        if report is not None and i <= report.M:
            row["a"] = format_rational(report.a[i - 1])
            row["equal"] = report.equal[i - 1]
        rows.append(row)
    results = {"b": [format_rational(x) for x in b], "all_positive": all(x > 0 for x in b)}
    if report is not None:
        results["qd_agreement"] = report.to_json()
    return Output("qd", {"m": args.m, "check": args.check}, results, list(rows[0]), rows)


def cmd_conjectures(args) -> Output:
    report = sandwich_check(args.n_max, args.m_max, args.width)
    rows = [{"n": c.n, "m": c.m, "g": format_rational(c.g), "verdict": c.verdict,
             "refined": c.refined} for c in report.cells]
    results = report.to_json()
    q = qd_agreement_check(args.m_max)
    results["qd_agreement"] = q.to_json()
    summary = results["summary"]
    return Output("conjectures", {"n_max": args.n_max, "m_max": args.m_max,
                                  "width": format_rational(args.width)},
                  results, list(rows[0]), rows,
                  notes=[f"{k}: {v}" for k, v in summary.items()]
                  + [f"a_m = b_m for m <= {q.M}: {q.all_equal}"])


def _interval_json(interval: Interval, digits: int | None) -> dict:
    out = interval.to_json()
    if digits is not None:
        out["decimal"] = list(interval.decimal(digits))
    return out


# -- rendering ------------------------------------------------------------------


def _latex_coeff_grid(rows: dict, m_max: int) -> str:
    cols = " | ".join(["c"] * (m_max + 1))
    lines = [r"\begin{array}{| " + cols + " |}", r"\hline",
             "k & " + " & ".join(f"a_{m}" for m in range(1, m_max + 1)) + r" \\ \hline\hline"]
    for k, row in rows.items():
        cells = [format_rational(x) for x in row] + [""] * (m_max - len(row))
        lines.append(f"{k} & " + " & ".join(cells) + r" \\ \hline")
    lines.append(r"\end{array}")
    return "\n".join(lines) + "\n"


def _latex_generic(out: Output) -> str:
    cols = out.columns
    lines = [r"\begin{tabular}{" + "l" * len(cols) + "}", r"\hline",
             " & ".join(c.replace("_", r"\_") for c in cols) + r" \\ \hline"]
    for row in out.rows:
        lines.append(" & ".join(str(row.get(c, "")) for c in cols) + r" \\")
    lines += [r"\hline", r"\end{tabular}"]
    return "\n".join(lines) + "\n"


def render(out: Output, fmt: str, runtime_ms: int | None) -> str:
    if fmt == "json":
        meta = {"version": __version__}
        if runtime_ms is not None:
            meta["runtime_ms"] = runtime_ms
        doc = {"command": out.command, "params": out.params, "results": out.results, "meta": meta}
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=out.columns, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in out.rows:
            writer.writerow(row)
        return buf.getvalue()
    if fmt == "latex":
        return out.latex if out.latex is not None else _latex_generic(out)
    widths = {c: max([len(c)] + [len(str(r.get(c, ""))) for r in out.rows]) for c in out.columns}
    lines = ["  ".join(c.ljust(widths[c]) for c in out.columns)]
    for row in out.rows:
        lines.append("  ".join(str(row.get(c, "")).ljust(widths[c]) for c in out.columns).rstrip())
    extra = []
    if out.command == "bounds":
        iv = out.results["interval"]
        extra.append(f"r_{out.params['n']} in [{iv['lo']}, {iv['hi']}]")
    return "\n".join(lines + extra + out.notes) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "latex", "text"), default="text")
    common.add_argument("--out", metavar="PATH", help="write to PATH instead of stdout")
    common.add_argument("--decimals", type=int, metavar="D",
                        help="add decimal renderings rounded toward the certified side")
    common.add_argument("--width", type=_positive_rational, default=Fraction(1, 10**30),
                        metavar="W", help="target enclosure width, e.g. 1e-30 or 1/1000")
    common.add_argument("--deterministic", action="store_true",
                        help="omit runtime from the JSON meta block")

    parser = _Parser(prog="telescf", description="Telescoping continued-fraction bounds for Stirling's formula.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("coeffs", parents=[common], help="a_m for one convergent index k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=_positive_int, default=6)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("verify", parents=[common], help="grid run: published values, signs, positivity, stabilization")
    p.add_argument("--k-max", type=_positive_int, default=7)
    p.add_argument("--m-max", type=_positive_int, default=6)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", parents=[common], help="g_m(n) and classical bounds against r_n")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--m", type=_positive_int, default=2)
    p.add_argument("--k", type=int, default=2, help="convergent index supplying a_1..a_m")
    p.add_argument("--stabilized", action="store_true",
                   help="take each a_m from k = m + 1 instead of a single k")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("compare", parents=[common], help="exact dominance checks between lower bounds")
    p.add_argument("--n-max", type=_positive_int, default=10_000)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("qd", parents=[common], help="S-fraction coefficients via the qd scheme")
    p.add_argument("--m", type=_positive_int, default=6)
    p.add_argument("--check", action="store_true", help="also compare with stabilized a_m")
    p.set_defaults(func=cmd_qd)

    p = sub.add_parser("conjectures", parents=[common], help="sandwich check of g_m(n) around r_n")
    p.add_argument("--n-max", type=_positive_int, default=50)
    p.add_argument("--m-max", type=_positive_int, default=8)
    p.set_defaults(func=cmd_conjectures)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.decimals is not None and args.decimals < 0:
        parser.error("--decimals must be >= 0")
    start = time.perf_counter()
    try:
        out = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except ResourceError as exc:
        best = exc.best.to_json() if exc.best is not None else None
        print(json.dumps({"error": str(exc), "best": best}), file=sys.stderr)
        return EXIT_RESOURCE
    except AlgorithmTerminated as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TERMINATED
    except TelescfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    runtime = None if args.deterministic else round((time.perf_counter() - start) * 1000)
    text = render(out, args.format, runtime)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return out.exit_code


if __name__ == "__main__":
    sys.exit(main())

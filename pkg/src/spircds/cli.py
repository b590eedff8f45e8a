"""Command-line interface.

Exit status: 0 success, 1 usage / I/O / parse error, 2 a verification check
failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from .constructions import (
    CANONICAL_NAMES,
    canonical_conditions,
    canonical_scheme,
    double_scheme,
    region_points,
    repeat_scheme,
)
from .graph import export_dot, graph_from_scheme
from .scheme import (
    FormatError,
    Scheme,
    SchemeError,
    download_cost,
    emit_scheme,
    parse_scheme,
    upload_cost,
)
from .verifier import (
    GuardError,
    VerificationError,
    check_reliability,
    decode_table,
    emit_report,
    format_report,
    full_report,
)

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load(args) -> Scheme:
    if args.canonical and args.input:
        raise UsageError("give either a scheme file or --canonical, not both")
    if args.canonical:
        if args.canonical not in CANONICAL_NAMES:
            raise UsageError(f"unknown canonical scheme {args.canonical!r}")
        return canonical_scheme(args.canonical)
    if not args.input:
        raise UsageError("a scheme file or --canonical NAME is required")
    text = Path(args.input).read_text()
    return parse_scheme(text)


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args) -> int:
    s = _load(args)
    report = full_report(s)
    _write(emit_report(report) if args.format == "machine" else format_report(report), None)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_double(args) -> int:
    out = double_scheme(_load(args))
    _write(emit_scheme(out), args.out)
    return EXIT_OK


def cmd_repeat(args) -> int:
    out = repeat_scheme(_load(args), args.l)
    _write(emit_scheme(out), args.out)
    return EXIT_OK


def cmd_graph(args) -> int:
    s = _load(args)
    dummy = canonical_conditions(args.canonical).dummy if args.canonical else None
    _write(export_dot(graph_from_scheme(s, dummy)), args.out)
    return EXIT_OK


def region_csv(K: int, L: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["upload_bits", "download_bits", "total_bits", "witness_scheme", "kind"])
    for p in region_points(K, L):
        writer.writerow([repr(p.upload_bits), repr(p.download_bits), repr(p.total_bits), p.witness_scheme, p.kind])
    return buf.getvalue()


def cmd_region(args) -> int:
    try:
        text = region_csv(args.k, args.l)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write(text, args.out)
    return EXIT_OK


def format_decode_table(s: Scheme, k: int) -> tuple[str, bool]:
    table = decode_table(s, k)
    rows = []
    ok = True
    xi = {l: i for i, l in enumerate(s.strategy.space_x)}
    yi = {l: i for i, l in enumerate(s.strategy.space_y)}
    order = lambda item: (xi[item[0][0]], yi[item[0][1]], item[0][2:])  # noqa: E731
    for (x, y, a1, a2), values in sorted(table.items(), key=order):
        shown = " | ".join(_vec(v) for v in sorted(values))
        if len(values) != 1:
            ok = False
            shown += "   AMBIGUOUS"
        rows.append((f"{x}:{y}", _vec(a1), _vec(a2), shown))
    head = ("pair", "A1", "A2", f"W{k}")
    widths = [max(len(r[i]) for r in rows + [head]) for i in range(3)]
    lines = [f"# decode table for {s.name}, index {k}"]
    for r in [head] + rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)) + "  " + r[3])
    return "\n".join(lines) + "\n", ok


def _vec(v) -> str:
    return "(" + ",".join(map(str, v)) + ")"


def cmd_decode_table(args) -> int:
    s = _load(args)
    if not 1 <= args.k <= s.K:
        raise UsageError(f"--k must lie in 1..{s.K}")
    text, ok = format_decode_table(s, args.k)
    _write(text, args.out)
    if not ok:
        print(f"not decodable: {check_reliability(s).witness}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_list_canonical(args) -> int:
    for name in CANONICAL_NAMES:
        s = canonical_scheme(name)
        print(f"{name:<10} K={s.K} U={upload_cost(s):.6f} D={download_cost(s):g} rho={s.rho}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="spircds", description="Build and verify two-database SPIR schemes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_input(sp):
        sp.add_argument("input", nargs="?", help="scheme document")
        sp.add_argument("--canonical", choices=CANONICAL_NAMES, help="use a built-in scheme")
        return sp

    v = with_input(sub.add_parser("verify", help="check reliability and both privacy constraints"))
    v.add_argument("--format", choices=("text", "machine"), default="text")
    v.set_defaults(func=cmd_verify)

    d = with_input(sub.add_parser("double", help="K -> 2K messages at cost (U+2, 2D)"))
    d.add_argument("--out")
    d.set_defaults(func=cmd_double)

    r = with_input(sub.add_parser("repeat", help="L-symbol messages by repetition"))
    r.add_argument("--l", type=int, required=True)
    r.add_argument("--out")
    r.set_defaults(func=cmd_repeat)

    g = with_input(sub.add_parser("graph", help="colored bipartite graph as DOT"))
    g.add_argument("--out")
    g.set_defaults(func=cmd_graph)

    rg = sub.add_parser("region", help="achievable (U, D) corners as CSV")
    rg.add_argument("--k", type=int, default=3)
    rg.add_argument("--l", type=int, default=1)
    rg.add_argument("--out")
    rg.set_defaults(func=cmd_region)

    dt = with_input(sub.add_parser("decode-table", help="decoder implied by reliability"))
    dt.add_argument("--k", type=int, required=True, help="desired message index")
    dt.add_argument("--out")
    dt.set_defaults(func=cmd_decode_table)

    lc = sub.add_parser("list-canonical", help="list built-in schemes")
    lc.set_defaults(func=cmd_list_canonical)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except VerificationError as exc:
        print(f"spircds: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (UsageError, OSError, FormatError, SchemeError, GuardError, ValueError) as exc:
        print(f"spircds: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

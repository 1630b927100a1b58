"""Command-line front end.

Exit codes: 0 success, 1 selftest failure, 2 bad input, 3 size guard exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from fractions import Fraction

from .cumulant import correlation_report
from .dense_state import load_state
from .errors import DomainError, ParseError, ResourceError
from .ghz_analysis import MAX_N, fig1_table, table_to_csv
from .partitions import full_mask, mask_from_indices
from .selftest import run_selftest
from .stabilizer import (
    SinglePartyWarning,
    cumulant_coefficients,
    dense_measure,
    enumerate_elements,
    expansion_measure_exact,
    format_pauli,
    load_stabilizer,
    reduced_expansion,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3

_MEASURE_FIELDS = {
    "mc": ("mc",),
    "mtc": ("mc", "mtc"),
    "lui": ("mc", "lui"),
    "all": ("mc", "mtc", "lui", "mutual", "relative"),
}


class UsageError(Exception):
    pass


def fmt_float(x: float) -> str:
    """12 significant digits; values below 1e-12 in magnitude print as 0.0."""
    if abs(x) < 1e-12:
        x = 0.0
    s = f"{x:.12g}"
    if not any(c in s for c in ".eni"):
        s += ".0"
    return s


def fmt_fraction(x: Fraction) -> str:
    return str(x)


def _clean(x: float) -> float:
    return float(fmt_float(x))


def _emit_report(d: dict, mode: str, out) -> None:
    if mode == "json":
        out.write(json.dumps({k: (_clean(v) if isinstance(v, float) else v) for k, v in d.items()}) + "\n")
    elif mode == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(d.keys())
        w.writerow([fmt_float(v) if isinstance(v, float) else v for v in d.values()])
        out.write(buf.getvalue())
    else:
        for k, v in d.items():
            out.write(f"{k}: {fmt_float(v) if isinstance(v, float) else v}\n")


def cmd_measure(args, out) -> int:
    rho = load_state(args.input)
    report = correlation_report(rho, _MEASURE_FIELDS[args.measure])
    d = report.to_dict()
    if args.measure == "mtc":
        d.pop("m_c")
    elif args.measure == "lui":
        d.pop("m_c")
    mode = "json" if args.json else "csv" if args.csv else "text"
    _emit_report(d, mode, out)
    return EXIT_OK


def cmd_compare(args, out) -> int:
    rho = load_state(args.input)
    if rho.n_parties != 3:
        raise DomainError(f"compare reports the three-party mutual entropy; file has {rho.n_parties} parties")
    d = correlation_report(rho).to_dict()
    _emit_report(d, "text", out)
    return EXIT_OK


def _parse_subset(text: str, n: int) -> int:
    try:
        idx = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ParseError(f"subset must be comma-separated integers, got {text!r}") from exc
    if not idx or any(not 1 <= i <= n for i in idx):
        raise DomainError(f"subset indices must lie in 1..{n}")
    return mask_from_indices(i - 1 for i in idx)


def cmd_stabilizer(args, out) -> int:
    g = load_stabilizer(args.generators)
    s = full_mask(g.n) if args.subset is None else _parse_subset(args.subset, g.n)
    out.write(f"qubits: {g.n}\n")
    out.write(f"generators: {g.k}\n")
    if s == full_mask(g.n) and g.k != g.n:
        raise DomainError(f"{g.k} generators on {g.n} qubits do not fix a pure state; pass --subset")
    single = bin(s).count("1") == 1
    if single:
        out.write("subset: " + ",".join(str(i + 1) for i in range(g.n) if s >> i & 1) + "\n")
        out.write("note: single-party marginal, measure defined as 0\n")
        mc = Fraction(0)
    else:
        ce = cumulant_coefficients(g) if s == full_mask(g.n) else reduced_expansion(g, s)
        if s != full_mask(g.n):
            out.write("subset: " + ",".join(str(i + 1) for i in range(g.n) if s >> i & 1) + "\n")
            out.write(f"subgroup generators: {ce.group.k}\n")
        elements = dict(enumerate_elements(ce.group))
        nz = ce.nonzero()
        out.write(f"nonzero beta: {len(nz)} of {len(elements)}\n")
        for a in sorted(nz):
            out.write(f"beta {format_pauli(elements[a])}: {nz[a]}\n")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SinglePartyWarning)
            mc = expansion_measure_exact(ce)
    out.write(f"m_c: {fmt_fraction(mc)} {fmt_float(float(mc))}\n")
    if args.check_dense:
        dev = abs(dense_measure(g, s) - float(mc))
        out.write(f"dense max deviation: {dev:.3g}\n")
    return EXIT_OK


def cmd_ghz_table(args, out) -> int:
    if not 2 <= args.max_n <= MAX_N:
        raise DomainError(f"--max-n must lie in 2..{MAX_N}")
    rows = fig1_table(args.max_n)
    if args.csv:
        out.write(table_to_csv(rows))
        return EXIT_OK
    out.write(f"{'n':>3} {'c_n':>24} {'measure_ghz':>24} {'measure_classical':>24}\n")
    for r in rows:
        out.write(f"{r.n:>3} {fmt_fraction(r.c_n):>24} {fmt_fraction(r.measure_ghz):>24} "
                  f"{fmt_fraction(r.measure_classical):>24}\n")
    return EXIT_OK


def cmd_selftest(args, out) -> int:
    results = run_selftest(seed=args.seed, fast=args.fast)
    for r in results:
        out.write(f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.detail}\n")
    failed = [r.name for r in results if not r.ok]
    if failed:
        out.write("failed: " + ", ".join(failed) + "\n")
        return EXIT_FAIL
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qcumulant", description="Cumulant-based multi-party correlation measures.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("measure", help="correlation measures of a state file")
    m.add_argument("--input", required=True)
    m.add_argument("--measure", choices=sorted(_MEASURE_FIELDS), default="mc")
    fmt = m.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    m.set_defaults(func=cmd_measure)

    s = sub.add_parser("stabilizer", help="stabilizer-state measure from a generator file")
    s.add_argument("--generators", required=True)
    s.add_argument("--subset", help="1-based comma-separated qubit list")
    s.add_argument("--check-dense", action="store_true")
    s.set_defaults(func=cmd_stabilizer)

    g = sub.add_parser("ghz-table", help="exact GHZ / classical correlation table")
    g.add_argument("--max-n", type=int, required=True)
    g.add_argument("--csv", action="store_true")
    g.set_defaults(func=cmd_ghz_table)

    c = sub.add_parser("compare", help="all measures side by side for a 3-party state")
    c.add_argument("--input", required=True)
    c.set_defaults(func=cmd_compare)

    t = sub.add_parser("selftest", help="run the built-in verification suite")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--fast", action="store_true")
    t.set_defaults(func=cmd_selftest)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_INPUT
    except ResourceError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_GUARD
    except (ParseError, DomainError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

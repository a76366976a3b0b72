"""Command-line interface: ``compact64 {design,bench,verify,info,gen}``.

Exit status is 0 on success, 1 when a design conflicts or a verification
check fails, and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path

from . import bench, codec, kernels
from .designer import IndirectTable, SchemeConfig, build_indirect, design, search_min_m, stats
from .errors import Compact64Error, ConflictError, Infeasible, PatternError
from .tablefile import HEADER_SIZE, load_table, save_table
from .valueset import builtin_set, read_pattern_file

log = logging.getLogger("compact64")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def render(rows: list[dict], fmt: str) -> str:
    if not rows:
        return ""
    cols = list(rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()
    cells = [[("" if r[c] is None else str(r[c])) for c in cols] for r in rows]
    if fmt == "md":
        lines = ["| " + " | ".join(cols) + " |", "|" + "|".join("---" for _ in cols) + "|"]
        lines += ["| " + " | ".join(row) + " |" for row in cells]
        return "\n".join(lines) + "\n"
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _stats_rows(name: str, table) -> list[dict]:
    st = stats(table)
    c = table.config
    return [{
        "scheme": name, "m": c.m, "e": c.e, "f": c.f,
        "table_entries": st.table_entries, "used_entries": st.used_entries,
        "distinct_entries": st.distinct_entries,
        "direct_bytes": st.direct_bytes, "indirect_bytes": st.indirect_bytes,
    }]


def cmd_design(args) -> int:
    if args.builtin:
        names = codec.BUILTIN_NAMES if args.builtin.lower() == "all" else [args.builtin.upper()]
        out_dir = Path(args.out_dir or ".")
        out_dir.mkdir(parents=True, exist_ok=True)
        rows = []
        for name in names:
            table = design(codec.BUILTIN_CONFIGS[name], builtin_set(name))
            path = out_dir / f"{name}.cft"
            save_table(path, table)
            rows += _stats_rows(name, table)
        sys.stdout.write(render(rows, args.format))
        return EXIT_OK

    if not args.patterns:
        log.error("design needs a pattern file or --builtin")
        return EXIT_USAGE
    spec = read_pattern_file(args.patterns)
    d = spec.value_set()
    e = args.e if args.e is not None else (spec.e or 0)
    f = args.f if args.f is not None else (spec.f or 0)
    m = args.m if args.m is not None else spec.m

    try:
        if args.search:
            config = search_min_m(d, e, f, m_max=args.m_max, allow_large=args.allow_large)
            print(f"smallest feasible: {config}")
        else:
            if m is None:
                log.error("no m given (use -m, an m= directive, or --search)")
                return EXIT_USAGE
            config = SchemeConfig(m, e, f)
        table = design(config, d, allow_large=args.allow_large)
    except ConflictError as exc:
        print(f"conflict at index {exc.index}: {exc.existing_value!r} (low word 0x{exc.existing_entry:08X}) "
              f"vs {exc.offending_value!r}", file=sys.stderr)
        return EXIT_FAIL
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_FAIL

    print(f"{len(d)} target values")
    sys.stdout.write(render(_stats_rows(Path(args.patterns).stem, table), args.format))
    if args.output:
        written = save_table(args.output, build_indirect(table) if args.indirect else table)
        print(f"wrote {args.output} ({written} bytes)")
    return EXIT_OK


def _split(value: str, choices) -> list[str]:
    items = list(choices) if value == "all" else [v.strip() for v in value.split(",") if v.strip()]
    return items


def cmd_bench(args) -> int:
    schemes = _split(args.scheme, bench.REPRESENTATIONS)
    ops = _split(args.op, kernels.OPS)
    paths = ["direct", "indirect"] if args.path == "both" else [args.path]
    rows = []
    status = EXIT_OK
    for scheme in schemes:
        for path in paths if scheme not in ("none", "decimal") else ["direct"]:
            for op in ops:
                spec = bench.BenchSpec(scheme=scheme, path=path, op=op, dist=args.dist,
                                       n=args.n, reps=args.reps, seed=args.seed)
                report = bench.run_bench(spec)
                row = report.row()
                row["seconds"] = f"{report.seconds:.6f}"
                if args.check and report.checksum is not None:
                    ref = bench.run_bench(bench.BenchSpec(scheme="none", op=op, dist=args.dist,
                                                          n=args.n, reps=1, seed=args.seed))
                    row["matches_plain"] = report.checksum == ref.checksum
                    if not row["matches_plain"]:
                        status = EXIT_FAIL
                row["checksum"] = "" if report.checksum is None else f"{report.checksum:016x}"
                rows.append(row)
    sys.stdout.write(render(rows, args.format))
    return status


def cmd_verify(args) -> int:
    checks = bench.verify_tables()
    rows = [vars(c) for c in checks]
    sys.stdout.write(render(rows, args.format))
    failed = [c for c in checks if c.status == bench.FAIL]
    flagged = [c for c in checks if c.status == bench.FLAG]
    print(f"{len(checks)} checks: {len(failed)} failed, {len(flagged)} flagged")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_info(args) -> int:
    table = load_table(args.table)
    kind = "indirect" if isinstance(table, IndirectTable) else "direct"
    direct = table.to_direct() if kind == "indirect" else table
    print(f"{args.table}: {kind} table, {table.config}, header {HEADER_SIZE} bytes")
    sys.stdout.write(render(_stats_rows(Path(args.table).stem, direct), args.format))
    return EXIT_OK


def cmd_gen(args) -> int:
    values = bench.gen_data(args.dist, args.n, args.seed, stream=args.stream)
    out = sys.stdout
    for k, v in enumerate(values.tolist()):
        out.write(bench.format_value(v, args.dist, k))
        out.write("\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="compact64", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=("table", "csv", "md"), default="table")

    p = sub.add_parser("design", help="design a table from a pattern file")
    p.add_argument("patterns", nargs="?", help="pattern file (one form per line)")
    p.add_argument("-m", type=int, help="mantissa index bits")
    p.add_argument("-e", type=int, help="exponent index bits")
    p.add_argument("-f", type=int, help="exponent bit offset")
    p.add_argument("--search", action="store_true", help="find the smallest feasible m")
    p.add_argument("--m-max", type=int, default=20)
    p.add_argument("-o", "--output", help="write the table here (CFT1 format)")
    p.add_argument("--indirect", action="store_true", help="write the indirect form")
    p.add_argument("--allow-large", action="store_true", help="permit m+e above 26")
    p.add_argument("--builtin", help="write a built-in scheme's table (name or 'all')")
    p.add_argument("--out-dir", help="directory for --builtin tables")
    fmt(p)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("bench", help="time the vector kernels")
    p.add_argument("--scheme", default="X",
                   help="none, decimal, A..Z, a table file, a comma list, or 'all'")
    p.add_argument("--path", choices=("direct", "indirect", "both"), default="direct")
    p.add_argument("--op", default="all", help=f"{', '.join(kernels.OPS)}, a comma list, or 'all'")
    p.add_argument("--dist", type=int, choices=(1, 2), default=1)
    p.add_argument("-n", type=int, default=bench.DEFAULT_N)
    p.add_argument("--reps", type=int, default=bench.DEFAULT_REPS)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--no-check", dest="check", action="store_false",
                   help="skip comparing checksums against the uncompressed run")
    fmt(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="check built-in table counts against the reference figures")
    fmt(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("info", help="describe a CFT1 table file")
    p.add_argument("table")
    fmt(p)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("gen", help="print benchmark data, one number per line")
    p.add_argument("--dist", type=int, choices=(1, 2), default=1)
    p.add_argument("-n", type=int, default=10)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--stream", type=int, default=0, help="input vector number (0, 1, 2)")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except PatternError as exc:
        print(f"compact64: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Compact64Error as exc:
        print(f"compact64: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, KeyError, OSError) as exc:
        print(f"compact64: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

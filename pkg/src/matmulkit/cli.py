"""Command-line front end.

Subcommands: multiply two matrix files, verify every preset against the
naive method, print measured-vs-predicted operation counts, and run timed
benchmark sweeps with CSV (and optional SVG plot) output.

Exit codes: 0 success, 1 check failure, 2 I/O error, 3 dimension error,
4 usage error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .core import DimensionError, max_abs_diff, read_matrix, write_matrix
from .counters import OpCounter
from .hybrid import DEFAULT_CUTOFF, get_variant, multiply, preset_names, variant_catalog
from .metrics import BenchRecord, bench_run, predicted_buffers, predicted_ops, random_matrix

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_IO = 2
EXIT_DIMENSION = 3
EXIT_USAGE = 4

REAL_TOLERANCE_PER_ORDER = 1e-9
DEFAULT_VERIFY_ORDERS = [1, 2, 4, 8, 16, 32, 64, 128, 256]
DEFAULT_BENCH_ORDERS = [2 ** k for k in range(1, 11)]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _parse_order_token(tok: str) -> int:
    tok = tok.strip()
    if tok.startswith("2^"):
        return 2 ** int(tok[2:])
    return int(tok)


def parse_orders(text: str) -> list[int]:
    """Accept "a,b,c" lists or "a..b" ranges stepping through powers of two;
    entries may be plain integers or "2^k"."""
    if ".." in text:
        lo_s, hi_s = text.split("..", 1)
        lo, hi = _parse_order_token(lo_s), _parse_order_token(hi_s)
        if lo < 1 or lo & (lo - 1) or hi & (hi - 1) or hi < lo:
            raise ValueError(f"order range {text!r} must run between powers of two")
        orders = []
        n = lo
        while n <= hi:
            orders.append(n)
            n *= 2
        return orders
    orders = [_parse_order_token(t) for t in text.split(",") if t.strip()]
    if not orders or any(n < 1 for n in orders):
        raise ValueError(f"bad order list {text!r}")
    return orders


def _parse_presets(text: str) -> list[str]:
    if text == "all":
        return preset_names()
    names = [t.strip() for t in text.split(",") if t.strip()]
    valid = set(preset_names())
    for name in names:
        if name not in valid:
            raise KeyError(name)
    return names


def _preset_error(name) -> int:
    print(f"error: unknown algorithm {name!r}", file=sys.stderr)
    print(f"valid presets: {', '.join(preset_names())}", file=sys.stderr)
    return EXIT_USAGE


def cmd_multiply(args) -> int:
    try:
        spec = get_variant(args.algo, cutoff=args.cutoff)
    except KeyError:
        return _preset_error(args.algo)
    try:
        a = read_matrix(args.a)
        b = read_matrix(args.b)
    except OSError as e:
        print(f"error: cannot read input: {e}", file=sys.stderr)
        return EXIT_IO
    except ValueError as e:
        print(f"error: bad matrix file: {e}", file=sys.stderr)
        return EXIT_IO
    trace = None
    if args.trace:
        trace = lambda line: print(line)
    try:
        c = multiply(a, b, spec, trace=trace)
    except DimensionError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DIMENSION
    try:
        write_matrix(c, args.out)
    except OSError as e:
        print(f"error: cannot write output: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        presets = _parse_presets(args.presets)
    except KeyError as e:
        return _preset_error(e.args[0])
    orders = args.orders
    seeds = [args.seed + i for i in range(args.seeds)]
    failures = []
    checks = 0
    for name in presets:
        spec = get_variant(name, cutoff=args.cutoff)
        ok = True
        for order in orders:
            for seed in seeds:
                rng = np.random.default_rng(seed)
                for exact in (True, False):
                    a = random_matrix(rng, order, order, exact)
                    b = random_matrix(rng, order, order, exact)
                    want = multiply(a, b, get_variant("naive"))
                    got = multiply(a, b, spec)
                    diff = max_abs_diff(got, want)
                    checks += 1
                    bound = 0.0 if exact else REAL_TOLERANCE_PER_ORDER * order
                    if diff > bound:
                        ok = False
                        failures.append((name, order, seed, exact, diff))
        status = "ok" if ok else "FAIL"
        print(f"{name:16s} {status}")
    print(f"{checks} checks, {len(failures)} failures")
    for name, order, seed, exact, diff in failures:
        mode = "exact" if exact else "real"
        print(f"FAIL {name} order={order} seed={seed} mode={mode} max_abs_diff={diff}")
    return EXIT_CHECK_FAILED if failures else EXIT_OK


def cmd_count(args) -> int:
    try:
        spec = get_variant(args.algo, cutoff=args.cutoff)
    except KeyError:
        return _preset_error(args.algo)
    for order in args.orders:
        if order & (order - 1):
            print(f"error: order {order} is not a power of two", file=sys.stderr)
            return EXIT_DIMENSION
    rng = np.random.default_rng(0)
    diverged = False
    print(f"{'order':>6s} {'mults':>12s} {'adds':>12s} {'buffers':>10s}  status")
    for order in args.orders:
        a = random_matrix(rng, order, order, exact=True)
        b = random_matrix(rng, order, order, exact=True)
        counter = OpCounter()
        multiply(a, b, spec, counter)
        pm, pa = predicted_ops(spec.kernel, spec.base, order)
        pb, _ = predicted_buffers(spec.kernel, spec.base, order)
        measured = (counter.mults, counter.adds, counter.temp_buffers)
        predicted = (pm, pa, pb)
        ok = measured == predicted
        diverged |= not ok
        status = "ok" if ok else f"DIVERGED predicted={predicted}"
        print(f"{order:6d} {counter.mults:12d} {counter.adds:12d} "
              f"{counter.temp_buffers:10d}  {status}")
    return EXIT_CHECK_FAILED if diverged else EXIT_OK


def cmd_bench(args) -> int:
    try:
        presets = _parse_presets(args.presets)
    except KeyError as e:
        return _preset_error(e.args[0])
    records: list[BenchRecord] = []
    for name in presets:
        records.extend(bench_run(name, args.orders, args.reps, args.seed,
                                 exact=args.exact, cutoff=args.cutoff))
    lines = [BenchRecord.CSV_HEADER] + [r.csv_row() for r in records]
    try:
        with open(args.csv, "w") as f:
            f.write("\n".join(lines) + "\n")
    except OSError as e:
        print(f"error: cannot write CSV: {e}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {len(records)} rows to {args.csv}")
    if args.svg:
        series = []
        for name in presets:
            pts = [(r.order, r.median_time) for r in records if r.algo == name]
            series.append((name, pts))
        try:
            with open(args.svg, "w") as f:
                f.write(render_svg(series, "median time vs order",
                                   "order", "median time [s]"))
        except OSError as e:
            print(f"error: cannot write SVG: {e}", file=sys.stderr)
            return EXIT_IO
        print(f"wrote plot to {args.svg}")
    return EXIT_OK


_PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
            "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#ad494a")


def render_svg(series, title: str, xlabel: str, ylabel: str) -> str:
    """Minimal log-log line chart; one polyline per series."""
    import math

    width, height = 720, 480
    ml, mr, mt, mb = 70, 170, 40, 50
    pw, ph = width - ml - mr, height - mt - mb
    xs = [x for _, pts in series for x, _ in pts]
    ys = [y for _, pts in series for _, y in pts if y > 0]
    if not xs:
        xs = [1, 2]
    if not ys:
        ys = [1e-9, 1.0]
    x0, x1 = math.log2(min(xs)), math.log2(max(xs))
    y0, y1 = math.log10(min(ys)), math.log10(max(ys))
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1

    def px(x):
        return ml + (math.log2(x) - x0) / (x1 - x0) * pw

    def py(y):
        y = max(y, 10.0 ** y0)
        return mt + ph - (math.log10(y) - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="monospace" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{ml}" y="{mt - 14}" font-size="14">{title}</text>',
        f'<line x1="{ml}" y1="{mt + ph}" x2="{ml + pw}" y2="{mt + ph}" stroke="black"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + ph}" stroke="black"/>',
        f'<text x="{ml + pw // 2}" y="{height - 12}">{xlabel}</text>',
        f'<text x="14" y="{mt + ph // 2}" transform="rotate(-90 14 {mt + ph // 2})">{ylabel}</text>',
    ]
    k = math.ceil(x0)
    while k <= x1:
        x = px(2.0 ** k)
        out.append(f'<line x1="{x:.1f}" y1="{mt + ph}" x2="{x:.1f}" y2="{mt + ph + 4}" stroke="black"/>')
        out.append(f'<text x="{x:.1f}" y="{mt + ph + 18}" text-anchor="middle">2^{k}</text>')
        k += max(1, int((x1 - x0) // 8))
    d = math.ceil(y0)
    while d <= y1:
        y = py(10.0 ** d)
        out.append(f'<line x1="{ml - 4}" y1="{y:.1f}" x2="{ml}" y2="{y:.1f}" stroke="black"/>')
        out.append(f'<text x="{ml - 8}" y="{y + 4:.1f}" text-anchor="end">1e{d}</text>')
        d += max(1, int((y1 - y0) // 8))
    for i, (name, pts) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        coords = " ".join(f"{px(x):.1f},{py(y):.1f}" for x, y in pts)
        out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = mt + 16 * i
        out.append(f'<line x1="{ml + pw + 10}" y1="{ly}" x2="{ml + pw + 30}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="1.5"/>')
        out.append(f'<text x="{ml + pw + 36}" y="{ly + 4}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="matmulkit",
                     description="Matrix multiplication kernels and benchmarks")
    sub = parser.add_subparsers(dest="command", required=True)
    all_names = ", ".join(preset_names())

    p = sub.add_parser("multiply", help="multiply two matrix text files",
                       description=f"Presets: {all_names}")
    p.add_argument("a", help="left operand file")
    p.add_argument("b", help="right operand file")
    p.add_argument("--algo", default="winograd-mod2", help="algorithm preset")
    p.add_argument("-o", "--out", required=True, help="output file")
    p.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF,
                   help="naive-cutoff threshold for mod2 presets")
    p.add_argument("--trace", action="store_true",
                   help="dump the top-level schedule steps (two-temp/in-place)")
    p.set_defaults(func=cmd_multiply)

    p = sub.add_parser("verify", help="check every preset against the naive method",
                       description=f"Presets: {all_names}")
    p.add_argument("--presets", default="all", help='comma list or "all"')
    p.add_argument("--orders", type=parse_orders, default=DEFAULT_VERIFY_ORDERS,
                   help='comma list or range, e.g. "1..256" or "2^0..2^8"')
    p.add_argument("--seeds", type=int, default=3, help="number of seeds per order")
    p.add_argument("--seed", type=int, default=20240901, help="first seed")
    p.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("count", help="measured vs predicted operation counts",
                       description=f"Presets: {all_names}")
    p.add_argument("--algo", required=True)
    p.add_argument("--orders", type=parse_orders, default=[2, 4, 8, 16, 32, 64])
    p.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("bench", help="timed sweeps with CSV/SVG output",
                       description=f"Presets: {all_names}")
    p.add_argument("--presets", default="all", help='comma list or "all"')
    p.add_argument("--orders", type=parse_orders, default=DEFAULT_BENCH_ORDERS,
                   help='default 2^1..2^10; pass "2^1..2^11" for the full range')
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=20240901)
    p.add_argument("--csv", required=True, help="output CSV path")
    p.add_argument("--svg", help="optional output SVG line plot")
    p.add_argument("--exact", action="store_true",
                   help="integer operands in [-8, 8] instead of reals in [-1, 1]")
    p.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except DimensionError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DIMENSION
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    raise SystemExit(main())

"""Command-line front end: compress, decompress, inspect, sweep."""

import argparse
import concurrent.futures
import csv
import io
import json
import os
import re
import sys
import time

from .api import compress_bytes, decompress_bytes, ideal_bits_estimate
from .diagnostics import trace_model, trace_to_csv
from .errors import DataError, FormatError, UsageError, WacodeError
from .model import Variant
from .weights import WeightFn

REPORT_SCHEMA = 1

_WS = re.compile(rb"[\t\n\r\v\f ]+")
_NON_ALNUM_SPACE = re.compile(rb"[^0-9A-Za-z\t\n\r\v\f ]+")


def strip_punct(data: bytes) -> bytes:
    """Drop every byte that is not alphanumeric or whitespace, then
    collapse whitespace runs to single spaces."""
    return _WS.sub(b" ", _NON_ALNUM_SPACE.sub(b"", data))


def build_variant(kind: str, g: str | None) -> Variant:
    if kind == "weighted":
        if g is None:
            raise UsageError("--variant weighted requires --g")
        return Variant("weighted", WeightFn.from_cli(g))
    if g is not None:
        raise UsageError(f"--g is only valid with --variant weighted (got {kind})")
    return Variant(kind)


def _round_ratios(stats: dict) -> dict:
    out = dict(stats)
    for key in ("net_ratio", "combined_ratio", "total_ratio"):
        if key in out:
            out[key] = round(out[key], 6)
    return out


def cmd_compress(args) -> int:
    with open(args.input, "rb") as fp:
        data = fp.read()
    if not data:
        raise UsageError("empty input")
    variant = build_variant(args.variant, args.g)
    blob, stats = compress_bytes(data, args.engine, variant, args.mode)
    with open(args.output, "wb") as fp:
        fp.write(blob)
    print(json.dumps(_round_ratios(stats)))
    return 0


def cmd_decompress(args) -> int:
    with open(args.input, "rb") as fp:
        blob = fp.read()
    data = decompress_bytes(blob)
    with open(args.output, "wb") as fp:
        fp.write(data)
    return 0


def cmd_inspect(args) -> int:
    with open(args.input, "rb") as fp:
        data = fp.read()
    if not data:
        raise UsageError("empty input")
    variant = build_variant(args.variant, args.g)
    rows = trace_model(data, variant, engine=args.engine, mode=args.mode)
    if args.output:
        with open(args.output, "w", newline="") as fp:
            trace_to_csv(rows, fp)
    else:
        trace_to_csv(rows, sys.stdout)
    return 0


# -- sweep -------------------------------------------------------------------

def _grid_variants(family: str, grid: list[str]) -> list[tuple[str, Variant]]:
    out = []
    for param in grid:
        if family == "poly":
            out.append((param, Variant("weighted", WeightFn.from_cli(f"poly:{param}"))))
        elif family == "exp":
            if param.strip() in ("1", "1.0"):
                out.append((param, Variant("forward")))
            else:
                out.append((param, Variant("weighted", WeightFn.from_cli(f"exp:{param}"))))
        elif family == "interp":
            out.append((param, Variant("weighted", WeightFn.from_cli(f"interp:{param}"))))
        else:
            raise UsageError(f"unknown sweep family {family!r}")
    return out


def _sweep_one(task) -> dict:
    path, name, engine, mode, family, param, variant_kind, g_text, do_strip, want_ideal = task
    row = {
        "schema": REPORT_SCHEMA, "file": name, "engine": engine, "mode": mode,
        "family": family, "param": param, "input_bytes": None, "net_bits": None,
        "header_bits": None, "net_ratio": None, "combined_ratio": None,
        "ideal_bits": None, "seconds": None, "error": "",
    }
    try:
        with open(path, "rb") as fp:
            data = fp.read()
        if do_strip:
            data = strip_punct(data)
        if not data:
            raise UsageError("empty input after preprocessing")
        variant = build_variant(variant_kind, g_text)
        start = time.perf_counter()
        _, stats = compress_bytes(data, engine, variant, mode)
        elapsed = time.perf_counter() - start
        row.update(input_bytes=stats["input_bytes"], net_bits=stats["net_bits"],
                   header_bits=stats["header_bits"],
                   net_ratio=round(stats["net_ratio"], 6),
                   combined_ratio=round(stats["combined_ratio"], 6),
                   seconds=round(elapsed, 3))
        if want_ideal:
            row["ideal_bits"] = round(ideal_bits_estimate(data, variant, mode), 3)
    except (WacodeError, OSError) as exc:
        row["error"] = str(exc)
    return row


def cmd_sweep(args) -> int:
    corpus = args.corpus
    if not os.path.isdir(corpus):
        raise UsageError(f"corpus directory not found: {corpus}")
    files = sorted(f for f in os.listdir(corpus)
                   if os.path.isfile(os.path.join(corpus, f)))
    if not files:
        raise UsageError("empty corpus")
    grid = [g.strip() for g in args.grid.split(",") if g.strip()]
    if not grid:
        raise UsageError("empty --grid")
    points = _grid_variants(args.family, grid)
    tasks = []
    for name in files:
        path = os.path.join(corpus, name)
        for param, variant in points:
            g_text = variant.g.label() if variant.g is not None else None
            tasks.append((path, name, args.engine, args.mode, args.family, param,
                          variant.kind, g_text, args.strip_punct, args.ideal))
        for baseline in ("static", "backward"):
            tasks.append((path, name, args.engine, args.mode, baseline, "",
                          baseline, None, args.strip_punct, args.ideal))
    threads = int(os.environ.get("WACODE_THREADS", "1") or "1")
    if threads > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_sweep_one, tasks))
    else:
        rows = [_sweep_one(t) for t in tasks]
    fmt = args.format
    if fmt == "auto":
        fmt = "json" if args.report.endswith(".json") else "csv"
    if fmt == "json":
        payload = json.dumps({"schema": REPORT_SCHEMA, "rows": rows}, indent=1)
        with open(args.report, "w") as fp:
            fp.write(payload + "\n")
    else:
        fields = ["schema", "file", "engine", "mode", "family", "param",
                  "input_bytes", "net_bits", "header_bits", "net_ratio",
                  "combined_ratio", "ideal_bits", "seconds", "error"]
        with open(args.report, "w", newline="") as fp:
            writer = csv.DictWriter(fp, fieldnames=fields)
            writer.writeheader()
            writer.writerows(rows)
    failures = sum(1 for r in rows if r["error"])
    print(json.dumps({"rows": len(rows), "files": len(files), "errors": failures,
                      "report": args.report}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wacode",
        description="Weighted adaptive Huffman/arithmetic coding toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_flags(p):
        p.add_argument("--engine", choices=("huffman", "arith"), default="huffman")
        p.add_argument("--variant", choices=("static", "backward", "forward", "weighted"),
                       required=True)
        p.add_argument("--g", default=None,
                       help="weight function: const | pos | poly:K | exp:BASE | exp2 | interp:J")
        p.add_argument("--mode", choices=("exact", "streaming"), default="streaming")

    p = sub.add_parser("compress", help="compress a file into a .wac container")
    p.add_argument("input")
    p.add_argument("output")
    add_model_flags(p)
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("decompress", help="restore the original file")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_decompress)

    p = sub.add_parser("inspect", help="per-position model trace as CSV")
    p.add_argument("input")
    p.add_argument("-o", "--output", default=None)
    add_model_flags(p)
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("sweep", help="run a parameter sweep over a corpus directory")
    p.add_argument("corpus")
    p.add_argument("report")
    p.add_argument("--family", choices=("poly", "exp", "interp"), required=True)
    p.add_argument("--grid", required=True, help="comma-separated parameter values")
    p.add_argument("--engine", choices=("huffman", "arith"), default="huffman")
    p.add_argument("--mode", choices=("exact", "streaming"), default="streaming")
    p.add_argument("--strip-punct", action="store_true",
                   help="drop non-alphanumeric/space bytes and collapse whitespace")
    p.add_argument("--ideal", action="store_true",
                   help="add a float ideal-bits column (slower)")
    p.add_argument("--format", choices=("csv", "json", "auto"), default="auto")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FormatError, DataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

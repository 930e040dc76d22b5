"""Command-line interface.

Subcommands: count, growth, spectrum, asymptotic, validate, sample,
render, bench.  Exit codes: 0 success, 1 usage or parameter errors,
2 validation failure (cross-method disagreement or failed criteria).
Counts appear in JSON as decimal strings so arbitrary precision survives
serialization; identical flags and seed produce byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import time

import jsonschema

from . import bethe, entropy, paths, render, transfer, validate
from .errors import BarrelError
from .graph import BarrelParams, build_graph, count_matchings_brute, enumerate_matchings

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _max_workers() -> int:
    """Worker cap from BARREL_THREADS; current kernels are single-threaded."""
    raw = os.environ.get("BARREL_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 1:
        sys.stderr.write(f"error: BARREL_THREADS must be a positive integer, got {raw!r}\n")
        raise SystemExit(EXIT_USAGE)
    return value


def _write_out(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _emit_json(obj: dict, schema: dict, out: str | None) -> None:
    jsonschema.validate(obj, schema)
    _write_out(json.dumps(obj, sort_keys=True, separators=(", ", ": ")) + "\n", out)


_COUNT_SCHEMA = {
    "type": "object",
    "required": ["m", "k", "counts", "agree"],
    "properties": {
        "m": {"type": "integer"},
        "k": {"type": "integer"},
        "counts": {"type": "object",
                   "additionalProperties": {"type": "string", "pattern": "^[0-9]+$"}},
        "agree": {"type": "boolean"},
    },
}

_GROWTH_SCHEMA = {
    "type": "object",
    "required": ["m", "rho", "p0", "n0", "entropy", "entropy_gap_to_limit"],
    "properties": {
        "m": {"type": "integer"},
        "rho": {"type": "number"},
        "p0": {"type": "integer"},
        "n0": {"type": "integer"},
        "entropy": {"type": "number"},
        "entropy_gap_to_limit": {"type": "number"},
    },
}

_SPECTRUM_SCHEMA = {
    "type": "object",
    "required": ["m", "p", "b", "c", "dimension", "rank", "entries"],
    "properties": {
        "entries": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["selection", "roots", "eigenvalue", "residual"],
                "properties": {
                    "selection": {"type": "array", "items": {"type": "integer"}},
                    "roots": {"type": "array",
                              "items": {"type": "array", "items": {"type": "number"},
                                        "minItems": 2, "maxItems": 2}},
                    "eigenvalue": {"type": "array", "items": {"type": "number"},
                                   "minItems": 2, "maxItems": 2},
                    "residual": {"type": "number"},
                    "omega_overlap": {"type": "array", "items": {"type": "number"}},
                },
            },
        },
    },
}

_ASYMPTOTIC_SCHEMA = {
    "type": "object",
    "required": ["m", "k", "n", "estimate"],
    "properties": {
        "m": {"type": "integer"},
        "k": {"type": "integer"},
        "n": {"type": "integer"},
        "estimate": {"type": "number"},
        "base": {"type": "number"},
        "coefficient_on_base_pow_k": {"type": "number"},
        "coefficient_on_base_pow_k1": {"type": "number"},
        "exact_sector": {"type": "string", "pattern": "^[0-9]+$"},
        "estimate_over_exact": {"type": "number"},
    },
}

_VALIDATE_SCHEMA = {
    "type": "object",
    "required": ["level", "passed", "criteria"],
    "properties": {
        "criteria": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["index", "name", "passed", "detail", "seconds"],
            },
        },
    },
}

_SAMPLE_SCHEMA = {
    "type": "object",
    "required": ["m", "k", "seed", "samples"],
    "properties": {
        "samples": {"type": "array",
                    "items": {"type": "array", "items": {"type": "integer"}}},
    },
}


def cmd_count(args) -> int:
    methods = ["transfer", "brute", "paths"] if args.method == "all" else [args.method]
    counts: dict[str, int] = {}
    for method in methods:
        if method == "transfer":
            counts[method] = transfer.count_matchings_transfer(args.m, args.k)
        elif method == "brute":
            g = build_graph(BarrelParams(args.m, args.k))
            counts[method] = count_matchings_brute(g)
        elif method == "paths":
            counts[method] = paths.total_via_paths(args.m, args.k)
    agree = len(set(counts.values())) == 1
    obj = {
        "m": args.m,
        "k": args.k,
        "counts": {name: str(v) for name, v in sorted(counts.items())},
        "agree": agree,
    }
    if args.format == "json":
        _emit_json(obj, _COUNT_SCHEMA, args.out)
    else:
        lines = [f"{name}: {v}" for name, v in sorted(counts.items())]
        lines.append(f"agree: {agree}")
        _write_out("\n".join(lines) + "\n", args.out)
    return EXIT_OK if agree else EXIT_VALIDATION


def cmd_growth(args) -> int:
    rho = bethe.growth_constant(args.m)
    h = entropy.entropy_of_family(args.m)
    limit = entropy.limit_entropy_quadrature()
    obj = {
        "m": args.m,
        "rho": rho,
        "p0": bethe.p_zero(args.m),
        "n0": bethe.n_zero(args.m),
        "entropy": h,
        "entropy_gap_to_limit": h - limit,
    }
    if args.format == "json":
        _emit_json(obj, _GROWTH_SCHEMA, args.out)
    else:
        text = (f"rho({args.m}) = {rho!r}\n"
                f"p0 = {obj['p0']}, n0 = {obj['n0']}\n"
                f"h({args.m}) = {h!r} (limit gap {obj['entropy_gap_to_limit']:+.3e})\n")
        _write_out(text, args.out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    spectrum = bethe.verify_sector(args.m, args.p, args.b, args.c)
    entries = []
    for e in spectrum.entries:
        entries.append({
            "selection": list(e.selection),
            "roots": [[z.real, z.imag] for z in e.roots],
            "eigenvalue": [e.eigenvalue.real, e.eigenvalue.imag],
            "residual": e.residual,
            "omega_overlap": [e.omega_overlap.real, e.omega_overlap.imag],
        })
    obj = {"m": args.m, "p": args.p, "b": args.b, "c": args.c,
           "dimension": spectrum.dimension, "rank": spectrum.rank,
           "max_residual": spectrum.max_residual, "entries": entries}
    if args.format == "json":
        _emit_json(obj, _SPECTRUM_SCHEMA, args.out)
    else:
        lines = [f"sector p={args.p} of m={args.m} at b={args.b}, c={args.c}: "
                 f"dim {spectrum.dimension}, rank {spectrum.rank}"]
        for e in spectrum.entries:
            lines.append(f"  {e.selection}: lambda = {e.eigenvalue:.12g}, "
                         f"residual {e.residual:.2e}")
        _write_out("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_asymptotic(args) -> int:
    if args.aggregate:
        agg = paths.aggregate_estimate(args.m, args.k, args.n)
        obj = {
            "m": args.m, "k": args.k, "n": agg.n,
            "estimate": agg.value,
            "base": agg.base,
            "coefficient_on_base_pow_k": agg.coefficient_k,
            "coefficient_on_base_pow_k1": agg.coefficient_k1,
        }
        if args.m <= transfer.TRANSFER_M_CAP and args.k <= 200:
            exact = transfer.sector_count(args.m, args.k, args.m - agg.n)
            obj["exact_sector"] = str(exact)
            obj["estimate_over_exact"] = agg.value / exact if exact else float("inf")
    else:
        if args.eta is None or args.lam is None:
            raise BarrelError("either --aggregate or both --eta and --lambda are required")
        eta = [float(x) for x in args.eta.split(",") if x != ""]
        lam = [float(x) for x in args.lam.split(",") if x != ""]
        est = paths.krattenthaler_estimate(args.m, args.k, eta, lam, args.s)
        obj = {"m": args.m, "k": args.k, "n": est.n, "estimate": est.value}
    if args.format == "json":
        _emit_json(obj, _ASYMPTOTIC_SCHEMA, args.out)
    else:
        lines = [f"{key} = {value}" for key, value in obj.items()]
        _write_out("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    results = validate.run_criteria(args.level)
    all_passed = all(r.passed for r in results)
    if args.format == "json":
        obj = {
            "level": args.level,
            "passed": all_passed,
            "criteria": [
                {"index": r.index, "name": r.name, "passed": r.passed,
                 "detail": r.detail, "seconds": round(r.seconds, 3)}
                for r in results
            ],
        }
        _emit_json(obj, _VALIDATE_SCHEMA, args.out)
    else:
        lines = []
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"{status}  {r.index:2d} {r.name:24s} {r.seconds:7.2f}s  {r.detail}")
        lines.append("all criteria passed" if all_passed else "FAILURES present")
        _write_out("\n".join(lines) + "\n", args.out)
    return EXIT_OK if all_passed else EXIT_VALIDATION


def cmd_sample(args) -> int:
    sampler = transfer.UniformSampler(args.m, args.k)
    rng = random.Random(args.seed)
    draws = [sampler.draw(rng).sorted_ids() for _ in range(args.samples)]
    if args.format == "json":
        obj = {"m": args.m, "k": args.k, "seed": args.seed,
               "samples": [list(ids) for ids in draws]}
        _emit_json(obj, _SAMPLE_SCHEMA, args.out)
    elif args.format == "csv":
        freqs: dict[tuple[int, ...], int] = {}
        for ids in draws:
            freqs[ids] = freqs.get(ids, 0) + 1
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["matching_edges", "count"])
        for ids, cnt in sorted(freqs.items()):
            writer.writerow([";".join(map(str, ids)), cnt])
        _write_out(buf.getvalue(), args.out)
    else:
        _write_out("".join(" ".join(map(str, ids)) + "\n" for ids in draws), args.out)
    return EXIT_OK


def cmd_render(args) -> int:
    g = build_graph(BarrelParams(args.m, args.k))
    matching = None
    if args.what != "graph":
        if args.seed is not None:
            matching = transfer.sample_uniform(args.m, args.k, args.seed)
        else:
            index = args.index if args.index is not None else 0
            for i, mm in enumerate(enumerate_matchings(g)):
                if i == index:
                    matching = mm
                    break
            if matching is None:
                raise BarrelError(f"matching index {index} out of range")
    _write_out(render.render_view(g, args.what, matching), args.out)
    return EXIT_OK


_BENCH_GRID: tuple[tuple[str, int, int], ...] = (
    ("transfer", 3, 1), ("brute", 3, 1), ("paths", 3, 1),
    ("transfer", 4, 1), ("brute", 4, 1), ("paths", 4, 1),
    ("transfer", 5, 1), ("brute", 5, 1), ("paths", 5, 1),
    ("transfer", 6, 1), ("brute", 6, 1), ("paths", 6, 1),
    ("transfer", 6, 3), ("brute", 6, 3),
    ("transfer", 6, 50), ("paths", 6, 50),
)


def cmd_bench(args) -> int:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["method", "m", "k", "millis"])
    for method, m, k in _BENCH_GRID:
        t0 = time.perf_counter()
        if method == "transfer":
            transfer.count_matchings_transfer(m, k)
        elif method == "brute":
            count_matchings_brute(build_graph(BarrelParams(m, k)))
        else:
            paths.total_via_paths(m, k)
        writer.writerow([method, m, k, f"{(time.perf_counter() - t0) * 1000:.3f}"])
    _write_out(buf.getvalue(), args.out)
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="barreldimer",
                     description="Count, diagonalize, and sample perfect matchings "
                                 "of m-barrel fullerene graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_mk(p, k_required=True):
        p.add_argument("--m", type=int, required=True, help="barrel width (>= 3)")
        if k_required:
            p.add_argument("--k", type=int, required=True, help="hexagon rings (>= 0)")

    p = sub.add_parser("count", help="exact matching count by one or all methods")
    add_mk(p)
    p.add_argument("--method", choices=["transfer", "brute", "paths", "all"],
                   default="transfer")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_count)

    p = sub.add_parser("growth", help="growth constant, dominant sector, entropy")
    add_mk(p, k_required=False)
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_growth)

    p = sub.add_parser("spectrum", help="verified Bethe spectrum of one sector")
    add_mk(p, k_required=False)
    p.add_argument("--p", type=int, required=True, help="sector cardinality")
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("asymptotic", help="walker-determinant estimates")
    add_mk(p)
    p.add_argument("--aggregate", action="store_true",
                   help="sum the estimate over admissible boundaries and shifts")
    p.add_argument("--n", type=int, default=None, help="walker number (default n0)")
    p.add_argument("--eta", help="comma-separated start coordinates (site/2)")
    p.add_argument("--lambda", dest="lam", help="comma-separated end coordinates")
    p.add_argument("--s", type=int, default=0, help="shift class")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_asymptotic)

    p = sub.add_parser("validate", help="run the self-validation criteria")
    p.add_argument("--level", choices=["fast", "full"], default="fast")
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("sample", help="exactly uniform random matchings")
    add_mk(p)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["json", "text", "csv"], default="text")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("render", help="SVG drawing of graph, tiling, or paths")
    add_mk(p)
    p.add_argument("--what", choices=["graph", "tiling", "paths"], default="graph")
    p.add_argument("--seed", type=int, default=None,
                   help="render a uniformly sampled matching")
    p.add_argument("--index", type=int, default=None,
                   help="render the i-th matching in enumeration order")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_render)

    p = sub.add_parser("bench", help="timing grid as CSV (method,m,k,millis)")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    _max_workers()
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "samples", None) is not None and args.samples < 0:
        parser.error("--samples must be >= 0")
    try:
        return args.fn(args)
    except BarrelError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

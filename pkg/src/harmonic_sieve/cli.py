"""Command-line front end: ``hsv <command> [options]``.

Exit codes: 0 success, 1 equivalence divergence, 2 configuration error,
3 capacity error, 4 weak Goldbach counterexample.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import cache, engine, equivalence, goldbach, plot
from .numberline import ConfigError, SpawnRule, Variant, spawn_construction

EXIT_OK, EXIT_DIVERGENCE, EXIT_CONFIG, EXIT_CAPACITY, EXIT_COUNTEREXAMPLE = 0, 1, 2, 3, 4

ORACLES = {
    "classical": None,
    "harmonic-case1": SpawnRule.CASE_I,
    "harmonic-case2": SpawnRule.CASE_II,
}
VARIANTS = {"full": Variant.FULL, "odd_only": Variant.ODD_ONLY, "odd-only": Variant.ODD_ONLY}

log = logging.getLogger("harmonic_sieve")


@dataclass
class RunConfig:
    command: str
    options: dict = field(default_factory=dict)
    bound: int | None = None
    cache: str | None = None
    output: str | None = None
    format: str = "json"
    workers: int = 1
    memory_budget: int | None = None
    seed: int = 0

    def to_text(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        return cls(**json.loads(text))

    def fingerprint(self) -> str:
        return hashlib.sha256(self.to_text().encode("utf-8")).hexdigest()[:16]


def _flatten(d, prefix=""):
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, key + ".")
        elif isinstance(v, list):
            yield key, json.dumps(v, separators=(",", ":"))
        elif v is None:
            yield key, ""
        elif isinstance(v, bool):
            yield key, "true" if v else "false"
        else:
            yield key, v


def render(doc: dict, fmt: str, rows: list[dict] | None = None) -> str:
    """Format ``doc`` as json, csv or text.

    CSV is one header row plus one row per entry of ``rows`` when given
    (the header is written even when ``rows`` is empty), else one row
    carrying the flattened document.
    """
    if fmt == "json":
        return json.dumps(doc, sort_keys=True) + "\n"
    flat = dict(_flatten(doc))
    if fmt == "text":
        return "".join(f"{k}={v}\n" for k, v in flat.items())
    buf = io.StringIO()
    if rows is not None:
        header = list(rows[0]) if rows else ["n"]
        w = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    else:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(flat.keys())
        w.writerow(flat.values())
    return buf.getvalue()


def _emit(cfg: RunConfig, doc: dict, rows=None) -> None:
    text = render(doc, cfg.format, rows)
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    sys.stdout.flush()


def _parse_int(text: str) -> int:
    """Integers written plainly, with underscores, or as 10^k / 1e7."""
    t = text.replace("_", "").strip()
    if "^" in t:
        base, exp = t.split("^", 1)
        return int(base) ** int(exp)
    if "e" in t.lower():
        mant, exp = t.lower().split("e", 1)
        if mant.isdigit() and exp.isdigit():
            return int(mant) * 10 ** int(exp)
    return int(t)


def _table_for(cfg: RunConfig, bound: int, exact: bool) -> tuple[engine.ClassificationTable, bool]:
    """Load the HSV1 cache when configured, else sieve."""
    if cfg.cache and os.path.exists(cfg.cache):
        cached = cache.read_bound(cfg.cache)
        if (exact and cached != bound) or cached < bound:
            raise ConfigError(
                f"cache {cfg.cache} was built for bound {cached}, this run needs {bound}; "
                "delete it or point --cache elsewhere"
            )
        return cache.read_cache(cfg.cache), True
    return engine.classical_sieve(bound, memory_budget=cfg.memory_budget), False


def cmd_sieve(cfg: RunConfig) -> int:
    o = cfg.options
    bound, rule = cfg.bound, ORACLES[o["oracle"]]
    variant = VARIANTS[o["variant"]]
    if bound is None:
        raise ConfigError("--bound is required")
    if o["odd_primes_only"] and variant is not Variant.FULL:
        raise ConfigError("--odd-primes-only only applies to the full variant")
    if rule is None and (variant is not Variant.FULL or o["odd_primes_only"]):
        raise ConfigError("the classical oracle has no variant options")
    from_cache = False
    if rule is None:
        table, from_cache = _table_for(cfg, bound, exact=True)
    else:
        cons = spawn_construction(variant, rule, bound, o["odd_primes_only"])
        table = engine.materialize(cons, cfg.memory_budget)

    # prime facts come from the odd bitset, which every oracle shares
    odd_composite = table.odd_crossed()
    odd_primes = int(odd_composite.size - odd_composite.sum())
    last_odd = int(odd_composite.size - 1 - odd_composite[::-1].argmin()) if odd_primes else -1
    max_prime = 2 * last_odd + 1 if odd_primes else 2

    out_path = o.get("cache_out")
    size = None
    if out_path:
        size = cache.write_cache(table, out_path).stat().st_size
    _emit(
        cfg,
        {
            "bound": bound,
            "oracle": o["oracle"],
            "variant": variant.value,
            "odd_primes_only": o["odd_primes_only"],
            "prime_count": odd_primes + 1,
            "max_prime": max_prime,
            "survivor_count": table.counts()["survivors"],
            "from_cache": from_cache,
            "cache_path": out_path,
            "cache_bytes": size,
        },
    )
    return EXIT_OK


def cmd_compare(cfg: RunConfig) -> int:
    o = cfg.options
    if cfg.bound is None:
        raise ConfigError("--bound is required")
    report = equivalence.compare_constructions(
        VARIANTS[o["variant"]], cfg.bound, o["odd_primes_only"], cfg.memory_budget
    )
    _emit(cfg, report.to_dict())
    return EXIT_OK if report.equivalent else EXIT_DIVERGENCE


def cmd_verify(cfg: RunConfig) -> int:
    o = cfg.options
    lo, hi = o["lo"], o["hi"]
    table, _ = _table_for(cfg, hi, exact=False)
    try:
        report = goldbach.verify_range(
            lo,
            hi,
            checkpoint_path=o.get("checkpoint"),
            segment=o["segment"],
            workers=cfg.workers,
            table=table,
        )
        code = EXIT_OK
    except goldbach.CounterexampleError as exc:
        report, code = exc.report, EXIT_COUNTEREXAMPLE
    doc = report.to_dict()
    report_path = o.get("report")
    if code == EXIT_COUNTEREXAMPLE and not report_path and not o.get("checkpoint"):
        report_path = f"hsv-counterexample-{report.failures[0]}.json"
    if report_path:
        Path(report_path).write_text(json.dumps(doc, sort_keys=True) + "\n", encoding="utf-8")
    _emit(cfg, doc, rows=[{"n": n} for n in report.failures] if cfg.format == "csv" else None)
    return code


def cmd_plot(cfg: RunConfig) -> int:
    o = cfg.options
    overrides = {}
    if o.get("x_min") is not None or o.get("x_max") is not None:
        overrides["x_range"] = (o.get("x_min") or 0.0, o.get("x_max") or 40.0)
    if o.get("amplitude") is not None:
        overrides["amplitude"] = o["amplitude"]
    if o.get("step") is not None:
        overrides["sample_step"] = o["step"]
    ids = [f.value for f in plot.STANDARD_FIGURES] if o["figure"] == "all" else [o["figure"]]
    out = Path(o["out"])
    if len(ids) > 1:
        out.mkdir(parents=True, exist_ok=True)
    figures = []
    for fid in ids:
        spec, cons = plot.figure_setup(fid, **overrides)
        path = plot.write_figure(fid, out, **overrides)
        figures.append({"figure_id": fid, "path": str(path), "markers": plot.marker_positions(spec, cons)})
    _emit(cfg, {"figures": figures})
    return EXIT_OK


def _timed(fn):
    t0 = time.perf_counter()
    result = fn()
    return result, max(time.perf_counter() - t0, 1e-9)


def cmd_bench(cfg: RunConfig) -> int:
    bound = cfg.bound
    if bound is None:
        raise ConfigError("--bound is required")
    classical, t_c = _timed(lambda: engine.classical_sieve(bound, memory_budget=cfg.memory_budget))
    harmonic, t_h = _timed(
        lambda: engine.materialize(spawn_construction(Variant.FULL, SpawnRule.CASE_I, bound), cfg.memory_budget)
    )
    nc, nh = engine.prime_count(classical), engine.prime_count(harmonic)
    _emit(
        cfg,
        {
            "bound": bound,
            "classical": {"seconds": t_c, "numbers_per_second": bound / t_c, "prime_count": nc},
            "harmonic": {"seconds": t_h, "numbers_per_second": bound / t_h, "prime_count": nh},
            "counts_equal": nc == nh,
        },
    )
    return EXIT_OK


def cmd_corollary(cfg: RunConfig) -> int:
    n = cfg.options["samples"]
    holds = goldbach.three_odds_sum_property(n, cfg.seed)
    _emit(cfg, {"samples": n, "seed": cfg.seed, "holds": holds})
    return EXIT_OK if holds else EXIT_DIVERGENCE


COMMANDS = {
    "sieve": cmd_sieve,
    "compare": cmd_compare,
    "verify": cmd_verify,
    "plot": cmd_plot,
    "bench": cmd_bench,
    "corollary": cmd_corollary,
}
GLOBAL_KEYS = ("bound", "cache", "output", "format", "workers", "memory_budget", "seed")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--bound", type=_parse_int)
    g.add_argument("--cache", help="HSV1 prime-cache file to read")
    g.add_argument("--output", help="also write the formatted output here")
    g.add_argument("--format", choices=["json", "csv", "text"], default="json")
    g.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    g.add_argument("--memory-budget", type=_parse_int, default=None, help="bytes; env HSV_MEMORY_BUDGET")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="hsv", description="Harmonic sieve toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sieve", parents=[common], help="sieve to a bound, optionally writing an HSV1 cache")
    s.add_argument("--cache-out")
    s.add_argument("--oracle", choices=list(ORACLES), default="classical")
    s.add_argument("--variant", choices=["full", "odd_only"], default="full")
    s.add_argument("--odd-primes-only", action="store_true")

    s = sub.add_parser("compare", parents=[common], help="Case I vs Case II equivalence report")
    s.add_argument("--variant", choices=["full", "odd_only"], default="full")
    s.add_argument("--odd-primes-only", action="store_true")

    s = sub.add_parser("verify", parents=[common], help="weak Goldbach check over [lo, hi]")
    s.add_argument("--lo", type=_parse_int, default=9)
    s.add_argument("--hi", type=_parse_int, required=True)
    s.add_argument("--checkpoint")
    s.add_argument("--segment", type=_parse_int, default=goldbach.DEFAULT_CHECKPOINT_EVERY)
    s.add_argument("--report", help="also write the JSON report here")

    s = sub.add_parser("plot", parents=[common], help="write a figure as SVG")
    s.add_argument("--figure", required=True, help="figure id or 'all'")
    s.add_argument("--out", required=True, help="file path, or directory for --figure all")
    s.add_argument("--x-min", type=float)
    s.add_argument("--x-max", type=float)
    s.add_argument("--amplitude", type=float)
    s.add_argument("--step", type=float)

    sub.add_parser("bench", parents=[common], help="time classical vs harmonic sieving")

    s = sub.add_parser("corollary", parents=[common], help="seeded three-odd-numbers sum check")
    s.add_argument("--samples", type=_parse_int, default=10**6)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    d = vars(ns).copy()
    command = d.pop("command")
    d.pop("verbose", None)
    glob = {k: d.pop(k) for k in GLOBAL_KEYS}
    return RunConfig(command=command, options=d, **glob)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    cfg = config_from_args(ns)
    try:
        return COMMANDS[cfg.command](cfg)
    except (ConfigError, cache.CacheFormatError) as exc:
        print(f"hsv: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except engine.CapacityError as exc:
        print(f"hsv: capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())

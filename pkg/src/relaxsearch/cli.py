"""Command-line experiment driver.

    relaxsearch gen --seed 7 --count 100 --walk 40 --min-depth 14 --out inst.txt
    relaxsearch verify inst.txt --chain BASE-CHECKRA-RA --format csv
    relaxsearch bench-xy inst.txt --out bench.json

Exit codes: 0 all properties hold, 1 theorem violation, 2 usage or config
error, 3 expansion budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import random
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import partial
from pathlib import Path

from .analysis import XY_NOTE, check_domination, xy_row
from .core import LimitExceeded, TieBreak, astar
from .puzzle import (
    MD,
    RA_EXACT,
    PuzzleSpace,
    Variant,
    format_state,
    goal_distance_table,
    parse_state,
    scramble,
)
from .relax import constant_heuristic

log = logging.getLogger("relaxsearch")

SCHEMA_VERSION = 1

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

# preset -> (relaxed variant, name of the bottom heuristic); None = bench-xy only
CHAINS: dict[str, tuple[Variant, str] | None] = {
    "BASE-CHECKRA-RA": (Variant.CHECK_RA, "ra_exact"),
    "BASE-RA-ZERO": (Variant.RA, "zero"),
    "BASE-ZERO": (Variant.BASE, "zero"),
    "BASE-MD": (Variant.BASE, "md"),
    "BASE-XY-MD": None,
}
_BOTTOM = {"ra_exact": RA_EXACT, "zero": constant_heuristic(0), "md": MD}

VERIFY_COLUMNS = [
    "schema_version",
    "instance_index",
    "depth",
    "cstar",
    "direct_surely",
    "direct_possibly",
    "hier_surely",
    "hier_possibly",
    "thm1",
    "thm2",
    "direct_total",
    "hier_total",
    "ratio",
]
BENCH_COLUMNS = [
    "schema_version",
    "instance_index",
    "depth",
    "md_base",
    "md_secondary",
    "md_total",
    "xy_base",
    "xy_secondary",
    "xy_total",
    "ratio",
    "md_wall_s",
    "xy_wall_s",
]
NONDETERMINISTIC_COLUMNS = ["md_wall_s", "xy_wall_s"]


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    instance_count: int = 1
    walk_length: int = 40
    min_exact_depth: int = 0
    max_exact_depth: int | None = None
    tie: str = TieBreak.GOAL_FIRST.value
    cache: bool = False
    chain: str = "BASE-CHECKRA-RA"
    output_format: str = "json"
    expansion_budget: int | None = None

    def validate(self) -> None:
        if self.instance_count < 1:
            raise UsageError("--count must be at least 1")
        if self.min_exact_depth < 0 or self.walk_length < 0:
            raise UsageError("--min-depth and --walk must be nonnegative")
        if self.max_exact_depth is not None and self.max_exact_depth < self.min_exact_depth:
            raise UsageError("--max-depth is below --min-depth")
        if self.chain not in CHAINS:
            raise UsageError(f"unknown chain preset {self.chain!r}")


def generate_instances(config: ExperimentConfig) -> list[int]:
    """Distinct seeded scrambles whose exact depth lies in the configured range.

    Each walk length is drawn uniformly from 0..walk_length.
    """
    rng = random.Random(config.seed)
    found: list[int] = []
    seen: set[int] = set()
    attempts = 0
    max_attempts = 1000 * config.instance_count
    while len(found) < config.instance_count:
        attempts += 1
        if attempts > max_attempts:
            raise UsageError(
                f"only {len(found)} of {config.instance_count} instances found in "
                f"{max_attempts} walks; relax the depth range or lengthen --walk"
            )
        # drawing the length mixes both blank parities, hence odd and even depths
        walk = rng.randint(0, config.walk_length)
        state, depth = scramble(rng.getrandbits(32), walk)
        if state in seen or depth < config.min_exact_depth:
            continue
        if config.max_exact_depth is not None and depth > config.max_exact_depth:
            continue
        seen.add(state)
        found.append(state)
    return found


def read_instances(path: str | Path) -> list[int]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read instance file: {exc}") from exc
    hstar = goal_distance_table(Variant.BASE)
    states = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            state = parse_state(line)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from exc
        if state not in hstar:
            raise UsageError(f"{path}:{lineno}: instance cannot reach the goal")
        states.append(state)
    if not states:
        raise UsageError(f"{path}: no instances")
    return states


def verify_row(index: int, state: int, config: ExperimentConfig) -> dict:
    relaxed_variant, bottom = CHAINS[config.chain]
    relaxed = PuzzleSpace(relaxed_variant)
    h1_table = goal_distance_table(relaxed_variant)
    hstar = goal_distance_table(Variant.BASE)
    report = check_domination(
        state,
        PuzzleSpace(Variant.BASE),
        relaxed,
        _BOTTOM[bottom],
        TieBreak(config.tie),
        h1=h1_table.__getitem__,
        hstar=hstar,
        cache=config.cache,
        budget=config.expansion_budget,
    )
    depth = scramble_depth(state)
    return {
        "schema_version": SCHEMA_VERSION,
        "instance_index": index,
        "depth": depth,
        "cstar": report.cstar,
        "direct_surely": len(report.direct_surely),
        "direct_possibly": len(report.direct_possibly),
        "hier_surely": len(report.hier_surely),
        "hier_possibly": len(report.hier_possibly),
        "thm1": report.theorem1_holds,
        "thm2": report.theorem2_holds,
        "direct_total": report.direct_total,
        "hier_total": report.hier_total,
        "ratio": round(report.ratio, 6),
        "sandwich": report.sandwich_holds,
        "hier_base_expansions": report.hier_ledger.base_expansions,
        "hier_secondary_expansions": report.hier_ledger.secondary_expansions,
        "instance": format_state(state),
    }


def scramble_depth(state: int) -> int:
    return astar(PuzzleSpace(Variant.BASE, state), MD).optimal_cost


def verify_summary(rows: list[dict]) -> dict:
    return {
        "instances": len(rows),
        "thm1_violations": sum(not r["thm1"] for r in rows),
        "thm2_violations": sum(not r["thm2"] for r in rows),
        "sandwich_violations": sum(not r["sandwich"] for r in rows),
        "direct_exceeds_hier": sum(r["direct_total"] > r["hier_total"] for r in rows),
        "median_ratio": round(statistics.median(r["ratio"] for r in rows), 6),
    }


def bench_row(index: int, state: int, config: ExperimentConfig) -> dict:
    row = xy_row(state, TieBreak(config.tie), config.expansion_budget)
    return {
        "schema_version": SCHEMA_VERSION,
        "instance_index": index,
        "depth": row.depth,
        "md_base": row.md_base,
        "md_secondary": row.md_secondary,
        "md_total": row.md_total,
        "xy_base": row.xy_base,
        "xy_secondary": row.xy_secondary,
        "xy_total": row.xy_total,
        "ratio": round(row.ratio, 6),
        "md_wall_s": round(row.md_wall_s, 6),
        "xy_wall_s": round(row.xy_wall_s, 6),
    }


def bench_summary(rows: list[dict]) -> dict:
    return {
        "instances": len(rows),
        "median_ratio": round(statistics.median(r["ratio"] for r in rows), 6),
        "xy_base_exceeds_md_base": sum(r["xy_base"] > r["md_base"] for r in rows),
        "note": XY_NOTE,
        "nondeterministic_columns": NONDETERMINISTIC_COLUMNS,
    }


def run_rows(fn, states: list[int], config: ExperimentConfig, jobs: int) -> list[dict]:
    work = partial(fn, config=config)
    if jobs <= 1:
        return [work(i, s) for i, s in enumerate(states)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map keeps rows in instance order whatever the completion order
        return list(pool.map(work, range(len(states)), states))


def render(command: str, config: ExperimentConfig, rows, summary, columns) -> str:
    if config.output_format == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "config": asdict(config),
            "rows": rows,
            "summary": summary,
        }
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(
        buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n"
    )
    writer.writeheader()
    writer.writerows(rows)
    writer.writerow(_csv_summary(summary, columns))
    return buf.getvalue()


def _csv_summary(summary: dict, columns: list[str]) -> dict:
    row = {"schema_version": SCHEMA_VERSION, "instance_index": "summary"}
    if "thm1" in columns:
        row.update(
            thm1=summary["thm1_violations"],
            thm2=summary["thm2_violations"],
            ratio=summary["median_ratio"],
        )
    else:
        row["ratio"] = summary["median_ratio"]
    return row


def write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc


def cmd_gen(config: ExperimentConfig, out: str | None) -> int:
    states = generate_instances(config)
    write_output("".join(format_state(s) + "\n" for s in states), out)
    return EXIT_OK


def cmd_verify(config: ExperimentConfig, instances: str, out: str | None, jobs: int = 1) -> int:
    if CHAINS[config.chain] is None:
        raise UsageError(f"{config.chain} is a factored chain; use bench-xy")
    states = read_instances(instances)
    rows = run_rows(verify_row, states, config, jobs)
    summary = verify_summary(rows)
    write_output(render("verify", config, rows, summary, VERIFY_COLUMNS), out)
    if summary["thm1_violations"] or summary["thm2_violations"]:
        log.error(
            "theorem violations: thm1=%d thm2=%d",
            summary["thm1_violations"],
            summary["thm2_violations"],
        )
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_bench_xy(config: ExperimentConfig, instances: str, out: str | None, jobs: int = 1) -> int:
    states = read_instances(instances)
    rows = run_rows(bench_row, states, config, jobs)
    write_output(render("bench-xy", config, rows, bench_summary(rows), BENCH_COLUMNS), out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relaxsearch",
        description="Relaxation-hierarchy A* experiments on the Eight Puzzle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    gen = sub.add_parser("gen", parents=[common], help="write a seeded instance file")
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument("--walk", type=int, default=40)
    gen.add_argument("--min-depth", type=int, default=0)
    gen.add_argument("--max-depth", type=int, default=None)

    run = argparse.ArgumentParser(add_help=False)
    run.add_argument("instances", help="instance file, one 9-integer board per line")
    run.add_argument("--tie", choices=[t.value for t in TieBreak], default="GOAL_FIRST")
    run.add_argument("--format", choices=["json", "csv"], default="json")
    run.add_argument("--budget", type=int, default=None, help="expansion cap per search")
    run.add_argument("--jobs", type=int, default=1)

    verify = sub.add_parser(
        "verify", parents=[common, run], help="check large-domination containments"
    )
    verify.add_argument("--chain", choices=list(CHAINS), default="BASE-CHECKRA-RA")
    verify.add_argument(
        "--cache", action="store_true", help="memoise secondary searches (exploratory only)"
    )

    sub.add_parser(
        "bench-xy", parents=[common, run], help="MD against per-call X-Y search"
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "gen":
            config = ExperimentConfig(
                seed=args.seed,
                instance_count=args.count,
                walk_length=args.walk,
                min_exact_depth=args.min_depth,
                max_exact_depth=args.max_depth,
            )
            config.validate()
            return cmd_gen(config, args.out)
        config = ExperimentConfig(
            seed=args.seed,
            tie=args.tie,
            cache=getattr(args, "cache", False),
            chain=getattr(args, "chain", "BASE-XY-MD"),
            output_format=args.format,
            expansion_budget=args.budget,
        )
        config.validate()
        if args.command == "verify":
            return cmd_verify(config, args.instances, args.out, args.jobs)
        return cmd_bench_xy(config, args.instances, args.out, args.jobs)
    except UsageError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except LimitExceeded as exc:
        log.error("%s", exc)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())

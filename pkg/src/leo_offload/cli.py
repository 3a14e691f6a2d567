"""Command-line front end: run, sweep, table, verify, dump-default."""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from typing import List, Optional

import numpy as np

from .offload import BITS_PER_GB, Scheme
from .scenario import ScenarioError, dump_scenario, load_scenario
from .simulator import (
    SCHEME_ORDER,
    Scenario,
    platform_table,
    run,
    sweep,
    write_report_json,
    write_sweep_csv,
    write_table_csv,
    write_task_csv,
)
from .verify import run_suites

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SIM = 2
EXIT_VERIFY = 3

DEFAULT_CAPABILITIES = (127.0, 200.0, 590.0, 1000.0)


def default_n_grid_bits() -> List[float]:
    return [float(x) for x in np.geomspace(16.0, 2.0 * BITS_PER_GB, 6)]


def default_c_grid_gflo() -> List[float]:
    return [float(x) for x in np.geomspace(1.0, 2000.0, 6)]


def _parse_float_list(text: str, flag: str, minimum: float) -> List[float]:
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            value = float(chunk)
        except ValueError:
            raise ScenarioError(f"{flag}: {chunk!r} is not a number") from None
        if value < minimum or not value < float("inf"):
            raise ScenarioError(f"{flag}: {chunk} out of range (min {minimum})")
        out.append(value)
    if not out:
        raise ScenarioError(f"{flag}: empty list")
    return out


def _scenario_from(args) -> Scenario:
    scenario = load_scenario(args.scenario) if args.scenario else Scenario()
    if args.seed is not None:
        scenario = dataclasses.replace(scenario, seed=args.seed)
    return scenario


def _schemes_from(args, scenario: Scenario) -> List[Scheme]:
    if args.scheme is None:
        return [scenario.scheme]
    if args.scheme == "all":
        return list(SCHEME_ORDER)
    return [Scheme(args.scheme)]


def cmd_run(args) -> int:
    scenario = _scenario_from(args)
    os.makedirs(args.out, exist_ok=True)
    for scheme in _schemes_from(args, scenario):
        report = run(scenario, scheme)
        csv_path = os.path.join(args.out, f"run_{scheme}.csv")
        json_path = os.path.join(args.out, f"run_{scheme}.json")
        write_task_csv(report, csv_path)
        write_report_json(report, json_path)
        s = report.summary()
        mean = s["mean_overall_delay_s"]
        mean_txt = "n/a" if mean is None else f"{mean:.6f} s"
        print(f"{scheme}: {s['num_tasks']} tasks, {s['dropped']} dropped, "
              f"mean delay {mean_txt}")
        if mean is not None:
            print(f"  breakdown: isl {s['mean_isl_tx_s']:.6f} s, "
                  f"sgl {s['mean_sgl_tx_s']:.6f} s, "
                  f"compute {s['mean_compute_s']:.6f} s")
        print(f"  wrote {csv_path} and {json_path}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    scenario = _scenario_from(args)
    if args.n_grid_gb is not None:
        n_bits = [gb * BITS_PER_GB for gb in
                  _parse_float_list(args.n_grid_gb, "--n-grid-gb", 2e-9)]
    else:
        n_bits = default_n_grid_bits()
    if args.c_grid_gflo is not None:
        c_grid = _parse_float_list(args.c_grid_gflo, "--c-grid-gflo", 0.0)
    else:
        c_grid = default_c_grid_gflo()
    cells = sweep(scenario, n_bits, c_grid, single_task=args.single_task,
                  jobs=args.jobs)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "sweep.csv")
    write_sweep_csv(cells, path)
    print(f"{len(cells)} cells ({len(n_bits)}x{len(c_grid)} grid, "
          f"{len(SCHEME_ORDER)} schemes), wrote {path}")
    return EXIT_OK


def cmd_table(args) -> int:
    scenario = _scenario_from(args)
    caps = (_parse_float_list(args.capabilities, "--capabilities", 1e-9)
            if args.capabilities else list(DEFAULT_CAPABILITIES))
    rows = platform_table(scenario, caps, jobs=args.jobs)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "table.csv")
    write_table_csv(rows, path)
    for r in rows:
        print(f"{r.capability_gflops:g} GFLOPS: +{r.impr_vs_ground_pct:.2f}% "
              f"vs ground, +{r.impr_vs_onehop_pct:.2f}% vs one-hop")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_verify(args) -> int:
    failed = None
    for name, ok, detail in run_suites():
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        if not ok and failed is None:
            failed = name
    if failed is not None:
        print(f"verification failed: {failed}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_dump_default(args) -> int:
    text = dump_scenario()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leo-offload",
        description="Adaptive task offloading over a LEO constellation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, jobs=False):
        p.add_argument("--scenario", help="scenario YAML (defaults built in)")
        p.add_argument("--seed", type=int, help="override the scenario seed")
        p.add_argument("--out", default=".", help="output directory")
        if jobs:
            p.add_argument("--jobs", type=int, default=1,
                           help="parallel workers for independent cells")

    p = sub.add_parser("run", help="simulate one scheme over the workload")
    common(p)
    p.add_argument("--scheme", choices=[str(s) for s in Scheme] + ["all"],
                   help="override the scenario scheme, or 'all'")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("sweep", help="mean delay over a data-volume/compute grid")
    common(p, jobs=True)
    p.add_argument("--n-grid-gb", help="comma list of data volumes in GB")
    p.add_argument("--c-grid-gflo", help="comma list of compute demands in GFLO")
    p.add_argument("--single-task", action="store_true",
                   help="first arrival only: contention-free plan delays")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("table", help="adaptive improvement per CPU capability")
    common(p, jobs=True)
    p.add_argument("--capabilities",
                   help="comma list of GFLOPS (default 127,200,590,1000)")
    p.set_defaults(fn=cmd_table)

    p = sub.add_parser("verify", help="run the built-in property suites")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("dump-default", help="print the default scenario YAML")
    p.add_argument("--out", help="write to a file instead of stdout")
    p.set_defaults(fn=cmd_dump_default)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    try:
        return args.fn(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:
        print(f"simulation error: {exc!r}", file=sys.stderr)
        return EXIT_SIM


if __name__ == "__main__":
    sys.exit(main())

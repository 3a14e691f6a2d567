"""Workload generation and sequential FIFO simulation over the constellation.

Tasks arrive as a Poisson process whose sources cluster in configurable
regions; each task is planned greedily in arrival order against the
reservations committed by its predecessors, the same discipline a FIFO
scheduler would apply. Sweeps rerun independent seeded simulations per grid
cell so cells stay comparable.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
from dataclasses import dataclass
from multiprocessing import Pool
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .constellation import ConstellationConfig, GroundNode
from .offload import (
    BITS_PER_GB,
    NetworkParams,
    NetworkState,
    Scheme,
    Task,
    plan_offload,
)
from .state_graph import Unreachable


@dataclass(frozen=True)
class Region:
    """A patch of the arrival map: tasks spawn near (lat, lon) with weight."""

    lat_deg: float
    lon_deg: float
    weight: float
    jitter_deg: float = 5.0


@dataclass(frozen=True)
class Workload:
    arrival_rate: float = 1000.0  # tasks per arrival time unit
    arrival_time_unit_s: float = 600.0
    data_in_gb: float = 0.4
    compute_gflo: float = 1000.0
    data_out_bits: float = 16.0
    source_altitude_km: float = 550.0


DEFAULT_REGIONS: Tuple[Region, ...] = (
    Region(31.0, 114.0, 0.27),
    Region(21.0, 79.0, 0.15),
    Region(49.0, 9.0, 0.22),
    Region(38.0, -93.0, 0.20),
    Region(-11.0, -52.0, 0.07),
    Region(7.0, 19.0, 0.05),
    Region(-31.0, 147.0, 0.04),
)

DEFAULT_SITES: Tuple[GroundNode, ...] = (
    GroundNode(64.1, -21.9),
    GroundNode(67.9, 21.1),
    GroundNode(64.8, -147.7),
    GroundNode(78.2, 15.6),
    GroundNode(-72.0, 2.5),
    GroundNode(46.5, 6.6),
)


@dataclass(frozen=True)
class Scenario:
    constellation: ConstellationConfig = ConstellationConfig()
    network: NetworkParams = NetworkParams()
    workload: Workload = Workload()
    regions: Tuple[Region, ...] = DEFAULT_REGIONS
    sites: Tuple[GroundNode, ...] = DEFAULT_SITES
    scheme: Scheme = Scheme.ADAPTIVE
    horizon_s: float = 600.0
    seed: int = 0


@dataclass(frozen=True)
class TaskSpec:
    """One generated arrival, before node ids exist."""

    gen_time_s: float
    src_lat_deg: float
    src_lon_deg: float
    site_index: int
    compute_gflo: float
    data_in_bits: float
    data_out_bits: float


@dataclass
class TaskRecord:
    task_id: int
    gen_time_s: float
    source_lat_deg: float
    source_lon_deg: float
    dest_lat_deg: float
    dest_lon_deg: float
    data_in_bits: float
    compute_gflo: float
    data_out_bits: float
    scheme: str
    status: str  # "ok" or "dropped"
    compute_node: Optional[int]
    compute_class: str
    isl_tx_s: Optional[float]
    sgl_tx_s: Optional[float]
    compute_s: Optional[float]
    overall_delay_s: Optional[float]


TASK_CSV_COLUMNS = [f.name for f in dataclasses.fields(TaskRecord)]


@dataclass
class MetricsReport:
    scheme: Scheme
    records: List[TaskRecord]

    @property
    def ok_records(self) -> List[TaskRecord]:
        return [r for r in self.records if r.status == "ok"]

    @property
    def dropped(self) -> int:
        return sum(1 for r in self.records if r.status != "ok")

    def _mean(self, attr: str) -> Optional[float]:
        ok = self.ok_records
        if not ok:
            return None
        return math.fsum(getattr(r, attr) for r in ok) / len(ok)

    @property
    def mean_overall_delay_s(self) -> Optional[float]:
        return self._mean("overall_delay_s")

    def class_fraction(self, cls: str) -> float:
        ok = self.ok_records
        if not ok:
            return 0.0
        return sum(1 for r in ok if r.compute_class == cls) / len(ok)

    def summary(self) -> dict:
        return {
            "scheme": str(self.scheme),
            "num_tasks": len(self.records),
            "dropped": self.dropped,
            "mean_overall_delay_s": self.mean_overall_delay_s,
            "mean_isl_tx_s": self._mean("isl_tx_s"),
            "mean_sgl_tx_s": self._mean("sgl_tx_s"),
            "mean_compute_s": self._mean("compute_s"),
            "frac_compute_dest": self.class_fraction("dest"),
            "frac_compute_one_hop": self.class_fraction("one_hop"),
            "frac_compute_beyond": self.class_fraction("beyond"),
        }


def _wrap_lon(lon: float) -> float:
    return (lon + 180.0) % 360.0 - 180.0


def generate_tasks(scenario: Scenario) -> List[TaskSpec]:
    """Draw the full arrival stream for a scenario, sorted by time.

    Inter-arrival gaps are exponential at the total rate; each task picks a
    region by weight, jitters uniformly inside its patch, and sends to a
    uniformly chosen ground site. Entirely determined by the seed.
    """
    wl = scenario.workload
    if not scenario.regions:
        raise ValueError("scenario has no arrival regions")
    if not scenario.sites:
        raise ValueError("scenario has no ground sites")
    lam = wl.arrival_rate / wl.arrival_time_unit_s
    if lam < 0:
        raise ValueError("arrival rate must be nonnegative")
    out: List[TaskSpec] = []
    if lam == 0:
        return out
    rng = np.random.default_rng(scenario.seed)
    weights = np.array([r.weight for r in scenario.regions], dtype=float)
    if np.any(weights < 0) or weights.sum() <= 0:
        raise ValueError("region weights must be nonnegative with positive sum")
    weights = weights / weights.sum()
    t = 0.0
    while True:
        t += rng.exponential(1.0 / lam)
        if t >= scenario.horizon_s:
            break
        region = scenario.regions[int(rng.choice(len(weights), p=weights))]
        j = region.jitter_deg
        lat = float(np.clip(region.lat_deg + rng.uniform(-j, j), -89.0, 89.0))
        lon = _wrap_lon(region.lon_deg + float(rng.uniform(-j, j)))
        out.append(TaskSpec(
            gen_time_s=t,
            src_lat_deg=lat,
            src_lon_deg=lon,
            site_index=int(rng.integers(len(scenario.sites))),
            compute_gflo=wl.compute_gflo,
            data_in_bits=wl.data_in_gb * BITS_PER_GB,
            data_out_bits=wl.data_out_bits,
        ))
    return out


def run(scenario: Scenario, scheme: Optional[Scheme] = None,
        max_tasks: Optional[int] = None) -> MetricsReport:
    """Simulate one scheme over the scenario's arrival stream.

    Tasks are planned in arrival order; every plan's transmission and compute
    intervals are reserved before the next task is planned. Tasks with no
    feasible plan are recorded as dropped.
    """
    scheme = scenario.scheme if scheme is None else scheme
    specs = generate_tasks(scenario)
    if max_tasks is not None:
        specs = specs[:max_tasks]
    net = NetworkState(scenario.constellation, scenario.network)
    site_ids = [net.register_ground(g.lat_deg, g.lon_deg) for g in scenario.sites]
    records: List[TaskRecord] = []
    for i, spec in enumerate(specs):
        site = scenario.sites[spec.site_index]
        u = net.register_source_at(spec.src_lat_deg, spec.src_lon_deg,
                                   scenario.workload.source_altitude_km,
                                   spec.gen_time_s)
        task = Task(u, site_ids[spec.site_index], spec.gen_time_s,
                    spec.compute_gflo, spec.data_in_bits, spec.data_out_bits)
        base = dict(
            task_id=i,
            gen_time_s=spec.gen_time_s,
            source_lat_deg=spec.src_lat_deg,
            source_lon_deg=spec.src_lon_deg,
            dest_lat_deg=site.lat_deg,
            dest_lon_deg=site.lon_deg,
            data_in_bits=spec.data_in_bits,
            compute_gflo=spec.compute_gflo,
            data_out_bits=spec.data_out_bits,
            scheme=str(scheme),
        )
        try:
            plan = plan_offload(net, task, scheme)
        except Unreachable:
            records.append(TaskRecord(status="dropped", compute_node=None,
                                      compute_class="", isl_tx_s=None,
                                      sgl_tx_s=None, compute_s=None,
                                      overall_delay_s=None, **base))
            continue
        net.commit(plan)
        records.append(TaskRecord(status="ok", compute_node=plan.compute_node,
                                  compute_class=plan.compute_class,
                                  isl_tx_s=plan.isl_tx_s, sgl_tx_s=plan.sgl_tx_s,
                                  compute_s=plan.compute_s,
                                  overall_delay_s=plan.overall_delay_s, **base))
    return MetricsReport(scheme=scheme, records=records)


# Baselines first, so an exact tie in a sweep cell is never credited to the
# adaptive scheme.
SCHEME_ORDER = (Scheme.GROUND, Scheme.ONE_HOP, Scheme.ADAPTIVE)


@dataclass
class SweepCell:
    n_bits: float
    c_gflo: float
    scheme: Scheme
    mean_delay_s: Optional[float]
    dropped: int
    frac_dest: float
    frac_one_hop: float
    frac_beyond: float


def cell_seed(base_seed: int, i: int, j: int) -> int:
    """Deterministic per-cell seed, shared by all schemes in the cell."""
    return int(np.random.SeedSequence((base_seed, i, j)).generate_state(1)[0])


def _cell_scenario(base: Scenario, n_bits: float, c_gflo: float, seed: int) -> Scenario:
    wl = dataclasses.replace(base.workload, data_in_gb=n_bits / BITS_PER_GB,
                             compute_gflo=c_gflo)
    return dataclasses.replace(base, workload=wl, seed=seed)


def _run_cell(args) -> SweepCell:
    base, n_bits, c_gflo, seed, scheme, single_task = args
    scenario = _cell_scenario(base, n_bits, c_gflo, seed)
    report = run(scenario, scheme, max_tasks=1 if single_task else None)
    return SweepCell(
        n_bits=n_bits,
        c_gflo=c_gflo,
        scheme=scheme,
        mean_delay_s=report.mean_overall_delay_s,
        dropped=report.dropped,
        frac_dest=report.class_fraction("dest"),
        frac_one_hop=report.class_fraction("one_hop"),
        frac_beyond=report.class_fraction("beyond"),
    )


def sweep(base: Scenario, n_bits_grid: Sequence[float], c_gflo_grid: Sequence[float],
          schemes: Sequence[Scheme] = SCHEME_ORDER, single_task: bool = False,
          jobs: int = 1) -> List[SweepCell]:
    """Mean delay per (data volume, compute demand, scheme) grid cell.

    Every cell restarts from an empty network with its own derived seed; the
    seed is shared across schemes within a cell so they face the same
    arrivals. single_task=True keeps only the first arrival, which measures
    contention-free plan delays.
    """
    if not n_bits_grid or not c_gflo_grid:
        raise ValueError("sweep grids must be non-empty")
    work = []
    for i, n_bits in enumerate(n_bits_grid):
        for j, c_gflo in enumerate(c_gflo_grid):
            seed = cell_seed(base.seed, i, j)
            for scheme in schemes:
                work.append((base, float(n_bits), float(c_gflo), seed,
                             scheme, single_task))
    if jobs > 1:
        with Pool(jobs) as pool:
            return pool.map(_run_cell, work)
    return [_run_cell(w) for w in work]


def argmin_scheme(cells: Sequence[SweepCell]) -> dict:
    """Lowest-delay scheme per (n_bits, c_gflo) point, ties toward baselines."""
    groups: dict = {}
    for cell in cells:
        groups.setdefault((cell.n_bits, cell.c_gflo), []).append(cell)
    out = {}
    for key, group in groups.items():
        group = sorted(group, key=lambda c: SCHEME_ORDER.index(c.scheme))
        finite = [c for c in group if c.mean_delay_s is not None]
        if not finite:
            out[key] = ""
            continue
        best = min(c.mean_delay_s for c in finite)
        out[key] = str(next(c.scheme for c in finite if c.mean_delay_s == best))
    return out


@dataclass
class PlatformRow:
    capability_gflops: float
    impr_vs_ground_pct: float
    impr_vs_onehop_pct: float


def platform_table(base: Scenario, capabilities: Sequence[float],
                   data_in_gb: float = 0.3, compute_gflo: float = 1000.0,
                   jobs: int = 1) -> List[PlatformRow]:
    """Adaptive-scheme improvement over both baselines per CPU capability.

    +100% means halving the mean delay; 0% a tie.
    """
    if not capabilities:
        raise ValueError("capability list must be non-empty")
    work = []
    for cap in capabilities:
        net = dataclasses.replace(base.network, compute_gflops=float(cap))
        wl = dataclasses.replace(base.workload, data_in_gb=data_in_gb,
                                 compute_gflo=compute_gflo)
        scenario = dataclasses.replace(base, network=net, workload=wl)
        for scheme in SCHEME_ORDER:
            work.append((scenario, scheme))
    if jobs > 1:
        with Pool(jobs) as pool:
            reports = pool.starmap(run, work)
    else:
        reports = [run(scenario, scheme) for scenario, scheme in work]
    rows = []
    for idx, cap in enumerate(capabilities):
        by_scheme = {w[1]: r for w, r in zip(work[idx * 3:idx * 3 + 3],
                                             reports[idx * 3:idx * 3 + 3])}
        adaptive = by_scheme[Scheme.ADAPTIVE].mean_overall_delay_s
        ground = by_scheme[Scheme.GROUND].mean_overall_delay_s
        onehop = by_scheme[Scheme.ONE_HOP].mean_overall_delay_s
        if not adaptive:
            raise ValueError("platform table needs a non-empty workload")
        rows.append(PlatformRow(
            capability_gflops=float(cap),
            impr_vs_ground_pct=(ground / adaptive - 1.0) * 100.0,
            impr_vs_onehop_pct=(onehop / adaptive - 1.0) * 100.0,
        ))
    return rows


# -- file output ----------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_task_csv(report: MetricsReport, path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TASK_CSV_COLUMNS)
        for r in report.records:
            w.writerow([_fmt(getattr(r, c)) for c in TASK_CSV_COLUMNS])


SWEEP_CSV_COLUMNS = ["n_bits", "c_gflo", "scheme", "mean_delay_s", "argmin_scheme"]


def write_sweep_csv(cells: Sequence[SweepCell], path: str) -> None:
    argmin = argmin_scheme(cells)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_CSV_COLUMNS)
        for c in cells:
            w.writerow([_fmt(c.n_bits), _fmt(c.c_gflo), str(c.scheme),
                        _fmt(c.mean_delay_s), argmin[(c.n_bits, c.c_gflo)]])


TABLE_CSV_COLUMNS = ["capability_gflops", "impr_vs_ground_pct", "impr_vs_onehop_pct"]


def write_table_csv(rows: Sequence[PlatformRow], path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TABLE_CSV_COLUMNS)
        for r in rows:
            w.writerow([_fmt(r.capability_gflops), _fmt(r.impr_vs_ground_pct),
                        _fmt(r.impr_vs_onehop_pct)])


def write_report_json(report: MetricsReport, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(report.summary(), fh, indent=2, sort_keys=True)
        fh.write("\n")

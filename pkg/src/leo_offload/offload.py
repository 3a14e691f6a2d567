"""Offloading one task over the constellation as a two-state path problem.

State 0 carries the raw input data, state 1 the (much smaller) result; the
transition between them is the computation. Edges are communication links:
inter-satellite links at full rate (the in-plane ring is always up, links
between adjacent planes drop above the polar cutoff), satellite-to-ground
links gated by visibility windows, and the source spacecraft's feeder links
to satellites currently within range and line of sight. Link and CPU
capacity is shared through FIFO reservation timelines, so transfer and
compute weights automatically include the waiting delay behind earlier
tasks. Offloading schemes differ only in where the compute transition is
permitted.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .constellation import (
    C_LIGHT_KM_S,
    ConstellationConfig,
    GroundNode,
    OrbitElements,
    all_satellite_positions_km,
    ground_visibility_windows,
    inter_plane_windows,
    line_of_sight,
    orbit_position,
    orbit_through,
)
from .state_graph import StateGraph, StatePath, shortest_path
from .timeline import ConstantCapacity, ResourceTimeline, WindowedCapacity

INF = math.inf

BITS_PER_GB = 8e9
BPS_PER_GBPS = 1e9

RAW = 0  # state index of the raw-data layer
DONE = 1  # state index of the result layer


class Scheme(str, enum.Enum):
    """Where a task is allowed to run its computation."""

    ADAPTIVE = "adaptive"  # any satellite or the destination
    GROUND = "ground"  # only the destination ground station
    ONE_HOP = "onehop"  # only satellites directly linked to the source

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Task:
    """One offloading request: six attributes."""

    source: int  # node id of the source spacecraft
    dest: int  # node id of the destination ground station
    gen_time_s: float
    compute_gflo: float
    data_in_bits: float
    data_out_bits: float

    def __post_init__(self):
        if self.source == self.dest:
            raise ValueError("source and destination must differ")
        if self.data_in_bits <= 0 or self.data_out_bits <= 0:
            raise ValueError("data sizes must be positive")
        if self.compute_gflo < 0:
            raise ValueError("compute demand must be nonnegative")


@dataclass(frozen=True)
class NetworkParams:
    isl_rate_bps: float = 5e9
    sgl_rate_bps: float = 1e9
    compute_gflops: float = 200.0
    source_range_km: float = 2000.0
    propagation_delay: bool = False
    window_horizon_s: Optional[float] = None  # needed when Earth rotation is on


@dataclass
class EdgeRecord:
    """One priced hop of a plan: which resource, when, and the accrual spans."""

    kind: str  # "isl", "sgl" or "compute"
    key: Optional[tuple]
    t_start: float
    delay_s: float
    amount: float
    spans: Tuple[Tuple[float, float], ...]


@dataclass
class OffloadPlan:
    task: Task
    scheme: Scheme
    path: StatePath
    compute_node: int
    compute_class: str  # "dest", "one_hop" or "beyond"
    overall_delay_s: float
    isl_tx_s: float
    sgl_tx_s: float
    compute_s: float
    records: List[EdgeRecord]

    @property
    def breakdown(self) -> Dict[str, float]:
        return {
            "isl_tx_s": self.isl_tx_s,
            "sgl_tx_s": self.sgl_tx_s,
            "compute_s": self.compute_s,
        }


class NetworkState:
    """The constellation plus every registered node and resource ledger.

    Node ids: satellites fill 0 .. num_sats-1 in plane-major order; ground
    stations and source spacecraft get the following ids in registration
    order. Resource timelines are created lazily and keep all reservations
    committed so far, which is the only mutable simulation state.
    """

    def __init__(self, cfg: ConstellationConfig, params: NetworkParams = NetworkParams(),
                 search_method: str = "heap"):
        if cfg.earth_rotation and params.window_horizon_s is None:
            raise ValueError("earth rotation needs NetworkParams.window_horizon_s")
        self.cfg = cfg
        self.params = params
        self.search_method = search_method
        self.extra_nodes: List[object] = []  # GroundNode or OrbitElements
        self.timelines: Dict[tuple, ResourceTimeline] = {}
        self._attach_cache: Dict[tuple, tuple] = {}
        self._static_neighbors = self._build_static_neighbors()

    # -- node registry ---------------------------------------------------

    @property
    def num_nodes(self) -> int:
        return self.cfg.num_sats + len(self.extra_nodes)

    def register_ground(self, lat_deg: float, lon_deg: float) -> int:
        self.extra_nodes.append(GroundNode(lat_deg, lon_deg))
        return self.num_nodes - 1

    def register_source(self, orbit: OrbitElements) -> int:
        self.extra_nodes.append(orbit)
        return self.num_nodes - 1

    def register_source_at(self, lat_deg: float, lon_deg: float, altitude_km: float,
                           at_time: float) -> int:
        orbit = orbit_through(lat_deg, lon_deg, altitude_km, at_time,
                              self.cfg.epoch_s, self.cfg.earth_rotation)
        return self.register_source(orbit)

    def node_kind(self, node: int) -> str:
        if node < 0 or node >= self.num_nodes:
            raise ValueError(f"node {node} not registered")
        if node < self.cfg.num_sats:
            return "sat"
        entry = self.extra_nodes[node - self.cfg.num_sats]
        return "ground" if isinstance(entry, GroundNode) else "source"

    def ground_node(self, node: int) -> GroundNode:
        entry = self.extra_nodes[node - self.cfg.num_sats]
        assert isinstance(entry, GroundNode)
        return entry

    def node_xyz_km(self, node: int, t: float) -> np.ndarray:
        kind = self.node_kind(node)
        if kind == "sat":
            sat = self.cfg.sat_id(node)
            orbit = OrbitElements(self.cfg.altitude_km,
                                  self.cfg.plane_raan_deg(sat.plane),
                                  self.cfg.slot_phase_deg(sat.slot))
            return orbit_position(orbit, t, self.cfg.epoch_s,
                                  self.cfg.earth_rotation).xyz_km()
        entry = self.extra_nodes[node - self.cfg.num_sats]
        if kind == "ground":
            return entry.position().xyz_km()
        return orbit_position(entry, t, self.cfg.epoch_s,
                              self.cfg.earth_rotation).xyz_km()

    def _build_static_neighbors(self):
        cfg = self.cfg
        out = []
        for idx in range(cfg.num_sats):
            p, i = cfg.sat_id(idx)
            S = cfg.sats_per_plane
            nbrs = {p * S + (i + 1) % S, p * S + (i - 1) % S}
            nbrs.discard(idx)
            for q in (p - 1, p + 1):
                if 0 <= q < cfg.num_planes:
                    nbrs.add(q * S + i)
            out.append(tuple(sorted(nbrs)))
        return out

    # -- resource timelines ----------------------------------------------

    def _new_isl_timeline(self, a: int, b: int) -> ResourceTimeline:
        cfg = self.cfg
        sa, sb = cfg.sat_id(a), cfg.sat_id(b)
        if sa.plane == sb.plane:
            return ResourceTimeline(ConstantCapacity(self.params.isl_rate_bps))
        period, windows = inter_plane_windows(cfg, sa, sb)
        return ResourceTimeline(WindowedCapacity(self.params.isl_rate_bps, windows, period))

    def _new_sgl_timeline(self, sat: int, gnd: int) -> ResourceTimeline:
        cfg = self.cfg
        site = self.ground_node(gnd)
        period, windows = ground_visibility_windows(
            cfg, cfg.sat_id(sat), site, horizon_s=self.params.window_horizon_s
        )
        return ResourceTimeline(WindowedCapacity(self.params.sgl_rate_bps, windows, period))

    def link_timeline(self, a: int, b: int) -> ResourceTimeline:
        """Shared timeline of an undirected link; creates it on first use."""
        ka, kb = self.node_kind(a), self.node_kind(b)
        if ka > kb or (ka == kb and a > b):
            a, b, ka, kb = b, a, kb, ka
        # After ordering: ground < sat < source alphabetically.
        if ka == "sat" and kb == "sat":
            key = ("isl", a, b)
            factory = lambda: self._new_isl_timeline(a, b)
        elif ka == "ground" and kb == "sat":
            key = ("sgl", b, a)
            factory = lambda: self._new_sgl_timeline(b, a)
        elif ka == "sat" and kb == "source":
            key = ("src", b, a)
            factory = lambda: ResourceTimeline(ConstantCapacity(self.params.isl_rate_bps))
        else:
            raise ValueError(f"no link between {ka} and {kb} nodes")
        tl = self.timelines.get(key)
        if tl is None:
            tl = self.timelines[key] = factory()
        return tl

    def cpu_timeline(self, sat: int) -> ResourceTimeline:
        key = ("cpu", sat)
        tl = self.timelines.get(key)
        if tl is None:
            tl = self.timelines[key] = ResourceTimeline(
                ConstantCapacity(self.params.compute_gflops)
            )
        return tl

    # -- geometry predicates ----------------------------------------------

    def attach_set(self, source: int, t: float) -> tuple:
        """Satellites the source spacecraft can feed at time t, sorted.

        Within range and with line of sight; these links carry the ISL rate.
        """
        key = (source, t)
        cached = self._attach_cache.get(key)
        if cached is not None:
            return cached
        src = self.node_xyz_km(source, t)
        sats = all_satellite_positions_km(self.cfg, t)
        dist = np.linalg.norm(sats - src[None, :], axis=1)
        close = np.nonzero(dist <= self.params.source_range_km)[0]
        out = tuple(int(i) for i in close if line_of_sight(src, sats[i]))
        if len(self._attach_cache) > 65536:
            self._attach_cache.clear()
        self._attach_cache[key] = out
        return out

    def sats_adjacent(self, a: int, b: int) -> bool:
        return b in self._static_neighbors[a]

    def commit(self, plan: OffloadPlan) -> None:
        """Write a plan's accrual spans into the shared ledgers."""
        for rec in plan.records:
            if rec.key is not None and rec.spans:
                self.timelines[rec.key].reserve(list(rec.spans))


def attach_source(net: NetworkState, source: int, t: float) -> tuple:
    return net.attach_set(source, t)


def _propagation_s(net: NetworkState, a: int, b: int, t: float) -> float:
    d = float(np.linalg.norm(net.node_xyz_km(a, t) - net.node_xyz_km(b, t)))
    return d / C_LIGHT_KM_S


def build_offload_graph(net: NetworkState, task: Task, scheme: Scheme) -> StateGraph:
    """Two-state graph over all registered nodes for one task.

    Satellites link to their ring and adjacent-plane partners and to the
    task's destination; the source feeds satellites in its attach set at the
    moment the edge is queried (it transmits exactly once, at departure).
    Nodes registered for other tasks stay isolated. The transition is the
    computation, masked by the scheme: zero delay at the destination,
    impossible at the source, the CPU timeline at a satellite.
    """
    u, v = task.source, task.dest
    if net.node_kind(u) != "source":
        raise ValueError("task source must be a registered source spacecraft")
    if net.node_kind(v) != "ground":
        raise ValueError("task destination must be a registered ground station")
    num_sats = net.cfg.num_sats
    onehop = set(net.attach_set(u, task.gen_time_s)) if scheme == Scheme.ONE_HOP else None
    prop = net.params.propagation_delay

    def edge_weight(k: int, s: int, n: int, t: float) -> float:
        bits = task.data_in_bits if k == RAW else task.data_out_bits
        if s == u:
            if n >= num_sats or n not in net.attach_set(u, t):
                return INF
        elif n == u or s == v:
            return INF
        elif n == v:
            if s >= num_sats:
                return INF
        elif s < num_sats and n < num_sats:
            if not net.sats_adjacent(s, n):
                return INF
        else:
            return INF
        d = net.link_timeline(s, n).delay(bits, t)
        if prop and d < INF:
            d += _propagation_s(net, s, n, t)
        return d

    def transition_weight(k: int, s: int, t: float) -> float:
        if s == v:
            if scheme == Scheme.ONE_HOP:
                return INF
            return 0.0
        if s >= num_sats or s == u:
            return INF
        if scheme == Scheme.GROUND:
            return INF
        if onehop is not None and s not in onehop:
            return INF
        return net.cpu_timeline(s).delay(task.compute_gflo, t)

    def candidates(k: int, s: int, t: float):
        if s == u:
            return net.attach_set(u, t)
        if s < num_sats:
            return net._static_neighbors[s] + (v,)
        return ()

    return StateGraph(2, net.num_nodes, edge_weight, transition_weight, candidates)


def plan_offload(net: NetworkState, task: Task, scheme: Scheme) -> OffloadPlan:
    """Plan one task under a scheme against the current ledgers.

    Returns the least-delay plan with its per-hop records and the delay
    broken down into inter-satellite transmission, space-ground transmission
    and computation. Raises Unreachable when the scheme leaves no feasible
    plan. Planning never mutates the network; call NetworkState.commit to
    take the plan's capacity.
    """
    graph = build_offload_graph(net, task, scheme)
    path = shortest_path(graph, task.source, task.dest, task.gen_time_s,
                         method=net.search_method)
    records: List[EdgeRecord] = []
    sums = {"isl": 0.0, "sgl": 0.0, "compute": 0.0}
    compute_node = None
    acc = 0.0
    for i in range(1, len(path.hops)):
        pk, ps = path.hops[i - 1]
        k, s = path.hops[i]
        t = task.gen_time_s + acc
        if k != pk:
            compute_node = s
            if s == task.dest:
                records.append(EdgeRecord("compute", None, t, 0.0, 0.0, ()))
                continue
            tl = net.cpu_timeline(s)
            d, spans = tl.delay_with_intervals(task.compute_gflo, t)
            records.append(EdgeRecord("compute", ("cpu", s), t, d,
                                      task.compute_gflo, tuple(spans)))
            sums["compute"] += d
            acc += d
            continue
        bits = task.data_in_bits if pk == RAW else task.data_out_bits
        tl = net.link_timeline(ps, s)
        d, spans = tl.delay_with_intervals(bits, t)
        if net.params.propagation_delay:
            d += _propagation_s(net, ps, s, t)
        kind = "sgl" if (ps == task.dest or s == task.dest) else "isl"
        key = _link_key(net, ps, s)
        records.append(EdgeRecord(kind, key, t, d, bits, tuple(spans)))
        sums[kind] += d
        acc += d
    if not math.isclose(acc, path.length, rel_tol=1e-12, abs_tol=1e-9):
        raise AssertionError(f"replay drifted from search: {acc} vs {path.length}")
    onehop_set = net.attach_set(task.source, task.gen_time_s)
    if compute_node == task.dest:
        compute_class = "dest"
    elif compute_node in onehop_set:
        compute_class = "one_hop"
    else:
        compute_class = "beyond"
    return OffloadPlan(
        task=task,
        scheme=scheme,
        path=path,
        compute_node=compute_node,
        compute_class=compute_class,
        overall_delay_s=path.length,
        isl_tx_s=sums["isl"],
        sgl_tx_s=sums["sgl"],
        compute_s=sums["compute"],
        records=records,
    )


def _link_key(net: NetworkState, a: int, b: int) -> tuple:
    ka, kb = net.node_kind(a), net.node_kind(b)
    if ka > kb or (ka == kb and a > b):
        a, b, ka, kb = b, a, kb, ka
    if ka == "sat" and kb == "sat":
        return ("isl", a, b)
    if ka == "ground":
        return ("sgl", b, a)
    return ("src", b, a)

"""Built-in property checks behind the `verify` CLI command.

Each suite is a quick, self-contained probe of a core guarantee: search
results against exhaustive enumeration, the single-state reduction against a
classic Dijkstra, scheme dominance, delay-breakdown conservation with
capacity re-integration, and FIFO monotonicity of reservation timelines.
They are smaller than the pytest suite on purpose; the point is a fast
integrity check of an installed build.
"""

from __future__ import annotations

import heapq
import math
import random
from typing import Callable, List, Optional, Tuple

from .constellation import ConstellationConfig, satellite_position
from .offload import (
    BITS_PER_GB,
    NetworkState,
    Scheme,
    Task,
    plan_offload,
)
from .state_graph import (
    StateGraph,
    Unreachable,
    brute_force_shortest_path,
    run_search,
)
from .timeline import (
    ConstantCapacity,
    ResourceTimeline,
    SegmentCapacity,
    WindowedCapacity,
)

INF = math.inf

SuiteResult = Tuple[str, bool, str]


def _random_graph(rng: random.Random) -> Tuple[StateGraph, int]:
    """A small random graph, static or time-varying but always FIFO."""
    num_nodes = rng.randint(2, 6)
    num_states = rng.randint(1, 3)
    time_varying = rng.random() < 0.5
    edges = {}
    transitions = {}
    for k in range(num_states):
        for s in range(num_nodes):
            for n in range(num_nodes):
                if n != s and rng.random() < 0.7:
                    edges[(k, s, n)] = (float(rng.randint(0, 9)),
                                        float(rng.randint(0, 12)))
    for k in range(num_states - 1):
        for s in range(num_nodes):
            if rng.random() < 0.8:
                transitions[(k, s)] = (float(rng.randint(0, 9)),
                                       float(rng.randint(0, 12)))

    def lookup(table, key, t):
        entry = table.get(key)
        if entry is None:
            return INF
        base, release = entry
        if not time_varying:
            return base
        # Waiting until the release instant keeps arrival monotone in t.
        return base + max(release - t, 0.0)

    graph = StateGraph(
        num_states, num_nodes,
        lambda k, s, n, t: lookup(edges, (k, s, n), t),
        lambda k, s, t: lookup(transitions, (k, s), t),
    )
    return graph, num_nodes


def suite_search_oracle(trials: int = 200) -> Tuple[bool, str]:
    rng = random.Random(20240811)
    for i in range(trials):
        graph, num_nodes = _random_graph(rng)
        source = rng.randrange(num_nodes)
        dest = rng.randrange(num_nodes)
        depart = float(rng.randint(0, 8))
        scan = run_search(graph, source, depart, method="scan")
        heap = run_search(graph, source, depart, method="heap")
        if scan.dist != heap.dist:
            return False, f"trial {i}: heap and scan distances differ"
        try:
            want = brute_force_shortest_path(graph, source, dest, depart).length
        except Unreachable:
            want = INF
        got = scan.dist[graph.num_states - 1][dest]
        if got != want:
            return False, f"trial {i}: search {got} != enumeration {want}"
    return True, f"{trials} random graphs"


def suite_classic_reduction(trials: int = 60) -> Tuple[bool, str]:
    rng = random.Random(77)
    for i in range(trials):
        num_nodes = rng.randint(2, 8)
        weights = {}
        for s in range(num_nodes):
            for n in range(num_nodes):
                if n != s and rng.random() < 0.6:
                    weights[(s, n)] = float(rng.randint(0, 9))
        graph = StateGraph(
            1, num_nodes,
            lambda k, s, n, t: weights.get((s, n), INF),
            lambda k, s, t: INF,
        )
        source = rng.randrange(num_nodes)
        st = run_search(graph, source, 0.0, method="scan")

        dist = [INF] * num_nodes
        dist[source] = 0.0
        heap = [(0.0, source)]
        done = set()
        while heap:
            d, s = heapq.heappop(heap)
            if s in done:
                continue
            done.add(s)
            for (a, b), w in weights.items():
                if a == s and d + w < dist[b]:
                    dist[b] = d + w
                    heapq.heappush(heap, (dist[b], b))
        if st.dist[0] != dist:
            return False, f"trial {i}: single-state distances diverge"
    return True, f"{trials} single-state graphs"


def _mini_tasks():
    cfg = ConstellationConfig(num_planes=2, sats_per_plane=4)
    net = NetworkState(cfg)
    cases = [
        (0.0, 100.0, 0.4), (0.0, 2000.0, 2e-9), (700.0, 1.0, 4.0),
        (1500.0, 500.0, 0.05), (2500.0, 0.0, 1.0), (4000.0, 900.0, 0.8),
    ]
    tasks = []
    for t, gflo, gb in cases:
        pos = satellite_position(cfg, cfg.sat_id(0), t)
        lat = pos.lat_deg - 4.0 if pos.lat_deg > 0 else pos.lat_deg + 4.0
        v = net.register_ground(50.0, 10.0)
        u = net.register_source_at(lat, pos.lon_deg, 550.0, t)
        tasks.append(Task(u, v, t, gflo, gb * BITS_PER_GB, 16.0))
    return net, tasks


def suite_scheme_dominance() -> Tuple[bool, str]:
    net, tasks = _mini_tasks()
    compared = 0
    for task in tasks:
        adaptive = plan_offload(net, task, Scheme.ADAPTIVE).overall_delay_s
        for other in (Scheme.GROUND, Scheme.ONE_HOP):
            try:
                rival = plan_offload(net, task, other).overall_delay_s
            except Unreachable:
                continue
            if adaptive > rival + 1e-9:
                return False, f"adaptive {adaptive} above {other} {rival}"
            compared += 1
    return compared > 0, f"{compared} scheme comparisons"


def suite_conservation() -> Tuple[bool, str]:
    net, tasks = _mini_tasks()
    checked = 0
    for task in tasks:
        plan = plan_offload(net, task, Scheme.ADAPTIVE)
        total = plan.isl_tx_s + plan.sgl_tx_s + plan.compute_s
        if not math.isclose(total, plan.overall_delay_s,
                            rel_tol=1e-12, abs_tol=1e-9):
            return False, f"breakdown sums to {total}, not {plan.overall_delay_s}"
        for rec in plan.records:
            if rec.key is None or rec.amount <= 0:
                continue
            moved = net.timelines[rec.key].integrate_intervals(rec.spans)
            if not math.isclose(moved, rec.amount, rel_tol=1e-9):
                return False, f"re-integration {moved} != amount {rec.amount}"
            checked += 1
        net.commit(plan)
    return checked > 0, f"{checked} interval re-integrations"


def suite_fifo_timelines(trials: int = 120) -> Tuple[bool, str]:
    rng = random.Random(4242)
    for i in range(trials):
        kind = rng.randrange(3)
        if kind == 0:
            base = ConstantCapacity(rng.uniform(0.5, 10.0))
        elif kind == 1:
            segs = []
            t = 0.0
            for _ in range(rng.randint(1, 4)):
                end = t + rng.uniform(0.5, 5.0)
                segs.append((t, end, rng.choice([0.0, rng.uniform(0.5, 8.0)])))
                t = end
            base = SegmentCapacity(tuple(segs), tail_rate=rng.uniform(0.5, 4.0))
        else:
            period = rng.uniform(8.0, 20.0)
            a = rng.uniform(0.0, period / 2)
            b = a + rng.uniform(0.5, period / 2 - 0.1)
            base = WindowedCapacity(rng.uniform(0.5, 8.0), ((a, b),), period)
        tl = ResourceTimeline(base)
        cursor = rng.uniform(0.0, 5.0)
        for _ in range(rng.randint(0, 3)):
            width = rng.uniform(0.2, 2.0)
            tl.reserve([(cursor, width)])
            cursor += width + rng.uniform(0.1, 3.0)
        amount = rng.uniform(0.1, 25.0)
        t1 = rng.uniform(0.0, 30.0)
        t2 = t1 + rng.uniform(0.0, 10.0)
        d1, d2 = tl.delay(amount, t1), tl.delay(amount, t2)
        if d1 == INF or d2 == INF:
            continue
        if t1 + d1 > t2 + d2 + 1e-9:
            return False, f"trial {i}: finishing earlier by departing later"
    return True, f"{trials} timeline samples"


DEFAULT_SUITES: List[Tuple[str, Callable[[], Tuple[bool, str]]]] = [
    ("search-matches-enumeration", suite_search_oracle),
    ("single-state-reduction", suite_classic_reduction),
    ("scheme-dominance", suite_scheme_dominance),
    ("breakdown-conservation", suite_conservation),
    ("timeline-fifo", suite_fifo_timelines),
]


def run_suites(suites: Optional[list] = None) -> List[SuiteResult]:
    results = []
    for name, fn in (DEFAULT_SUITES if suites is None else suites):
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"raised {exc!r}"
        results.append((name, ok, detail))
    return results

"""Shared builders and reference oracles for the test suite."""

from __future__ import annotations

import heapq
import math
import random

from leo_offload.constellation import ConstellationConfig, GroundNode
from leo_offload.simulator import Region, Scenario, Workload
from leo_offload.state_graph import StateGraph

INF = math.inf


def toy_scenario(**kw):
    """Small, fast scenario: two planes, a dozen arrivals over two minutes.

    Sources and sites sit near the plane-0 ground track so the frozen-Earth
    toy net can actually see most of them.
    """
    base = dict(
        constellation=ConstellationConfig(num_planes=2, sats_per_plane=4),
        workload=Workload(arrival_rate=6.0, arrival_time_unit_s=60.0,
                          data_in_gb=0.05, compute_gflo=100.0),
        regions=(Region(5.0, 5.0, 0.7, jitter_deg=3.0),
                 Region(-12.0, 2.0, 0.3, jitter_deg=3.0)),
        sites=(GroundNode(64.0, 0.0), GroundNode(-46.0, 2.0)),
        horizon_s=120.0,
        seed=7,
    )
    base.update(kw)
    return Scenario(**base)


def dict_graph(num_states, num_nodes, edges, transitions, candidates=False):
    """Build a StateGraph from {(k, s, n): w} and {(k, s): w} dicts."""

    def edge_weight(k, s, n, t):
        return edges.get((k, s, n), INF)

    def transition_weight(k, s, t):
        return transitions.get((k, s), INF)

    cand = None
    if candidates:
        adj = {}
        for (k, s, n) in edges:
            adj.setdefault((k, s), []).append(n)
        for key in adj:
            adj[key] = sorted(set(adj[key]))

        def cand(k, s, t):
            return adj.get((k, s), ())

    return StateGraph(num_states, num_nodes, edge_weight, transition_weight, cand)


def random_static_graph(rng: random.Random, max_nodes=6, max_states=3,
                        present=0.7, weight_range=(0, 9)):
    """Random dense-ish graph with integer weights; returns (graph, edges, trans)."""
    num_nodes = rng.randint(2, max_nodes)
    num_states = rng.randint(1, max_states)
    lo, hi = weight_range
    edges = {}
    for k in range(num_states):
        for s in range(num_nodes):
            for n in range(num_nodes):
                if n != s and rng.random() < present:
                    edges[(k, s, n)] = float(rng.randint(lo, hi))
    transitions = {}
    for k in range(num_states - 1):
        for s in range(num_nodes):
            if rng.random() < present:
                transitions[(k, s)] = float(rng.randint(lo, hi))
    graph = dict_graph(num_states, num_nodes, edges, transitions)
    return graph, edges, transitions


def random_fifo_graph(rng: random.Random, max_nodes=5, max_states=3):
    """Random graph whose weights vary with time but keep t + w(t) nondecreasing.

    Each edge uses w(t) = base + max(release - t, floor): a cost that relaxes
    as time passes, never enough to let a later departure overtake an earlier
    one.
    """
    num_nodes = rng.randint(2, max_nodes)
    num_states = rng.randint(1, max_states)

    def draw():
        base = rng.uniform(0.0, 4.0)
        release = rng.uniform(0.0, 8.0)
        floor = rng.uniform(0.0, 2.0)
        return base, release, floor

    edges = {}
    trans = {}
    for k in range(num_states):
        for s in range(num_nodes):
            for n in range(num_nodes):
                if n != s and rng.random() < 0.7:
                    edges[(k, s, n)] = draw()
    for k in range(num_states - 1):
        for s in range(num_nodes):
            if rng.random() < 0.7:
                trans[(k, s)] = draw()

    def eval_w(params, t):
        base, release, floor = params
        return base + max(release - t, floor)

    def edge_weight(k, s, n, t):
        p = edges.get((k, s, n))
        return INF if p is None else eval_w(p, t)

    def transition_weight(k, s, t):
        p = trans.get((k, s))
        return INF if p is None else eval_w(p, t)

    return StateGraph(num_states, num_nodes, edge_weight, transition_weight)


def textbook_dijkstra(num_nodes, weights, source):
    """Plain single-state Dijkstra over {(s, n): w}; returns the distance list."""
    dist = [INF] * num_nodes
    dist[source] = 0.0
    heap = [(0.0, source)]
    done = set()
    while heap:
        d, s = heapq.heappop(heap)
        if s in done:
            continue
        done.add(s)
        for n in range(num_nodes):
            w = weights.get((s, n))
            if w is None or n in done:
                continue
            g = d + w
            if g < dist[n]:
                dist[n] = g
                heapq.heappush(heap, (g, n))
    return dist

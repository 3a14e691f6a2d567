"""Shortest paths on state graphs.

A state graph replicates a node set across an ordered list of states.
Within one state, nodes are joined by weighted edges; between consecutive
states, each node carries a weighted transition to its own copy in the next
state. A path walks edges with nondecreasing state index, may visit a node
at most once per state, and moves between states only through unit-step
transitions. Weights are queried with the arrival time at the edge's head,
so time-varying costs are supported; correctness of the search requires the
FIFO property (departing later never yields an earlier arrival).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

INF = math.inf


class WeightError(ValueError):
    """A weight provider returned a negative or NaN value."""


class Unreachable(Exception):
    """No valid path exists from the source to the destination."""

    def __init__(self, source: int, dest: int):
        super().__init__(f"no path from node {source} to node {dest} in the last state")
        self.source = source
        self.dest = dest


class InvalidPath(ValueError):
    """A hop sequence violates the path rules."""

    def __init__(self, violation: "PathViolation"):
        super().__init__(str(violation))
        self.violation = violation


class BoundExceeded(ValueError):
    """The graph is too large for exhaustive enumeration."""


@dataclass(frozen=True)
class StateGraph:
    """A node set replicated across ordered states.

    edge_weight(k, s, n, t) is the cost of moving s -> n within state k when
    leaving s at time t; transition_weight(k, s, t) is the cost of moving
    node s from state k to state k+1 starting at time t. Both return
    math.inf where no edge exists. candidates, when given, must yield every
    node n with a finite edge_weight(k, s, n, t); it only narrows the scan,
    it never changes the graph.
    """

    num_states: int
    num_nodes: int
    edge_weight: Callable[[int, int, int, float], float]
    transition_weight: Callable[[int, int, float], float]
    candidates: Optional[Callable[[int, int, float], Iterable[int]]] = None

    def __post_init__(self):
        if self.num_states < 1 or self.num_nodes < 1:
            raise ValueError("state graph needs at least one state and one node")


@dataclass(frozen=True)
class StatePath:
    """A path as a hop sequence of (state, node) pairs plus its total weight."""

    hops: tuple
    length: float

    @property
    def compute_hop(self) -> Optional[int]:
        """Index of the first hop that entered a new state, if any."""
        for i in range(1, len(self.hops)):
            if self.hops[i][0] != self.hops[i - 1][0]:
                return i
        return None


@dataclass(frozen=True)
class PathViolation:
    hop_index: int
    reason: str

    def __str__(self):
        return f"hop {self.hop_index}: {self.reason}"


@dataclass
class SearchState:
    """Distances, parents and extraction order of one search run."""

    num_states: int
    num_nodes: int
    source: int
    depart_time: float
    method: str
    dist: list = field(default_factory=list)
    parent: dict = field(default_factory=dict)
    extracted: list = field(default_factory=list)

    def dump(self) -> str:
        """Line-oriented text form for debugging and test diagnostics."""
        lines = [
            f"search method={self.method} source={self.source} "
            f"depart={self.depart_time!r} extracted={len(self.extracted)}"
        ]
        for k in range(self.num_states):
            for s in range(self.num_nodes):
                d = self.dist[k][s]
                par = self.parent.get((k, s))
                par_txt = f"{par[0]},{par[1]}" if par is not None else "-"
                lines.append(f"k={k} s={s} dist={d!r} parent={par_txt}")
        return "\n".join(lines)


def _checked(w: float) -> float:
    if math.isnan(w) or w < 0.0:
        raise WeightError(f"weight provider returned {w!r}")
    return w


def validate_path(graph: StateGraph, hops) -> Optional[PathViolation]:
    """Check a hop sequence against the path rules.

    Returns None when the sequence is a valid path, else a PathViolation
    naming the first offending hop. Weights are not consulted; a structurally
    valid path may still have infinite length.
    """
    if len(hops) == 0:
        return None
    for i, (k, s) in enumerate(hops):
        if not (0 <= k < graph.num_states):
            return PathViolation(i, f"state {k} out of range")
        if not (0 <= s < graph.num_nodes):
            return PathViolation(i, f"node {s} out of range")
    seen = {hops[0][1]}
    for i in range(1, len(hops)):
        pk, ps = hops[i - 1]
        k, s = hops[i]
        if k == pk:
            if s == ps:
                return PathViolation(i, "self edge within a state")
            if s in seen:
                return PathViolation(i, f"node {s} visited twice in state {k}")
            seen.add(s)
        elif k == pk + 1:
            if s != ps:
                return PathViolation(i, "transition must stay on the same node")
            seen = {s}
        elif k < pk:
            return PathViolation(i, "state index decreased")
        else:
            return PathViolation(i, f"state skipped from {pk} to {k}")
    return None


def path_length(graph: StateGraph, hops, depart_time: float = 0.0) -> float:
    """Total weight of a valid hop sequence, walking arrival times forward.

    Raises InvalidPath on a structural violation. Returns math.inf when some
    edge on the walk has infinite weight at its query time.
    """
    violation = validate_path(graph, hops)
    if violation is not None:
        raise InvalidPath(violation)
    acc = 0.0
    for i in range(1, len(hops)):
        pk, ps = hops[i - 1]
        k, s = hops[i]
        t = depart_time + acc
        if k == pk:
            w = _checked(graph.edge_weight(k, ps, s, t))
        else:
            w = _checked(graph.transition_weight(pk, ps, t))
        if w == INF:
            return INF
        acc += w
    return acc


def run_search(
    graph: StateGraph,
    source: int,
    depart_time: float = 0.0,
    method: str = "scan",
    stop_at: Optional[tuple] = None,
) -> SearchState:
    """Label-setting search from (state 0, source) over the whole graph.

    method "scan" is the reference implementation: it keeps all supernodes in
    an unvisited pool and extracts the minimum by a full linear scan, running
    until every reachable supernode is settled. method "heap" uses a binary
    heap with lazy deletion and may stop early at stop_at. Both extract ties
    in lexicographic (state, node) order and return identical distances for
    every settled supernode.
    """
    if not (0 <= source < graph.num_nodes):
        raise ValueError(f"source node {source} out of range")
    K, V = graph.num_states, graph.num_nodes
    st = SearchState(K, V, source, depart_time, method)
    st.dist = [[INF] * V for _ in range(K)]
    st.dist[0][source] = 0.0
    if method == "scan":
        _search_scan(graph, st, stop_at)
    elif method == "heap":
        _search_heap(graph, st, stop_at)
    else:
        raise ValueError(f"unknown search method {method!r}")
    return st


def _relax_from(graph: StateGraph, st: SearchState, k: int, s: int, d: float, visited) -> None:
    K, V = graph.num_states, graph.num_nodes
    t = st.depart_time + d
    dist_k = st.dist[k]
    if graph.candidates is not None:
        targets = graph.candidates(k, s, t)
    else:
        targets = range(V)
    for n in targets:
        if n == s or (k, n) in visited:
            continue
        w = _checked(graph.edge_weight(k, s, n, t))
        if w == INF:
            continue
        g = d + w
        if g < dist_k[n]:
            dist_k[n] = g
            st.parent[(k, n)] = (k, s)
    if k + 1 < K:
        w = _checked(graph.transition_weight(k, s, t))
        if w < INF:
            g = d + w
            if g < st.dist[k + 1][s]:
                st.dist[k + 1][s] = g
                st.parent[(k + 1, s)] = (k, s)


class _VisitedMatrix:
    """Membership view over a boolean matrix, so relaxers share one protocol."""

    def __init__(self, K, V):
        self.rows = [[False] * V for _ in range(K)]

    def __contains__(self, key):
        return self.rows[key[0]][key[1]]

    def mark(self, k, s):
        self.rows[k][s] = True


def _search_scan(graph: StateGraph, st: SearchState, stop_at) -> None:
    K, V = graph.num_states, graph.num_nodes
    visited = _VisitedMatrix(K, V)
    for _ in range(K * V):
        best = INF
        bk = bs = -1
        for k in range(K):
            dist_k = st.dist[k]
            row = visited.rows[k]
            for s in range(V):
                if not row[s] and dist_k[s] < best:
                    best = dist_k[s]
                    bk, bs = k, s
        if bk < 0:
            break
        visited.mark(bk, bs)
        st.extracted.append((bk, bs, best))
        if stop_at is not None and (bk, bs) == stop_at:
            return
        _relax_from(graph, st, bk, bs, best, visited)


def _search_heap(graph: StateGraph, st: SearchState, stop_at) -> None:
    visited = _VisitedMatrix(graph.num_states, graph.num_nodes)
    heap = [(0.0, 0, st.source)]
    while heap:
        d, k, s = heapq.heappop(heap)
        if (k, s) in visited:
            continue
        visited.mark(k, s)
        st.extracted.append((k, s, d))
        if stop_at is not None and (k, s) == stop_at:
            return
        _relax_push(graph, st, k, s, d, visited, heap)


def _relax_push(graph, st, k, s, d, visited, heap):
    # Relax from (k, s), pushing every supernode whose label improved.
    K, V = graph.num_states, graph.num_nodes
    t = st.depart_time + d
    dist_k = st.dist[k]
    if graph.candidates is not None:
        targets = graph.candidates(k, s, t)
    else:
        targets = range(V)
    for n in targets:
        if n == s or (k, n) in visited:
            continue
        w = _checked(graph.edge_weight(k, s, n, t))
        if w == INF:
            continue
        g = d + w
        if g < dist_k[n]:
            dist_k[n] = g
            st.parent[(k, n)] = (k, s)
            heapq.heappush(heap, (g, k, n))
    if k + 1 < K:
        w = _checked(graph.transition_weight(k, s, t))
        if w < INF:
            g = d + w
            if g < st.dist[k + 1][s]:
                st.dist[k + 1][s] = g
                st.parent[(k + 1, s)] = (k, s)
                heapq.heappush(heap, (g, k + 1, s))


def reconstruct_path(st: SearchState, dest: int) -> StatePath:
    """Walk parents back from the destination in the last state."""
    K = st.num_states
    length = st.dist[K - 1][dest]
    if length == INF:
        raise Unreachable(st.source, dest)
    cur = (K - 1, dest)
    chain = [cur]
    start = (0, st.source)
    while cur != start:
        cur = st.parent[cur]
        chain.append(cur)
    chain.reverse()
    return StatePath(tuple(chain), length)


def shortest_path(
    graph: StateGraph,
    source: int,
    dest: int,
    depart_time: float = 0.0,
    method: str = "scan",
) -> StatePath:
    """Least-weight path from (state 0, source) to (last state, dest).

    Raises Unreachable when the destination keeps an infinite label. The
    "scan" method settles the whole graph before answering; "heap" stops as
    soon as the destination is settled. Both return the same path length.
    """
    if not (0 <= dest < graph.num_nodes):
        raise ValueError(f"destination node {dest} out of range")
    target = (graph.num_states - 1, dest)
    stop = target if method == "heap" else None
    st = run_search(graph, source, depart_time, method=method, stop_at=stop)
    return reconstruct_path(st, dest)


def brute_force_shortest_path(
    graph: StateGraph,
    source: int,
    dest: int,
    depart_time: float = 0.0,
    max_supernodes: int = 24,
) -> StatePath:
    """Exhaustive minimum over every valid path; the oracle for small graphs.

    Enumerates all hop sequences obeying the path rules, accumulating arrival
    times exactly as path_length does. Prefixes already at or above the best
    known total are cut; with nonnegative weights this stays exact. Raises
    BoundExceeded when num_states * num_nodes > max_supernodes, Unreachable
    when no finite path exists.
    """
    if graph.num_states * graph.num_nodes > max_supernodes:
        raise BoundExceeded(
            f"{graph.num_states * graph.num_nodes} supernodes > bound {max_supernodes}"
        )
    K, V = graph.num_states, graph.num_nodes
    target = (K - 1, dest)
    best_len = INF
    best_hops = None
    hops = [(0, source)]

    def extend(k, s, acc, seen):
        nonlocal best_len, best_hops
        if acc >= best_len:
            return
        if (k, s) == target:
            best_len = acc
            best_hops = tuple(hops)
            return
        t = depart_time + acc
        for n in range(V):
            if n == s or n in seen:
                continue
            w = _checked(graph.edge_weight(k, s, n, t))
            if w == INF:
                continue
            seen.add(n)
            hops.append((k, n))
            extend(k, n, acc + w, seen)
            hops.pop()
            seen.discard(n)
        if k + 1 < K:
            w = _checked(graph.transition_weight(k, s, t))
            if w < INF:
                hops.append((k + 1, s))
                extend(k + 1, s, acc + w, {s})
                hops.pop()

    extend(0, source, 0.0, {source})
    if best_hops is None:
        raise Unreachable(source, dest)
    return StatePath(best_hops, best_len)


def fifo_violations(graph: StateGraph, time_pairs, nodes=None, tol: float = 1e-9) -> list:
    """Sample-check the FIFO property of all weight providers.

    For each ordered pair (t1, t2) with t1 <= t2 and each edge or transition,
    report cases where t1 + w(t1) > t2 + w(t2) + tol, i.e. where departing
    earlier would arrive later. Returns a list of (kind, k, s, n, t1, t2)
    tuples, empty when the sampled weights look FIFO.
    """
    out = []
    node_range = range(graph.num_nodes) if nodes is None else nodes
    for t1, t2 in time_pairs:
        if t2 < t1:
            t1, t2 = t2, t1
        for k in range(graph.num_states):
            for s in node_range:
                for n in node_range:
                    if n == s:
                        continue
                    w1 = graph.edge_weight(k, s, n, t1)
                    w2 = graph.edge_weight(k, s, n, t2)
                    if t1 + w1 > t2 + w2 + tol:
                        out.append(("edge", k, s, n, t1, t2))
                if k + 1 < graph.num_states:
                    w1 = graph.transition_weight(k, s, t1)
                    w2 = graph.transition_weight(k, s, t2)
                    if t1 + w1 > t2 + w2 + tol:
                        out.append(("transition", k, s, s, t1, t2))
    return out

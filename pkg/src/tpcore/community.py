"""Exact community search by greedy peeling, plus baselines and a test oracle.

The target community is the maximal connected vertex set containing the query
whose minimum proximity-weighted degree (sum of neighbors' proximity scores
inside the set) is as large as possible.  Greedy peeling repeatedly removes
the vertex of minimum proximity degree and returns the best snapshot; the
monotonicity of the degree under subset restriction makes this exact.
"""
from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import NoCore, QueriesDisconnected, TooLarge
from .graph import TemporalGraph
from .pagerank import (QueryContext, ScoreVector, temporal_pagerank,
                       temporal_pagerank_multi)


@dataclass
class CommunityResult:
    members: frozenset[int]
    beta: float
    algorithm: str
    timings: dict[str, float] = field(default_factory=dict)
    scores: ScoreVector | None = None

    def labels(self, graph: TemporalGraph) -> list[str]:
        return sorted(graph.labels[u] for u in self.members)


def proximity_degree(scores, graph: TemporalGraph, space, u: int) -> float:
    """Sum of proximity scores over u's de-temporal neighbors inside ``space``.

    Exactly-rounded summation: sets with the same score multiset compare equal
    no matter how they were reached, which the peeling tie-breaks rely on.
    """
    vals = scores.values if isinstance(scores, ScoreVector) else scores
    return math.fsum(vals[v] for v in graph.adj[u] if v in space)


def min_proximity_degree(scores, graph: TemporalGraph, members: Iterable[int]) -> float:
    """Minimum proximity degree over ``members``, all degrees taken inside the set."""
    space = members if isinstance(members, (set, frozenset)) else set(members)
    return min(proximity_degree(scores, graph, space, u) for u in sorted(space))


def _co_connected_alive(graph: TemporalGraph, alive: list[bool],
                        queries: Sequence[int]) -> bool:
    seen = {queries[0]}
    frontier = [queries[0]]
    while frontier:
        u = frontier.pop()
        for v in graph.adj[u]:
            if alive[v] and v not in seen:
                seen.add(v)
                frontier.append(v)
    return all(q in seen for q in queries)


def _peel(graph: TemporalGraph, values: np.ndarray,
          queries: Sequence[int]) -> tuple[set[int], float]:
    """Greedy removal of minimum-degree vertices; returns the best snapshot's component.

    The snapshot is kept as a removal log plus the index of the best round, so
    no per-round copies are made.  Ties extract the smallest vertex id with
    query vertices deferred last; extracting a query ends the loop (its degree
    still competes for the best snapshot, otherwise the reported optimum would
    go stale when the query itself is the unique minimum).  The best round
    uses strict improvement, which keeps the earliest and therefore largest
    optimal snapshot.
    """
    n = graph.n
    qset = set(queries)
    multi = len(queries) > 1
    rho = [proximity_degree(values, graph, range(n), u) for u in range(n)]
    # full-space degrees: every vertex is present initially
    alive = [True] * n
    heap = [(rho[u], u in qset, u) for u in range(n)]
    heapq.heapify(heap)
    removal_log: list[int] = []
    best_beta = 0.0
    best_round = 0

    while heap:
        val, _, u = heapq.heappop(heap)
        if not alive[u] or val != rho[u]:
            continue
        if multi and not _co_connected_alive(graph, alive, queries):
            break
        # snapshot comparisons use the exactly-rounded degree, not the
        # drift-prone decremented heap value, so real ties stay ties
        fresh = math.fsum(values[v] for v in graph.adj[u] if alive[v])
        if fresh > best_beta:
            best_beta = fresh
            best_round = len(removal_log)
        if u in qset:
            break
        alive[u] = False
        removal_log.append(u)
        score_u = float(values[u])
        for v in graph.adj[u]:
            if alive[v]:
                rho[v] -= score_u
                heapq.heappush(heap, (rho[v], v in qset, v))

    survivors = set(range(n)) - set(removal_log[:best_round])
    component = graph.connected_component(survivors, queries[0])
    beta = min_proximity_degree(values, graph, component)
    return component, beta


def exact_community(graph: TemporalGraph, ctx: QueryContext) -> CommunityResult:
    """Exact search for a single query vertex: score, peel, return the optimum."""
    if len(ctx.queries) != 1:
        raise ValueError("exact_community takes exactly one query vertex")
    t0 = time.perf_counter()
    scores = temporal_pagerank(graph, ctx)
    t1 = time.perf_counter()
    component, beta = _peel(graph, scores.values, ctx.queries)
    t2 = time.perf_counter()
    return CommunityResult(frozenset(component), beta, "egr",
                           {"score_s": t1 - t0, "search_s": t2 - t1}, scores)


def exact_community_multi(graph: TemporalGraph, ctx: QueryContext) -> CommunityResult:
    """Exact search for a query set; peeling stops once the set would split or shrink."""
    if len(ctx.queries) > 1 and not graph.co_connected(range(graph.n), ctx.queries):
        raise QueriesDisconnected("query vertices lie in different components")
    t0 = time.perf_counter()
    scores = temporal_pagerank_multi(graph, ctx)
    t1 = time.perf_counter()
    component, beta = _peel(graph, scores.values, ctx.queries)
    t2 = time.perf_counter()
    return CommunityResult(frozenset(component), beta, "egr",
                           {"score_s": t1 - t0, "search_s": t2 - t1}, scores)


def brute_force_search(graph: TemporalGraph, ctx: QueryContext) -> CommunityResult:
    """Enumerate every connected superset of the queries; return the maximal optimum.

    The union of all optimal sets is itself optimal (degrees only grow under
    union), so it is the unique maximal answer.  Exponential: refuses n > 12.
    """
    if graph.n > 12:
        raise TooLarge(f"brute force limited to 12 vertices, got {graph.n}")
    scores = temporal_pagerank_multi(graph, ctx)
    values = scores.values
    n = graph.n
    qmask = 0
    for q in ctx.queries:
        qmask |= 1 << q
    adj_mask = [0] * n
    for u in range(n):
        for v in graph.adj[u]:
            adj_mask[u] |= 1 << v

    def connected(mask: int) -> bool:
        start = (mask & -mask).bit_length() - 1
        seen = 1 << start
        frontier = [start]
        while frontier:
            u = frontier.pop()
            fresh = adj_mask[u] & mask & ~seen
            while fresh:
                v = (fresh & -fresh).bit_length() - 1
                seen |= 1 << v
                fresh &= fresh - 1
                frontier.append(v)
        return seen == mask

    best = -1.0
    union = 0
    for mask in range(1, 1 << n):
        if mask & qmask != qmask or not connected(mask):
            continue
        members = {u for u in range(n) if mask >> u & 1}
        mn = min_proximity_degree(values, graph, members)
        if mn > best:
            best = mn
            union = mask
        elif mn == best:
            union |= mask
    members = frozenset(u for u in range(n) if union >> u & 1)
    return CommunityResult(members, best, "brute", scores=scores)


def kcore_baseline(graph: TemporalGraph, ctx: QueryContext, k: int) -> CommunityResult:
    """Two-criteria baseline: connected k-core containing q, maximizing min score.

    Computes the maximal connected k-core around the query, then repeatedly
    drops the member of minimum proximity score (cascading the degree
    constraint and restricting back to the query's component) and keeps the
    best feasible snapshot seen.  The reported beta is that min score, not a
    proximity degree.  Heuristic peeling: the model separates structure from
    proximity, and no exact algorithm is claimed for it.
    """
    if len(ctx.queries) != 1:
        raise ValueError("kcore_baseline takes exactly one query vertex")
    if k < 0:
        raise ValueError("k must be non-negative")
    q = ctx.queries[0]
    t0 = time.perf_counter()
    scores = temporal_pagerank(graph, ctx)
    t1 = time.perf_counter()
    values = scores.values

    core = set(range(graph.n))
    if k > 0:
        deg = {u: len(graph.adj[u]) for u in core}
        queue = [u for u in core if deg[u] < k]
        while queue:
            u = queue.pop()
            if u not in core:
                continue
            core.discard(u)
            for v in graph.adj[u]:
                if v in core:
                    deg[v] -= 1
                    if deg[v] < k:
                        queue.append(v)
    if q not in core:
        raise NoCore(f"query vertex {graph.labels[q]!r} is not in any connected {k}-core")

    current = graph.connected_component(core, q)
    order = sorted(current, key=lambda u: (float(values[u]), u == q, u))
    ptr = 0
    best_set: frozenset[int] = frozenset(current)
    best_val = -1.0
    while True:
        val = min(float(values[u]) for u in current)
        if val > best_val:
            best_val = val
            best_set = frozenset(current)
        while order[ptr] not in current:
            ptr += 1
        u = order[ptr]
        if u == q:
            break
        current.discard(u)
        if k > 0:
            queue = [v for v in graph.adj[u] if v in current
                     and sum(1 for w in graph.adj[v] if w in current) < k]
            while queue:
                v = queue.pop()
                if v not in current:
                    continue
                current.discard(v)
                for w in graph.adj[v]:
                    if w in current and sum(1 for x in graph.adj[w] if x in current) < k:
                        queue.append(w)
        if q not in current:
            break
        current = graph.connected_component(current, q)
    t2 = time.perf_counter()
    return CommunityResult(best_set, best_val, "baseline",
                           {"score_s": t1 - t0, "search_s": t2 - t1}, scores)

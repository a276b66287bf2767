"""Approximate two-stage local search: bounded expansion, then certified reduction.

Stage one runs forward push over the ordered-edge state space outward from the
query, keeping a reserve (settled mass) and residue (pending mass) per state.
Per-vertex reserve sums are lower bounds on the proximity scores, and adding
the total residue gives upper bounds, which prune the expansion while
guaranteeing the expanded set still covers the exact community.  Stage two
peels the expanded set at a geometrically shrinking approximation level; every
level the query survives certifies that level as an approximation ratio.
"""
from __future__ import annotations

import heapq
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import NoQueryActivity, QueriesDisconnected, QueryNotInSet
from .graph import OrderedEdge, TemporalGraph
from .pagerank import QueryContext

# drift allowance for the expansion pruning comparisons: bound sums and the
# degree estimate are accumulated incrementally, so two quantities that are
# equal in real arithmetic can disagree by a few ulps; pruning decisions err
# on the keeping side by this margin so exact-community members never fall out
BOUND_SLACK = 1e-12


@dataclass
class PushState:
    """Forward-push bookkeeping over the 2m ordered-edge states.

    reserve[s] + residue[s] together always hold the full unit of start mass;
    lower[v] is the reserve summed over states arriving at v, a certified
    lower bound of v's proximity score.
    """

    reserve: np.ndarray
    residue: np.ndarray
    lower: np.ndarray
    residue_total: float
    alpha: float

    @classmethod
    def fresh(cls, graph: TemporalGraph, alpha: float) -> "PushState":
        return cls(np.zeros(2 * graph.m), np.zeros(2 * graph.m), np.zeros(graph.n),
                   0.0, alpha)


def _out_state_ids(graph: TemporalGraph, u: int) -> list[int]:
    return [2 * e + (0 if int(graph.edge_u[e]) == u else 1) for e in graph.inc_edges[u]]


def _propagate_id(state: PushState, sid: int, graph: TemporalGraph,
                  on_lower: Callable[[int, float], None] | None = None,
                  force: bool = False) -> None:
    """Push one state if its residue clears the 1/m gate.

    Non-dangling: keep alpha*r as reserve, spread (1-alpha)*r over successors.
    Dangling: absorb the full residue into the reserve; the self-loop stops
    alpha of the remaining mass forever, so in the limit everything settles
    here, and anything less would leak mass and break the degree bounds.
    ``force`` skips the gate: seed states of a multi-vertex query can start
    below 1/m and must still fire or no bounds ever accrue.
    """
    r = float(state.residue[sid])
    if r == 0.0 or (r < 1.0 / graph.m and not force):
        return
    e, rev = divmod(sid, 2)
    tail = int(graph.edge_u[e]) if rev else int(graph.edge_v[e])
    t = int(graph.edge_t[e])
    if graph.vertex_dangling(tail, t):
        state.reserve[sid] += r
        state.lower[tail] += r
        state.residue[sid] = 0.0
        state.residue_total -= r
        if state.residue_total < 0.0:
            state.residue_total = 0.0
        if on_lower is not None:
            on_lower(tail, r)
        return
    denom = graph.transitions.denominator(tail, t)
    spread = (1.0 - state.alpha) * r
    distributed = 0.0
    times = graph.inc_times[tail]
    edges = graph.inc_edges[tail]
    for i in range(len(times) - 1, -1, -1):
        tj = times[i]
        if tj <= t:
            break
        j = edges[i]
        share = spread / ((tj - t) * denom)
        state.residue[2 * j + (0 if int(graph.edge_u[j]) == tail else 1)] += share
        distributed += share
    settled = state.alpha * r
    state.reserve[sid] += settled
    state.lower[tail] += settled
    state.residue[sid] = 0.0
    state.residue_total += distributed - r
    if state.residue_total < 0.0:
        state.residue_total = 0.0  # cached total of non-negatives; kill drift
    if on_lower is not None:
        on_lower(tail, settled)


def propagate(state: PushState, e: OrderedEdge, graph: TemporalGraph) -> None:
    """Public single-state push; no-op when the residue sits below the 1/m gate."""
    _propagate_id(state, e.state_id, graph)


def drain(state: PushState, graph: TemporalGraph) -> None:
    """Settle all pending mass; afterwards the lower bounds are the exact scores.

    Walk continuations strictly increase the timestamp, so pushing states in
    time order empties every residue in a single pass.
    """
    order = sorted(range(2 * graph.m), key=lambda sid: int(graph.edge_t[sid // 2]))
    for sid in order:
        if state.residue[sid] != 0.0:
            _propagate_id(state, sid, graph, force=True)
    state.residue_total = 0.0


def degree_bounds(state: PushState, graph: TemporalGraph, subset, u: int) -> tuple[float, float]:
    """(lower, upper) bracket of u's proximity degree inside ``subset``."""
    space = subset if isinstance(subset, (set, frozenset)) else set(subset)
    lo = 0.0
    for v in graph.adj[u]:
        if v in space:
            lo += float(state.lower[v])
    return lo, lo + state.residue_total


def expand(graph: TemporalGraph, ctx: QueryContext,
           inspect: Callable[[PushState, list[int], set[int], float], None] | None = None,
           ) -> tuple[list[int], PushState]:
    """Grow a candidate set around the queries that provably covers the exact community.

    Seeds the queries' outgoing states with uniform residue and breadth-first
    pops vertices, pushing their out-states.  A neighbor enters the frontier
    only if its degree upper bound can still reach the best minimum-degree
    estimate seen so far; when the whole frontier falls below that estimate it
    is merged in and expansion stops.  ``inspect`` (tests) is called after
    every pop with the push state, expanded list, visited set, and estimate.
    """
    queries = ctx.queries
    for q in queries:
        if not graph.inc_times[q]:
            raise NoQueryActivity(graph.labels[q])
    if len(queries) > 1 and not graph.co_connected(range(graph.n), queries):
        raise QueriesDisconnected("query vertices lie in different components")

    state = PushState.fresh(graph, ctx.alpha)
    seed_states = [sid for q in queries for sid in _out_state_ids(graph, q)]
    seed = 1.0 / len(seed_states)
    for sid in seed_states:
        state.residue[sid] = seed
    state.residue_total = 1.0

    lower = state.lower
    expanded: list[int] = []
    in_expanded: set[int] = set()
    rho_hat: dict[int, float] = {}
    # entries go stale as estimates grow (they only grow), so the current
    # minimum is the first heap entry that still matches its vertex's value
    rho_heap: list[tuple[float, int]] = []
    queued: set[int] = set(queries)
    frontier_sum = 0.0

    def on_lower(vertex: int, delta: float) -> None:
        nonlocal frontier_sum
        if delta == 0.0:
            return
        if vertex in queued:
            frontier_sum += delta
        # only expanded vertices contribute to expanded degrees; bounds gained
        # by a vertex still outside are picked up when it joins
        if vertex not in in_expanded:
            return
        for w in graph.adj[vertex]:
            if w in in_expanded:
                rho_hat[w] += delta
                heapq.heappush(rho_heap, (rho_hat[w], w))

    beta_hat = 0.0
    query_set = set(queries)
    frontier: deque[int] = deque(queries)
    visited: set[int] = set(queries)
    while frontier:
        u = frontier.popleft()
        queued.discard(u)
        frontier_sum -= lower[u]
        in_expanded.add(u)
        expanded.append(u)
        val = 0.0
        for v in graph.adj[u]:
            if v in in_expanded:
                rho_hat[v] += lower[u]
                heapq.heappush(rho_heap, (rho_hat[v], v))
                val += lower[v]
        rho_hat[u] = val
        heapq.heappush(rho_heap, (val, u))
        is_query = u in query_set
        for sid in _out_state_ids(graph, u):
            _propagate_id(state, sid, graph, on_lower, force=is_query)
        while rho_heap[0][0] != rho_hat[rho_heap[0][1]]:
            heapq.heappop(rho_heap)
        current_min = rho_heap[0][0]
        if current_min > beta_hat:
            beta_hat = current_min
        for v in graph.adj[u]:
            if v in visited:
                continue
            visited.add(v)
            reach = state.residue_total
            for w in graph.adj[v]:
                reach += lower[w]
            if reach >= beta_hat - BOUND_SLACK:
                frontier.append(v)
                queued.add(v)
                frontier_sum += lower[v]
        if frontier:
            pending = state.residue_total + frontier_sum
            if pending < beta_hat - BOUND_SLACK:
                for w in frontier:
                    in_expanded.add(w)
                    expanded.append(w)
                frontier.clear()
                queued.clear()
                if inspect is not None:
                    inspect(state, expanded, visited, beta_hat)
                break
        if inspect is not None:
            inspect(state, expanded, visited, beta_hat)
    return expanded, state


@dataclass
class ApproxResult:
    """Community with a certified approximation ratio.

    beta_lower is the minimum lower-bound degree inside the returned
    community; the exact optimum is at most epsilon times it.  fallback marks
    answers where the query fell in the first reduction round and the
    unreduced expanded set was returned.
    """

    members: frozenset[int]
    epsilon: float
    beta_lower: float
    fallback: bool
    explored: frozenset[int]
    epsilon_trace: tuple[float, ...] = ()
    algorithm: str = "als"
    timings: dict[str, float] = field(default_factory=dict)

    def labels(self, graph: TemporalGraph) -> list[str]:
        return sorted(graph.labels[u] for u in self.members)


def _fresh_degrees(graph: TemporalGraph, lower: np.ndarray, members) -> dict[int, float]:
    space = members if isinstance(members, (set, frozenset)) else set(members)
    out: dict[int, float] = {}
    for u in sorted(space):
        total = 0.0
        for v in graph.adj[u]:
            if v in space:
                total += float(lower[v])
        out[u] = total
    return out


def reduce_stage(expanded: Sequence[int], state: PushState, graph: TemporalGraph,
                 ctx: QueryContext) -> ApproxResult:
    """Peel the expanded set down to a certified approximate community.

    temp upper-bounds the exact optimum.  Rounds run at level eps_bar,
    cascade-removing every vertex whose lower-bound degree cannot exceed
    temp/eps_bar; a survived round records eps_bar as the certified ratio and
    halves it (never below 1).  A round that would remove a query vertex, or
    split the query set, is discarded and the previous state returned.
    Zero-degree vertices can never survive any finite level, so they are
    cleared in one unrecorded preliminary round.
    """
    queries = ctx.queries
    qset = set(queries)
    q0 = queries[0]
    members = set(expanded)
    explored = frozenset(members)
    lower = state.lower
    for q in queries:
        if q not in members:
            raise QueryNotInSet(f"query vertex {graph.labels[q]!r} not in the expanded set")
    if len(members) == 1:
        return ApproxResult(frozenset(members), 1.0, 0.0, False, explored)

    rho = _fresh_degrees(graph, lower, members)
    temp = max(rho.values()) + state.residue_total
    multi = len(queries) > 1
    trace: list[float] = []
    recorded: float | None = None

    def finish(fallback_eps: float | None) -> ApproxResult:
        component = graph.connected_component(members, q0)
        fresh = _fresh_degrees(graph, lower, component)
        beta_lower = min(fresh.values())
        if fallback_eps is not None:
            eps = fallback_eps
            fallback = True
        else:
            eps = recorded
            fallback = False
        return ApproxResult(frozenset(component), eps, beta_lower, fallback,
                            explored, tuple(trace))

    def run_round(eps_bar: float | None) -> tuple[set[int], bool]:
        """Collect the round's removals; True in the second slot means a query fell.

        eps_bar None is the preliminary zero-degree level.  Degree decrements
        are applied live; a discarded round simply never reuses them.
        """
        def falls(x: int) -> bool:
            if eps_bar is None:
                return rho[x] <= 0.0
            return eps_bar * rho[x] <= temp

        doomed: set[int] = set()
        queue: deque[int] = deque()
        for u in sorted(members):
            if falls(u):
                if u in qset:
                    return doomed, True
                doomed.add(u)
                queue.append(u)
        while queue:
            u = queue.popleft()
            for v in graph.adj[u]:
                if v in members and v not in doomed:
                    rho[v] -= float(lower[u])
                    if falls(v):
                        if v in qset:
                            return doomed, True
                        doomed.add(v)
                        queue.append(v)
        return doomed, False

    # vertices with zero lower-bound degree cannot survive any finite level;
    # clear them in an unrecorded preliminary round
    while min(rho.values()) <= 0.0:
        doomed, query_fell = run_round(None)
        blocked = query_fell or (multi and not graph.co_connected(members - doomed,
                                                                  queries))
        if not blocked:
            members -= doomed
            for u in doomed:
                del rho[u]
            break
        if state.residue_total > 0.0:
            # the bounds may just be starved below the push gate: settle all
            # mass and retry the zero level with exact degrees
            drain(state, graph)
            rho = _fresh_degrees(graph, lower, members)
            temp = max(rho.values())
            continue
        # degrees are exact and the queries still cannot outlive the zero
        # level, so no community does better than 0; anything is 1-approximate
        component = graph.connected_component(members, q0)
        beta_lower = min(_fresh_degrees(graph, lower, component).values())
        return ApproxResult(frozenset(component), 1.0, beta_lower, True,
                            explored, ())

    eps_bar = temp / min(rho.values())
    first_level = eps_bar
    while True:
        doomed, query_fell = run_round(eps_bar)
        if query_fell:
            return finish(first_level if recorded is None else None)
        if multi and not graph.co_connected(members - doomed, queries):
            return finish(first_level if recorded is None else None)
        members -= doomed
        for u in doomed:
            del rho[u]
        recorded = eps_bar
        trace.append(eps_bar)
        eps_bar = max(eps_bar / 2.0, 1.0)


def local_search(graph: TemporalGraph, ctx: QueryContext) -> ApproxResult:
    """Expand then reduce; the exact optimum is at most epsilon * beta_lower."""
    if len(ctx.queries) != 1:
        raise ValueError("local_search takes exactly one query vertex")
    t0 = time.perf_counter()
    expanded, state = expand(graph, ctx)
    t1 = time.perf_counter()
    result = reduce_stage(expanded, state, graph, ctx)
    t2 = time.perf_counter()
    result.timings = {"score_s": t1 - t0, "search_s": t2 - t1}
    return result


def local_search_multi(graph: TemporalGraph, ctx: QueryContext) -> ApproxResult:
    """Multi-query variant; seeds the push over the union of query out-states."""
    t0 = time.perf_counter()
    expanded, state = expand(graph, ctx)
    t1 = time.perf_counter()
    result = reduce_stage(expanded, state, graph, ctx)
    t2 = time.perf_counter()
    result.timings = {"score_s": t1 - t0, "search_s": t2 - t1}
    return result

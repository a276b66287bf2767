"""Community quality metrics: temporal density, temporal conductance, min degree.

Degenerate denominators (singleton sets, no internal edges, empty cut) all map
to 0, the neutral reading of each formula.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .community import min_proximity_degree
from .graph import TemporalGraph


def _membership(graph: TemporalGraph, subset: Iterable[int]) -> np.ndarray:
    mask = np.zeros(graph.n, dtype=bool)
    for u in subset:
        mask[u] = True
    return mask


def temporal_density(graph: TemporalGraph, subset: Iterable[int]) -> float:
    """Average internal density per distinct internal timestamp, in [0, 1].

    2 * |internal temporal edges| / (|S| * (|S|-1) * |distinct internal times|);
    0 when |S| <= 1 or there are no internal edges.
    """
    mask = _membership(graph, subset)
    size = int(mask.sum())
    if size <= 1:
        return 0.0
    internal = mask[graph.edge_u] & mask[graph.edge_v]
    count = int(internal.sum())
    if count == 0:
        return 0.0
    distinct_times = len(np.unique(graph.edge_t[internal]))
    return 2.0 * count / (size * (size - 1) * distinct_times)


def temporal_conductance(graph: TemporalGraph, subset: Iterable[int]) -> float:
    """Temporal cut size over the smaller temporal volume, in [0, 1].

    Volumes count temporal-edge incidences, so a nonzero cut guarantees both
    volumes are nonzero; an empty cut scores 0.
    """
    mask = _membership(graph, subset)
    side_u = mask[graph.edge_u]
    side_v = mask[graph.edge_v]
    cut = int((side_u ^ side_v).sum())
    if cut == 0:
        return 0.0
    vol_s = int(side_u.sum()) + int(side_v.sum())
    vol_rest = 2 * graph.m - vol_s
    return cut / min(vol_s, vol_rest)


def internal_time_count(graph: TemporalGraph, subset: Iterable[int]) -> int:
    """Number of distinct timestamps on edges internal to the set."""
    mask = _membership(graph, subset)
    internal = mask[graph.edge_u] & mask[graph.edge_v]
    return len(np.unique(graph.edge_t[internal])) if internal.any() else 0


def min_degree_metric(scores, graph: TemporalGraph, subset: Iterable[int]) -> float:
    """Minimum proximity-weighted degree inside the set; 0 for singletons."""
    return min_proximity_degree(scores, graph, subset)


@dataclass
class MetricReport:
    td: float
    tc: float
    md: float
    size: int
    internal_times: int

    def to_dict(self) -> dict:
        return {"td": self.td, "tc": self.tc, "md": self.md,
                "size": self.size, "internal_times": self.internal_times}


def community_report(graph: TemporalGraph, scores, subset: Iterable[int]) -> MetricReport:
    members = set(subset)
    return MetricReport(
        td=temporal_density(graph, members),
        tc=temporal_conductance(graph, members),
        md=min_degree_metric(scores, graph, members),
        size=len(members),
        internal_times=internal_time_count(graph, members),
    )

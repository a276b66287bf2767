#!/usr/bin/env python3
"""Scaling experiment: score and search wall time on synthetic graphs.

Generates a family of synthetic temporal graphs whose edge count doubles per
step while the timestamp horizon (and so the per-vertex temporal occurrence)
stays fixed, then times the exact score pass and the full exact search over a
fixed batch of query vertices.  Near-linear growth shows up as per-doubling
ratios around 2.
"""
import argparse
import random
import time

from tpcore import QueryContext, exact_community, temporal_pagerank
from tpcore.synth import SynthConfig, synth_graph


def batch_time(graph, queries, fn, repeats):
    best = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        for q in queries:
            fn(graph, QueryContext.single(q))
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--base-n", type=int, default=1500)
    ap.add_argument("--doublings", type=int, default=2)
    ap.add_argument("--avg-deg", type=float, default=5.0)
    ap.add_argument("--tpe", type=int, default=2)
    ap.add_argument("--horizon", type=int, default=40)
    ap.add_argument("--queries", type=int, default=25)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=11)
    args = ap.parse_args()

    print(f"{'scale':>5} {'n':>7} {'m':>8} {'score_s':>9} {'search_s':>9}")
    rows = []
    for step in range(args.doublings + 1):
        n = args.base_n * (2 ** step)
        g = synth_graph(SynthConfig(n=n, avg_deg=args.avg_deg,
                                    timestamps_per_edge=args.tpe,
                                    horizon=args.horizon, seed=args.seed))
        queries = random.Random(args.seed + 1).sample(range(g.n), args.queries)
        t_score = batch_time(g, queries, temporal_pagerank, args.repeats)
        t_search = batch_time(g, queries, exact_community, args.repeats)
        rows.append((t_score, t_search))
        print(f"{2 ** step:>4}x {n:>7} {g.m:>8} {t_score:>9.3f} {t_search:>9.3f}")
    for i in range(1, len(rows)):
        print(f"doubling {i}: score ratio {rows[i][0] / rows[i-1][0]:.2f}, "
              f"search ratio {rows[i][1] / rows[i-1][1]:.2f}")


if __name__ == "__main__":
    main()

"""Benchmark structures, two-point weights, dataset and masked-record sampling."""

from hgrec import (
    build_meta_graph,
    mm_path_length_bound,
    sample_dataset,
    sample_mm_dataset,
    strategy_constants,
    uniform_single_mask,
)
from hgrec.generators import assign_weights, chain, frucht, star, wcgnm, x_graph

# The benchmark family: stars, X shapes, chains, connected random graphs, and
# the Frucht graph (used later for alignment).
for name, h in [
    ("STAR(6)", star(6)),
    ("X(9)", x_graph(9)),
    ("CHAIN(5)", chain(5)),
    ("WCGNM(10, p=0.2)", wcgnm(10, 0.2, seed=4)),
    ("FRUCHT", frucht()),
]:
    print(f"{name:18s} n={h.n:3d} m={h.m:3d}")

# Weights are drawn i.i.d. from {w_min, w_max} and normalized; the target
# range ratio kappa = w_max / w_min.
truth = assign_weights(star(6), w_min=1.0, w_max=10.0, seed=1)
print("\nSTAR(6) with kappa=10:")
for e, w in truth.edges.items():
    print(f"  {e.key}  {w:.4f}")
print("realized range ratio:", round(truth.range_ratio, 2))

# Sampling draws hyperedges i.i.d. proportionally to their weights.
data = sample_dataset(truth, 10_000, seed=7)
counts = data.counts()
print("\nempirical vs true weights at N=10^4:")
for e, w in truth.edges.items():
    print(f"  {e.key}  {counts.get(e, 0) / data.n:.4f}  vs  {w:.4f}")

# Masked-modeling records pair each draw with a masked variant: here one node
# hidden uniformly at random ('_' marks the hidden slot in the wire format).
strategy = uniform_single_mask()
mm = sample_mm_dataset(truth, n_outer=5, k_inner=2, strategy=strategy, seed=8)
print("\nmasked records (full -> visible):")
for full, masked in mm:
    shown = " ".join(list(masked.visible) + ["_"] * masked.masked_count)
    print(f"  {' '.join(full.nodes)}  ->  {shown}")

# Two hyperedges are related when they can produce the same masked form; the
# resulting meta-graph drives how relative weights propagate during recovery.
meta = build_meta_graph(truth, strategy)
print("\nmeta-graph path-length bound L:", mm_path_length_bound(meta))
for n in (4, 6, 8):
    from hgrec import normalize

    meta_chain = build_meta_graph(normalize(chain(n)), strategy)
    print(f"L for CHAIN({n}):", mm_path_length_bound(meta_chain))

c_pi, big_c_pi = strategy_constants(truth, strategy)
print("masking constants: min prob =", c_pi, " max support size =", big_c_pi)

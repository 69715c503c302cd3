"""Weighted hypergraphs: construction, normalization, dissimilarity, and the .hg format."""

from hgrec import (
    WeightedHypergraph,
    decode,
    dissimilarity,
    edge,
    encode,
    line_graph,
    normalize,
    relabel,
    sketch_diff,
    NodeRelabeling,
)

# A tiny world model: three relations with different strengths.
world = WeightedHypergraph(
    {
        edge("cup", "table"): 3.0,
        edge("book", "table"): 2.0,
        edge("cup", "book", "desk"): 1.0,  # hyperedges may join any number of entities
    }
)
print("raw world:", world)
print("range ratio (max/min weight):", world.range_ratio)

# Normalization turns weights into sampling probabilities.
world = normalize(world)
for e, w in world.edges.items():
    print(f"  {e.key:20s} {w:.4f}")

# The dissimilarity between two hypergraphs sums weight differences over the
# union of their edge sets; for normalized inputs it lives in [0, 2].
strong_cup = normalize(
    WeightedHypergraph(
        {edge("cup", "table"): 5.0, edge("book", "table"): 2.0, edge("cup", "book", "desk"): 1.0}
    )
)
print("\nd(world, strong_cup) =", round(dissimilarity(world, strong_cup), 4))

missing_edge = normalize(WeightedHypergraph({edge("cup", "table"): 1.0}))
print("d(world, single-edge) =", round(dissimilarity(world, missing_edge), 4))
missing, spurious = sketch_diff(world, missing_edge)
print("structure diff: missing", [e.key for e in missing], "spurious", [e.key for e in spurious])

# Relabeling applies a node bijection; dissimilarity to a relabeled copy is zero
# under the right mapping.
phi = NodeRelabeling({"cup": "tasse", "table": "tisch", "book": "buch", "desk": "pult"})
translated = relabel(world, phi)
print("\nafter relabeling:", [e.key for e in translated.edge_set])
print("d(relabel(world), translated) =", dissimilarity(relabel(world, phi), translated))

# The line graph connects hyperedges that share a node.
lg = line_graph(world)
print("\nline graph:", lg.n, "vertices,", lg.m, "edges")

# The .hg text format round-trips exactly.
text = encode(world)
print("\n.hg encoding:\n" + text, end="")
assert decode(text).edges == world.edges
print("round trip exact: True")

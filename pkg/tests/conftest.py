import random
from itertools import combinations

import pytest

from hgrec import Hyperedge, NodeRelabeling, WeightedHypergraph, normalize

# Relatedness fixture used across the kg-eval tests: extracting around "table"
# with k=2, d=2 selects {table, furniture, house, room} and exactly 4 edges.
KG_TSV = (
    "table\tfurniture\t0.9\n"
    "table\thouse\t0.8\n"
    "furniture\troom\t0.7\n"
    "house\troom\t0.6\n"
    "room\tplate\t0.5\n"
)

# Canned model answer: 3 of the 4 truth edges plus 2 spurious ones -> score 0.75.
KG_RESPONSE = (
    "Here is the edgelist:\n"
    "1. table - furniture\n"
    "2. (table, house)\n"
    "3. furniture - room\n"
    "4. table - room\n"
    "5. house - furniture\n"
    "Those are the most related pairs.\n"
)


def random_connected_graph(rng: random.Random, n: int, extra: int = 0) -> WeightedHypergraph:
    """Random connected 2-uniform hypergraph with integer weights, normalized."""
    nodes = [str(i) for i in range(n)]
    edges = set()
    order = nodes[:]
    rng.shuffle(order)
    for a, b in zip(order, order[1:]):
        edges.add(Hyperedge((a, b)))
    pool = [Hyperedge(p) for p in combinations(nodes, 2)]
    rng.shuffle(pool)
    for e in pool:
        if len(edges) >= n - 1 + extra:
            break
        edges.add(e)
    return normalize(WeightedHypergraph({e: float(rng.randint(1, 9)) for e in edges}))


def random_relabeling(rng: random.Random, h: WeightedHypergraph, prefix: str = "y") -> NodeRelabeling:
    targets = [f"{prefix}{i}" for i in range(h.n)]
    rng.shuffle(targets)
    return NodeRelabeling(dict(zip(h.nodes, targets)))


@pytest.fixture
def kg_file(tmp_path):
    path = tmp_path / "kg.tsv"
    path.write_text(KG_TSV, encoding="utf-8")
    return path

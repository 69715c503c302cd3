import math
import random

import pytest
from hypothesis import given, strategies as st

from hgrec import (
    Hyperedge,
    NodeRelabeling,
    WeightedHypergraph,
    decode,
    dissimilarity,
    edge,
    encode,
    line_graph,
    normalize,
    relabel,
    sketch_diff,
)
from hgrec.errors import (
    DuplicateEdge,
    EmptyHypergraph,
    IncompleteMapping,
    NotABijection,
    ParseError,
)
from hgrec.generators import chain, star
from conftest import random_connected_graph, random_relabeling


def wh(pairs, normalized=False):
    return WeightedHypergraph({edge(*tokens): w for tokens, w in pairs}, normalized=normalized)


# -- hyperedge basics ----------------------------------------------------------

def test_hyperedge_canonicalizes():
    e = Hyperedge(["b", "a", "b"])
    assert e.nodes == ("a", "b")
    assert e.key == "a+b"
    assert Hyperedge.from_key("a+b") == e


def test_hyperedge_too_small():
    with pytest.raises(ValueError):
        Hyperedge(["a"])
    with pytest.raises(ValueError):
        Hyperedge(["a", "a"])


@pytest.mark.parametrize("token", ["", "a b", "a\tb", "x+y", "p|q", "_"])
def test_bad_tokens_rejected(token):
    with pytest.raises(ValueError):
        Hyperedge([token, "ok"])


def test_hyperedge_ordering_is_lexicographic():
    assert edge("a", "b") < edge("a", "c") < edge("b", "c")


# -- normalize ------------------------------------------------------------------

def test_normalize_single_edge():
    h = normalize(wh([(("a", "b"), 5.0)]))
    assert h.weight(edge("a", "b")) == 1.0
    assert h.normalized


def test_normalize_proportional():
    h = normalize(wh([(("a", "b"), 1.0), (("a", "c"), 3.0)]))
    assert h.weight(edge("a", "b")) == pytest.approx(0.25, abs=1e-15)
    assert h.weight(edge("a", "c")) == pytest.approx(0.75, abs=1e-15)


def test_normalize_idempotent():
    h = normalize(wh([(("a", "b"), 1.0), (("a", "c"), 3.0), (("b", "c"), 7.0)]))
    again = normalize(h)
    assert again.edges == h.edges  # identical floats, not merely close


def test_normalize_empty():
    with pytest.raises(EmptyHypergraph):
        normalize(WeightedHypergraph({}))


# -- dissimilarity ----------------------------------------------------------------

def test_dissimilarity_identity():
    h = normalize(wh([(("a", "b"), 2.0), (("b", "c"), 3.0)]))
    assert dissimilarity(h, h) == 0.0


def test_dissimilarity_disjoint_normalized():
    h1 = wh([(("a", "b"), 1.0)], normalized=True)
    h2 = wh([(("c", "d"), 1.0)], normalized=True)
    assert dissimilarity(h1, h2) == 2.0


def test_dissimilarity_direct_sum():
    h1 = wh([(("a", "b"), 1.0)], normalized=True)
    h2 = wh([(("a", "b"), 0.4), (("a", "c"), 0.6)], normalized=True)
    assert dissimilarity(h1, h2) == pytest.approx(1.2, abs=1e-15)


@st.composite
def hypergraphs(draw):
    nodes = [f"n{i}" for i in range(draw(st.integers(3, 6)))]
    k = draw(st.integers(1, 6))
    pool = []
    for _ in range(k):
        size = draw(st.integers(2, min(3, len(nodes))))
        pool.append(tuple(draw(st.permutations(nodes))[:size]))
    weights = draw(
        st.lists(st.floats(0.01, 100, allow_nan=False), min_size=len(pool), max_size=len(pool))
    )
    table = {}
    for tokens, w in zip(pool, weights):
        table[Hyperedge(tokens)] = w
    return WeightedHypergraph(table)


@given(hypergraphs(), hypergraphs(), hypergraphs())
def test_dissimilarity_is_a_metric(h1, h2, h3):
    d12 = dissimilarity(h1, h2)
    assert d12 >= 0.0
    assert d12 == dissimilarity(h2, h1)
    # zero iff equal weight functions
    assert (d12 == 0.0) == (h1.edges == h2.edges)
    assert d12 <= dissimilarity(h1, h3) + dissimilarity(h3, h2) + 1e-12


@given(hypergraphs())
def test_normalized_dissimilarity_in_range(h):
    hn = normalize(h)
    assert 0.0 <= dissimilarity(hn, hn) <= 2.0


def test_range_ratio():
    assert wh([(("a", "b"), 2.0), (("b", "c"), 2.0)]).range_ratio == 1.0
    assert wh([(("a", "b"), 1.0), (("b", "c"), 4.0)]).range_ratio == 4.0


# -- relabel ----------------------------------------------------------------------

def test_relabel_identity():
    h = normalize(star(6))
    assert relabel(h, NodeRelabeling.identity(h.nodes)) == h


def test_relabel_round_trip():
    h = normalize(star(6))
    phi = NodeRelabeling({"0": "0", "1": "2", "2": "1", "3": "3", "4": "4", "5": "5"})
    assert relabel(relabel(h, phi), phi.inverse()) == h


def test_relabel_not_a_bijection():
    with pytest.raises(NotABijection):
        NodeRelabeling({"a": "x", "b": "x"})


def test_relabel_incomplete():
    h = normalize(star(4))
    with pytest.raises(IncompleteMapping):
        relabel(h, NodeRelabeling({"0": "a", "1": "b"}))


def test_relabel_preserves_dissimilarity():
    rng = random.Random(3)
    for _ in range(20):
        h1 = random_connected_graph(rng, 6, extra=2)
        h2 = random_connected_graph(rng, 6, extra=1)
        nodes = sorted(set(h1.nodes) | set(h2.nodes))
        targets = [f"z{i}" for i in range(len(nodes))]
        rng.shuffle(targets)
        phi = NodeRelabeling(dict(zip(nodes, targets)))
        assert dissimilarity(relabel(h1, phi), relabel(h2, phi)) == pytest.approx(
            dissimilarity(h1, h2), abs=1e-12
        )


# -- line graph --------------------------------------------------------------------

def test_line_graph_shared_node():
    g = line_graph(wh([(("0", "1"), 1.0), (("0", "2"), 1.0)]))
    assert g.m == 1 and g.has_edge("0+1", "0+2")


def test_line_graph_disjoint():
    g = line_graph(wh([(("0", "1"), 1.0), (("2", "3"), 1.0)]))
    assert g.m == 0


def test_line_graph_chain4_is_path():
    g = line_graph(normalize(chain(4)))
    assert g.n == 3 and g.m == 2
    assert g.has_edge("0+1", "1+2") and g.has_edge("1+2", "2+3")
    assert not g.has_edge("0+1", "2+3")


# -- sketch diff ---------------------------------------------------------------------

def test_sketch_diff():
    a, b, c = edge("a", "b"), edge("b", "c"), edge("c", "d")
    h = lambda *es: WeightedHypergraph({e: 1.0 for e in es})
    assert sketch_diff(h(a, b), h(a, b)) == ((), ())
    assert sketch_diff(h(a), h(b)) == ((a,), (b,))
    assert sketch_diff(h(a, b), h(b, c)) == ((a,), (c,))


# -- .hg format ------------------------------------------------------------------------

def test_round_trip_star_kappa10():
    from hgrec.generators import assign_weights

    h = assign_weights(star(6), 1.0, 10.0, seed=1)
    back = decode(encode(h))
    assert back.normalized == h.normalized
    assert back.edges == h.edges  # exact float equality through 17 sig digits


def test_decode_missing_weight():
    with pytest.raises(ParseError):
        decode("#hg v1\nedge 0 1\n")


def test_decode_duplicate_edge():
    with pytest.raises(DuplicateEdge):
        decode("#hg v1\nedge a b 1.0\nedge b a 2.0\n")


def test_decode_requires_header():
    with pytest.raises(ParseError):
        decode("edge a b 1.0\n")


def test_decode_reports_line_numbers():
    with pytest.raises(ParseError) as err:
        decode("#hg v1\n# fine\nedge a b nope\n")
    assert err.value.line_number == 3


def test_normalized_flag_after_edges_rejected():
    with pytest.raises(ParseError):
        decode("#hg v1\nedge a b 1.0\n#normalized\n")


@given(hypergraphs())
def test_round_trip_random(h):
    back = decode(encode(h))
    assert back.edge_set == h.edge_set
    assert all(back.weight(e) == h.weight(e) for e in h.edge_set)


def test_equality_tolerance():
    h1 = wh([(("a", "b"), 0.5)])
    h2 = wh([(("a", "b"), 0.5 + 5e-13)])
    h3 = wh([(("a", "b"), 0.5 + 5e-11)])
    assert h1 == h2
    assert h1 != h3


def test_duplicate_edge_in_constructor():
    with pytest.raises(DuplicateEdge):
        WeightedHypergraph([(edge("a", "b"), 1.0), (edge("b", "a"), 2.0)])


@pytest.mark.parametrize("w", [0.0, -1.0, math.inf, math.nan])
def test_bad_weights_rejected(w):
    with pytest.raises(ValueError):
        wh([(("a", "b"), w)])

"""Hypergraph estimation: plug-in counts from datasets and two-phase recovery from oracles.

The oracle path first keeps every candidate hyperedge the oracle assigns
positive belief to under at least one of its masked forms (checked over the
whole support, deterministically), then propagates relative weights outward
from a seed edge per share-a-mask component via breadth-first search, and
finally normalizes globally.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping

from .core import (
    Hyperedge,
    NodeRelabeling,
    WeightedHypergraph,
    dissimilarity,
    relabel,
    sketch_diff,
)
from .errors import EmptyDataset, NothingRecovered, UndefinedRatio
from .sampling import Dataset, MaskedHyperedge, MaskingStrategy

#: Candidate-set sentinel: enumerate all 2-subsets of the oracle's known nodes.
ALL_PAIRS = "all-pairs"

RATIO_AGGREGATIONS = ("first", "geometric_mean")


def recover_from_dataset(d: Dataset) -> WeightedHypergraph:
    """Empirical-frequency estimate: distinct samples weighted by their share."""
    if d.n == 0:
        raise EmptyDataset("cannot recover from an empty dataset")
    counts = d.counts()
    n = d.n
    return WeightedHypergraph({e: c / n for e, c in counts.items()}, normalized=True)


def _expand_candidates(oracle, candidates) -> tuple[Hyperedge, ...]:
    if isinstance(candidates, str):
        if candidates != ALL_PAIRS:
            raise ValueError(f"unknown candidate set {candidates!r}")
        nodes = oracle.known_nodes()
        return tuple(Hyperedge(pair) for pair in combinations(nodes, 2))
    expanded = tuple(sorted(set(candidates)))
    if not expanded:
        raise NothingRecovered("empty candidate set")
    return expanded


def _positive_belief(query_cache, oracle, form: MaskedHyperedge, e: Hyperedge) -> float:
    dist = query_cache.get(form, _MISSING)
    if dist is _MISSING:
        dist = oracle.query(form)
        query_cache[form] = dist
    if dist is None:
        return 0.0
    return dist.get(e, 0.0)


_MISSING = object()


def bf_weight_estimation(
    e_init: Hyperedge,
    kept_edges: Iterable[Hyperedge],
    oracle,
    strategy: MaskingStrategy,
    w_tilde: dict[Hyperedge, float],
    *,
    ratio_aggregation: str = "first",
    _query_cache: dict | None = None,
) -> dict[Hyperedge, float]:
    """Propagate relative weights from ``e_init`` over the share-a-mask relation.

    Each edge is assigned on its first visit. When two edges share several
    masked forms, ``"first"`` uses the canonically smallest form with positive
    belief on both sides; ``"geometric_mean"`` averages log-ratios over all
    such forms. Pairs whose shared forms all lack belief on one side cannot
    carry a ratio; if that leaves some share-a-mask-reachable edge unassigned,
    :class:`UndefinedRatio` is raised.
    """
    if ratio_aggregation not in RATIO_AGGREGATIONS:
        raise ValueError(f"ratio_aggregation must be one of {RATIO_AGGREGATIONS}")
    if w_tilde.get(e_init, 0.0) != 1.0:
        raise ValueError("w_tilde[e_init] must be 1.0 before propagation")
    edges = sorted(set(kept_edges))
    cache = _query_cache if _query_cache is not None else {}

    by_form: dict[MaskedHyperedge, list[Hyperedge]] = {}
    for e in edges:
        for form, _ in strategy.support(e):
            by_form.setdefault(form, []).append(e)
    neighbors: dict[Hyperedge, set[Hyperedge]] = {e: set() for e in edges}
    shared: dict[tuple[Hyperedge, Hyperedge], list[MaskedHyperedge]] = {}
    for form, owners in by_form.items():
        for a, b in combinations(owners, 2):
            key = (a, b) if a < b else (b, a)
            shared.setdefault(key, []).append(form)
            neighbors[a].add(b)
            neighbors[b].add(a)

    queue = [e_init]
    head = 0
    while head < len(queue):
        e = queue[head]
        head += 1
        for nb in sorted(neighbors[e]):
            if w_tilde.get(nb, 0.0) > 0.0:
                continue
            key = (e, nb) if e < nb else (nb, e)
            ratios = []
            for form in sorted(shared[key]):
                m_e = _positive_belief(cache, oracle, form, e)
                m_nb = _positive_belief(cache, oracle, form, nb)
                if m_e > 0.0 and m_nb > 0.0:
                    ratio = (strategy.prob(form, e) * m_nb) / (strategy.prob(form, nb) * m_e)
                    if ratio_aggregation == "first":
                        ratios = [ratio]
                        break
                    ratios.append(ratio)
            if not ratios:
                continue  # uncarryable pair; another path may still reach nb
            if len(ratios) == 1:
                step = ratios[0]
            else:
                step = math.exp(sum(math.log(r) for r in ratios) / len(ratios))
            w_tilde[nb] = step * w_tilde[e]
            queue.append(nb)

    reachable = {e_init}
    frontier = [e_init]
    while frontier:
        nxt = []
        for e in frontier:
            for nb in neighbors[e]:
                if nb not in reachable:
                    reachable.add(nb)
                    nxt.append(nb)
        frontier = nxt
    stranded = sorted(e for e in reachable if w_tilde.get(e, 0.0) <= 0.0)
    if stranded:
        raise UndefinedRatio(
            f"{stranded[0].key} shares masked forms with reached edges but none carries "
            "positive belief on both sides"
        )
    return w_tilde


def recover_from_oracle(
    oracle,
    candidates,
    strategy: MaskingStrategy,
    *,
    ratio_aggregation: str = "first",
) -> tuple[WeightedHypergraph, bool]:
    """Two-phase estimation from a masked-modeling oracle.

    Phase 1 keeps each candidate with positive belief under some masked form in
    its support. Phase 2 runs breadth-first relative-weight propagation per
    share-a-mask component (seeded at the component's smallest edge with scale
    1) and normalizes globally. Returns the estimate and whether the kept
    edges formed a single component.
    """
    cand = _expand_candidates(oracle, candidates)
    cache: dict = {}
    kept = [
        e
        for e in cand
        if any(
            _positive_belief(cache, oracle, form, e) > 0.0
            for form, _ in strategy.support(e)
        )
    ]
    if not kept:
        raise NothingRecovered("no candidate hyperedge has positive belief under the oracle")

    by_form: dict[MaskedHyperedge, list[Hyperedge]] = {}
    for e in kept:
        for form, _ in strategy.support(e):
            by_form.setdefault(form, []).append(e)
    neighbors: dict[Hyperedge, set[Hyperedge]] = {e: set() for e in kept}
    for owners in by_form.values():
        for a, b in combinations(owners, 2):
            neighbors[a].add(b)
            neighbors[b].add(a)

    seen: set[Hyperedge] = set()
    components: list[list[Hyperedge]] = []
    for start in kept:
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for u in neighbors[v]:
                if u not in comp:
                    comp.add(u)
                    stack.append(u)
        seen |= comp
        components.append(sorted(comp))

    w_tilde: dict[Hyperedge, float] = {e: 0.0 for e in kept}
    for comp in components:
        seed = comp[0]
        w_tilde[seed] = 1.0
        bf_weight_estimation(
            seed,
            comp,
            oracle,
            strategy,
            w_tilde,
            ratio_aggregation=ratio_aggregation,
            _query_cache=cache,
        )
    total = sum(w_tilde.values())
    recovered = WeightedHypergraph(
        {e: w / total for e, w in w_tilde.items()}, normalized=True
    )
    return recovered, len(components) == 1


@dataclass(frozen=True)
class RecoveryReport:
    """Weighted error plus the unweighted sketch difference against the truth."""

    weighted_error: float
    sketch_missing: tuple[Hyperedge, ...]
    sketch_spurious: tuple[Hyperedge, ...]
    per_edge_abs_error: Mapping[Hyperedge, float]
    meta_connected: bool

    def to_json(self) -> str:
        doc = {
            "d": self.weighted_error,
            "sketch_missing": [e.key for e in self.sketch_missing],
            "sketch_spurious": [e.key for e in self.sketch_spurious],
            "meta_connected": self.meta_connected,
            "per_edge_abs_error": {
                e.key: err for e, err in sorted(self.per_edge_abs_error.items())
            },
        }
        return json.dumps(doc, indent=2) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8", newline="\n")


def recovery_report(
    recovered: WeightedHypergraph,
    truth: WeightedHypergraph,
    relabeling: NodeRelabeling | None = None,
    *,
    meta_connected: bool = True,
) -> RecoveryReport:
    """Compare an estimate against the truth, optionally after relabeling it."""
    mapped = relabel(recovered, relabeling) if relabeling is not None else recovered
    missing, spurious = sketch_diff(truth, mapped)
    per_edge = {
        e: abs(truth.weight(e) - mapped.weight(e))
        for e in sorted(set(truth.edge_set) | set(mapped.edge_set))
    }
    return RecoveryReport(
        weighted_error=dissimilarity(mapped, truth),
        sketch_missing=missing,
        sketch_spurious=spurious,
        per_edge_abs_error=per_edge,
        meta_connected=meta_connected,
    )

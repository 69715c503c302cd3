"""Masked-modeling oracles: the count-ratio minimizer and the exact population belief.

Both oracle kinds expose ``query(masked) -> {completion: probability} | None``
(``None`` signals an unseen / unsupported masked form) and ``known_nodes()``.
"""

from __future__ import annotations

import json
from collections import Counter
from pathlib import Path

from .core import Hyperedge, WeightedHypergraph
from .errors import NotNormalized, NotShared, UndefinedRatio
from .sampling import MaskedHyperedge, MaskingStrategy, MMDataset


class TabularOracle:
    """The cross-entropy minimizer over an expressive model class: plain count ratios.

    ``counts[masked][full]`` is the number of records pairing that masked form
    with that completion; queries normalize per masked form at lookup time.
    """

    def __init__(self, counts: dict[MaskedHyperedge, dict[Hyperedge, int]] | None = None):
        table: dict[MaskedHyperedge, dict[Hyperedge, int]] = {}
        for masked, per_edge in (counts or {}).items():
            checked: dict[Hyperedge, int] = {}
            for e, c in per_edge.items():
                if c <= 0:
                    raise ValueError(f"counts must be positive, got {c} for {e.key}")
                if not masked.is_mask_of(e):
                    raise ValueError(f"{masked.key!r} is not a masked form of {e.key!r}")
                checked[e] = int(c)
            if checked:
                table[masked] = {e: checked[e] for e in sorted(checked)}
        self._counts = {m: table[m] for m in sorted(table)}

    @property
    def counts(self) -> dict[MaskedHyperedge, dict[Hyperedge, int]]:
        return {m: dict(per) for m, per in self._counts.items()}

    def query(self, masked: MaskedHyperedge) -> dict[Hyperedge, float] | None:
        per = self._counts.get(masked)
        if not per:
            return None
        total = sum(per.values())
        return {e: c / total for e, c in per.items()}

    def known_nodes(self) -> tuple[str, ...]:
        seen: set[str] = set()
        for masked, per in self._counts.items():
            seen.update(masked.visible)
            for e in per:
                seen.update(e.nodes)
        return tuple(sorted(seen))

    def to_json(self) -> str:
        doc = {
            "format": "hgrec-oracle-v1",
            "counts": {
                m.key: {e.key: c for e, c in per.items()} for m, per in self._counts.items()
            },
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "TabularOracle":
        doc = json.loads(text)
        if doc.get("format") != "hgrec-oracle-v1":
            raise ValueError(f"unknown oracle format {doc.get('format')!r}")
        counts = {
            MaskedHyperedge.from_key(mk): {
                Hyperedge.from_key(ek): int(c) for ek, c in per.items()
            }
            for mk, per in doc["counts"].items()
        }
        return cls(counts)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8", newline="\n")

    @classmethod
    def load(cls, path: str | Path) -> "TabularOracle":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))

    def __repr__(self) -> str:
        return f"TabularOracle({len(self._counts)} masked forms)"


def train_tabular(data: MMDataset) -> TabularOracle:
    """Accumulate (masked form, completion) counts; empty datasets are allowed."""
    counts: dict[MaskedHyperedge, dict[Hyperedge, int]] = {}
    for (full, masked), c in Counter(data.records).items():
        counts.setdefault(masked, {})[full] = c
    return TabularOracle(counts)


class ExactOracle:
    """The population belief: completion probability proportional to weight x mask probability."""

    def __init__(self, hypergraph: WeightedHypergraph, strategy: MaskingStrategy):
        if not hypergraph.normalized:
            raise NotNormalized("ExactOracle requires a normalized hypergraph")
        self.hypergraph = hypergraph
        self.strategy = strategy
        support_map: dict[MaskedHyperedge, list[tuple[Hyperedge, float]]] = {}
        for e in hypergraph.edge_set:
            for form, p in strategy.support(e):
                support_map.setdefault(form, []).append((e, p))
        self._support_map = {m: sorted(v) for m, v in support_map.items()}

    def query(self, masked: MaskedHyperedge) -> dict[Hyperedge, float] | None:
        entries = self._support_map.get(masked)
        if not entries:
            return None
        raw = {e: self.hypergraph.weight(e) * p for e, p in entries}
        total = sum(raw.values())
        return {e: v / total for e, v in raw.items()}

    def known_nodes(self) -> tuple[str, ...]:
        return self.hypergraph.nodes

    def __repr__(self) -> str:
        return f"ExactOracle({self.hypergraph!r})"


def relative_weight(
    oracle,
    e1: Hyperedge,
    e2: Hyperedge,
    masked: MaskedHyperedge,
    strategy: MaskingStrategy,
) -> float:
    """Estimated weight ratio w(e1)/w(e2) read off a shared masked form.

    The belief ratio is corrected for the masking probabilities:
    ``M(e1|m) pi(m|e2) / (M(e2|m) pi(m|e1))``.
    """
    p1 = strategy.prob(masked, e1)
    p2 = strategy.prob(masked, e2)
    if p1 <= 0.0 or p2 <= 0.0:
        raise NotShared(f"{masked.key!r} is not a shared masked form of both edges")
    dist = oracle.query(masked)
    m2 = 0.0 if dist is None else dist.get(e2, 0.0)
    if m2 <= 0.0:
        raise UndefinedRatio(f"oracle assigns zero belief to {e2.key!r} given {masked.key!r}")
    m1 = 0.0 if dist is None else dist.get(e1, 0.0)
    return (m1 * p2) / (m2 * p1)

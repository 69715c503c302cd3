"""Hyperedge datasets, masking strategies, masked-modeling data, and the share-a-mask meta-graph.

RNG streams (see :mod:`hgrec.rng`): ``sample_dataset`` uses tag
``"sample-dataset"``; ``sample_mm_dataset`` uses ``"mm-outer"`` for the outer
hyperedge draws and ``"mm-mask"`` for the per-record mask choices.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Mapping

import numpy as np

from .core import Hyperedge, WeightedHypergraph, check_token
from .errors import EmptyHypergraph, NotNormalized, ParseError
from .rng import AliasSampler, rng_stream

PROB_TOL = 1e-12


class MaskedHyperedge:
    """A hyperedge with some nodes hidden: the visible node set plus a mask count."""

    __slots__ = ("visible", "masked_count")

    def __init__(self, visible: Iterable[str], masked_count: int):
        tokens = tuple(sorted({check_token(t) for t in visible}))
        count = int(masked_count)
        if count < 1:
            raise ValueError(f"masked_count must be >= 1, got {masked_count}")
        self.visible = tokens
        self.masked_count = count

    @property
    def key(self) -> str:
        """Canonical text key: visible tokens joined by '+', then '|' and the count."""
        return "+".join(self.visible) + "|" + str(self.masked_count)

    @classmethod
    def from_key(cls, key: str) -> "MaskedHyperedge":
        visible_part, _, count_part = key.rpartition("|")
        tokens = visible_part.split("+") if visible_part else ()
        return cls(tokens, int(count_part))

    def is_mask_of(self, e: Hyperedge) -> bool:
        """True when this form can be obtained from ``e`` by hiding nodes."""
        return (
            len(e) == len(self.visible) + self.masked_count
            and set(self.visible) <= set(e.nodes)
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MaskedHyperedge)
            and self.visible == other.visible
            and self.masked_count == other.masked_count
        )

    def __lt__(self, other: "MaskedHyperedge") -> bool:
        return (self.visible, self.masked_count) < (other.visible, other.masked_count)

    def __hash__(self) -> int:
        return hash((self.visible, self.masked_count))

    def __repr__(self) -> str:
        return f"MaskedHyperedge({self.key!r})"


class MaskingStrategy(ABC):
    """A conditional distribution over masked forms of each hyperedge."""

    kind: str

    @abstractmethod
    def support(self, e: Hyperedge) -> tuple[tuple[MaskedHyperedge, float], ...]:
        """All (masked form, probability) pairs for ``e``, in canonical form order."""

    def prob(self, masked: MaskedHyperedge, e: Hyperedge) -> float:
        """Probability of producing ``masked`` from ``e`` (0 outside the support)."""
        for form, p in self.support(e):
            if form == masked:
                return p
        return 0.0


class UniformSingleMask(MaskingStrategy):
    """Hide exactly one node of the hyperedge, chosen uniformly."""

    kind = "uniform1"

    def __init__(self):
        self._cache: dict[Hyperedge, tuple[tuple[MaskedHyperedge, float], ...]] = {}

    def support(self, e: Hyperedge) -> tuple[tuple[MaskedHyperedge, float], ...]:
        cached = self._cache.get(e)
        if cached is None:
            k = len(e)
            forms = [
                MaskedHyperedge((u for u in e if u != v), 1) for v in e
            ]
            cached = tuple(sorted((f, 1.0 / k) for f in forms))
            self._cache[e] = cached
        return cached


def uniform_single_mask() -> UniformSingleMask:
    return UniformSingleMask()


MASKING_KINDS = {"uniform1": uniform_single_mask}


def make_masking_strategy(kind: str) -> MaskingStrategy:
    try:
        return MASKING_KINDS[kind]()
    except KeyError:
        raise ValueError(f"unknown masking kind {kind!r}; expected one of {sorted(MASKING_KINDS)}") from None


# -- datasets -------------------------------------------------------------------


@dataclass(frozen=True)
class Dataset:
    """An i.i.d. sequence of hyperedge samples."""

    samples: tuple[Hyperedge, ...]

    @property
    def n(self) -> int:
        return len(self.samples)

    def counts(self) -> dict[Hyperedge, int]:
        return dict(Counter(self.samples))

    def __iter__(self) -> Iterator[Hyperedge]:
        return iter(self.samples)

    def __len__(self) -> int:
        return len(self.samples)

    def encode(self) -> str:
        return "".join(" ".join(e.nodes) + "\n" for e in self.samples)

    @classmethod
    def decode(cls, text: str) -> "Dataset":
        samples = []
        for num, line in enumerate(text.split("\n"), start=1):
            if not line.strip():
                continue
            try:
                samples.append(Hyperedge(line.split()))
            except ValueError as exc:
                raise ParseError(num, str(exc)) from None
        return cls(tuple(samples))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.encode(), encoding="utf-8", newline="\n")

    @classmethod
    def load(cls, path: str | Path) -> "Dataset":
        return cls.decode(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class MMDataset:
    """Masked-modeling records: N outer hyperedge draws x K masked variants each."""

    records: tuple[tuple[Hyperedge, MaskedHyperedge], ...]
    n_outer: int
    k_inner: int

    def __post_init__(self):
        if len(self.records) != self.n_outer * self.k_inner:
            raise ValueError(
                f"expected {self.n_outer}x{self.k_inner} records, got {len(self.records)}"
            )

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def outer_dataset(self) -> Dataset:
        """The N outer hyperedge draws, one per group of K records."""
        k = self.k_inner
        return Dataset(tuple(self.records[t * k][0] for t in range(self.n_outer)))

    def encode(self) -> str:
        lines = []
        for full, masked in self.records:
            shown = list(masked.visible) + ["_"] * masked.masked_count
            lines.append(" ".join(full.nodes) + "\t" + " ".join(shown) + "\n")
        return "".join(lines)

    @classmethod
    def decode(cls, text: str, n_outer: int | None = None, k_inner: int | None = None) -> "MMDataset":
        """Parse .mm lines; without N and K the records are treated as N groups of K=1."""
        records = []
        for num, line in enumerate(text.split("\n"), start=1):
            if not line.strip():
                continue
            left, sep, right = line.partition("\t")
            if not sep:
                raise ParseError(num, "expected '<full>\\t<masked>'")
            try:
                full = Hyperedge(left.split())
            except ValueError as exc:
                raise ParseError(num, str(exc)) from None
            tokens = right.split()
            count = sum(1 for t in tokens if t == "_")
            if count < 1:
                raise ParseError(num, "masked side needs at least one '_' slot")
            try:
                masked = MaskedHyperedge((t for t in tokens if t != "_"), count)
            except ValueError as exc:
                raise ParseError(num, str(exc)) from None
            if not masked.is_mask_of(full):
                raise ParseError(num, f"{masked.key!r} is not a masked form of {full.key!r}")
            records.append((full, masked))
        if n_outer is None:
            n_outer, k_inner = len(records), 1
        return cls(tuple(records), n_outer, k_inner)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.encode(), encoding="utf-8", newline="\n")

    @classmethod
    def load(cls, path: str | Path, n_outer: int | None = None, k_inner: int | None = None) -> "MMDataset":
        return cls.decode(Path(path).read_text(encoding="utf-8"), n_outer, k_inner)


def sample_dataset(h: WeightedHypergraph, n_samples: int, seed: int) -> Dataset:
    """Draw ``n_samples`` hyperedges i.i.d. with probabilities given by the weights."""
    if not h.normalized:
        raise NotNormalized("sample_dataset requires a normalized hypergraph")
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    edges = h.edge_set
    sampler = AliasSampler([h.weight(e) for e in edges])
    idx = sampler.draw(rng_stream(seed, "sample-dataset"), n_samples)
    return Dataset(tuple(edges[i] for i in idx))


def sample_mm_dataset(
    h: WeightedHypergraph,
    n_outer: int,
    k_inner: int,
    strategy: MaskingStrategy,
    seed: int,
) -> MMDataset:
    """Draw N outer hyperedges, then K masked variants of each, all independently."""
    if not h.normalized:
        raise NotNormalized("sample_mm_dataset requires a normalized hypergraph")
    if n_outer < 1 or k_inner < 1:
        raise ValueError(f"n_outer and k_inner must be >= 1, got ({n_outer}, {k_inner})")
    edges = h.edge_set
    sampler = AliasSampler([h.weight(e) for e in edges])
    outer = sampler.draw(rng_stream(seed, "mm-outer"), n_outer)
    u = rng_stream(seed, "mm-mask").random((n_outer, k_inner))

    records: list = [None] * (n_outer * k_inner)
    for ei in np.unique(outer):
        e = edges[ei]
        support = strategy.support(e)
        forms = [f for f, _ in support]
        cdf = np.cumsum([p for _, p in support])
        rows = np.nonzero(outer == ei)[0]
        picks = np.searchsorted(cdf, u[rows], side="right")
        picks = np.minimum(picks, len(forms) - 1)
        for r, t in enumerate(rows):
            base = t * k_inner
            for k in range(k_inner):
                records[base + k] = (e, forms[picks[r, k]])
    return MMDataset(tuple(records), n_outer, k_inner)


# -- the share-a-mask relation over hyperedges -----------------------------------


@dataclass(frozen=True)
class MetaGraph:
    """Hyperedges as vertices; two are adjacent when they share a masked form."""

    vertices: tuple[Hyperedge, ...]
    adjacency: Mapping[Hyperedge, tuple[Hyperedge, ...]]
    shared_forms: Mapping[tuple[Hyperedge, Hyperedge], tuple[MaskedHyperedge, ...]]

    def shared(self, e1: Hyperedge, e2: Hyperedge) -> tuple[MaskedHyperedge, ...]:
        """Masked forms producible from both edges (canonically sorted)."""
        key = (e1, e2) if e1 < e2 else (e2, e1)
        return self.shared_forms.get(key, ())

    def components(self) -> tuple[tuple[Hyperedge, ...], ...]:
        """Connected components, each sorted, ordered by smallest member."""
        seen: set[Hyperedge] = set()
        comps = []
        for start in self.vertices:
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                v = stack.pop()
                for u in self.adjacency[v]:
                    if u not in comp:
                        comp.add(u)
                        stack.append(u)
            seen |= comp
            comps.append(tuple(sorted(comp)))
        return tuple(comps)


def build_meta_graph(h: WeightedHypergraph, strategy: MaskingStrategy) -> MetaGraph:
    """Compute the share-a-mask adjacency over the hyperedges of ``h``."""
    by_form: dict[MaskedHyperedge, list[Hyperedge]] = {}
    for e in h.edge_set:
        for form, _ in strategy.support(e):
            by_form.setdefault(form, []).append(e)

    shared: dict[tuple[Hyperedge, Hyperedge], set[MaskedHyperedge]] = {}
    for form, owners in by_form.items():
        for i in range(len(owners)):
            for j in range(i + 1, len(owners)):
                a, b = owners[i], owners[j]
                key = (a, b) if a < b else (b, a)
                shared.setdefault(key, set()).add(form)

    neighbors: dict[Hyperedge, set[Hyperedge]] = {e: set() for e in h.edge_set}
    for a, b in shared:
        neighbors[a].add(b)
        neighbors[b].add(a)

    return MetaGraph(
        vertices=h.edge_set,
        adjacency={e: tuple(sorted(nb)) for e, nb in neighbors.items()},
        shared_forms={k: tuple(sorted(v)) for k, v in sorted(shared.items())},
    )


def mm_path_length_bound(mg: MetaGraph) -> int | None:
    """Longest shortest path counted in hyperedges (endpoints included).

    Returns ``None`` when the meta-graph is disconnected; a single hyperedge
    gives 1 and direct neighbors give 2.
    """
    if not mg.vertices:
        raise EmptyHypergraph("meta-graph has no vertices")
    n = len(mg.vertices)
    diameter = 0
    for start in mg.vertices:
        dist = {start: 0}
        frontier = [start]
        while frontier:
            nxt = []
            for v in frontier:
                for u in mg.adjacency[v]:
                    if u not in dist:
                        dist[u] = dist[v] + 1
                        nxt.append(u)
            frontier = nxt
        if len(dist) < n:
            return None
        diameter = max(diameter, max(dist.values()))
    return diameter + 1


def strategy_constants(h: WeightedHypergraph, strategy: MaskingStrategy) -> tuple[float, int]:
    """(smallest support probability, largest support size) over the edges of ``h``."""
    if h.m == 0:
        raise EmptyHypergraph("no edges")
    c_pi = np.inf
    c_support = 0
    for e in h.edge_set:
        support = strategy.support(e)
        c_support = max(c_support, len(support))
        c_pi = min(c_pi, min(p for _, p in support))
    return float(c_pi), c_support

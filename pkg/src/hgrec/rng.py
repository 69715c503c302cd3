"""Reproducible random streams and fast categorical sampling.

Stream-splitting rule: every random operation draws from
``PCG64(SHA-256(seed || tag || indices))``, where ``seed`` is the user-facing
64-bit seed, ``tag`` names the purpose (e.g. ``"sample-dataset"``), and
``indices`` disambiguate repeated uses. Distinct tags or indices give
independent streams; identical triples give bit-identical draws on every
platform.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(seed: int, tag: str, *indices: int) -> int:
    """Derive a 128-bit child seed from (seed, tag, indices) via SHA-256."""
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    h = hashlib.sha256()
    h.update(seed.to_bytes(8, "little"))
    h.update(tag.encode("utf-8"))
    for idx in indices:
        h.update(b"/")
        h.update(int(idx).to_bytes(8, "little", signed=True))
    return int.from_bytes(h.digest()[:16], "little")


def rng_stream(seed: int, tag: str, *indices: int) -> np.random.Generator:
    """A generator on the stream named by (seed, tag, indices)."""
    return np.random.Generator(np.random.PCG64(derive_seed(seed, tag, *indices)))


class AliasSampler:
    """Walker alias table (Vose's construction) for O(1) categorical draws."""

    def __init__(self, probs):
        p = np.asarray(probs, dtype=np.float64)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("probs must be a nonempty 1-d array")
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise ValueError("probs must be finite and nonnegative")
        total = p.sum()
        if total <= 0:
            raise ValueError("probs must have positive total mass")
        k = p.size
        scaled = p * (k / total)
        accept = np.ones(k)
        alias = np.arange(k)
        small = [i for i in range(k) if scaled[i] < 1.0]
        large = [i for i in range(k) if scaled[i] >= 1.0]
        while small and large:
            s = small.pop()
            l = large.pop()
            accept[s] = scaled[s]
            alias[s] = l
            scaled[l] -= 1.0 - scaled[s]
            (small if scaled[l] < 1.0 else large).append(l)
        # leftovers are 1.0 up to rounding; they keep accept=1 (self-aliased)
        self.accept = accept
        self.alias = alias
        self.k = k

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw ``size`` category indices using the given generator."""
        idx = rng.integers(0, self.k, size=size)
        keep = rng.random(size) < self.accept[idx]
        return np.where(keep, idx, self.alias[idx])

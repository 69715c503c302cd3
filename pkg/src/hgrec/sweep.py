"""Recovery-error sweeps over structures, dataset sizes, and seeds.

Config schema (JSON)::

    {
      "instances": [{"structure": "star", "n": 6, "p": null,
                     "w_min": 1.0, "w_max": 10.0}, ...],
      "n_grid":    [100, 1000, 10000],
      "k_grid":    [1],
      "num_seeds": 5,
      "masking":   "uniform1"
    }

Each cell (instance, N, K, seed) generates the truth, draws a masked-modeling
dataset, trains the count-ratio oracle, recovers along both routes (plug-in on
the same N outer draws, and the two-phase oracle path), and reports both
errors. Cell randomness is derived from the SHA-256 hash of the canonical
config text, so replaying a config reproduces every row; the ``runtime_ms``
column is the one wall-clock field and is excluded from reproducibility
guarantees. Failed cells keep their row with the error name in ``status``.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import HgrecError, InvalidForLogFit
from .generators import GeneratorSpec
from .oracle import train_tabular
from .recovery import ALL_PAIRS, recover_from_oracle, recovery_report
from .recovery import recover_from_dataset
from .rng import derive_seed
from .sampling import (
    build_meta_graph,
    make_masking_strategy,
    mm_path_length_bound,
    sample_mm_dataset,
    strategy_constants,
)

CSV_COLUMNS = (
    "structure",
    "n",
    "m",
    "kappa_target",
    "kappa_realized",
    "L",
    "c_pi",
    "C_pi",
    "N",
    "K",
    "seed",
    "d_plugin",
    "d_oracle",
    "sketch_missing",
    "sketch_spurious",
    "meta_connected",
    "status",
    "runtime_ms",
)


@dataclass(frozen=True)
class InstanceSpec:
    structure: str
    n: int = 0
    p: float | None = None
    w_min: float = 1.0
    w_max: float = 1.0


@dataclass(frozen=True)
class SweepConfig:
    instances: tuple[InstanceSpec, ...]
    n_grid: tuple[int, ...]
    k_grid: tuple[int, ...]
    num_seeds: int
    masking: str = "uniform1"

    def __post_init__(self):
        if not self.instances or not self.n_grid or not self.k_grid:
            raise ValueError("instances, n_grid, and k_grid must be nonempty")
        if self.num_seeds < 1:
            raise ValueError(f"num_seeds must be >= 1, got {self.num_seeds}")

    def to_dict(self) -> dict:
        return {
            "instances": [asdict(i) for i in self.instances],
            "n_grid": list(self.n_grid),
            "k_grid": list(self.k_grid),
            "num_seeds": self.num_seeds,
            "masking": self.masking,
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> "SweepConfig":
        return cls(
            instances=tuple(InstanceSpec(**i) for i in doc["instances"]),
            n_grid=tuple(int(x) for x in doc["n_grid"]),
            k_grid=tuple(int(x) for x in doc["k_grid"]),
            num_seeds=int(doc["num_seeds"]),
            masking=doc.get("masking", "uniform1"),
        )

    @classmethod
    def from_json(cls, text: str) -> "SweepConfig":
        return cls.from_dict(json.loads(text))

    @classmethod
    def load(cls, path: str | Path) -> "SweepConfig":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))

    def master_seed(self) -> int:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return int.from_bytes(hashlib.sha256(canonical.encode()).digest()[:8], "little")

    def cells(self) -> list[tuple[int, int, int, int]]:
        """(instance_idx, n_idx, k_idx, seed_idx) in deterministic row order."""
        return [
            (i, ni, ki, si)
            for i in range(len(self.instances))
            for ni in range(len(self.n_grid))
            for ki in range(len(self.k_grid))
            for si in range(self.num_seeds)
        ]


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _run_cell(cfg_doc: dict, cell: tuple[int, int, int, int]) -> dict:
    cfg = SweepConfig.from_dict(cfg_doc)
    inst_idx, n_idx, k_idx, seed_idx = cell
    inst = cfg.instances[inst_idx]
    n_samples = cfg.n_grid[n_idx]
    k_inner = cfg.k_grid[k_idx]
    master = cfg.master_seed()
    mask64 = (1 << 64) - 1

    row = {c: "" for c in CSV_COLUMNS}
    row.update(
        structure=inst.structure,
        n=inst.n,
        kappa_target=_fmt(inst.w_max / inst.w_min),
        N=n_samples,
        K=k_inner,
        seed=seed_idx,
        status="ok",
    )
    start = time.perf_counter()
    try:
        weight_seed = derive_seed(master & mask64, "sweep-weights", inst_idx, seed_idx) & mask64
        truth = GeneratorSpec(
            structure=inst.structure,
            n=inst.n,
            p=inst.p,
            w_min=inst.w_min,
            w_max=inst.w_max,
            seed=weight_seed,
        ).build()
        strategy = make_masking_strategy(cfg.masking)
        c_pi, big_c_pi = strategy_constants(truth, strategy)
        meta = build_meta_graph(truth, strategy)
        length_bound = mm_path_length_bound(meta)
        row.update(
            m=truth.m,
            kappa_realized=_fmt(truth.range_ratio),
            L="" if length_bound is None else length_bound,
            c_pi=_fmt(c_pi),
            C_pi=big_c_pi,
        )

        mm_seed = derive_seed(master & mask64, "sweep-mm", inst_idx, n_idx, k_idx, seed_idx) & mask64
        mm = sample_mm_dataset(truth, n_samples, k_inner, strategy, mm_seed)

        plugin = recover_from_dataset(mm.outer_dataset())
        row["d_plugin"] = _fmt(recovery_report(plugin, truth).weighted_error)

        oracle = train_tabular(mm)
        recovered, connected = recover_from_oracle(oracle, ALL_PAIRS, strategy)
        report = recovery_report(recovered, truth, meta_connected=connected)
        row.update(
            d_oracle=_fmt(report.weighted_error),
            sketch_missing=len(report.sketch_missing),
            sketch_spurious=len(report.sketch_spurious),
            meta_connected=_fmt(connected),
        )
    except (HgrecError, ValueError) as exc:
        row["status"] = type(exc).__name__
    row["runtime_ms"] = int(round((time.perf_counter() - start) * 1000))
    return row


def run_sweep(cfg: SweepConfig, jobs: int = 1) -> list[dict]:
    """All cell rows in deterministic order; ``jobs > 1`` runs cells in parallel."""
    doc = cfg.to_dict()
    cells = cfg.cells()
    if jobs <= 1:
        return [_run_cell(doc, cell) for cell in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_cell, [doc] * len(cells), cells))


def rows_to_csv(rows: Iterable[Mapping]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({c: row.get(c, "") for c in CSV_COLUMNS})
    return buf.getvalue()


def save_csv(rows: Iterable[Mapping], path: str | Path) -> None:
    Path(path).write_text(rows_to_csv(rows), encoding="utf-8", newline="\n")


def load_csv(path: str | Path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def fit_scaling(rows: Iterable[Mapping], x_field: str, y_field: str) -> tuple[float, float]:
    """Least-squares slope and intercept of log(mean y per x) against log(x).

    Rows with a non-"ok" status or an empty y value are skipped; the remaining
    y values are averaged per distinct x before fitting.
    """
    groups: dict[float, list[float]] = {}
    for row in rows:
        status = row.get("status", "ok")
        if status not in ("", "ok"):
            continue
        y_raw = row.get(y_field, "")
        if y_raw == "" or y_raw is None:
            continue
        x = float(row[x_field])
        groups.setdefault(x, []).append(float(y_raw))
    if len(groups) < 3:
        raise InvalidForLogFit(f"need >= 3 distinct {x_field} values, got {len(groups)}")
    xs = np.array(sorted(groups))
    ys = np.array([np.mean(groups[x]) for x in xs])
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise InvalidForLogFit("log-log fit requires positive x and y values")
    slope, intercept = np.polyfit(np.log(xs), np.log(ys), 1)
    return float(slope), float(intercept)

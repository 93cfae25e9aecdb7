"""Per-category analogy evaluation of the three relationship representations.

For one category the translation vector is fit on all of its pairs, the
orthogonal and linear maps are fit to one random sample, and each map is
scored by how often the nearest neighbour of the mapped source word (the
source itself excluded) is the target word. The same pairs are used for
fitting and scoring; there is no held-out split.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .corpus import WordPairSet
from .embeddings import EmbeddingTable
from .transforms import (
    KINDS,
    SolverConfig,
    build_fit_sample,
    fit_linear,
    fit_orthogonal,
    fit_translation,
)

EXCLUSION_POLICY = "source-only"
DEFAULT_GRID = (10, 50, 100, 250, 500, 1000, 2000)
DEFAULT_SEEDS = (0, 1, 2)


@dataclass(frozen=True)
class PairOutcome:
    source: str
    target: str
    predicted: str
    cosine: float

    @property
    def correct(self) -> bool:
        return self.predicted == self.target


@dataclass(frozen=True)
class KindMetrics:
    accuracy: float
    mean_cosine: float
    correct: int = 0
    outcomes: tuple[PairOutcome, ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class CategoryReport:
    category: str
    pair_count: int
    oov_dropped: int
    metrics: dict[str, KindMetrics]
    min_singular_value: float | None = None


@dataclass(frozen=True)
class EvaluationResult:
    reports: tuple[CategoryReport, ...]
    averages: dict[str, tuple[float, float]]

    @property
    def kinds(self) -> tuple[str, ...]:
        return tuple(self.averages)


@dataclass(frozen=True)
class SweepPoint:
    n: int
    metrics: dict[str, tuple[float, float]]
    seed_count: int


def _check_kinds(kinds: Iterable[str]) -> tuple[str, ...]:
    kinds = tuple(kinds)
    bad = [k for k in kinds if k not in KINDS]
    if bad or not kinds:
        raise ValueError(f"unknown transform kinds {bad}; choose from {KINDS}")
    return kinds


def _score(table: EmbeddingTable, pairs: WordPairSet, mapped: np.ndarray) -> KindMetrics:
    src_rows = [table.row(s) for s, _ in pairs]
    targets = np.array([table.vector(t) for _, t in pairs])
    best, _ = table.nearest_batch(mapped, [[r] for r in src_rows])
    cosines = np.sum(mapped * targets, axis=1) / (
        np.linalg.norm(mapped, axis=1) * np.linalg.norm(targets, axis=1)
    )
    outcomes = tuple(
        PairOutcome(s, t, table.words[i], float(c)) for (s, t), i, c in zip(pairs, best, cosines)
    )
    correct = sum(o.correct for o in outcomes)
    return KindMetrics(correct / len(outcomes), float(np.mean(cosines)), correct, outcomes)


def evaluate_category(
    pairs: WordPairSet,
    table: EmbeddingTable,
    config: SolverConfig = SolverConfig(),
    kinds: Iterable[str] = KINDS,
) -> CategoryReport:
    kinds = _check_kinds(kinds)
    b = fit_translation(pairs, table)
    sources = np.array([table.vector(s) for s, _ in pairs])
    mapped: dict[str, np.ndarray] = {}
    min_sv = None
    if "orthogonal" in kinds or "linear" in kinds:
        sample = build_fit_sample(table, b, config)
        if "orthogonal" in kinds:
            mapped["orthogonal"] = sources @ fit_orthogonal(sample).r.T
        if "linear" in kinds:
            linear = fit_linear(sample)
            mapped["linear"] = sources @ linear.a.T
            min_sv = linear.min_singular_value
    if "translative" in kinds:
        mapped["translative"] = sources + b.b
    metrics = {k: _score(table, pairs, mapped[k]) for k in kinds}
    return CategoryReport(pairs.category, len(pairs), pairs.oov_dropped, metrics, min_sv)


def average(reports: Sequence[CategoryReport], kinds: Sequence[str]) -> dict[str, tuple[float, float]]:
    """Unweighted mean over categories of accuracy and mean cosine."""
    return {
        k: (
            float(np.mean([r.metrics[k].accuracy for r in reports])),
            float(np.mean([r.metrics[k].mean_cosine for r in reports])),
        )
        for k in kinds
    }


def evaluate_all(
    categories: Sequence[WordPairSet],
    table: EmbeddingTable,
    config: SolverConfig = SolverConfig(),
    kinds: Iterable[str] = KINDS,
    threads: int = 1,
) -> EvaluationResult:
    kinds = _check_kinds(kinds)
    if not categories:
        raise ValueError("no categories to evaluate")
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        reports = tuple(pool.map(lambda p: evaluate_category(p, table, config, kinds), categories))
    return EvaluationResult(reports, average(reports, kinds))


def sweep_n(
    categories: Sequence[WordPairSet],
    table: EmbeddingTable,
    grid: Sequence[int] = DEFAULT_GRID,
    seeds: Sequence[int] = DEFAULT_SEEDS,
    kinds: Iterable[str] = KINDS,
    cosmul_epsilon: float = 1e-3,
    threads: int = 1,
) -> list[SweepPoint]:
    """Category-averaged metrics for each sample size in ``grid``, averaged over seeds.

    The translative representation ignores the sample, so it is evaluated
    once and repeated at every grid point.
    """
    kinds = _check_kinds(kinds)
    grid = list(grid)
    if not grid or grid != sorted(grid):
        raise ValueError("grid must be non-empty and ascending")
    if not seeds:
        raise ValueError("at least one seed is required")
    if grid[-1] > len(table):
        raise ValueError(f"grid value {grid[-1]} exceeds vocabulary size {len(table)}")
    fitted = [k for k in kinds if k != "translative"]
    fixed = {}
    if "translative" in kinds:
        fixed = evaluate_all(categories, table, SolverConfig(grid[0], seeds[0], cosmul_epsilon),
                             ["translative"], threads).averages

    points = []
    for n in grid:
        per_seed = []
        if fitted:
            for seed in seeds:
                cfg = SolverConfig(n, seed, cosmul_epsilon)
                per_seed.append(evaluate_all(categories, table, cfg, fitted, threads).averages)
        metrics = {}
        for k in kinds:
            if k == "translative":
                metrics[k] = fixed[k]
            else:
                metrics[k] = (
                    float(np.mean([s[k][0] for s in per_seed])),
                    float(np.mean([s[k][1] for s in per_seed])),
                )
        points.append(SweepPoint(n, metrics, len(seeds)))
    return points

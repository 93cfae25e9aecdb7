"""Translative, orthogonal and linear representations of a word relationship.

A relationship is summarised by its mean translation vector ``b``. The
orthogonal and linear maps are then fit in closed form to a synthetic
sample: ``n`` vocabulary vectors as the columns of ``X`` and the same
vectors shifted by ``b`` as ``Y``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import ClassVar, Union

import numpy as np

from . import numerics
from .corpus import WordPairSet
from .embeddings import EmbeddingTable, NeighborResult
from .errors import DimensionMismatch, EmptyPairSet, NotPositiveDefinite

log = logging.getLogger(__name__)

KINDS = ("orthogonal", "linear", "translative")
ORTHO_TOL = 1e-6


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=np.float64)
    out.flags.writeable = False
    return out


def _check_vector(t, v) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.shape[-1] != t.dim:
        raise DimensionMismatch(f"vector of dim {v.shape[-1]} applied to {t.kind} transform of dim {t.dim}")
    return v


@dataclass(frozen=True, eq=False)
class TranslationVector:
    """x -> x + b"""

    b: np.ndarray
    kind: ClassVar[str] = "translative"

    def __post_init__(self):
        b = _frozen(self.b)
        if b.ndim != 1 or not np.isfinite(b).all():
            raise ValueError("translation vector must be a finite 1-D array")
        object.__setattr__(self, "b", b)

    @property
    def dim(self) -> int:
        return self.b.shape[0]

    @property
    def coefficients(self) -> np.ndarray:
        return self.b

    def apply(self, v) -> np.ndarray:
        return _check_vector(self, v) + self.b


@dataclass(frozen=True, eq=False)
class OrthogonalTransform:
    """x -> R x with R^T R = I (rotations and reflections)."""

    r: np.ndarray
    seed: int | None = None
    n: int | None = None
    kind: ClassVar[str] = "orthogonal"

    def __post_init__(self):
        r = _frozen(self.r)
        if r.ndim != 2 or r.shape[0] != r.shape[1]:
            raise ValueError(f"orthogonal matrix must be square, got {r.shape}")
        dev = np.abs(r.T @ r - np.eye(r.shape[0])).max()
        if not dev <= ORTHO_TOL:
            raise ValueError(f"matrix is not orthogonal (max |R^T R - I| = {dev:.3g})")
        object.__setattr__(self, "r", r)

    @property
    def dim(self) -> int:
        return self.r.shape[0]

    @property
    def coefficients(self) -> np.ndarray:
        return self.r

    def apply(self, v) -> np.ndarray:
        return self.r @ _check_vector(self, v)


@dataclass(frozen=True, eq=False)
class LinearTransform:
    """x -> A x for a general square A.

    ``min_singular_value`` reports how close A is to singular; invertibility
    is not enforced because the least-squares fit does not guarantee it.
    """

    a: np.ndarray
    seed: int | None = None
    n: int | None = None
    kind: ClassVar[str] = "linear"

    def __post_init__(self):
        a = _frozen(self.a)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or not np.isfinite(a).all():
            raise ValueError(f"linear map must be a finite square matrix, got {a.shape}")
        object.__setattr__(self, "a", a)

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    @property
    def coefficients(self) -> np.ndarray:
        return self.a

    @property
    def min_singular_value(self) -> float:
        return float(numerics.svd(self.a).singular_values[-1])

    def apply(self, v) -> np.ndarray:
        return self.a @ _check_vector(self, v)


RelationshipTransform = Union[TranslationVector, OrthogonalTransform, LinearTransform]


def apply(t: RelationshipTransform, v) -> np.ndarray:
    return t.apply(v)


@dataclass(frozen=True)
class SolverConfig:
    n: int = 2000
    seed: int = 0
    cosmul_epsilon: float = 1e-3

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not self.cosmul_epsilon > 0:
            raise ValueError("cosmul_epsilon must be > 0")


@dataclass(frozen=True, eq=False)
class FitSample:
    """Sampled source columns ``x`` (d x n) and their shifted copies ``y``."""

    x: np.ndarray
    y: np.ndarray
    tokens: tuple[str, ...]
    seed: int

    @property
    def n(self) -> int:
        return self.x.shape[1]

    @property
    def dim(self) -> int:
        return self.x.shape[0]


def fit_translation(pairs: WordPairSet, table: EmbeddingTable) -> TranslationVector:
    """Mean of target-minus-source difference vectors over all pairs."""
    if not len(pairs):
        raise EmptyPairSet(f"{pairs.category}: cannot fit a translation from zero pairs")
    total = np.zeros(table.dim)
    for src, tgt in pairs:
        total += table.vector(tgt) - table.vector(src)
    return TranslationVector(total / len(pairs))


def build_fit_sample(table: EmbeddingTable, b: TranslationVector, config: SolverConfig) -> FitSample:
    """Draw ``config.n`` distinct tokens uniformly and stack X and Y = X + b."""
    if config.n > len(table):
        raise ValueError(f"sample size n={config.n} exceeds vocabulary size {len(table)}")
    if b.dim != table.dim:
        raise DimensionMismatch(f"translation dim {b.dim} vs table dim {table.dim}")
    rng = np.random.default_rng(config.seed)
    rows = rng.choice(len(table), size=config.n, replace=False)
    x = table.vectors[rows].T.copy()
    y = x + b.b[:, None]
    x.flags.writeable = False
    y.flags.writeable = False
    return FitSample(x, y, tuple(table.words[i] for i in rows), config.seed)


def fit_orthogonal(sample: FitSample) -> OrthogonalTransform:
    """Orthogonal Procrustes: R = U V^T from the SVD of Y X^T."""
    m = numerics.matmul(sample.y, sample.x.T)
    u, _, vt = numerics.svd(m)
    return OrthogonalTransform(numerics.matmul(u, vt), seed=sample.seed, n=sample.n)


def fit_linear(sample: FitSample) -> LinearTransform:
    """Least-squares map A = Y X^T (X X^T)^-1, solved without explicit inversion.

    Since X X^T is symmetric, A^T solves (X X^T) A^T = X Y^T. Falls back to a
    truncated-SVD pseudo-inverse when X X^T is rank deficient.
    """
    gram = numerics.matmul(sample.x, sample.x.T)
    rhs = numerics.matmul(sample.x, sample.y.T)
    try:
        a_t = numerics.solve_pd(gram, rhs)
    except NotPositiveDefinite:
        log.warning("X X^T is rank deficient (n=%d, d=%d); using pseudo-inverse", sample.n, sample.dim)
        a_t = numerics.pinv_solve(gram, rhs)
    return LinearTransform(a_t.T, seed=sample.seed, n=sample.n)


def fit(kind: str, pairs: WordPairSet, table: EmbeddingTable, config: SolverConfig) -> RelationshipTransform:
    b = fit_translation(pairs, table)
    if kind == "translative":
        return b
    sample = build_fit_sample(table, b, config)
    if kind == "orthogonal":
        return fit_orthogonal(sample)
    if kind == "linear":
        return fit_linear(sample)
    raise ValueError(f"unknown transform kind {kind!r}")


def residual(t: RelationshipTransform, sample: FitSample) -> float:
    """Frobenius norm of t(X) - Y over the sample columns."""
    if t.kind == "translative":
        mapped = sample.x + t.b[:, None]
    else:
        mapped = t.coefficients @ sample.x
    return float(np.linalg.norm(mapped - sample.y))


# analogy baselines


def rank_3cosadd(table: EmbeddingTable, a: str, b: str, x: str, k: int = 1) -> list[NeighborResult]:
    query = table.vector(x) + table.vector(b) - table.vector(a)
    return table.nearest(query, exclude={a, b, x}, k=k)


def solve_3cosadd(table: EmbeddingTable, a: str, b: str, x: str) -> NeighborResult:
    """Answer ``a : b :: x : ?`` by the nearest neighbour of x + b - a."""
    return rank_3cosadd(table, a, b, x)[0]


def cosmul_scores(table: EmbeddingTable, a: str, b: str, x: str, epsilon: float = 1e-3) -> np.ndarray:
    """Multiplicative objective for every vocabulary row.

    Cosines are mapped to [0, 1] via (cos + 1) / 2 before combining, so the
    denominator stays positive.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be > 0")

    def shifted(token):
        v = table.vector(token)
        return (table.vectors @ (v / np.linalg.norm(v)) / table.norms + 1.0) / 2.0

    return shifted(x) * shifted(b) / (shifted(a) + epsilon)


def rank_3cosmul(
    table: EmbeddingTable, a: str, b: str, x: str, epsilon: float = 1e-3, k: int = 1
) -> list[NeighborResult]:
    scores = cosmul_scores(table, a, b, x, epsilon)
    return table._rank(scores, {a, b, x}, k)


def solve_3cosmul(table: EmbeddingTable, a: str, b: str, x: str, epsilon: float = 1e-3) -> NeighborResult:
    """Answer ``a : b :: x : ?`` by maximising the 3CosMul quotient.

    The returned ``similarity`` field carries the objective value, not a cosine.
    """
    return rank_3cosmul(table, a, b, x, epsilon)[0]

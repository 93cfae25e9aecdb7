"""Pre-trained embedding tables and exhaustive cosine nearest-neighbour search."""

from __future__ import annotations

import hashlib
import logging
import os
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatch, EmbeddingFormatError, OutOfVocabulary

log = logging.getLogger(__name__)

FORMATS = ("glove-text", "fasttext-vec")

# Queries scored per block in batched search; bounds the |block| x |vocab| buffer.
_QUERY_BLOCK = 32


class NeighborResult(NamedTuple):
    token: str
    similarity: float


@dataclass(frozen=True, eq=False)
class EmbeddingTable:
    """Vocabulary-indexed matrix of word vectors (one row per token).

    Vectors are kept unnormalized; row norms are precomputed for cosine
    scoring. Token lookup is exact string equality.
    """

    words: tuple[str, ...]
    vectors: np.ndarray
    source: str = "<memory>"
    digest: str = ""
    malformed: int = 0
    duplicates: int = 0
    zero_rejected: int = 0
    index: dict[str, int] = field(init=False, repr=False)
    norms: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        vectors = np.array(self.vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[0] != len(self.words) or vectors.shape[0] == 0:
            raise EmbeddingFormatError(
                f"vectors shape {vectors.shape} does not match {len(self.words)} words"
            )
        if not np.isfinite(vectors).all():
            raise EmbeddingFormatError("embedding table contains non-finite values")
        index = {}
        for i, w in enumerate(self.words):
            if w in index:
                raise EmbeddingFormatError(f"duplicate token {w!r}")
            index[w] = i
        norms = np.linalg.norm(vectors, axis=1)
        if (norms == 0).any():
            raise EmbeddingFormatError("embedding table contains zero vectors")
        vectors.flags.writeable = False
        norms.flags.writeable = False
        object.__setattr__(self, "words", tuple(self.words))
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "norms", norms)

    @classmethod
    def from_dict(cls, mapping: dict[str, Sequence[float]], **kwargs) -> "EmbeddingTable":
        words = list(mapping)
        return cls(tuple(words), np.array([mapping[w] for w in words], dtype=np.float64), **kwargs)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def row(self, token: str) -> int:
        try:
            return self.index[token]
        except KeyError:
            raise OutOfVocabulary(token) from None

    def vector(self, token: str) -> np.ndarray:
        return self.vectors[self.row(token)]

    def cosine(self, query: np.ndarray, token: str) -> float:
        return cosine(query, self.vector(token))

    def _scores(self, query: np.ndarray) -> np.ndarray:
        query = np.asarray(query, dtype=np.float64)
        if query.shape != (self.dim,):
            raise DimensionMismatch(f"query shape {query.shape}, table dim {self.dim}")
        qnorm = np.linalg.norm(query)
        if not qnorm > 0:
            raise ValueError("zero-norm query")
        return np.clip(self.vectors @ (query / qnorm) / self.norms, -1.0, 1.0)

    def nearest(
        self, query: np.ndarray, exclude: Iterable[str] = (), k: int = 1
    ) -> list[NeighborResult]:
        """Top-``k`` tokens by cosine similarity to ``query``.

        Sorted by similarity descending; ties go to the lower row. Tokens in
        ``exclude`` that are not in the vocabulary are ignored.
        """
        if k < 1:
            raise ValueError("k must be >= 1")
        scores = self._scores(query)
        return self._rank(scores, exclude, k)

    def _rank(self, scores: np.ndarray, exclude: Iterable[str], k: int) -> list[NeighborResult]:
        masked = scores.copy()
        skip = [self.index[t] for t in exclude if t in self.index]
        masked[skip] = -np.inf
        available = len(masked) - len(set(skip))
        k = min(k, available)
        if k == 1:
            order = [int(np.argmax(masked))]
        else:
            order = np.argsort(-masked, kind="stable")[:k]
        return [NeighborResult(self.words[i], float(scores[i])) for i in order]

    def nearest_batch(
        self, queries: np.ndarray, exclude_rows: Sequence[Iterable[int]]
    ) -> tuple[np.ndarray, np.ndarray]:
        """Top-1 row and cosine for each row of ``queries``.

        ``exclude_rows[i]`` holds vocabulary rows barred for query ``i``.
        Same tie-break as :meth:`nearest` (first maximal row wins).
        """
        queries = np.asarray(queries, dtype=np.float64)
        if queries.ndim != 2 or queries.shape[1] != self.dim:
            raise DimensionMismatch(f"queries shape {queries.shape}, table dim {self.dim}")
        qnorms = np.linalg.norm(queries, axis=1)
        if not (qnorms > 0).all():
            raise ValueError("zero-norm query")
        best = np.empty(len(queries), dtype=np.int64)
        best_sim = np.empty(len(queries))
        for start in range(0, len(queries), _QUERY_BLOCK):
            stop = min(start + _QUERY_BLOCK, len(queries))
            block = queries[start:stop] / qnorms[start:stop, None]
            scores = np.clip((block @ self.vectors.T) / self.norms, -1.0, 1.0)
            for j in range(stop - start):
                rows = list(exclude_rows[start + j])
                scores[j, rows] = -np.inf
            best[start:stop] = np.argmax(scores, axis=1)
            best_sim[start:stop] = scores[np.arange(stop - start), best[start:stop]]
        return best, best_sim


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    return float(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)))


def file_digest(path: str | os.PathLike) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def load_embeddings(
    path: str | os.PathLike, format: str = "glove-text", limit: int | None = None
) -> EmbeddingTable:
    """Read a GloVe text or fastText ``.vec`` file into an :class:`EmbeddingTable`.

    Records are ``token v1 ... vd``; the token is everything before the
    first space. ``.vec`` files start with a ``count dim`` header. Lines with
    the wrong number of values or unparseable/non-finite values are skipped
    and counted as malformed; duplicate tokens keep their first occurrence;
    all-zero vectors are dropped. Values are widened to float64.

    ``limit`` keeps only the first ``limit`` accepted tokens in file order.
    """
    if format not in FORMATS:
        raise EmbeddingFormatError(f"unknown embedding format {format!r}; expected one of {FORMATS}")
    if limit is not None and limit < 1:
        raise EmbeddingFormatError("limit must be >= 1")
    try:
        fh = open(path, "rb")
    except OSError as exc:
        raise EmbeddingFormatError(f"cannot read embeddings file {os.fspath(path)}: {exc}") from exc

    words: list[str] = []
    rows: list[np.ndarray] = []
    seen: set[str] = set()
    dim: int | None = None
    malformed = wrong_dim = duplicates = zeros = 0
    with fh:
        lines = iter(fh)
        if format == "fasttext-vec":
            header = next(lines, b"").split()
            try:
                _, dim = (int(v) for v in header)
            except ValueError:
                raise EmbeddingFormatError(
                    f"{os.fspath(path)}: expected '<count> <dim>' header, got {header!r}"
                ) from None
            if dim < 1:
                raise EmbeddingFormatError(f"{os.fspath(path)}: header dimension {dim}")
        for raw in lines:
            if limit is not None and len(words) >= limit:
                break
            try:
                line = raw.decode("utf-8").rstrip("\r\n")
            except UnicodeDecodeError:
                malformed += 1
                continue
            if not line.strip():
                continue
            token, _, rest = line.partition(" ")
            values = rest.split()
            if not token or not values:
                malformed += 1
                continue
            if dim is None:
                dim = len(values)
            if len(values) != dim:
                malformed += 1
                wrong_dim += 1
                continue
            try:
                vec = np.array(values, dtype=np.float64)
            except ValueError:
                malformed += 1
                continue
            if not np.isfinite(vec).all():
                malformed += 1
                continue
            if token in seen:
                duplicates += 1
                continue
            if not vec.any():
                zeros += 1
                continue
            seen.add(token)
            words.append(token)
            rows.append(vec)

    if wrong_dim > len(words):
        raise EmbeddingFormatError(
            f"{os.fspath(path)}: inconsistent dimensionality "
            f"({wrong_dim} lines disagree with dim {dim}, {len(words)} agree)"
        )
    if not words:
        raise EmbeddingFormatError(f"{os.fspath(path)}: empty vocabulary after filtering")
    if malformed:
        log.warning("%s: skipped %d malformed lines", path, malformed)
    if zeros:
        log.warning("%s: rejected %d zero vectors", path, zeros)
    return EmbeddingTable(
        tuple(words),
        np.vstack(rows),
        source=os.fspath(path),
        digest=file_digest(path),
        malformed=malformed,
        duplicates=duplicates,
        zero_rejected=zeros,
    )

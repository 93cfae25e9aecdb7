"""Google-style analogy files and per-category word-pair sets."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .embeddings import EmbeddingTable
from .errors import CorpusFormatError, EmptyPairSet

log = logging.getLogger(__name__)


class AnalogyQuad(NamedTuple):
    """``a : b :: x : y``"""

    a: str
    b: str
    x: str
    y: str


@dataclass(frozen=True)
class AnalogyCategory:
    name: str
    quads: tuple[AnalogyQuad, ...]


@dataclass(frozen=True)
class AnalogyFile:
    categories: tuple[AnalogyCategory, ...]
    malformed: int = 0
    source: str = "<memory>"

    def __iter__(self):
        return iter(self.categories)

    def __len__(self):
        return len(self.categories)

    def names(self) -> list[str]:
        return [c.name for c in self.categories]

    def get(self, name: str) -> AnalogyCategory:
        for c in self.categories:
            if c.name == name:
                return c
        raise KeyError(name)


@dataclass(frozen=True)
class WordPairSet:
    """Ordered, duplicate-free (source, target) pairs for one relationship.

    ``oov_dropped`` counts distinct pairs removed because a token was
    missing from the embedding table.
    """

    category: str
    pairs: tuple[tuple[str, str], ...]
    oov_dropped: int = 0

    def __post_init__(self):
        if len(set(self.pairs)) != len(self.pairs):
            raise ValueError(f"{self.category}: duplicate pairs")
        for src, tgt in self.pairs:
            if src == tgt:
                raise ValueError(f"{self.category}: source equals target ({src!r})")

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def total(self) -> int:
        return len(self.pairs) + self.oov_dropped


def parse_analogy_lines(
    lines: Iterable[str], source: str = "<memory>", lowercase: bool = False
) -> AnalogyFile:
    categories: list[AnalogyCategory] = []
    name: str | None = None
    quads: list[AnalogyQuad] = []
    malformed = 0

    def close():
        if name is not None and quads:
            categories.append(AnalogyCategory(name, tuple(quads)))
        elif name is not None:
            log.warning("%s: category %r has no analogies; dropped", source, name)

    for raw in lines:
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        if line.startswith(": "):
            close()
            name, quads = line[2:].strip(), []
            if not name:
                name = None
                malformed += 1
            continue
        tokens = line.split()
        if name is None or len(tokens) != 4:
            malformed += 1
            continue
        if lowercase:
            tokens = [t.lower() for t in tokens]
        quads.append(AnalogyQuad(*tokens))
    close()

    if not categories:
        raise CorpusFormatError(f"{source}: no analogy categories found")
    if malformed:
        log.warning("%s: skipped %d malformed lines", source, malformed)
    return AnalogyFile(tuple(categories), malformed, source)


def parse_analogy_file(path: str | os.PathLike, lowercase: bool = False) -> AnalogyFile:
    """Parse an analogy file with ``: category`` headers and ``a b x y`` lines.

    Tokens are kept byte-exact unless ``lowercase`` is set (the published
    Google file is mixed case, while some embedding releases are lowercase).
    """
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_analogy_lines(fh, source=os.fspath(path), lowercase=lowercase)
    except (OSError, UnicodeDecodeError) as exc:
        raise CorpusFormatError(f"cannot read analogy file {os.fspath(path)}: {exc}") from exc


def format_analogies(categories: Iterable[AnalogyCategory]) -> str:
    out = []
    for cat in categories:
        out.append(f": {cat.name}\n")
        out.extend(" ".join(q) + "\n" for q in cat.quads)
    return "".join(out)


def extract_pairs(category: AnalogyCategory, table: EmbeddingTable) -> WordPairSet:
    """Deduplicated (a, b) and (x, y) pairs of a category, in first-seen order.

    Pairs with an out-of-vocabulary token are dropped and counted. Pairs
    whose source equals their target are ignored.
    """
    seen: dict[tuple[str, str], None] = {}
    for q in category.quads:
        for pair in ((q.a, q.b), (q.x, q.y)):
            if pair[0] != pair[1]:
                seen.setdefault(pair)
    kept = tuple(p for p in seen if p[0] in table and p[1] in table)
    if not kept:
        raise EmptyPairSet(f"{category.name}: no in-vocabulary pairs")
    return WordPairSet(category.name, kept, oov_dropped=len(seen) - len(kept))

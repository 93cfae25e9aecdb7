"""Regenerate the bundled synthetic embedding + analogy fixtures.

Two planted relationships over a small random vocabulary: each target
vector is its source vector plus a category offset plus small noise.
"""

from pathlib import Path

import numpy as np

DIM = 12
PAIRS = 6
FILLER = 48
OUT = Path(__file__).resolve().parents[1] / "src" / "wordrel" / "data"


def main():
    rng = np.random.default_rng(20200101)
    # shared mean direction, as in trained embeddings
    centre = rng.normal(size=DIM) * 1.5
    rows = {}
    categories = {}
    for name, src, tgt in (("planted-gender", "man", "woman"), ("planted-plural", "item", "items")):
        offset = rng.normal(size=DIM)
        pairs = []
        for i in range(PAIRS):
            s, t = f"{src}{i}", f"{tgt}{i}"
            rows[s] = centre + rng.normal(size=DIM)
            rows[t] = rows[s] + offset + rng.normal(scale=0.05, size=DIM)
            pairs.append((s, t))
        categories[name] = pairs
    for i in range(FILLER):
        rows[f"filler{i}"] = centre + rng.normal(size=DIM)

    order = list(rows)
    rng.shuffle(order)
    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / "synthetic.glove.txt", "w", newline="\n") as fh:
        for w in order:
            fh.write(w + " " + " ".join(f"{v:.6f}" for v in rows[w]) + "\n")
    with open(OUT / "synthetic.analogies.txt", "w", newline="\n") as fh:
        for name, pairs in categories.items():
            fh.write(f": {name}\n")
            for i, (a, b) in enumerate(pairs):
                for j, (x, y) in enumerate(pairs):
                    if i != j:
                        fh.write(f"{a} {b} {x} {y}\n")
    make_micro(rng)


def make_micro(rng, pairs=10, dim=4):
    """Ten pairs whose own 20 tokens form the whole vocabulary."""
    offset = rng.normal(size=dim)
    centre = rng.normal(size=dim) * 2.0
    with open(OUT / "micro.glove.txt", "w", newline="\n") as fh:
        for i in range(pairs):
            src = centre + rng.normal(size=dim)
            tgt = src + offset + rng.normal(scale=0.3, size=dim)
            for w, v in ((f"src{i}", src), (f"tgt{i}", tgt)):
                fh.write(w + " " + " ".join(f"{x:.6f}" for x in v) + "\n")
    with open(OUT / "micro.analogies.txt", "w", newline="\n") as fh:
        fh.write(": micro\n")
        for i in range(pairs):
            j = (i + 1) % pairs
            fh.write(f"src{i} tgt{i} src{j} tgt{j}\n")


if __name__ == "__main__":
    main()

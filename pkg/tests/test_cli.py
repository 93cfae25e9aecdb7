import csv
import json

import numpy as np
import pytest

from wordrel.cli import main
from wordrel.embeddings import load_embeddings
from wordrel.serialization import load_transform
from wordrel.transforms import OrthogonalTransform


@pytest.fixture
def base_args(synthetic_paths):
    emb, ana = synthetic_paths
    return ["--embeddings", str(emb), "--analogies", str(ana), "--n", "40", "--threads", "2"]


def read_rows(path):
    with open(path) as fh:
        return list(csv.DictReader(line for line in fh if not line.startswith("#")))


def test_eval_writes_reports(tmp_path, base_args, capsys):
    assert main(["eval", *base_args, "--out", str(tmp_path)]) == 0
    rows = read_rows(tmp_path / "results.csv")
    assert len(rows) == 6
    assert list(rows[0]) == ["category", "kind", "accuracy", "mean_cosine", "pair_count", "oov_dropped"]
    doc = json.loads((tmp_path / "report.json").read_text())
    assert doc["meta"]["exclusion_policy"] == "source-only"
    assert len(doc["meta"]["embeddings_sha256"]) == 64
    assert doc["meta"]["config"]["n"] == 40
    header = (tmp_path / "results.csv").read_text().splitlines()[:3]
    assert header[0].startswith("# config:") and "sha256" in header[1]
    assert "Avg" in capsys.readouterr().out


def test_eval_is_byte_reproducible(tmp_path, base_args):
    for d in ("a", "b"):
        assert main(["eval", *base_args, "--out", str(tmp_path / d)]) == 0
    for name in ("results.csv", "report.json"):
        assert (tmp_path / "a" / name).read_bytes().replace(b"/a", b"") == \
            (tmp_path / "b" / name).read_bytes().replace(b"/b", b"")


def test_eval_missing_embeddings(tmp_path, synthetic_paths, capsys):
    missing = tmp_path / "nowhere.txt"
    code = main(["eval", "--embeddings", str(missing), "--analogies", str(synthetic_paths[1])])
    assert code == 2
    assert str(missing) in capsys.readouterr().err


def test_usage_errors_exit_1(base_args, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["eval", *base_args, "--kinds", "affine"])
    assert exc.value.code == 1
    assert main(["eval", *base_args, "--seed", "1,2"]) == 1


def test_n_larger_than_vocab_is_reported(tmp_path, synthetic_paths, capsys):
    emb, ana = synthetic_paths
    code = main(["eval", "--embeddings", str(emb), "--analogies", str(ana), "--out", str(tmp_path)])
    assert code != 0
    assert "vocabulary" in capsys.readouterr().err


def test_sweep_shape(tmp_path, base_args):
    assert main(["sweep", *base_args, "--grid", "10,60", "--out", str(tmp_path)]) == 0
    rows = read_rows(tmp_path / "sweep.csv")
    assert len(rows) == 6
    assert list(rows[0]) == ["n", "kind", "mean_accuracy", "mean_cosine", "seed_count"]
    trans = [r for r in rows if r["kind"] == "translative"]
    assert trans[0]["mean_accuracy"] == trans[1]["mean_accuracy"]
    assert trans[0]["mean_cosine"] == trans[1]["mean_cosine"]
    assert {r["seed_count"] for r in rows} == {"3"}


def test_fit_round_trip(tmp_path, base_args, synthetic_paths):
    assert main(["fit", *base_args, "--category", "planted-gender", "--out", str(tmp_path)]) == 0
    r = load_transform(tmp_path / "planted-gender.orthogonal.json")
    assert isinstance(r, OrthogonalTransform)
    assert np.abs(r.r.T @ r.r - np.eye(r.dim)).max() <= 1e-6


def test_fit_translative_one_pair(tmp_path):
    emb = tmp_path / "e.txt"
    emb.write_text("x 1.5 -2 0.25\ny 2.5 -1 0.75\nz 0 1 0\n")
    ana = tmp_path / "a.txt"
    ana.write_text(": one\nx y x y\n")
    args = ["fit", "--embeddings", str(emb), "--analogies", str(ana), "--category", "one",
            "--kinds", "translative", "--out", str(tmp_path)]
    assert main(args) == 0
    t = load_transform(tmp_path / "one.translative.json")
    table = load_embeddings(emb)
    assert np.array_equal(t.b, table.vector("y") - table.vector("x"))


def test_fit_binary_linear_bit_exact(tmp_path, base_args, synthetic_table, synthetic_corpus):
    from wordrel.corpus import extract_pairs
    from wordrel.transforms import SolverConfig, fit

    assert main(["fit", *base_args, "--category", "planted-plural", "--kinds", "linear",
                 "--binary", "--out", str(tmp_path)]) == 0
    loaded = load_transform(tmp_path / "planted-plural.linear.bin")
    pairs = extract_pairs(synthetic_corpus.get("planted-plural"), synthetic_table)
    in_memory = fit("linear", pairs, synthetic_table, SolverConfig(n=40))
    v = synthetic_table.vectors[5]
    assert np.array_equal(loaded.apply(v), in_memory.apply(v))


def test_fit_unknown_category(tmp_path, base_args, capsys):
    assert main(["fit", *base_args, "--category", "nope", "--out", str(tmp_path)]) == 2
    assert "nope" in capsys.readouterr().err


@pytest.mark.parametrize("method", ["3cosadd", "3cosmul", "translative", "orthogonal", "linear"])
def test_solve_planted(base_args, capsys, method):
    args = ["solve", "man2", "woman2", "man4", "--method", method, "--k", "3", *base_args]
    if method not in ("3cosadd", "3cosmul"):
        args += ["--category", "planted-gender"]
    assert main(args) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 4
    assert lines[1].split()[1] == "woman4"


def test_solve_with_transform_file(tmp_path, base_args, capsys):
    main(["fit", *base_args, "--category", "planted-gender", "--kinds", "linear", "--out", str(tmp_path)])
    capsys.readouterr()
    code = main(["solve", "man1", "woman1", "man3", "--method", "linear",
                 "--transform", str(tmp_path / "planted-gender.linear.json"), *base_args])
    assert code == 0
    assert capsys.readouterr().out.splitlines()[1].split()[1] == "woman3"


def test_solve_oov(base_args, capsys):
    assert main(["solve", "man1", "dragon", "man3", *base_args]) == 2
    assert "dragon" in capsys.readouterr().err


def test_solve_transform_method_needs_source(base_args):
    assert main(["solve", "man1", "woman1", "man3", "--method", "orthogonal", *base_args]) == 1

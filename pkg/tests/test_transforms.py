import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wordrel.corpus import WordPairSet
from wordrel.embeddings import EmbeddingTable
from wordrel.errors import DimensionMismatch, EmptyPairSet
from wordrel.transforms import (
    FitSample,
    LinearTransform,
    OrthogonalTransform,
    SolverConfig,
    TranslationVector,
    apply,
    build_fit_sample,
    cosmul_scores,
    fit_linear,
    fit_orthogonal,
    fit_translation,
    rank_3cosadd,
    residual,
    solve_3cosadd,
    solve_3cosmul,
)

from oracles import py_cosine, random_orthogonal, rotation_grid_procrustes


def sample_from(x, y, seed=0):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return FitSample(x, y, tuple(f"t{i}" for i in range(x.shape[1])), seed)


def random_sample(rng, d, n, shift=None):
    x = rng.standard_normal((d, n)) + 0.5
    b = rng.standard_normal(d) if shift is None else shift
    return sample_from(x, x + b[:, None])


# translation


def test_fit_translation_single_pair():
    table = EmbeddingTable.from_dict({"x": [1.0, 2.0, 3.0], "y": [2.0, 2.0, 3.0]})
    b = fit_translation(WordPairSet("c", (("x", "y"),)), table)
    assert np.array_equal(b.b, [1.0, 0.0, 0.0])
    assert np.array_equal(apply(b, table.vector("x")), table.vector("y"))


def test_fit_translation_mean_of_two():
    table = EmbeddingTable.from_dict({"a": [1, 1], "b": [2, 1], "c": [0, 2], "d": [3, 2]})
    b = fit_translation(WordPairSet("c", (("a", "b"), ("c", "d"))), table)
    assert np.array_equal(b.b, [2.0, 0.0])


def test_fit_translation_zero():
    table = EmbeddingTable.from_dict({"a": [1, 1], "b": [2, 1]})
    b = fit_translation(WordPairSet("c", (("a", "b"), ("b", "a"))), table)
    assert np.array_equal(b.b, [0.0, 0.0])


def test_fit_translation_empty():
    with pytest.raises(EmptyPairSet):
        fit_translation(WordPairSet("c", ()), EmbeddingTable.from_dict({"a": [1.0]}))


# sampling


def test_sample_exhaustive(random_table):
    b = TranslationVector(np.zeros(random_table.dim))
    s = build_fit_sample(random_table, b, SolverConfig(n=len(random_table), seed=4))
    got = sorted(map(tuple, s.x.T))
    assert got == sorted(map(tuple, random_table.vectors))
    assert len(set(s.tokens)) == len(random_table)


def test_sample_zero_shift(random_table):
    s = build_fit_sample(random_table, TranslationVector(np.zeros(6)), SolverConfig(n=50, seed=1))
    assert np.array_equal(s.x, s.y)


def test_sample_shift_exact(random_table):
    b = TranslationVector(np.arange(6.0))
    s = build_fit_sample(random_table, b, SolverConfig(n=30, seed=2))
    assert np.array_equal(s.y, s.x + np.arange(6.0)[:, None])
    rows = [random_table.row(t) for t in s.tokens]
    assert np.array_equal(s.x, random_table.vectors[rows].T)


def test_sample_deterministic(random_table):
    b = TranslationVector(np.ones(6))
    cfg = SolverConfig(n=40, seed=11)
    s1, s2 = build_fit_sample(random_table, b, cfg), build_fit_sample(random_table, b, cfg)
    assert s1.tokens == s2.tokens
    assert np.array_equal(s1.x, s2.x) and np.array_equal(s1.y, s2.y)


def test_sample_too_large(random_table):
    with pytest.raises(ValueError):
        build_fit_sample(random_table, TranslationVector(np.zeros(6)), SolverConfig(n=201))


# orthogonal


def test_orthogonal_identity_when_no_shift():
    rng = np.random.default_rng(0)
    s = random_sample(rng, 5, 100, shift=np.zeros(5))
    assert np.abs(fit_orthogonal(s).r - np.eye(5)).max() < 1e-8


def test_orthogonal_quarter_turn():
    s = sample_from(np.eye(2), [[0.0, -1.0], [1.0, 0.0]])
    r = fit_orthogonal(s).r
    grid_res, grid_r = rotation_grid_procrustes(s.x, s.y)
    assert np.allclose(grid_r, [[0, -1], [1, 0]], atol=1e-6)
    assert np.allclose(r, [[0, -1], [1, 0]], atol=1e-12)
    assert residual(fit_orthogonal(s), s) <= grid_res + 1e-12


def test_orthogonal_beats_random_orthogonal_maps():
    rng = np.random.default_rng(42)
    s = random_sample(rng, 5, 200)
    best = residual(fit_orthogonal(s), s)
    for _ in range(10_000):
        omega = random_orthogonal(rng, 5)
        assert best <= np.linalg.norm(omega @ s.x - s.y) + 1e-9


def test_orthogonal_invariants_and_reflection_allowed():
    rng = np.random.default_rng(1)
    s = random_sample(rng, 6, 80)
    r = fit_orthogonal(s).r
    assert np.abs(r.T @ r - np.eye(6)).max() <= 1e-6
    assert abs(abs(np.linalg.det(r)) - 1) <= 1e-6
    flip = np.diag([1.0, -1.0])
    s2 = sample_from(np.eye(2), flip)
    assert np.linalg.det(fit_orthogonal(s2).r) == pytest.approx(-1.0)


def test_orthogonal_rejects_non_orthogonal():
    with pytest.raises(ValueError):
        OrthogonalTransform(np.array([[1.0, 0.1], [0.0, 1.0]]))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 8))
def test_inner_product_preserved(seed, d):
    rng = np.random.default_rng(seed)
    r = fit_orthogonal(random_sample(rng, d, 4 * d)).r
    for _ in range(20):
        u, v = rng.standard_normal(d), rng.standard_normal(d)
        ip = np.dot(u, v)
        assert abs(np.dot(r @ u, r @ v) - ip) <= 1e-6 * max(1.0, abs(ip), np.linalg.norm(u) * np.linalg.norm(v))
        assert np.linalg.norm(r @ v) == pytest.approx(np.linalg.norm(v), rel=1e-6)


# linear


def test_linear_identity_when_no_shift():
    rng = np.random.default_rng(3)
    s = random_sample(rng, 5, 50, shift=np.zeros(5))
    assert np.abs(fit_linear(s).a - np.eye(5)).max() < 1e-8


def test_linear_scalar_case():
    assert fit_linear(sample_from([[1.0, 2.0]], [[2.0, 4.0]])).a[0, 0] == pytest.approx(2.0, abs=1e-14)


def test_linear_not_worse_than_orthogonal():
    rng = np.random.default_rng(9)
    s = random_sample(rng, 5, 200)
    assert residual(fit_linear(s), s) <= residual(fit_orthogonal(s), s)


def test_linear_rank_deficient_falls_back_to_pinv():
    x = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]])
    s = sample_from(x, x + 1.0)
    a = fit_linear(s).a
    assert np.isfinite(a).all()
    # minimum-norm least-squares solution
    assert np.allclose(a, (x + 1.0) @ np.linalg.pinv(x), atol=1e-10)


def test_linear_min_singular_value_reported():
    lt = LinearTransform(np.diag([3.0, 0.5]))
    assert lt.min_singular_value == pytest.approx(0.5)


def test_linear_approximates_shift_on_sample():
    rng = np.random.default_rng(5)
    s = random_sample(rng, 4, 400)
    a = fit_linear(s).a
    assert np.linalg.norm(a @ s.x - s.y) <= np.linalg.norm(s.x - s.y) + 1e-9


# apply


def test_apply_identities():
    v = np.array([1.0, -2.0, 3.0])
    assert np.array_equal(apply(TranslationVector(np.zeros(3)), v), v)
    assert np.array_equal(apply(OrthogonalTransform(np.eye(3)), v), v)
    assert np.array_equal(apply(LinearTransform(2 * np.eye(3)), v), 2 * v)


def test_apply_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        apply(OrthogonalTransform(np.eye(3)), np.ones(2))
    with pytest.raises(DimensionMismatch):
        apply(TranslationVector(np.zeros(3)), np.ones(4))


# baselines


def test_3cosadd_planted(planted_table):
    assert solve_3cosadd(planted_table, "man", "woman", "king").token == "queen"


def test_3cosadd_degenerate_query(planted_table):
    got = solve_3cosadd(planted_table, "king", "woman", "king")
    ranked = [r.token for r in planted_table.nearest(planted_table.vector("woman"), k=6)]
    assert ranked[0] == "woman"
    expected = next(t for t in ranked if t not in {"king", "woman"})
    assert got.token == expected


def test_3cosadd_excludes_query_words(planted_table):
    tokens = [r.token for r in rank_3cosadd(planted_table, "man", "woman", "king", k=3)]
    assert not {"man", "woman", "king"} & set(tokens)


def brute_cosmul(table, a, b, x, eps):
    best, best_score = None, -math.inf
    va, vb, vx = (table.vector(t) for t in (a, b, x))
    for w, v in zip(table.words, table.vectors):
        if w in (a, b, x):
            continue
        score = ((py_cosine(v, vx) + 1) / 2) * ((py_cosine(v, vb) + 1) / 2) / ((py_cosine(v, va) + 1) / 2 + eps)
        if score > best_score:
            best, best_score = w, score
    return best, best_score


def test_3cosmul_planted(planted_table):
    expected, score = brute_cosmul(planted_table, "man", "woman", "king", 1e-3)
    got = solve_3cosmul(planted_table, "man", "woman", "king")
    assert expected == "queen" and got.token == "queen"
    assert got.similarity == pytest.approx(score, rel=1e-12)


def _shifted_cos(table, token):
    v = table.vector(token)
    return (table.vectors @ v / table.norms / np.linalg.norm(v) + 1) / 2


def test_3cosmul_epsilon_dominance(planted_table, random_table):
    scores = cosmul_scores(planted_table, "man", "woman", "king", epsilon=1e6)
    product = _shifted_cos(planted_table, "king") * _shifted_cos(planted_table, "woman")
    candidates = [planted_table.row(w) for w in ("queen", "apple", "car")]
    assert list(np.argsort(-scores[candidates])) == list(np.argsort(-product[candidates]))
    # larger table: any inversion must be a near-tie within the 1/epsilon perturbation
    scores = cosmul_scores(random_table, "w0", "w1", "w2", epsilon=1e6)
    product = _shifted_cos(random_table, "w2") * _shifted_cos(random_table, "w1")
    order = np.argsort(-scores, kind="stable")
    gaps = product[order][:-1] - product[order][1:]
    assert (gaps >= -2e-6 * product.max()).all()


def test_3cosmul_deterministic(random_table):
    assert solve_3cosmul(random_table, "w3", "w4", "w5") == solve_3cosmul(random_table, "w3", "w4", "w5")


def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(n=0)
    with pytest.raises(ValueError):
        SolverConfig(cosmul_epsilon=0.0)
    assert SolverConfig() == SolverConfig(n=2000, seed=0, cosmul_epsilon=1e-3)

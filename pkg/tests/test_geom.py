"""Geometry tests: pooling, cosine, SVT (against a second implementation),
encoders, and the similarity-ordering evaluation."""

from __future__ import annotations

import math

import numpy as np
import pytest

from figlang.figdata.model import AnnotatedSentence, FigurativeExpression
from figlang.geom import (
    BagOfWordsEncoder,
    LinearVocabEncoder,
    SentenceVector,
    SvtConfig,
    TokenEmbeddings,
    cosine,
    mean_pool,
    svt_normalize,
)
from figlang.geom.encoders import EncoderError, get_encoder
from figlang.geom.rq1 import evaluate_rq1, render_rq1_table
from figlang.geom.svt import soft_exponential

from conftest import rq1_constructed_dataset


# ----------------------------------------------------------------- mean_pool

def test_mean_pool_single_row_identity():
    te = TokenEmbeddings(np.array([[3.0, -1.0]]), np.array([True]))
    assert np.allclose(mean_pool(te).vector, [3.0, -1.0])


def test_mean_pool_two_rows():
    te = TokenEmbeddings(np.array([[1.0, 0.0], [0.0, 1.0]]), np.array([True, True]))
    assert np.allclose(mean_pool(te).vector, [0.5, 0.5])


def test_mean_pool_masked_row_excluded():
    te = TokenEmbeddings(
        np.array([[1.0, 0.0], [0.0, 1.0], [9.0, 9.0]]), np.array([True, True, False])
    )
    # Oracle: recompute the mean over only the unmasked rows.
    expected = np.array([[1.0, 0.0], [0.0, 1.0]]).mean(axis=0)
    assert np.allclose(mean_pool(te).vector, expected)


def test_mean_pool_all_masked_rejected():
    with pytest.raises(ValueError):
        TokenEmbeddings(np.array([[1.0, 2.0]]), np.array([False]))


def test_mean_pool_permutation_invariant():
    rng = np.random.default_rng(0)
    for _ in range(100):
        rows = rng.integers(1, 8)
        matrix = rng.normal(size=(rows, 5))
        mask = np.ones(rows, dtype=bool)
        te = TokenEmbeddings(matrix, mask)
        perm = rng.permutation(rows)
        te_perm = TokenEmbeddings(matrix[perm], mask)
        assert np.allclose(mean_pool(te).vector, mean_pool(te_perm).vector)


# -------------------------------------------------------------------- cosine

def test_cosine_identical():
    u = SentenceVector(np.array([1.0, 2.0]))
    assert cosine(u, u) == 1.0


def test_cosine_orthogonal_and_opposite():
    assert cosine(SentenceVector(np.array([1.0, 0.0])), SentenceVector(np.array([0.0, 1.0]))) == 0.0
    assert cosine(SentenceVector(np.array([1.0, 2.0])), SentenceVector(np.array([-1.0, -2.0]))) == -1.0


def test_cosine_zero_vector_errors():
    with pytest.raises(ValueError):
        cosine(SentenceVector(np.zeros(3)), SentenceVector(np.ones(3)))


def test_cosine_bounds_scale_invariance_symmetry():
    rng = np.random.default_rng(1)
    for _ in range(300):
        a = rng.normal(size=4)
        b = rng.normal(size=4)
        c = float(rng.uniform(0.1, 50.0))
        u, v = SentenceVector(a), SentenceVector(b)
        value = cosine(u, v)
        assert -1.0 <= value <= 1.0
        assert cosine(v, u) == pytest.approx(value)
        assert cosine(SentenceVector(c * a), v) == pytest.approx(value, abs=1e-12)
        assert cosine(u, SentenceVector(c * a)) == 1.0  # positive rescaling of u itself


# ----------------------------------------------------------------------- SVT

def svt_second_implementation(batch: np.ndarray, alpha: float) -> np.ndarray:
    """Independent plain-loop reimplementation of the normalization."""
    batch = np.asarray(batch, dtype=np.float64)
    means = batch.mean(axis=0)
    centered = batch - means
    u, s, vt = np.linalg.svd(centered, full_matrices=False)
    transformed = []
    for value in s:
        if alpha == 0:
            transformed.append(value)
        elif alpha > 0:
            transformed.append((math.exp(alpha * value) - 1.0) / alpha + alpha)
        else:
            transformed.append(-math.log(1.0 - alpha * (value + alpha)) / alpha)
    rebuilt = u @ np.diag(transformed) @ vt
    out = np.zeros_like(rebuilt)
    for i in range(rebuilt.shape[0]):
        norm = np.linalg.norm(rebuilt[i])
        out[i] = rebuilt[i] / norm if norm else rebuilt[i]
    return out


def test_svt_alpha_zero_identity():
    rng = np.random.default_rng(2)
    m = rng.uniform(-10, 10, size=(5, 4))
    out = svt_normalize(m, SvtConfig(alpha=0.0))
    assert np.abs(out - m).max() <= 1e-6


def test_svt_all_zero_passthrough():
    m = np.zeros((3, 3))
    out = svt_normalize(m, SvtConfig(alpha=0.5))
    assert np.array_equal(out, m)


def test_svt_alpha_half_matches_second_implementation():
    rng = np.random.default_rng(3)
    m = rng.normal(size=(7, 5))
    ours = svt_normalize(m, SvtConfig(alpha=0.5))
    oracle = svt_second_implementation(m, 0.5)
    assert np.abs(ours - oracle).max() <= 1e-9


def test_svt_negative_alpha_matches_second_implementation():
    rng = np.random.default_rng(4)
    m = rng.normal(size=(6, 6))
    ours = svt_normalize(m, SvtConfig(alpha=-0.05))
    oracle = svt_second_implementation(m, -0.05)
    assert np.abs(ours - oracle).max() <= 1e-9


def test_svt_identity_bound_random_matrices():
    rng = np.random.default_rng(5)
    for _ in range(50):
        n = int(rng.integers(1, 65))
        d = int(rng.integers(1, 65))
        m = rng.uniform(-10, 10, size=(n, d))
        out = svt_normalize(m, SvtConfig(alpha=0.0))
        assert np.abs(out - m).max() <= 1e-6


def test_svt_shape_preserved_and_apply_flag():
    rng = np.random.default_rng(6)
    m = rng.normal(size=(4, 9))
    assert svt_normalize(m, SvtConfig(alpha=0.001)).shape == m.shape
    assert np.array_equal(svt_normalize(m, SvtConfig(alpha=0.7, apply=False)), m)


def test_soft_exponential_continuity_near_zero():
    s = np.linspace(0.0, 5.0, 11)
    near = soft_exponential(1e-9, s)
    assert np.abs(near - s).max() < 1e-6


# ------------------------------------------------------------------ encoders

def test_bow_disjoint_texts_orthogonal():
    enc = BagOfWordsEncoder()
    tes = enc.encode(["alpha beta gamma", "delta epsilon zeta"])
    u, v = mean_pool(tes[0]), mean_pool(tes[1])
    assert cosine(u, v) == 0.0


def test_bow_word_permutation_identical():
    enc = BagOfWordsEncoder()
    tes = enc.encode(["alpha beta gamma", "gamma alpha beta"])
    assert cosine(mean_pool(tes[0]), mean_pool(tes[1])) == 1.0


def test_bow_empty_text_errors():
    with pytest.raises(EncoderError):
        BagOfWordsEncoder().encode(["ok text", "   "])


def test_linear_encoder_roundtrip(tmp_path):
    enc = LinearVocabEncoder(dim=4, seed=9).fit(["one two", "three four"])
    path = tmp_path / "enc.npz"
    enc.save(str(path))
    loaded = LinearVocabEncoder.load(str(path))
    assert loaded.vocab == enc.vocab
    assert np.array_equal(loaded.embeddings, enc.embeddings)


def test_linear_encoder_gradients_match_finite_differences(contrastive_triplets):
    enc = LinearVocabEncoder(dim=5, seed=3).fit(
        [t for tr in contrastive_triplets for t in (tr.anchor, tr.positive, tr.negative)]
    )
    batch = [
        (tr.anchor, tr.positive, tr.negative) for tr in contrastive_triplets[:4]
    ]
    loss, grads = enc.triplet_gradients(batch, scale=2.0)
    grad = grads["embeddings"]
    rng = np.random.default_rng(0)
    eps = 1e-6
    for _ in range(12):
        i = int(rng.integers(0, enc.embeddings.shape[0]))
        j = int(rng.integers(0, enc.embeddings.shape[1]))
        enc.embeddings[i, j] += eps
        up, _ = enc.triplet_gradients(batch, scale=2.0)
        enc.embeddings[i, j] -= 2 * eps
        down, _ = enc.triplet_gradients(batch, scale=2.0)
        enc.embeddings[i, j] += eps
        numeric = (up - down) / (2 * eps)
        assert numeric == pytest.approx(grad[i, j], abs=1e-5)


def test_get_encoder_factory():
    assert isinstance(get_encoder("bow"), BagOfWordsEncoder)
    assert isinstance(get_encoder("toy"), BagOfWordsEncoder)
    linear = get_encoder("linear:dim=8,seed=3")
    assert isinstance(linear, LinearVocabEncoder)
    assert linear.dim == 8 and linear.seed == 3
    with pytest.raises(ValueError):
        get_encoder("unknown")


# ----------------------------------------------------------------------- RQ1

def test_rq1_constructed_dataset_all_wins():
    report, comps = evaluate_rq1(rq1_constructed_dataset(), BagOfWordsEncoder(), SvtConfig(alpha=0.0))
    for category in ("se_specific", "general", "overall"):
        res = report.categories[category]
        assert res.percent_ems_wins == 100.0
        assert res.p_value < 0.01
        assert res.cliffs_delta_abs == 1.0
    assert report.categories["overall"].n == 60
    assert (
        report.categories["overall"].n
        == report.categories["se_specific"].n
        + report.categories["general"].n
        + sum(1 for c in comps if c.category == "both")
    )


def test_rq1_ties_count_as_non_wins():
    items = []
    for i in range(12):
        original = f"alpha beta nasty bug gamma{i}"
        start = original.index("nasty bug")
        items.append(
            AnnotatedSentence(
                id=f"tie-{i}",
                original=original,
                expressions=[
                    FigurativeExpression("nasty bug", (start, start + 9), "metaphor", "general", True)
                ],
                ems=f"same words here {i}",
                dms=f"same words here {i}",
                status="adjudicated",
            )
        )
    report, _ = evaluate_rq1(items, BagOfWordsEncoder(), SvtConfig(alpha=0.0))
    assert report.categories["overall"].percent_ems_wins == 0.0
    assert math.isnan(report.categories["overall"].p_value)
    assert any("undefined" in note for note in report.notes)


def test_rq1_percent_consistent_with_comparisons():
    report, comps = evaluate_rq1(rq1_constructed_dataset(30), BagOfWordsEncoder(), SvtConfig(alpha=0.0))
    wins = sum(1 for c in comps if c.sim_ems > c.sim_dms)
    assert report.categories["overall"].percent_ems_wins == 100.0 * wins / len(comps)


def test_rq1_dataset_order_invariant():
    ds = rq1_constructed_dataset(24)
    r1, _ = evaluate_rq1(ds, BagOfWordsEncoder(), SvtConfig(alpha=0.0))
    r2, _ = evaluate_rq1(list(reversed(ds)), BagOfWordsEncoder(), SvtConfig(alpha=0.0))
    for category in ("se_specific", "general", "overall"):
        a, b = r1.categories[category], r2.categories[category]
        assert a.percent_ems_wins == b.percent_ems_wins
        assert a.p_value == pytest.approx(b.p_value, nan_ok=True)
        assert a.cliffs_delta_abs == pytest.approx(b.cliffs_delta_abs)
        assert a.n == b.n


def test_rq1_excludes_items_missing_texts():
    ds = rq1_constructed_dataset(6)
    ds[0].ems = None
    report, comps = evaluate_rq1(ds, BagOfWordsEncoder(), SvtConfig(alpha=0.0))
    assert report.n_excluded == 1
    assert "rq1-000" in report.excluded_ids
    assert len(comps) == 5


def test_rq1_table_render_paper_shape():
    rows = {
        "BERT": {
            "se_specific": {"percent": 84.51, "p_value": 0.001, "delta_abs": 0.629},
            "general": {"percent": 87.40, "p_value": 0.001, "delta_abs": 0.638},
            "overall": {"percent": 86.57, "p_value": 0.001, "delta_abs": 0.637},
        }
    }
    table = render_rq1_table(rows)
    assert "86.57%" in table
    assert "p < 0.01" in table
    assert "0.637" in table
    assert table.splitlines()[0].startswith("Model")

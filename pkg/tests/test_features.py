"""Context assembly, handcrafted features, similarity and scaling."""

import numpy as np
import pytest

from citeworth.features import (
    ContextBundle,
    apply_scaler,
    assemble_context,
    build_feature_matrix,
    bundles_for,
    cosine_similarity,
    fit_scaler,
    handcrafted_features,
)
from citeworth.lda import fit_lda
from citeworth.textrep import fit_vocab

from conftest import linked_sentences, make_sentence


@pytest.fixture()
def paragraph():
    return linked_sentences(
        [
            ("Alpha sentence mentions prior work clearly.", True),
            ("Beta sentence sits in the middle here.", False),
            ("Gamma sentence closes the paragraph today.", False),
        ]
    )


class TestAssembleContext:
    def test_middle_sentence_has_both_neighbors(self, paragraph):
        bundle = assemble_context(paragraph, 1)
        assert bundle.prev_sentence is paragraph[0]
        assert bundle.next_sentence is paragraph[2]
        assert bundle.section_type == "intro"

    def test_first_sentence_missing_prev(self, paragraph):
        bundle = assemble_context(paragraph, 0)
        assert bundle.prev_sentence is None
        assert bundle.next_sentence is paragraph[1]

    def test_out_of_range(self, paragraph):
        with pytest.raises(IndexError):
            assemble_context(paragraph, 3)

    def test_fixture_neighbors_match_hand_reading(self, paragraph):
        bundle = assemble_context(paragraph, 2)
        assert bundle.prev_sentence.text.startswith("Beta")
        assert bundle.next_sentence is None


class TestHandcrafted:
    def test_no_neighbors(self):
        cur = make_sentence(0, "Cats purr.", False)
        feats = handcrafted_features(ContextBundle(cur_sentence=cur))
        assert feats.tolist() == [0, 0, 10, 2, 0, 0, 0, 0]

    def test_prev_citation_flag(self, paragraph):
        bundle = assemble_context(paragraph, 1)
        feats = handcrafted_features(bundle)
        assert feats[6] == 1.0  # prev is citing
        assert feats[7] == 0.0

    def test_flag_override(self, paragraph):
        bundle = assemble_context(paragraph, 1)
        feats = handcrafted_features(bundle, citation_flags=(0.0, 1.0))
        assert feats[6] == 0.0
        assert feats[7] == 1.0

    def test_exactly_eight_values(self, paragraph):
        for i in range(3):
            assert handcrafted_features(assemble_context(paragraph, i)).shape == (8,)

    def test_hand_counted_lengths(self, paragraph):
        bundle = assemble_context(paragraph, 1)
        feats = handcrafted_features(bundle)
        assert feats[0] == len(paragraph[0].text)
        assert feats[1] == len(paragraph[0].text.split())
        assert feats[2] == len(paragraph[1].text)
        assert feats[4] == len(paragraph[2].text)


class TestCosine:
    def test_parallel(self):
        v = np.array([1.0, 2.0, 3.0])
        assert cosine_similarity(v, v) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert cosine_similarity([1, 0], [0, 1]) == pytest.approx(0.0)

    def test_hand_arithmetic(self):
        assert cosine_similarity([1, 2], [2, 1]) == pytest.approx(0.8)

    def test_zero_norm_convention(self):
        assert cosine_similarity([0, 0], [1, 2]) == 0.0

    def test_scale_invariance_and_symmetry(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            a, b = rng.normal(size=4), rng.normal(size=4)
            c = float(rng.uniform(0.1, 10))
            assert cosine_similarity(a, b) == pytest.approx(cosine_similarity(b, a))
            assert cosine_similarity(c * a, b) == pytest.approx(cosine_similarity(a, b))


class TestScaler:
    def test_dense_z_score_population_sd(self):
        X = np.array([[1.0, 0.0], [2.0, 0.5], [3.0, 1.0]])
        scaler = fit_scaler(X, sparse_cols=[1], dense_cols=[0])
        out = apply_scaler(scaler, X)
        assert out[:, 0] == pytest.approx([-1.2247, 0.0, 1.2247], abs=1e-4)

    def test_sparse_max_abs(self):
        X = np.array([[4.0], [2.0], [0.0]])
        scaler = fit_scaler(X, sparse_cols=[0], dense_cols=[])
        out = apply_scaler(scaler, X)
        assert out[:, 0].tolist() == [1.0, 0.5, 0.0]

    def test_constant_dense_passthrough(self):
        X = np.array([[7.0], [7.0], [7.0]])
        scaler = fit_scaler(X, sparse_cols=[], dense_cols=[0])
        assert scaler.degenerate_dense == [0]
        out = apply_scaler(scaler, X)
        assert out[:, 0].tolist() == [7.0, 7.0, 7.0]

    def test_zero_sparse_passthrough_recorded(self):
        X = np.zeros((3, 1))
        scaler = fit_scaler(X, sparse_cols=[0], dense_cols=[])
        assert scaler.degenerate_sparse == [0]
        assert apply_scaler(scaler, X)[:, 0].tolist() == [0.0, 0.0, 0.0]

    def test_post_conditions_on_training_matrix(self):
        rng = np.random.default_rng(1)
        X = np.hstack([rng.uniform(0, 3, size=(20, 3)), rng.normal(2, 5, size=(20, 2))])
        scaler = fit_scaler(X, sparse_cols=[0, 1, 2], dense_cols=[3, 4])
        out = apply_scaler(scaler, X)
        assert np.all(np.abs(out[:, :3]).max(axis=0) <= 1 + 1e-12)
        assert np.all(np.abs(out[:, 3:].mean(axis=0)) <= 1e-9)
        assert np.allclose(out[:, 3:].std(axis=0), 1.0, atol=1e-9)

    def test_apply_is_pure(self):
        X = np.array([[1.0, 2.0], [3.0, 4.0]])
        scaler = fit_scaler(X, sparse_cols=[0], dense_cols=[1])
        snapshot = X.copy()
        apply_scaler(scaler, X)
        assert np.array_equal(X, snapshot)


class TestFeatureMatrix:
    @pytest.fixture()
    def corpus(self):
        return linked_sentences(
            [
                ("Previous reports described this phenomenon.", True),
                ("Our assay measures the phenomenon directly.", False),
                ("Results were stable across replicates.", False),
            ]
        )

    def test_bow_contextual_layout(self, corpus):
        vocab = fit_vocab([s.text.lower().split() for s in corpus], min_df=1)
        bundles = bundles_for(corpus)
        X, space = build_feature_matrix(bundles, vocab, contextual=True)
        assert X.shape == (3, 4 * vocab.size + 10)
        assert space.names[-1] == "num:next_has_citation"
        assert len(space.sparse_cols) == 4 * vocab.size
        assert len(space.dense_cols) == 10
        categories = set(space.categories)
        assert categories == {
            "section", "prev_sentence", "cur_sentence", "next_sentence", "numeric",
        }

    def test_non_contextual_layout(self, corpus):
        vocab = fit_vocab([s.text.lower().split() for s in corpus], min_df=1)
        X, space = build_feature_matrix(bundles_for(corpus), vocab, contextual=False)
        assert X.shape == (3, vocab.size)
        assert all(c == "cur_sentence" for c in space.categories)

    def test_topic_blocks_are_dense(self, corpus):
        tokens = [s.text.lower().split() for s in corpus]
        vocab = fit_vocab(tokens, min_df=1)
        topics = fit_lda(tokens, n_topics=2, alpha=0.1, iterations=30, burn_in=10, seed=0)
        X, space = build_feature_matrix(bundles_for(corpus), vocab, topics, contextual=True)
        assert X.shape == (3, 4 * 2 + 10)
        assert len(space.sparse_cols) == 0

    def test_citation_flag_columns_follow_labels(self, corpus):
        vocab = fit_vocab([s.text.lower().split() for s in corpus], min_df=1)
        X, space = build_feature_matrix(bundles_for(corpus), vocab, contextual=True)
        prev_flag_col = space.names.index("num:prev_has_citation")
        assert X[1, prev_flag_col] == 1.0  # sentence 0 is citing
        assert X[0, prev_flag_col] == 0.0

"""LSTM cell, BiLSTM encoder, attention pooling, forward pass, loss."""

import numpy as np
import pytest

from citeworth.errors import EmptyInput
from citeworth.features import ContextBundle
from citeworth.neural.attention import (
    attention_pool,
    score_cos,
    score_dp,
    score_sdp,
    softmax,
)
from citeworth.neural.lstm import (
    bilstm_forward,
    init_lstm_params,
    lstm_forward,
    lstm_step,
)
from citeworth.neural.model import NeuralConfig, NeuralModel

from conftest import linked_sentences, make_sentence


def zero_lstm_params(input_dim, hidden):
    rng = np.random.default_rng(0)
    return {k: np.zeros_like(v) for k, v in init_lstm_params(input_dim, hidden, rng).items()}


def tiny_model(variant="cos", contextual=True, seed=1):
    texts = [
        "previously reported findings suggested".split(),
        "methods improve previously reported analysis".split(),
        "further results reported".split(),
        ["introduction"],
    ]
    cfg = NeuralConfig(
        word_dim=5, encoder_hidden=4, char_dim=3, char_hidden=3,
        mlp_hidden=6, attention=variant, contextual=contextual, seed=seed,
    )
    return NeuralModel.build(texts, cfg)


def three_sentence_bundle():
    sentences = linked_sentences(
        [
            ("previously reported findings suggested", True),
            ("methods improve previously reported analysis", False),
            ("further results reported", False),
        ]
    )
    return ContextBundle(
        cur_sentence=sentences[1],
        prev_sentence=sentences[0],
        next_sentence=sentences[2],
    )


class TestLstmStep:
    def test_all_zero(self):
        p = zero_lstm_params(3, 2)
        h, c, _ = lstm_step(np.zeros(3), np.zeros(2), np.zeros(2), p)
        assert np.all(h == 0) and np.all(c == 0)

    def test_saturated_gates_carry_cell_state(self):
        # b_f = +50 forces f ~ 1; b_i = -50 forces i ~ 0 -> c_t = c_prev.
        p = zero_lstm_params(3, 2)
        p["b_f"] = np.full(2, 50.0)
        p["b_i"] = np.full(2, -50.0)
        c_prev = np.array([0.3, -0.7])
        _, c, _ = lstm_step(np.ones(3), np.zeros(2), c_prev, p)
        assert np.allclose(c, c_prev, atol=1e-12)

    def test_matches_sequence_forward(self):
        rng = np.random.default_rng(2)
        p = init_lstm_params(3, 4, rng)
        X = rng.normal(size=(5, 3))
        H, _ = lstm_forward(X, p)
        h = np.zeros(4)
        c = np.zeros(4)
        for t in range(5):
            h, c, _ = lstm_step(X[t], h, c, p)
            assert np.allclose(H[t], h, atol=1e-12)


class TestBilstm:
    def test_single_token_concatenation(self):
        rng = np.random.default_rng(3)
        pf = init_lstm_params(3, 2, rng)
        pb = init_lstm_params(3, 2, rng)
        X = rng.normal(size=(1, 3))
        H, _ = bilstm_forward(X, pf, pb)
        hf, _ = lstm_forward(X, pf)
        hb, _ = lstm_forward(X, pb)
        assert H.shape == (1, 4)
        assert np.allclose(H[0], np.concatenate([hf[0], hb[0]]))

    def test_reversal_symmetry(self):
        # The forward states of the reversed input equal the backward
        # states of the original input when the parameter roles swap.
        rng = np.random.default_rng(4)
        pf = init_lstm_params(3, 2, rng)
        pb = init_lstm_params(3, 2, rng)
        X = rng.normal(size=(6, 3))
        H_orig, _ = bilstm_forward(X, pf, pb)
        H_rev, _ = bilstm_forward(X[::-1], pb, pf)
        assert np.allclose(H_orig[:, 2:], H_rev[::-1, :2])
        assert np.allclose(H_orig[:, :2], H_rev[::-1, 2:])

    def test_zero_params_zero_states(self):
        p = zero_lstm_params(3, 2)
        H, _ = bilstm_forward(np.random.default_rng(0).normal(size=(4, 3)), p, p)
        assert np.all(H == 0)


class TestAttention:
    def test_weights_sum_to_one(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            H = rng.normal(size=(rng.integers(1, 7), 4))
            q = rng.normal(size=4)
            for variant in ("cos", "dp", "sdp"):
                _, alpha, _ = attention_pool(H, q, variant)
                assert np.all(alpha >= 0)
                assert alpha.sum() == pytest.approx(1.0, abs=1e-9)

    def test_singleton_returns_state(self):
        rng = np.random.default_rng(6)
        H = rng.normal(size=(1, 4))
        q = rng.normal(size=4)
        for variant in ("cos", "dp", "sdp"):
            z, _, _ = attention_pool(H, q, variant)
            assert np.allclose(z, H[0])

    def test_sdp_equals_dp_at_dk_1(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            H = rng.normal(size=(4, 1))
            q = rng.normal(size=1)
            assert np.array_equal(score_sdp(q, H), score_dp(q, H))
            z1, a1, _ = attention_pool(H, q, "dp")
            z2, a2, _ = attention_pool(H, q, "sdp")
            assert np.array_equal(z1, z2)
            assert np.array_equal(a1, a2)

    def test_cos_self_similarity_is_one(self):
        rng = np.random.default_rng(8)
        for _ in range(30):
            q = rng.normal(size=5)
            assert score_cos(q, q[None, :])[0] == pytest.approx(1.0, abs=1e-12)

    def test_cos_bounded(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            H = rng.normal(size=(3, 4)) * rng.uniform(0.1, 50)
            q = rng.normal(size=4) * rng.uniform(0.1, 50)
            s = score_cos(q, H)
            assert np.all(s >= -1 - 1e-12) and np.all(s <= 1 + 1e-12)

    def test_masked_positions_get_negligible_weight(self):
        rng = np.random.default_rng(10)
        H = rng.normal(size=(5, 4))
        q = rng.normal(size=4)
        mask = np.array([True, True, False, True, False])
        for variant in ("cos", "dp", "sdp"):
            _, alpha, _ = attention_pool(H, q, variant, mask=mask)
            assert np.all(alpha[~mask] < 1e-12)
            assert alpha.sum() == pytest.approx(1.0, abs=1e-9)

    def test_softmax_shift_invariance(self):
        s = np.array([1.0, 2.0, 3.0])
        assert np.allclose(softmax(s), softmax(s + 100.0))

    def test_empty_states_rejected(self):
        with pytest.raises(ValueError):
            attention_pool(np.zeros((0, 3)), np.zeros(3), "dp")


class TestForward:
    def test_probabilities_sum_to_one(self):
        model = tiny_model()
        probs, _ = model.forward(three_sentence_bundle())
        assert probs.shape == (2,)
        assert probs.sum() == pytest.approx(1.0, abs=1e-9)
        assert np.all(probs > 0)

    def test_missing_neighbors_zero_blocks(self):
        model = tiny_model()
        cur = make_sentence(0, "previously reported findings", False)
        bundle = ContextBundle(cur_sentence=cur, section_type="")
        bundle.section_type = ""  # no section text either
        probs, cache = model.forward(bundle, contextual=True)
        branch_caches = cache[0]
        assert "prev" not in branch_caches
        assert "next" not in branch_caches
        feats = cache[2][-8:]  # tail of the fused vector before dropout
        assert probs.sum() == pytest.approx(1.0, abs=1e-9)

    def test_eval_mode_deterministic_bitwise(self):
        model = tiny_model()
        bundle = three_sentence_bundle()
        p1, _ = model.forward(bundle)
        p2, _ = model.forward(bundle)
        assert np.array_equal(p1, p2)

    def test_train_mode_dropout_changes_output(self):
        model = tiny_model()
        bundle = three_sentence_bundle()
        rng = np.random.default_rng(0)
        p1, _ = model.forward(bundle, train_mode=True, dropout_rng=rng)
        p2, _ = model.forward(bundle, train_mode=True, dropout_rng=rng)
        assert not np.array_equal(p1, p2)

    def test_empty_current_sentence_raises(self):
        model = tiny_model()
        cur = make_sentence(0, "...", False)  # tokenizes to nothing
        with pytest.raises(EmptyInput):
            model.forward(ContextBundle(cur_sentence=cur))

    def test_non_contextual_ignores_neighbors(self):
        model = tiny_model(contextual=False)
        bundle_full = three_sentence_bundle()
        bundle_alone = ContextBundle(cur_sentence=bundle_full.cur_sentence)
        p1, _ = model.forward(bundle_full, contextual=False)
        p2, _ = model.forward(bundle_alone, contextual=False)
        assert np.array_equal(p1, p2)

    def test_out_of_vocab_word_uses_char_encoding(self):
        model = tiny_model()
        vec, _ = model.char_encode("unseenword")
        assert vec.shape == (2 * model.config.char_hidden,)
        assert np.any(vec != 0)

    def test_char_encode_empty_word_zero(self):
        model = tiny_model()
        vec, cache = model.char_encode("")
        assert np.all(vec == 0) and cache is None

    def test_char_encode_deterministic(self):
        model = tiny_model()
        a, _ = model.char_encode("reported")
        b, _ = model.char_encode("reported")
        assert np.array_equal(a, b)

    def test_embed_tokens_concatenation(self):
        model = tiny_model()
        assert "reportedly" not in model.word_vocab  # unseen word, seen chars
        tokens = ["previously", "reportedly"]
        E, _ = model.embed_tokens(tokens)
        assert E.shape == (2, model.config.word_dim + 2 * model.config.char_hidden)
        wd = model.config.word_dim
        row = model.params["word_emb"][model.word_vocab["previously"]]
        cvec, _ = model.char_encode("previously")
        assert np.array_equal(E[0], np.concatenate([row, cvec]))
        assert np.all(E[1, :wd] == 0)  # unknown word -> zero word block
        assert np.any(E[1, wd:] != 0)  # char block still informative


class TestLoss:
    def test_uniform_prediction_is_ln2(self):
        model = tiny_model()
        model.params["mlp.W2"][:] = 0.0
        model.params["mlp.b2"][:] = 0.0
        bundle = three_sentence_bundle()
        value = model.loss([bundle], [1], lam=0.0)
        assert value == pytest.approx(np.log(2), abs=1e-12)

    def test_l2_term_added_exactly(self):
        model = tiny_model()
        bundle = three_sentence_bundle()
        base = model.loss([bundle], [1], lam=0.0)
        lam = 1e-3
        reg = model.loss([bundle], [1], lam=lam)
        theta_sq = sum(float(np.sum(v * v)) for v in model.params.values())
        assert reg - base == pytest.approx(lam * theta_sq, rel=1e-9)

    def test_loss_non_negative(self):
        model = tiny_model()
        bundle = three_sentence_bundle()
        assert model.loss([bundle, bundle], [0, 1], lam=1e-7) >= 0.0

    def test_perfect_prediction_near_zero(self):
        model = tiny_model()
        model.params["mlp.W2"][:] = 0.0
        model.params["mlp.b2"][:] = np.array([-40.0, 40.0])
        bundle = three_sentence_bundle()
        assert model.loss([bundle], [1], lam=0.0) == pytest.approx(0.0, abs=1e-12)

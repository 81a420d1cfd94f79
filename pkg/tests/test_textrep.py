"""Tokenization, vocabulary fitting, tf-idf and embedding tables."""

import numpy as np
import pytest

from citeworth.errors import DimensionMismatch, EmptyVocabulary
from citeworth.textrep import (
    fit_vocab,
    load_embeddings,
    ngram_terms,
    stack_sparse,
    tfidf_transform,
    tokenize,
)


class TestTokenize:
    def test_lowercase_split(self):
        assert tokenize("The FZP gene") == ["the", "fzp", "gene"]

    def test_number_folding(self):
        assert tokenize("p < 0.05") == ["p", "<num>"]

    def test_empty(self):
        assert tokenize("") == []

    def test_integer_and_decimal(self):
        assert tokenize("In 1999 we measured 3,141 items") == [
            "in", "<num>", "we", "measured", "<num>", "items",
        ]

    def test_mixed_alnum_kept(self):
        assert tokenize("the fzp2 allele") == ["the", "fzp2", "allele"]

    def test_deterministic(self):
        text = "Some Mixed CASE with 12 numbers."
        assert tokenize(text) == tokenize(text)


class TestNgrams:
    def test_unigrams_and_bigrams(self):
        assert ngram_terms(["a", "b", "c"]) == ["a", "b", "c", "a_b", "b_c"]

    def test_unigram_only_range(self):
        assert ngram_terms(["a", "b"], (1, 1)) == ["a", "b"]


class TestVocabulary:
    def test_enumerated_terms_min_df_1(self):
        vocab = fit_vocab([["a", "b"], ["a", "c"]], min_df=1)
        assert set(vocab.index) == {"a", "b", "c", "a_b", "a_c"}

    def test_min_df_2(self):
        vocab = fit_vocab([["a", "b"], ["a", "c"]], min_df=2)
        assert set(vocab.index) == {"a"}

    def test_empty_vocabulary_raises(self):
        with pytest.raises(EmptyVocabulary):
            fit_vocab([["a"], ["b"]], min_df=3)

    def test_df_matches_brute_force(self):
        corpus = [
            ["x", "y", "x"],
            ["y", "z"],
            ["x", "z", "y"],
            ["q"],
        ]
        vocab = fit_vocab(corpus, min_df=1)
        for term, idx in vocab.index.items():
            brute = sum(1 for toks in corpus if term in set(ngram_terms(toks)))
            assert vocab.doc_freq[idx] == brute

    def test_df_counts_presence_not_frequency(self):
        vocab = fit_vocab([["a", "a", "a"], ["b"]], min_df=1)
        assert vocab.doc_freq[vocab.index["a"]] == 1

    def test_indices_dense(self):
        vocab = fit_vocab([["a", "b"], ["c", "d"]], min_df=1)
        assert sorted(vocab.index.values()) == list(range(vocab.size))


# Frozen from an independent hand computation of
# idf = ln((1+N)/(1+df)) + 1 with L2 normalization:
# corpus d1 = [a b a], d2 = [a c]; df(a)=2 -> idf 1.0, df(other)=1
# -> idf 1.4054651081081644; d1 raw = (a:2, a_b:~1.405, b:~1.405,
# b_a:~1.405), norm = 3.1505549527549084.
D1_EXPECTED = {
    "a": 0.6348087971775132,
    "a_b": 0.4461008073765536,
    "b": 0.4461008073765536,
    "b_a": 0.4461008073765536,
}
D2_EXPECTED = {
    "a": 0.4494364165239821,
    "a_c": 0.6316672017376245,
    "c": 0.6316672017376245,
}


class TestTfidf:
    @pytest.fixture()
    def vocab(self):
        return fit_vocab([["a", "b", "a"], ["a", "c"]], min_df=1)

    def test_hand_computed_values(self, vocab):
        terms = vocab.terms()
        v1 = tfidf_transform(["a", "b", "a"], vocab)
        got1 = {terms[i]: val for i, val in zip(v1.indices, v1.values)}
        assert got1 == pytest.approx(D1_EXPECTED, abs=1e-12)
        v2 = tfidf_transform(["a", "c"], vocab)
        got2 = {terms[i]: val for i, val in zip(v2.indices, v2.values)}
        assert got2 == pytest.approx(D2_EXPECTED, abs=1e-12)

    def test_out_of_vocab_only_gives_zero_vector(self, vocab):
        v = tfidf_transform(["zzz"], vocab)
        assert len(v.indices) == 0
        assert v.norm() == 0.0

    def test_unit_norm(self, vocab):
        v = tfidf_transform(["a", "a", "a", "b"], vocab)
        assert v.norm() == pytest.approx(1.0, abs=1e-9)

    def test_norm_in_zero_or_one(self, vocab):
        for tokens in ([], ["zzz"], ["a"], ["a", "b", "c", "c"]):
            n = tfidf_transform(tokens, vocab).norm()
            assert n == pytest.approx(0.0, abs=1e-9) or n == pytest.approx(1.0, abs=1e-9)

    def test_indices_strictly_increasing(self, vocab):
        v = tfidf_transform(["c", "a", "b", "a"], vocab)
        assert np.all(np.diff(v.indices) > 0)

    def test_corpus_order_independence(self):
        docs = [["a", "b"], ["b", "c"], ["c", "d"], ["a", "d"]]
        v_fwd = fit_vocab(docs, min_df=1)
        v_rev = fit_vocab(docs[::-1], min_df=1)
        for doc in docs:
            a = tfidf_transform(doc, v_fwd)
            b = tfidf_transform(doc, v_rev)
            assert np.array_equal(a.indices, b.indices)
            assert np.allclose(a.values, b.values)

    def test_stack_sparse(self, vocab):
        vs = [tfidf_transform(d, vocab) for d in (["a"], ["b", "c"])]
        X = stack_sparse(vs)
        assert X.shape == (2, vocab.size)
        assert np.allclose(np.linalg.norm(X, axis=1), 1.0)


class TestEmbeddings:
    def test_load_fixture(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("alpha 1 2 3 4\nbeta 0.5 0 -1 2\ngamma 9 8 7 6\n")
        table = load_embeddings(path)
        assert len(table) == 3
        assert table.dim == 4
        assert np.allclose(table.get("beta"), [0.5, 0, -1, 2])

    def test_ragged_raises(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("alpha 1 2 3\nbeta 1 2\n")
        with pytest.raises(DimensionMismatch):
            load_embeddings(path)

    def test_absent_token_signals_none(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("alpha 1 2\n")
        table = load_embeddings(path)
        assert table.get("missing") is None
        assert "missing" not in table

    def test_duplicates_keep_first(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("tok 1 1\ntok 2 2\n")
        assert np.allclose(load_embeddings(path).get("tok"), [1, 1])

    def test_missing_file_raises_oserror(self, tmp_path):
        with pytest.raises(OSError):
            load_embeddings(tmp_path / "absent.txt")

"""Text representations: tokens, n-gram tf-idf vectors, word embeddings."""

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptyVocabulary

NUM_TOKEN = "<num>"

# Numbers (with internal . or , separators) fold to a single placeholder;
# everything else splits on non-alphanumeric boundaries (unicode letters
# count as alphanumeric).
_TOKEN_RE = re.compile(r"\d+(?:[.,]\d+)*|[^\W_]+")
_NUMBER_RE = re.compile(r"\d+(?:[.,]\d+)*$")


def tokenize(text: str) -> list[str]:
    """Lowercase tokens split on non-alphanumeric boundaries; numeric
    strings collapse to a single ``<num>`` token."""
    out = []
    for tok in _TOKEN_RE.findall(text.lower()):
        out.append(NUM_TOKEN if _NUMBER_RE.fullmatch(tok) else tok)
    return out


def ngram_terms(tokens: list[str], ngram_range: tuple[int, int] = (1, 2)) -> list[str]:
    """Unigrams, bigrams, ... in order; n-grams join tokens with "_"."""
    lo, hi = ngram_range
    terms = []
    for n in range(lo, hi + 1):
        for i in range(len(tokens) - n + 1):
            terms.append("_".join(tokens[i : i + n]))
    return terms


@dataclass
class Vocabulary:
    """Term-to-index map with document frequencies."""

    index: dict[str, int]
    doc_freq: np.ndarray
    n_docs: int
    min_df: int = 1
    ngram_range: tuple[int, int] = (1, 2)

    @property
    def size(self) -> int:
        return len(self.index)

    def terms(self) -> list[str]:
        out = [""] * len(self.index)
        for term, i in self.index.items():
            out[i] = term
        return out

    def idf(self, term_index: int) -> float:
        return math.log((1 + self.n_docs) / (1 + float(self.doc_freq[term_index]))) + 1.0


def fit_vocab(
    corpus: list[list[str]],
    ngram_range: tuple[int, int] = (1, 2),
    min_df: int = 5,
) -> Vocabulary:
    """Collect unigram/bigram terms with per-sentence document frequency
    >= min_df.  Indices are assigned in sorted term order, so fitting is
    independent of document order."""
    if not corpus:
        raise ValueError("corpus is empty")
    df: dict[str, int] = {}
    for tokens in corpus:
        for term in set(ngram_terms(tokens, ngram_range)):
            df[term] = df.get(term, 0) + 1
    terms = sorted(t for t, c in df.items() if c >= min_df)
    if not terms:
        raise EmptyVocabulary(f"min_df={min_df} removed every term")
    index = {t: i for i, t in enumerate(terms)}
    freq = np.array([df[t] for t in terms], dtype=np.int64)
    return Vocabulary(index, freq, n_docs=len(corpus), min_df=min_df, ngram_range=ngram_range)


@dataclass
class SparseVector:
    """Sorted (index, value) pairs of a fixed-dimension vector."""

    indices: np.ndarray
    values: np.ndarray
    dim: int

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dim)
        out[self.indices] = self.values
        return out

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def dot(self, other: "SparseVector") -> float:
        if self.dim != other.dim:
            raise DimensionMismatch(f"{self.dim} != {other.dim}")
        i = j = 0
        total = 0.0
        while i < len(self.indices) and j < len(other.indices):
            a, b = self.indices[i], other.indices[j]
            if a == b:
                total += self.values[i] * other.values[j]
                i += 1
                j += 1
            elif a < b:
                i += 1
            else:
                j += 1
        return total


def tfidf_transform(tokens: list[str], vocab: Vocabulary) -> SparseVector:
    """tf-idf vector of one sentence: raw term counts weighted by
    ln((1+N)/(1+df)) + 1, then L2-normalized.  Out-of-vocabulary terms are
    ignored; a sentence with no in-vocabulary terms maps to the zero
    vector."""
    counts: dict[int, float] = {}
    for term in ngram_terms(tokens, vocab.ngram_range):
        idx = vocab.index.get(term)
        if idx is not None:
            counts[idx] = counts.get(idx, 0.0) + 1.0
    if not counts:
        return SparseVector(np.empty(0, dtype=np.int64), np.empty(0), vocab.size)
    indices = np.array(sorted(counts), dtype=np.int64)
    values = np.array([counts[i] * vocab.idf(i) for i in indices])
    norm = np.linalg.norm(values)
    if norm > 0:
        values = values / norm
    return SparseVector(indices, values, vocab.size)


def stack_sparse(vectors: list[SparseVector]) -> np.ndarray:
    """Dense (n, dim) matrix from sparse vectors of equal dimension."""
    if not vectors:
        return np.zeros((0, 0))
    dim = vectors[0].dim
    out = np.zeros((len(vectors), dim))
    for r, v in enumerate(vectors):
        if v.dim != dim:
            raise DimensionMismatch(f"{v.dim} != {dim}")
        out[r, v.indices] = v.values
    return out


@dataclass
class EmbeddingTable:
    """Token-to-vector map with a fixed dimension."""

    vectors: dict[str, np.ndarray]
    dim: int
    trainable: bool = False

    def __contains__(self, token: str) -> bool:
        return token in self.vectors

    def get(self, token: str) -> np.ndarray | None:
        """Vector for ``token`` or None; absence lets callers fall back to
        a character-level encoding."""
        return self.vectors.get(token)

    def __len__(self) -> int:
        return len(self.vectors)


def load_embeddings(path) -> EmbeddingTable:
    """Read whitespace-separated "token v1 ... vd" lines.  All rows must
    share one dimension; duplicate tokens keep their first occurrence."""
    vectors: dict[str, np.ndarray] = {}
    dim = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh):
            parts = line.rstrip("\n").split()
            if not parts:
                continue
            token, values = parts[0], parts[1:]
            if dim is None:
                dim = len(values)
                if dim == 0:
                    raise DimensionMismatch(f"{path}:{lineno + 1}: no vector components")
            elif len(values) != dim:
                raise DimensionMismatch(
                    f"{path}:{lineno + 1}: expected {dim} components, got {len(values)}"
                )
            if token not in vectors:
                vectors[token] = np.array([float(v) for v in values])
    return EmbeddingTable(vectors, dim or 0)

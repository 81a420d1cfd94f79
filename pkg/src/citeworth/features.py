"""Citation context assembly, handcrafted features and normalization."""

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .corpus.dataset import LabeledSentence
from .errors import DimensionMismatch
from .lda import TopicModel, infer_topics
from .textrep import SparseVector, Vocabulary, tfidf_transform, tokenize

HANDCRAFTED_NAMES = (
    "chars_prev",
    "words_prev",
    "chars_cur",
    "words_cur",
    "chars_next",
    "words_next",
    "prev_has_citation",
    "next_has_citation",
)


@dataclass
class ContextBundle:
    """The citation context: a sentence with its neighbors and section."""

    cur_sentence: LabeledSentence
    prev_sentence: LabeledSentence | None = None
    next_sentence: LabeledSentence | None = None
    section_type: str = ""

    def __post_init__(self):
        if not self.section_type:
            self.section_type = self.cur_sentence.section_type


def build_id_index(sentences: Sequence[LabeledSentence]) -> dict[str, LabeledSentence]:
    return {s.sentence_id: s for s in sentences}


def assemble_context(
    sentences: Sequence[LabeledSentence],
    index: int,
    id_index: dict[str, LabeledSentence] | None = None,
) -> ContextBundle:
    """Resolve a sentence's neighbors through its prev/next links.

    Neighbors are absent at paragraph and document boundaries, where the
    links are None.
    """
    if index < 0 or index >= len(sentences):
        raise IndexError(f"sentence index {index} out of range (n={len(sentences)})")
    if id_index is None:
        id_index = build_id_index(sentences)
    cur = sentences[index]
    return ContextBundle(
        cur_sentence=cur,
        prev_sentence=id_index.get(cur.prev_id) if cur.prev_id else None,
        next_sentence=id_index.get(cur.next_id) if cur.next_id else None,
        section_type=cur.section_type,
    )


def handcrafted_features(
    bundle: ContextBundle,
    citation_flags: tuple[float, float] | None = None,
) -> np.ndarray:
    """The 8 numeric context features: character and word lengths of the
    previous/current/next sentences and the neighbor citation flags.

    Flags default to the neighbors' corpus labels (training-time truth);
    pass ``citation_flags`` to override them with an inference policy.
    A missing neighbor contributes zero lengths and a zero flag.
    """
    prev, cur, nxt = bundle.prev_sentence, bundle.cur_sentence, bundle.next_sentence
    if citation_flags is None:
        citation_flags = (
            float(prev.label) if prev is not None else 0.0,
            float(nxt.label) if nxt is not None else 0.0,
        )
    return np.array(
        [
            float(prev.char_len) if prev is not None else 0.0,
            float(prev.word_len) if prev is not None else 0.0,
            float(cur.char_len),
            float(cur.word_len),
            float(nxt.char_len) if nxt is not None else 0.0,
            float(nxt.word_len) if nxt is not None else 0.0,
            float(citation_flags[0]) if prev is not None else 0.0,
            float(citation_flags[1]) if nxt is not None else 0.0,
        ]
    )


def cosine_similarity(a, b) -> float:
    """a.b / (|a||b|); 0 when either vector has zero norm."""
    if isinstance(a, SparseVector) and isinstance(b, SparseVector):
        na, nb = a.norm(), b.norm()
        if na == 0.0 or nb == 0.0:
            return 0.0
        return a.dot(b) / (na * nb)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} != {b.shape}")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(a @ b / (na * nb))


@dataclass
class Scaler:
    """Column scaling fitted on the training split only: max-abs for sparse
    columns, z-score (population standard deviation) for dense columns.
    Degenerate columns (all-zero sparse, constant dense) pass through
    unchanged and are recorded."""

    sparse_cols: np.ndarray
    dense_cols: np.ndarray
    max_abs: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    degenerate_sparse: list[int] = field(default_factory=list)
    degenerate_dense: list[int] = field(default_factory=list)


def fit_scaler(X: np.ndarray, sparse_cols, dense_cols) -> Scaler:
    sparse_cols = np.asarray(sparse_cols, dtype=np.int64)
    dense_cols = np.asarray(dense_cols, dtype=np.int64)
    max_abs = np.abs(X[:, sparse_cols]).max(axis=0) if len(sparse_cols) else np.empty(0)
    mean = X[:, dense_cols].mean(axis=0) if len(dense_cols) else np.empty(0)
    std = X[:, dense_cols].std(axis=0) if len(dense_cols) else np.empty(0)
    scaler = Scaler(sparse_cols, dense_cols, max_abs, mean, std)
    scaler.degenerate_sparse = [int(c) for c, m in zip(sparse_cols, max_abs) if m == 0.0]
    scaler.degenerate_dense = [int(c) for c, s in zip(dense_cols, std) if s == 0.0]
    return scaler


def apply_scaler(scaler: Scaler, X: np.ndarray) -> np.ndarray:
    """Pure transform with the fitted statistics."""
    out = np.array(X, dtype=float, copy=True)
    if len(scaler.sparse_cols):
        divisor = np.where(scaler.max_abs > 0, scaler.max_abs, 1.0)
        out[:, scaler.sparse_cols] = out[:, scaler.sparse_cols] / divisor
    if len(scaler.dense_cols):
        keep = scaler.std > 0
        centered = out[:, scaler.dense_cols] - np.where(keep, scaler.mean, 0.0)
        out[:, scaler.dense_cols] = centered / np.where(keep, scaler.std, 1.0)
    return out


# ---------------------------------------------------------------------------
# Feature matrices for the interpretable models.

BRANCHES = ("sec", "prev", "cur", "next")
CATEGORY_LABELS = {
    "sec": "section",
    "prev": "prev_sentence",
    "cur": "cur_sentence",
    "next": "next_sentence",
}


@dataclass
class FeatureSpace:
    """Column layout of an interpretable-model feature matrix."""

    names: list[str]
    categories: list[str]
    sparse_cols: np.ndarray
    dense_cols: np.ndarray


def _branch_texts(bundle: ContextBundle) -> dict[str, str | None]:
    return {
        "sec": bundle.section_type,
        "prev": bundle.prev_sentence.text if bundle.prev_sentence else None,
        "cur": bundle.cur_sentence.text,
        "next": bundle.next_sentence.text if bundle.next_sentence else None,
    }


def feature_space(
    vocab: Vocabulary,
    topics: TopicModel | None = None,
    contextual: bool = True,
) -> FeatureSpace:
    """Column names/categories for the chosen representation.

    Bag-of-words blocks count as sparse; topic-mixture blocks and the
    numeric block (lengths, similarities, citation flags) count as dense.
    """
    names: list[str] = []
    categories: list[str] = []
    sparse_cols: list[int] = []
    dense_cols: list[int] = []
    branches = BRANCHES if contextual else ("cur",)
    if topics is None:
        block_terms = vocab.terms()
        block_sparse = True
    else:
        block_terms = [f"topic{k}" for k in range(topics.n_topics)]
        block_sparse = False
    for branch in branches:
        for term in block_terms:
            (sparse_cols if block_sparse else dense_cols).append(len(names))
            names.append(f"{branch}:{term}")
            categories.append(CATEGORY_LABELS[branch])
    if contextual:
        numeric = list(HANDCRAFTED_NAMES[:6]) + ["sim_prev_cur", "sim_next_cur"] + list(
            HANDCRAFTED_NAMES[6:]
        )
        for name in numeric:
            dense_cols.append(len(names))
            names.append(f"num:{name}")
            categories.append("numeric")
    return FeatureSpace(
        names,
        categories,
        np.array(sparse_cols, dtype=np.int64),
        np.array(dense_cols, dtype=np.int64),
    )


def build_feature_matrix(
    bundles: Sequence[ContextBundle],
    vocab: Vocabulary,
    topics: TopicModel | None = None,
    contextual: bool = True,
    citation_flags: Sequence[tuple[float, float]] | None = None,
) -> tuple[np.ndarray, FeatureSpace]:
    """Assemble the model matrix for a list of context bundles.

    Per branch (section / previous / current / next) either a tf-idf block
    or a topic-mixture block; contextual mode appends the numeric block:
    six lengths, two tf-idf cosine similarities with the neighbors and the
    two neighbor citation flags.
    """
    space = feature_space(vocab, topics, contextual)
    branches = BRANCHES if contextual else ("cur",)
    rows = []
    for i, bundle in enumerate(bundles):
        texts = _branch_texts(bundle)
        blocks = []
        branch_tfidf: dict[str, SparseVector] = {}
        for branch in branches:
            text = texts[branch]
            toks = tokenize(text) if text else []
            if topics is None:
                vec = tfidf_transform(toks, vocab)
                branch_tfidf[branch] = vec
                blocks.append(vec.to_dense())
            else:
                if toks:
                    blocks.append(infer_topics(toks, topics, seed=0))
                else:
                    blocks.append(np.zeros(topics.n_topics))
        if contextual:
            if topics is None:
                sims = (
                    cosine_similarity(branch_tfidf["prev"], branch_tfidf["cur"]),
                    cosine_similarity(branch_tfidf["next"], branch_tfidf["cur"]),
                )
            else:
                cur_vec = tfidf_transform(tokenize(texts["cur"]), vocab)
                prev_vec = tfidf_transform(
                    tokenize(texts["prev"]) if texts["prev"] else [], vocab
                )
                next_vec = tfidf_transform(
                    tokenize(texts["next"]) if texts["next"] else [], vocab
                )
                sims = (
                    cosine_similarity(prev_vec, cur_vec),
                    cosine_similarity(next_vec, cur_vec),
                )
            flags = citation_flags[i] if citation_flags is not None else None
            hand = handcrafted_features(bundle, flags)
            numeric = np.concatenate([hand[:6], np.array(sims), hand[6:]])
            blocks.append(numeric)
        rows.append(np.concatenate(blocks))
    X = np.vstack(rows) if rows else np.zeros((0, len(space.names)))
    return X, space


def bundles_for(
    sentences: Sequence[LabeledSentence],
) -> list[ContextBundle]:
    """Context bundles for every sentence of a corpus list."""
    id_index = build_id_index(sentences)
    return [assemble_context(sentences, i, id_index) for i in range(len(sentences))]

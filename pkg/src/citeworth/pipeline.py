"""End-to-end training and scoring on top of the model artifact.

``train_model`` turns a corpus split into a ModelArtifact of any family;
``SentenceScorer`` maps raw text or labeled sentences to citing
probabilities through the artifact's own preprocessing state.

Neighbor citation flags: at training (and when evaluating on labeled
corpora) the true corpus labels feed the flag features.  A submitted
manuscript carries no citation information, so inference defaults the
flags to zero; the optional two-pass policy feeds first-pass decisions
back in as flags.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .artifact import ModelArtifact
from .corpus.dataset import CorpusSplit, LabeledSentence, sentence_lengths
from .corpus.hints import strip_citation_hints
from .corpus.dataset import clean_sentence
from .corpus.segment import segment_sentences
from .errors import FormatMismatch
from .features import apply_scaler, build_feature_matrix, bundles_for, fit_scaler
from .lda import fit_lda
from .linear import predict_enlr, predict_rf, train_enlr, train_rf
from .neural.model import NeuralConfig, NeuralModel
from .neural.training import TrainConfig, train
from .textrep import EmbeddingTable, fit_vocab, tokenize

FLAG_POLICIES = ("labels", "zeros", "two_pass")


def _corpus_tokens(sentences: Sequence[LabeledSentence]) -> list[list[str]]:
    return [tokenize(s.text) for s in sentences]


def train_model(
    family: str,
    split: CorpusSplit,
    representation: str = "bow",
    contextual: bool = True,
    attention: str = "cos",
    min_df: int = 1,
    n_topics: int = 200,
    lda_iterations: int = 1000,
    lda_burn_in: int = 200,
    alpha_grid: Sequence[float] = (0.5,),
    lambda_grid: Sequence[float] = (0.001,),
    cv_folds: int = 1,
    n_trees: int = 100,
    neural_config: NeuralConfig | None = None,
    train_config: TrainConfig | None = None,
    pretrained: EmbeddingTable | None = None,
    seed: int = 0,
) -> ModelArtifact:
    """Fit one model family on a corpus split and package it."""
    if family not in ("enlr", "rf", "neural"):
        raise FormatMismatch(f"unknown model family {family!r}")

    if family == "neural":
        config = neural_config or NeuralConfig(attention=attention, contextual=contextual, seed=seed)
        config.contextual = contextual
        config.attention = attention
        texts = [tokenize(s.text) for s in split.train]
        texts += [tokenize(s.section_type) for s in split.train]
        model = NeuralModel.build(texts, config, pretrained)
        tcfg = train_config or TrainConfig(seed=seed)
        train(model, tcfg, split.train, split.validation, contextual=contextual)
        return ModelArtifact(family="neural", model=model, contextual=contextual)

    corpus_tokens = _corpus_tokens(split.train)
    vocab = fit_vocab(corpus_tokens, min_df=min_df)
    topics = None
    if representation == "tm":
        topics = fit_lda(
            corpus_tokens,
            n_topics=n_topics,
            iterations=lda_iterations,
            burn_in=lda_burn_in,
            seed=seed,
        )
    elif representation != "bow":
        raise FormatMismatch(f"unknown representation {representation!r}")

    bundles = bundles_for(split.train)
    X, space = build_feature_matrix(bundles, vocab, topics, contextual)
    scaler = fit_scaler(X, space.sparse_cols, space.dense_cols)
    Xs = apply_scaler(scaler, X)
    y = np.array([int(s.label) for s in split.train])
    if family == "enlr":
        model = train_enlr(
            Xs, y,
            alpha_grid=alpha_grid, lambda_grid=lambda_grid,
            cv_folds=cv_folds, seed=seed, feature_names=space.names,
        )
    else:
        model = train_rf(Xs, y, n_trees=n_trees, seed=seed, feature_names=space.names)
    return ModelArtifact(
        family=family,
        model=model,
        contextual=contextual,
        representation=representation,
        vocab=vocab,
        topics=topics,
        scaler=scaler,
    )


def sentences_from_text(raw_text: str, section_type: str = "unknown") -> list[LabeledSentence]:
    """Segment a pasted manuscript into scoring-ready sentences.

    The corpus cleanup (hint stripping, noise removal) runs on every
    sentence; neighbors are linked in reading order.  Labels are unknown
    and stored as False.
    """
    out: list[LabeledSentence] = []
    for i, raw in enumerate(segment_sentences(raw_text)):
        text = clean_sentence(strip_citation_hints(raw))
        c, w = sentence_lengths(text)
        out.append(
            LabeledSentence(
                sentence_id=f"input:{i}",
                text=text,
                label=False,
                section_type=section_type,
                char_len=c,
                word_len=w,
            )
        )
    for i, s in enumerate(out):
        if i > 0:
            s.prev_id = out[i - 1].sentence_id
        if i + 1 < len(out):
            s.next_id = out[i + 1].sentence_id
    return out


def sentences_from_records(records: Sequence[dict]) -> list[LabeledSentence]:
    """Scoring-ready sentences from {"text", "section_type"?} dicts."""
    out = []
    for i, rec in enumerate(records):
        text = clean_sentence(strip_citation_hints(rec["text"]))
        c, w = sentence_lengths(text)
        out.append(
            LabeledSentence(
                sentence_id=f"input:{i}",
                text=text,
                label=False,
                section_type=rec.get("section_type") or "unknown",
                char_len=c,
                word_len=w,
            )
        )
    for i, s in enumerate(out):
        if i > 0:
            s.prev_id = out[i - 1].sentence_id
        if i + 1 < len(out):
            s.next_id = out[i + 1].sentence_id
    return out


@dataclass
class PredictionResult:
    text: str
    probability: float
    worthy: bool
    section_type: str

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "probability": self.probability,
            "worthy": self.worthy,
            "section_type": self.section_type,
        }


class SentenceScorer:
    """Stateless scoring facade over a loaded ModelArtifact."""

    def __init__(self, artifact: ModelArtifact):
        self.artifact = artifact

    def _flags(self, bundles, policy, decisions=None):
        if policy == "labels":
            return None  # handcrafted_features falls back to true labels
        flags = []
        for b in bundles:
            if policy == "zeros" or decisions is None:
                flags.append((0.0, 0.0))
            else:
                prev = decisions.get(b.prev_sentence.sentence_id, 0.0) if b.prev_sentence else 0.0
                nxt = decisions.get(b.next_sentence.sentence_id, 0.0) if b.next_sentence else 0.0
                flags.append((float(prev), float(nxt)))
        return flags

    def _score_once(self, sentences, contextual, flags) -> np.ndarray:
        art = self.artifact
        bundles = bundles_for(list(sentences))
        scorable = [i for i, s in enumerate(sentences) if tokenize(s.text)]
        probs = np.zeros(len(bundles))
        if not scorable:
            return probs
        sub_bundles = [bundles[i] for i in scorable]
        sub_flags = [flags[i] for i in scorable] if flags is not None else None
        if art.family == "neural":
            probs[scorable] = art.model.predict_proba(sub_bundles, contextual, flags=sub_flags)
            return probs
        X, space = build_feature_matrix(
            sub_bundles, art.vocab, art.topics, contextual, citation_flags=sub_flags
        )
        Xs = apply_scaler(art.scaler, X)
        if art.family == "enlr":
            probs[scorable] = predict_enlr(art.model, Xs)
        else:
            probs[scorable] = predict_rf(art.model, Xs)
        return probs

    def score_sentences(
        self,
        sentences: Sequence[LabeledSentence],
        contextual: bool | None = None,
        flag_policy: str = "labels",
        threshold: float = 0.5,
    ) -> np.ndarray:
        """Citing probability per sentence.

        Sentences with no tokens score 0.  ``flag_policy`` chooses where
        the neighbor citation flags come from: corpus labels, zeros, or a
        two-pass feedback loop.
        """
        if flag_policy not in FLAG_POLICIES:
            raise ValueError(f"unknown flag policy {flag_policy!r}")
        contextual = self.artifact.contextual if contextual is None else contextual
        sentences = list(sentences)
        bundles = bundles_for(sentences)
        flags = self._flags(bundles, flag_policy if flag_policy != "two_pass" else "zeros")
        probs = self._score_once(sentences, contextual, flags)
        if flag_policy == "two_pass":
            decisions = {
                s.sentence_id: float(p >= threshold) for s, p in zip(sentences, probs)
            }
            flags = self._flags(bundles, "two_pass", decisions)
            probs = self._score_once(sentences, contextual, flags)
        return probs

    def predict(
        self,
        raw_text: str | None = None,
        records: Sequence[dict] | None = None,
        contextual: bool | None = None,
        threshold: float = 0.5,
        flag_policy: str = "zeros",
    ) -> list[PredictionResult]:
        """Score a manuscript (raw text) or pre-segmented sentence records."""
        if (raw_text is None) == (records is None):
            raise ValueError("provide exactly one of raw_text or records")
        if raw_text is not None:
            sentences = sentences_from_text(raw_text)
        else:
            sentences = sentences_from_records(records)
        if not sentences:
            return []
        probs = self.score_sentences(sentences, contextual, flag_policy, threshold)
        return [
            PredictionResult(
                text=s.text,
                probability=float(p),
                worthy=bool(p >= threshold),
                section_type=s.section_type,
            )
            for s, p in zip(sentences, probs)
        ]

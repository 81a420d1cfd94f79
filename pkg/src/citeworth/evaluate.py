"""Metrics and evaluation harnesses.

Precision, recall and F1 are always reported for the minority (citing)
class.  The harnesses cover class-imbalance sensitivity (down-sampling the
majority class), cross-corpus generalization (including a combined-corpus
model) and ranked high-probability reports for manual audits.
"""

import csv
import json
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .corpus.dataset import CorpusSplit, LabeledSentence
from .errors import FormatMismatch, LengthMismatch, RatioUnreachable


@dataclass
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


def confusion(predictions, labels) -> ConfusionCounts:
    preds = np.asarray(predictions, dtype=bool)
    labs = np.asarray(labels, dtype=bool)
    if preds.shape != labs.shape:
        raise LengthMismatch(f"{preds.shape} != {labs.shape}")
    tp = int(np.sum(preds & labs))
    fp = int(np.sum(preds & ~labs))
    fn = int(np.sum(~preds & labs))
    tn = int(np.sum(~preds & ~labs))
    return ConfusionCounts(tp, fp, fn, tn)


@dataclass
class MetricTriple:
    precision: float
    recall: float
    f1: float
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "degenerate": self.degenerate,
        }


def metrics_from_confusion(c: ConfusionCounts) -> MetricTriple:
    """P = tp/(tp+fp), R = tp/(tp+fn), F1 = harmonic mean.  A zero
    denominator yields 0 and sets the degenerate flag."""
    degenerate = False
    if c.tp + c.fp > 0:
        precision = c.tp / (c.tp + c.fp)
    else:
        precision, degenerate = 0.0, True
    if c.tp + c.fn > 0:
        recall = c.tp / (c.tp + c.fn)
    else:
        recall, degenerate = 0.0, True
    if precision + recall > 0:
        f1 = 2 * precision * recall / (precision + recall)
    else:
        f1, degenerate = 0.0, True
    return MetricTriple(precision, recall, f1, degenerate)


def prf1(predictions, labels) -> MetricTriple:
    """Precision/recall/F1 of the positive (citing) class."""
    return metrics_from_confusion(confusion(predictions, labels))


def counts_for_rates(precision: float, recall: float, scale: int = 10**6) -> ConfusionCounts:
    """Synthesize integer confusion counts that reproduce the given
    precision and recall to within rounding at the chosen scale."""
    tp = int(round(scale * precision * recall))
    fp = int(round(scale * recall * (1 - precision)))
    fn = int(round(scale * precision * (1 - recall)))
    return ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=0)


def arrays_from_counts(c: ConfusionCounts) -> tuple[np.ndarray, np.ndarray]:
    """(predictions, labels) boolean arrays realizing the counts."""
    preds = np.concatenate(
        [
            np.ones(c.tp, dtype=bool),
            np.ones(c.fp, dtype=bool),
            np.zeros(c.fn, dtype=bool),
            np.zeros(c.tn, dtype=bool),
        ]
    )
    labels = np.concatenate(
        [
            np.ones(c.tp, dtype=bool),
            np.zeros(c.fp, dtype=bool),
            np.ones(c.fn, dtype=bool),
            np.zeros(c.tn, dtype=bool),
        ]
    )
    return preds, labels


def downsample(split: CorpusSplit, ratio: float, seed: int = 0) -> CorpusSplit:
    """Subsample the majority class of the training set to ``ratio`` times
    the minority count (uniform, without replacement, seeded).  Validation
    and test sets keep their natural class proportions.  A ratio beyond the
    natural one leaves the split unchanged with a warning."""
    if ratio < 1:
        raise ValueError(f"ratio must be >= 1, got {ratio}")
    minority = [s for s in split.train if s.label]
    majority = [s for s in split.train if not s.label]
    if len(minority) > len(majority):
        minority, majority = majority, minority
    if not minority:
        warnings.warn("training set has a single class; split unchanged", RatioUnreachable)
        return split
    target = int(round(ratio * len(minority)))
    if target >= len(majority):
        if target > len(majority):
            warnings.warn(
                f"ratio {ratio} exceeds the natural ratio "
                f"{len(majority) / max(len(minority), 1):.2f}; split unchanged",
                RatioUnreachable,
            )
        return split
    rng = np.random.default_rng(seed)
    chosen = set(rng.choice(len(majority), size=target, replace=False).tolist())
    kept_majority = [s for i, s in enumerate(majority) if i in chosen]
    keep_ids = {s.sentence_id for s in minority} | {s.sentence_id for s in kept_majority}
    train = [s for s in split.train if s.sentence_id in keep_ids]
    return CorpusSplit(train, split.validation, split.test, split.split_fractions, split.seed)


def downsample_sweep(
    split: CorpusSplit,
    ratios: Sequence[float],
    train_fn: Callable[[CorpusSplit], Callable[[list[LabeledSentence]], np.ndarray]],
    threshold: float = 0.5,
    seed: int = 0,
) -> list[dict]:
    """Train once per down-sampling ratio and evaluate on the untouched
    test set.  ``train_fn`` maps a split to a probability scorer."""
    rows = []
    for ratio in ratios:
        sub = downsample(split, ratio, seed=seed)
        score = train_fn(sub)
        probs = np.asarray(score(sub.test))
        triple = prf1(probs >= threshold, [s.label for s in sub.test])
        rows.append({"ratio": ratio, **triple.to_dict()})
    return rows


def cross_corpus(
    train_fn: Callable[[CorpusSplit], Callable[[list[LabeledSentence]], np.ndarray]],
    corpora: dict[str, CorpusSplit],
    threshold: float = 0.5,
    seed: int = 0,
) -> list[dict]:
    """Generalization grid: train on each corpus and on a balanced combined
    sample, evaluate on every corpus' test set."""
    if len(corpora) < 2:
        raise FormatMismatch(f"need at least 2 corpora, got {len(corpora)}")
    names = list(corpora)
    scorers = {name: train_fn(corpora[name]) for name in names}

    rng = np.random.default_rng(seed)
    share = min(len(corpora[n].train) for n in names) // len(names)
    combined_train: list[LabeledSentence] = []
    for name in names:
        train = corpora[name].train
        take = min(share, len(train))
        idx = sorted(rng.choice(len(train), size=take, replace=False).tolist())
        combined_train.extend(train[i] for i in idx)
    combined_split = CorpusSplit(
        combined_train,
        corpora[names[0]].validation,
        corpora[names[0]].test,
    )
    scorers["combined"] = train_fn(combined_split)

    rows = []
    for train_name in names + ["combined"]:
        for test_name in names:
            test = corpora[test_name].test
            probs = np.asarray(scorers[train_name](test))
            triple = prf1(probs >= threshold, [s.label for s in test])
            rows.append(
                {"train": train_name, "test": test_name, **triple.to_dict()}
            )
    return rows


def ranked_report(
    score_fn: Callable[[list[LabeledSentence]], np.ndarray],
    sentences: Sequence[LabeledSentence],
    top_k: int = 10,
    threshold: float = 0.5,
) -> list[dict]:
    """Sentences predicted citing, ranked by probability (descending) and
    truncated to ``top_k`` — the audit list of likely missing citations."""
    sentences = list(sentences)
    if not sentences:
        return []
    probs = np.asarray(score_fn(sentences), dtype=float)
    order = np.argsort(-probs, kind="stable")
    rows = []
    for i in order:
        if probs[i] < threshold or len(rows) >= top_k:
            break
        rows.append(
            {
                "sentence": sentences[i].text,
                "section": sentences[i].section_type,
                "probability": float(probs[i]),
            }
        )
    return rows


def write_rows_csv(rows: list[dict], path) -> None:
    if not rows:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write("")
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)


def write_rows_json(rows: list[dict], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(rows, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cross_corpus_csv(rows: list[dict], path) -> None:
    """CSV with a human-readable train→test label per row."""
    out = [
        {
            "train_to_test": f"{r['train']}->{r['test']}",
            "precision": r["precision"],
            "recall": r["recall"],
            "f1": r["f1"],
        }
        for r in rows
    ]
    write_rows_csv(out, path)

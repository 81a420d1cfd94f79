"""Labeled sentence datasets: cleanup, outlier filtering, splits, stats, IO."""

import json
import re
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from ..errors import FormatMismatch, InsufficientData
from .hints import has_citation_hint, strip_citation_hints
from .jats import ArticleTree

DEFAULT_CHAR_BOUNDS = (19, 275)
DEFAULT_WORD_BOUNDS = (3, 42)
DEFAULT_FRACTIONS = (0.6, 0.2, 0.2)

_LEADING_JUNK = re.compile(r"^[\W\d_]+")
_TRAILING_DIGITS = re.compile(r"[\d\s]+$")


@dataclass
class LabeledSentence:
    """One cleaned sentence with its citation label and neighbor links."""

    sentence_id: str
    text: str
    label: bool
    section_type: str
    char_len: int
    word_len: int
    prev_id: str | None = None
    next_id: str | None = None
    prev_has_citation: bool = False
    next_has_citation: bool = False

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "LabeledSentence":
        return cls(**{k: d[k] for k in cls.__dataclass_fields__})


@dataclass
class CorpusSplit:
    train: list[LabeledSentence]
    validation: list[LabeledSentence]
    test: list[LabeledSentence]
    split_fractions: tuple[float, float, float] = DEFAULT_FRACTIONS
    seed: int = 0

    def all_sentences(self) -> list[LabeledSentence]:
        return list(self.train) + list(self.validation) + list(self.test)


def clean_sentence(text: str) -> str:
    """Noise cleanup: trim whitespace, drop leading digits/punctuation and
    trailing digits.  Internal text is untouched."""
    s = text.strip()
    s = _LEADING_JUNK.sub("", s)
    s = _TRAILING_DIGITS.sub("", s)
    return s.strip()


def _text_of(item) -> str:
    return item if isinstance(item, str) else item.text


def sentence_lengths(text: str) -> tuple[int, int]:
    return len(text), len(text.split())


def filter_outliers(
    sentences: Sequence,
    char_bounds: tuple[int, int] = DEFAULT_CHAR_BOUNDS,
    word_bounds: tuple[int, int] = DEFAULT_WORD_BOUNDS,
    data_driven: bool = False,
    quantiles: tuple[float, float] = (0.05, 0.95),
) -> list:
    """Keep sentences whose character and word counts both fall inside the
    closed bounds.  ``data_driven=True`` replaces the fixed bounds with the
    empirical 5%/95% quantiles of the input."""
    for low, high in (char_bounds, word_bounds):
        if not (0 < low < high):
            raise ValueError(f"bad bounds ({low}, {high})")
    texts = [_text_of(s) for s in sentences]
    if data_driven and texts:
        chars = np.array([len(t) for t in texts])
        words = np.array([len(t.split()) for t in texts])
        char_bounds = tuple(np.quantile(chars, quantiles))
        word_bounds = tuple(np.quantile(words, quantiles))
    kept = []
    for item, text in zip(sentences, texts):
        c, w = sentence_lengths(text)
        if char_bounds[0] <= c <= char_bounds[1] and word_bounds[0] <= w <= word_bounds[1]:
            kept.append(item)
    return kept


def label_article(
    article: ArticleTree,
    char_bounds: tuple[int, int] = DEFAULT_CHAR_BOUNDS,
    word_bounds: tuple[int, int] = DEFAULT_WORD_BOUNDS,
) -> list[LabeledSentence]:
    """Run the sentence pipeline over one article.

    Each raw sentence is labeled (bibliographic cross-reference or citation
    hint present), then hint-stripped, cleaned and length-filtered.
    Neighbor links connect consecutive retained sentences within the same
    paragraph.
    """
    out: list[LabeledSentence] = []
    for si, section in enumerate(article.sections):
        for pi, paragraph in enumerate(section.paragraphs):
            kept: list[LabeledSentence] = []
            for raw in paragraph.sentences:
                label = raw.has_citation or has_citation_hint(raw.text)
                text = clean_sentence(strip_citation_hints(raw.text))
                c, w = sentence_lengths(text)
                if not (char_bounds[0] <= c <= char_bounds[1]):
                    continue
                if not (word_bounds[0] <= w <= word_bounds[1]):
                    continue
                sid = f"{article.article_id}:s{si}:p{pi}:{len(kept)}"
                kept.append(
                    LabeledSentence(
                        sentence_id=sid,
                        text=text,
                        label=label,
                        section_type=section.section_type,
                        char_len=c,
                        word_len=w,
                    )
                )
            for i, sent in enumerate(kept):
                if i > 0:
                    sent.prev_id = kept[i - 1].sentence_id
                    sent.prev_has_citation = kept[i - 1].label
                if i + 1 < len(kept):
                    sent.next_id = kept[i + 1].sentence_id
                    sent.next_has_citation = kept[i + 1].label
            out.extend(kept)
    return out


def build_dataset(
    articles: Sequence[ArticleTree],
    fractions: tuple[float, float, float] = DEFAULT_FRACTIONS,
    seed: int = 0,
    char_bounds: tuple[int, int] = DEFAULT_CHAR_BOUNDS,
    word_bounds: tuple[int, int] = DEFAULT_WORD_BOUNDS,
) -> CorpusSplit:
    """Shuffle whole articles with ``seed`` and split them into train,
    validation and test sets.  No article is split across sets, so
    contextual information never leaks between them."""
    if len(fractions) != 3 or abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError(f"fractions must sum to 1, got {fractions}")
    if any(f < 0 for f in fractions):
        raise ValueError(f"fractions must be non-negative, got {fractions}")
    if len(articles) < 3:
        raise InsufficientData(f"need at least 3 articles, got {len(articles)}")

    order = np.random.default_rng(seed).permutation(len(articles))
    n = len(articles)
    n_train = int(round(fractions[0] * n))
    n_valid = int(round((fractions[0] + fractions[1]) * n)) - n_train
    buckets: list[list[LabeledSentence]] = [[], [], []]
    for rank, art_idx in enumerate(order):
        which = 0 if rank < n_train else (1 if rank < n_train + n_valid else 2)
        buckets[which].extend(
            label_article(articles[art_idx], char_bounds, word_bounds)
        )
    return CorpusSplit(buckets[0], buckets[1], buckets[2], tuple(fractions), seed)


def _id_structure_counts(sentences: Iterable[LabeledSentence]):
    """Distinct article/section/paragraph counts recovered from sentence
    ids of the form ``article:sX:pY:K``; None when ids are unstructured."""
    articles, sections, paragraphs = set(), set(), set()
    for s in sentences:
        parts = s.sentence_id.rsplit(":", 3)
        if len(parts) != 4 or not parts[1].startswith("s") or not parts[2].startswith("p"):
            return None, None, None
        articles.add(parts[0])
        sections.add((parts[0], parts[1]))
        paragraphs.add((parts[0], parts[1], parts[2]))
    return len(articles), len(sections), len(paragraphs)


def corpus_stats(corpus) -> dict:
    """Summary table for a corpus: counts, label balance and mean lengths.

    Accepts a CorpusSplit (adds per-split sub-tables) or a list of
    LabeledSentence.
    """
    if isinstance(corpus, CorpusSplit):
        stats = corpus_stats(corpus.all_sentences())
        stats["splits"] = {
            "train": corpus_stats(corpus.train),
            "validation": corpus_stats(corpus.validation),
            "test": corpus_stats(corpus.test),
        }
        return stats

    sentences = list(corpus)
    n = len(sentences)
    citing = sum(1 for s in sentences if s.label)
    articles, sections, paragraphs = _id_structure_counts(sentences)
    return {
        "articles": articles,
        "sections": sections,
        "paragraphs": paragraphs,
        "sentences": n,
        "sentences_with_citations": citing,
        "sentences_without_citations": n - citing,
        "avg_chars_per_sentence": (sum(s.char_len for s in sentences) / n) if n else 0.0,
        "avg_words_per_sentence": (sum(s.word_len for s in sentences) / n) if n else 0.0,
        "noncite_to_cite_ratio": ((n - citing) / citing) if citing else 0.0,
    }


# ---------------------------------------------------------------------------
# Dataset file IO: JSON-lines (default) and tab-separated, one sentence per
# record with exactly the LabeledSentence fields.

_FIELDS = list(LabeledSentence.__dataclass_fields__)


def write_jsonl(sentences: Iterable[LabeledSentence], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for s in sentences:
            fh.write(json.dumps(s.to_dict(), ensure_ascii=False, sort_keys=True))
            fh.write("\n")


def read_jsonl(path) -> list[LabeledSentence]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(LabeledSentence.from_dict(json.loads(line)))
    return out


def write_tsv(sentences: Iterable[LabeledSentence], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(_FIELDS) + "\n")
        for s in sentences:
            d = s.to_dict()
            row = []
            for f in _FIELDS:
                v = d[f]
                if v is None:
                    v = ""
                elif isinstance(v, bool):
                    v = int(v)
                row.append(str(v))
            fh.write("\t".join(row) + "\n")


def read_tsv(path) -> list[LabeledSentence]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if header != _FIELDS:
            raise FormatMismatch(f"unexpected TSV header in {path}")
        for line in fh:
            if not line.strip():
                continue
            vals = line.rstrip("\n").split("\t")
            d = dict(zip(_FIELDS, vals))
            out.append(
                LabeledSentence(
                    sentence_id=d["sentence_id"],
                    text=d["text"],
                    label=bool(int(d["label"])),
                    section_type=d["section_type"],
                    char_len=int(d["char_len"]),
                    word_len=int(d["word_len"]),
                    prev_id=d["prev_id"] or None,
                    next_id=d["next_id"] or None,
                    prev_has_citation=bool(int(d["prev_has_citation"])),
                    next_has_citation=bool(int(d["next_has_citation"])),
                )
            )
    return out


def read_flat_labeled(path, section_type: str = "unknown") -> list[LabeledSentence]:
    """Reader for pre-segmented distributions: one sentence per line with a
    0/1 label column (tab-separated; the label may be the first or the last
    column).  No article structure, so sentences carry no neighbor links."""
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            cols = line.split("\t")
            if len(cols) < 2:
                raise FormatMismatch(f"{path}:{lineno + 1}: expected >= 2 tab-separated columns")
            if cols[-1] in ("0", "1"):
                label, text = cols[-1] == "1", "\t".join(cols[:-1])
            elif cols[0] in ("0", "1"):
                label, text = cols[0] == "1", "\t".join(cols[1:])
            else:
                raise FormatMismatch(f"{path}:{lineno + 1}: no 0/1 label column")
            c, w = sentence_lengths(text)
            out.append(
                LabeledSentence(
                    sentence_id=f"flat:{lineno}",
                    text=text,
                    label=label,
                    section_type=section_type,
                    char_len=c,
                    word_len=w,
                )
            )
    return out


def write_split(split: CorpusSplit, out_dir) -> None:
    """Write train.jsonl / valid.jsonl / test.jsonl plus stats.json."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    write_jsonl(split.train, os.path.join(out_dir, "train.jsonl"))
    write_jsonl(split.validation, os.path.join(out_dir, "valid.jsonl"))
    write_jsonl(split.test, os.path.join(out_dir, "test.jsonl"))
    with open(os.path.join(out_dir, "stats.json"), "w", encoding="utf-8") as fh:
        json.dump(corpus_stats(split), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_split(data_dir) -> CorpusSplit:
    import os

    return CorpusSplit(
        train=read_jsonl(os.path.join(data_dir, "train.jsonl")),
        validation=read_jsonl(os.path.join(data_dir, "valid.jsonl")),
        test=read_jsonl(os.path.join(data_dir, "test.jsonl")),
    )

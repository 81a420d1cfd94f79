"""Corpus compilation: JATS parsing, segmentation, labeling, splits."""

from .dataset import (
    CorpusSplit,
    DEFAULT_CHAR_BOUNDS,
    DEFAULT_FRACTIONS,
    DEFAULT_WORD_BOUNDS,
    LabeledSentence,
    build_dataset,
    clean_sentence,
    corpus_stats,
    filter_outliers,
    label_article,
    read_flat_labeled,
    read_jsonl,
    read_split,
    read_tsv,
    write_jsonl,
    write_split,
    write_tsv,
)
from .hints import has_citation_hint, strip_citation_hints
from .jats import ArticleTree, Paragraph, RawSentence, Section, extract_paragraph, parse_article
from .segment import DEFAULT_ABBREVIATIONS, segment_sentences

__all__ = [
    "ArticleTree",
    "CorpusSplit",
    "DEFAULT_ABBREVIATIONS",
    "DEFAULT_CHAR_BOUNDS",
    "DEFAULT_FRACTIONS",
    "DEFAULT_WORD_BOUNDS",
    "LabeledSentence",
    "Paragraph",
    "RawSentence",
    "Section",
    "build_dataset",
    "clean_sentence",
    "corpus_stats",
    "extract_paragraph",
    "filter_outliers",
    "has_citation_hint",
    "label_article",
    "parse_article",
    "read_flat_labeled",
    "read_jsonl",
    "read_split",
    "read_tsv",
    "segment_sentences",
    "strip_citation_hints",
    "write_jsonl",
    "write_split",
    "write_tsv",
]

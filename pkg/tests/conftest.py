import os

import numpy as np
import pytest

from citeworth.corpus import CorpusSplit, LabeledSentence, parse_article

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "fixtures")
JATS_DIR = os.path.join(FIXTURE_DIR, "jats")


@pytest.fixture(scope="session")
def jats_dir():
    return JATS_DIR


@pytest.fixture(scope="session")
def fixture_articles():
    trees = []
    for name in ("art1.xml", "art2.xml", "art3.xml"):
        with open(os.path.join(JATS_DIR, name), "rb") as fh:
            trees.append(parse_article(fh.read()))
    return trees


def make_sentence(i, text, label, section="intro", prev=None, nxt=None,
                  prev_cit=False, next_cit=False, prefix="doc"):
    return LabeledSentence(
        sentence_id=f"{prefix}:s0:p0:{i}",
        text=text,
        label=label,
        section_type=section,
        char_len=len(text),
        word_len=len(text.split()),
        prev_id=prev,
        next_id=nxt,
        prev_has_citation=prev_cit,
        next_has_citation=next_cit,
    )


def linked_sentences(texts_labels, section="intro", prefix="doc"):
    """Build a paragraph of linked LabeledSentences from (text, label)."""
    out = []
    for i, (text, label) in enumerate(texts_labels):
        out.append(make_sentence(i, text, label, section, prefix=prefix))
    for i, s in enumerate(out):
        if i > 0:
            s.prev_id = out[i - 1].sentence_id
            s.prev_has_citation = out[i - 1].label
        if i + 1 < len(out):
            s.next_id = out[i + 1].sentence_id
            s.next_has_citation = out[i + 1].label
    return out


def synthetic_split(n_citing=30, n_noncite=60, seed=3, prefix="syn") -> CorpusSplit:
    """A small linked corpus whose label correlates with the word
    'previously'; used by the model-level tests."""
    rng = np.random.default_rng(seed)
    filler = ["signal", "sample", "tissue", "growth", "model", "assay",
              "result", "control", "values", "method"]
    records = []
    for k in range(n_citing + n_noncite):
        label = k < n_citing
        words = [str(filler[rng.integers(0, len(filler))]) for _ in range(5)]
        if label:
            words.insert(int(rng.integers(0, 5)), "previously")
        words[0] = words[0].capitalize()
        records.append((" ".join(words) + ".", label))
    order = rng.permutation(len(records))
    records = [records[i] for i in order]
    sentences = linked_sentences(records, prefix=prefix)
    n = len(sentences)
    return CorpusSplit(
        train=sentences[: int(0.6 * n)],
        validation=sentences[int(0.6 * n) : int(0.8 * n)],
        test=sentences[int(0.8 * n) :],
    )

"""JATS XML article parsing.

Turns a JATS article into a tree of sections, paragraphs and sentences.
Paragraph text is extracted recursively so that inline markup (italic,
bold, sub/sup, ...) is flattened into plain character data in document
order.  Cross-references with ``ref-type="bibr"`` are recorded as citation
markers at their character positions.
"""

import gzip
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from ..errors import EmptyArticle, MalformedXml
from .segment import segment_sentences

_GZIP_MAGIC = b"\x1f\x8b"


@dataclass
class RawSentence:
    """A segmented sentence before hint stripping and cleanup."""

    text: str
    citation_spans: list[tuple[int, int]] = field(default_factory=list)

    @property
    def has_citation(self) -> bool:
        return bool(self.citation_spans)


@dataclass
class Paragraph:
    sentences: list[RawSentence] = field(default_factory=list)


@dataclass
class Section:
    section_type: str
    title: str
    paragraphs: list[Paragraph] = field(default_factory=list)


@dataclass
class ArticleTree:
    article_id: str
    sections: list[Section] = field(default_factory=list)

    def iter_sentences(self):
        for section in self.sections:
            for paragraph in section.paragraphs:
                yield from paragraph.sentences


def _local(tag) -> str:
    """Tag name with any XML namespace stripped."""
    if isinstance(tag, str) and tag.startswith("{"):
        return tag.rsplit("}", 1)[1]
    return tag if isinstance(tag, str) else ""


def _flatten(elem, parts: list[str], markers: list[tuple[int, int]], pos: int, in_bibr: bool) -> int:
    """Append the character data of ``elem`` (text, children, tails) to
    ``parts`` and record bibliographic xref spans.  Returns the new offset."""
    is_bibr = (
        not in_bibr
        and _local(elem.tag) == "xref"
        and elem.get("ref-type") == "bibr"
    )
    start = pos
    if elem.text:
        parts.append(elem.text)
        pos += len(elem.text)
    for child in elem:
        pos = _flatten(child, parts, markers, pos, in_bibr or is_bibr)
        if child.tail:
            parts.append(child.tail)
            pos += len(child.tail)
    if is_bibr:
        markers.append((start, pos))
    return pos


def extract_paragraph(p_elem) -> tuple[str, list[tuple[int, int]]]:
    """Flattened text of a ``<p>`` element plus citation-marker offsets."""
    parts: list[str] = []
    markers: list[tuple[int, int]] = []
    _flatten(p_elem, parts, markers, 0, in_bibr=False)
    return "".join(parts), markers


def _sentences_from_paragraph(text: str, markers) -> Paragraph:
    """Segment paragraph text and attach citation markers to sentences."""
    sentences = segment_sentences(text)
    ranges = []
    cursor = 0
    for sent in sentences:
        start = text.find(sent, cursor)
        if start < 0:  # cannot happen for slices of text; defensive
            start = cursor
        ranges.append((start, start + len(sent)))
        cursor = start + len(sent)

    paragraph = Paragraph([RawSentence(s) for s in sentences])
    for ms, me in markers:
        idx = 0
        for i, (rs, _) in enumerate(ranges):
            if ms >= rs:
                idx = i
        if not ranges:
            continue
        rs, re_ = ranges[idx]
        lo = min(max(ms - rs, 0), len(sentences[idx]))
        hi = min(max(me - rs, 0), len(sentences[idx]))
        paragraph.sentences[idx].citation_spans.append((lo, hi))
    for sent in paragraph.sentences:
        sent.citation_spans.sort()
    return paragraph


def _section_type(sec_elem) -> tuple[str, str]:
    """(section_type, title); the title substitutes for a missing type."""
    title = ""
    for child in sec_elem:
        if _local(child.tag) == "title":
            title = "".join(child.itertext()).strip()
            break
    sec_type = (sec_elem.get("sec-type") or "").strip()
    if not sec_type:
        sec_type = title or "unknown"
    return sec_type, title


def parse_article(xml_bytes: bytes, default_id: str = "") -> ArticleTree:
    """Parse one JATS article from raw bytes (gzip accepted).

    Raises MalformedXml for unparseable input and EmptyArticle when no
    paragraph text is found.
    """
    if isinstance(xml_bytes, str):
        xml_bytes = xml_bytes.encode("utf-8")
    if xml_bytes[:2] == _GZIP_MAGIC:
        try:
            xml_bytes = gzip.decompress(xml_bytes)
        except OSError as exc:
            raise MalformedXml(f"bad gzip stream: {exc}") from exc
    try:
        root = ET.fromstring(xml_bytes)
    except ET.ParseError as exc:
        raise MalformedXml(str(exc)) from exc

    article_id = default_id
    for elem in root.iter():
        if _local(elem.tag) == "article-id" and (elem.text or "").strip():
            article_id = elem.text.strip()
            break
    if not article_id:
        article_id = "article"

    body = None
    for elem in root.iter():
        if _local(elem.tag) == "body":
            body = elem
            break

    sections: list[Section] = []

    def add_section(sec_type: str, title: str, p_elems) -> None:
        paragraphs = []
        for p in p_elems:
            text, markers = extract_paragraph(p)
            if text.strip():
                paragraphs.append(_sentences_from_paragraph(text, markers))
        if paragraphs:
            sections.append(Section(sec_type, title, paragraphs))

    scope = body if body is not None else root
    loose = [p for p in scope if _local(p.tag) == "p"]
    if loose:
        add_section("body", "", loose)
    for elem in scope.iter():
        if _local(elem.tag) != "sec":
            continue
        sec_type, title = _section_type(elem)
        add_section(sec_type, title, [c for c in elem if _local(c.tag) == "p"])

    tree = ArticleTree(article_id, sections)
    if not any(True for _ in tree.iter_sentences()):
        raise EmptyArticle(f"no paragraph text in article {article_id!r}")
    return tree

"""Rule-based sentence segmentation.

Deterministic splitter used instead of a statistical model so that corpus
builds are reproducible.  A boundary is placed after a run of terminal
punctuation (``.``, ``!``, ``?``) that is followed by whitespace and an
uppercase letter or digit.  Boundaries are suppressed while parentheses or
brackets are unbalanced and when the period belongs to a known
abbreviation.
"""

DEFAULT_ABBREVIATIONS: tuple[str, ...] = (
    "et al.",
    "e.g.",
    "i.e.",
    "cf.",
    "vs.",
    "ca.",
    "approx.",
    "Fig.",
    "Figs.",
    "Eq.",
    "Eqs.",
    "Ref.",
    "Refs.",
    "Tab.",
    "No.",
    "Dr.",
    "Prof.",
    "St.",
    "Mr.",
    "Ms.",
    "Mrs.",
)

_TERMINALS = ".!?"
_OPENING = "(["
_CLOSING = ")]"


def _ends_with_abbreviation(text: str, end: int, abbreviations) -> bool:
    """True when ``text[:end]`` ends with one of the abbreviations.

    Matching is case-sensitive ("No." must not swallow the word "no.") and
    the abbreviation must start at a word boundary, so "vs." matches but
    the tail of "servs." does not.
    """
    head = text[:end]
    for abbr in abbreviations:
        if not head.endswith(abbr):
            continue
        start = len(head) - len(abbr)
        if start == 0 or not head[start - 1].isalpha():
            return True
    return False


def segment_sentences(
    paragraph_text: str,
    abbreviations=DEFAULT_ABBREVIATIONS,
) -> list[str]:
    """Split a paragraph into sentences.

    Joining the output with single spaces preserves the non-whitespace
    character sequence of the input; only whitespace between sentences is
    consumed.  Empty input yields an empty list.
    """
    text = paragraph_text
    if not text or not text.strip():
        return []

    sentences = []
    depth = 0
    start = 0
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in _OPENING:
            depth += 1
        elif ch in _CLOSING:
            depth = max(0, depth - 1)
        elif ch in _TERMINALS:
            # Consume the whole punctuation run ("?!", "...").
            j = i
            while j + 1 < n and text[j + 1] in _TERMINALS:
                j += 1
            # Whitespace must follow, then an uppercase letter or digit.
            k = j + 1
            while k < n and text[k].isspace():
                k += 1
            follows_ws = k > j + 1
            starts_new = k < n and (text[k].isupper() or text[k].isdigit())
            suppressed = depth > 0 or (
                text[j] == "." and _ends_with_abbreviation(text, j + 1, abbreviations)
            )
            if follows_ws and starts_new and not suppressed:
                sentence = text[start : j + 1].strip()
                if sentence:
                    sentences.append(sentence)
                start = k
                i = k
                continue
            i = j + 1
            continue
        i += 1

    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences

"""Removal of in-text citation hints.

Citing sentences usually carry surface markers that give the citation away:
bracketed reference numbers, author-year parentheticals, and trailing
"et al." mentions.  Three regular expressions delete them so that models
see the sentence as an author would have typed it before inserting the
citation.
"""

import re

# A single bracketed/parenthesized run of reference numbers: "[1, 2]",
# "( 1-2; 4-6; 8 )", "(1,2,3)".  Hyphen, en dash, comma and semicolon may
# separate the numbers.
_NUM_GROUP = r"[\[\(][\s]*(?:[\d][\s,;\-–—]*)*[\d][\s]*[\]\)]"

# Chains like "[8],[9],[12]" are one citation hint; allow comma/semicolon
# joined repetitions so the whole run is removed in one match.  The leading
# guard skips a group sitting at the very start of the sentence, which is
# far more likely to be an enumeration marker than a citation.
NUMERIC_REFS = re.compile(
    r"(?<!^)" + _NUM_GROUP + r"(?:[\s]*[,;][\s]*" + _NUM_GROUP + r")*"
)

# Parenthesized text that contains a year (1600-2099) or an "et al.":
# "(Kim and li, 2008)", "(Kobayashi et al., 2005)".  Plain parentheticals
# such as "(see Methods)" carry neither and are left alone.
PAREN_TEXT = re.compile(
    r"[\(\[]\s*"
    r"(?:[^\(\)\[\]]*"
    r"(?:(?:(?:16|17|18|19|20)\d{2}(?!\d))|(?:et[\.\s\xa0]*al\.))"
    r"[^\(\)]*)?"
    r"[\)\]]"
)

# Trailing "et al." with an optional year: "et al.", "et al. 2008",
# "et al. (2008)".  Must not bite into a following number.
ET_AL = re.compile(
    r"et[\.\s\xa0]+al[\.\s\(\[]*(?:(?:16|17|18|19|20)\d{2})*[\)\]\s]*(?!\d)"
)

HINT_PATTERNS = (NUMERIC_REFS, PAREN_TEXT, ET_AL)

_MAX_PASSES = 10


def strip_citation_hints(text: str) -> str:
    """Delete every citation hint from ``text``.

    The three patterns are applied in order and the pass is repeated until
    the string stops changing, so the operation is idempotent: stripping an
    already stripped sentence is a no-op.
    """
    current = text
    for _ in range(_MAX_PASSES):
        stripped = current
        for pattern in HINT_PATTERNS:
            stripped = pattern.sub("", stripped)
        if stripped == current:
            return current
        current = stripped
    return current


def has_citation_hint(text: str) -> bool:
    """True when any of the three hint patterns occurs in ``text``."""
    return any(p.search(text) for p in HINT_PATTERNS)

"""Citation hint stripping: the three removal patterns."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from citeworth.corpus import has_citation_hint, strip_citation_hints

NUMERIC_EXAMPLES = [
    "[1, 2]",
    "[ 1- 2]",
    "(1-3)",
    "(1,2,3)",
    "[1-3, 5]",
    "[8],[9],[12]",
    "( 1-2; 4-6; 8 )",
]
PAREN_EXAMPLES = [
    "(Kim and li, 2008)",
    "(Heijman , 2013b)",
    "(Tárraga , 2006; Capella-Gutiérrez , 2009)",
    "(Kobayashi et al., 2005)",
    "(Richart and Barron, 1969; Campion et al, 1986)",
    "(Nasiell et al, 1983, 1986)",
]
ETAL_EXAMPLES = [
    "et al.",
    "et al. 2008",
    "et al. (2008)",
]

PRESERVED = [
    "(see Methods)",
    "(see Supplementary Material)",
    "(Figure 1A)" .replace("1A", "one A"),  # no digits => not a numeric ref
    "(data not shown)",
    "(left panel)",
    "(n = five)",
    "(as discussed above)",
    "(reviewed elsewhere)",
    "(in both groups)",
    "(P value not significant)",
    "(control condition)",
    "(black bars)",
    "(upper bound)",
    "(median)",
    "(see the Appendix)",
    "(details in Methods)",
    "(unpublished observations)",
    "(our notation)",
    "(western blot)",
    "(second cohort)",
]


def normalized(text: str) -> str:
    return " ".join(text.split())


class TestRemoval:
    @pytest.mark.parametrize("example", NUMERIC_EXAMPLES + PAREN_EXAMPLES + ETAL_EXAMPLES)
    def test_example_fully_removed_in_context(self, example):
        out = strip_citation_hints(f"word {example} word")
        assert normalized(out) == "word word"

    @pytest.mark.parametrize("example", PAREN_EXAMPLES + ETAL_EXAMPLES)
    def test_example_removed_standalone(self, example):
        assert strip_citation_hints(example).strip() == ""

    def test_numeric_refs_spared_at_sentence_start(self):
        # A bracketed number opening the sentence is an enumeration
        # marker, not a citation.
        assert strip_citation_hints("(1) First item follows.") == "(1) First item follows."

    def test_disability_sentence(self):
        out = strip_citation_hints("chronic disability [1, 2].")
        assert out == "chronic disability ."


class TestPreserved:
    @pytest.mark.parametrize("text", PRESERVED)
    def test_parenthetical_untouched(self, text):
        assert strip_citation_hints(text) == text
        assert strip_citation_hints(f"We argue {text} here.") == f"We argue {text} here."


class TestIdempotence:
    @pytest.mark.parametrize(
        "text",
        [
            "Plain sentence without hints.",
            "Mixed [1,2] and (Kim, 2008) and et al. 2001 everywhere.",
            "[(Kim, 2008)1,2] nested weirdness",
        ],
    )
    def test_fixed_point(self, text):
        once = strip_citation_hints(text)
        assert strip_citation_hints(once) == once

    @settings(max_examples=300, deadline=None)
    @given(st.text(alphabet="abXY ().,;[]0123456789-" + "etal", max_size=60))
    def test_fixed_point_fuzz(self, text):
        once = strip_citation_hints(text)
        assert strip_citation_hints(once) == once


class TestDetection:
    def test_hint_detection(self):
        assert has_citation_hint("shown before [4].")
        assert has_citation_hint("as in (Kim, 2008).")
        assert not has_citation_hint("no hints here (see Methods).")

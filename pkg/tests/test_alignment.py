from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtgeoparse.alignment import (
    AlignmentBoundsError,
    AlignmentLink,
    AlignmentParseError,
    BitextSegment,
    CharRange,
    links_to_pairs,
    parse_alignment_string,
    serialize_alignment,
    tokenize_english,
    trim_span,
    TokenSpan,
)

from conftest import WORKED_ZH

WORKED_EN = (
    "United States in the Caribbean and the Pacific, also has a number of "
    "territories and insular areas"
)


@st.composite
def char_ranges(draw, limit=500):
    start = draw(st.integers(0, limit))
    return CharRange(start, start + draw(st.integers(0, 40)))


links = st.builds(AlignmentLink, char_ranges(), char_ranges())


def test_parse_prefix_of_worked_string():
    assert parse_alignment_string("0:1-0:5 0:1-7:12 2:2-14:15") == [
        AlignmentLink(CharRange(0, 1), CharRange(0, 5)),
        AlignmentLink(CharRange(0, 1), CharRange(7, 12)),
        AlignmentLink(CharRange(2, 2), CharRange(14, 15)),
    ]


@pytest.mark.parametrize("raw", ["", "   ", "\n"])
def test_blank_is_empty(raw):
    assert parse_alignment_string(raw) == []


@pytest.mark.parametrize(
    "raw, index, reason",
    [
        ("3:2-0:5", 0, "inverted source"),
        ("0:1-5:0", 0, "inverted target"),
        ("0:1-0:5 x", 1, "expected"),
        ("0:1-0", 0, "expected"),
        ("-1:1-0:5", 0, "expected"),
        ("0:1_0:5", 0, "expected"),
    ],
)
def test_parse_errors_name_token_and_position(raw, index, reason):
    with pytest.raises(AlignmentParseError) as exc:
        parse_alignment_string(raw)
    assert exc.value.index == index
    assert reason in str(exc.value)


def test_serialize():
    assert serialize_alignment([]) == ""
    assert serialize_alignment([AlignmentLink(CharRange(0, 1), CharRange(0, 5))]) == "0:1-0:5"


@settings(max_examples=200, deadline=None)
@given(st.lists(links, max_size=30))
def test_round_trip(ls):
    assert parse_alignment_string(serialize_alignment(ls)) == ls


def test_links_to_pairs_worked_segment():
    seg = BitextSegment(WORKED_ZH, "zh", WORKED_EN, parse_alignment_string("0:1-0:5 2:2-14:15"))
    (en0, src0), (en1, src1) = links_to_pairs(seg)
    assert (en0.text, en0.range, src0.text, src0.range) == ("United", CharRange(0, 5), "美国", CharRange(0, 1))
    assert (en1.text, en1.range, src1.text) == ("in", CharRange(14, 15), "在")
    assert links_to_pairs(BitextSegment(WORKED_ZH, "zh", WORKED_EN)) == []


def test_offsets_count_code_points_not_bytes():
    seg = BitextSegment(WORKED_ZH, "zh", WORKED_EN, parse_alignment_string("0:1-0:5"))
    assert len(WORKED_ZH[:2].encode("utf-8")) == 6
    assert links_to_pairs(seg)[0][1].text == "美国"


def test_out_of_bounds_link_rejected():
    seg = BitextSegment("ab", "zh", "xy", parse_alignment_string("0:1-0:1 0:2-0:1"))
    with pytest.raises(AlignmentBoundsError) as exc:
        seg.validate()
    assert exc.value.index == 1


@st.composite
def segments(draw):
    source = draw(st.text(min_size=1, max_size=40))
    target = draw(st.text(min_size=1, max_size=40))

    def rng(text):
        a = draw(st.integers(0, len(text) - 1))
        return CharRange(a, draw(st.integers(a, len(text) - 1)))

    ls = draw(st.lists(st.builds(lambda: AlignmentLink(rng(source), rng(target))), max_size=10))
    return BitextSegment(source, "xx", target, ls)


@settings(max_examples=200, deadline=None)
@given(segments())
def test_pairs_are_substrings_in_link_order(seg):
    pairs = links_to_pairs(seg)
    assert len(pairs) == len(seg.links)
    for (en, src), link in zip(pairs, seg.links):
        assert en.range == link.target and src.range == link.source
        assert en.text == seg.target_text[link.target.start : link.target.end + 1]
        assert src.text == seg.source_text[link.source.start : link.source.end + 1]


def test_tokenize_english():
    assert [(t.text, t.range) for t in tokenize_english("Great Britain")] == [
        ("Great", CharRange(0, 4)),
        ("Britain", CharRange(6, 12)),
    ]
    assert tokenize_english("") == []
    assert len(tokenize_english("Carnegie Mellon University")) == 3
    assert [t.text for t in tokenize_english("the Pacific, also")] == ["the", "Pacific", "also"]


def test_trim_span_drops_trailing_space():
    span = TokenSpan("Caribbean ", CharRange(21, 30), "en")
    trimmed = trim_span(span, WORKED_EN)
    assert trimmed.text == "Caribbean" and trimmed.range == CharRange(21, 29)
    assert trim_span(TokenSpan(" ", CharRange(6, 6), "en"), WORKED_EN) is None

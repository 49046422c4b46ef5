"""Bitext and word-alignment data model.

Alignment strings arrive from translation providers as space-separated
links ``a:b-c:d``: characters ``a..b`` of the source sentence align with
characters ``c..d`` of the English translation.  Both ends of a range are
inclusive and offsets count code points, so ``美国`` at the start of a
sentence is ``0:1`` regardless of how the text is encoded on disk.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Sequence

ENGLISH = "en"

# stripped from both ends of English tokens
TOKEN_PUNCT = ".,;:!?\"'()"
# edge characters dropped from aligned spans in either language
_EDGE_CHARS = TOKEN_PUNCT + " \t\r\n\u3000，。、；：！？“”《》"

_LINK_RE = re.compile(r"(\d+):(\d+)-(\d+):(\d+)")
_WORD_RE = re.compile(r"\S+")


class AlignmentParseError(ValueError):
    """A token of an alignment string is malformed."""

    def __init__(self, token: str, index: int, reason: str):
        super().__init__(f"alignment token {index} ({token!r}): {reason}")
        self.token = token
        self.index = index


class AlignmentBoundsError(ValueError):
    """A link points outside the sentence it indexes."""

    def __init__(self, index: int, message: str):
        super().__init__(f"alignment link {index}: {message}")
        self.index = index


def normalize_text(text: str) -> str:
    """Canonical composition (NFC); applied to every text on ingestion."""
    return unicodedata.normalize("NFC", text)


@dataclass(frozen=True, order=True)
class CharRange:
    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"invalid range {self.start}:{self.end}")

    def __len__(self) -> int:
        return self.end - self.start + 1

    def __str__(self) -> str:
        return f"{self.start}:{self.end}"

    def slice(self, text: str) -> str:
        return text[self.start : self.end + 1]

    def fits(self, text: str) -> bool:
        return self.end < len(text)

    def overlaps(self, other: CharRange) -> bool:
        return self.start <= other.end and other.start <= self.end

    def cover(self, other: CharRange) -> CharRange:
        return CharRange(min(self.start, other.start), max(self.end, other.end))


@dataclass(frozen=True)
class AlignmentLink:
    source: CharRange
    target: CharRange

    def __str__(self) -> str:
        return f"{self.source}-{self.target}"


@dataclass(frozen=True)
class TokenSpan:
    text: str
    range: CharRange
    language: str


@dataclass(frozen=True)
class BitextSegment:
    source_text: str
    source_lang: str
    target_text: str
    links: tuple[AlignmentLink, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "links", tuple(self.links))

    def validate(self) -> BitextSegment:
        for i, link in enumerate(self.links):
            if not link.source.fits(self.source_text):
                raise AlignmentBoundsError(
                    i, f"source range {link.source} exceeds length {len(self.source_text)}"
                )
            if not link.target.fits(self.target_text):
                raise AlignmentBoundsError(
                    i, f"target range {link.target} exceeds length {len(self.target_text)}"
                )
        return self


def parse_alignment_string(raw: str) -> list[AlignmentLink]:
    """Parse ``"0:1-0:5 0:1-7:12"`` into links, preserving order.

    Blank input is a valid empty alignment.
    """
    links = []
    for i, token in enumerate(raw.split()):
        m = _LINK_RE.fullmatch(token)
        if m is None:
            raise AlignmentParseError(token, i, "expected a:b-c:d with non-negative integers")
        a, b, c, d = map(int, m.groups())
        if a > b:
            raise AlignmentParseError(token, i, "inverted source range")
        if c > d:
            raise AlignmentParseError(token, i, "inverted target range")
        links.append(AlignmentLink(CharRange(a, b), CharRange(c, d)))
    return links


def serialize_alignment(links: Iterable[AlignmentLink]) -> str:
    return " ".join(str(link) for link in links)


def links_to_pairs(segment: BitextSegment) -> list[tuple[TokenSpan, TokenSpan]]:
    """Pair up the English and source substrings of every link, in link order."""
    segment.validate()
    pairs = []
    for link in segment.links:
        english = TokenSpan(link.target.slice(segment.target_text), link.target, ENGLISH)
        source = TokenSpan(
            link.source.slice(segment.source_text), link.source, segment.source_lang
        )
        pairs.append((english, source))
    return pairs


def _strip_span(text: str, start: int, end: int, chars: str) -> tuple[int, int]:
    # returns a half-open [start, end) window
    while start < end and text[start] in chars:
        start += 1
    while end > start and text[end - 1] in chars:
        end -= 1
    return start, end


def tokenize_english(text: str) -> list[TokenSpan]:
    """Whitespace tokens with surrounding punctuation trimmed off.

    >>> [t.text for t in tokenize_english('Caribbean and the Pacific, also')]
    ['Caribbean', 'and', 'the', 'Pacific', 'also']
    """
    tokens = []
    for m in _WORD_RE.finditer(text):
        start, end = _strip_span(text, m.start(), m.end(), TOKEN_PUNCT)
        if start < end:
            tokens.append(TokenSpan(text[start:end], CharRange(start, end - 1), ENGLISH))
    return tokens


def trim_span(span: TokenSpan, sentence: str) -> TokenSpan | None:
    """Narrow ``span`` past whitespace and token punctuation at its edges.

    Providers sometimes include a trailing space in a target range
    (``21:30`` for ``"Caribbean "``).  Returns None if nothing remains.
    """
    start, end = _strip_span(
        sentence, span.range.start, span.range.end + 1, _EDGE_CHARS
    )
    if start >= end:
        return None
    return TokenSpan(sentence[start:end], CharRange(start, end - 1), span.language)


def whole_span(text: str, language: str) -> TokenSpan | None:
    """The entire sentence as one unsegmented span (no alignment available)."""
    if not text:
        return None
    return trim_span(TokenSpan(text, CharRange(0, len(text) - 1), language), text)


def find_all(text: str, needle: str) -> list[CharRange]:
    """Every (possibly overlapping) occurrence of ``needle`` in ``text``."""
    hits = []
    if not needle:
        return hits
    i = text.find(needle)
    while i != -1:
        hits.append(CharRange(i, i + len(needle) - 1))
        i = text.find(needle, i + 1)
    return hits


def diagonal_links(tokens: Sequence[TokenSpan]) -> list[AlignmentLink]:
    return [AlignmentLink(t.range, t.range) for t in tokens]

"""Project English toponyms back onto the source sentence."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .alignment import ENGLISH, CharRange, find_all
from .repair import AlignmentMap

PAIR_SEPARATOR = "----"

NON_CONTIGUOUS = "non-contiguous"
PARTIAL = "partial"


@dataclass(frozen=True)
class Toponym:
    surface: str
    span: CharRange
    language: str
    centroid: tuple[float, float] | None = None
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        if self.centroid is not None:
            lat, lon = self.centroid
            if not (-90 <= lat <= 90 and -180 <= lon <= 180):
                raise ValueError(f"centroid out of range: {self.centroid}")

    def shifted(self, offset: int) -> Toponym:
        span = CharRange(self.span.start + offset, self.span.end + offset)
        return replace(self, span=span)


@dataclass(frozen=True)
class ToponymPair:
    english: Toponym
    source: Toponym

    def render(self, include_coords: bool = False) -> str:
        line = f"{self.english.surface}{PAIR_SEPARATOR}{self.source.surface}"
        if include_coords and self.english.centroid is not None:
            lat, lon = self.english.centroid
            line += f"\t({lat}, {lon})"
        return line


@dataclass(frozen=True)
class Projection:
    pairs: list[ToponymPair] = field(default_factory=list)
    unresolved: list[Toponym] = field(default_factory=list)


def _source_range(amap: AlignmentMap, key: str, value: str, at: CharRange, source_text: str):
    """Where ``value`` (the map value for ``key``) sits in the source.

    Prefers the occurrence aligned at the English position ``at`` so that
    repeated names get distinct spans.
    """
    here = [o for o in amap.occurrences_at(at) if o.english.text == key]
    if here:
        cover = here[0].source.range
        for o in here[1:]:
            cover = cover.cover(o.source.range)
        if cover.slice(source_text) == value:
            return cover
    span = amap.spans.get(key)
    if span is not None and span.slice(source_text) == value:
        return span
    hits = find_all(source_text, value)
    return hits[0] if hits else None


def _english_tokens(toponym: Toponym) -> list[tuple[str, CharRange]]:
    out, offset = [], 0
    for word in toponym.surface.split():
        offset = toponym.surface.index(word, offset)
        start = toponym.span.start + offset
        out.append((word, CharRange(start, start + len(word) - 1)))
        offset += len(word)
    return out


def _contiguous(ranges: Sequence[CharRange], source_text: str) -> bool:
    for a, b in zip(ranges, ranges[1:]):
        if b.start <= a.end:
            return False
        if source_text[a.end + 1 : b.start].strip():
            return False
    return True


def project_toponym(toponym: Toponym, amap: AlignmentMap, source_text: str, source_lang: str):
    """Source-language counterpart of one English toponym, or None."""
    value = amap.get(toponym.surface)
    if value is not None:
        span = _source_range(amap, toponym.surface, value, toponym.span, source_text)
        if span is not None:
            return Toponym(span.slice(source_text), span, source_lang)

    # phrase not aligned as a unit: recombine token by token, dropping a
    # value that repeats the one just appended (United/States -> 美国 once)
    parts: list[CharRange] = []
    last = None
    tokens = _english_tokens(toponym)
    found = 0
    for word, at in tokens:
        piece = amap.get(word)
        if piece is None:
            continue
        found += 1
        if piece == last:
            continue
        span = _source_range(amap, word, piece, at, source_text)
        if span is None:
            continue
        parts.append(span)
        last = piece
    if not parts:
        return None

    flags = []
    if found < len(tokens):
        flags.append(PARTIAL)
    first = min(p.start for p in parts)
    end = max(p.end for p in parts)
    cover = CharRange(first, end)
    if not _contiguous(parts, source_text):
        flags.append(NON_CONTIGUOUS)
    return Toponym(cover.slice(source_text), cover, source_lang, flags=tuple(flags))


def find_source_toponyms(
    en_toponyms: Iterable[Toponym],
    amap: AlignmentMap,
    source_text: str,
    source_lang: str = "und",
) -> Projection:
    """Pair every English toponym with its source-language form.

    Toponyms that cannot be projected land in ``unresolved``; input order is
    kept in both lists.
    """
    result = Projection()
    for toponym in en_toponyms:
        source = project_toponym(toponym, amap, source_text, source_lang)
        if source is None:
            result.unresolved.append(toponym)
        else:
            result.pairs.append(ToponymPair(toponym, source))
    return result


def render_pairs(pairs: Iterable[ToponymPair], include_coords: bool = False) -> str:
    return "".join(pair.render(include_coords) + "\n" for pair in pairs)


def english_toponym(surface: str, start: int, centroid=None, flags=()) -> Toponym:
    return Toponym(surface, CharRange(start, start + len(surface) - 1), ENGLISH, centroid, tuple(flags))

"""Turn raw alignment links into a repaired English -> source phrase map.

Machine-translation alignments are noisy in three recurring ways:

* a source token carries a bundled preposition ("Крыма" = "of Crimea"),
* two different source phrases align with the same English word
  ("塞尔维亚共和国" and "塞尔维亚" both with "Serbia"),
* some words lose their link altogether.

:func:`build_alignment_map` handles the first two while scanning the links;
:func:`recover_lost_links` fills in the third from repeated words.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple, Sequence

from .alignment import (
    ENGLISH,
    BitextSegment,
    CharRange,
    TokenSpan,
    find_all,
    links_to_pairs,
    tokenize_english,
    trim_span,
)
from .errors import ConfigError

log = logging.getLogger(__name__)

STRIP_SIDES = ("english", "source", "both")
BUNDLED_LANGUAGES = ("en", "ar", "ru", "zh")


@dataclass(frozen=True)
class FunctionWords:
    words: frozenset[str] = frozenset()
    # prefix -> English words whose removal licenses stripping the prefix
    clitics: Mapping[str, frozenset[str]] = field(default_factory=dict)

    @classmethod
    def parse(cls, text: str, origin: str = "<string>") -> FunctionWords:
        words, clitics = set(), {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, *triggers = line.split()
            if head.endswith("-") and len(head) > 1:
                clitics[head[:-1]] = frozenset(t.lower() for t in triggers)
            elif triggers:
                raise ConfigError(f"{origin}:{lineno}: function word must not contain whitespace")
            else:
                words.add(head.lower())
        return cls(frozenset(words), clitics)

    @classmethod
    def load(cls, path: str | Path) -> FunctionWords:
        path = Path(path)
        return cls.parse(path.read_text(encoding="utf-8"), str(path))


def bundled_function_words(lang: str) -> FunctionWords:
    ref = resources.files("mtgeoparse") / "data" / "function_words" / f"{lang}.txt"
    return FunctionWords.parse(ref.read_text(encoding="utf-8"), f"{lang}.txt")


@dataclass(frozen=True)
class RepairConfig:
    function_words: Mapping[str, FunctionWords] = field(default_factory=dict)
    strip_side: str = "both"
    # only one rule exists; kept so configs can name it explicitly
    conflict_rule: str = "subset-longer"

    def __post_init__(self):
        if self.strip_side not in STRIP_SIDES:
            raise ConfigError(f"strip_side must be one of {STRIP_SIDES}, got {self.strip_side!r}")
        if self.conflict_rule != "subset-longer":
            raise ConfigError(f"unknown conflict rule {self.conflict_rule!r}")

    @classmethod
    def default(cls, **kwargs) -> RepairConfig:
        lists = {lang: bundled_function_words(lang) for lang in BUNDLED_LANGUAGES}
        return cls(function_words=lists, **kwargs)

    def with_list(self, lang: str, words: FunctionWords) -> RepairConfig:
        return replace(self, function_words={**self.function_words, lang: words})

    def words_for(self, lang: str) -> FunctionWords:
        try:
            return self.function_words[lang]
        except KeyError:
            raise ConfigError(f"no function-word list configured for language {lang!r}") from None


class Stripped(NamedTuple):
    span: TokenSpan
    all_function_words: bool
    leading: tuple[str, ...]  # lowercased words removed from the front


def _words(span: TokenSpan) -> list[tuple[int, int]]:
    # half-open offsets of whitespace-separated words, relative to span.text
    out, i, text = [], 0, span.text
    for part in text.split():
        i = text.index(part, i)
        out.append((i, i + len(part)))
        i += len(part)
    return out


def _narrow(span: TokenSpan, lo: int, hi: int) -> TokenSpan:
    start = span.range.start + lo
    return TokenSpan(span.text[lo:hi], CharRange(start, start + hi - lo - 1), span.language)


def strip_function_words(
    phrase: TokenSpan,
    lang: str,
    config: RepairConfig,
    *,
    english_removed: Iterable[str] = (),
) -> Stripped:
    """Drop leading and trailing function words from ``phrase``.

    If every word is a function word the phrase comes back unchanged with
    ``all_function_words`` set.  ``english_removed`` lists the words taken off
    the front of the aligned English phrase; a matching clitic prefix on the
    first source word is removed in that case only.
    """
    if not phrase.text.strip():
        raise ValueError("cannot strip an empty phrase")
    fw = config.words_for(lang)
    words = _words(phrase)
    lo, hi = 0, len(words)
    while lo < hi and phrase.text[slice(*words[lo])].lower() in fw.words:
        lo += 1
    while hi > lo and phrase.text[slice(*words[hi - 1])].lower() in fw.words:
        hi -= 1
    if lo == hi:
        return Stripped(phrase, True, ())
    leading = tuple(phrase.text[slice(*w)].lower() for w in words[:lo])
    start, end = words[lo][0], words[hi - 1][1]

    removed = set(english_removed)
    if removed and lo == 0:
        first = phrase.text[start : words[lo][1]]
        for prefix, triggers in fw.clitics.items():
            # keep at least two characters of the host word
            if first.startswith(prefix) and len(first) - len(prefix) >= 2 and removed & triggers:
                start += len(prefix)
                leading = (prefix,)
                break
    return Stripped(_narrow(phrase, start, end), False, leading)


def resolve_conflict(old_value: str, new_value: str, source_sentence: str) -> str:
    """Choose one source value for an English key that aligned twice.

    A value contained in the other loses to the longer one.  Two pieces that
    sit next to each other in the sentence are joined ("加勒比" + "海").
    Otherwise the longer value wins and ties keep ``old_value``.
    """
    if old_value in new_value:
        return new_value
    if new_value in old_value:
        return old_value
    for first, second in ((old_value, new_value), (new_value, old_value)):
        for sep in ("", " "):
            joined = first + sep + second
            if joined in source_sentence:
                return joined
    return new_value if len(new_value) > len(old_value) else old_value


@dataclass(frozen=True)
class Occurrence:
    """One aligned position: an English span and the source span it maps to."""

    english: TokenSpan
    source: TokenSpan
    link: int | None  # None for occurrences added by recovery


@dataclass(frozen=True)
class Conflict:
    key: str
    old: str
    new: str
    winner: str
    link: int


@dataclass(frozen=True)
class AlignmentMap:
    entries: dict[str, str] = field(default_factory=dict)
    provenance: dict[str, tuple[int, ...]] = field(default_factory=dict)
    spans: dict[str, CharRange] = field(default_factory=dict)
    occurrences: tuple[Occurrence, ...] = ()
    conflicts: tuple[Conflict, ...] = ()
    flags: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, key: str) -> bool:
        return key in self.entries

    def get(self, key: str) -> str | None:
        return self.entries.get(key)

    def occurrences_at(self, english: CharRange) -> list[Occurrence]:
        return [o for o in self.occurrences if o.english.range.overlaps(english)]

    @property
    def recovered(self) -> list[Occurrence]:
        return [o for o in self.occurrences if o.link is None]

    def render(self) -> str:
        """``{key=value, ...}`` in insertion order."""
        return "{" + ", ".join(f"{k}={v}" for k, v in self.entries.items()) + "}"


def build_alignment_map(segment: BitextSegment, config: RepairConfig) -> AlignmentMap:
    entries: dict[str, str] = {}
    provenance: dict[str, list[int]] = {}
    spans: dict[str, CharRange] = {}
    occurrences, conflicts, flags = [], [], []
    strip_en = config.strip_side in ("english", "both")
    strip_src = config.strip_side in ("source", "both")

    for i, (en_raw, src_raw) in enumerate(links_to_pairs(segment)):
        en = trim_span(en_raw, segment.target_text)
        src = trim_span(src_raw, segment.source_text)
        if en is None or src is None:
            flags.append(f"empty-link:{i}")
            continue
        en_strip = strip_function_words(en, ENGLISH, config)
        if strip_en:
            en = en_strip.span
        if en_strip.all_function_words:
            flags.append(f"all-function-words:{i}:{en.text}")
        if strip_src:
            src_strip = strip_function_words(
                src, segment.source_lang, config, english_removed=en_strip.leading
            )
            src = src_strip.span
            if src_strip.all_function_words:
                flags.append(f"all-function-words:{i}:{src.text}")

        key, value = en.text, src.text
        old = entries.get(key)
        if old is None:
            entries[key] = value
            spans[key] = src.range
        elif old != value:
            winner = resolve_conflict(old, value, segment.source_text)
            conflicts.append(Conflict(key, old, value, winner, i))
            if winner == value:
                spans[key] = src.range
            elif winner != old:
                merged = spans[key].cover(src.range)
                if merged.slice(segment.source_text) == winner:
                    spans[key] = merged
                else:
                    spans[key] = find_all(segment.source_text, winner)[0]
            entries[key] = winner
        provenance.setdefault(key, []).append(i)
        occurrences.append(Occurrence(en, src, i))

    return AlignmentMap(
        entries=entries,
        provenance={k: tuple(v) for k, v in provenance.items()},
        spans=spans,
        occurrences=tuple(occurrences),
        conflicts=tuple(conflicts),
        flags=tuple(flags),
    )


def recover_lost_links(
    segment: BitextSegment,
    amap: AlignmentMap,
    *,
    document: Sequence[tuple[BitextSegment, AlignmentMap]] = (),
) -> AlignmentMap:
    """Resolve English tokens that have no link of their own.

    An unlinked token whose text is already a key is attached to an
    unclaimed occurrence of the key's value elsewhere in the same source
    sentence.  Tokens that are not keys here are looked up in the other
    ``document`` segments (empty by default, i.e. sentence scope only); the
    borrowed value must also appear in this sentence.  Existing entries are
    never overwritten, and a second pass changes nothing.
    """
    covered = [link.target for link in segment.links]
    covered += [o.english.range for o in amap.occurrences]
    claimed: dict[str, list[CharRange]] = {}
    for o in amap.occurrences:
        claimed.setdefault(o.english.text, []).append(o.source.range)

    entries = dict(amap.entries)
    spans = dict(amap.spans)
    provenance = dict(amap.provenance)
    added = []

    def free_position(key: str, value: str) -> CharRange | None:
        taken = claimed.get(key, [])
        for hit in find_all(segment.source_text, value):
            if not any(hit.overlaps(t) for t in taken):
                return hit
        return None

    for tok in tokenize_english(segment.target_text):
        if any(tok.range.overlaps(c) for c in covered):
            continue
        key = tok.text
        value = entries.get(key)
        if value is None:
            for other_segment, other_map in document:
                if other_segment is segment or key not in other_map.entries:
                    continue
                candidate = other_map.entries[key]
                if free_position(key, candidate) is not None:
                    value = entries[key] = candidate
                    provenance[key] = ()
                    break
            if value is None:
                continue
        hit = free_position(key, value)
        if hit is None:
            continue
        if key not in spans:
            spans[key] = hit
        source = TokenSpan(value, hit, segment.source_lang)
        added.append(Occurrence(tok, source, None))
        claimed.setdefault(key, []).append(hit)
        covered.append(tok.range)

    if not added:
        return amap
    log.debug("recovered %d lost link(s)", len(added))
    return replace(
        amap,
        entries=entries,
        spans=spans,
        provenance=provenance,
        occurrences=amap.occurrences + tuple(added),
    )

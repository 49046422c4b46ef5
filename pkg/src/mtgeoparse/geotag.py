"""Gazetteer lookup and English-side location tagging.

The default tagger is a longest-match scan of token n-grams against a
gazetteer, filtered by capitalization and a blocklist of known non-place
homonyms.  Any other tagger can be plugged in as long as it maps English
text to a list of :class:`Toponym`; :class:`SubprocessTagger` runs one as an
external process.
"""

from __future__ import annotations

import json
import logging
import subprocess
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Protocol, Sequence

from .alignment import ENGLISH, CharRange, normalize_text, tokenize_english
from .projection import Toponym

log = logging.getLogger(__name__)

EXTERNAL = "external"


class GazetteerError(ValueError):
    def __init__(self, path, lineno: int, message: str):
        super().__init__(f"{path}:{lineno}: {message}")
        self.lineno = lineno


def name_key(name: str) -> str:
    return " ".join(normalize_text(name).casefold().split())


@dataclass(frozen=True)
class GazetteerEntry:
    name: str
    alternates: tuple[str, ...]
    latitude: float
    longitude: float
    population: int = 0
    feature_class: str = ""

    def __post_init__(self):
        if not self.name.strip():
            raise ValueError("gazetteer entry needs a name")
        if not -90 <= self.latitude <= 90:
            raise ValueError(f"latitude {self.latitude} out of range")
        if not -180 <= self.longitude <= 180:
            raise ValueError(f"longitude {self.longitude} out of range")
        if self.population < 0:
            raise ValueError("population must be non-negative")

    @property
    def centroid(self) -> tuple[float, float]:
        return (self.latitude, self.longitude)


def _rank(entry: GazetteerEntry):
    return (-entry.population, entry.name)


class Gazetteer:
    """Name index over gazetteer entries; immutable once built."""

    def __init__(self, entries: Iterable[GazetteerEntry] = ()):
        self.entries = tuple(entries)
        index: dict[str, list[GazetteerEntry]] = {}
        for entry in self.entries:
            for name in {name_key(n) for n in (entry.name, *entry.alternates)}:
                index.setdefault(name, []).append(entry)
        self._index = {k: tuple(sorted(v, key=_rank)) for k, v in index.items()}
        self.max_tokens = max((len(k.split()) for k in self._index), default=0)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, name: str) -> bool:
        return name_key(name) in self._index

    def lookup(self, name: str) -> tuple[GazetteerEntry, ...]:
        """Matching entries, most populous first (ties by name)."""
        return self._index.get(name_key(name), ())

    def geocode(self, surface: str) -> tuple[float, float] | None:
        hits = self.lookup(surface)
        return hits[0].centroid if hits else None


def _parse_row(fields: list[str]) -> GazetteerEntry:
    if len(fields) != 6:
        raise ValueError(f"expected 6 tab-separated columns, got {len(fields)}")
    name, alternates, lat, lon, population, feature_class = (f.strip() for f in fields)
    alts = tuple(a.strip() for a in alternates.split("|") if a.strip())
    return GazetteerEntry(
        name, alts, float(lat), float(lon), int(population or 0), feature_class
    )


def parse_gazetteer(lines: Iterable[str], origin="<gazetteer>") -> Gazetteer:
    entries = []
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            entries.append(_parse_row(normalize_text(line).split("\t")))
        except ValueError as exc:
            raise GazetteerError(origin, lineno, str(exc)) from None
    if not entries:
        log.warning("gazetteer %s is empty", origin)
    return Gazetteer(entries)


def load_gazetteer(path: str | Path) -> Gazetteer:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        gaz = parse_gazetteer(fh, path)
    log.info("loaded %d gazetteer rows from %s", len(gaz), path)
    return gaz


def bundled_gazetteer_path() -> Path:
    return Path(str(resources.files("mtgeoparse") / "data" / "gazetteer.tsv"))


def geocode(surface: str, index: Gazetteer) -> tuple[float, float] | None:
    return index.geocode(surface)


@dataclass(frozen=True)
class TaggerConfig:
    require_capitalization: bool = True
    ambiguity_blocklist: frozenset[str] = frozenset()
    max_phrase_tokens: int = 4

    def __post_init__(self):
        if self.max_phrase_tokens < 1:
            raise ValueError("max_phrase_tokens must be at least 1")


class Tagger(Protocol):
    def __call__(self, text: str) -> list[Toponym]: ...


def _capitalized(word: str) -> bool:
    return word[:1].isupper()


def tag_locations(text: str, index: Gazetteer, config: TaggerConfig = TaggerConfig()) -> list[Toponym]:
    """Left-to-right longest match of token n-grams against ``index``.

    An n-gram may only span tokens separated by plain whitespace, so
    "Pacific, also" is never looked up as one name.  With capitalization
    required, the first and last words of a match must start upper-case.
    """
    tokens = tokenize_english(text)
    found = []
    i = 0
    while i < len(tokens):
        longest = min(config.max_phrase_tokens, index.max_tokens, len(tokens) - i)
        # how far the run of whitespace-joined tokens extends from i
        reach = 1
        while reach < longest:
            gap = text[tokens[i + reach - 1].range.end + 1 : tokens[i + reach].range.start]
            if gap.strip():
                break
            reach += 1
        match = None
        for n in range(reach, 0, -1):
            first, last = tokens[i], tokens[i + n - 1]
            surface = text[first.range.start : last.range.end + 1]
            hits = index.lookup(surface)
            if not hits:
                continue
            if config.require_capitalization and not (
                _capitalized(first.text) and _capitalized(last.text)
            ):
                continue
            if surface in config.ambiguity_blocklist:
                continue
            match = Toponym(
                surface, CharRange(first.range.start, last.range.end), ENGLISH, hits[0].centroid
            )
            break
        if match is None:
            i += 1
        else:
            found.append(match)
            i += n
    return found


@dataclass
class GazetteerTagger:
    index: Gazetteer
    config: TaggerConfig = field(default_factory=TaggerConfig)

    def __call__(self, text: str) -> list[Toponym]:
        return tag_locations(text, self.index, self.config)


class TaggerProtocolError(RuntimeError):
    pass


@dataclass
class SubprocessTagger:
    """Run an external tagger over line-delimited JSON.

    The command receives one ``{"text": ...}`` object per line on stdin and
    must answer, in order, with one line per input:
    ``{"toponyms": [{"surface", "start", "end", optional "lat", "lon"}]}``
    with inclusive code-point offsets.  Results are flagged ``external``.
    When ``index`` is given, toponyms without coordinates are geocoded.
    """

    command: Sequence[str]
    index: Gazetteer | None = None
    timeout: float = 60.0

    def __call__(self, text: str) -> list[Toponym]:
        return self.tag_many([text])[0]

    def tag_many(self, texts: Sequence[str]) -> list[list[Toponym]]:
        payload = "".join(json.dumps({"text": t}, ensure_ascii=False) + "\n" for t in texts)
        proc = subprocess.run(
            list(self.command),
            input=payload,
            capture_output=True,
            text=True,
            encoding="utf-8",
            timeout=self.timeout,
        )
        if proc.returncode != 0:
            raise TaggerProtocolError(
                f"tagger exited with {proc.returncode}: {proc.stderr.strip()[:200]}"
            )
        lines = [line for line in proc.stdout.splitlines() if line.strip()]
        if len(lines) != len(texts):
            raise TaggerProtocolError(f"expected {len(texts)} result lines, got {len(lines)}")
        return [self._decode(line, text) for line, text in zip(lines, texts)]

    def _decode(self, line: str, text: str) -> list[Toponym]:
        try:
            record = json.loads(line)
            items = record["toponyms"]
            out = []
            for item in items:
                span = CharRange(int(item["start"]), int(item["end"]))
                surface = item["surface"]
                if span.slice(text) != surface:
                    raise TaggerProtocolError(
                        f"surface {surface!r} does not match text at {span}"
                    )
                centroid = None
                if "lat" in item and "lon" in item:
                    centroid = (float(item["lat"]), float(item["lon"]))
                elif self.index is not None:
                    centroid = self.index.geocode(surface)
                out.append(Toponym(surface, span, ENGLISH, centroid, (EXTERNAL,)))
            return out
        except (KeyError, TypeError, ValueError) as exc:
            raise TaggerProtocolError(f"bad tagger record {line[:120]!r}: {exc}") from None

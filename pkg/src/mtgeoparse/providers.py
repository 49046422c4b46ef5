"""Translation providers: English translation plus word alignment.

Every provider implements ``translate_with_alignment(request)``.  Results
are validated before they are returned: a link that points outside either
sentence is a provider bug and raises :class:`ProviderFormatError`.

Google's translation API returns no alignment, so :class:`HtmlTagProvider`
approximates one: each source word is wrapped in an indexed element, the
HTML is translated, and English text is paired with source words through
the element indices that survive translation.
"""

from __future__ import annotations

import html
import json
import logging
import os
from dataclasses import dataclass, field
from html.parser import HTMLParser
from pathlib import Path
from typing import Callable, Iterable, Mapping, Protocol, Sequence

from .alignment import (
    ENGLISH,
    AlignmentBoundsError,
    AlignmentLink,
    AlignmentParseError,
    BitextSegment,
    CharRange,
    TokenSpan,
    diagonal_links,
    normalize_text,
    parse_alignment_string,
    tokenize_english,
)

log = logging.getLogger(__name__)

# element and attribute carrying the word index in tagged HTML
TAG_ELEMENT = "span"
TAG_ATTR = "data-idx"


class ProviderError(Exception):
    retryable = False


class TransportError(ProviderError):
    """The provider could not be reached; the request may be retried."""

    retryable = True


class UnsupportedLanguageError(ProviderError):
    pass


class FixtureMissError(ProviderError):
    def __init__(self, key: tuple[str, str]):
        super().__init__(f"no fixture for {key[0]}:{key[1]!r}")
        self.key = key


class ProviderFormatError(ProviderError):
    """A provider response is malformed or its alignment is out of bounds."""


def normalize_key(text: str) -> str:
    """Fixture lookup key: NFC, trimmed, internal whitespace collapsed."""
    return " ".join(normalize_text(text).split())


@dataclass(frozen=True)
class TranslationRequest:
    text: str
    source_lang: str
    target_lang: str = ENGLISH

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("translation request text is empty")
        if self.target_lang != ENGLISH:
            raise UnsupportedLanguageError(f"target language must be English, got {self.target_lang!r}")


@dataclass(frozen=True)
class TranslationResult:
    translation: str
    alignment: tuple[AlignmentLink, ...]
    provider_id: str
    # the exact source string the alignment offsets refer to
    source_text: str = ""

    def segment(self, source_lang: str) -> BitextSegment:
        return BitextSegment(self.source_text, source_lang, self.translation, self.alignment)


class TranslationProvider(Protocol):
    provider_id: str

    def translate_with_alignment(self, request: TranslationRequest) -> TranslationResult: ...


def checked_result(
    source_text: str, translation: str, links: Iterable[AlignmentLink], provider_id: str
) -> TranslationResult:
    result = TranslationResult(translation, tuple(links), provider_id, source_text)
    try:
        result.segment("und").validate()
    except AlignmentBoundsError as exc:
        raise ProviderFormatError(f"{provider_id}: {exc}") from None
    return result


# --- HTML tag emulation ---------------------------------------------------


@dataclass(frozen=True)
class TaggedPayload:
    items: tuple[tuple[int, str], ...]

    def __post_init__(self):
        indices = [i for i, _ in self.items]
        if indices != list(range(len(indices))):
            raise ValueError("tag indices must run 0, 1, 2, ... in order")

    @classmethod
    def from_tokens(cls, tokens: Sequence[TokenSpan]) -> TaggedPayload:
        return cls(tuple((i, t.text) for i, t in enumerate(tokens)))

    def token(self, index: int) -> str:
        return self.items[index][1]


def wrap_tokens_html(tokens: Sequence[TokenSpan], lang: str | None = None) -> str:
    """One indexed element per token inside a minimal HTML document."""
    body = " ".join(
        f'<{TAG_ELEMENT} {TAG_ATTR}="{i}">{html.escape(t.text)}</{TAG_ELEMENT}>'
        for i, t in enumerate(tokens)
    )
    lang_attr = f' lang="{html.escape(lang)}"' if lang else ""
    return f"<!DOCTYPE html><html{lang_attr}><head></head><body>{body}</body></html>"


class _TaggedHtmlReader(HTMLParser):
    """Collect body text in document order, labelled with its tag index."""

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.chunks: list[tuple[int | None, str]] = []
        self.current: int | None = None
        self.depth = 0
        self.skip = 0  # inside <head>/<title>/<script>/<style>
        self.errors: list[str] = []

    def handle_starttag(self, tag, attrs):
        if tag in ("head", "title", "script", "style"):
            self.skip += 1
            return
        if tag != TAG_ELEMENT:
            return
        attrs = dict(attrs)
        if TAG_ATTR not in attrs:
            if self.current is not None:
                self.depth += 1
            return
        if self.current is not None:
            self.errors.append(f"nested indexed element inside index {self.current}")
            return
        try:
            self.current = int(attrs[TAG_ATTR])
        except (TypeError, ValueError):
            self.errors.append(f"non-integer {TAG_ATTR}={attrs[TAG_ATTR]!r}")
            return
        self.depth = 0

    def handle_endtag(self, tag):
        if tag in ("head", "title", "script", "style"):
            self.skip = max(0, self.skip - 1)
            return
        if tag != TAG_ELEMENT or self.current is None:
            return
        if self.depth:
            self.depth -= 1
        else:
            self.current = None

    def handle_data(self, data):
        if not self.skip and data:
            self.chunks.append((self.current, data))

    def close(self):
        super().close()
        if self.current is not None:
            self.errors.append(f"unclosed element with index {self.current}")


def read_tagged_html(translated_html: str) -> list[tuple[int | None, str]]:
    """Body text chunks in document order as ``(tag index or None, text)``."""
    reader = _TaggedHtmlReader()
    reader.feed(translated_html)
    reader.close()
    if reader.errors:
        raise ProviderFormatError("; ".join(reader.errors))
    return reader.chunks


@dataclass(frozen=True)
class TagAlignment:
    pairs: list[tuple[str, str]]
    lost: list[int]
    translation: str
    # per pair: (tag index, English range in ``translation``)
    ranges: list[tuple[int, CharRange]] = field(default_factory=list)


def _collect(chunks: Sequence[tuple[int | None, str]]) -> tuple[str, dict[int, CharRange]]:
    # rebuild the English text with collapsed whitespace and remember where
    # each index's text lands in it
    out: list[str] = []
    length = 0
    ranges: dict[int, CharRange] = {}
    pending_space = False
    for index, data in chunks:
        for piece in _split_keep_space(data):
            if piece.isspace():
                pending_space = length > 0
                continue
            if pending_space:
                out.append(" ")
                length += 1
                pending_space = False
            start = length
            out.append(piece)
            length += len(piece)
            if index is not None:
                r = CharRange(start, length - 1)
                if index in ranges:
                    prev = ranges[index]
                    gap = "".join(out)[prev.end + 1 : start]
                    if gap.strip():
                        raise ProviderFormatError(f"index {index} appears in separate places")
                    r = prev.cover(r)
                ranges[index] = r
    return "".join(out), ranges


def _split_keep_space(text: str) -> list[str]:
    pieces, buf, space = [], "", None
    for ch in text:
        is_space = ch.isspace()
        if buf and is_space != space:
            pieces.append(buf)
            buf = ""
        buf += ch
        space = is_space
    if buf:
        pieces.append(buf)
    return pieces


def parse_tagged_translation(source_payload: TaggedPayload, translated_html: str) -> TagAlignment:
    """Pair source tokens with the English text that kept their tag index.

    Indices missing from the translation are reported in ``lost``; all the
    English text inside one element becomes a single phrase.  Element order
    in the translation does not affect the pairs, which follow tag order.
    """
    translation, ranges = _collect(read_tagged_html(translated_html))
    known = len(source_payload.items)
    unknown = sorted(i for i in ranges if not 0 <= i < known)
    if unknown:
        raise ProviderFormatError(f"translation has tag indices not in the source: {unknown}")
    pairs, spans, lost = [], [], []
    for index, token in source_payload.items:
        r = ranges.get(index)
        if r is None:
            lost.append(index)
            continue
        pairs.append((token, r.slice(translation)))
        spans.append((index, r))
    return TagAlignment(pairs, lost, translation, spans)


def whitespace_tokens(text: str, lang: str) -> list[TokenSpan]:
    tokens, i = [], 0
    for word in text.split():
        i = text.index(word, i)
        tokens.append(TokenSpan(word, CharRange(i, i + len(word) - 1), lang))
        i += len(word)
    return tokens


@dataclass
class HtmlTagProvider:
    """Alignment by HTML tag propagation over any HTML-capable translator.

    ``translate_html(html, source_lang)`` returns the translated document.
    Source words are whitespace tokens of the request text.
    """

    translate_html: Callable[[str, str], str]
    provider_id: str = "html-tag"

    def translate_with_alignment(self, request: TranslationRequest) -> TranslationResult:
        source = normalize_key(request.text)
        tokens = whitespace_tokens(source, request.source_lang)
        translated = self.translate_html(wrap_tokens_html(tokens), request.source_lang)
        tagged = parse_tagged_translation(TaggedPayload.from_tokens(tokens), translated)
        links = [AlignmentLink(tokens[i].range, r) for i, r in tagged.ranges]
        if tagged.lost:
            log.debug("%s: tags lost in translation: %s", self.provider_id, tagged.lost)
        return checked_result(source, tagged.translation, links, self.provider_id)


# --- fixtures ---------------------------------------------------------------


@dataclass(frozen=True)
class FixtureRecord:
    source_lang: str
    source_text: str
    translation: str = ""
    alignment_string: str | None = None
    translated_html: str | None = None


def _record_from_json(obj: Mapping, where: str) -> FixtureRecord:
    try:
        record = FixtureRecord(
            source_lang=obj["source_lang"],
            source_text=normalize_text(obj["source_text"]),
            translation=normalize_text(obj.get("translation", "")),
            alignment_string=obj.get("alignment_string"),
            translated_html=obj.get("translated_html"),
        )
    except (KeyError, TypeError) as exc:
        raise ProviderFormatError(f"{where}: missing field {exc}") from None
    if (record.alignment_string is None) == (record.translated_html is None):
        raise ProviderFormatError(f"{where}: need exactly one of alignment_string, translated_html")
    return record


def load_fixture_records(path: str | Path) -> list[FixtureRecord]:
    path = Path(path)
    records = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ProviderFormatError(f"{path}:{lineno}: {exc}") from None
            records.append(_record_from_json(obj, f"{path}:{lineno}"))
    return records


class FixtureProvider:
    """Replay stored translations keyed by (language, normalized source text).

    Records carry either an ``alignment_string`` in the ``a:b-c:d`` format or
    a ``translated_html`` response, which is aligned through the HTML tag
    path.  Every record is checked when the store is built.
    """

    provider_id = "fixture"

    def __init__(self, records: Iterable[FixtureRecord] = ()):
        self._results: dict[tuple[str, str], TranslationResult] = {}
        for record in records:
            self.add(record)

    @classmethod
    def from_files(cls, *paths: str | Path) -> FixtureProvider:
        provider = cls()
        for path in paths:
            for record in load_fixture_records(path):
                provider.add(record)
        return provider

    def __len__(self) -> int:
        return len(self._results)

    def add(self, record: FixtureRecord) -> None:
        key = (record.source_lang, normalize_key(record.source_text))
        if record.translated_html is not None:
            html_provider = HtmlTagProvider(lambda _html, _lang: record.translated_html, "fixture")
            result = html_provider.translate_with_alignment(
                TranslationRequest(record.source_text, record.source_lang)
            )
        else:
            try:
                links = parse_alignment_string(record.alignment_string)
            except AlignmentParseError as exc:
                raise ProviderFormatError(f"fixture {key}: {exc}") from None
            result = checked_result(record.source_text, record.translation, links, self.provider_id)
        self._results[key] = result

    def translate_with_alignment(self, request: TranslationRequest) -> TranslationResult:
        return fixture_lookup(request, self._results)


def fixture_lookup(
    request: TranslationRequest, store: Mapping[tuple[str, str], TranslationResult]
) -> TranslationResult:
    key = (request.source_lang, normalize_key(request.text))
    try:
        return store[key]
    except KeyError:
        raise FixtureMissError(key) from None


class PassThroughProvider:
    """English in, same English out, each word aligned with itself."""

    provider_id = "passthrough"

    def translate_with_alignment(self, request: TranslationRequest) -> TranslationResult:
        if request.source_lang != ENGLISH:
            raise UnsupportedLanguageError(
                f"pass-through provider only handles English, got {request.source_lang!r}"
            )
        text = normalize_text(request.text)
        return checked_result(text, text, diagonal_links(tokenize_english(text)), self.provider_id)


class ManualTranslationProvider:
    """Human translations without alignment, keyed like fixtures."""

    provider_id = "manual"

    def __init__(self, translations: Mapping[tuple[str, str], str] = ()):
        self._store = {
            (lang, normalize_key(src)): normalize_text(en)
            for (lang, src), en in dict(translations).items()
        }

    def add(self, source_lang: str, source_text: str, translation: str) -> None:
        self._store[(source_lang, normalize_key(source_text))] = normalize_text(translation)

    def translate_with_alignment(self, request: TranslationRequest) -> TranslationResult:
        key = (request.source_lang, normalize_key(request.text))
        if key not in self._store:
            raise FixtureMissError(key)
        return TranslationResult(self._store[key], (), self.provider_id, key[1])


# --- generic REST -------------------------------------------------------------


def _dig(obj, path: str):
    for part in path.split(".") if path else ():
        obj = obj[int(part)] if isinstance(obj, list) else obj[part]
    return obj


def _fill(template, values: Mapping[str, str]):
    if isinstance(template, str):
        for name, value in values.items():
            template = template.replace("{" + name + "}", value)
        return template
    if isinstance(template, list):
        return [_fill(t, values) for t in template]
    if isinstance(template, dict):
        return {k: _fill(v, values) for k, v in template.items()}
    return template


@dataclass
class RestProvider:
    """Translation over a JSON HTTP endpoint.

    ``request_template`` is a JSON value whose strings may contain
    ``{text}``, ``{source_lang}`` and ``{target_lang}``.  The response is
    read with dotted paths; ``alignment_path`` must point at an alignment
    string, or be empty when the service returns none.  Credentials come
    from the environment variable ``auth_env`` and are sent in header
    ``auth_header``.
    """

    url: str
    request_template: object = field(
        default_factory=lambda: {"text": "{text}", "from": "{source_lang}", "to": "{target_lang}"}
    )
    translation_path: str = "translation"
    alignment_path: str = "alignment"
    auth_header: str | None = None
    auth_env: str | None = None
    timeout: float = 30.0
    provider_id: str = "rest"
    session: object = None

    def build_request(self, request: TranslationRequest) -> tuple[dict, object]:
        headers = {"Content-Type": "application/json"}
        if self.auth_header and self.auth_env:
            secret = os.environ.get(self.auth_env)
            if not secret:
                raise ProviderError(f"environment variable {self.auth_env} is not set")
            headers[self.auth_header] = secret
        text = normalize_key(request.text)
        body = _fill(
            self.request_template,
            {"text": text, "source_lang": request.source_lang, "target_lang": request.target_lang},
        )
        return headers, body

    def read_response(self, request: TranslationRequest, payload) -> TranslationResult:
        try:
            translation = normalize_text(_dig(payload, self.translation_path))
            raw = _dig(payload, self.alignment_path) if self.alignment_path else ""
            links = parse_alignment_string(raw or "")
        except (KeyError, IndexError, TypeError, AlignmentParseError) as exc:
            raise ProviderFormatError(f"{self.provider_id}: bad response: {exc}") from None
        return checked_result(normalize_key(request.text), translation, links, self.provider_id)

    def translate_with_alignment(self, request: TranslationRequest) -> TranslationResult:
        import requests

        session = self.session or requests
        headers, body = self.build_request(request)
        try:
            resp = session.post(self.url, json=body, headers=headers, timeout=self.timeout)
        except requests.RequestException as exc:
            raise TransportError(f"{self.provider_id}: {exc}") from exc
        status = resp.status_code
        if status in (408, 429) or status >= 500:
            raise TransportError(f"{self.provider_id}: HTTP {status}")
        if status in (401, 403):
            raise ProviderError(f"{self.provider_id}: HTTP {status}, check credentials")
        if status >= 400:
            raise UnsupportedLanguageError(
                f"{self.provider_id}: HTTP {status} for {request.source_lang}"
            )
        try:
            payload = resp.json()
        except ValueError as exc:
            raise ProviderFormatError(f"{self.provider_id}: response is not JSON") from exc
        return self.read_response(request, payload)

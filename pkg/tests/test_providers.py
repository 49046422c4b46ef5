from __future__ import annotations

import json
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtgeoparse.alignment import serialize_alignment
from mtgeoparse.providers import (
    FixtureMissError,
    FixtureProvider,
    FixtureRecord,
    HtmlTagProvider,
    ManualTranslationProvider,
    PassThroughProvider,
    ProviderError,
    ProviderFormatError,
    RestProvider,
    TaggedPayload,
    TransportError,
    TranslationRequest,
    UnsupportedLanguageError,
    load_fixture_records,
    parse_tagged_translation,
    read_tagged_html,
    whitespace_tokens,
    wrap_tokens_html,
)

from conftest import WORKED_AR, WORKED_ZH

WORKED_ALIGNMENT = (
    "0:1-0:5 0:1-7:12 2:2-14:15 3:5-21:30 6:6-21:30 7:7-31:33 8:10-39:45 "
    "11:11-48:51 12:13-53:55 14:14-59:64 16:17-69:79 18:18-81:83 19:20-85:91 21:22-93:97"
)
ISRAEL_HTML = (
    '<html lang="en-x-mtfrom-ar"><head></head><body><doctype html=""><title></title>'
    '<span data-idx="0">I</span> <span data-idx="1">live</span> '
    '<span data-idx="2">in</span> <span data-idx="3">Israel</span></doctype></body></html>'
)


def identity_translator(document: str, _lang: str) -> str:
    return document


class TestFixtures:
    def test_worked_sentence_stored_verbatim(self, fixtures):
        result = fixtures.translate_with_alignment(TranslationRequest(WORKED_ZH, "zh"))
        assert result.translation.startswith("United States in the Caribbean")
        assert serialize_alignment(result.alignment) == WORKED_ALIGNMENT

    def test_miss_names_key(self, fixtures):
        with pytest.raises(FixtureMissError) as exc:
            fixtures.translate_with_alignment(TranslationRequest("没有这句话", "zh"))
        assert exc.value.key == ("zh", "没有这句话")
        assert "没有这句话" in str(exc.value)

    def test_repeated_calls_identical(self, fixtures):
        req = TranslationRequest(WORKED_ZH, "zh")
        assert len({repr(fixtures.translate_with_alignment(req)) for _ in range(5)}) == 1

    @pytest.mark.parametrize("variant", [WORKED_ZH + "  ", "\t" + WORKED_ZH + "\n"])
    def test_whitespace_normalized(self, fixtures, variant):
        a = fixtures.translate_with_alignment(TranslationRequest(WORKED_ZH, "zh"))
        assert fixtures.translate_with_alignment(TranslationRequest(variant, "zh")) == a

    def test_nfd_input_matches(self):
        composed = "Caf\u00e9"
        store = FixtureProvider([FixtureRecord("fr", composed, "Cafe", "0:3-0:3")])
        decomposed = "Cafe\u0301"
        assert store.translate_with_alignment(TranslationRequest(decomposed, "fr")).translation == "Cafe"

    def test_language_is_part_of_key(self, fixtures):
        with pytest.raises(FixtureMissError):
            fixtures.translate_with_alignment(TranslationRequest(WORKED_ZH, "ar"))

    def test_out_of_bounds_fixture_rejected(self):
        with pytest.raises(ProviderFormatError):
            FixtureProvider([FixtureRecord("zh", "美国", "US", "0:5-0:1")])

    def test_bad_alignment_string_rejected(self):
        with pytest.raises(ProviderFormatError):
            FixtureProvider([FixtureRecord("zh", "美国", "US", "0:1=0:1")])

    def test_record_needs_one_alignment_form(self, tmp_path):
        path = tmp_path / "f.jsonl"
        path.write_text(json.dumps({"source_lang": "zh", "source_text": "x", "translation": "y"}) + "\n")
        with pytest.raises(ProviderFormatError, match=":1:"):
            load_fixture_records(path)

    def test_html_fixture(self, fixtures):
        result = fixtures.translate_with_alignment(TranslationRequest(WORKED_AR, "ar"))
        assert result.translation == "I live in Israel"
        assert serialize_alignment(result.alignment) == "0:2-0:0 4:7-2:5 9:10-7:8 12:18-10:15"


class TestRequests:
    def test_empty_text_rejected(self):
        with pytest.raises(ValueError):
            TranslationRequest("  ", "zh")

    def test_only_english_target(self):
        with pytest.raises(UnsupportedLanguageError):
            TranslationRequest("x", "zh", "fr")


class TestHtmlTags:
    def test_wrap_israel(self):
        doc = wrap_tokens_html(whitespace_tokens(WORKED_AR, "ar"))
        assert re.findall(r'data-idx="(\d+)">([^<]*)<', doc) == [
            ("0", "أنا"), ("1", "أعيش"), ("2", "في"), ("3", "إسرائيل")
        ]

    def test_wrap_edge_cases(self):
        assert read_tagged_html(wrap_tokens_html([])) == []
        one = wrap_tokens_html(whitespace_tokens("بغداد", "ar"))
        assert read_tagged_html(one) == [(0, "بغداد")]

    def test_israel_pairs(self):
        payload = TaggedPayload.from_tokens(whitespace_tokens(WORKED_AR, "ar"))
        tagged = parse_tagged_translation(payload, ISRAEL_HTML)
        assert ("إسرائيل", "Israel") in tagged.pairs
        assert tagged.translation == "I live in Israel" and tagged.lost == []

    def test_lost_tag_reported(self):
        payload = TaggedPayload.from_tokens(whitespace_tokens(WORKED_AR, "ar"))
        dropped = ISRAEL_HTML.replace('<span data-idx="2">in</span>', "in")
        tagged = parse_tagged_translation(payload, dropped)
        assert len(tagged.pairs) == 3 and tagged.lost == [2]
        assert tagged.translation == "I live in Israel"

    def test_empty_both_sides(self):
        tagged = parse_tagged_translation(TaggedPayload(()), "<html><body></body></html>")
        assert tagged.pairs == [] and tagged.lost == []

    def test_unknown_index_is_format_error(self):
        payload = TaggedPayload.from_tokens(whitespace_tokens("أنا", "ar"))
        with pytest.raises(ProviderFormatError):
            parse_tagged_translation(payload, '<span data-idx="5">x</span>')

    def test_entities_decoded(self):
        payload = TaggedPayload.from_tokens(whitespace_tokens("a b", "xx"))
        tagged = parse_tagged_translation(payload, '<span data-idx="0">A&amp;B</span> <span data-idx="1">c</span>')
        assert tagged.pairs == [("a", "A&B"), ("b", "c")]

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.text(st.characters(blacklist_categories=("Zs", "Cc", "Zl", "Zp", "Cs")), min_size=1, max_size=6), max_size=8))
    def test_identity_round_trip(self, words):
        text = " ".join(words)
        tokens = whitespace_tokens(text, "xx")
        payload = TaggedPayload.from_tokens(tokens)
        tagged = parse_tagged_translation(payload, wrap_tokens_html(tokens))
        assert [src for src, _ in tagged.pairs] == [t.text for t in tokens]
        assert [en for _, en in tagged.pairs] == [t.text for t in tokens]

    @settings(max_examples=100, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_shuffled_elements_same_pairs(self, rnd):
        tokens = whitespace_tokens("w0 w1 w2 w3 w4 w5", "xx")
        payload = TaggedPayload.from_tokens(tokens)
        elements = [f'<span data-idx="{i}">E{i}</span>' for i in range(len(tokens))]
        rnd.shuffle(elements)
        tagged = parse_tagged_translation(payload, "<body>" + " ".join(elements) + "</body>")
        assert tagged.pairs == [(f"w{i}", f"E{i}") for i in range(len(tokens))]

    def test_provider_over_identity_translator(self):
        provider = HtmlTagProvider(identity_translator)
        result = provider.translate_with_alignment(TranslationRequest("Paris  est belle", "fr"))
        assert result.translation == "Paris est belle"
        seg = result.segment("fr").validate()
        assert [(l.source.slice(seg.source_text), l.target.slice(seg.target_text)) for l in seg.links] == [
            ("Paris", "Paris"), ("est", "est"), ("belle", "belle")
        ]


class TestPassThroughAndManual:
    def test_diagonal_alignment(self):
        result = PassThroughProvider().translate_with_alignment(TranslationRequest("I live in Israel.", "en"))
        assert result.translation == "I live in Israel."
        assert serialize_alignment(result.alignment) == "0:0-0:0 2:5-2:5 7:8-7:8 10:15-10:15"

    def test_passthrough_rejects_other_languages(self):
        with pytest.raises(UnsupportedLanguageError):
            PassThroughProvider().translate_with_alignment(TranslationRequest("美国", "zh"))

    def test_manual_has_no_alignment(self):
        manual = ManualTranslationProvider({("zh", "美国"): "United States"})
        result = manual.translate_with_alignment(TranslationRequest("美国 ", "zh"))
        assert result.translation == "United States" and result.alignment == ()


class FakeResponse:
    def __init__(self, status, payload):
        self.status_code = status
        self._payload = payload

    def json(self):
        if isinstance(self._payload, Exception):
            raise self._payload
        return self._payload


class FakeSession:
    def __init__(self, response):
        self.response = response
        self.calls = []

    def post(self, url, json=None, headers=None, timeout=None):
        self.calls.append((url, json, headers))
        return self.response


class TestRest:
    def make(self, response, **kw):
        session = FakeSession(response)
        return RestProvider("http://mt.invalid/translate", session=session, **kw), session

    def test_request_and_response(self, monkeypatch):
        monkeypatch.setenv("MT_KEY", "secret")
        payload = {"data": {"text": "United States", "align": "0:1-0:5 0:1-7:12"}}
        provider, session = self.make(
            FakeResponse(200, payload),
            translation_path="data.text",
            alignment_path="data.align",
            auth_header="X-Key",
            auth_env="MT_KEY",
        )
        result = provider.translate_with_alignment(TranslationRequest("美国", "zh"))
        assert result.translation == "United States" and len(result.alignment) == 2
        url, body, headers = session.calls[0]
        assert body == {"text": "美国", "from": "zh", "to": "en"}
        assert headers["X-Key"] == "secret"

    def test_missing_credentials(self, monkeypatch):
        monkeypatch.delenv("MT_KEY", raising=False)
        provider, _ = self.make(FakeResponse(200, {}), auth_header="X-Key", auth_env="MT_KEY")
        with pytest.raises(ProviderError):
            provider.translate_with_alignment(TranslationRequest("美国", "zh"))

    @pytest.mark.parametrize(
        "status, error",
        [(503, TransportError), (429, TransportError), (401, ProviderError), (400, UnsupportedLanguageError)],
    )
    def test_status_mapping(self, status, error):
        provider, _ = self.make(FakeResponse(status, {}))
        with pytest.raises(error):
            provider.translate_with_alignment(TranslationRequest("美国", "zh"))
        assert error(status).retryable == (error is TransportError)

    def test_out_of_bounds_alignment(self):
        provider, _ = self.make(FakeResponse(200, {"translation": "US", "alignment": "0:1-0:9"}))
        with pytest.raises(ProviderFormatError):
            provider.translate_with_alignment(TranslationRequest("美国", "zh"))

    def test_non_json(self):
        provider, _ = self.make(FakeResponse(200, ValueError("no json")))
        with pytest.raises(ProviderFormatError):
            provider.translate_with_alignment(TranslationRequest("美国", "zh"))

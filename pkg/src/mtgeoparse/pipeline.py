"""End-to-end geoparsing: translate, repair alignment, tag, project, render."""

from __future__ import annotations

import json
import logging
import os
import shlex
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .alignment import BitextSegment, normalize_text
from .errors import ConfigError
from .evaluation import (
    Metrics,
    PairedRun,
    compare_runs,
    load_gold,
    score_documents,
)
from .geotag import (
    GazetteerTagger,
    SubprocessTagger,
    TaggerConfig,
    TaggerProtocolError,
    bundled_gazetteer_path,
    load_gazetteer,
)
from .projection import NON_CONTIGUOUS, Toponym, ToponymPair, find_source_toponyms, render_pairs
from .providers import (
    FixtureProvider,
    ManualTranslationProvider,
    PassThroughProvider,
    ProviderError,
    RestProvider,
    TranslationProvider,
    TranslationRequest,
)
from .repair import (
    AlignmentMap,
    FunctionWords,
    RepairConfig,
    build_alignment_map,
    recover_lost_links,
)

log = logging.getLogger(__name__)

PROVIDERS = ("fixture", "rest", "passthrough")
FORMATS = ("lines", "records")
SIDES = ("source", "english")
CONFIG_NAME = "pipeline.cfg"

ALIGNMENT_LOSS = "alignment-loss"
UNRESOLVED = "unresolved"
CONFLICT = "conflict"
RECOVERED = "recovered"


def data_path(*parts: str) -> Path:
    return Path(str(resources.files("mtgeoparse").joinpath("data", *parts)))


def bundled_fixtures_path() -> Path:
    return data_path("fixtures", "worked_examples.jsonl")


def sample_corpus_path(lang: str) -> Path:
    return data_path("samples", lang)


def _as_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    lowered = str(value).strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off", ""):
        return False
    raise ConfigError(f"not a boolean: {value!r}")


@dataclass
class PipelineConfig:
    lang: str | None = None
    provider: str = "fixture"
    fixtures: list[Path] = field(default_factory=list)
    rest_url: str | None = None
    rest_auth_header: str | None = None
    rest_auth_env: str | None = None
    rest_request_template: str | None = None
    rest_translation_path: str = "translation"
    rest_alignment_path: str = "alignment"
    gazetteer: Path | None = None
    function_words: dict[str, Path] = field(default_factory=dict)
    strip_side: str = "both"
    recover_scope: str = "sentence"
    tagger_command: str | None = None
    blocklist: list[str] = field(default_factory=list)
    require_capitalization: bool = True
    max_phrase_tokens: int = 4
    format: str = "lines"
    coords: bool = False
    mode: str = "surface"
    side: str | None = None
    gold: Path | None = None
    jobs: int | None = None

    _paths = ("gazetteer", "gold")

    @classmethod
    def from_file(cls, path: str | Path) -> PipelineConfig:
        return cls().merge(read_config_file(path))

    def merge(self, values: Mapping[str, object]) -> PipelineConfig:
        """Apply ``key=value`` settings; later calls override earlier ones."""
        names = {f.name for f in fields(self)}
        for raw_key, value in values.items():
            if value is None:
                continue
            key = raw_key.replace("-", "_")
            if key.startswith("function_words."):
                self.function_words[key.split(".", 1)[1]] = Path(value)
                continue
            if key not in names or key.startswith("_"):
                raise ConfigError(f"unknown configuration key {raw_key!r}")
            setattr(self, key, self._coerce(key, value))
        return self

    def _coerce(self, key: str, value):
        if key == "fixtures":
            items = value if isinstance(value, (list, tuple)) else str(value).split(",")
            return [Path(p) for p in (str(i).strip() for i in items) if p]
        if key == "blocklist":
            items = value if isinstance(value, (list, tuple)) else str(value).split(",")
            return [s for s in (str(i).strip() for i in items) if s]
        if key == "function_words":
            return {k: Path(v) for k, v in dict(value).items()}
        if key in self._paths:
            return Path(value)
        if key in ("coords", "require_capitalization"):
            return _as_bool(value)
        if key in ("max_phrase_tokens", "jobs"):
            try:
                return int(value)
            except (TypeError, ValueError):
                raise ConfigError(f"{key} must be an integer, got {value!r}") from None
        return str(value)

    def validate(self) -> PipelineConfig:
        """Check every setting and referenced file up front."""
        if self.provider not in PROVIDERS:
            raise ConfigError(f"provider must be one of {PROVIDERS}, got {self.provider!r}")
        if self.provider == "rest" and not self.rest_url:
            raise ConfigError("the rest provider needs rest_url")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.mode not in ("surface", "overlap"):
            raise ConfigError(f"mode must be surface or overlap, got {self.mode!r}")
        if self.side is not None and self.side not in SIDES:
            raise ConfigError(f"side must be one of {SIDES}, got {self.side!r}")
        if self.recover_scope not in ("sentence", "document"):
            raise ConfigError(f"recover_scope must be sentence or document, got {self.recover_scope!r}")
        if self.max_phrase_tokens < 1:
            raise ConfigError("max_phrase_tokens must be at least 1")
        if self.jobs is not None and self.jobs < 1:
            raise ConfigError("jobs must be at least 1")
        if self.rest_request_template:
            try:
                json.loads(self.rest_request_template)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"rest_request_template is not JSON: {exc}") from None
        paths = list(self.fixtures) + list(self.function_words.values())
        paths += [p for p in (self.gazetteer, self.gold) if p is not None]
        missing = [str(p) for p in paths if not Path(p).is_file()]
        if missing:
            raise ConfigError(f"missing file(s): {', '.join(missing)}")
        if self.tagger_command and not shlex.split(self.tagger_command):
            raise ConfigError("tagger_command is empty")
        return self

    def effective_fixtures(self) -> list[Path]:
        return list(self.fixtures) or [bundled_fixtures_path()]


def read_config_file(path: str | Path) -> dict[str, object]:
    """Parse ``key = value`` lines.  Relative file paths are resolved
    against the config file's directory."""
    path = Path(path)
    base = path.parent
    values: dict[str, object] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        norm = key.replace("-", "_")
        if norm in ("gazetteer", "gold") or norm.startswith("function_words."):
            value = str(base / value)
        elif norm == "fixtures":
            value = ",".join(str(base / v.strip()) for v in value.split(",") if v.strip())
        values[key] = value
    return values


@dataclass
class DocumentResult:
    doc_id: str
    source_lang: str
    source_text: str = ""
    translation: str = ""
    pairs: list[ToponymPair] = field(default_factory=list)
    unresolved: list[Toponym] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)
    maps: list[AlignmentMap] = field(default_factory=list)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def english_toponyms(self) -> list[Toponym]:
        found = [p.english for p in self.pairs] + list(self.unresolved)
        return sorted(found, key=lambda t: (t.span.start, t.span.end))

    def source_toponyms(self) -> list[Toponym]:
        return [p.source for p in self.pairs]

    def render_lines(self, include_coords: bool = False) -> str:
        return render_pairs(self.pairs, include_coords)

    def to_record(self, include_coords: bool = False) -> dict:
        def top(t: Toponym) -> dict:
            d = {"surface": t.surface, "start": t.span.start, "end": t.span.end}
            if include_coords and t.centroid is not None:
                d["lat"], d["lon"] = t.centroid
            if t.flags:
                d["flags"] = list(t.flags)
            return d

        return {
            "doc_id": self.doc_id,
            "source_lang": self.source_lang,
            "translation": self.translation,
            "pairs": [{"english": top(p.english), "source": top(p.source)} for p in self.pairs],
            "unresolved": [top(t) for t in self.unresolved],
            "diagnostics": list(self.diagnostics),
            "error": self.error,
        }


def _segments(text: str) -> list[str]:
    return [line for line in (normalize_text(l).strip() for l in text.splitlines()) if line]


class Geoparser:
    """A configured pipeline.  Shared, read-only state only, so one instance
    can serve many worker threads."""

    def __init__(
        self,
        provider: TranslationProvider,
        tagger,
        repair_config: RepairConfig | None = None,
        recover_scope: str = "sentence",
    ):
        self.provider = provider
        self.tagger = tagger
        self.repair_config = repair_config or RepairConfig.default()
        self.recover_scope = recover_scope

    @classmethod
    def from_config(cls, config: PipelineConfig, provider: TranslationProvider | None = None) -> Geoparser:
        config.validate()
        if provider is None:
            provider = build_provider(config)
        gazetteer = load_gazetteer(config.gazetteer or bundled_gazetteer_path())
        tagger_config = TaggerConfig(
            require_capitalization=config.require_capitalization,
            ambiguity_blocklist=frozenset(config.blocklist),
            max_phrase_tokens=config.max_phrase_tokens,
        )
        if config.tagger_command:
            tagger = SubprocessTagger(shlex.split(config.tagger_command), gazetteer)
        else:
            tagger = GazetteerTagger(gazetteer, tagger_config)
        repair = RepairConfig.default(strip_side=config.strip_side)
        for lang, path in config.function_words.items():
            repair = repair.with_list(lang, FunctionWords.load(path))
        if config.lang and config.lang not in repair.function_words:
            raise ConfigError(f"no function-word list for language {config.lang!r}")
        return cls(provider, tagger, repair, config.recover_scope)

    def align(self, text: str, lang: str) -> list[tuple[BitextSegment, AlignmentMap]]:
        aligned = []
        for line in _segments(text):
            result = self.provider.translate_with_alignment(TranslationRequest(line, lang))
            segment = result.segment(lang).validate()
            aligned.append((segment, build_alignment_map(segment, self.repair_config)))
        context = aligned if self.recover_scope == "document" else ()
        return [(seg, recover_lost_links(seg, amap, document=context)) for seg, amap in aligned]

    def geoparse_document(self, text: str, lang: str, doc_id: str = "doc") -> DocumentResult:
        result = DocumentResult(doc_id, lang)
        src_offset = en_offset = 0
        sources, translations = [], []
        for i, (segment, amap) in enumerate(self.align(text, lang)):
            result.maps.append(amap)
            if not segment.links:
                result.diagnostics.append(f"{ALIGNMENT_LOSS}:{i}")
            for c in amap.conflicts:
                result.diagnostics.append(f"{CONFLICT}:{i}:{c.key}:{c.old}|{c.new}->{c.winner}")
            for o in amap.recovered:
                result.diagnostics.append(f"{RECOVERED}:{i}:{o.english.text}->{o.source.text}")

            toponyms = self.tagger(segment.target_text)
            projection = find_source_toponyms(toponyms, amap, segment.source_text, lang)
            for pair in projection.pairs:
                result.pairs.append(
                    ToponymPair(pair.english.shifted(en_offset), pair.source.shifted(src_offset))
                )
                if NON_CONTIGUOUS in pair.source.flags:
                    result.diagnostics.append(f"{NON_CONTIGUOUS}:{i}:{pair.english.surface}")
            for toponym in projection.unresolved:
                result.unresolved.append(toponym.shifted(en_offset))
                result.diagnostics.append(f"{UNRESOLVED}:{i}:{toponym.surface}")

            sources.append(segment.source_text)
            translations.append(segment.target_text)
            src_offset += len(segment.source_text) + 1
            en_offset += len(segment.target_text) + 1
        result.source_text = "\n".join(sources)
        result.translation = "\n".join(translations)
        return result

    def safe_geoparse(self, doc_id: str, text: str, lang: str) -> DocumentResult:
        try:
            return self.geoparse_document(text, lang, doc_id)
        except (ProviderError, TaggerProtocolError, ValueError) as exc:
            log.warning("document %s failed: %s", doc_id, exc)
            return DocumentResult(doc_id, lang, error=f"{type(exc).__name__}: {exc}")

    def geoparse_batch(
        self, docs: Iterable[tuple[str, str]], lang: str, jobs: int | None = None
    ) -> list[DocumentResult]:
        """Geoparse ``(doc_id, text)`` pairs concurrently; results keep input order."""
        docs = list(docs)
        workers = jobs or os.cpu_count() or 1
        if workers == 1 or len(docs) <= 1:
            return [self.safe_geoparse(d, t, lang) for d, t in docs]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda dt: self.safe_geoparse(dt[0], dt[1], lang), docs))


def build_provider(config: PipelineConfig) -> TranslationProvider:
    if config.provider == "fixture":
        return FixtureProvider.from_files(*config.effective_fixtures())
    if config.provider == "passthrough":
        return PassThroughProvider()
    kwargs = {}
    if config.rest_request_template:
        kwargs["request_template"] = json.loads(config.rest_request_template)
    return RestProvider(
        url=config.rest_url,
        translation_path=config.rest_translation_path,
        alignment_path=config.rest_alignment_path,
        auth_header=config.rest_auth_header,
        auth_env=config.rest_auth_env,
        **kwargs,
    )


def geoparse_document(text: str, lang: str, config: PipelineConfig, doc_id: str = "doc") -> DocumentResult:
    return Geoparser.from_config(config).geoparse_document(text, lang, doc_id)


# --- evaluation -------------------------------------------------------------


class EvalError(ValueError):
    pass


def load_corpus(corpus_dir: str | Path) -> list[tuple[str, str]]:
    """``<doc_id>.txt`` files of a corpus directory, sorted by doc_id.

    Files with a language infix (``<doc_id>.en.txt``) are translations and
    are not documents of their own.
    """
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise EvalError(f"corpus directory {corpus_dir} does not exist")
    docs = []
    for path in sorted(corpus_dir.glob("*.txt")):
        if "." in path.stem:
            continue
        docs.append((path.stem, normalize_text(path.read_text(encoding="utf-8"))))
    return docs


def manual_provider(corpus_dir: Path, docs: Sequence[tuple[str, str]], lang: str) -> ManualTranslationProvider:
    provider = ManualTranslationProvider()
    for doc_id, text in docs:
        path = corpus_dir / f"{doc_id}.en.txt"
        if not path.exists():
            raise EvalError(f"manual translation {path.name} missing")
        sources = _segments(text)
        targets = _segments(path.read_text(encoding="utf-8"))
        if len(sources) != len(targets):
            raise EvalError(f"{path.name}: {len(targets)} lines for {len(sources)} source lines")
        for src, tgt in zip(sources, targets):
            provider.add(lang, src, tgt)
    return provider


@dataclass
class EvalRun:
    label: str
    results: list[DocumentResult]
    metrics: Metrics
    per_doc: dict[str, Metrics]

    @property
    def failures(self) -> list[DocumentResult]:
        return [r for r in self.results if not r.ok]


@dataclass
class EvalReport:
    lang: str
    side: str
    mode: str
    runs: list[EvalRun]
    paired: PairedRun | None = None

    @property
    def metrics(self) -> Metrics:
        return self.runs[0].metrics

    @property
    def failures(self) -> list[DocumentResult]:
        return [r for run in self.runs for r in run.failures]


def predictions(results: Iterable[DocumentResult], side: str) -> dict[str, list[Toponym]]:
    if side == "source":
        return {r.doc_id: r.source_toponyms() for r in results}
    return {r.doc_id: r.english_toponyms() for r in results}


def run_eval(
    corpus_dir: str | Path,
    gold_path: str | Path | None,
    config: PipelineConfig,
    paired: Sequence[str] | None = None,
) -> EvalReport:
    """Geoparse a corpus and score it against gold annotations.

    Translation sources are ``machine`` (the configured provider) and
    ``manual`` (``<doc_id>.en.txt`` files, no alignment).  With ``paired``
    the same gold set scores both sources; the default side is then
    English, since the manual run has no alignment to project through.
    """
    corpus_dir = Path(corpus_dir)
    if not config.lang:
        raise ConfigError("evaluation needs the source language (lang)")
    lang = config.lang
    docs = load_corpus(corpus_dir)
    if not docs:
        raise EvalError(f"no documents in {corpus_dir}")
    gold_path = Path(gold_path) if gold_path else (config.gold or corpus_dir / "gold.tsv")
    gold = load_gold(gold_path, corpus_dir)
    gold_ids = {g.doc_id for g in gold}
    unannotated = [d for d, _ in docs if d not in gold_ids]
    if unannotated:
        raise EvalError(f"documents without gold entries: {unannotated}")

    sources = list(paired) if paired else ["machine"]
    if len(sources) not in (1, 2) or any(s not in ("machine", "manual") for s in sources):
        raise ConfigError(f"translation sources must be machine and/or manual, got {sources}")
    side = config.side or ("english" if paired else "source")
    gold_lang = lang if side == "source" else "en"

    base = Geoparser.from_config(config)
    runs = []
    for label in sources:
        if label == "manual":
            provider = manual_provider(corpus_dir, docs, lang)
            parser = Geoparser(provider, base.tagger, base.repair_config, base.recover_scope)
        else:
            parser = base
        results = parser.geoparse_batch(docs, lang, config.jobs)
        preds = predictions(results, side)
        per_doc = score_documents(preds, gold, config.mode, gold_lang)
        total = sum(per_doc.values(), Metrics.from_counts(0, 0, 0))
        runs.append(EvalRun(label, results, total, per_doc))

    report = EvalReport(lang, side, config.mode, runs)
    if len(runs) == 2:
        report.paired = compare_runs(
            predictions(runs[0].results, side),
            predictions(runs[1].results, side),
            gold,
            labels=(runs[0].label, runs[1].label),
            mode=config.mode,
            lang=gold_lang,
        )
    return report


# --- debugging --------------------------------------------------------------


def align_debug(sentence: str, lang: str, geoparser: Geoparser) -> str:
    """Stage-by-stage dump of how one sentence is aligned and projected."""
    out: list[str] = []

    def section(title: str):
        out.append(f"== {title}")

    result = geoparser.provider.translate_with_alignment(TranslationRequest(sentence, lang))
    segment = result.segment(lang).validate()
    section(f"translation ({result.provider_id})")
    out.append(f"source: {segment.source_text}")
    out.append(f"english: {segment.target_text}")

    section(f"raw links ({len(segment.links)})")
    if not segment.links:
        out.append(f"!! {ALIGNMENT_LOSS}: provider returned no alignment")
    naive: dict[str, str] = {}
    for i, link in enumerate(segment.links):
        src = link.source.slice(segment.source_text)
        en = link.target.slice(segment.target_text)
        naive[en] = src
        out.append(f"{i:>3}  {str(link):<14} {src} | {en}")

    section("pre-repair map (last link wins, nothing stripped)")
    out.append("{" + ", ".join(f"{k}={v}" for k, v in naive.items()) + "}")

    amap = build_alignment_map(segment, geoparser.repair_config)
    section(f"repaired map ({len(amap)} entries)")
    out.append(amap.render())

    section(f"conflicts ({len(amap.conflicts)})")
    for c in amap.conflicts:
        out.append(f"{c.key}: {c.old} vs {c.new} -> {c.winner} (link {c.link})")

    recovered = recover_lost_links(segment, amap)
    section(f"recovered links ({len(recovered.recovered)})")
    for o in recovered.recovered:
        out.append(f"{o.english.text}@{o.english.range} -> {o.source.text}@{o.source.range}")

    toponyms = geoparser.tagger(segment.target_text)
    projection = find_source_toponyms(toponyms, recovered, segment.source_text, lang)
    section(f"toponyms ({len(toponyms)})")
    for pair in projection.pairs:
        flags = f"  [{', '.join(pair.source.flags)}]" if pair.source.flags else ""
        out.append(pair.render() + flags)
    for t in projection.unresolved:
        out.append(f"{t.surface}  [{UNRESOLVED}]")
    return "\n".join(out) + "\n"

"""Gold annotations and precision/recall/F1 scoring.

Gold files are tab-separated, one mention per line::

    doc_id  start  end  surface  lang

Offsets are inclusive code-point offsets into ``<doc_id>.<lang>.txt`` when
that file exists next to the gold file, else into ``<doc_id>.txt``.  A line
holding only a doc_id declares an annotated document without mentions.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .alignment import CharRange, normalize_text
from .projection import Toponym

log = logging.getLogger(__name__)

MODES = ("surface", "overlap")


class GoldFormatError(ValueError):
    pass


class ScoringError(ValueError):
    pass


@dataclass(frozen=True)
class GoldMention:
    surface: str
    span: CharRange
    lang: str


@dataclass(frozen=True)
class GoldAnnotation:
    doc_id: str
    mentions: tuple[GoldMention, ...] = ()

    def for_lang(self, lang: str | None) -> list[GoldMention]:
        return [m for m in self.mentions if lang is None or m.lang == lang]


def read_document(directory: Path, doc_id: str, lang: str | None = None) -> str:
    candidates = ([directory / f"{doc_id}.{lang}.txt"] if lang else []) + [directory / f"{doc_id}.txt"]
    for path in candidates:
        if path.exists():
            return normalize_text(path.read_text(encoding="utf-8"))
    raise FileNotFoundError(f"no text for document {doc_id!r} in {directory}")


def load_gold(path: str | Path, texts_dir: str | Path | None = None) -> list[GoldAnnotation]:
    path = Path(path)
    texts_dir = Path(texts_dir) if texts_dir is not None else path.parent
    order: list[str] = []
    mentions: dict[str, list[GoldMention]] = {}
    texts: dict[tuple[str, str], str] = {}

    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not raw.strip() or raw.startswith("#"):
            continue
        fields = normalize_text(raw).split("\t")
        doc_id = fields[0].strip()
        if doc_id not in mentions:
            order.append(doc_id)
            mentions[doc_id] = []
        if len(fields) == 1:
            continue
        if len(fields) != 5:
            raise GoldFormatError(f"{path}:{lineno}: expected 5 tab-separated fields")
        _, start, end, surface, lang = fields
        try:
            span = CharRange(int(start), int(end))
        except ValueError as exc:
            raise GoldFormatError(f"{path}:{lineno}: {exc}") from None
        if (doc_id, lang) not in texts:
            try:
                texts[doc_id, lang] = read_document(texts_dir, doc_id, lang)
            except FileNotFoundError as exc:
                raise GoldFormatError(f"{path}:{lineno}: {exc}") from None
        text = texts[doc_id, lang]
        if not span.fits(text) or span.slice(text) != surface:
            found = span.slice(text) if span.fits(text) else "<out of bounds>"
            raise GoldFormatError(
                f"{path}:{lineno}: doc {doc_id} span {span} holds {found!r}, not {surface!r}"
            )
        mention = GoldMention(surface, span, lang)
        if mention in mentions[doc_id]:
            log.warning("%s:%d: duplicate mention %r in %s collapsed", path, lineno, surface, doc_id)
            continue
        mentions[doc_id].append(mention)

    return [GoldAnnotation(d, tuple(mentions[d])) for d in order]


def total_mentions(gold: Iterable[GoldAnnotation], lang: str | None = None) -> int:
    return sum(len(g.for_lang(lang)) for g in gold)


@dataclass(frozen=True)
class Metrics:
    true_positives: int
    false_positives: int
    false_negatives: int
    precision: float
    recall: float
    f1: float
    flags: tuple[str, ...] = ()

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int) -> Metrics:
        flags = []
        if tp + fp:
            precision = tp / (tp + fp)
        else:
            precision = 0.0
            flags.append("precision-undefined")
        if tp + fn:
            recall = tp / (tp + fn)
        else:
            recall = 0.0
            flags.append("recall-undefined")
        return cls(tp, fp, fn, precision, recall, f1_score(precision, recall), tuple(flags))

    def __add__(self, other: Metrics) -> Metrics:
        return Metrics.from_counts(
            self.true_positives + other.true_positives,
            self.false_positives + other.false_positives,
            self.false_negatives + other.false_negatives,
        )

    @property
    def counts(self) -> tuple[int, int, int]:
        return (self.true_positives, self.false_positives, self.false_negatives)


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def surface_key(text: str) -> str:
    return " ".join(normalize_text(text).casefold().split())


def _surface_matches(predicted: Sequence[str], gold: Sequence[str]) -> int:
    p = Counter(surface_key(s) for s in predicted)
    g = Counter(surface_key(s) for s in gold)
    return sum((p & g).values())


def _overlap_matches(predicted: Sequence[CharRange], gold: Sequence[CharRange]) -> int:
    # maximum bipartite matching (augmenting paths); sizes are per document
    owner: dict[int, int] = {}

    def augment(i: int, seen: set[int]) -> bool:
        for j, g in enumerate(gold):
            if j in seen or not predicted[i].overlaps(g):
                continue
            seen.add(j)
            if j not in owner or augment(owner[j], seen):
                owner[j] = i
                return True
        return False

    return sum(augment(i, set()) for i in range(len(predicted)))


def score_document(
    predicted: Sequence[Toponym], gold: Sequence[GoldMention], mode: str = "surface"
) -> Metrics:
    if mode == "surface":
        tp = _surface_matches([t.surface for t in predicted], [m.surface for m in gold])
    elif mode == "overlap":
        tp = _overlap_matches([t.span for t in predicted], [m.span for m in gold])
    else:
        raise ScoringError(f"unknown matching mode {mode!r}; expected one of {MODES}")
    return Metrics.from_counts(tp, len(predicted) - tp, len(gold) - tp)


def score_documents(
    predicted: Mapping[str, Sequence[Toponym]],
    gold: Iterable[GoldAnnotation],
    mode: str = "surface",
    lang: str | None = None,
) -> dict[str, Metrics]:
    gold = list(gold)
    known = {g.doc_id for g in gold}
    unknown = sorted(set(predicted) - known)
    if unknown:
        raise ScoringError(f"predictions for documents without gold annotations: {unknown}")
    return {
        g.doc_id: score_document(predicted.get(g.doc_id, ()), g.for_lang(lang), mode)
        for g in gold
    }


def score(
    predicted: Mapping[str, Sequence[Toponym]],
    gold: Iterable[GoldAnnotation],
    mode: str = "surface",
    lang: str | None = None,
) -> Metrics:
    """Micro-averaged metrics over all gold documents.

    ``surface`` mode matches case-insensitive surface multisets per
    document; ``overlap`` mode counts a prediction whose span overlaps an
    unused gold span.  ``lang`` restricts the gold mentions considered.
    """
    per_doc = score_documents(predicted, gold, mode, lang)
    tp = sum(m.true_positives for m in per_doc.values())
    fp = sum(m.false_positives for m in per_doc.values())
    fn = sum(m.false_negatives for m in per_doc.values())
    return Metrics.from_counts(tp, fp, fn)


@dataclass(frozen=True)
class DocDelta:
    doc_id: str
    precision_a: float
    precision_b: float
    recall_a: float
    recall_b: float

    @property
    def d_precision(self) -> float:
        return self.precision_a - self.precision_b

    @property
    def d_recall(self) -> float:
        return self.recall_a - self.recall_b


@dataclass(frozen=True)
class PairedRun:
    label_a: str
    label_b: str
    metrics_a: Metrics
    metrics_b: Metrics
    per_doc: list[DocDelta] = field(default_factory=list)


def compare_runs(
    run_a: Mapping[str, Sequence[Toponym]],
    run_b: Mapping[str, Sequence[Toponym]],
    gold: Iterable[GoldAnnotation],
    labels: tuple[str, str] = ("machine", "manual"),
    mode: str = "surface",
    lang: str | None = None,
) -> PairedRun:
    gold = list(gold)
    if set(run_a) != set(run_b):
        diff = sorted(set(run_a) ^ set(run_b))
        raise ScoringError(f"runs cover different documents: {diff}")
    docs_a = score_documents(run_a, gold, mode, lang)
    docs_b = score_documents(run_b, gold, mode, lang)
    deltas = [
        DocDelta(d, docs_a[d].precision, docs_b[d].precision, docs_a[d].recall, docs_b[d].recall)
        for d in docs_a
    ]
    total_a = sum(docs_a.values(), Metrics.from_counts(0, 0, 0))
    total_b = sum(docs_b.values(), Metrics.from_counts(0, 0, 0))
    return PairedRun(labels[0], labels[1], total_a, total_b, deltas)


def render_paired_table(runs: Mapping[str, PairedRun]) -> str:
    """Side-by-side precision/recall/F1, one column pair per language."""
    header = [""]
    sub = [""]
    rows = {"Precision": [], "Recall": [], "F1": []}
    for name, run in runs.items():
        header += [name, ""]
        sub += [run.label_a, run.label_b]
        for metrics in (run.metrics_a, run.metrics_b):
            rows["Precision"].append(f"{metrics.precision:.3f}")
            rows["Recall"].append(f"{metrics.recall:.3f}")
            rows["F1"].append(f"{metrics.f1:.3f}")
    table = [header, sub] + [[label, *vals] for label, vals in rows.items()]
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    return "".join(
        "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() + "\n" for row in table
    )


def render_metrics(metrics: Metrics, label: str = "") -> str:
    prefix = f"{label}: " if label else ""
    tp, fp, fn = metrics.counts
    return (
        f"{prefix}TP={tp} FP={fp} FN={fn} "
        f"P={metrics.precision:.3f} R={metrics.recall:.3f} F1={metrics.f1:.3f}"
    )

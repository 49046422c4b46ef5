from __future__ import annotations

import logging
import random

import pytest

from mtgeoparse.alignment import CharRange
from mtgeoparse.evaluation import (
    GoldAnnotation,
    GoldFormatError,
    GoldMention,
    Metrics,
    ScoringError,
    compare_runs,
    f1_score,
    load_gold,
    render_paired_table,
    score,
    score_documents,
)
from mtgeoparse.pipeline import sample_corpus_path
from mtgeoparse.projection import Toponym


def top(surface, start=0, end=None):
    return Toponym(surface, CharRange(start, start + len(surface) - 1 if end is None else end), "en")


def gold_doc(doc_id, *mentions):
    return GoldAnnotation(
        doc_id,
        tuple(GoldMention(s, CharRange(a, b), "en") for s, a, b in mentions),
    )


def brute_force_tp(pred, gold, same):
    """Largest number of disjoint (pred, gold) pairs, by exhaustive search."""
    best = 0

    def search(i, used, count):
        nonlocal best
        best = max(best, count)
        if i == len(pred) or count + (len(pred) - i) <= best:
            return
        for j in range(len(gold)):
            if j not in used and same(pred[i], gold[j]):
                search(i + 1, used | {j}, count + 1)
        search(i + 1, used, count)

    search(0, frozenset(), 0)
    return best


def oracle(predicted, gold, mode):
    tp = fp = fn = 0
    for g in gold:
        p = predicted.get(g.doc_id, [])
        if mode == "surface":
            same = lambda a, b: " ".join(a.surface.lower().split()) == " ".join(b.surface.lower().split())
        else:
            same = lambda a, b: a.span.start <= b.span.end and b.span.start <= a.span.end
        t = brute_force_tp(p, list(g.mentions), same)
        tp, fp, fn = tp + t, fp + len(p) - t, fn + len(g.mentions) - t
    return tp, fp, fn


def random_instance(rnd: random.Random):
    names = ["Paris", "paris", "Iraq", "New  York", "new york", "Oman"]
    docs = [f"d{i}" for i in range(rnd.randint(1, 3))]
    predicted, gold = {}, []
    budget = 10
    for d in docs:
        gm = []
        for _ in range(rnd.randint(0, min(4, budget))):
            a = rnd.randint(0, 30)
            gm.append((rnd.choice(names), a, a + rnd.randint(0, 6)))
        budget -= len(gm)
        gold.append(gold_doc(d, *gm))
        preds = []
        for _ in range(rnd.randint(0, min(4, budget))):
            a = rnd.randint(0, 30)
            preds.append(top(rnd.choice(names), a, a + rnd.randint(0, 6)))
        budget -= len(preds)
        predicted[d] = preds
    return predicted, gold


@pytest.mark.parametrize("mode", ["surface", "overlap"])
def test_matches_brute_force_oracle(mode):
    rnd = random.Random(20141015)
    for _ in range(500):
        predicted, gold = random_instance(rnd)
        assert score(predicted, gold, mode).counts == oracle(predicted, gold, mode)


def test_symmetry():
    rnd = random.Random(7)
    for _ in range(200):
        predicted, gold = random_instance(rnd)
        as_gold = [
            gold_doc(d, *((t.surface, t.span.start, t.span.end) for t in ts)) for d, ts in predicted.items()
        ]
        as_pred = {g.doc_id: [top(m.surface, m.span.start, m.span.end) for m in g.mentions] for g in gold}
        for mode in ("surface", "overlap"):
            a = score(predicted, gold, mode)
            b = score(as_pred, as_gold, mode)
            assert (a.true_positives, a.false_positives, a.false_negatives) == (
                b.true_positives, b.false_negatives, b.false_positives
            )
            assert (a.precision, a.recall) == (b.recall, b.precision)


def test_monotonicity():
    rnd = random.Random(11)
    for _ in range(200):
        predicted, gold = random_instance(rnd)
        base = score(predicted, gold)
        g = rnd.choice(gold)
        correct = {**predicted, g.doc_id: predicted[g.doc_id] + [top("Zanzibar")]}
        wrong = {**predicted, g.doc_id: predicted[g.doc_id] + [top("Atlantis")]}
        gold_plus = [
            gold_doc(x.doc_id, *((m.surface, m.span.start, m.span.end) for m in x.mentions), ("Zanzibar", 0, 7))
            if x is g else x for x in gold
        ]
        assert score(correct, gold_plus).recall >= score(predicted, gold_plus).recall
        assert score(wrong, gold).precision <= base.precision


def test_micro_average_is_sum_of_documents():
    rnd = random.Random(3)
    for _ in range(100):
        predicted, gold = random_instance(rnd)
        per_doc = score_documents(predicted, gold)
        total = score(predicted, gold)
        assert total.counts == tuple(sum(m.counts[i] for m in per_doc.values()) for i in range(3))


class TestExamples:
    def test_perfect(self):
        gold = [gold_doc("d", ("Caribbean", 0, 8), ("Pacific", 10, 16), ("United States", 20, 32))]
        pred = {"d": [top("Caribbean"), top("Pacific"), top("United States")]}
        m = score(pred, gold)
        assert (m.precision, m.recall, m.f1) == (1.0, 1.0, 1.0)

    def test_half(self):
        m = score({"d": [top("A"), top("B")]}, [gold_doc("d", ("B", 0, 0), ("C", 1, 1))])
        assert m.counts == (1, 1, 1) and (m.precision, m.recall, m.f1) == (0.5, 0.5, 0.5)

    def test_table4_chinese_row(self):
        assert f1_score(0.821, 0.737) == pytest.approx(0.777, abs=0.001)

    def test_each_gold_mention_used_once(self):
        m = score({"d": [top("Israel"), top("Israel"), top("Israel")]}, [gold_doc("d", ("Israel", 0, 5), ("israel", 9, 14))])
        assert m.counts == (2, 1, 0)

    def test_undefined_ratios_flagged(self):
        m = Metrics.from_counts(0, 0, 0)
        assert (m.precision, m.recall, m.f1) == (0.0, 0.0, 0.0)
        assert set(m.flags) == {"precision-undefined", "recall-undefined"}

    def test_unknown_document(self):
        with pytest.raises(ScoringError, match="ghost"):
            score({"ghost": [top("X")]}, [gold_doc("d")])

    def test_unknown_mode(self):
        with pytest.raises(ScoringError):
            score({}, [gold_doc("d")], mode="fuzzy")


class TestGoldFiles:
    def write(self, tmp_path, gold, **texts):
        for name, text in texts.items():
            (tmp_path / f"{name}.txt").write_text(text, encoding="utf-8")
        path = tmp_path / "gold.tsv"
        path.write_text(gold, encoding="utf-8")
        return path

    def test_empty_file(self, tmp_path):
        assert load_gold(self.write(tmp_path, "")) == []

    def test_mismatch_names_document_and_span(self, tmp_path):
        path = self.write(tmp_path, "d1\t0\t1\t北京\tzh\n", d1="美国在")
        with pytest.raises(GoldFormatError, match=r"d1.*0:1"):
            load_gold(path)

    def test_duplicates_collapse(self, tmp_path, caplog):
        path = self.write(tmp_path, "d1\t0\t1\t美国\tzh\nd1\t0\t1\t美国\tzh\nd2\n", d1="美国在")
        with caplog.at_level(logging.WARNING):
            gold = load_gold(path)
        assert [len(g.mentions) for g in gold] == [1, 0]
        assert "duplicate" in caplog.text

    def test_language_specific_text(self, tmp_path):
        (tmp_path / "d1.en.txt").write_text("United States", encoding="utf-8")
        path = self.write(tmp_path, "d1\t0\t1\t美国\tzh\nd1\t0\t12\tUnited States\ten\n", d1="美国在")
        [g] = load_gold(path)
        assert [m.lang for m in g.mentions] == ["zh", "en"]
        assert [m.surface for m in g.for_lang("en")] == ["United States"]

    @pytest.mark.parametrize("lang", ["zh", "ar"])
    def test_bundled_samples_load(self, lang):
        path = sample_corpus_path(lang) / "gold.tsv"
        rows = [l for l in path.read_text(encoding="utf-8").splitlines() if l and not l.startswith("#")]
        gold = load_gold(path)
        assert sum(len(g.mentions) for g in gold) == sum(1 for r in rows if "\t" in r)
        assert len(gold) >= 20


class TestPairedRuns:
    gold = [gold_doc("a", ("Paris", 0, 4)), gold_doc("b", ("Oman", 0, 3))]

    def test_identical_runs_zero_deltas(self):
        run = {"a": [top("Paris")], "b": []}
        paired = compare_runs(run, run, self.gold)
        assert all(d.d_precision == 0 and d.d_recall == 0 for d in paired.per_doc)
        assert paired.metrics_a == paired.metrics_b

    def test_one_document_differs(self):
        run_a = {"a": [top("Paris")], "b": [top("Oman")]}
        run_b = {"a": [top("Paris")], "b": []}
        paired = compare_runs(run_a, run_b, self.gold)
        nonzero = [d.doc_id for d in paired.per_doc if d.d_precision or d.d_recall]
        assert nonzero == ["b"]

    def test_document_mismatch(self):
        with pytest.raises(ScoringError, match="'b'"):
            compare_runs({"a": []}, {"a": [], "b": []}, self.gold)

    def test_table_shape(self):
        run = {"a": [top("Paris")], "b": []}
        table = render_paired_table({"Chinese": compare_runs(run, {"a": [], "b": []}, self.gold)})
        lines = table.splitlines()
        assert lines[0].split() == ["Chinese"]
        assert lines[1].split() == ["machine", "manual"]
        assert [l.split()[0] for l in lines[2:]] == ["Precision", "Recall", "F1"]
        assert lines[2].split()[1:] == ["1.000", "0.000"]
        assert lines[3].split()[1:] == ["0.500", "0.000"]

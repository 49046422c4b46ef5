from __future__ import annotations

import time

import pytest

from mtgeoparse.geotag import GazetteerTagger, bundled_gazetteer_path, load_gazetteer
from mtgeoparse.pipeline import Geoparser, PipelineConfig, bundled_fixtures_path
from mtgeoparse.providers import FixtureProvider, TranslationRequest
from mtgeoparse.repair import RepairConfig

WORKED_ZH = "美国在加勒比海和太平洋还拥有多处领土和岛屿地区"
WORKED_AR = "أنا أعيش في إسرائيل"

# one "criterion N: PASS|FAIL ..." line per acceptance check, echoed at the end
ACCEPTANCE_LINES: list[str] = []
SUITE_BUDGET_S = 60.0
_started = time.perf_counter()


def pytest_sessionfinish(session, exitstatus):
    elapsed = time.perf_counter() - _started
    if session.testscollected > 100:
        # whole-suite runtime bound of criterion 7
        verdict = "PASS" if elapsed < SUITE_BUDGET_S else "FAIL"
        ACCEPTANCE_LINES.append(f"criterion 7: {verdict}  full suite in {elapsed:.1f} s (< {SUITE_BUDGET_S:.0f} s)")
        if verdict == "FAIL":
            session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fixtures():
    return FixtureProvider.from_files(bundled_fixtures_path())


@pytest.fixture(scope="session")
def gazetteer():
    return load_gazetteer(bundled_gazetteer_path())


@pytest.fixture(scope="session")
def tagger(gazetteer):
    return GazetteerTagger(gazetteer)


@pytest.fixture(scope="session")
def repair_config():
    return RepairConfig.default()


@pytest.fixture(scope="session")
def geoparser():
    return Geoparser.from_config(PipelineConfig())


@pytest.fixture
def segment_for(fixtures):
    def make(text: str, lang: str):
        return fixtures.translate_with_alignment(TranslationRequest(text, lang)).segment(lang)

    return make

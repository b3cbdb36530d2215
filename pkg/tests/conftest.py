from __future__ import annotations

import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from aida.fixtures import mean_fixture, paper_fixture  # noqa: E402

DATA = Path(__file__).parent / "data"

INTRO_SENTENCES = (
    "A combination of system and searcher biases lead search engine users to settle on the "
    "incorrect answer to yes/no-questions around half of the time.",
    "Teenagers reply on average faster to emails than adults.",
    "Deep learning is a powerful and accurate method for automatic speech recognition.",
)

ALZHEIMER_SENTENCE = (
    "The treatment of Alzheimer's disease with one of the three cholinesterase inhibitors donepezil, "
    "galantamine or rivastigmine has a higher probability of at least one adverse event of anorexia "
    "before the end of the treatment as compared to a placebo treatment."
)


def write_jsonl(path: Path, records) -> Path:
    path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def paper_files(tmp_path_factory):
    return paper_fixture().write(tmp_path_factory.mktemp("paper"))


@pytest.fixture(scope="session")
def mean_files(tmp_path_factory):
    return mean_fixture().write(tmp_path_factory.mktemp("mean"))


# -- acceptance reporting ----------------------------------------------------

_CRITERIA: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when not in ("setup", "call"):
        return
    name = marker.args[0]
    if report.when == "setup" and report.passed:
        return
    status = "PASS" if report.passed else "FAIL"
    elapsed = getattr(item, "criterion_elapsed", None)
    detail = f"{elapsed:.2f}s" if elapsed is not None else report.when
    _CRITERIA[name] = (status, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, (status, detail) in _CRITERIA.items():
        terminalreporter.write_line(f"{status}  {name}  ({detail})")

from __future__ import annotations

import pytest

from nl2domain.config import PipelineConfig
from nl2domain.pipeline import Pipeline, Resources

TABLE1_SENTENCES = [
    "Max can go to different places such as restaurants and parks.",
    "Max can engage in different activities including riding a horse.",
    "Max can be aware of his surroundings.",
    "Max can stand at the bus station.",
    "Max would like to drink some juice.",
]

FIG4_SENTENCE = "Max would like to try out different activities such as racing and climbing."
COREF_SENTENCE = "Max brings the book and then he reads it."
AFFORDANCE_SENTENCE = ("Max goes to the library only if he has an exam "
                       "after which he feels more knowledgeable.")
AFFECT_SENTENCE = "Max will get extremely angry whenever he fails his exams."


@pytest.fixture(scope="session")
def resources() -> Resources:
    return Resources.load(PipelineConfig())


@pytest.fixture(scope="session")
def pipeline(resources) -> Pipeline:
    return Pipeline(resources)


# -- acceptance reporting ----------------------------------------------------

_ACCEPTANCE_RESULTS: list[tuple[str, bool]] = []


def record_acceptance(name: str, passed: bool) -> None:
    _ACCEPTANCE_RESULTS.append((name, passed))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed in _ACCEPTANCE_RESULTS:
        terminalreporter.write_line(
            f"[{'PASS' if passed else 'FAIL'}] {name}")

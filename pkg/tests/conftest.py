"""Session-wide experiment runs shared by the unit and acceptance tests."""

from __future__ import annotations

import time

import pytest

from shkflow.experiments import ExperimentConfig, ExpId, run_experiment

# (criterion, passed, detail) rows collected by the acceptance suite
ACCEPTANCE_LINES: list[tuple[str, bool, str]] = []


class _Runs:
    """Lazily runs each experiment at most once and remembers its wall time."""

    def __init__(self):
        self.reports = {}
        self.elapsed = {}

    def __getitem__(self, exp_id: ExpId):
        exp_id = ExpId(exp_id)
        if exp_id not in self.reports:
            start = time.perf_counter()
            self.reports[exp_id] = run_experiment(ExperimentConfig(exp_id))
            self.elapsed[exp_id] = time.perf_counter() - start
        return self.reports[exp_id]


@pytest.fixture(scope="session")
def runs() -> _Runs:
    return _Runs()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_LINES:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")

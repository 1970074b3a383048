from __future__ import annotations

import numpy as np
import pytest

import acceptance_log


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if not acceptance_log.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance_log.LINES:
        terminalreporter.write_line(line)

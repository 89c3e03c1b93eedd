"""Shared fixtures and the acceptance-summary reporting hook.

The large reference sample batches are session-scoped so the distribution
criteria and the Laplace cross-check reuse the same draws instead of
paying for two more six-figure runs.
"""

import pytest

from skewsim import SkewConfig
from skewsim.report import run_chain_batch

_ACCEPTANCE_LINES = []


def record_criterion(num: int, passed: bool, detail: str) -> None:
    _ACCEPTANCE_LINES.append((num, passed, detail))


@pytest.fixture(scope="session")
def pospos_batch():
    cfg = SkewConfig(x=1.0, beta1=0.5, beta2=0.25)
    return cfg, run_chain_batch(cfg, seed=101, n=100000)


@pytest.fixture(scope="session")
def posneg_batch():
    cfg = SkewConfig(x=1.0, beta1=0.5, beta2=-0.5)
    return cfg, run_chain_batch(cfg, seed=103, n=100000)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num, passed, detail in sorted(_ACCEPTANCE_LINES):
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d}: {verdict}  {detail}")

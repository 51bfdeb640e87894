import math

import numpy as np
import pytest

from jctrimer.model import SystemParams


@pytest.fixture
def base():
    return SystemParams(omega0=1000.0, g1=1.2, j=0.05, theta=0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_alpha(rng, params, n=None):
    scale = 2.0 * params.g1 * math.sqrt(params.eta)
    shape = (3,) if n is None else (n, 3)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / 2


# ---------------------------------------------------------------------------
# acceptance summary: one PASS/FAIL line per criterion, aggregated over sub-tests

_CRITERIA = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid or "::test_criterion_" not in report.nodeid:
        return
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    name = report.nodeid.split("::test_criterion_")[1]
    number = int(name.split("_")[0])
    _CRITERIA.setdefault(number, []).append((name, report.outcome == "passed"))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        parts = _CRITERIA[number]
        ok = all(p for _, p in parts)
        failed = [n for n, p in parts if not p]
        detail = "" if ok else "  failing: " + ", ".join(failed)
        tr.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'} "
                      f"({sum(p for _, p in parts)}/{len(parts)} sub-checks){detail}")

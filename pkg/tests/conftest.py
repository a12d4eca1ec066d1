import os
import sys
from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

import oracles  # noqa: E402
from normsurf.enumeration import enumerate_fundamental_solutions  # noqa: E402
from normsurf.fixtures import fixture, small_fixtures  # noqa: E402

settings.register_profile(
    "repo", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")


@lru_cache(maxsize=None)
def scan(name: str, bound: int = 5):
    return oracles.scan_admissible(fixture(name), bound)


@lru_cache(maxsize=None)
def fundamentals(name: str):
    return enumerate_fundamental_solutions(fixture(name))


SMALL = sorted(small_fixtures(2))


@pytest.fixture(params=SMALL)
def small_name(request):
    return request.param


_ACCEPTANCE: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        num = int(name.split("_")[2])
        label = " ".join(name.split("_")[3:])
        terminalreporter.write_line(f"criterion {num:2d} {_ACCEPTANCE[name]}: {label}")

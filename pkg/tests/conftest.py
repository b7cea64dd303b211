import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from gitkit import full_unitary, special_unitary, spin_representation, torus

settings.register_profile(
    "gitkit",
    max_examples=40,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "gitkit"))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def u1_in_u2():
    return torus([[1], [-1]])


@pytest.fixture
def u2():
    return full_unitary(2)


@pytest.fixture
def su2():
    return special_unitary(2)


@pytest.fixture
def spin1():
    return spin_representation(2)


_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        props = dict(report.user_properties)
        notes = [v for k, v in report.user_properties if k == "acceptance"]
        status = "PASS" if report.passed else "FAIL"
        _ACCEPTANCE[report.nodeid] = (props.get("criterion", 0), status, "; ".join(notes))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (k, status, notes) in sorted(_ACCEPTANCE.items(), key=lambda item: item[1][0]):
        name = nodeid.split("::")[-1].removeprefix("test_").replace("_", " ")
        terminalreporter.write_line(f"{status} [{k:02d}] {name}: {notes}")

import pathlib
import re

import pytest


@pytest.fixture(scope="session")
def fixtures_dir() -> pathlib.Path:
    return pathlib.Path(__file__).parent / "fixtures"


def pytest_runtest_logreport(report):
    """Print one ACCEPTANCE line per acceptance-gate criterion.

    Runs while capture is suspended, so the verdicts appear in the
    terminal output of a plain pytest run.
    """
    match = re.search(r"test_criterion_(\d+)", report.nodeid)
    if match is None:
        return
    failed_setup = report.when == "setup" and report.failed
    if report.when == "call" or failed_setup:
        status = "PASS" if report.passed else "FAIL"
        print(f"\nACCEPTANCE {match.group(1)}: {status}")

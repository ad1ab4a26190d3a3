import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

REPO_ROOT = Path(__file__).parent.parent
GOLDENS_DIR = REPO_ROOT / "goldens"
FIXTURES_DIR = REPO_ROOT / "fixtures"


@pytest.fixture
def goldens_dir() -> Path:
    return GOLDENS_DIR


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES_DIR


def pytest_runtest_logreport(report):
    # one visible pass/fail line per acceptance criterion
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        outcome = "PASS" if report.passed else "FAIL"
        sys.stderr.write(f"ACCEPTANCE {name}: {outcome}\n")
        sys.stderr.flush()

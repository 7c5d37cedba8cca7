import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixture_json():
    def load(name):
        with open(FIXTURES / name) as fh:
            return json.load(fh)
    return load


@pytest.fixture
def report(capsys):
    """Print one uncaptured status line, then fail the test if ok is false."""
    def emit(label, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        assert ok, f"{label}: {detail}"
    return emit

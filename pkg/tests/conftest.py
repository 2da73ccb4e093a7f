from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from substitutive import builtin, fixed_point  # noqa: E402

RULES = {
    "thue_morse": {"0": "01", "1": "10"},
    "ex1111": {"0": "0100", "1": "1101"},
    "dekking": {"a": "aabc", "b": "bbc", "c": "acc"},
    "fibonacci": {"0": "01", "1": "0"},
    "tribonacci": {"1": "12", "2": "13", "3": "1"},
    "justin_pirillo": {"0": "00001", "1": "11110"},
}


@pytest.fixture(scope="session")
def windows():
    """Lazily built windows, shared by all tests: ``windows(name, W)``."""
    cache = {}

    def get(name: str, W: int = 2**16):
        key = (name, W)
        if key not in cache:
            cache[key] = fixed_point(builtin(name), W)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def rules():
    return RULES


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])

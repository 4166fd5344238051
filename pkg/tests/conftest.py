from __future__ import annotations

import sys
from collections import OrderedDict
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE = {
    "AC1": "detector fixture suite scores 100% (< 1 s)",
    "AC2": "verdict threshold and 130/200 (65%) verdict agreement",
    "AC3": "metric oracle equivalence on 100 random pairs (< 5 s)",
    "AC4": "Hamming-loss anchor 0.09",
    "AC5": "prompt byte-exactness against golden files",
    "AC6": "judge protocol with mock backend",
    "AC7": "statistics against brute-force oracles",
    "AC8": "end-to-end lint determinism and order stability",
    "AC9": "property suite on 1000 fuzzed questions (< 30 s)",
}

_results: "OrderedDict[str, list[bool]]" = OrderedDict((k, []) for k in ACCEPTANCE)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(id): test belongs to an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or not marker.args:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _results[marker.args[0]].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    ran = {k: v for k, v in _results.items() if v}
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for key, outcomes in ran.items():
        status = "PASS" if all(outcomes) else "FAIL"
        terminalreporter.write_line(f"{key} {status}  {ACCEPTANCE[key]}  ({sum(outcomes)}/{len(outcomes)} checks)")

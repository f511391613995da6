from __future__ import annotations

from collections import OrderedDict

import pytest

from pstnet.catalog import load_catalog

CRITERIA = OrderedDict([
    ("ac1", "C_4 end-to-end solve and four-engine verify"),
    ("ac2", "hypercube d=3 solve, spin oracle, fidelity"),
    ("ac3", "catalog regression, spectral layer"),
    ("ac4", "catalog regression, solution layer"),
    ("ac5", "property suite over catalog, cycles, hypercubes"),
    ("ac6", "oracle equivalence of amplitude engines"),
    ("ac7", "distance-regularity detector"),
])

_outcomes: dict[str, list[tuple[str, str]]] = {k: [] for k in CRITERIA}


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


def _criterion(nodeid: str):
    if "test_acceptance.py" not in nodeid:
        return None
    name = nodeid.split("::")[-1]
    key = name.removeprefix("test_").split("_", 1)[0]
    return key if key in _outcomes else None


def pytest_runtest_logreport(report):
    key = _criterion(report.nodeid)
    if key is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _outcomes[key].append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not any(_outcomes.values()):
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key, title in CRITERIA.items():
        runs = _outcomes[key]
        if not runs:
            tr.write_line(f"{key.upper()} NOT RUN  {title}")
            continue
        failed = [name for name, outcome in runs if outcome != "passed"]
        verdict = "PASS" if not failed else "FAIL"
        extra = f"  ({len(failed)}/{len(runs)} failing: {', '.join(failed)})" if failed else ""
        tr.write_line(f"{key.upper()} {verdict}  {title}{extra}")

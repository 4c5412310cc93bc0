"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""
from collections import OrderedDict

import pytest

_OUTCOMES = OrderedDict()
_TITLES = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    cid = str(marker.args[0])
    if len(marker.args) > 1:
        _TITLES[str(_criterion_key(cid)[0])] = marker.args[1]
    failed = report.failed or (report.when == "call" and report.skipped)
    if report.when == "call" or failed:
        _OUTCOMES.setdefault(cid, [])
        _OUTCOMES[cid].append((item.name, not failed))


def _criterion_key(cid):
    head = "".join(ch for ch in cid if ch.isdigit())
    return (int(head) if head else 0, cid)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    groups = OrderedDict()
    for cid in sorted(_OUTCOMES, key=_criterion_key):
        number = _criterion_key(cid)[0]
        groups.setdefault(number, []).append(cid)
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number, cids in groups.items():
        parts = []
        ok = True
        for cid in cids:
            sub_ok = all(passed for _, passed in _OUTCOMES[cid])
            ok &= sub_ok
            parts.append(f"{cid} {'PASS' if sub_ok else 'FAIL'}")
        title = _TITLES.get(str(number), "")
        detail = f" [{', '.join(parts)}]" if len(cids) > 1 or cids[0] != str(number) else ""
        tr.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}{detail}")

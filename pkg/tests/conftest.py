"""Shared fixtures and the per-criterion acceptance summary."""

import pytest

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")
    config.addinivalue_line("markers", "acceptance: acceptance criteria suite")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        n = marker.args[0]
        detail = ", ".join(f"{k}={v}" for k, v in item.user_properties)
        _CRITERIA.setdefault(n, []).append((item.name, rep.outcome, rep.duration, detail))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        rows = _CRITERIA[n]
        ok = all(r[1] == "passed" for r in rows)
        tr.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}")
        for name, outcome, dur, detail in rows:
            tr.write_line(f"    {outcome.upper():6s} {name} ({dur:.1f} s) {detail}")


@pytest.fixture
def record(request):
    """Attach ``key=value`` details to the acceptance summary line."""
    def add(**kw):
        for k, v in kw.items():
            request.node.user_properties.append((k, f"{v:.6g}" if isinstance(v, float) else v))
    return add

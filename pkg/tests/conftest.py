import numpy as np
import pytest

from qardl.series import ROLES, AlignedPanel, PanelColumn

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): numbered acceptance criterion")


def pytest_runtest_logreport(report):
    marker = _ACCEPTANCE.get(report.nodeid)
    if marker is None:
        return
    if report.when == "call" or report.outcome != "passed":
        marker["outcome"] = marker.get("outcome") if marker.get("outcome") == "failed" else report.outcome


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m is not None:
            _ACCEPTANCE[item.nodeid] = {"number": m.args[0], "title": m.args[1]}


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for rec in sorted(_ACCEPTANCE.values(), key=lambda r: r["number"]):
        outcome = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}.get(rec.get("outcome"), "NOT RUN")
        terminalreporter.write_line(f"criterion {rec['number']}: {outcome}  {rec['title']}")


def random_panel(n=200, seed=0, roles=ROLES, walk=True):
    """Panel of independent Gaussian random walks (or white noise) on consecutive days."""
    rng = np.random.default_rng(seed)
    dates = np.datetime64("2020-01-01") + np.arange(n)
    cols = []
    for r in roles:
        x = rng.standard_normal(n)
        cols.append(PanelColumn(r.upper(), r, np.cumsum(x) if walk else x))
    return AlignedPanel(dates, tuple(cols))


@pytest.fixture
def write_csv(tmp_path):
    def _write(text, name="data.csv"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return p

    return _write

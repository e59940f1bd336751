import numpy as np
import pytest

_ACCEPTANCE = {}


@pytest.fixture
def acceptance(request):
    """Record a criterion's outcome; the terminal summary prints one line per criterion."""
    record = {"id": None, "title": "", "detail": ""}

    def note(cid, title, detail=""):
        record.update(id=cid, title=title, detail=detail)

    yield note
    if record["id"] is not None:
        rep = getattr(request.node, "rep_call", None)
        ok = rep is not None and rep.passed
        _ACCEPTANCE[record["id"]] = (ok, record["title"], record["detail"])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_ACCEPTANCE):
        ok, title, detail = _ACCEPTANCE[cid]
        terminalreporter.write_line(f"criterion {cid:2d}: {'PASS' if ok else 'FAIL'}  {title}  {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

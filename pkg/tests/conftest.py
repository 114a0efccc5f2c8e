import pytest

ACCEPTANCE: dict[str, str] = {}


@pytest.fixture
def criterion(request):
    """Record a pass/fail line for an acceptance criterion."""
    name = request.node.name
    ACCEPTANCE[name] = "FAIL"
    yield
    rep = getattr(request.node, "rep_call", None)
    if rep is not None and rep.passed:
        ACCEPTANCE[name] = "PASS"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"{ACCEPTANCE[name]}  {name}")

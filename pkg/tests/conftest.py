import pytest

_CRITERIA: dict[str, str] = {}
_OUTCOMES: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _CRITERIA[item.nodeid] = f"{m.args[0]:>2}. {m.args[1]}"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.nodeid not in _CRITERIA:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _OUTCOMES[item.nodeid] = "PASS" if rep.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, label in sorted(_CRITERIA.items(), key=lambda kv: int(kv[1].split(".")[0])):
        if nodeid in _OUTCOMES:
            terminalreporter.write_line(f"{_OUTCOMES[nodeid]}  {label}")

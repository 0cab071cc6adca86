import pytest

_RESULTS: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion reported in the summary")


@pytest.fixture
def record(request):
    """Attach an observation string to the running criterion."""

    def _record(text: str) -> None:
        request.node.user_properties.append(("observed", text))

    return _record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call" and not rep.failed:
        return
    number, title = marker.args
    entry = _RESULTS.setdefault(number, {"title": title, "passed": True, "seconds": 0.0, "observed": []})
    entry["passed"] &= rep.passed
    entry["seconds"] += rep.duration
    entry["observed"] = [v for k, v in item.user_properties if k == "observed"]


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        entry = _RESULTS[number]
        status = "PASS" if entry["passed"] else "FAIL"
        line = f"[{status}] {number:2d}. {entry['title']} ({entry['seconds']:.1f}s)"
        if entry["observed"]:
            line += " :: " + "; ".join(entry["observed"])
        terminalreporter.write_line(line)

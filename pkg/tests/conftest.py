import pytest

from compact64 import codec

_criteria: dict[int, dict] = {}


@pytest.fixture(scope="session")
def schemes():
    return {name: codec.builtin_scheme(name) for name in codec.BUILTIN_NAMES}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when != "call" and not (rep.failed or rep.skipped):
        return
    number, title = marker.args[:2]
    entry = _criteria.setdefault(number, {"title": title, "outcomes": [], "info": [],
                                          "informational": marker.kwargs.get("informational", False)})
    entry["outcomes"].append(rep.outcome)
    entry["info"] += [f"{k}={v}" for k, v in rep.user_properties]


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        outcomes = entry["outcomes"]
        if entry["informational"]:
            status = "INFO"
        elif all(o == "passed" for o in outcomes):
            status = "PASS"
        else:
            status = "FAIL"
        detail = f"{outcomes.count('passed')}/{len(outcomes)} checks"
        tr.write_line(f"criterion {number:>2} {status}: {entry['title']} ({detail})")
        for note in entry["info"]:
            tr.write_line(f"              {note}")

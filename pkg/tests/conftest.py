import pytest

_RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion check")
    config.stash[_RESULTS] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    number, title = mark.args
    entry = item.config.stash[_RESULTS].setdefault(number, {"title": title, "checks": []})
    details = [str(v) for k, v in item.user_properties if k == "detail"]
    entry["checks"].append((item.name, rep.passed, details))


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash[_RESULTS]
    if not results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(results):
        entry = results[number]
        ok = all(passed for _, passed, _ in entry["checks"])
        tr.write_line(f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {entry['title']}")
        for name, passed, details in entry["checks"]:
            note = "; ".join(details)
            tr.write_line(f"    {'ok  ' if passed else 'FAIL'} {name}" + (f"  [{note}]" if note else ""))

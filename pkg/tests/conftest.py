import pytest

CRITERIA = {
    1: "dovetail stream equals range oracle",
    2: "round schedule matches golden trace",
    3: "padded total machine enumerates the stream range",
    4: "mode round trips on the 12-set battery",
    5: "condition-failure counterexample classes",
    6: "equivalence engines agree with exhaustive comparison",
    7: "power strictness of PDA over DFA",
    8: "inductive limit decider on the halting battery",
    9: "resource-bounded round trips",
    10: "byte-identical repeated command output",
}

_outcomes: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion checked by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _outcomes.setdefault(marker.args[0], []).append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        if n not in _outcomes:
            continue
        ok = all(_outcomes[n])
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {CRITERIA[n]}")

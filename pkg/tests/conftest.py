from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


def small_rationals(max_num=9, max_den=6):
    return st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))


def nonint_rationals(max_num=19, max_den=6):
    """Rationals that are not integers, which keeps Pochhammer denominators nonzero."""
    return small_rationals(max_num, max_den).filter(lambda q: q.denominator != 1)


_acceptance = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    name = report.nodeid.split("::")[-1]
    if "test_acceptance.py" in report.nodeid and name.startswith("test_criterion_"):
        key = int(name.split("_")[2])
        prev = _acceptance.get(key, True)
        _acceptance[key] = prev and report.outcome == "passed"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_acceptance):
        terminalreporter.write_line(f"criterion {key:2d}: {'PASS' if _acceptance[key] else 'FAIL'}")


@pytest.fixture
def run_cli(capsys):
    from eulerops.cli import main

    def run(*argv):
        code = main(list(argv))
        out = capsys.readouterr()
        return code, out.out, out.err

    return run

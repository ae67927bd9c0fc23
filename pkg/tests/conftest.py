import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    detail = dict(report.user_properties).get("detail", "")
    if hasattr(report, "wasxfail"):
        status = "FAIL (known, see decisions ledger)"
    else:
        status = "PASS" if report.passed else "FAIL"
    _ACCEPTANCE[crit] = (status, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_ACCEPTANCE):
        status, detail = _ACCEPTANCE[crit]
        terminalreporter.write_line(f"criterion {crit:2d}: {status}  {detail}")


@pytest.fixture
def criterion(record_property):
    def mark(n: int):
        record_property("criterion", n)

        def detail(text: str):
            record_property("detail", text)
        return detail
    return mark

import pytest

_CRITERIA: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    key = props["criterion"]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _CRITERIA[key] = ("PASS" if report.passed else "FAIL", props.get("title", ""))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA, key=int):
        status, title = _CRITERIA[key]
        terminalreporter.write_line(f"criterion {key:>2}: {status}  {title}")


@pytest.fixture
def criterion(request):
    def mark(number: int, title: str) -> None:
        request.node.user_properties.append(("criterion", str(number)))
        request.node.user_properties.append(("title", title))

    return mark

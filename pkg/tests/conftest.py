import pytest


def pytest_addoption(parser):
    parser.addoption("--extended", action="store_true", help="also check table periods 17..24 (slow)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--extended"):
        return
    skip = pytest.mark.skip(reason="needs --extended")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


CRITERIA: dict[str, str] = {}


@pytest.fixture
def criterion(request):
    """Record one pass/fail line for an acceptance criterion."""
    num, label = request.node.get_closest_marker("criterion").args

    def report(ok: bool, detail: str = "") -> bool:
        line = f"criterion {num} {'PASS' if ok else 'FAIL'}: {label}" + (f" ({detail})" if detail else "")
        CRITERIA[str(num)] = line
        print(line)
        return ok

    return report


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, label): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for num in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[num])

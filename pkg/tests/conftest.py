import pytest

VERDICTS = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record one acceptance line, then assert on it."""
    lines = request.config.stash.setdefault(VERDICTS, [])

    def record(number, title, ok, detail):
        line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title} [{detail}]"
        lines.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)

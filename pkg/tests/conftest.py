import pytest

from aphc.synth import default_profile, generate


@pytest.fixture(scope="session")
def default_synth():
    """Default profile, 32,000 packets, seed 1: ``(trace, text_bytes)``."""
    return generate(default_profile(), 32000)


@pytest.fixture(scope="session")
def default_trace(default_synth):
    return default_synth[0]


@pytest.fixture(scope="session")
def record_criterion(pytestconfig):
    lines = pytestconfig._acceptance_lines = []

    def record(number, passed, detail):
        lines.append(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "_acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

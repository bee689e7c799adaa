from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

PAPER_X = (0, 2, 3, 2, 1, 1, 1, 1, 2, 3, 2, 0)
PAPER_Y = (3, 1, 0, 1, 2, 2, 2, 2, 1, 0, 1, 3)

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

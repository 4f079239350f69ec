import helpers


def criterion_number(line):
    return int(line.split(":")[0].split()[-1])


def pytest_terminal_summary(terminalreporter):
    if helpers.ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(helpers.ACCEPTANCE_LINES, key=criterion_number):
            terminalreporter.write_line(line)

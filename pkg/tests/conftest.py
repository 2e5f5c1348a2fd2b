from __future__ import annotations

import pytest

from quadcodes.code import build_defining_set, make_params

EXAMPLE_FORMS = {
    1: "trace_square",
    2: "scaled_trace_square",
    3: "trace_square_quarter",
}


@pytest.fixture(scope="session")
def example_sets():
    """Defining sets of the three (p, s1, s2, alpha) = (3, 4, 1, 1) examples, keyed 1..3."""
    return {k: build_defining_set(make_params(3, 4, 1, form)) for k, form in EXAMPLE_FORMS.items()}


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)

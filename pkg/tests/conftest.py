import pytest

from dowlingkit import fixtures
from dowlingkit.dowling import dowling_context, enumerate_poset

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def make_poset(group_name: str, action_name: str, n: int):
    G = fixtures.group_by_name(group_name)
    ctx = dowling_context(n, fixtures.action_by_name(action_name, G))
    return ctx, enumerate_poset(ctx)


@pytest.fixture(scope="session")
def poset_factory():
    cache = {}

    def get(group_name, action_name, n):
        key = (group_name, action_name, n)
        if key not in cache:
            cache[key] = make_poset(group_name, action_name, n)
        return cache[key]

    return get

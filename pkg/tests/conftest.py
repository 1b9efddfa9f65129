from functools import lru_cache

import pytest

from gibbswilbraham import cardinal


@lru_cache(maxsize=None)
def built_cardinal(generator_id: str, P: int = 4096, R: int = 512):
    from gibbswilbraham import registry

    return cardinal.cardinal_from_generator(registry.make_generator(generator_id), P, R)


@pytest.fixture(scope="session")
def cardinal_of():
    return built_cardinal


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def record_criterion(request):
    """Record one PASS/FAIL line for the acceptance summary, then assert."""

    def record(number: int, title: str, ok: bool, detail: str):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {title} | {detail}"
        request.config.stash.setdefault(_ACCEPTANCE, []).append((number, line))
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)

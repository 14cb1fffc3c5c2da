import pytest

from isodw import build_context, quartic_seed, razavy_seed


@pytest.fixture(scope="session")
def quartic_ctx():
    return build_context(quartic_seed(0.0))


@pytest.fixture(scope="session")
def razavy_ctx():
    return build_context(razavy_seed(0.0))


@pytest.fixture(scope="session")
def ctx_cache():
    """Contexts keyed by (kind, c); building one takes a few milliseconds."""
    cache = {}

    def get(kind, c):
        if (kind, c) not in cache:
            seed = quartic_seed(c) if kind == "quartic" else razavy_seed(c)
            cache[kind, c] = build_context(seed)
        return cache[kind, c]

    return get


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, line
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(RESULTS):
        ok, name, detail = RESULTS[num]
        terminalreporter.write_line(line(num, name, ok, detail))

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from submod_lab import module_make, ring_make
from submod_lab.harness import default_catalog

settings.register_profile("repo", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

SMALL_RINGS = [(2,), (3,), (4,), (5,), (6,), (8,), (9,), (10,), (12,), (2, 2), (2, 3), (2, 4), (3, 3), (6, 6), (4, 2)]


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


@st.composite
def small_modules(draw):
    moduli = draw(st.sampled_from(SMALL_RINGS))
    R = ring_make(moduli)
    count = draw(st.integers(1, 2))
    orders, coords = [], []
    for _ in range(count):
        c = draw(st.integers(1, len(moduli)))
        d = draw(st.sampled_from([d for d in _divisors(moduli[c - 1]) if d > 1]))
        orders.append(d)
        coords.append(c)
    M = module_make(R, orders, coords)
    if M.size > 36:
        M = module_make(R, orders[:1], coords[:1])
    return M


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)

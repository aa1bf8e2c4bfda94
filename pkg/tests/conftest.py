import random
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from oddpoisson.liealg import catalog
from oddpoisson.scalars import Scalar

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

small_fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
scalars = st.builds(Scalar, small_fracs, small_fracs, small_fracs, small_fracs)


def random_scalar(rng: random.Random, nonzero: bool = False) -> Scalar:
    while True:
        x = Scalar(*(Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(4)))
        if x or not nonzero:
            return x


@pytest.fixture(scope="session")
def algebras():
    return {name: catalog(name) for name in ("so3", "sl2", "sl3", "so5", "heisenberg", "e2")}


ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, title = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {title}")

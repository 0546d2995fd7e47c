"""Shared test setup."""

import pytest

from stackmorph.verify import warm_up


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # Compile the sliding-window engines once so JIT time never lands
    # inside a timed acceptance check.
    warm_up()

import os

import pytest


def long_tests_enabled() -> bool:
    return os.environ.get("HECKECELLS_LONG_TESTS") == "1"


requires_long = pytest.mark.skipif(
    not long_tests_enabled(),
    reason="set HECKECELLS_LONG_TESTS=1 to include the B3 slice",
)

import pytest
from mpmath import mp

from fekete.numkernel import PrecisionContext


@pytest.fixture(autouse=True)
def working_precision():
    """Every test runs at 50 digits plus 10 guard digits unless it says otherwise."""
    with PrecisionContext(50, 10) as ctx:
        yield ctx

import numpy as np
import pytest


@pytest.fixture(scope="session", autouse=True)
def assert_round_to_nearest_even():
    """The pair arithmetic is only correct under the default rounding mode."""
    one32 = np.float32(1.0)
    assert one32 + np.float32(2.0**-24) == one32
    assert one32 + np.float32(3 * 2.0**-24) == np.float32(1.0 + 2.0**-22)
    assert 1.0 + 2.0**-53 == 1.0
    assert 1.0 + 3 * 2.0**-53 == 1.0 + 2.0**-51

import pytest

from armforge.model import default_arm_model


@pytest.fixture(scope="session")
def model():
    return default_arm_model()

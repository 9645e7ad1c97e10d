import pytest

from euler2c.core import critical_constants


@pytest.fixture
def half():
    return critical_constants(0.5)


@pytest.fixture
def quarter():
    return critical_constants(0.25)


@pytest.fixture
def tenth():
    return critical_constants(0.1)

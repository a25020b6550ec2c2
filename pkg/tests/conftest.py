import pytest
from hypothesis import settings

from idskit.fixtures import fixa_dataset, synthetic_dataset

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")


@pytest.fixture
def fixa():
    return fixa_dataset()


@pytest.fixture(scope="session")
def synth300():
    return synthetic_dataset(300, 4, 2, seed=7)

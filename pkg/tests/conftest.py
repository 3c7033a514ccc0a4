import os

import pytest
from hypothesis import settings

settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile("ci")

# keep pool size fixed so timings are comparable; results never depend on it
os.environ.setdefault("HYPERCOVER_THREADS", "2")


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20240611)

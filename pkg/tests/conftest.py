import logging
from typing import Generator

import numpy as np
import pytest

from migration_balancer.model import Scenario
from migration_balancer.scenarios import REFERENCE_LAYOUTS, builtin_scenario


@pytest.fixture
def enable_debug_log_level() -> Generator[None, None, None]:
    logger = logging.getLogger('migration_balancer')
    handler = logging.StreamHandler()
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG)

    yield

    logger.removeHandler(handler)
    logger.setLevel(logging.NOTSET)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def reference_scenario(request: pytest.FixtureRequest) -> Scenario:
    return builtin_scenario(getattr(request, 'param', 1))


REFERENCE_TESTS_ALL = sorted(REFERENCE_LAYOUTS)

REFERENCE_TESTS_SMALL = [1, 2]


reference_tests_all = pytest.mark.parametrize(
    "reference_scenario", REFERENCE_TESTS_ALL, indirect=["reference_scenario"]
)


reference_tests_small = pytest.mark.parametrize(
    "reference_scenario", REFERENCE_TESTS_SMALL, indirect=["reference_scenario"]
)

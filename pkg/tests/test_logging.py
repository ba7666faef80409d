import logging

import pytest
from rich.logging import RichHandler

from cellsurvey.core.logging import LOGGER_NAME, get_logger


@pytest.mark.parametrize("verbosity,level", [(0, logging.WARNING), (1, logging.INFO), (2, logging.DEBUG), (5, logging.DEBUG)])
def test_verbosity_sets_level(verbosity, level):
    assert get_logger(verbosity).level == level


def test_repeated_set_up_keeps_one_handler():
    get_logger(0)
    log = get_logger(2)
    assert log.name == LOGGER_NAME
    assert len(log.handlers) == 1
    assert isinstance(log.handlers[0], RichHandler)
    assert log.propagate is False


def test_module_loggers_reach_the_package_handler():
    get_logger(1)
    child = logging.getLogger("cellsurvey.sim.sweep")
    assert child.getEffectiveLevel() == logging.INFO
    assert not child.handlers

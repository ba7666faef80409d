"""
Console logging for the command line.

Modules log through ``logging.getLogger(__name__)``; everything under the
``cellsurvey`` package logger ends up on stderr through Rich, so data on
stdout stays pipeable.
"""
from rich.console import Console
from rich.logging import RichHandler
import logging

LOGGER_NAME = "cellsurvey"

# -v info, -vv debug
LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


def get_logger(verbosity: int = 0) -> logging.Logger:
    """Set up the package logger for one CLI run and return it. Calling again replaces the handler."""
    level = LEVELS[max(0, min(verbosity, len(LEVELS) - 1))]
    handler = RichHandler(console=Console(stderr=True), show_time=False, show_level=True,
                          rich_tracebacks=verbosity >= 2)
    handler.setFormatter(logging.Formatter("%(message)s"))

    log = logging.getLogger(LOGGER_NAME)
    for old in list(log.handlers):
        log.removeHandler(old)
    log.addHandler(handler)
    log.setLevel(level)
    log.propagate = False
    return log

"""Logging helpers for ruelle_zeta."""
import logging
from pathlib import Path
from typing import Iterable, Optional

from rich.console import Console
from rich.logging import RichHandler

LOGGER_NAME = "ruelle_zeta"

# per-point DEBUG output: one line per direct-sum evaluation, scan cell or contour
CHATTY_MODULES = (
    "ruelle_zeta.zeta.direct",
    "ruelle_zeta.resonances.scan",
    "ruelle_zeta.resonances.residues",
)


class ChattyModuleFilter(logging.Filter):
    """Drop DEBUG records of the per-point modules; everything else passes."""

    def __init__(self, modules: Iterable[str] = CHATTY_MODULES):
        super().__init__()
        self.modules = tuple(modules)

    def filter(self, record: logging.LogRecord) -> bool:
        if record.levelno > logging.DEBUG:
            return True
        return not any(record.name == m or record.name.startswith(m + ".") for m in self.modules)


def setup_logger(*, verbose: bool = False, log_file: Optional[Path] = None) -> logging.Logger:
    """Console logging through rich plus an optional full-detail log file.

    ``--verbose`` shows DEBUG on the console except for CHATTY_MODULES; the
    log file always receives every record.
    """
    from . import __version__

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(logging.DEBUG if verbose or log_file else logging.INFO)
    logger.handlers.clear()

    console = Console(stderr=True)
    handler = RichHandler(console=console, show_time=True, show_level=True, show_path=False)
    handler.setLevel(logging.DEBUG if verbose else logging.INFO)
    handler.setFormatter(logging.Formatter("%(message)s"))
    handler.addFilter(ChattyModuleFilter())
    logger.addHandler(handler)

    if log_file:
        log_file = Path(log_file)
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(logging.DEBUG)
        file_formatter = logging.Formatter(
            fmt="%(asctime)s | %(levelname)s | %(processName)s | %(name)s | %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S"
        )
        file_handler.setFormatter(file_formatter)
        logger.addHandler(file_handler)

    logger.debug("ruelle_zeta %s logging (verbose=%s, log_file=%s)", __version__, verbose, log_file)
    return logger

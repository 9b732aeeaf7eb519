"""Logging configuration for schmidtbec."""

import logging
import logging.handlers
from datetime import datetime
from pathlib import Path
from typing import Optional


class LoggingConfig:
    """Centralized logging configuration for command-line runs.

    Library modules only call ``logging.getLogger(__name__)``; handlers are
    attached here, once, by the entry point.
    """

    LOG_DIR = Path("logs")

    LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    DETAILED_FORMAT = ("%(asctime)s - %(name)s - %(levelname)s - "
                       "[%(filename)s:%(lineno)d] - %(message)s")

    MAX_BYTES = 10 * 1024 * 1024  # 10MB
    BACKUP_COUNT = 5

    _initialized = False

    @classmethod
    def setup_logging(
        cls,
        log_level: str = "INFO",
        log_to_console: bool = True,
        log_to_file: bool = False,
        log_dir: Optional[Path] = None,
        detailed_format: bool = False
    ) -> None:
        """Set up the root logger.

        Args:
            log_level: The logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
            log_to_console: Whether to log to stderr
            log_to_file: Whether to log to a rotating file in ``log_dir``
            log_dir: Custom log directory (uses default if None)
            detailed_format: Whether to include file/line info
        """
        if cls._initialized:
            return

        level = getattr(logging, log_level.upper(), None)
        if not isinstance(level, int):
            raise ValueError(f"Unknown log level: {log_level}")

        root_logger = logging.getLogger()
        root_logger.setLevel(level)
        root_logger.handlers.clear()

        formatter = logging.Formatter(
            cls.DETAILED_FORMAT if detailed_format else cls.LOG_FORMAT
        )

        if log_to_console:
            console_handler = logging.StreamHandler()
            console_handler.setFormatter(formatter)
            console_handler.setLevel(level)
            root_logger.addHandler(console_handler)

        if log_to_file:
            if log_dir is None:
                log_dir = cls.LOG_DIR
            log_dir = Path(log_dir)
            log_dir.mkdir(parents=True, exist_ok=True)

            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            log_file = log_dir / f"schmidtbec_{timestamp}.log"

            file_handler = logging.handlers.RotatingFileHandler(
                log_file,
                maxBytes=cls.MAX_BYTES,
                backupCount=cls.BACKUP_COUNT
            )
            file_handler.setFormatter(formatter)
            file_handler.setLevel(logging.DEBUG)  # files always get DEBUG
            root_logger.addHandler(file_handler)

            latest_log = log_dir / "latest.log"
            try:
                if latest_log.exists():
                    latest_log.unlink()
                latest_handler = logging.FileHandler(latest_log, mode='w')
                latest_handler.setFormatter(formatter)
                latest_handler.setLevel(logging.DEBUG)
                root_logger.addHandler(latest_handler)
            except OSError as e:
                root_logger.warning(f"Could not create latest.log: {e}")

        cls._initialized = True

        logger = logging.getLogger(__name__)
        logger.debug("schmidtbec logging initialized")
        logger.debug(f"Log level: {log_level}")
        logger.debug(f"File logging: {log_to_file} ({log_dir})")

    @classmethod
    def reset(cls) -> None:
        """Forget the current setup so that ``setup_logging`` runs again."""
        root_logger = logging.getLogger()
        for handler in list(root_logger.handlers):
            root_logger.removeHandler(handler)
            handler.close()
        root_logger.setLevel(logging.WARNING)
        cls._initialized = False

    @classmethod
    def get_logger(cls, name: str) -> logging.Logger:
        """Get a logger instance for a specific module.

        Args:
            name: The name of the logger (usually __name__)

        Returns:
            A logger; console logging is set up with defaults if needed
        """
        if not cls._initialized:
            cls.setup_logging()
        return logging.getLogger(name)


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance for a specific module.

    Args:
        name: The name of the logger (usually __name__)

    Returns:
        A configured logger instance
    """
    return LoggingConfig.get_logger(name)

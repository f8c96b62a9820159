"""
Structured logging for the toolkit.

Every record may carry a `component` tag (set by create_logger), the running
CLI command (bound by LogContext) and free-form `extra_data`. Handlers write
to stderr only: stdout is reserved for reports and colour output.
"""

import functools
import json
import logging
import sys
import time
from contextvars import ContextVar
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional

command_var: ContextVar[str] = ContextVar('command', default='')

# Third-party loggers that are chatty at DEBUG
QUIET_LOGGERS = ('PIL',)


def _record_fields(record: logging.LogRecord) -> Dict[str, Any]:
    fields: Dict[str, Any] = {}
    command = command_var.get()
    if command:
        fields['command'] = command
    component = getattr(record, 'component', None)
    if component:
        fields['component'] = component
    return fields


class StructuredFormatter(logging.Formatter):
    """One JSON object per record"""

    def format(self, record: logging.LogRecord) -> str:
        log_data: Dict[str, Any] = {
            'timestamp': datetime.fromtimestamp(record.created, timezone.utc).isoformat(),
            'level': record.levelname,
            'logger': record.name,
            **_record_fields(record),
            'message': record.getMessage(),
        }
        extra_data = getattr(record, 'extra_data', None)
        if extra_data:
            log_data['data'] = extra_data
        if record.exc_info:
            log_data['exception'] = self.formatException(record.exc_info)
        return json.dumps(log_data, default=str)


class ColoredConsoleFormatter(logging.Formatter):
    """
    Single-line console output:

        [12:00:01] INFO     adapt/remap Remap finished | entries=1 unresolved=0
    """

    COLORS = {
        'DEBUG': '\033[36m',
        'INFO': '\033[32m',
        'WARNING': '\033[33m',
        'ERROR': '\033[31m',
        'CRITICAL': '\033[35m',
    }
    RESET = '\033[0m'

    def __init__(self, use_color: bool = True):
        super().__init__()
        self.use_color = use_color

    def format(self, record: logging.LogRecord) -> str:
        levelname = f"{record.levelname:8}"
        if self.use_color:
            levelname = f"{self.COLORS.get(record.levelname, '')}{levelname}{self.RESET}"

        time_str = datetime.fromtimestamp(record.created).strftime('%H:%M:%S')
        parts = [f"[{time_str}]", levelname]
        origin = "/".join(_record_fields(record).values())
        if origin:
            parts.append(origin)
        parts.append(record.getMessage())
        msg = " ".join(parts)

        extra_data = getattr(record, 'extra_data', None)
        if extra_data:
            msg += " | " + " ".join(f"{k}={v}" for k, v in extra_data.items())
        if record.exc_info:
            msg += "\n" + self.formatException(record.exc_info)
        return msg


def setup_logging(
    log_level: str = "WARNING",
    log_file: Optional[Path] = None,
    json_logs: bool = False
) -> None:
    """
    Configure the root logger.

    Args:
        log_level: DEBUG, INFO, WARNING, ERROR or CRITICAL
        log_file: also append JSON records to this file
        json_logs: JSON on stderr instead of the console format
    """
    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)
    root_logger.handlers.clear()

    console_handler = logging.StreamHandler(sys.stderr)
    if json_logs:
        console_handler.setFormatter(StructuredFormatter())
    else:
        is_tty = hasattr(sys.stderr, 'isatty') and sys.stderr.isatty()
        console_handler.setFormatter(ColoredConsoleFormatter(use_color=is_tty))
    root_logger.addHandler(console_handler)

    if log_file:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setFormatter(StructuredFormatter())
        root_logger.addHandler(file_handler)

    for name in QUIET_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)


class LoggerAdapter(logging.LoggerAdapter):
    """Merges default fields into `extra` and accepts an `extra_data=` keyword"""

    def process(self, msg, kwargs):
        extra = kwargs.setdefault('extra', {})
        for key, value in self.extra.items():
            extra.setdefault(key, value)
        if 'extra_data' in kwargs:
            extra['extra_data'] = kwargs.pop('extra_data')
        return msg, kwargs


def create_logger(name: str, **default_extra) -> LoggerAdapter:
    """
    Logger whose records carry default fields, typically a component tag.

    Example:
        logger = create_logger(__name__, component='simulate')
        logger.info("Simulated image", extra_data={'pixels': 1_000_000})
    """
    return LoggerAdapter(get_logger(name), default_extra)


class LogContext:
    """Tags every record emitted inside the block with the running command"""

    def __init__(self, command: str):
        self.command = command
        self.token = None

    def __enter__(self):
        self.token = command_var.set(self.command)
        return self

    def __exit__(self, *args):
        if self.token is not None:
            command_var.reset(self.token)
            self.token = None


def log_performance(logger):
    """Logs the wall time of each call at DEBUG"""
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            try:
                result = func(*args, **kwargs)
            except Exception:
                # callers decide whether the failure is worth an ERROR record
                logger.debug(
                    f"{func.__name__} failed",
                    extra_data={'duration_sec': round(time.perf_counter() - start, 3)},
                    exc_info=True
                )
                raise
            logger.debug(
                f"{func.__name__} completed",
                extra_data={'duration_sec': round(time.perf_counter() - start, 3)}
            )
            return result
        return wrapper
    return decorator

"""
Logging configuration for Shield runs.

Log lines go to stderr so that stdout carries only command output such as
rendered report tables. Structured fields are attached to a record through
``extra={"json_fields": {...}}`` and rendered below the message.
"""

import json
import logging
import sys

# Flag to track if logging is already configured
_logging_configured = False


class FieldsFormatter(logging.Formatter):
    """Formatter that renders a record's json_fields as sorted JSON."""

    def format(self, record: logging.LogRecord) -> str:
        message = super().format(record)
        fields = getattr(record, "json_fields", None)
        if not fields:
            return message
        rendered = json.dumps(fields, indent=2, sort_keys=True, default=_plain)
        return f"{message}\n{rendered}"


def _plain(value):
    # numpy scalars and arrays from metrics, enums and paths from configs
    if hasattr(value, "tolist"):
        return value.tolist()
    return str(value)


def setup_logging(service_name: str = "shield", level: int = logging.INFO):
    """
    Configure the root logger for a Shield process.

    Safe to call more than once; only the first call installs a handler.

    Args:
        service_name: Name written in the start-up line
        level: Root log level
    """
    global _logging_configured

    if _logging_configured:
        return

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(
        FieldsFormatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")
    )

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    root_logger.addHandler(handler)

    _logging_configured = True
    logging.getLogger(__name__).debug("Logging configured for %s", service_name)

from __future__ import annotations

import logging
from typing import Any

__all__ = ['switch_logger', 'switch_trace', 'is_enabled_for_trace', 'log']


class CustomLogger(logging.Logger):
    def __init__(self, name: str, level: int = logging.NOTSET) -> None:
        super().__init__(name, level)

    def trace(self, msg: Any, *args: Any, **kwargs: Any) -> None:
        if is_enabled_for_trace():
            self._log(logging.DEBUG, msg, args, **kwargs)

    def dump(self, title: str, matrix: Any) -> None:
        """Dumps a matrix row by row, only while tracing is switched on."""
        if not is_enabled_for_trace():
            return
        self._log(logging.DEBUG, '--- %s ---', (title,))
        rows = getattr(matrix, 'tolist', lambda: matrix)()
        for row in rows:
            self._log(logging.DEBUG, '%s', (' '.join(str(entry) for entry in row),))
        self._log(logging.DEBUG, '-----------------------', ())


# Registering the CustomLogger as the default logger class
logging.setLoggerClass(CustomLogger)

log: CustomLogger = logging.getLogger('torus_lifts')  # type: ignore[assignment]
log.addHandler(logging.NullHandler())
log.propagate = False  # Disabling the transmission of logs higher up the chain

_trace_enabled = False
_console_handlers: list[logging.Handler] = []


def switch_logger(
    state: bool,
    handler: logging.Handler | None = None,
    formatter: logging.Formatter | None = None,
    level: str = 'DEBUG',
) -> None:
    """Attach (or detach) a console handler to the package logger."""
    if state:
        console_handler = handler or logging.StreamHandler()
        console_formatter = formatter or logging.Formatter(
            '%(filename)s:%(lineno)d | def %(funcName)s | %(message)s'
        )

        console_handler.setFormatter(console_formatter)
        log.addHandler(console_handler)
        log.setLevel(getattr(logging, level))
        _console_handlers.append(console_handler)
    else:
        while _console_handlers:
            log.removeHandler(_console_handlers.pop())
        log.setLevel(logging.NOTSET)


def switch_trace(traceable: bool) -> None:
    """
    Turn on/off the matrix dumps of the normal-form kernels.

    Parameters
    ----------
    traceable: bool
        If set to True, `log.trace` and `log.dump` emit records.
    """
    global _trace_enabled
    _trace_enabled = traceable


def is_enabled_for_trace() -> bool:
    return _trace_enabled

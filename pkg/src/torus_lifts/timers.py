from __future__ import annotations

import time
from typing import TYPE_CHECKING

from typing_extensions import Self

if TYPE_CHECKING:
    from collections.abc import Callable
    from types import TracebackType


class ContextTimer:
    """Measures every `with` block it guards; failed blocks are measured too."""

    def __init__(self, measure_func: Callable[..., float] = time.perf_counter) -> None:
        self.measure_func = measure_func
        self.execution_time = 0.0
        self.all_execution_times: list[float] = []

    @property
    def total_execution_time(self) -> float:
        return sum(self.all_execution_times)

    def __enter__(self) -> Self:
        self._start = self.measure_func()
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc_value: BaseException | None,
        traceback: TracebackType | None,
    ) -> None:
        self._end = self.measure_func()
        self.execution_time = self._end - self._start
        self.all_execution_times.append(self.execution_time)

from __future__ import annotations

import random
from functools import wraps
from typing import TYPE_CHECKING, Any

from . import settings
from ._logging import log
from .dtos import CheckResult
from .timers import ContextTimer

if TYPE_CHECKING:
    from collections.abc import Callable

    from .types import DecoratedCallable

__all__ = ('REGISTRY', 'AcceptanceCheck', 'acceptance_check')

# name -> check, in registration order
REGISTRY: dict[str, AcceptanceCheck] = {}


class AcceptanceCheck:
    """
    #### Registers a function as a named acceptance check.

    The decorated function receives a seeded `random.Random` and returns the
    number of cases it verified; any AssertionError marks the check as failed.

    ---

    #### Usage examples::

        @AcceptanceCheck('structure-sheaf')
        def _(rng: random.Random) -> int:
            ...
            return cases

        result = REGISTRY['structure-sheaf'].run()

        >>> CheckResult(name='structure-sheaf', passed=True, cases=9, elapsed=0.004)
    """

    def __init__(self, name: str, registry: dict[str, AcceptanceCheck] | None = None) -> None:
        self.name = name
        self.registry = REGISTRY if registry is None else registry
        self.func: Callable[[random.Random], int] | None = None
        self.timer = ContextTimer()

    def __call__(self, func: DecoratedCallable) -> DecoratedCallable:
        log.debug('')

        if self.name in self.registry:
            raise ValueError(f'Acceptance check {self.name!r} is already registered')

        @wraps(func)
        def wrapped(*args: Any, **kwargs: Any) -> Any:
            return func(*args, **kwargs)

        self.func = wrapped
        self.registry[self.name] = self
        return func

    def run(self, seed: int | None = None) -> CheckResult:
        log.debug('')

        if self.func is None:
            raise RuntimeError(f'Acceptance check {self.name!r} has no function attached')
        rng = random.Random(settings.RANDOM_SEED if seed is None else seed)

        cases, passed, detail = 0, True, ''
        try:
            with self.timer:
                cases = self.func(rng)
        except AssertionError as exc:
            passed, detail = False, str(exc) or 'assertion failed'
            log.debug('check %s failed: %s', self.name, detail)

        return CheckResult(
            name=self.name, passed=passed, cases=cases, elapsed=self.timer.execution_time, detail=detail
        )


def acceptance_check(name: str) -> Callable[[DecoratedCallable], DecoratedCallable]:
    """Shortcut for `AcceptanceCheck(name)` registering into the default registry."""
    return AcceptanceCheck(name)

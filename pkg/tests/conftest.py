from __future__ import annotations

import sys
from contextlib import contextmanager
from io import StringIO
from typing import TYPE_CHECKING

import pytest
from src.torus_lifts import settings as self_settings
from src.torus_lifts._logging import switch_logger, switch_trace
from src.torus_lifts.torus import make_torus, standard_torus
from sympy import ImmutableMatrix

if TYPE_CHECKING:
    from collections.abc import Generator

    from src.torus_lifts.torus import ComplexTorus

# J² = -1 without being the standard rotation
SKEW_J = ImmutableMatrix([[1, -2], [1, -1]])
MIXED_J = ImmutableMatrix.diag(SKEW_J, ImmutableMatrix([[0, -1], [1, 0]]))


def pytest_configure(config: pytest.Config) -> None:
    for i, handler_path in enumerate(self_settings.REPORT_HANDLERS):
        self_settings.REPORT_HANDLERS[i] = f'src.{handler_path}'
    self_settings.COLOR_HANDLER = f'src.{self_settings.COLOR_HANDLER}'


@contextmanager
def intercept_output_ctx() -> Generator[StringIO, None, None]:
    """Перехватывает вывод для последующей проверки в тесте"""
    capture_output = StringIO()
    sys.stdout = capture_output
    try:
        yield capture_output
    finally:
        sys.stdout = sys.__stdout__


@pytest.fixture
def intercept_output() -> Generator[StringIO, None, None]:
    """Перехватывает вывод для последующей проверки в тесте"""
    with intercept_output_ctx() as capture_output:
        yield capture_output


@pytest.fixture
def debug_true() -> Generator[None, None, None]:
    switch_logger(True)
    switch_trace(True)
    yield
    switch_logger(False)
    switch_trace(False)


@contextmanager
def brute_force_limit(limit: int) -> Generator[None, None, None]:
    previous = self_settings.BRUTE_FORCE_LIMIT
    self_settings.BRUTE_FORCE_LIMIT = limit
    try:
        yield
    finally:
        self_settings.BRUTE_FORCE_LIMIT = previous


def sample_tori() -> list[ComplexTorus]:
    return [standard_torus(1), make_torus(1, SKEW_J), standard_torus(2), make_torus(2, MIXED_J)]

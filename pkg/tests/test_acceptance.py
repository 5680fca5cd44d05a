from __future__ import annotations

import random

import pytest
from src.torus_lifts.acceptance import (
    _require,
    random_alternating,
    random_bundle,
    random_one_one,
    random_unimodular,
    run_checks,
)
from src.torus_lifts.decorators import REGISTRY
from src.torus_lifts.exactlinalg import is_alternating, is_unimodular
from src.torus_lifts.torus import standard_torus

NAMES = [
    'elliptic-count',
    'cohomology-formula',
    'structure-sheaf',
    'theorem-of-square',
    'semicharacter-law',
    'disjointness',
    'intersection-structure',
    'equivariance',
    'floer-ext',
    'doubled-geometry',
    'gcs-algebra',
    't-duality',
    'torus-t-duality',
    'nilfold',
    'metric-decompose',
    'normal-forms',
]


class TestRegistry:
    """"""

    def test_registered_in_order(self) -> None:
        data = list(REGISTRY)
        assert data == NAMES, repr(data)

    def test_subset(self) -> None:
        data = [(result.name, result.passed) for result in run_checks(['nilfold', 'structure-sheaf'])]
        assert data == [('nilfold', True), ('structure-sheaf', True)], repr(data)

    def test_unknown_name(self) -> None:
        with pytest.raises(KeyError):
            run_checks(['structure-sheaf', 'no-such-check'])


class TestGenerators:
    """"""

    def setup_method(self) -> None:
        self.rng = random.Random(7)

    def test_random_alternating(self) -> None:
        for size in range(1, 6):
            M = random_alternating(self.rng, size, 3)
            assert M.shape == (size, size) and is_alternating(M), repr(M)
            assert all(abs(v) <= 3 for v in M), repr(M)

    def test_random_one_one(self) -> None:
        X = standard_torus(2)
        E = random_one_one(self.rng, X, 2)
        assert is_alternating(E), repr(E)
        assert X.J.T * E * X.J == E, repr(E)

    def test_random_bundle(self) -> None:
        X = standard_torus(1)
        L = random_bundle(self.rng, X)
        assert L.torus == X, repr(L)
        assert all(0 <= c < 1 for c in L.c), repr(L.c)

    def test_random_unimodular(self) -> None:
        for size in range(1, 6):
            U = random_unimodular(self.rng, size)
            assert U.shape == (size, size) and is_unimodular(U), repr(U)


class TestRequire:
    """"""

    def test_passes_silently(self) -> None:
        _require(True, 'unused')

    def test_raises_with_message(self) -> None:
        with pytest.raises(AssertionError, match=r'pf\^2 != \|det\|'):
            _require(False, 'pf^2 != |det|')


@pytest.mark.parametrize('name', NAMES)
def test_check_passes(name: str) -> None:
    result = REGISTRY[name].run()
    assert result.passed, result.detail
    assert result.cases > 0, repr(result)

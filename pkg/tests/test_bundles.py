from __future__ import annotations

import random
from itertools import product

import pytest
from src.torus_lifts.acceptance import random_bundle, random_one_one, random_rationals, random_unimodular
from src.torus_lifts.bundles import (
    character_from_holonomy,
    degree_phi,
    euler_characteristic,
    inverse,
    is_positive_definite,
    kernel_group,
    make_bundle,
    make_xi,
    phi_map,
    pic0_point,
    restricts_trivially_to_kernel_component,
    semichar_eval,
    symmetric_flat_bundle,
    symmetric_semicharacters,
    tensor,
    torsion_points,
    translate,
    trivial_bundle,
    xi_eval,
)
from src.torus_lifts.dtos import FiniteAbelianGroup
from src.torus_lifts.exactlinalg import pfaffians
from src.torus_lifts.exceptions import (
    DimensionMismatch,
    InvalidParameter,
    NotAlternating,
    NotOneOne,
    TorusMismatch,
)
from src.torus_lifts.homspaces import cohomology_dims
from src.torus_lifts.torus import DualTorusPoint, TorusPoint, hermitian_form, make_point, standard_torus
from sympy import ImmutableMatrix, Rational

from tests.conftest import brute_force_limit, sample_tori

HALF = Rational(1, 2)
THIRD = Rational(1, 3)


class TestLineBundle:
    """"""

    def setup_method(self) -> None:
        self.X = standard_torus(1)
        self.L = make_bundle(self.X, [[0, 2], [-2, 0]], [THIRD, 0])
        self.O = trivial_bundle(self.X)

    def test_validation(self) -> None:
        with pytest.raises(NotAlternating):
            make_bundle(self.X, [[1, 0], [0, 0]], [0, 0])
        with pytest.raises(DimensionMismatch):
            make_bundle(self.X, [[0, 1], [-1, 0]], [0, 0, 0])
        with pytest.raises(DimensionMismatch):
            make_bundle(standard_torus(2), [[0, 1], [-1, 0]], [0, 0])
        with pytest.raises(NotOneOne):
            make_bundle(
                standard_torus(2),
                [[0, 0, 1, 0], [0, 0, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0]],
                [0, 0, 0, 0],
            )

    def test_flat_part_is_reduced_mod_one(self) -> None:
        data = make_bundle(self.X, [[0, 2], [-2, 0]], [Rational(4, 3), -1]).c
        assert data == (THIRD, 0), repr(data)

    def test_semichar_eval(self) -> None:
        data = tuple(semichar_eval(self.L.chi, lam) for lam in ([1, 0], [2, 0], [1, 1], [0, 0]))
        # a(1, 1) = 1/3 + E_12/2 = 1/3 + 1
        assert data == (THIRD, 2 * THIRD, THIRD, 0), repr(data)
        assert self.L.chi([1, 1]) == THIRD

        with pytest.raises(DimensionMismatch):
            semichar_eval(self.L.chi, [1, 0, 0])

    def test_group_laws(self) -> None:
        assert tensor(self.L, inverse(self.L)) == self.O
        assert tensor(self.L, self.O) == self.L

        other = make_bundle(self.X, [[0, -1], [1, 0]], [0, HALF])
        data = tensor(self.L, other)
        assert (data.E, data.c) == (ImmutableMatrix([[0, 1], [-1, 0]]), (THIRD, HALF)), repr(data)

        with pytest.raises(TorusMismatch):
            tensor(self.L, trivial_bundle(standard_torus(2)))

    def test_translate(self) -> None:
        assert translate(self.L, TorusPoint([HALF, 0])) == self.L

        data = translate(self.L, TorusPoint([Rational(1, 4), 0])).c
        assert data == (THIRD, HALF), repr(data)

        data = translate(self.O, TorusPoint([Rational(1, 4), THIRD]))
        assert data == self.O, repr(data)

    def test_phi_and_kernel(self) -> None:
        assert phi_map(self.L) == ImmutableMatrix([[0, -2], [2, 0]])
        assert kernel_group(self.L) == FiniteAbelianGroup((2, 2))
        assert degree_phi(self.L) == 4

        data = torsion_points(self.L)
        expected = [TorusPoint([a, b]) for a in (0, HALF) for b in (0, HALF)]
        assert data == expected, repr(data)

    def test_kernel_of_flat_bundle(self) -> None:
        data = kernel_group(self.O)
        assert (data.invariant_factors, data.free_rank) == ((), 2), repr(data)
        assert degree_phi(self.O) == 0

        with pytest.raises(InvalidParameter):
            torsion_points(self.O)

    def test_torsion_points_limit(self) -> None:
        with brute_force_limit(3), pytest.raises(InvalidParameter):
            torsion_points(self.L)

    def test_euler_characteristic(self) -> None:
        negative = make_bundle(self.X, [[0, -3], [3, 0]], [0, 0])
        data = tuple(euler_characteristic(L) for L in (self.L, negative, self.O))
        assert data == (2, -3, 0), repr(data)
        assert is_positive_definite(self.L) is True
        assert is_positive_definite(negative) is False


class TestFlatBundles:
    """"""

    def setup_method(self) -> None:
        self.X = standard_torus(1)
        self.E = ImmutableMatrix([[0, 2], [-2, 0]])

    def test_pic0_point(self) -> None:
        flat = make_bundle(self.X, [[0, 0], [0, 0]], [THIRD, HALF])
        assert pic0_point(flat) == DualTorusPoint([THIRD, HALF])

        with pytest.raises(InvalidParameter):
            pic0_point(make_bundle(self.X, self.E, [0, 0]))

    def test_restriction_to_kernel_component(self) -> None:
        X2 = standard_torus(2)
        degenerate = ImmutableMatrix.diag(
            ImmutableMatrix([[0, 1], [-1, 0]]), ImmutableMatrix.zeros(2, 2)
        )

        trivial_on_kernel = make_bundle(X2, degenerate, [HALF, 0, 0, 0])
        nontrivial_on_kernel = make_bundle(X2, degenerate, [0, 0, THIRD, 0])

        assert restricts_trivially_to_kernel_component(trivial_on_kernel) is True
        assert restricts_trivially_to_kernel_component(nontrivial_on_kernel) is False

    def test_symmetric_semicharacters(self) -> None:
        xis = symmetric_semicharacters(self.E)
        assert len(set(xis)) == 4, repr(xis)

        xi = make_xi(self.E, [1, 0])
        # ξ(1, 1) = ξ_1 + ξ_2 + E_12 = 1 + 0 + 2
        data = (xi_eval(xi, [1, 0]), xi_eval(xi, [0, 1]), xi_eval(xi, [1, 1]), xi([2, 0]))
        assert data == (1, 0, 1, 0), repr(data)

        with pytest.raises(InvalidParameter):
            make_xi(self.E, [2, 0])
        with pytest.raises(DimensionMismatch):
            make_xi(self.E, [1])

    def test_symmetric_flat_bundle(self) -> None:
        assert symmetric_flat_bundle(self.X, [[0, 0], [0, 0]]) == trivial_bundle(self.X)

        data = symmetric_flat_bundle(self.X, self.E, make_xi(self.E, [1, 0])).c
        assert data == (HALF, 0), repr(data)

        with pytest.raises(InvalidParameter):
            symmetric_flat_bundle(self.X, -self.E, make_xi(self.E, [1, 0]))

    def test_character_from_holonomy(self) -> None:
        data = character_from_holonomy(self.X, self.E, [THIRD, Rational(5, 4)])
        assert data == make_bundle(self.X, self.E, [THIRD, Rational(1, 4)]), repr(data)
        assert character_from_holonomy(self.X, self.E, [0, 0]) == symmetric_flat_bundle(self.X, self.E)

    def test_holonomy_along_other_loops(self) -> None:
        E = ImmutableMatrix([[0, 1], [-1, 0]])
        data = character_from_holonomy(self.X, E, [0, 0], loops=[[1, 1], [0, 1]])

        # a(1, 1) = c_1 + c_2 + E_12/2 has to vanish
        assert data == make_bundle(self.X, E, [HALF, 0]), repr(data)
        assert semichar_eval(data.chi, [1, 1]) == 0

    def test_holonomy_round_trip(self) -> None:
        rng = random.Random(5)
        for X in sample_tori():
            for _ in range(5):
                L = random_bundle(rng, X)
                loops = random_unimodular(rng, X.real_dim)
                values = [semichar_eval(L.chi, list(loops.row(k))) for k in range(X.real_dim)]
                data = character_from_holonomy(X, L.E, values, loops)
                assert data == L, repr((L, loops, data))

    def test_holonomy_validation(self) -> None:
        with pytest.raises(InvalidParameter):
            character_from_holonomy(self.X, self.E, [0, 0], loops=[[2, 0], [0, 1]])
        with pytest.raises(DimensionMismatch):
            character_from_holonomy(self.X, self.E, [0])
        with pytest.raises(DimensionMismatch):
            character_from_holonomy(self.X, self.E, [0, 0], loops=[[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        with pytest.raises(DimensionMismatch):
            character_from_holonomy(standard_torus(2), self.E, [0, 0, 0, 0])


class TestBundleProperties:
    """"""

    def setup_method(self) -> None:
        self.rng = random.Random(3)
        self.tori = sample_tori()

    def test_negated_form_swaps_signature(self) -> None:
        for X in self.tori:
            for _ in range(5):
                E = random_one_one(self.rng, X, 2)
                H, H_neg = hermitian_form(E, X), hermitian_form(-E, X)
                assert (H_neg.r, H_neg.s) == (H.s, H.r), repr((E, H, H_neg))
                assert (H.r + H.s == X.g) == (E.det() != 0), repr((E, H))

    def test_euler_characteristic(self) -> None:
        for X in self.tori:
            for _ in range(4):
                L = random_bundle(self.rng, X)
                pf, _ = pfaffians(L.E)
                data = sum((-1) ** q * h for q, h in enumerate(cohomology_dims(L).dims))
                assert data == euler_characteristic(L), repr((L, data))
                assert data == (-1) ** hermitian_form(L.E, X).s * pf, repr((L, data))

    def test_translation_fixes_exactly_the_kernel(self) -> None:
        for X in self.tori:
            L = random_bundle(self.rng, X)
            for d in (1, 2, 3) if X.g == 1 else (1, 2):
                for ks in product(range(d), repeat=X.real_dim):
                    x = make_point(X, [Rational(k, d) for k in ks])
                    in_kernel = all(v.is_Integer for v in phi_map(L) * x.vector)
                    assert (translate(L, x) == L) == in_kernel, repr((L, x))

    @pytest.mark.parametrize(
        ('index', 'E'),
        [
            (0, ImmutableMatrix([[0, 3], [-3, 0]])),
            (1, ImmutableMatrix([[0, -2], [2, 0]])),
            (3, ImmutableMatrix([[0, 2, 0, 0], [-2, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])),
        ],
    )
    def test_torsion_points_are_fixed_points(self, index: int, E: ImmutableMatrix) -> None:
        X = self.tori[index]
        L = make_bundle(X, E, random_rationals(self.rng, X.real_dim))
        d = max(kernel_group(L).invariant_factors)

        cube = product(range(d), repeat=X.real_dim)
        grid = [make_point(X, [Rational(k, d) for k in ks]) for ks in cube]
        fixed = {x for x in grid if translate(L, x) == L}
        assert set(torsion_points(L)) == fixed, repr(fixed)
        assert len(fixed) == degree_phi(L), len(fixed)

    def test_phi_map_is_the_translation_shift(self) -> None:
        for X in self.tori:
            for _ in range(5):
                L = random_bundle(self.rng, X)
                x = make_point(X, random_rationals(self.rng, X.real_dim))
                shift = phi_map(L) * x.vector
                data = translate(L, x)
                assert data == make_bundle(X, L.E, [c + s for c, s in zip(L.c, shift)]), repr(data)

    def test_phi_map_is_additive(self) -> None:
        for X in self.tori:
            for _ in range(5):
                L1, L2 = random_bundle(self.rng, X), random_bundle(self.rng, X)
                data = phi_map(tensor(L1, L2))
                assert data == phi_map(L1) + phi_map(L2), repr(data)

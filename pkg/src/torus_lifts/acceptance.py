"""
The selftest suite: every quantitative claim the package makes, checked
exactly on worked examples and on seeded random cases.
"""

from __future__ import annotations

from itertools import product
from math import comb
from typing import TYPE_CHECKING

from sympy import ImmutableMatrix, Rational, eye, zeros

from . import settings
from .bundles import (
    make_bundle,
    make_xi,
    pic0_point,
    semichar_eval,
    symmetric_semicharacters,
    tensor,
    translate,
    trivial_bundle,
    xi_eval,
)
from .decorators import REGISTRY, acceptance_check
from .doubled import (
    b_transform,
    generalized_metric,
    generalized_tangent,
    graph_subspace,
    is_almost_gcs,
    is_generalized_kahler,
    is_isotropic,
    is_maximal_isotropic,
    is_stable_under,
    j_sharp,
    kahler_lift,
    lift_bundle,
    lift_gcs_complex,
    lift_gcs_symplectic,
    lift_tangent,
    make_doubled,
    translate_lift,
)
from .exactlinalg import (
    X,
    is_unimodular,
    nilpotent_exp,
    pfaffians,
    smith_normal_form,
    symplectic_block,
    symplectic_normal_form,
)
from .homspaces import (
    brute_force_intersection,
    cohomology_dims,
    floer_dims_J,
    hom_B,
    intersect_lifts,
    verify_ext_intersection,
)
from .tfold import (
    gen_metric_decompose,
    is_even_self_dual,
    is_onn_integral,
    mass_squared,
    narain_lattice,
    nilfold_doubled,
    nilfold_metric,
    nilfold_polarizations,
    onn_generators,
    onn_metric,
    permute,
    polarization_well_defined,
    t_dual_params,
    torus_mass_squared,
    torus_moduli,
    torus_t_dual,
)
from .torus import TorusPoint, make_point, make_torus, standard_torus

if TYPE_CHECKING:
    import random
    from collections.abc import Sequence

    from .bundles import LineBundle, SymSemiChar
    from .dtos import CheckResult
    from .tfold import TorusModuli
    from .torus import ComplexTorus
    from .types import IntMat

__all__ = (
    'random_alternating',
    'random_bundle',
    'random_one_one',
    'random_rationals',
    'random_unimodular',
    'run_checks',
)

# J² = -1 with a non-rotation first block
_MIXED_J = ImmutableMatrix.diag(ImmutableMatrix([[1, -2], [1, -1]]), ImmutableMatrix([[0, -1], [1, 0]]))


def _require(condition: bool, message: str) -> None:
    """Raises AssertionError, also under `python -O`."""
    if not condition:
        raise AssertionError(message)


def random_alternating(rng: random.Random, size: int, bound: int) -> IntMat:
    M = zeros(size, size)
    for i in range(size):
        for j in range(i + 1, size):
            M[i, j] = rng.randint(-bound, bound)
            M[j, i] = -M[i, j]
    return ImmutableMatrix(M)


def random_one_one(rng: random.Random, X: ComplexTorus, bound: int) -> IntMat:
    """A + Jᵀ·A·J is alternating and of type (1,1) whenever J² = -1."""
    A = random_alternating(rng, X.real_dim, bound)
    return ImmutableMatrix(A + X.J.T * A * X.J)


def random_unimodular(rng: random.Random, size: int, steps: int = 6) -> IntMat:
    """A product of random elementary row additions and swaps, det = ±1."""
    M = eye(size)
    for _ in range(steps):
        i, j = rng.sample(range(size), 2) if size > 1 else (0, 0)
        if i == j:
            M[0, :] = -M[0, :]
        elif rng.random() < 0.25:
            M.row_swap(i, j)
        else:
            M[i, :] = M[i, :] + rng.choice((-2, -1, 1, 2)) * M[j, :]
    return ImmutableMatrix(M)


def random_rationals(rng: random.Random, count: int, max_denominator: int = 12) -> list[Rational]:
    values = []
    for _ in range(count):
        q = rng.randint(1, max_denominator)
        values.append(Rational(rng.randrange(q), q))
    return values


def random_bundle(
    rng: random.Random, X: ComplexTorus, bound: int = 2, flat_part: bool = True
) -> LineBundle:
    c = random_rationals(rng, X.real_dim) if flat_part else [0] * X.real_dim
    return make_bundle(X, random_one_one(rng, X, bound), c)


def _nondegenerate_one_one(rng: random.Random, X: ComplexTorus, bound: int) -> IntMat:
    while True:
        E = random_one_one(rng, X, bound)
        if E.det() != 0:
            return E


def _degree_two_elliptic() -> LineBundle:
    return make_bundle(standard_torus(1), [[0, 2], [-2, 0]], [0, 0])


@acceptance_check('elliptic-count')
def _(rng: random.Random) -> int:
    L = _degree_two_elliptic()
    O = trivial_bundle(L.torus)
    _require(cohomology_dims(L).dims[0] == 2, 'h0 of the degree-2 bundle is not 2')

    meet = intersect_lifts(lift_bundle(L), lift_bundle(O))
    expected = sorted(
        (TorusPoint(p) for p in product((0, Rational(1, 2)), repeat=2)), key=lambda p: p.coords
    )
    _require(meet.order == 4, f'#(L ∩ O) = {meet.order}')
    _require(meet.points() == expected, repr(meet.points()))
    brute = brute_force_intersection(lift_bundle(L), lift_bundle(O), 2)
    _require(brute == expected, repr(brute))
    _require(verify_ext_intersection(O, L).squared_relation is True, 'order is not (h0)^2')
    return 1


@acceptance_check('cohomology-formula')
def _(rng: random.Random) -> int:
    X1, X2 = standard_torus(1), standard_torus(2)
    cases = [
        (trivial_bundle(X2), (1, 2, 1)),
        (_degree_two_elliptic(), (2, 0)),
        (make_bundle(X1, [[0, -1], [1, 0]], [0, 0]), (0, 1)),
        (make_bundle(X1, [[0, 0], [0, 0]], [Rational(1, 3), 0]), (0, 0)),
    ]
    for L, dims in cases:
        data = cohomology_dims(L).dims
        _require(data == dims, f'{L.E.tolist()} {L.c}: {data} != {dims}')
    return len(cases)


@acceptance_check('structure-sheaf')
def _(rng: random.Random) -> int:
    cases = 0
    for g in (1, 2, 3):
        data = cohomology_dims(trivial_bundle(standard_torus(g))).dims
        _require(data == tuple(comb(g, q) for q in range(g + 1)), repr(data))
        cases += g + 1
    return cases


@acceptance_check('theorem-of-square')
def _(rng: random.Random) -> int:
    cases = 100
    for _ in range(cases):
        X = standard_torus(rng.randint(1, 3))
        L = random_bundle(rng, X)
        x = make_point(X, random_rationals(rng, X.real_dim))
        y = make_point(X, random_rationals(rng, X.real_dim))
        left = tensor(translate(L, x + y), L)
        right = tensor(translate(L, x), translate(L, y))
        _require(left == right, f'square fails for E={L.E.tolist()} x={x} y={y}')
    return cases


def _pairing(E: IntMat, lam: Sequence[int], mu: Sequence[int]) -> int:
    n = len(lam)
    return sum(lam[i] * int(E[i, j]) * mu[j] for i in range(n) for j in range(n))


def _require_chi_law(L: LineBundle, lam: Sequence[int], mu: Sequence[int]) -> None:
    total = [a + b for a, b in zip(lam, mu)]
    defect = semichar_eval(L.chi, total) - semichar_eval(L.chi, lam) - semichar_eval(L.chi, mu)
    pairing = Rational(_pairing(L.E, lam, mu), 2)
    _require((defect - pairing).is_Integer, f'law fails at {lam}, {mu}')


def _require_xi_law(xi: SymSemiChar, lam: Sequence[int], mu: Sequence[int]) -> None:
    total = [a + b for a, b in zip(lam, mu)]
    defect = xi_eval(xi, total) - xi_eval(xi, lam) - xi_eval(xi, mu)
    _require((defect - _pairing(xi.E, lam, mu)) % 2 == 0, f'xi constraint fails at {lam}, {mu}')


@acceptance_check('semicharacter-law')
def _(rng: random.Random) -> int:
    cases = 0
    X1 = standard_torus(1)
    box = list(product(range(-2, 3), repeat=2))
    for k in range(-2, 3):
        E = ImmutableMatrix([[0, k], [-k, 0]])
        L = make_bundle(X1, E, random_rationals(rng, 2))
        xi = make_xi(E, [rng.randint(0, 1) for _ in range(2)])
        for lam, mu in product(box, box):
            _require_chi_law(L, lam, mu)
            _require_xi_law(xi, lam, mu)
            cases += 1
        _require(len(set(symmetric_semicharacters(E))) == 4, 'expected 2^2 symmetric semi-characters')

    # ξ mod 2 only sees λ mod 2, so {0,1}^4 covers every pair
    cube = list(product((0, 1), repeat=4))
    for X2 in (standard_torus(2), make_torus(2, _MIXED_J)):
        for _ in range(2):
            E = random_one_one(rng, X2, 1)
            L = make_bundle(X2, E, random_rationals(rng, 4))
            for _ in range(100):
                lam = [rng.randint(-2, 2) for _ in range(4)]
                mu = [rng.randint(-2, 2) for _ in range(4)]
                _require_chi_law(L, lam, mu)
                cases += 1
            xis = symmetric_semicharacters(E)
            _require(len(set(xis)) == 16, 'expected 2^4 symmetric semi-characters')
            for xi in xis:
                for lam, mu in product(cube, cube):
                    _require_xi_law(xi, lam, mu)
                cases += len(cube) ** 2
    return cases


@acceptance_check('disjointness')
def _(rng: random.Random) -> int:
    cases = 50
    for _ in range(cases):
        X = standard_torus(rng.randint(1, 3))
        L1 = random_bundle(rng, X)
        c2 = random_rationals(rng, X.real_dim)
        while tuple(c2) == L1.c:
            c2 = random_rationals(rng, X.real_dim)
        L2 = make_bundle(X, L1.E, c2)
        _require(intersect_lifts(lift_bundle(L1), lift_bundle(L2)).empty, f'{L1} meets {L2}')
        same = intersect_lifts(lift_bundle(L1), lift_bundle(L1))
        _require(not same.empty and same.free_rank == X.real_dim, repr(same))
    return cases


@acceptance_check('intersection-structure')
def _(rng: random.Random) -> int:
    cases = 0
    for _ in range(50):
        X = standard_torus(rng.randint(1, 2))
        L1 = random_bundle(rng, X, flat_part=False)
        delta = _nondegenerate_one_one(rng, X, 3 if X.g == 1 else 1)
        L2 = make_bundle(X, L1.E + delta, [0] * X.real_dim)
        meet = intersect_lifts(lift_bundle(L1), lift_bundle(L2))
        pf, _ = pfaffians(delta)
        _require(meet.order == abs(delta.det()) == pf**2, f'order {meet.order} for {delta.tolist()}')
        if pf**X.real_dim <= settings.BRUTE_FORCE_LIMIT:
            brute = brute_force_intersection(lift_bundle(L1), lift_bundle(L2), pf)
            _require(meet.points() == brute, f'brute force disagrees for {delta.tolist()}')
        cases += 1

    for _ in range(10):
        X = standard_torus(rng.randint(2, 3))
        blocks = [rng.randint(-3, 3) for _ in range(X.g)]
        blocks[rng.randrange(X.g)] = 0
        delta = ImmutableMatrix.diag(*(ImmutableMatrix([[0, k], [-k, 0]]) for k in blocks))
        L1 = random_bundle(rng, X, flat_part=False)
        L2 = make_bundle(X, L1.E + delta, [0] * X.real_dim)
        meet = intersect_lifts(lift_bundle(L1), lift_bundle(L2))
        nullity = X.real_dim - delta.rank()
        _require(not meet.empty and meet.free_rank == nullity, f'{meet!r} for {delta.tolist()}')
        cases += 1
    return cases


@acceptance_check('equivariance')
def _(rng: random.Random) -> int:
    cases = 50
    for _ in range(cases):
        X = standard_torus(rng.randint(1, 3))
        L = random_bundle(rng, X)
        flat = make_bundle(X, zeros(X.real_dim, X.real_dim), random_rationals(rng, X.real_dim))
        moved = lift_bundle(tensor(L, flat))
        _require(moved == translate_lift(lift_bundle(L), pic0_point(flat)), f'not equivariant: {L}')

        L1, L2, M = random_bundle(rng, X), random_bundle(rng, X), random_bundle(rng, X)
        before = intersect_lifts(lift_bundle(L1), lift_bundle(L2))
        after = intersect_lifts(lift_bundle(tensor(L1, M)), lift_bundle(tensor(L2, M)))
        _require(before.free_rank == after.free_rank, 'free rank changed under tensor')
        _require(before.finite == after.finite, 'invariant factors changed under tensor')
        _require(before.empty == after.empty, 'emptiness changed under tensor')
        if not before.empty:
            _require(after.contains(before.point) and before.contains(after.point), 'point sets differ')
    return cases


@acceptance_check('floer-ext')
def _(rng: random.Random) -> int:
    cases = 50
    for _ in range(cases):
        X = standard_torus(rng.randint(1, 3))
        L1 = random_bundle(rng, X)
        c2 = L1.c if rng.random() < 0.5 else random_rationals(rng, X.real_dim)
        L2 = make_bundle(X, L1.E, c2)
        floer, hom = floer_dims_J(L1, L2), hom_B(L1, L2)
        _require(floer == hom, f'HF {floer.dims} != Hom {hom.dims}')
    return cases


@acceptance_check('doubled-geometry')
def _(rng: random.Random) -> int:
    cases = 50
    for _ in range(cases):
        X = standard_torus(rng.randint(1, 3))
        doubled = make_doubled(X)
        L = random_bundle(rng, X)
        tangent = lift_tangent(lift_bundle(L))
        J_complex = lift_gcs_complex(X)
        _require(tangent == generalized_tangent(L.E, doubled), 'tangent != generalized tangent')
        _require(is_maximal_isotropic(tangent, doubled.neutral), 'lift is not maximal isotropic')
        _require(is_stable_under(tangent, J_complex), 'lift is not J-holomorphic')
        _require(is_isotropic(tangent, j_sharp(J_complex, doubled)), 'lift is not Lagrangian')

    X2 = standard_torus(2)
    E = zeros(4, 4)
    E[0, 2], E[2, 0] = 1, -1
    _require(not is_stable_under(graph_subspace(E), lift_gcs_complex(X2)), 'non-(1,1) graph is stable')
    return cases + 1


@acceptance_check('gcs-algebra')
def _(rng: random.Random) -> int:
    cases = 0
    for g in (1, 2):
        X = standard_torus(g)
        doubled = make_doubled(X)
        n = X.real_dim
        _require(is_almost_gcs(lift_gcs_complex(X), doubled), 'J_J is not almost GC')
        omega = X.J
        _require(is_almost_gcs(lift_gcs_symplectic(omega), doubled), 'J_omega is not almost GC')
        sharp = j_sharp(lift_gcs_symplectic(omega), doubled)
        expected = ImmutableMatrix.diag(-omega, omega.inv())
        _require(sharp == expected, 'j_sharp(J_omega) != -ω ⊕ ω⁻¹')

        lifted = kahler_lift(X, eye(n))
        _require(is_generalized_kahler(lifted, doubled), 'standard torus is not generalized Kähler')
        G, J_complex = lifted.G, lifted.J_complex
        _require(lifted.J_symplectic == G * J_complex == J_complex * G, 'Kähler product relation fails')
        cases += 1

        for _ in range(10):
            B = random_alternating(rng, n, 3)
            GB = generalized_metric(eye(n), B)
            _require(GB * GB == eye(2 * n), 'G^B does not square to 1')
            _require(GB == b_transform(B) * G * b_transform(-B), 'G^B != e^B G e^-B')
            cases += 1
    return cases


@acceptance_check('t-duality')
def _(rng: random.Random) -> int:
    _require(mass_squared(1, 0, 2, 1) == Rational(1, 4), 'M^2(1,0,2,1) != 1/4')
    cases = 100
    for _ in range(cases):
        n, w = rng.randint(-5, 5), rng.randint(-5, 5)
        R = Rational(rng.randint(1, 20), rng.randint(1, 20))
        alpha_p = Rational(rng.randint(1, 20), rng.randint(1, 20))
        dual = t_dual_params(n, w, R, alpha_p)
        same = mass_squared(*dual, alpha_p) == mass_squared(n, w, R, alpha_p)
        _require(same, f'{n} {w} {R} {alpha_p}')
    return cases + 1


def _random_moduli(rng: random.Random, n: int) -> TorusModuli:
    A = ImmutableMatrix(n, n, [rng.randint(-2, 2) for _ in range(n * n)])
    G = (A.T * A + eye(n)) * Rational(rng.randint(1, 9), rng.randint(1, 9))
    B = random_alternating(rng, n, 3) * Rational(1, rng.randint(1, 4))
    return torus_moduli(G, B)


@acceptance_check('torus-t-duality')
def _(rng: random.Random) -> int:
    cases = 0
    for n in (1, 2, 3):
        _require(is_even_self_dual(narain_lattice(n)), f'lattice not even self-dual, n={n}')
        generators = onn_generators(n)
        for name, h in generators.items():
            _require(is_onn_integral(h), f'{name} is not in O({n},{n};Z)')
            cases += 1

        for _ in range(10):
            moduli = _random_moduli(rng, n)
            alpha_p = Rational(rng.randint(1, 6), rng.randint(1, 6))
            h = eye(2 * n)
            for _ in range(4):
                h = h * generators[rng.choice(list(generators))]
            winding = [rng.randint(-3, 3) for _ in range(n)]
            momentum = [rng.randint(-3, 3) for _ in range(n)]
            image = torus_t_dual(h, winding, momentum, moduli, alpha_p)
            before = torus_mass_squared(winding, momentum, moduli, alpha_p)
            after = torus_mass_squared(image.winding, image.momentum, image.moduli, alpha_p)
            _require(before == after, f'mass changed under {h.tolist()}: {before} != {after}')
            cases += 1

    for _ in range(20):
        R = Rational(rng.randint(1, 20), rng.randint(1, 20))
        alpha_p = Rational(rng.randint(1, 20), rng.randint(1, 20))
        w, p = rng.randint(-5, 5), rng.randint(-5, 5)
        circle = torus_mass_squared([w], [p], torus_moduli([[R**2]]), alpha_p)
        _require(circle == mass_squared(p, w, R, alpha_p), f'circle mismatch {p} {w} {R} {alpha_p}')
        cases += 1
    return cases


@acceptance_check('nilfold')
def _(rng: random.Random) -> int:
    L = onn_metric(2)
    cases = 0
    for m in range(-5, 6):
        f = ImmutableMatrix([[0, 0], [-m, 0]])
        _require(nilpotent_exp(f) == ImmutableMatrix([[1, 0], [-m, 1]]), f'exp(f) wrong for m={m}')
        mon = nilfold_doubled(m)
        _require(mon.T * L * mon == L, f'monodromy does not preserve L for m={m}')
        _require(mon[2:, 2:] == nilpotent_exp(f), f'dual block is not exp(f) for m={m}')
        cases += 1

    mon = nilfold_doubled(1)
    verdicts = {name: polarization_well_defined(p, mon) for name, p in nilfold_polarizations().items()}
    _require(verdicts == {'G': True, 'H': True, 'T': False}, repr(verdicts))
    return cases + 3


@acceptance_check('metric-decompose')
def _(rng: random.Random) -> int:
    cases = 0
    for m in (1, 2, 3):
        g0, H = nilfold_metric(m)
        original = gen_metric_decompose(H, 2)
        _require(original.g == g0 and original.B.is_zero_matrix, f'original metric, m={m}')

        swapped = gen_metric_decompose(permute(H, (2, 1, 0, 3)), 2)
        _require(swapped.g == eye(2), f'swapped g != I, m={m}')
        _require(swapped.B == ImmutableMatrix([[0, m * X], [-m * X, 0]]), f'swapped B wrong, m={m}')
        cases += 2
    return cases


@acceptance_check('normal-forms')
def _(rng: random.Random) -> int:
    cases = 200
    for _ in range(cases):
        size = rng.randint(1, 6)
        M = random_alternating(rng, size, 3)

        nf = symplectic_normal_form(M)
        _require(is_unimodular(nf.U), f'U is not unimodular for {M.tolist()}')
        canonical = symplectic_block(nf.divisors, size)
        _require(nf.U.T * M * nf.U == canonical, f'canonical form fails for {M.tolist()}')
        pf, _ = pfaffians(M)
        if nf.rank == size:
            _require(pf**2 == abs(M.det()), f'pf^2 != |det| for {M.tolist()}')

        snf = smith_normal_form(M)
        _require(snf.U * M * snf.V == snf.D, f'U M V != D for {M.tolist()}')
    return cases


def run_checks(only: Sequence[str] | None = None) -> list[CheckResult]:
    """Runs the registered checks in order; unknown names raise KeyError."""
    names = list(only) if only else list(REGISTRY)
    checks = [REGISTRY[name] for name in names]
    return [check.run() for check in checks]



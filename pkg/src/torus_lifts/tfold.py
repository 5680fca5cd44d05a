"""
Circle T-duality, O(n,n;ℤ) twists and the doubled nilfold.

Doubled fiber coordinates are ordered (y, z, ỹ, z̃); the O(n,n) metric is
L = [[0, I], [I, 0]] in that ordering. Fiber metrics are polynomial
matrices in the base coordinate x.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, NamedTuple

from sympy import ImmutableMatrix, Rational, eye, expand, zeros

from ._logging import log
from .doubled import Subspace, is_isotropic, is_stable_under
from .exactlinalg import (
    X,
    as_rational,
    int_matrix,
    is_alternating,
    is_symmetric,
    is_unimodular,
    nilpotent_exp,
    poly_mat_inverse,
    rat_matrix,
    signature,
)
from .exceptions import DimensionMismatch, InconsistentBlocks, InvalidParameter, NotAlternating

if TYPE_CHECKING:
    from collections.abc import Sequence

    from .types import IntMat, MatrixLike, PolyMat, RatMat, Scalar

__all__ = (
    'GenMetricBlocks',
    'NilfoldMetric',
    'OnnElement',
    'Polarization',
    'TorusModuli',
    'TorusState',
    'TwistData',
    'assemble_gen_metric',
    'gen_metric_decompose',
    'is_even_self_dual',
    'is_onn_integral',
    'mass_spectrum',
    'mass_squared',
    'narain_lattice',
    'nilfold_doubled',
    'nilfold_metric',
    'nilfold_polarizations',
    'onn_metric',
    'onn_element',
    'onn_generators',
    'permute',
    'polarization_well_defined',
    't_dual_params',
    'torus_mass_squared',
    'torus_moduli',
    'torus_t_dual',
    'twist_kind',
)


def onn_metric(n: int) -> IntMat:
    """L = [[0, I], [I, 0]]."""
    return ImmutableMatrix.vstack(
        zeros(n, n).row_join(eye(n)),
        eye(n).row_join(zeros(n, n)),
    )


def _positive(name: str, value: Scalar) -> Rational:
    value = as_rational(value)
    if value <= 0:
        raise InvalidParameter(f'{name} must be positive, got {value}')
    return value


def mass_squared(n_mom: int, w: int, R: Scalar, alpha_p: Scalar) -> Rational:
    """M² = n²/R² + w²R²/α′², the oscillator energy taken to be zero."""
    R = _positive('R', R)
    alpha_p = _positive('alpha_p', alpha_p)
    return Rational(n_mom**2) / R**2 + w**2 * R**2 / alpha_p**2


def t_dual_params(n_mom: int, w: int, R: Scalar, alpha_p: Scalar) -> tuple[int, int, Rational]:
    """R ↦ α′/R with momentum and winding exchanged."""
    R = _positive('R', R)
    alpha_p = _positive('alpha_p', alpha_p)
    return w, n_mom, alpha_p / R


def mass_spectrum(R: Scalar, alpha_p: Scalar, max_level: int) -> list[tuple[int, int, Rational]]:
    """States (n, w, M²) with |n|, |w| <= max_level, lightest first."""
    if max_level < 0:
        raise InvalidParameter(f'max_level must be nonnegative, got {max_level}')
    levels = range(-max_level, max_level + 1)
    states = [(n, w, mass_squared(n, w, R, alpha_p)) for n in levels for w in levels]
    return sorted(states, key=lambda state: (state[2], state[0], state[1]))


def narain_lattice(n: int) -> IntMat:
    """
    Gram matrix of the winding-momentum lattice ℤ^{2n}, vectors ordered (w, p).

    The pairing 2·w·p is the O(n,n) metric L; the lattice is even and self-dual.
    """
    if n < 1:
        raise InvalidParameter(f'Torus dimension must be positive, got {n}')
    return onn_metric(n)


def is_even_self_dual(G: MatrixLike) -> bool:
    """Integral symmetric Gram matrix with even diagonal and det = ±1."""
    G = int_matrix(G)
    if not is_symmetric(G):
        return False
    return all(G[i, i] % 2 == 0 for i in range(G.shape[0])) and is_unimodular(G)


def is_onn_integral(M: MatrixLike) -> bool:
    """M lies in O(n,n;ℤ): integral with Mᵀ·L·M = L."""
    M = rat_matrix(M)
    size = M.shape[0]
    if not M.is_square or size % 2:
        return False
    L = onn_metric(size // 2)
    return all(entry.is_Integer for entry in M) and M.T * L * M == L


def _embed(n: int, top_left: IntMat, bottom_left: IntMat, bottom_right: IntMat) -> IntMat:
    return ImmutableMatrix.vstack(
        top_left.row_join(zeros(n, n)),
        bottom_left.row_join(bottom_right),
    )


def onn_generators(n: int) -> dict[str, IntMat]:
    """
    Generators of O(n,n;ℤ) acting on (w, p).

    `duality-i` exchanges w_i and p_i, `sign-1` and `gl-i-j` embed GL(n,ℤ) as
    diag(A, A⁻ᵀ), and `b-shift-i-j` is [[I, 0], [Θ, I]] for the elementary
    alternating Θ with Θ_ij = 1.
    """
    if n < 1:
        raise InvalidParameter(f'Torus dimension must be positive, got {n}')
    identity, zero = eye(n), zeros(n, n)
    generators: dict[str, IntMat] = {}
    for i in range(n):
        swap = eye(2 * n)
        swap.row_swap(i, n + i)
        generators[f'duality-{i + 1}'] = ImmutableMatrix(swap)

    sign = eye(n)
    sign[0, 0] = -1
    generators['sign-1'] = _embed(n, ImmutableMatrix(sign), zero, ImmutableMatrix(sign))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            A = eye(n)
            A[i, j] = 1
            A = ImmutableMatrix(A)
            generators[f'gl-{i + 1}-{j + 1}'] = _embed(n, A, zero, A.inv().T)

    for i in range(n):
        for j in range(i + 1, n):
            theta = zeros(n, n)
            theta[i, j], theta[j, i] = 1, -1
            name = f'b-shift-{i + 1}-{j + 1}'
            generators[name] = _embed(n, identity, ImmutableMatrix(theta), identity)
    return generators


class TorusModuli(NamedTuple):
    """Target metric G and B-field of an n-torus, both constant."""

    G: RatMat
    B: RatMat


def torus_moduli(G: MatrixLike, B: MatrixLike | None = None) -> TorusModuli:
    G = rat_matrix(G)
    n = G.shape[0]
    B = rat_matrix(B) if B is not None else ImmutableMatrix(zeros(n, n))
    if not is_symmetric(G):
        raise InvalidParameter(f'G is not symmetric: {G.tolist()!r}')
    if signature(G).pos != n:
        raise InvalidParameter(f'G is not positive definite: {G.tolist()!r}')
    if B.shape != G.shape:
        raise DimensionMismatch(f'B must be {n}x{n}, got {B.shape}')
    if not is_alternating(B):
        raise NotAlternating(f'B is not alternating: {B.tolist()!r}')
    return TorusModuli(G=G, B=B)


def torus_mass_squared(
    winding: Sequence[int], momentum: Sequence[int], moduli: TorusModuli, alpha_p: Scalar
) -> Rational:
    """
    M² = Zᵀ·ℋ·Z / α′ with Z = (w, p) and ℋ built from (G/α′, B/α′).

    On a circle with G = [[R²]] this is `mass_squared`.
    """
    alpha_p = _positive('alpha_p', alpha_p)
    n = moduli.G.shape[0]
    if len(winding) != n or len(momentum) != n:
        raise DimensionMismatch(f'winding and momentum need {n} entries each')
    H = assemble_gen_metric(moduli.G / alpha_p, moduli.B / alpha_p)
    Z = ImmutableMatrix([*winding, *momentum])
    return as_rational((Z.T * H * Z)[0, 0] / alpha_p)


class TorusState(NamedTuple):
    winding: tuple[int, ...]
    momentum: tuple[int, ...]
    moduli: TorusModuli


def torus_t_dual(
    h: MatrixLike,
    winding: Sequence[int],
    momentum: Sequence[int],
    moduli: TorusModuli,
    alpha_p: Scalar,
) -> TorusState:
    """
    The image of a state under h ∈ O(n,n;ℤ): ℋ ↦ hᵀ·ℋ·h and Z ↦ h⁻¹·Z.

    The new (G, B) is read back off ℋ with `gen_metric_decompose`; the mass of
    the state does not change.
    """
    log.debug('')

    alpha_p = _positive('alpha_p', alpha_p)
    h = rat_matrix(h)
    n = moduli.G.shape[0]
    if h.shape != (2 * n, 2 * n):
        raise DimensionMismatch(f'h must be {2 * n}x{2 * n}, got {h.shape}')
    if not is_onn_integral(h):
        raise InvalidParameter(f'h is not in O(n,n;Z): {h.tolist()!r}')
    H = assemble_gen_metric(moduli.G / alpha_p, moduli.B / alpha_p)
    blocks = gen_metric_decompose(h.T * H * h, n)
    L = onn_metric(n)
    Z = L * h.T * L * ImmutableMatrix([*winding, *momentum])
    return TorusState(
        winding=tuple(int(v) for v in Z[:n]),
        momentum=tuple(int(v) for v in Z[n:]),
        moduli=TorusModuli(
            G=ImmutableMatrix(blocks.g * alpha_p), B=ImmutableMatrix(blocks.B * alpha_p)
        ),
    )


@dataclass(frozen=True)
class TwistData:
    """Generator N = [[f, Q], [K, -fᵀ]] of an O(n,n) gluing; K and Q alternating."""

    f: IntMat
    K: IntMat
    Q: IntMat

    def __post_init__(self) -> None:
        for name in ('f', 'K', 'Q'):
            object.__setattr__(self, name, int_matrix(getattr(self, name)))
        n = self.f.shape[0]
        if any(m.shape != (n, n) for m in (self.f, self.K, self.Q)):
            raise DimensionMismatch('f, K and Q must be square of the same size')
        if not is_alternating(self.K) or not is_alternating(self.Q):
            raise NotAlternating('K and Q must be alternating')

    @classmethod
    def of(
        cls,
        n: int,
        f: MatrixLike | None = None,
        K: MatrixLike | None = None,
        Q: MatrixLike | None = None,
    ) -> TwistData:
        """Missing blocks are zero."""
        zero = zeros(n, n)
        return cls(
            f=ImmutableMatrix(f if f is not None else zero),
            K=ImmutableMatrix(K if K is not None else zero),
            Q=ImmutableMatrix(Q if Q is not None else zero),
        )

    @property
    def n(self) -> int:
        return self.f.shape[0]

    @property
    def N(self) -> IntMat:
        return ImmutableMatrix.vstack(self.f.row_join(self.Q), self.K.row_join(-self.f.T))


class OnnElement(NamedTuple):
    N: IntMat
    M: RatMat
    integral: bool
    preserves_L: bool


def onn_element(t: TwistData) -> OnnElement:
    """M = exp(N) for nilpotent N, with its integrality and O(n,n) flags."""
    log.debug('')

    N = t.N
    L = onn_metric(t.n)
    if N.T * L + L * N != zeros(2 * t.n, 2 * t.n):
        raise InvalidParameter('N is not in the Lie algebra of O(n,n)')
    M = nilpotent_exp(N)
    return OnnElement(
        N=N,
        M=M,
        integral=all(entry.is_Integer for entry in M),
        preserves_L=M.T * L * M == L,
    )


def twist_kind(t: TwistData) -> str:
    """Which block generates the twist: geometric (f), b-field (K) or t-fold (Q)."""
    present = [
        kind
        for kind, block in (('geometric', t.f), ('b-field', t.K), ('t-fold', t.Q))
        if not block.is_zero_matrix
    ]
    if not present:
        return 'trivial'
    return present[0] if len(present) == 1 else 'mixed'


def nilfold_doubled(m: int) -> IntMat:
    """
    Monodromy of the doubled nilfold fiber in (y, z, ỹ, z̃) coordinates.

    The geometric twist acts on (y, z) by exp(-fᵀ) and on the dual
    coordinates by exp(f), f = [[0, 0], [-m, 0]].
    """
    element = onn_element(TwistData.of(2, f=[[0, m], [0, 0]]))
    return element.M


class NilfoldMetric(NamedTuple):
    g0: PolyMat
    H: PolyMat


def nilfold_metric(m: int) -> NilfoldMetric:
    """g₀ = [[1, -mx], [-mx, 1 + m²x²]] and ℋ = diag(g₀, g₀⁻¹)."""
    g0 = ImmutableMatrix([[1, -m * X], [-m * X, 1 + m**2 * X**2]])
    return NilfoldMetric(g0=g0, H=ImmutableMatrix.diag(g0, poly_mat_inverse(g0)))


def permute(H: PolyMat, order: Sequence[int]) -> PolyMat:
    """H'[i, j] = H[order[i], order[j]]."""
    if sorted(order) != list(range(H.shape[0])):
        raise InvalidParameter(f'{list(order)!r} is not a permutation of the coordinates')
    return ImmutableMatrix([[H[i, j] for j in order] for i in order])


@dataclass(frozen=True)
class Polarization:
    """The fiber directions a projection quotients out, as integer columns."""

    name: str
    kernel_basis: IntMat

    def __post_init__(self) -> None:
        basis = int_matrix(self.kernel_basis)
        object.__setattr__(self, 'kernel_basis', basis)
        size, k = basis.shape
        if size != 2 * k:
            raise DimensionMismatch(f'Polarization kernel must be half-dimensional, got {basis.shape}')
        if not is_isotropic(Subspace(basis=basis), onn_metric(k)):
            raise InvalidParameter(f'Polarization {self.name} is not isotropic for L')


def _unit_columns(size: int, *indices: int) -> IntMat:
    return ImmutableMatrix.hstack(*(eye(size)[:, i] for i in indices))


def nilfold_polarizations() -> dict[str, Polarization]:
    """Π_G, Π_H and Π_T of the doubled nilfold."""
    y, z, y_dual, z_dual = range(4)
    return {
        'G': Polarization('G', _unit_columns(4, y_dual, z_dual)),
        'H': Polarization('H', _unit_columns(4, y, z_dual)),
        'T': Polarization('T', _unit_columns(4, z, y_dual)),
    }


def polarization_well_defined(p: Polarization, mon: IntMat) -> bool:
    """The projection glues globally iff the monodromy preserves its kernel."""
    if mon.shape != (p.kernel_basis.shape[0],) * 2:
        raise DimensionMismatch(
            f'monodromy is {mon.shape}, polarization lives in {p.kernel_basis.shape[0]}'
        )
    return is_stable_under(Subspace(basis=p.kernel_basis), mon)


class GenMetricBlocks(NamedTuple):
    g: PolyMat
    B: PolyMat


def _expanded(M: Any) -> PolyMat:
    return ImmutableMatrix(ImmutableMatrix(M).applyfunc(expand))


def _same(A: PolyMat, B: PolyMat) -> bool:
    return _expanded(A - B).is_zero_matrix


def assemble_gen_metric(g: PolyMat, B: PolyMat) -> PolyMat:
    """ℋ = [[g - B·g⁻¹·B, B·g⁻¹], [-g⁻¹·B, g⁻¹]]."""
    g, B = ImmutableMatrix(g), ImmutableMatrix(B)
    if not _same(B.T, -B):
        raise NotAlternating('B must be alternating')
    g_inv = poly_mat_inverse(g)
    return _expanded(
        ImmutableMatrix.vstack(
            (g - B * g_inv * B).row_join(B * g_inv),
            (-g_inv * B).row_join(g_inv),
        )
    )


def gen_metric_decompose(H: PolyMat, n: int) -> GenMetricBlocks:
    """Recover (g, B) from a generalized metric in the block form of `assemble_gen_metric`."""
    log.debug('')

    H = ImmutableMatrix(H)
    if H.shape != (2 * n, 2 * n):
        raise DimensionMismatch(f'H must be {2 * n}x{2 * n}, got {H.shape}')
    if not _same(H.T, H):
        raise InconsistentBlocks('H is not symmetric')

    g_inv = H[n:, n:]
    g = poly_mat_inverse(g_inv)
    B = _expanded(H[:n, n:] * g)
    if not _same(B.T, -B):
        raise InconsistentBlocks('B read off the off-diagonal block is not alternating')
    if not _same(H[:n, :n], g - B * g_inv * B):
        raise InconsistentBlocks('top-left block differs from g - B·g⁻¹·B')
    if not _same(H[n:, :n], -g_inv * B):
        raise InconsistentBlocks('bottom-left block differs from -g⁻¹·B')
    log.dump('g', g)
    log.dump('B', B)
    return GenMetricBlocks(g=g, B=B)

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hankel_thematic.circle_fn import (
    CircleFunction,
    adjoint,
    block_diag,
    evaluate,
    fourier_coefficients,
    is_co_outer_polynomial,
    is_inner,
    is_unitary_valued,
    max_deviation,
    multiply,
    polynomial_minors,
    sup_norm,
    toeplitz_index,
    winding_number,
)
from hankel_thematic.config import DEFAULT_GRID, GridSpec
from hankel_thematic.errors import (
    DenominatorNearZero,
    GridTooCoarse,
    NonIntegerWinding,
    NonUnitArgument,
    NotBoundedAwayFromZero,
    NotUnimodular,
    ShapeMismatch,
    UnsupportedRepresentation,
)

S = 1 / np.sqrt(2)
Z = CircleFunction.monomial(1)
ZBAR = CircleFunction.monomial(-1)


def diag26():
    return CircleFunction.diag([CircleFunction.monomial(-2), CircleFunction.monomial(-6)])


def geometric():
    # 1 / (1 - z/2)
    return CircleFunction.scalar({0: 1.0}, {0: 1.0, 1: -0.5})


def laurent_strategy(max_rows=3, max_cols=3, lo=-4, hi=4):
    @st.composite
    def build(draw):
        rows = draw(st.integers(1, max_rows))
        cols = draw(st.integers(1, max_cols))
        powers = draw(st.sets(st.integers(lo, hi), min_size=1, max_size=5))
        seed = draw(st.integers(0, 2**31 - 1))
        rng = np.random.default_rng(seed)
        terms = {k: rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols)) for k in powers}
        return CircleFunction(terms, (rows, cols))
    return build()


# -- construction -------------------------------------------------------------

def test_shape_checks():
    with pytest.raises(ShapeMismatch):
        CircleFunction({0: np.eye(2), 1: np.ones((2, 3))})
    with pytest.raises(ShapeMismatch):
        multiply(CircleFunction.identity(2), CircleFunction.identity(3))


def test_denominator_on_circle_rejected():
    with pytest.raises(DenominatorNearZero):
        CircleFunction.scalar({0: 1.0}, {0: 1.0, 1: -1.0})


def test_trivial_denominator_is_laurent():
    f = CircleFunction.scalar({-1: 2.0}, {0: 1.0})
    assert f.is_laurent and f.kind == "laurent"


# -- evaluation ---------------------------------------------------------------

def test_evaluate_examples():
    assert np.allclose(evaluate(diag26(), 1), np.eye(2))
    assert np.isclose(evaluate(ZBAR, 1j)[0, 0], -1j)
    assert np.isclose(evaluate(geometric(), 1)[0, 0], 2)


def test_evaluate_rejects_off_circle():
    with pytest.raises(NonUnitArgument):
        evaluate(ZBAR, 1.01)


# -- Fourier coefficients -----------------------------------------------------

def test_fourier_monomial():
    c = fourier_coefficients(CircleFunction.monomial(-2), -4, 4)
    for k, v in c.items():
        assert abs(v[0, 0] - (1 if k == -2 else 0)) < 1e-14


def test_fourier_geometric_series():
    c = fourier_coefficients(geometric(), -5, 30, GridSpec(samples=4096))
    for k, v in c.items():
        expected = 2.0 ** (-k) if k >= 0 else 0.0
        assert abs(v[0, 0] - expected) < 1e-12


def test_fourier_rational_matches_power_series():
    # 1 / (1 - a z) = sum a^k z^k; independent oracle via the series
    a = 0.3 + 0.4j
    f = CircleFunction.scalar({0: 1.0}, {0: 1.0, 1: -a})
    c = fourier_coefficients(f, 0, 20, GridSpec(samples=2048))
    for k in range(21):
        assert abs(c[k][0, 0] - a ** k) < 1e-12


def test_fourier_diag_block():
    c = fourier_coefficients(diag26(), -6, -6)
    assert np.allclose(c[-6], [[0, 0], [0, 1]])


def test_grid_too_coarse():
    with pytest.raises(GridTooCoarse):
        fourier_coefficients(geometric(), -40, 40, GridSpec(samples=64))
    slow = CircleFunction.scalar({0: 1.0}, {0: 1.0, 1: -0.999})
    with pytest.raises(GridTooCoarse):
        fourier_coefficients(slow, 0, 4, GridSpec(samples=64))


@given(laurent_strategy())
def test_fourier_roundtrip(f):
    grid = DEFAULT_GRID
    c = fourier_coefficients(f, f.min_power, f.max_power, grid)
    z = grid.points
    rebuilt = sum(c[k][None] * (z ** k)[:, None, None] for k in c)
    assert np.max(np.abs(rebuilt - f.sample(grid))) < 1e-12


@given(laurent_strategy())
def test_fourier_matches_fft_oracle(f):
    grid = GridSpec(samples=64)
    fft = np.fft.fft(f.sample(grid), axis=0) / grid.samples
    c = fourier_coefficients(f, -4, 4, grid)
    for k in range(-4, 5):
        assert np.allclose(c[k], fft[k % grid.samples], atol=1e-12)


# -- algebra ------------------------------------------------------------------

def test_multiply_examples():
    assert max_deviation(multiply(ZBAR, Z), CircleFunction.identity(1)) < 1e-15
    P = CircleFunction.constant([[0, 1], [1, 0]])
    D = CircleFunction.diag([CircleFunction.monomial(-6), CircleFunction.monomial(-2)])
    assert max_deviation(P @ D @ P, diag26()) < 1e-15
    A = CircleFunction({-1: [[1, 2], [3, 4]], 2: [[0, 1j], [1, 0]]})
    assert max_deviation(A @ CircleFunction.identity(2), A) < 1e-15


def test_rational_product():
    g = geometric()
    prod = g * g
    assert not prod.is_laurent
    vals = g.sample()[:, 0, 0] ** 2
    assert np.max(np.abs(prod.sample()[:, 0, 0] - vals)) < 1e-12


def test_adjoint_examples():
    assert max_deviation(adjoint(ZBAR * CircleFunction.identity(2)), Z * CircleFunction.identity(2)) < 1e-15
    rng = np.random.default_rng(0)
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    U = CircleFunction.constant(q)
    assert np.allclose(adjoint(U).coefficient(0), q.conj().T)


@given(laurent_strategy())
def test_adjoint_involution_and_pointwise(f):
    assert max_deviation(adjoint(adjoint(f)), f) < 1e-14
    vals = f.sample()
    assert np.allclose(adjoint(f).sample(), np.conj(np.swapaxes(vals, 1, 2)), atol=1e-13)
    assert np.allclose(f.T.sample(), np.swapaxes(vals, 1, 2), atol=1e-13)
    assert np.allclose(f.conj().sample(), np.conj(vals), atol=1e-13)


def test_rational_conj_and_adjoint():
    g = geometric()
    assert np.allclose(g.conj().sample()[:, 0, 0], np.conj(g.sample()[:, 0, 0]), atol=1e-13)


def test_block_diag_and_slicing():
    f = block_diag(ZBAR, CircleFunction.constant([[2, 3]]))
    assert f.shape == (2, 3)
    assert max_deviation(f[1:, 1:], CircleFunction.constant([[2, 3]])) == 0
    assert f[0:1, 1:].is_zero


# -- predicates ---------------------------------------------------------------

def test_unitary_examples():
    V = CircleFunction({-1: [[S, 0], [0, 0]], 0: [[0, S], [-S, 0]], 1: [[0, 0], [0, S]]})
    assert is_unitary_valued(V).ok
    assert is_unitary_valued(diag26()).ok
    res = is_unitary_valued(CircleFunction.constant(np.diag([0.5, 1.0])))
    assert not res.ok and abs(res.deviation - 0.75) < 1e-14
    with pytest.raises(ShapeMismatch):
        is_unitary_valued(CircleFunction.constant(np.ones((2, 1))))


def test_unitary_product_identity():
    V = CircleFunction({-1: [[S, 0], [0, 0]], 0: [[0, S], [-S, 0]], 1: [[0, 0], [0, S]]})
    assert max_deviation(adjoint(V) @ V, CircleFunction.identity(2)) < 1e-12


def test_inner_examples():
    col = CircleFunction({1: [[S], [0]], 0: [[0], [S]]})
    assert is_inner(col).ok
    r = is_inner(ZBAR * CircleFunction.identity(2))
    assert not r.ok and r.reason == "NotAnalytic"
    assert is_inner(CircleFunction.constant([[1], [0]])).ok
    r = is_inner(CircleFunction.constant([[0.5], [0]]))
    assert not r.ok and r.reason == "NotIsometric"


def test_blaschke_is_inner():
    assert is_inner(CircleFunction.blaschke(0.3 + 0.2j)).ok


def test_co_outer_examples():
    assert is_co_outer_polynomial(CircleFunction({1: [[S], [0]], 0: [[0], [S]]})).ok
    r = is_co_outer_polynomial(CircleFunction({1: [[1], [0]], 2: [[0], [1]]}))
    assert not r.ok and r.reason == "CommonRootInDisk"
    assert is_co_outer_polynomial(CircleFunction({0: [[-S], [0]], 1: [[0], [S]]})).ok


def test_co_outer_roots():
    # common root 0.5 inside, common root 2 outside, common root -1 on the circle
    inside = CircleFunction({0: [[-0.5], [-1.0]], 1: [[1], [2]]})
    assert not is_co_outer_polynomial(inside).ok
    outside = CircleFunction({0: [[-2.0], [-4.0]], 1: [[1], [2]]})
    assert is_co_outer_polynomial(outside).ok
    boundary = CircleFunction({0: [[1.0], [2.0]], 1: [[1], [3]], 2: [[0], [1]]})
    r = is_co_outer_polynomial(boundary)
    assert not r.ok and r.reason == "BoundaryRoot"


def test_co_outer_complement_minors():
    # Theta = (1, z, z^2)^t padded to 3x2 with maximal minors sharing the root 0
    theta = CircleFunction({1: [[1, 0], [0, 0], [0, 1]], 0: [[0, 0], [0, 1], [0, 0]]})
    minors = polynomial_minors(theta, 2, col_sets=[(0, 1)])
    assert len(minors) == 3
    assert is_co_outer_polynomial(theta).ok is False
    good = CircleFunction({0: [[1, 0], [0, 1], [0, 0]]})
    assert is_co_outer_polynomial(good).ok


def test_co_outer_unsupported():
    with pytest.raises(UnsupportedRepresentation):
        is_co_outer_polynomial(ZBAR)
    with pytest.raises(UnsupportedRepresentation):
        is_co_outer_polynomial(geometric())


# -- winding and index --------------------------------------------------------

def test_winding_examples():
    assert winding_number(CircleFunction.monomial(-3)) == -3
    assert winding_number(CircleFunction.constant([[np.exp(1j * np.pi / 4)]])) == 0
    assert winding_number(CircleFunction.blaschke(0.3).conj()) == -1


def test_toeplitz_index_examples():
    assert toeplitz_index(CircleFunction.monomial(-6)) == 6
    assert toeplitz_index(CircleFunction.monomial(2)) == -2
    assert toeplitz_index(ZBAR * CircleFunction.blaschke(0.3).conj()) == 2


def test_winding_errors():
    with pytest.raises(NotBoundedAwayFromZero):
        winding_number(CircleFunction({0: [[1.0]], 1: [[0.8]]}))
    with pytest.raises(NotUnimodular):
        toeplitz_index(CircleFunction.monomial(-1, 0.5))
    with pytest.raises(NonIntegerWinding):
        winding_number(CircleFunction.monomial(-40), GridSpec(samples=64))
    with pytest.raises(NonIntegerWinding):
        winding_number(CircleFunction.blaschke(0.97), GridSpec(samples=8))


@given(st.integers(-12, 12))
def test_monomial_index(k):
    assert toeplitz_index(CircleFunction.monomial(k)) == -k


@given(st.lists(st.complex_numbers(max_magnitude=0.9), max_size=3),
       st.lists(st.complex_numbers(max_magnitude=0.9), max_size=3),
       st.integers(-4, 4))
def test_winding_matches_root_count(zeros, poles, k):
    # z^k * prod B_a * prod conj(B_b): argument principle gives k + #zeros - #poles
    u = CircleFunction.monomial(k)
    for a in zeros:
        u = u * CircleFunction.blaschke(a)
    for b in poles:
        u = u * CircleFunction.blaschke(b).conj()
    assert winding_number(u) == k + len(zeros) - len(poles)


def test_sup_norm():
    assert abs(sup_norm(CircleFunction({0: [[1.0]], 1: [[0.5]]})) - 1.5) < 1e-12

import numpy as np
import pytest

from hankel_thematic.catalog import (
    catalog_diag_monomial,
    catalog_paper_example,
    diag_monomial_symbol,
    example_symbol,
    random_laurent,
    random_unitary,
    rotation_block,
    swap_block,
    twist_bundle,
)
from hankel_thematic.circle_fn import CircleFunction, is_unitary_valued, max_deviation, sup_norm
from hankel_thematic.errors import InvariantViolation, NotNonincreasing, ShapeMismatch
from hankel_thematic.hankel import hankel_norm
from hankel_thematic.thematic import (
    FactorBundle,
    ThematicBlock,
    compose,
    group_levels,
    indices,
    is_monotone,
    lift,
    scalar_badly_approximable,
    verify_bundle,
    verify_thematic,
)

S = 1 / np.sqrt(2)


# -- blocks -------------------------------------------------------------------

def test_rotation_block_verifies():
    v = CircleFunction({1: [[S], [0]], 0: [[0], [S]]})
    theta = CircleFunction({0: [[-S], [0]], 1: [[0], [S]]})
    rep = verify_thematic(ThematicBlock(v, theta))
    assert rep.ok, rep.checks
    assert verify_thematic(rotation_block(5, "left", lead_one=True)).ok
    assert verify_thematic(rotation_block(1, "right")).ok


def test_identity_and_swap_blocks():
    for n in (1, 2, 4):
        assert verify_thematic(ThematicBlock.identity(n)).ok
    assert verify_thematic(swap_block("left")).ok
    u = random_unitary(3, np.random.default_rng(1))
    assert verify_thematic(ThematicBlock.from_unitary(u)).ok


def test_common_factor_fails_co_outer():
    v = CircleFunction({1: [[S], [0]], 2: [[0], [S]]})
    theta = CircleFunction({2: [[-S], [0]], 1: [[0], [S]]})
    rep = verify_thematic(ThematicBlock(v, theta))
    assert rep.checks["unitary"]["ok"]
    assert not rep.checks["v_co_outer"]["ok"]
    assert not rep.ok


def test_non_unitary_block_fails():
    v = CircleFunction({0: [[1.0], [0]]})
    theta = CircleFunction({0: [[1.0], [0]]})
    rep = verify_thematic(ThematicBlock(v, theta))
    assert "unitary" in rep.failures


def test_size_one_block():
    assert verify_thematic(ThematicBlock.from_unitary([[1j]])).ok
    blk = ThematicBlock(CircleFunction.monomial(1), CircleFunction.zeros(1, 0))
    assert "constant" in verify_thematic(blk).failures


def test_block_shape_validation():
    with pytest.raises(ShapeMismatch):
        ThematicBlock(CircleFunction.constant([[1], [0]]), CircleFunction.constant([[1, 0], [0, 1]]))
    with pytest.raises(ValueError):
        ThematicBlock.identity(2, side="up")


def test_lift():
    blk = rotation_block(1, "right")
    assert max_deviation(lift(blk, 0).assembled(), blk.factor()) == 0
    L = lift(blk, 1).assembled()
    assert L.shape == (3, 3)
    assert np.allclose(L.sample()[:, 0, :], [1, 0, 0])
    assert is_unitary_valued(L).ok
    with pytest.raises(ValueError):
        lift(blk, -1)


def test_embed_and_twist_stay_thematic():
    blk = rotation_block(3, "right").embed(4)
    assert verify_thematic(blk).ok
    U = random_unitary(3, np.random.default_rng(2))
    assert verify_thematic(blk.twisted(0.7, U)).ok


# -- composition ----------------------------------------------------------------

def test_example_bundles_compose():
    phi = example_symbol()
    for b in catalog_paper_example():
        assert max_deviation(compose(b), phi) < 1e-10


def test_third_factorization_is_permutation_product():
    P = CircleFunction.constant([[0, 1], [1, 0]])
    D = diag_monomial_symbol([6, 2])
    assert max_deviation(P @ D @ P, compose(catalog_paper_example()[2])) < 1e-15


def test_catalog_diag_monomial():
    b = catalog_diag_monomial([1, 1], [2, 6])
    assert max_deviation(compose(b), example_symbol()) == 0
    s = catalog_diag_monomial([1], [3])
    assert indices(s).indices == (3,)
    half = CircleFunction.monomial(-1, 0.5)
    p = catalog_diag_monomial([1, 1], [3, 2], residual=half)
    target = CircleFunction.diag([CircleFunction.monomial(-3), CircleFunction.monomial(-2), half])
    assert max_deviation(compose(p), target) < 1e-15
    assert verify_bundle(p, target).ok
    with pytest.raises(NotNonincreasing):
        catalog_diag_monomial([0.5, 1], [2, 2])


@pytest.mark.parametrize("m,n", [(2, 3), (3, 2), (1, 4)])
def test_rectangular_padding(m, n):
    r = min(m, n)
    exps = list(range(r + 1, 1, -1))
    b = catalog_diag_monomial([1.0] * r, exps, m=m, n=n)
    phi = compose(b)
    assert phi.shape == (m, n)
    vals = phi.sample()
    for j, e in enumerate(exps):
        assert np.allclose(vals[:, j, j], CircleFunction.monomial(-e).sample()[:, 0, 0])
    mask = np.ones((m, n), bool)
    mask[range(r), range(r)] = False
    assert np.all(vals[:, mask] == 0)
    assert verify_bundle(b, phi).ok


def test_compose_errors():
    b = catalog_diag_monomial([1, 1], [2, 6])
    bad = FactorBundle(2, 2, b.left, b.right, [(0.5, b.diag[0][1]), (1.0, b.diag[1][1])])
    with pytest.raises(InvariantViolation):
        compose(bad)
    with pytest.raises(ShapeMismatch):
        compose(FactorBundle(2, 2, b.left[:1], b.right, b.diag))


# -- verification ---------------------------------------------------------------

def test_verify_example_bundles():
    phi = example_symbol()
    for b in catalog_paper_example():
        rep = verify_bundle(b, phi)
        assert rep.ok, rep.failures


def test_verify_wrong_target():
    rep = verify_bundle(catalog_paper_example()[1], diag_monomial_symbol([2, 7]))
    assert rep.failures == ["recomposition"]


def test_residual_at_level_fails():
    z = CircleFunction.monomial(-1)
    b = catalog_diag_monomial([1, 1], [3, 2], residual=z)
    rep = verify_bundle(b, compose(b))
    assert rep.failures == ["residual_bounds"]


def test_residual_sup_above_level_fails():
    psi = CircleFunction.constant([[1.5]])
    b = catalog_diag_monomial([1, 1], [3, 2], residual=psi)
    assert "residual_bounds" in verify_bundle(b, compose(b)).failures


def test_negative_index_fails():
    b = catalog_diag_monomial([1], [1])
    bad = FactorBundle(1, 1, b.left, b.right, [(1.0, CircleFunction.monomial(1))])
    rep = verify_bundle(bad, CircleFunction.monomial(1))
    assert rep.failures == ["diagonal_unimodular_index"]
    assert "-1" in rep.checks["diagonal_unimodular_index"]["detail"]


def test_verify_shape_problems():
    b = catalog_diag_monomial([1, 1], [2, 6])
    bad = FactorBundle(3, 2, b.left, b.right, b.diag)
    rep = verify_bundle(bad, example_symbol())
    assert rep.failures == ["shapes"]


# -- indices --------------------------------------------------------------------

def test_example_indices():
    got = [indices(b) for b in catalog_paper_example()]
    assert [r.indices for r in got] == [(2, 6), (1, 7), (6, 2)]
    assert [r.monotone for r in got] == [False, False, True]
    assert all(r.nu == {1.0: 8} for r in got)
    assert all(r.iota_bound_ok for r in got)


def test_partial_example_bundles():
    rng = np.random.default_rng(3)
    psi = random_laurent((2, 2), [-2, -1, 0, 1], rng)
    psi = psi * (0.9 / sup_norm(psi))
    phi = example_symbol(psi)
    for b in catalog_paper_example(psi):
        assert verify_bundle(b, phi).ok
    assert [indices(b).indices for b in catalog_paper_example(psi)] == [(2, 6), (1, 7), (6, 2)]


def test_grouping_and_monotone():
    assert group_levels([1.0, 1.0 + 1e-8, 0.5, 0.5]) == [[0, 1], [2, 3]]
    assert is_monotone([2, 3, 6], [1.0, 0.5, 0.5]) is False
    assert is_monotone([2, 6, 3], [1.0, 0.8, 0.5]) is True
    assert is_monotone([6, 2, 5, 1], [1, 1, 0.5, 0.5]) is True


def test_levels_group_for_nu():
    b = catalog_diag_monomial([1, 1, 0.5], [3, 2, 4])
    rep = indices(b)
    assert rep.nu == {1.0: 5, 0.5: 4}
    assert rep.monotone
    assert rep.groups == ((0, 1), (2,))


def test_composed_norm_equals_top_value():
    for b in catalog_paper_example() + [catalog_diag_monomial([2, 0.5], [3, 1])]:
        assert abs(hankel_norm(compose(b)) - b.values[0]) <= 1e-6 * b.values[0]


def test_twisted_bundle_verifies():
    rng = np.random.default_rng(4)
    b = catalog_paper_example()[1]
    tb = twist_bundle(b, random_unitary(1, rng), random_unitary(1, rng), [(0.3, 1.1), (-0.4, 2.0)])
    assert verify_bundle(tb, example_symbol()).ok
    assert indices(tb).indices == (1, 7)


# -- scalar criterion -------------------------------------------------------------

def test_scalar_badly_approximable():
    ok, cert = scalar_badly_approximable(CircleFunction.monomial(-3))
    assert ok and cert["index"] == 3
    ok, cert = scalar_badly_approximable(CircleFunction.monomial(1))
    assert not ok and cert["index"] == -1
    ok, cert = scalar_badly_approximable(CircleFunction({0: [[0.5]], -1: [[0.25]]}))
    assert not ok and cert["reason"] == "non-constant modulus"
    assert cert["modulus_range"] == pytest.approx((0.25, 0.75))
    ok, cert = scalar_badly_approximable(CircleFunction.monomial(-2, 3.0))
    assert ok and cert["modulus"] == pytest.approx(3.0)

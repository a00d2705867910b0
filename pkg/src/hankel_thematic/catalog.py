"""Explicit factor bundles: diagonal monomial symbols, the three factorizations
of ``diag(zbar^2, zbar^6)``, and constant-unitary twists of existing bundles."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .circle_fn import CircleFunction
from .errors import NotNonincreasing, ShapeMismatch
from .thematic import FactorBundle, ThematicBlock, lift

SQRT_HALF = 1 / np.sqrt(2)


def diag_monomial_symbol(exps: Sequence[int], coeffs: Sequence[float] | None = None) -> CircleFunction:
    """``diag(c_j zbar^{m_j})``."""
    coeffs = [1.0] * len(exps) if coeffs is None else coeffs
    return CircleFunction.diag([CircleFunction.monomial(-int(m), c) for c, m in zip(coeffs, exps)])


def example_symbol(residual: CircleFunction | None = None) -> CircleFunction:
    """``diag(zbar^2, zbar^6)``, optionally with a residual block appended diagonally."""
    phi = diag_monomial_symbol([2, 6])
    return phi if residual is None else CircleFunction.diag([phi, residual])


def identity_blocks(size: int, r: int, side: str) -> list:
    return [lift(ThematicBlock.identity(size - j, side), j) for j in range(r)]


def _residual_dims(residual, m: int | None, n: int | None, r: int) -> tuple[int, int]:
    if residual is not None:
        return r + residual.rows, r + residual.cols
    return (r if m is None else m), (r if n is None else n)


def catalog_diag_monomial(coeffs: Sequence[float], exps: Sequence[int], residual: CircleFunction | None = None,
                          m: int | None = None, n: int | None = None) -> FactorBundle:
    """Bundle with identity blocks and ``u_j = zbar^{m_j}``, ``t_j = c_j``."""
    coeffs = [float(c) for c in coeffs]
    if len(coeffs) != len(exps):
        raise ShapeMismatch("coeffs and exps differ in length")
    if any(a < b for a, b in zip(coeffs, coeffs[1:])):
        raise NotNonincreasing(f"coefficients {coeffs} are not nonincreasing")
    if any(c <= 0 for c in coeffs) or any(int(e) < 1 for e in exps):
        raise ValueError("coefficients must be positive and exponents >= 1")
    r = len(coeffs)
    m, n = _residual_dims(residual, m, n, r)
    diag = [(c, CircleFunction.monomial(-int(e))) for c, e in zip(coeffs, exps)]
    return FactorBundle(m, n, identity_blocks(m, r, "left"), identity_blocks(n, r, "right"), diag, residual)


def rotation_block(power: int, side: str, lead_one: bool = False) -> ThematicBlock:
    """Two-by-two thematic block built from ``z^power`` and ``1``.

    ``lead_one=False``: ``v = (z^p, 1)/sqrt2``, ``Theta = (-1, z^p)/sqrt2``.
    ``lead_one=True``:  ``v = (1, z^p)/sqrt2``, ``Theta = (-z^p, 1)/sqrt2``.
    """
    if lead_one:
        v = CircleFunction({0: [[SQRT_HALF], [0]], power: [[0], [SQRT_HALF]]})
        theta = CircleFunction({power: [[-SQRT_HALF], [0]], 0: [[0], [SQRT_HALF]]})
    else:
        v = CircleFunction({power: [[SQRT_HALF], [0]], 0: [[0], [SQRT_HALF]]})
        theta = CircleFunction({0: [[-SQRT_HALF], [0]], power: [[0], [SQRT_HALF]]})
    return ThematicBlock(v, theta, side)


def swap_block(side: str) -> ThematicBlock:
    return ThematicBlock.from_unitary([[0, 1], [1, 0]], side)


def catalog_paper_example(residual: CircleFunction | None = None) -> list[FactorBundle]:
    """The identity, rotation and permutation factorizations of ``diag(zbar^2, zbar^6)``.

    With ``residual`` the first slots are embedded and the bundles become
    partial factorizations of ``diag(zbar^2, zbar^6) (+) residual``.
    """
    m = 2 + (0 if residual is None else residual.rows)
    n = 2 + (0 if residual is None else residual.cols)

    def slots(first_left, first_right, us):
        left = [lift(first_left.embed(m), 0), lift(ThematicBlock.identity(m - 1, "left"), 1)]
        right = [lift(first_right.embed(n), 0), lift(ThematicBlock.identity(n - 1, "right"), 1)]
        diag = [(1.0, CircleFunction.monomial(-e)) for e in us]
        return FactorBundle(m, n, left, right, diag, residual)

    first = slots(ThematicBlock.identity(2, "left"), ThematicBlock.identity(2, "right"), (2, 6))
    second = slots(rotation_block(5, "left", lead_one=True), rotation_block(1, "right"), (1, 7))
    third = slots(swap_block("left"), swap_block("right"), (6, 2))
    return [first, second, third]


def twist_bundle(bundle: FactorBundle, left_unitary=None, right_unitary=None,
                 phases: Sequence[tuple[float, float]] | None = None) -> FactorBundle:
    """Another factorization of the same function via constant-unitary twists.

    ``phases[j] = (beta, alpha)`` rotates ``w_j`` by ``e^{i beta}`` and ``v_j`` by
    ``e^{i alpha}``, so ``u_j`` picks up ``e^{i(alpha + beta)}``.  The last
    slot's ``Xi`` and ``Theta`` are multiplied on the right by ``left_unitary``
    and ``right_unitary``; the residual becomes ``U_L^* Psi conj(U_R)``.
    """
    r = bundle.r
    if r == 0:
        raise ValueError("nothing to twist in an empty bundle")
    phases = list(phases) if phases is not None else [(0.0, 0.0)] * r
    left, right, diag = [], [], []
    for j in range(r):
        beta, alpha = phases[j]
        UL = left_unitary if j == r - 1 else None
        UR = right_unitary if j == r - 1 else None
        left.append(lift(bundle.left[j].inner.twisted(beta, UL), j))
        right.append(lift(bundle.right[j].inner.twisted(alpha, UR), j))
        t, u = bundle.diag[j]
        diag.append((t, u * np.exp(1j * (alpha + beta))))
    psi = bundle.residual
    if psi is not None:
        if left_unitary is not None:
            psi = CircleFunction.constant(np.conj(np.asarray(left_unitary)).T) @ psi
        if right_unitary is not None:
            psi = psi @ CircleFunction.constant(np.conj(np.asarray(right_unitary)))
    return FactorBundle(bundle.m, bundle.n, left, right, diag, psi)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with phase correction."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_thematic_block(n: int, rng: np.random.Generator, side: str = "right",
                          max_power: int = 3) -> ThematicBlock:
    """A rotation block of random power embedded in size ``n`` and mixed by constant unitaries.

    ``V -> U V`` maps ``(v, Theta)`` to ``(U v, conj(U) Theta)``; a right twist of
    ``Theta`` keeps the block thematic as well.
    """
    p = int(rng.integers(0, max_power + 1)) if n > 1 else 0
    if p == 0:
        return ThematicBlock.from_unitary(random_unitary(n, rng), side)
    blk = rotation_block(p, side, lead_one=bool(rng.integers(2))).embed(n)
    U = CircleFunction.constant(random_unitary(n, rng))
    blk = ThematicBlock(U @ blk.v, U.conj() @ blk.theta, side)
    return blk.twisted(float(rng.uniform(0, 2 * np.pi)), random_unitary(n - 1, rng))


def random_laurent(shape: tuple[int, int], powers: Sequence[int], rng: np.random.Generator,
                   scale: float = 1.0) -> CircleFunction:
    terms = {int(k): scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) for k in powers}
    return CircleFunction(terms, shape)

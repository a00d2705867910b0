"""Factorization-independent quantities.

Residual extraction and its uniqueness up to constant unitaries, the kernel
and range descriptions of the subspace ``L``, the dimension formula
``D(kappa) = sum_{k_j > kappa} (k_j - kappa)`` and recovery of monotone
thematic indices from the Hankel operator alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .catalog import random_unitary
from .circle_fn import CircleFunction, evaluate, negative_coefficient_norm, sup_norm, toeplitz_index
from .config import DEFAULT_GRID, DEFAULT_TOL, GridSpec, ToleranceConfig
from .errors import DegenerateInput, InconsistentTable, NotAnalytic, NotEquivalent, ShapeMismatch
from .hankel import MaximizingDimTable, dim_table, hankel_norm, iota
from .thematic import FactorBundle, compose

MAX_SWEEPS = 100
SWEEP_TOL = 1e-12


def extract_residual(phi: CircleFunction, xis: Sequence[CircleFunction],
                     thetas: Sequence[CircleFunction]) -> CircleFunction:
    """``Xi_{r-1}^* ... Xi_0^* Phi conj(Theta_0) ... conj(Theta_{r-1})``."""
    if len(xis) != len(thetas):
        raise ShapeMismatch("need as many Xi factors as Theta factors")
    r = len(xis)
    if r > min(phi.shape):
        raise ShapeMismatch(f"r = {r} exceeds min(m, n) = {min(phi.shape)}")
    if r == min(phi.shape):
        return CircleFunction.zeros(phi.rows - r, phi.cols - r)
    out = phi
    for xi in xis:
        out = xi.adjoint() @ out
    for theta in thetas:
        out = out @ theta.conj()
    return out


def bundle_residual(phi: CircleFunction, bundle: FactorBundle) -> CircleFunction:
    """Residual of ``phi`` extracted with the blocks of ``bundle``."""
    return extract_residual(phi, bundle.xis(), bundle.thetas())


@dataclass(frozen=True)
class ResidualEquivalence:
    U1: np.ndarray
    U2: np.ndarray
    max_deviation: float
    sweeps: int


def _polar(K: np.ndarray) -> np.ndarray:
    """Unitary polar factor; null directions are completed towards the identity."""
    X, s, Yh = np.linalg.svd(K)
    scale = s[0] if s.size and s[0] > 0 else 1.0
    rank = int(np.count_nonzero(s > 1e-12 * scale))
    if rank == K.shape[0]:
        return X @ Yh
    Xr, Yr = X[:, :rank], Yh[:rank].conj().T
    n = K.shape[0]
    Q = (np.eye(n) - Xr @ Xr.conj().T) @ (np.eye(n) - Yr @ Yr.conj().T)
    X2, _, Yh2 = np.linalg.svd(K / scale + Q)
    return X2 @ Yh2


def _misfit(A, B, U2, U1) -> float:
    """Relative Frobenius misfit ``||B - U2 A U1|| / ||B||`` summed over samples."""
    return float(np.sqrt(np.sum(np.abs(B - U2 @ A @ U1) ** 2) / max(np.sum(np.abs(B) ** 2), 1e-300)))


def _align(A: np.ndarray, B: np.ndarray, U2: np.ndarray, U1: np.ndarray):
    prev = _misfit(A, B, U2, U1)
    sweeps = 0
    for sweeps in range(1, MAX_SWEEPS + 1):
        C = A @ U1
        U2 = _polar(np.einsum("mij,mkj->ik", B, C.conj()))
        D = U2 @ A
        U1 = _polar(np.einsum("mji,mjk->ik", D.conj(), B))
        cur = _misfit(A, B, U2, U1)
        if abs(prev - cur) < SWEEP_TOL:
            break
        prev = cur
    return U2, U1, sweeps


def pointwise_singular_values(f: CircleFunction, grid: GridSpec = DEFAULT_GRID) -> np.ndarray:
    if 0 in f.shape:
        return np.zeros((grid.samples, 0))
    return np.linalg.svd(f.sample(grid), compute_uv=False)


def residual_equivalence(psi: CircleFunction, psi_alt: CircleFunction, grid: GridSpec = DEFAULT_GRID,
                         tol: ToleranceConfig = DEFAULT_TOL, seed: int = 0) -> ResidualEquivalence:
    """Constant unitaries with ``psi_alt = U2 psi U1`` on the grid.

    Alternating Procrustes sweeps from the identity and from one random start;
    raises :class:`NotEquivalent` carrying the best deviation if no pair fits.
    """
    if psi.shape != psi_alt.shape:
        raise ShapeMismatch(f"{psi.shape} vs {psi_alt.shape}")
    p, q = psi.shape
    if p == 0 or q == 0:
        return ResidualEquivalence(np.eye(q, dtype=complex), np.eye(p, dtype=complex), 0.0, 0)
    A = psi.sample(grid)
    B = psi_alt.sample(grid)
    sup_a = float(np.max(np.linalg.norm(A, ord=2, axis=(1, 2))))
    sup_b = float(np.max(np.linalg.norm(B, ord=2, axis=(1, 2))))
    if sup_a <= tol.coeff_tol:
        if sup_b <= tol.coeff_tol:
            return ResidualEquivalence(np.eye(q, dtype=complex), np.eye(p, dtype=complex), sup_b, 0)
        raise DegenerateInput("first residual vanishes while the second does not")
    limit = tol.eq_tol * max(1.0, sup_a)

    sv_gap = float(np.max(np.abs(np.linalg.svd(A, compute_uv=False) - np.linalg.svd(B, compute_uv=False))))
    if sv_gap > limit:
        raise NotEquivalent(sv_gap, f"pointwise singular values differ by {sv_gap:.3e}")

    rng = np.random.default_rng(seed)
    starts = [(np.eye(p, dtype=complex), np.eye(q, dtype=complex)),
              (random_unitary(p, rng), random_unitary(q, rng))]
    best = None
    for U2, U1 in starts:
        U2, U1, sweeps = _align(A, B, U2, U1)
        dev = float(np.max(np.linalg.norm(B - U2 @ A @ U1, ord=2, axis=(1, 2))))
        if best is None or dev < best.max_deviation:
            best = ResidualEquivalence(U1, U2, dev, sweeps)
        if dev <= limit:
            break
    if best.max_deviation > limit:
        raise NotEquivalent(best.max_deviation)
    return best


def _rho(gram: np.ndarray, t: float, tol: ToleranceConfig) -> np.ndarray:
    lam, vec = np.linalg.eigh(gram)
    keep = np.where(lam >= t * t * (1 - tol.sv_tol), lam, 0.0)
    return (vec * keep[..., None, :]) @ np.conj(np.swapaxes(vec, -1, -2))


def rho_matrix(phi: CircleFunction, t: float, zeta: complex, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Spectral cut of ``Phi^t conj(Phi)`` at ``zeta``: eigenvalues below ``t^2`` are zeroed."""
    val = evaluate(phi, zeta, tol)
    gram = val.T @ np.conj(val)
    return _rho(gram, t, tol)


def _rho_samples(phi: CircleFunction, t: float, grid: GridSpec, tol: ToleranceConfig) -> np.ndarray:
    vals = phi.sample(grid)
    gram = np.swapaxes(vals, 1, 2) @ np.conj(vals)
    return _rho(gram, t, tol)


def _require_analytic(f: CircleFunction, grid: GridSpec, tol: ToleranceConfig):
    neg = negative_coefficient_norm(f, grid, tol)
    if neg > tol.coeff_tol:
        raise NotAnalytic(f"negative-power coefficient of norm {neg:.2e}")


def l_subspace_member(f: CircleFunction, phi: CircleFunction, t: float, grid: GridSpec = DEFAULT_GRID,
                      tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Whether the analytic column ``f`` lies in the kernel of multiplication by ``rho``."""
    if f.shape != (phi.cols, 1):
        raise ShapeMismatch(f"f must be {phi.cols}x1, got {f.shape}")
    _require_analytic(f, grid, tol)
    rho = _rho_samples(phi, t, grid, tol)
    fv = f.sample(grid)
    scale = max(1.0, float(np.max(np.linalg.norm(rho, ord=2, axis=(1, 2)))))
    resid = float(np.max(np.linalg.norm((rho @ fv)[:, :, 0], axis=1)))
    return resid <= tol.eq_tol * scale * max(sup_norm(f, grid), tol.coeff_tol)


def theta_range_member(f: CircleFunction, thetas: Sequence[CircleFunction], grid: GridSpec = DEFAULT_GRID,
                       tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Whether ``f = Theta_0 ... Theta_{r-1} g`` for an analytic ``g``."""
    if not thetas:
        raise ValueError("empty Theta chain")
    theta = thetas[0]
    for th in thetas[1:]:
        if theta.cols != th.rows:
            raise ShapeMismatch(f"cannot chain {theta.shape} with {th.shape}")
        theta = theta @ th
    if f.shape != (theta.rows, 1):
        raise ShapeMismatch(f"f must be {theta.rows}x1, got {f.shape}")
    _require_analytic(f, grid, tol)
    g = theta.adjoint() @ f
    scale = max(1.0, sup_norm(f, grid))
    back = float(np.max(np.linalg.norm((theta.sample(grid) @ g.sample(grid) - f.sample(grid))[:, :, 0], axis=1)))
    if back > tol.eq_tol * scale:
        return False
    return negative_coefficient_norm(g, grid, tol) <= tol.coeff_tol * scale


def predicted_dims(indices: Sequence[int], kappa: int) -> int:
    return sum(k - kappa for k in indices if k > kappa)


@dataclass(frozen=True)
class RecoveredIndices:
    level: float
    indices: tuple[int, ...]
    table: MaximizingDimTable


def recover_from_table(table: MaximizingDimTable) -> tuple[int, ...]:
    """Monotone indices from a ``D(kappa)`` table.

    The largest index is the first ``kappa`` with ``D = 0`` and its
    multiplicity is ``D`` one step earlier; each further distinct value is the
    first ``kappa`` where ``D`` matches the contribution of the values already
    found, with multiplicity read off one step before it.
    """
    D = table.__getitem__
    total = D(0)
    found: list[tuple[int, int]] = []
    prev = len(table) - 1 if table.dims[-1] == 0 else None
    if prev is None:
        raise InconsistentTable("table does not reach D = 0")
    while sum(mu * v for v, mu in found) < total:
        upper = found[-1][0] if found else prev
        explained = lambda kappa: sum(mu * max(v - kappa, 0) for v, mu in found)
        nxt = next((kappa for kappa in range(0, upper + 1) if D(kappa) == explained(kappa)), None)
        if nxt is None or nxt == 0 or (found and nxt >= found[-1][0]):
            raise InconsistentTable(f"no admissible next index after {found}")
        mu = D(nxt - 1) - explained(nxt - 1)
        if mu <= 0:
            raise InconsistentTable(f"nonpositive multiplicity {mu} at index {nxt}")
        found.append((nxt, mu))
    if sum(mu * v for v, mu in found) != total:
        raise InconsistentTable("recovered indices overshoot D(0)")
    out = tuple(v for v, mu in found for _ in range(mu))
    for kappa in range(len(table)):
        if predicted_dims(out, kappa) != D(kappa):
            raise InconsistentTable(f"recovered {out} disagrees with D({kappa}) = {D(kappa)}")
    return out


def recover_monotone_indices(phi: CircleFunction, t0: float | None = None, grid: GridSpec = DEFAULT_GRID,
                             tol: ToleranceConfig = DEFAULT_TOL) -> RecoveredIndices:
    """Monotone thematic indices at level ``t0`` (default ``||H_Phi||``) from Hankel data only."""
    if t0 is None:
        t0 = hankel_norm(phi, None, grid, tol)
    if not t0 > 0:
        raise ValueError("level t0 must be positive")
    table = dim_table(phi, t0, None, grid, tol)
    return RecoveredIndices(float(t0), recover_from_table(table), table)


@dataclass(frozen=True)
class DimensionReport:
    rows: tuple[tuple[int, int, int], ...]
    first_mismatch: int | None

    @property
    def consistent(self) -> bool:
        return self.first_mismatch is None


def verify_dimension_formula(phi: CircleFunction, t0: float, candidates: Sequence[int],
                             grid: GridSpec = DEFAULT_GRID, tol: ToleranceConfig = DEFAULT_TOL) -> DimensionReport:
    """Compare measured ``D(kappa)`` with the value predicted by ``candidates``."""
    cands = [int(k) for k in candidates]
    kmax = max(cands, default=0)
    if t0 > 0:
        table = dim_table(phi, t0, kmax, grid, tol)
        measured = table.dims
    else:
        measured = [0] * (kmax + 1)
    rows = []
    first = None
    for kappa in range(kmax + 1):
        pred = predicted_dims(cands, kappa)
        rows.append((kappa, measured[kappa], pred))
        if first is None and pred != measured[kappa]:
            first = kappa
    return DimensionReport(tuple(rows), first)


@dataclass(frozen=True)
class IotaReport:
    index: int
    iota: int
    holds: bool
    attained: bool


def iota_bound_check(bundle: FactorBundle, grid: GridSpec = DEFAULT_GRID,
                     tol: ToleranceConfig = DEFAULT_TOL) -> IotaReport:
    """Top thematic index against ``iota`` of the composed function."""
    if bundle.r < 1:
        raise ValueError("bundle has no diagonal slot")
    t, u = bundle.diag[0]
    if not t > 0:
        raise ValueError("top value must be positive")
    k = toeplitz_index(u, grid, tol)
    i = iota(compose(bundle), grid, tol)
    return IotaReport(k, i, k <= i, k == i)

"""Thematic blocks and (partial) thematic factorizations.

A right block stores ``v`` and ``Theta`` with ``V = (v | conj(Theta))``; a left
block stores ``w`` and ``Xi`` with ``W^t = (w | conj(Xi))``.  A bundle encodes

    Phi = W_0^* ... W_{r-1}^* diag(t_0 u_0, ..., t_{r-1} u_{r-1}, Psi) V_{r-1}^* ... V_0^*

where ``W_j = I_j (+) W_j'`` and ``V_j = I_j (+) V_j'`` are lifted blocks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .circle_fn import (
    CircleFunction,
    as_circle,
    block_diag,
    bmat,
    hstack,
    is_co_outer_polynomial,
    is_inner,
    is_unitary_valued,
    max_deviation,
    polynomial_minors,
    sup_norm,
    toeplitz_index,
    vstack,
)
from .config import DEFAULT_GRID, DEFAULT_TOL, GridSpec, ToleranceConfig
from .errors import InvariantViolation, NumericError, ShapeMismatch, UnsupportedRepresentation
from .hankel import hankel_norm, iota

MAX_MINOR_CHECK_SIZE = 6


@dataclass(frozen=True)
class ThematicBlock:
    v: CircleFunction
    theta: CircleFunction
    side: str = "right"

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', got {self.side!r}")
        n = self.v.rows
        if self.v.shape != (n, 1):
            raise ShapeMismatch(f"v must be a column, got {self.v.shape}")
        if self.theta.shape != (n, n - 1):
            raise ShapeMismatch(f"theta must be {n}x{n - 1}, got {self.theta.shape}")

    @property
    def size(self) -> int:
        return self.v.rows

    def thematic_matrix(self) -> CircleFunction:
        """``(v | conj(Theta))``, the unitary-valued thematic function."""
        return hstack([self.v, self.theta.conj()])

    def factor(self) -> CircleFunction:
        """``V`` for a right block, ``W`` for a left block."""
        M = self.thematic_matrix()
        return M if self.side == "right" else M.transpose()

    @classmethod
    def identity(cls, n: int, side: str = "right") -> "ThematicBlock":
        return cls.from_unitary(np.eye(n), side)

    @classmethod
    def from_unitary(cls, U, side: str = "right") -> "ThematicBlock":
        """Constant thematic block whose thematic matrix is ``U``."""
        U = np.asarray(U, dtype=complex)
        n = U.shape[0]
        theta = CircleFunction({0: np.conj(U[:, 1:])}, shape=(n, n - 1))
        return cls(CircleFunction.constant(U[:, :1]), theta, side)

    def embed(self, n: int) -> "ThematicBlock":
        """Extend to size ``n`` as ``(this block) (+) I``."""
        k = self.size
        if n < k:
            raise ShapeMismatch("cannot embed into a smaller size")
        if n == k:
            return self
        v = vstack([self.v, CircleFunction.zeros(n - k, 1)])
        theta = bmat([[self.theta, CircleFunction.zeros(k, n - k)],
                      [CircleFunction.zeros(n - k, k - 1), CircleFunction.identity(n - k)]])
        return ThematicBlock(v, theta, self.side)

    def twisted(self, phase: float = 0.0, unitary=None) -> "ThematicBlock":
        """Replace ``v -> e^{i phase} v`` and ``Theta -> Theta U`` for a constant unitary ``U``."""
        v = self.v * np.exp(1j * phase)
        theta = self.theta
        if unitary is not None and self.size > 1:
            theta = theta @ CircleFunction.constant(unitary)
        return ThematicBlock(v, theta, self.side)


@dataclass(frozen=True)
class LiftedBlock:
    offset: int
    inner: ThematicBlock

    @property
    def size(self) -> int:
        return self.offset + self.inner.size

    @property
    def side(self) -> str:
        return self.inner.side

    def assembled(self) -> CircleFunction:
        """``I_offset (+) inner.factor()``."""
        if self.offset == 0:
            return self.inner.factor()
        return block_diag(CircleFunction.identity(self.offset), self.inner.factor())


def lift(block: ThematicBlock, j: int) -> LiftedBlock:
    if j < 0:
        raise ValueError("offset must be nonnegative")
    return LiftedBlock(int(j), block)


@dataclass
class Report:
    """Named checks with pass/fail flags and short details."""

    checks: dict = field(default_factory=dict)

    def add(self, name: str, ok: bool, detail: str = ""):
        self.checks[name] = {"ok": bool(ok), "detail": detail}

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks.values())

    @property
    def failures(self) -> list[str]:
        return [name for name, c in self.checks.items() if not c["ok"]]

    def __bool__(self) -> bool:
        return self.ok


def _first_column_minors_analytic(V: CircleFunction, tol: ToleranceConfig) -> tuple[bool, float]:
    n = V.rows
    worst = 0.0
    for s in range(1, n + 1):
        cols = [c for c in itertools.combinations(range(n), s) if c[0] == 0]
        for minor in polynomial_minors(V, s, col_sets=cols):
            neg = [abs(c) for k, c in minor.items() if k < 0]
            worst = max(worst, max(neg, default=0.0))
    return worst <= tol.coeff_tol, worst


def verify_thematic(block: ThematicBlock, grid: GridSpec = DEFAULT_GRID, tol: ToleranceConfig = DEFAULT_TOL,
                    check_minors: bool = True) -> Report:
    """Unitarity, inner and co-outer checks for a thematic block."""
    rep = Report()
    M = block.thematic_matrix()
    unit = is_unitary_valued(M, grid, tol)
    rep.add("unitary", unit.ok, f"max ||V*V - I|| = {unit.deviation:.2e}")
    if block.size == 1:
        const = block.v.is_laurent and set(block.v.terms) <= {0}
        rep.add("constant", const, "n = 1 block must be a unimodular constant")
        return rep
    for name, f in (("v", block.v), ("theta", block.theta)):
        inn = is_inner(f, grid, tol)
        rep.add(f"{name}_inner", inn.ok, inn.reason or "")
        try:
            co = is_co_outer_polynomial(f, tol)
            rep.add(f"{name}_co_outer", co.ok, co.reason or "")
        except UnsupportedRepresentation as exc:
            rep.add(f"{name}_co_outer", False, str(exc))
    if check_minors and M.is_laurent and block.size <= MAX_MINOR_CHECK_SIZE:
        ok, worst = _first_column_minors_analytic(M, tol)
        rep.add("first_column_minors_analytic", ok, f"max negative coefficient {worst:.2e}")
    return rep


@dataclass(frozen=True)
class FactorBundle:
    """Ordered factors of a (partial) thematic factorization.

    ``left[j]`` and ``right[j]`` are lifted blocks of sizes ``m`` and ``n`` with
    offset ``j``; ``diag[j] = (t_j, u_j)``; ``residual`` is ``(m-r) x (n-r)`` or
    ``None`` for zero.
    """

    m: int
    n: int
    left: tuple
    right: tuple
    diag: tuple
    residual: CircleFunction | None = None

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        object.__setattr__(self, "diag", tuple((float(t), as_circle(u)) for t, u in self.diag))

    @property
    def r(self) -> int:
        return len(self.diag)

    @property
    def residual_shape(self) -> tuple[int, int]:
        return (self.m - self.r, self.n - self.r)

    @property
    def values(self) -> list[float]:
        return [t for t, _ in self.diag]

    def residual_or_zero(self) -> CircleFunction:
        if self.residual is None:
            return CircleFunction.zeros(*self.residual_shape)
        return self.residual

    def shape_problems(self) -> list[str]:
        out = []
        r = self.r
        if r > min(self.m, self.n):
            out.append(f"r = {r} exceeds min(m, n)")
        if len(self.left) != r or len(self.right) != r:
            out.append("need one left and one right block per diagonal slot")
        for j, b in enumerate(self.left):
            if b.offset != j or b.size != self.m or b.side != "left":
                out.append(f"left block {j} must be a left block of size {self.m} with offset {j}")
        for j, b in enumerate(self.right):
            if b.offset != j or b.size != self.n or b.side != "right":
                out.append(f"right block {j} must be a right block of size {self.n} with offset {j}")
        for j, (t, u) in enumerate(self.diag):
            if u.shape != (1, 1):
                out.append(f"u_{j} is not scalar")
            if t < 0:
                out.append(f"t_{j} is negative")
        if self.residual is not None and self.residual.shape != self.residual_shape:
            out.append(f"residual has shape {self.residual.shape}, expected {self.residual_shape}")
        return out

    def order_problems(self) -> list[str]:
        ts = self.values
        return [f"t_{j} = {ts[j]} < t_{j + 1} = {ts[j + 1]}" for j in range(len(ts) - 1) if ts[j] < ts[j + 1]]

    def diagonal(self) -> CircleFunction:
        """The middle factor ``diag(t_j u_j) (+) Psi`` of shape ``m x n``."""
        parts = [u * t for t, u in self.diag] + [self.residual_or_zero()]
        return block_diag(*parts)

    def thetas(self) -> list[CircleFunction]:
        return [b.inner.theta for b in self.right]

    def xis(self) -> list[CircleFunction]:
        return [b.inner.theta for b in self.left]


def compose(bundle: FactorBundle) -> CircleFunction:
    """Multiply out the factorization."""
    problems = bundle.shape_problems()
    if problems:
        raise ShapeMismatch("; ".join(problems))
    order = bundle.order_problems()
    if order:
        raise InvariantViolation(["t nonincreasing: " + p for p in order])
    out = bundle.diagonal()
    for b in reversed(bundle.left):
        out = b.assembled().adjoint() @ out
    for b in reversed(bundle.right):
        out = out @ b.assembled().adjoint()
    return out


def verify_bundle(bundle: FactorBundle, target: CircleFunction, grid: GridSpec = DEFAULT_GRID,
                  tol: ToleranceConfig = DEFAULT_TOL) -> Report:
    rep = Report()
    problems = bundle.shape_problems()
    rep.add("shapes", not problems, "; ".join(problems))
    if problems:
        return rep

    bad_blocks = []
    for side, blocks in (("left", bundle.left), ("right", bundle.right)):
        for j, b in enumerate(blocks):
            br = verify_thematic(b.inner, grid, tol)
            if not br.ok:
                bad_blocks.append(f"{side}[{j}]: {', '.join(br.failures)}")
    rep.add("thematic_blocks", not bad_blocks, "; ".join(bad_blocks))

    order = bundle.order_problems()
    rep.add("t_nonincreasing", not order, "; ".join(order))

    if target.shape != (bundle.m, bundle.n):
        rep.add("recomposition", False, f"target shape {target.shape} != {(bundle.m, bundle.n)}")
    else:
        try:
            composed = compose(bundle)
            dev = max_deviation(composed, target, grid)
            limit = tol.eq_tol * max(1.0, sup_norm(target, grid))
            rep.add("recomposition", dev <= limit, f"max deviation {dev:.2e}")
        except NumericError as exc:
            rep.add("recomposition", False, str(exc))

    diag_issues = []
    for j, (t, u) in enumerate(bundle.diag):
        try:
            k = toeplitz_index(u, grid, tol)
        except NumericError as exc:
            diag_issues.append(f"u_{j}: {exc}")
            continue
        if t > 0 and k <= 0:
            diag_issues.append(f"u_{j}: index {k} is not positive")
    rep.add("diagonal_unimodular_index", not diag_issues, "; ".join(diag_issues))

    rp, rq = bundle.residual_shape
    if bundle.r == 0 or rp == 0 or rq == 0:
        rep.add("residual_bounds", True, "no residual block")
    else:
        t_last = bundle.values[-1]
        psi = bundle.residual_or_zero()
        sup = sup_norm(psi, grid)
        try:
            hn = hankel_norm(psi, None, grid, tol)
        except NumericError as exc:
            rep.add("residual_bounds", False, str(exc))
        else:
            ok = sup <= t_last * (1 + tol.eq_tol) and hn < t_last * (1 - tol.sv_tol)
            rep.add("residual_bounds", ok, f"||Psi||_inf = {sup:.6g}, ||H_Psi|| = {hn:.6g}, t_(r-1) = {t_last:.6g}")
    return rep


@dataclass(frozen=True)
class IndexReport:
    indices: tuple[int, ...]
    values: tuple[float, ...]
    nu: dict
    monotone: bool
    iota_bound_ok: bool | None
    groups: tuple[tuple[int, ...], ...] = ()


def group_levels(values: Sequence[float], tol: ToleranceConfig = DEFAULT_TOL) -> list[list[int]]:
    """Group slot positions whose values agree within the relative band ``sv_tol``."""
    groups: list[list[int]] = []
    rep = None
    for j, t in enumerate(values):
        if rep is not None and abs(t - rep) <= tol.sv_tol * rep:
            groups[-1].append(j)
        else:
            groups.append([j])
            rep = t
    return groups


def is_monotone(indices: Sequence[int], values: Sequence[float], tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    for g in group_levels(values, tol):
        ks = [indices[j] for j in g]
        if any(a < b for a, b in zip(ks, ks[1:])):
            return False
    return True


def indices(bundle: FactorBundle, grid: GridSpec = DEFAULT_GRID, tol: ToleranceConfig = DEFAULT_TOL) -> IndexReport:
    """Thematic indices, per-level sums and the monotone flag of a bundle."""
    positive = [(t, u) for t, u in bundle.diag if t > 0]
    ks = tuple(toeplitz_index(u, grid, tol) for _, u in positive)
    ts = tuple(t for t, _ in positive)
    groups = group_levels(ts, tol)
    nu = {ts[g[0]]: sum(ks[j] for j in g) for g in groups}
    bound = None
    if ks:
        try:
            phi = compose(bundle)
            if phi.is_laurent:
                bound = ks[0] <= iota(phi, grid, tol)
        except NumericError:
            bound = None
    return IndexReport(ks, ts, nu, is_monotone(ks, ts, tol), bound, tuple(tuple(g) for g in groups))


def scalar_badly_approximable(phi: CircleFunction, grid: GridSpec = DEFAULT_GRID,
                              tol: ToleranceConfig = DEFAULT_TOL) -> tuple[bool, dict]:
    """Constant modulus plus positive Toeplitz index of the normalized symbol."""
    if phi.shape != (1, 1):
        raise ShapeMismatch("scalar symbol expected")
    mods = np.abs(phi.sample(grid)[:, 0, 0])
    c = float(np.mean(mods))
    spread = float(np.max(np.abs(mods - c)))
    if c == 0 or spread > tol.eq_tol * max(1.0, c):
        return False, {"reason": "non-constant modulus", "modulus_range": (float(mods.min()), float(mods.max()))}
    k = toeplitz_index(phi / c, grid, tol)
    if k <= 0:
        return False, {"reason": "index not positive", "index": k, "modulus": c}
    return True, {"index": k, "modulus": c}

"""Truncated block Hankel and Toeplitz operators.

With ``H f = P_-(Phi f)`` acting on ``H^2(C^n)``, the block in row ``i`` and
column ``j`` is the Fourier coefficient ``Phi^(-i-j-1)``.  For a Laurent
polynomial with negative degree ``d`` every nonzero block sits in the leading
``d x d`` block corner, so truncation at ``N >= d`` is exact.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .circle_fn import CircleFunction, fine_grid, fourier_coefficients
from .config import DEFAULT_GRID, DEFAULT_TOL, GridSpec, ToleranceConfig
from .errors import AmbiguousSpectrum, TruncationWarning, UnsupportedRepresentation, ZeroHankelWarning

HARTMAN_CERTIFICATE = (
    "symbol is continuous on the circle (Laurent/rational), so its Hankel operator is "
    "compact by Hartman's theorem and the essential norm is 0"
)


@dataclass(frozen=True)
class HankelTruncation:
    matrix: np.ndarray
    N: int
    block_shape: tuple[int, int]
    exact: bool
    symbol: CircleFunction | None = field(default=None, repr=False, compare=False)

    def block(self, i: int, j: int) -> np.ndarray:
        m, n = self.block_shape
        return self.matrix[i * m:(i + 1) * m, j * n:(j + 1) * n]


@dataclass(frozen=True)
class ToeplitzTruncation:
    matrix: np.ndarray
    N: int
    symbol: CircleFunction | None = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class DimEntry:
    kappa: int
    D: int
    gap: float


@dataclass(frozen=True)
class MaximizingDimTable:
    level: float
    entries: tuple[DimEntry, ...]

    @property
    def dims(self) -> list[int]:
        return [e.D for e in self.entries]

    def __getitem__(self, kappa: int) -> int:
        """``D(kappa)``; past the table end the value is the terminal one (0)."""
        if kappa < len(self.entries):
            return self.entries[kappa].D
        if self.entries and self.entries[-1].D == 0:
            return 0
        raise IndexError(f"kappa {kappa} beyond table")

    def __len__(self) -> int:
        return len(self.entries)


def _rational_order(f: CircleFunction, grid: GridSpec, tol: ToleranceConfig) -> tuple[int, dict]:
    """Truncation order for a rational symbol: grow until the next block falls below coeff_tol."""
    K = 16
    while True:
        g = fine_grid(f, -4 * K, -1, grid, tol)
        coeffs = fourier_coefficients(f, -4 * K, -1, g, tol)
        norms = {k: np.linalg.norm(c, 2) for k, c in coeffs.items()}
        big = [-k for k, v in norms.items() if v >= tol.coeff_tol]
        N = max(big, default=0)
        if N < 2 * K:
            return N, coeffs
        K *= 2


def hankel_matrix(f: CircleFunction, N: int | None = None, grid: GridSpec = DEFAULT_GRID,
                  tol: ToleranceConfig = DEFAULT_TOL) -> HankelTruncation:
    """Block Hankel truncation of order ``N`` (default: the exact order, at least 1)."""
    m, n = f.shape
    if f.is_laurent:
        d = f.negative_degree
        N = max(d, 1) if N is None else int(N)
        if N < 1:
            raise ValueError("N must be >= 1")
        coeffs = fourier_coefficients(f, -2 * N + 1, -1, GridSpec.for_degree(2 * N), tol)
        exact = N >= d
    else:
        order, coeffs = _rational_order(f, grid, tol)
        N = max(order, 1) if N is None else int(N)
        if -2 * N + 1 < min(coeffs, default=0):
            g = fine_grid(f, -2 * N + 1, -1, grid, tol)
            coeffs = fourier_coefficients(f, -2 * N + 1, -1, g, tol)
        exact = N >= order
    mat = np.zeros((N * m, N * n), dtype=complex)
    for i in range(N):
        for j in range(N):
            mat[i * m:(i + 1) * m, j * n:(j + 1) * n] = coeffs[-i - j - 1]
    return HankelTruncation(mat, N, (m, n), exact, f)


def toeplitz_matrix(u: CircleFunction, N: int, grid: GridSpec = DEFAULT_GRID,
                    tol: ToleranceConfig = DEFAULT_TOL) -> ToeplitzTruncation:
    """Scalar Toeplitz truncation with entry ``(i, j) = u^(i - j)``."""
    if u.shape != (1, 1):
        raise ValueError("toeplitz_matrix expects a scalar symbol")
    if N < 1:
        raise ValueError("N must be >= 1")
    g = grid if u.is_laurent else fine_grid(u, -(N - 1), N - 1, grid, tol)
    if g.samples < 4 * N:
        g = GridSpec.for_degree(2 * N, minimum=g.samples)
    coeffs = fourier_coefficients(u, -(N - 1), N - 1, g, tol)
    i, j = np.indices((N, N))
    vals = np.array([coeffs[k][0, 0] for k in range(-(N - 1), N)])
    return ToeplitzTruncation(vals[(i - j) + N - 1], N, u)


def singular_values(H: HankelTruncation | np.ndarray) -> np.ndarray:
    mat = H.matrix if isinstance(H, HankelTruncation) else np.asarray(H)
    if mat.size == 0:
        return np.zeros(0)
    return np.linalg.svd(mat, compute_uv=False)


def hankel_norm(f: CircleFunction, N: int | None = None, grid: GridSpec = DEFAULT_GRID,
                tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Largest singular value of the truncation.

    Exact when the truncation is complete; otherwise a lower bound and a
    :class:`TruncationWarning` is emitted.
    """
    if 0 in f.shape or (f.is_laurent and f.negative_degree == 0 and N is None):
        return 0.0
    H = hankel_matrix(f, N, grid, tol)
    if not H.exact:
        warnings.warn(f"truncation N={H.N} is incomplete; norm is a lower bound", TruncationWarning,
                      stacklevel=2)
    s = singular_values(H)
    return float(s[0]) if s.size else 0.0


def _count_at_level(s: np.ndarray, t: float, tol: ToleranceConfig) -> tuple[int, float]:
    band = tol.sv_tol * t
    hit = np.abs(s - t) <= band
    guard = (s > t * (1 - 10 * tol.sv_tol)) & (s < t * (1 - tol.sv_tol))
    if np.any(guard):
        bad = s[guard]
        raise AmbiguousSpectrum(
            f"singular value {bad[0]:.12g} lies in the guard annulus below level {t:.12g}")
    rest = s[~hit]
    gap = float(np.min(np.abs(rest - t)) / t) if rest.size else math.inf
    return int(np.count_nonzero(hit)), gap


def _dim_entry(f: CircleFunction, t: float, kappa: int, grid: GridSpec, tol: ToleranceConfig) -> DimEntry:
    g = f.shift(kappa)
    if g.is_laurent and g.negative_degree == 0:
        return DimEntry(kappa, 0, 1.0)
    H = hankel_matrix(g, None, grid, tol)
    D, gap = _count_at_level(singular_values(H), t, tol)
    return DimEntry(kappa, D, gap)


def maximizing_dim(f: CircleFunction, t: float, kappa: int, grid: GridSpec = DEFAULT_GRID,
                   tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Dimension of ``{x : ||H_{z^kappa f} x|| = t ||x||}`` from the exact truncation."""
    if not f.is_laurent:
        raise UnsupportedRepresentation("maximizing_dim needs a Laurent symbol for an exact truncation")
    if t <= 0:
        raise ValueError("level t must be positive")
    if kappa < 0:
        raise ValueError("kappa must be nonnegative")
    return _dim_entry(f, t, kappa, grid, tol).D


def dim_table(f: CircleFunction, t: float, kappa_max: int | None = None, grid: GridSpec = DEFAULT_GRID,
              tol: ToleranceConfig = DEFAULT_TOL) -> MaximizingDimTable:
    """``D(kappa)`` for ``kappa = 0..kappa_max``; by default up to the first zero."""
    if not f.is_laurent:
        raise UnsupportedRepresentation("dim_table needs a Laurent symbol")
    if t <= 0:
        raise ValueError("level t must be positive")
    entries = []
    stop = kappa_max if kappa_max is not None else f.negative_degree
    for kappa in range(stop + 1):
        e = _dim_entry(f, t, kappa, grid, tol)
        entries.append(e)
        if kappa_max is None and e.D == 0:
            break
    return MaximizingDimTable(float(t), tuple(entries))


def iota(f: CircleFunction, grid: GridSpec = DEFAULT_GRID, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Smallest ``j >= 0`` with ``||H_{z^j f}|| < ||H_f||``.

    A vanishing Hankel operator gives 0 together with a :class:`ZeroHankelWarning`.
    """
    if not f.is_laurent:
        raise UnsupportedRepresentation("iota needs a Laurent symbol")
    t0 = hankel_norm(f, None, grid, tol)
    if t0 <= tol.coeff_tol:
        warnings.warn("Hankel operator vanishes; iota defaults to 0", ZeroHankelWarning, stacklevel=2)
        return 0
    for j in range(1, f.negative_degree + 1):
        nj = hankel_norm(f.shift(j), None, grid, tol)
        if nj < t0 * (1 - 10 * tol.sv_tol):
            return j
        if nj < t0 * (1 - tol.sv_tol):
            raise AmbiguousSpectrum(f"||H_(z^{j} f)|| = {nj:.12g} is inside the guard annulus below {t0:.12g}")
    return f.negative_degree


def essential_norm_bound(f: CircleFunction) -> tuple[float, str]:
    """Essential norm of the Hankel operator: 0 for every representable symbol."""
    return 0.0, HARTMAN_CERTIFICATE

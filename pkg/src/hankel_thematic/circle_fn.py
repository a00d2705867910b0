"""Matrix functions on the unit circle.

A :class:`CircleFunction` is either a matrix Laurent polynomial
``sum_k C_k z**k`` or a quotient of such a polynomial by a scalar Laurent
polynomial ``q`` without zeros on the circle.  Only values on ``|z| = 1``
matter, so conjugation maps ``c z**k`` to ``conj(c) z**-k``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .config import DEFAULT_GRID, DEFAULT_TOL, GridSpec, ToleranceConfig
from .errors import (
    DenominatorNearZero,
    GridTooCoarse,
    NonIntegerWinding,
    NonUnitArgument,
    NotBoundedAwayFromZero,
    NotUnimodular,
    ShapeMismatch,
    UnsupportedRepresentation,
)

DENOMINATOR_FLOOR = 1e-9
WINDING_MARGIN = 0.5
WINDING_SNAP = 0.01


# -- Laurent polynomial helpers (dict power -> coefficient) -----------------

def _lp_mul(a: Mapping[int, np.ndarray], b: Mapping[int, np.ndarray]) -> dict:
    out: dict[int, np.ndarray] = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            prod = ca @ cb if np.ndim(ca) == 2 and np.ndim(cb) == 2 else ca * cb
            k = ka + kb
            out[k] = out[k] + prod if k in out else prod
    return out


def _lp_add(a: Mapping, b: Mapping, sign: float = 1.0) -> dict:
    out = dict(a)
    for k, c in b.items():
        out[k] = out[k] + sign * c if k in out else sign * c
    return out


def _lp_scale(a: Mapping, s) -> dict:
    return {k: s * c for k, c in a.items()}


def _lp_conj(a: Mapping) -> dict:
    return {-k: np.conj(c) for k, c in a.items()}


def _prune(a: Mapping) -> dict:
    return {k: c for k, c in a.items() if np.any(c != 0)}


def _lp_eval(a: Mapping, z: np.ndarray) -> np.ndarray:
    """Evaluate at an array of points; matrix coefficients give shape (M, r, c)."""
    z = np.asarray(z, dtype=complex)
    if not a:
        return None
    powers = np.array(sorted(a), dtype=float)
    stack = np.stack([np.asarray(a[int(k)], dtype=complex) for k in powers])
    zk = z[..., None] ** powers
    if stack.ndim == 1:
        return zk @ stack
    return np.tensordot(zk, stack, axes=([-1], [0]))


def _same_den(a, b) -> bool:
    if a is None or b is None:
        return a is None and b is None
    if a.keys() != b.keys():
        return False
    return all(a[k] == b[k] for k in a)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a grid-based predicate.

    Truthiness follows ``ok``; ``deviation`` is the worst sampled violation and
    ``reason`` names the failed condition (``None`` when ``ok``).
    """

    ok: bool
    deviation: float = 0.0
    reason: str | None = None
    detail: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return bool(self.ok)


class CircleFunction:
    """Matrix-valued function on the unit circle.

    Parameters
    ----------
    terms : mapping of int to array_like
        Laurent coefficients ``power -> (rows, cols)`` matrix of the numerator.
    shape : (int, int), optional
        Needed when ``terms`` is empty.
    denominator : mapping of int to complex, optional
        Scalar Laurent polynomial ``q``; makes the function rational.
    """

    def __init__(self, terms: Mapping[int, object], shape: tuple[int, int] | None = None,
                 denominator: Mapping[int, complex] | None = None):
        num: dict[int, np.ndarray] = {}
        for k, c in terms.items():
            if int(k) != k:
                raise ValueError(f"power {k!r} is not an integer")
            arr = np.array(c, dtype=complex)
            if arr.ndim == 0:
                arr = arr.reshape(1, 1)
            if arr.ndim != 2:
                raise ShapeMismatch("coefficients must be 2-D matrices")
            if int(k) in num:
                raise ValueError(f"duplicate power {k}")
            num[int(k)] = arr
        if shape is None:
            if not num:
                raise ValueError("shape is required for an empty term list")
            shape = next(iter(num.values())).shape
        rows, cols = (int(s) for s in shape)
        if rows < 0 or cols < 0:
            raise ShapeMismatch("negative dimension")
        for k, c in num.items():
            if c.shape != (rows, cols):
                raise ShapeMismatch(f"coefficient of z^{k} has shape {c.shape}, expected {(rows, cols)}")
        for c in num.values():
            c.setflags(write=False)
        self.rows = rows
        self.cols = cols
        self._num = _prune(num)
        self._den = None
        if denominator is not None:
            den = _prune({int(k): complex(v) for k, v in denominator.items()})
            if not den:
                raise DenominatorNearZero("denominator is identically zero")
            if len(den) == 1 and den.get(0, None) == 1:
                den = None
            self._den = den
            if den is not None:
                qmin = float(np.min(np.abs(_lp_eval(den, DEFAULT_GRID.points))))
                if qmin <= DENOMINATOR_FLOOR:
                    raise DenominatorNearZero(f"denominator nearly vanishes on the circle (min {qmin:.2e})")

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, matrix) -> "CircleFunction":
        m = np.atleast_2d(np.asarray(matrix, dtype=complex))
        return cls({0: m})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "CircleFunction":
        return cls({}, shape=(rows, cols))

    @classmethod
    def identity(cls, n: int) -> "CircleFunction":
        return cls({0: np.eye(n)}, shape=(n, n))

    @classmethod
    def monomial(cls, power: int, scale: complex = 1.0) -> "CircleFunction":
        """Scalar ``scale * z**power``."""
        return cls({power: [[scale]]})

    @classmethod
    def scalar(cls, coeffs: Mapping[int, complex], denominator: Mapping[int, complex] | None = None):
        return cls({k: [[v]] for k, v in coeffs.items()}, shape=(1, 1), denominator=denominator)

    @classmethod
    def blaschke(cls, a: complex) -> "CircleFunction":
        """Scalar Blaschke factor ``(z - a) / (1 - conj(a) z)`` with ``|a| < 1``."""
        if abs(a) >= 1:
            raise ValueError("Blaschke zero must lie in the open disk")
        return cls.scalar({1: 1.0, 0: -a}, denominator={0: 1.0, 1: -np.conj(a)})

    @classmethod
    def diag(cls, entries: Sequence["CircleFunction"]) -> "CircleFunction":
        return block_diag(*[as_circle(e) for e in entries])

    # -- structure ----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_laurent(self) -> bool:
        return self._den is None

    @property
    def kind(self) -> str:
        return "laurent" if self._den is None else "rational"

    @property
    def terms(self) -> dict[int, np.ndarray]:
        """Numerator coefficients (a copy of the mapping; arrays are read-only)."""
        return dict(self._num)

    @property
    def denominator(self) -> dict[int, complex] | None:
        return None if self._den is None else dict(self._den)

    @property
    def min_power(self) -> int:
        return min(self._num) if self._num else 0

    @property
    def max_power(self) -> int:
        return max(self._num) if self._num else 0

    @property
    def negative_degree(self) -> int:
        """Largest ``d`` with a nonzero coefficient at ``z**-d`` (laurent only; 0 if analytic)."""
        self._require_laurent("negative_degree")
        return max(0, -self.min_power)

    @property
    def is_zero(self) -> bool:
        return not self._num

    def coefficient(self, power: int) -> np.ndarray:
        self._require_laurent("coefficient")
        c = self._num.get(int(power))
        return np.zeros(self.shape, dtype=complex) if c is None else c.copy()

    def _require_laurent(self, what: str):
        if self._den is not None:
            raise UnsupportedRepresentation(f"{what} needs a Laurent polynomial, got a rational function")

    def chop(self, tol: float = 1e-14) -> "CircleFunction":
        """Drop terms whose coefficient norm is below ``tol``."""
        num = {k: c for k, c in self._num.items() if np.max(np.abs(c), initial=0.0) > tol}
        return CircleFunction(num, self.shape, self._den)

    # -- evaluation ---------------------------------------------------------

    def __call__(self, zeta: complex, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
        return evaluate(self, zeta, tol)

    def sample(self, grid: GridSpec = DEFAULT_GRID) -> np.ndarray:
        """Values on the grid, shape ``(M, rows, cols)``."""
        return self.sample_at(grid.points)

    def sample_at(self, z: np.ndarray) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        vals = _lp_eval(self._num, z) if self._num else np.zeros(z.shape + self.shape, dtype=complex)
        if self._den is not None:
            q = _lp_eval(self._den, z)
            qmin = float(np.min(np.abs(q)))
            if qmin < DENOMINATOR_FLOOR:
                raise DenominatorNearZero(f"|q| = {qmin:.2e} on the sample set")
            vals = vals / q[..., None, None]
        return vals

    # -- algebra ------------------------------------------------------------

    def adjoint(self) -> "CircleFunction":
        num = {-k: c.conj().T for k, c in self._num.items()}
        den = None if self._den is None else _lp_conj(self._den)
        return CircleFunction(num, (self.cols, self.rows), den)

    @property
    def H(self) -> "CircleFunction":
        return self.adjoint()

    def transpose(self) -> "CircleFunction":
        num = {k: c.T for k, c in self._num.items()}
        return CircleFunction(num, (self.cols, self.rows), self._den)

    @property
    def T(self) -> "CircleFunction":
        return self.transpose()

    def conj(self) -> "CircleFunction":
        """Entrywise complex conjugate on the circle."""
        num = {-k: c.conj() for k, c in self._num.items()}
        den = None if self._den is None else _lp_conj(self._den)
        return CircleFunction(num, self.shape, den)

    def shift(self, k: int) -> "CircleFunction":
        """Multiply by ``z**k``."""
        num = {p + int(k): c for p, c in self._num.items()}
        return CircleFunction(num, self.shape, self._den)

    def __matmul__(self, other) -> "CircleFunction":
        return multiply(self, as_circle(other))

    def __rmatmul__(self, other) -> "CircleFunction":
        return multiply(as_circle(other), self)

    def __mul__(self, other) -> "CircleFunction":
        if isinstance(other, CircleFunction):
            if other.shape == (1, 1):
                return _scalar_times(other, self)
            if self.shape == (1, 1):
                return _scalar_times(self, other)
            raise ShapeMismatch("'*' needs a scalar operand; use '@' for matrix products")
        s = complex(other)
        return CircleFunction(_lp_scale(self._num, s), self.shape, self._den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "CircleFunction":
        return self * (1.0 / complex(other))

    def __neg__(self) -> "CircleFunction":
        return self * -1.0

    def __add__(self, other) -> "CircleFunction":
        other = as_circle(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot add {self.shape} and {other.shape}")
        if _same_den(self._den, other._den):
            return CircleFunction(_lp_add(self._num, other._num), self.shape, self._den)
        (a_num, b_num), den = _over_common([self, other])
        return CircleFunction(_lp_add(a_num, b_num), self.shape, den)

    __radd__ = __add__

    def __sub__(self, other) -> "CircleFunction":
        return self + (-as_circle(other))

    def __rsub__(self, other) -> "CircleFunction":
        return as_circle(other) + (-self)

    def __getitem__(self, key) -> "CircleFunction":
        if not isinstance(key, tuple) or len(key) != 2:
            raise IndexError("index with [rows, cols]")
        probe = np.empty(self.shape)[key]
        if probe.ndim != 2:
            raise IndexError("use slices or index lists so the result stays 2-D")
        num = {k: c[key] for k, c in self._num.items()}
        return CircleFunction(num, probe.shape, self._den)

    def __repr__(self) -> str:
        kind = self.kind
        return f"CircleFunction({self.rows}x{self.cols}, {kind}, powers={sorted(self._num)})"

    def allclose(self, other: "CircleFunction", grid: GridSpec = DEFAULT_GRID, atol: float = 1e-9) -> bool:
        return max_deviation(self, other, grid) <= atol


def as_circle(obj) -> CircleFunction:
    if isinstance(obj, CircleFunction):
        return obj
    return CircleFunction.constant(obj)


def _scalar_times(s: CircleFunction, f: CircleFunction) -> CircleFunction:
    num = {}
    for ks, cs in s._num.items():
        for kf, cf in f._num.items():
            k = ks + kf
            num[k] = num[k] + cs[0, 0] * cf if k in num else cs[0, 0] * cf
    den = _den_product(s._den, f._den)
    return CircleFunction(_prune(num), f.shape, den)


def _den_product(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return _lp_mul(a, b)


def _over_common(fs: Sequence[CircleFunction]):
    """Rewrite all functions over one denominator; returns (numerators, den)."""
    dens = []
    for f in fs:
        if f._den is not None and not any(_same_den(f._den, d) for d in dens):
            dens.append(f._den)
    if not dens:
        return [f._num for f in fs], None
    total = dens[0]
    for d in dens[1:]:
        total = _lp_mul(total, d)
    nums = []
    for f in fs:
        cof = {0: 1.0 + 0j}
        skipped = False
        for d in dens:
            if not skipped and f._den is not None and _same_den(f._den, d):
                skipped = True
                continue
            cof = _lp_mul(cof, d)
        nums.append(_lp_mul(f._num, {k: np.asarray(v) for k, v in cof.items()}))
    return nums, total


# -- block assembly ---------------------------------------------------------

def bmat(blocks: Sequence[Sequence[CircleFunction]]) -> CircleFunction:
    """Assemble a block matrix; block rows/cols must agree in height/width."""
    blocks = [[as_circle(b) for b in row] for row in blocks]
    heights = [row[0].rows for row in blocks]
    widths = [b.cols for b in blocks[0]]
    for i, row in enumerate(blocks):
        if len(row) != len(widths):
            raise ShapeMismatch("ragged block structure")
        for j, b in enumerate(row):
            if b.shape != (heights[i], widths[j]):
                raise ShapeMismatch(f"block ({i},{j}) has shape {b.shape}, expected {(heights[i], widths[j])}")
    flat = [b for row in blocks for b in row]
    nums, den = _over_common(flat)
    R, C = sum(heights), sum(widths)
    powers = set().union(*[set(n) for n in nums]) if nums else set()
    out = {}
    for k in powers:
        M = np.zeros((R, C), dtype=complex)
        idx = 0
        r0 = 0
        for i, h in enumerate(heights):
            c0 = 0
            for j, w in enumerate(widths):
                c = nums[idx].get(k)
                if c is not None:
                    M[r0:r0 + h, c0:c0 + w] = c
                idx += 1
                c0 += w
            r0 += h
        out[k] = M
    return CircleFunction(_prune(out), (R, C), den)


def hstack(fs: Sequence[CircleFunction]) -> CircleFunction:
    return bmat([list(fs)])


def vstack(fs: Sequence[CircleFunction]) -> CircleFunction:
    return bmat([[f] for f in fs])


def block_diag(*fs: CircleFunction) -> CircleFunction:
    fs = [as_circle(f) for f in fs]
    rows = []
    for i, fi in enumerate(fs):
        rows.append([fi if i == j else CircleFunction.zeros(fi.rows, fj.cols) for j, fj in enumerate(fs)])
    return bmat(rows)


# -- operations -------------------------------------------------------------

def evaluate(f: CircleFunction, zeta: complex, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    zeta = complex(zeta)
    if abs(abs(zeta) - 1.0) > tol.eq_tol:
        raise NonUnitArgument(f"|zeta| = {abs(zeta)!r} is not 1")
    return f.sample_at(np.array([zeta]))[0]


def multiply(f: CircleFunction, g: CircleFunction) -> CircleFunction:
    """Pointwise matrix product ``f(z) g(z)``."""
    if f.cols != g.rows:
        raise ShapeMismatch(f"cannot multiply {f.shape} by {g.shape}")
    num = _prune(_lp_mul(f._num, g._num))
    return CircleFunction(num, (f.rows, g.cols), _den_product(f._den, g._den))


def adjoint(f: CircleFunction) -> CircleFunction:
    return f.adjoint()


def max_deviation(f: CircleFunction, g: CircleFunction, grid: GridSpec = DEFAULT_GRID) -> float:
    """Max over the grid of the spectral norm of ``f - g``."""
    if f.shape != g.shape:
        raise ShapeMismatch(f"{f.shape} vs {g.shape}")
    if 0 in f.shape:
        return 0.0
    return float(np.max(np.linalg.norm(f.sample(grid) - g.sample(grid), ord=2, axis=(1, 2))))


def sup_norm(f: CircleFunction, grid: GridSpec = DEFAULT_GRID) -> float:
    """Sampled ``L-infinity`` norm (max pointwise spectral norm)."""
    if 0 in f.shape:
        return 0.0
    return float(np.max(np.linalg.norm(f.sample(grid), ord=2, axis=(1, 2))))


def dft_coefficients(samples: np.ndarray, grid: GridSpec, k_min: int, k_max: int) -> dict[int, np.ndarray]:
    """Fourier coefficients ``k_min..k_max`` of grid samples (shape ``(M, ...)``)."""
    M = grid.samples
    spec = np.fft.fft(samples, axis=0) / M
    out = {}
    for k in range(k_min, k_max + 1):
        out[k] = spec[k % M] * np.exp(-1j * k * grid.offset)
    return out


def _denominator_decay(den: Mapping[int, complex]) -> float:
    """Geometric decay ratio of the Laurent coefficients of ``1/q`` on the circle."""
    lo, hi = min(den), max(den)
    poly = np.array([den.get(k, 0) for k in range(hi, lo - 1, -1)], dtype=complex)
    if len(poly) <= 1:
        return 0.0
    roots = np.roots(poly)
    mods = np.abs(roots)
    mods = mods[mods > 0]
    if mods.size == 0:
        return 0.0
    return float(np.max(np.minimum(mods, 1.0 / mods)))


def aliasing_bound(f: CircleFunction, k_min: int, k_max: int, grid: GridSpec) -> float:
    """Estimated aliasing error of DFT coefficients ``k_min..k_max`` for a rational ``f``.

    Coefficients decay like ``rho**|k|`` away from the numerator support, with
    ``rho`` the largest of ``min(|r|, 1/|r|)`` over denominator roots ``r``.
    """
    if f.is_laurent:
        return 0.0
    rho = _denominator_decay(f._den)
    if rho == 0.0:
        return 0.0
    amp = sup_norm(f, grid) * (1 + rho) / (1 - rho)
    reach = max(abs(k_min), abs(k_max)) + (f.max_power - f.min_power) + (max(f._den) - min(f._den))
    gap = grid.samples // 2 - reach
    if gap <= 0:
        return math.inf
    return 2 * amp * rho ** gap / (1 - rho)


def fourier_coefficients(f: CircleFunction, k_min: int, k_max: int, grid: GridSpec = DEFAULT_GRID,
                         tol: ToleranceConfig = DEFAULT_TOL) -> dict[int, np.ndarray]:
    """Fourier coefficients ``f^(k)`` for ``k_min <= k <= k_max``.

    Laurent polynomials are read off exactly; rational functions go through a
    DFT of grid samples, guarded by :func:`aliasing_bound`.
    """
    if k_max < k_min:
        return {}
    if grid.samples < 2 * (k_max - k_min) + 2:
        raise GridTooCoarse(f"M = {grid.samples} too small for range [{k_min}, {k_max}]")
    if f.is_laurent:
        return {k: f.coefficient(k) for k in range(k_min, k_max + 1)}
    bound = aliasing_bound(f, k_min, k_max, grid)
    if bound > tol.coeff_tol:
        raise GridTooCoarse(f"aliasing bound {bound:.2e} exceeds coeff_tol at M = {grid.samples}")
    return dft_coefficients(f.sample(grid), grid, k_min, k_max)


def fine_grid(f: CircleFunction, k_min: int, k_max: int, grid: GridSpec = DEFAULT_GRID,
              tol: ToleranceConfig = DEFAULT_TOL, max_samples: int = 1 << 20) -> GridSpec:
    """Double ``grid`` until :func:`fourier_coefficients` accepts the range."""
    M = grid.samples
    while M <= max_samples:
        g = GridSpec(M)
        if M >= 2 * (k_max - k_min) + 2 and aliasing_bound(f, k_min, k_max, g) <= tol.coeff_tol:
            return g
        M *= 2
    raise GridTooCoarse(f"no grid up to {max_samples} samples resolves [{k_min}, {k_max}]")


def negative_coefficient_norm(f: CircleFunction, grid: GridSpec = DEFAULT_GRID,
                              tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Largest norm among coefficients with negative power."""
    if 0 in f.shape:
        return 0.0
    if f.is_laurent:
        neg = [np.linalg.norm(c, 2) for k, c in f._num.items() if k < 0]
        return float(max(neg, default=0.0))
    K = grid.samples // 4
    g = fine_grid(f, -K, -1, grid, tol)
    coeffs = fourier_coefficients(f, -K, -1, g, tol)
    return float(max(np.linalg.norm(c, 2) for c in coeffs.values()))


# -- predicates ---------------------------------------------------------------

def is_unitary_valued(f: CircleFunction, grid: GridSpec = DEFAULT_GRID,
                      tol: ToleranceConfig = DEFAULT_TOL) -> CheckResult:
    if f.rows != f.cols:
        raise ShapeMismatch(f"unitarity needs a square function, got {f.shape}")
    if f.rows == 0:
        return CheckResult(True)
    vals = f.sample(grid)
    gram = np.conj(np.swapaxes(vals, 1, 2)) @ vals
    dev = float(np.max(np.linalg.norm(gram - np.eye(f.cols), ord=2, axis=(1, 2))))
    ok = dev <= tol.eq_tol
    return CheckResult(ok, dev, None if ok else "NotUnitary")


def is_isometric(f: CircleFunction, grid: GridSpec = DEFAULT_GRID,
                 tol: ToleranceConfig = DEFAULT_TOL) -> CheckResult:
    if f.cols == 0:
        return CheckResult(True)
    vals = f.sample(grid)
    gram = np.conj(np.swapaxes(vals, 1, 2)) @ vals
    dev = float(np.max(np.linalg.norm(gram - np.eye(f.cols), ord=2, axis=(1, 2))))
    ok = dev <= tol.eq_tol
    return CheckResult(ok, dev, None if ok else "NotIsometric")


def is_inner(f: CircleFunction, grid: GridSpec = DEFAULT_GRID, tol: ToleranceConfig = DEFAULT_TOL) -> CheckResult:
    """Analytic and isometric-valued (``f* f = I``) on the grid."""
    neg = negative_coefficient_norm(f, grid, tol)
    if neg > tol.coeff_tol:
        return CheckResult(False, neg, "NotAnalytic")
    iso = is_isometric(f, grid, tol)
    if not iso:
        return CheckResult(False, iso.deviation, "NotIsometric")
    return CheckResult(True, iso.deviation)


def _trim_poly(coeffs: np.ndarray, floor: float) -> tuple[np.ndarray, int]:
    """Split ascending coefficients into (trimmed poly, multiplicity of the root 0)."""
    nz = np.nonzero(np.abs(coeffs) > floor)[0]
    if nz.size == 0:
        return np.zeros(0, dtype=complex), 0
    return coeffs[nz[0]:nz[-1] + 1], int(nz[0])


def polynomial_minors(f: CircleFunction, size: int, row_sets: Iterable[Sequence[int]] | None = None,
                      col_sets: Iterable[Sequence[int]] | None = None) -> list[dict[int, complex]]:
    """Laurent coefficients of ``size x size`` minors of a Laurent polynomial matrix.

    Determinants are sampled on a grid wide enough for their degree span and
    interpolated back by DFT, so the coefficients are exact to round-off.
    """
    f._require_laurent("polynomial_minors")
    if row_sets is None:
        row_sets = itertools.combinations(range(f.rows), size)
    if col_sets is None:
        col_sets = list(itertools.combinations(range(f.cols), size))
    lo_rows = np.zeros(f.rows, dtype=int)
    hi_rows = np.zeros(f.rows, dtype=int)
    for i in range(f.rows):
        ks = [k for k, c in f._num.items() if np.any(c[i] != 0)]
        lo_rows[i], hi_rows[i] = (min(ks), max(ks)) if ks else (0, 0)
    pairs = [(tuple(r), tuple(c)) for r in row_sets for c in col_sets]
    if not pairs:
        return []
    span_lo = min(int(lo_rows[list(r)].sum()) for r, _ in pairs)
    span_hi = max(int(hi_rows[list(r)].sum()) for r, _ in pairs)
    grid = GridSpec.for_degree(span_hi - span_lo, minimum=8)
    vals = f.sample(grid)
    out = []
    for r, c in pairs:
        sub = vals[:, list(r)][:, :, list(c)]
        dets = np.linalg.det(sub) if size else np.ones(grid.samples, dtype=complex)
        coeffs = dft_coefficients(dets, grid, span_lo, span_hi)
        out.append({k: complex(v) for k, v in coeffs.items()})
    return out


def _common_root_in_disk(polys: list[dict[int, complex]], tol: ToleranceConfig):
    """Find a shared zero with ``|z| <= 1 + eq_tol`` of polynomials in nonnegative powers.

    Returns ``(root, reason)`` or ``None``.  If every polynomial vanishes the
    reason is ``AllMinorsVanish``.
    """
    trimmed = []
    for p in polys:
        if not p:
            continue
        arr = np.array([p.get(k, 0) for k in range(0, max(p) + 1)], dtype=complex)
        scale = float(np.max(np.abs(arr), initial=0.0))
        body, zero_mult = _trim_poly(arr, max(tol.coeff_tol, 1e-12 * scale))
        if body.size:
            trimmed.append((body, zero_mult))
    if not trimmed:
        return 0j, "AllMinorsVanish"
    if any(body.size == 1 and zm == 0 for body, zm in trimmed):
        return None
    if all(zm > 0 for _, zm in trimmed):
        return 0j, "CommonRootInDisk"
    pivot = min((b for b, zm in trimmed if zm == 0), key=len)
    for r in np.roots(pivot[::-1]):
        if abs(r) > 1 + tol.eq_tol:
            continue
        shared = True
        for body, zm in trimmed:
            val = abs(np.polyval(body[::-1], r)) * abs(r) ** zm
            scale = np.sum(np.abs(body)) * max(1.0, abs(r)) ** (body.size - 1 + zm)
            if val > 1e-6 * scale:
                shared = False
                break
        if shared:
            reason = "BoundaryRoot" if abs(abs(r) - 1) <= tol.eq_tol else "CommonRootInDisk"
            return complex(r), reason
    return None


def is_co_outer_polynomial(f: CircleFunction, tol: ToleranceConfig = DEFAULT_TOL) -> CheckResult:
    """Co-outer test for a matrix polynomial column or thematic complement.

    The maximal minors of the transpose must have no common zero in the closed
    unit disk.  Boundary zeros count as inside and are reported as
    ``BoundaryRoot``.
    """
    if not f.is_laurent:
        raise UnsupportedRepresentation("co-outer test needs a matrix polynomial, got a rational function")
    if f.min_power < 0:
        raise UnsupportedRepresentation("co-outer test needs nonnegative powers only")
    if f.cols == 0:
        return CheckResult(True)
    if f.cols > f.rows:
        return CheckResult(False, reason="TooWide")
    minors = polynomial_minors(f, f.cols, col_sets=[tuple(range(f.cols))])
    hit = _common_root_in_disk(minors, tol)
    if hit is not None:
        root, reason = hit
        return CheckResult(False, abs(root), reason, {"root": root})
    return CheckResult(True)


def _log_derivative(u: CircleFunction, z: np.ndarray) -> np.ndarray:
    """``z u'(z) / u(z)`` from the coefficients of numerator and denominator."""
    num = {k: c[0, 0] for k, c in u._num.items()}
    out = _lp_eval({k: k * c for k, c in num.items()}, z) / _lp_eval(num, z)
    if u._den is not None:
        out = out - _lp_eval({k: k * c for k, c in u._den.items()}, z) / _lp_eval(u._den, z)
    return out


def winding_number(u: CircleFunction, grid: GridSpec = DEFAULT_GRID) -> int:
    """Winding number of a continuous scalar symbol via phase unwrapping.

    The unwrapped count is cross-checked against the argument-principle
    quadrature ``mean(z u'/u)``; disagreement means the grid is too coarse.
    """
    if u.shape != (1, 1):
        raise ShapeMismatch(f"winding number needs a scalar symbol, got {u.shape}")
    vals = u.sample(grid)[:, 0, 0]
    low = float(np.min(np.abs(vals)))
    if low <= WINDING_MARGIN:
        raise NotBoundedAwayFromZero(f"min |u| = {low:.3g} <= {WINDING_MARGIN}")
    phase = np.unwrap(np.angle(np.append(vals, vals[0])))
    k = int(round((phase[-1] - phase[0]) / (2 * np.pi)))
    raw = float(np.mean(_log_derivative(u, grid.points)).real)
    if abs(raw - k) > WINDING_SNAP:
        raise NonIntegerWinding(f"quadrature winding {raw:.4f} disagrees with unwrapped count {k}; refine the grid")
    return k


def toeplitz_index(u: CircleFunction, grid: GridSpec = DEFAULT_GRID, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Fredholm index of the Toeplitz operator with unimodular symbol ``u``."""
    if u.shape != (1, 1):
        raise ShapeMismatch(f"Toeplitz index needs a scalar symbol, got {u.shape}")
    dev = float(np.max(np.abs(np.abs(u.sample(grid)[:, 0, 0]) - 1.0)))
    if dev > tol.eq_tol:
        raise NotUnimodular(f"| |u| - 1 | reaches {dev:.2e}")
    return -winding_number(u, grid)

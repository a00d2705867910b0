from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ToleranceConfig:
    """Tolerances shared by every grid-based check.

    eq_tol
        relative tolerance for pointwise equalities.
    sv_tol
        relative band for a singular value to count as equal to a level.
    coeff_tol
        absolute floor below which a Fourier coefficient is treated as zero.
    """

    eq_tol: float = 1e-9
    sv_tol: float = 1e-6
    coeff_tol: float = 1e-10

    def __post_init__(self):
        for name in ("eq_tol", "sv_tol", "coeff_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if not self.sv_tol > self.eq_tol:
            raise ValueError("sv_tol must exceed eq_tol")


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid ``exp(i(2*pi*j/M + offset))`` on the unit circle."""

    samples: int = 1024
    offset: float = 0.0

    def __post_init__(self):
        M = self.samples
        if M < 2 or M & (M - 1):
            raise ValueError(f"samples must be a power of two >= 2, got {M}")
        if not 0.0 <= self.offset < 2 * math.pi / M:
            raise ValueError("offset must lie in [0, 2*pi/M)")

    @property
    def angles(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.samples) / self.samples + self.offset

    @property
    def points(self) -> np.ndarray:
        return np.exp(1j * self.angles)

    @classmethod
    def for_degree(cls, degree: int, minimum: int = 1024) -> "GridSpec":
        """Smallest power-of-two grid with ``M >= 2*degree + 2`` (and ``>= minimum``)."""
        need = max(2 * int(degree) + 2, minimum, 2)
        return cls(samples=1 << (need - 1).bit_length())


DEFAULT_TOL = ToleranceConfig()
DEFAULT_GRID = GridSpec()

import numpy as np
import pytest

from hankel_thematic.config import GridSpec, ToleranceConfig


def test_defaults():
    tol = ToleranceConfig()
    assert (tol.eq_tol, tol.sv_tol, tol.coeff_tol) == (1e-9, 1e-6, 1e-10)
    assert GridSpec().samples == 1024


@pytest.mark.parametrize("kw", [dict(eq_tol=0), dict(sv_tol=-1), dict(coeff_tol=0), dict(eq_tol=1e-5, sv_tol=1e-6)])
def test_bad_tolerances(kw):
    with pytest.raises(ValueError):
        ToleranceConfig(**kw)


@pytest.mark.parametrize("m", [0, 3, 1000])
def test_samples_power_of_two(m):
    with pytest.raises(ValueError):
        GridSpec(samples=m)


def test_offset_range():
    with pytest.raises(ValueError):
        GridSpec(samples=8, offset=2 * np.pi / 8)
    g = GridSpec(samples=8, offset=0.1)
    assert np.allclose(np.abs(g.points), 1)
    assert np.isclose(g.angles[1] - g.angles[0], 2 * np.pi / 8)


def test_for_degree():
    assert GridSpec.for_degree(3).samples == 1024
    g = GridSpec.for_degree(1000)
    assert g.samples >= 2002 and g.samples & (g.samples - 1) == 0

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gljunction.geometry import (
    BoundaryCoords,
    DiskInDisk,
    OutOfTube,
    boundary_map,
    curvature,
    grad_norm_check,
    jacobian,
    signed_distance,
    total_curvature,
    tube_mask,
)


def test_signed_distance_examples():
    g = DiskInDisk(1.0, 2.0)
    assert signed_distance((0.0, 0.0), g) == 1.0
    assert signed_distance((math.cos(0.3), math.sin(0.3)), g) == pytest.approx(0.0, abs=1e-15)
    assert signed_distance((1.5, 0.0), g) == -0.5


def test_invalid_geometry():
    with pytest.raises(ValueError):
        DiskInDisk(2.0, 1.0)


def test_curvature_of_circle():
    g = DiskInDisk(2.0, 3.0)
    assert np.all(curvature(np.linspace(0, 4 * math.pi, 7), g) == 0.5)
    assert total_curvature(g) == pytest.approx(2 * math.pi, rel=1e-14)
    assert DiskInDisk(1.0, 2.0).interface_length == pytest.approx(2 * math.pi)


def test_boundary_map_examples():
    g = DiskInDisk(1.0, 2.0)
    np.testing.assert_allclose(boundary_map(0.0, 0.0, g), [1.0, 0.0], atol=1e-15)
    assert jacobian(0.3, 0.25, g) == pytest.approx(0.75)
    with pytest.raises(OutOfTube):
        BoundaryCoords(g, 0.5).boundary_map(0.0, 0.5)


@given(s=st.floats(-20, 20), frac=st.floats(-0.99, 0.99), R1=st.floats(0.2, 5.0))
def test_boundary_map_round_trip(s, frac, R1):
    g = DiskInDisk(R1, 2 * R1)
    bc = BoundaryCoords(g, 0.5 * R1)
    t = frac * bc.t0
    x = bc.boundary_map(s, t)
    assert signed_distance(x, g) == pytest.approx(t, abs=1e-12)
    assert bc.jacobian(s, t) > 0


def test_tube_mask():
    g = DiskInDisk(1.0, 2.0)
    r = np.linspace(0.0, 2.0, 201)
    assert tube_mask(r, 0.0, g).size == 0
    inner_all = tube_mask(r, 1.0 + 1e-12, g)
    assert set(np.flatnonzero(r <= 1.0)) <= set(inner_all)
    sel = tube_mask(r, 0.1, g)
    np.testing.assert_array_equal(sel, np.flatnonzero(np.abs(r - 1.0) < 0.1))


def test_gradient_of_distance_is_unit():
    g = DiskInDisk(1.0, 2.0)
    errs = [grad_norm_check(g, h) for h in (0.05, 0.025)]
    assert errs[0] < 1e-2
    assert errs[1] < errs[0] / 3  # second order

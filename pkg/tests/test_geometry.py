import numpy as np
import pytest

from specmimo.exceptions import GeometryError
from specmimo.geometry import (ArraySpec, equivalent_distance,
                               incidence_angle, mirror, projected_tilts,
                               validate_placement)


def test_ula_positions_centered():
    p = ArraySpec(4, 0.1, centroid=(1.0, 2.0, 3.0)).positions()
    np.testing.assert_allclose(p.mean(axis=0), [1, 2, 3])
    np.testing.assert_allclose(np.diff(p[:, 0]), 0.1)
    assert ArraySpec(4, 0.1).aperture == pytest.approx(0.4)


def test_ula_tilt_direction():
    p = ArraySpec(3, 1.0, tilt=np.pi / 6).positions()
    d = p[1] - p[0]
    np.testing.assert_allclose(d, [np.cos(np.pi / 6), 0, np.sin(np.pi / 6)])


@pytest.mark.parametrize("kw", [dict(n_antennas=0, spacing=1.0),
                                dict(n_antennas=2, spacing=0.0)])
def test_array_validation(kw):
    with pytest.raises(GeometryError):
        ArraySpec(**kw)


def test_incidence_angle():
    assert incidence_angle((0, 0, 10), 15) == 0.0
    assert np.rad2deg(incidence_angle((100, 0, 10), 15)) == pytest.approx(
        78.69, abs=5e-3)


def test_equivalent_distance_is_image_path():
    r0 = np.array([3.0, 4.0, 7.0])
    theta = incidence_angle(r0, 12.0)
    image = np.array([0, 0, 24.0])
    assert equivalent_distance(theta, 12.0, r0[2]) == pytest.approx(
        np.linalg.norm(r0 - image))
    assert equivalent_distance(0.0, 15, 10) == 20


def test_projected_tilts():
    t = projected_tilts((1, 4, 10), 15)
    assert np.rad2deg(t.los) == pytest.approx(5.3, abs=0.05)
    assert np.rad2deg(t.reflected) == pytest.approx(2.8, abs=0.05)
    assert projected_tilts((0, 0, 5), 15) == (0.0, 0.0)


def test_mirror_involution():
    p = np.random.default_rng(0).normal(size=(5, 3))
    np.testing.assert_allclose(mirror(mirror(p, 4.0), 4.0), p)
    assert mirror(p, 4.0)[0, 2] == pytest.approx(8 - p[0, 2])


@pytest.mark.parametrize("r0", [(0, 0, 0), (0, 0, 16), (0, 0, -1)])
def test_receiver_outside_half_space(r0):
    with pytest.raises(GeometryError):
        incidence_angle(r0, 15)


def test_validate_placement():
    tx = np.zeros((1, 3))
    validate_placement(tx, np.array([[0, 0, 9.0]]), 10.0, 0.5)
    with pytest.raises(GeometryError, match="receive"):
        validate_placement(tx, np.array([[0, 0, 9.8]]), 10.0, 0.5)

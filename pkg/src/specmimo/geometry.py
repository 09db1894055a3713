"""Uniform linear arrays and the angles/distances of a single-bounce link.

The transmit array is centred at the origin and the reflecting surface is
the plane ``z = D0``.  The image of the transmitter therefore sits at
``(0, 0, 2 D0)``.  All angles are radians.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .exceptions import GeometryError


@dataclass(frozen=True)
class ArraySpec:
    """A uniform linear array rotated by ``tilt`` in the xz-plane.

    Parameters
    ----------
    n_antennas : int
    spacing : float
        Inter-element distance in metres.
    tilt : float
        Angle to the x-axis, radians; positive tilts raise the +x end
        towards +z.
    centroid : tuple of float
        Array centre (x, y, z) in metres.
    """

    n_antennas: int
    spacing: float
    tilt: float = 0.0
    centroid: tuple = field(default=(0.0, 0.0, 0.0))

    def __post_init__(self):
        if int(self.n_antennas) != self.n_antennas or self.n_antennas < 1:
            raise GeometryError("n_antennas must be a positive integer")
        if not self.spacing > 0:
            raise GeometryError("spacing must be positive")
        c = tuple(float(v) for v in self.centroid)
        if len(c) != 3:
            raise GeometryError("centroid must have three coordinates")
        object.__setattr__(self, "centroid", c)
        object.__setattr__(self, "n_antennas", int(self.n_antennas))

    @property
    def aperture(self):
        return self.n_antennas * self.spacing

    def positions(self):
        return ula_positions(self)


def ula_positions(spec):
    """Antenna coordinates of ``spec`` as an ``(n, 3)`` array."""
    offsets = (np.arange(spec.n_antennas) - (spec.n_antennas - 1) / 2.0)
    offsets = offsets * spec.spacing
    direction = np.array([np.cos(spec.tilt), 0.0, np.sin(spec.tilt)])
    return np.asarray(spec.centroid) + offsets[:, None] * direction[None, :]


def _check_receiver(r0, D0):
    r0 = np.asarray(r0, dtype=float)
    if r0.shape != (3,):
        raise GeometryError("receiver centroid must be a 3-vector")
    if not 0.0 < r0[2] <= D0:
        raise GeometryError(
            f"receiver height r0z={r0[2]:g} m must satisfy 0 < r0z <= D0={D0:g} m")
    return r0


def incidence_angle(r0, D0):
    """Angle between the surface normal and the image-to-receiver path."""
    r0 = _check_receiver(r0, D0)
    D2 = float(r0 @ r0)
    num = 2.0 * D0 - r0[2]
    return float(np.arccos(num / np.sqrt(D2 + 4.0 * D0 * (D0 - r0[2]))))


def equivalent_distance(theta0, D0, r0z):
    """Length of the image path, ``(2 D0 - r0z) / cos(theta0)``."""
    if not 0.0 <= theta0 < np.pi / 2:
        raise GeometryError("incidence angle must lie in [0, pi/2)")
    return (2.0 * D0 - r0z) / np.cos(theta0)


class Tilts(NamedTuple):
    los: float
    reflected: float


def projected_tilts(r0, D0):
    """Equivalent array rotations for LOS and reflected links.

    Shifting the receiver sideways is modelled as rotating both arrays in
    the plane spanned by the x-axis and the link.  Ranges are first
    projected onto the xz-plane to remove the y-offset.
    """
    r0 = _check_receiver(r0, D0)
    D = float(np.linalg.norm(r0))
    De = equivalent_distance(incidence_angle(r0, D0), D0, r0[2])
    img_z = 2.0 * D0 - r0[2]
    D_hat = D / np.sqrt(1.0 + (r0[1] / r0[2]) ** 2)
    De_hat = De / np.sqrt(1.0 + (r0[1] / img_z) ** 2)
    # clip guards arccos against ratios of 1 + eps on axis
    los = np.arccos(np.clip(r0[2] / D_hat, -1.0, 1.0))
    refl = np.arccos(np.clip(img_z / De_hat, -1.0, 1.0))
    return Tilts(float(los), float(refl))


def mirror(points, D0):
    """Reflect points through the plane ``z = D0``."""
    p = np.array(points, dtype=float, copy=True)
    p[..., 2] = 2.0 * D0 - p[..., 2]
    return p


def validate_placement(tx_positions, rx_positions, D0, margin):
    """Check every antenna lies on the source side of the surface.

    Each antenna must satisfy ``z <= D0 - margin``; the margin is one
    wavelength in the channel builders.
    """
    for label, pts in (("transmit", tx_positions), ("receive", rx_positions)):
        zmax = float(np.max(np.asarray(pts)[:, 2]))
        if zmax > D0 - margin:
            raise GeometryError(
                f"{label} antenna at z={zmax:.6g} m is within {margin:.3g} m "
                f"of the surface at D0={D0:g} m")

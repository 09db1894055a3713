"""Refractive indices and Fresnel coefficients for a planar interface (TE).

Region 1 is free space (n1 = 1); region 2 is a homogeneous half-space of
complex refractive index ``n2``.  Coefficients are given both as functions
of the incidence angle and of the transverse wavenumber ``kappa_rho``; the
two forms agree under ``kappa_rho = kappa1 * sin(theta_i)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import constants

SPEED_OF_LIGHT = constants.c
FREE_SPACE_IMPEDANCE = constants.mu_0 * constants.c


@dataclass(frozen=True)
class Material:
    """A reflecting half-space.

    Parameters
    ----------
    name : str
        Label used in tables and config files.
    n2 : complex
        Refractive index of the half-space.  Ignored when
        ``perfect_conductor`` is set.
    perfect_conductor : bool
        If true, the reflection coefficient is exactly -1 at every angle.
    """

    name: str
    n2: complex = 1.0 + 0.0j
    perfect_conductor: bool = False

    def __post_init__(self):
        n2 = complex(self.n2)
        object.__setattr__(self, "n2", n2)
        if self.perfect_conductor:
            return
        if not np.isfinite(n2.real) or not np.isfinite(n2.imag):
            raise ValueError(f"{self.name}: refractive index must be finite")
        if n2.real < 1.0 or n2.imag < 0.0:
            raise ValueError(
                f"{self.name}: need Re(n2) >= 1 and Im(n2) >= 0, got {n2}")

    def as_dict(self):
        return {"name": self.name, "n2_real": self.n2.real,
                "n2_imag": self.n2.imag,
                "perfect_conductor": self.perfect_conductor}


PERFECT_CONDUCTOR = Material("conductor", perfect_conductor=True)

# Real-valued stand-ins chosen so that -20 log10 |R(0)| reproduces the
# normal-incidence losses 7.19 dB, 9.63 dB and 13.98 dB respectively.
CONCRETE = Material("concrete", 2.5524)
FLOORBOARD = Material("floorboard", 1.9851)
PLASTERBOARD = Material("plasterboard", 1.5000)


def builtin_materials():
    """Return the default material table (conductor first)."""
    return [PERFECT_CONDUCTOR, CONCRETE, FLOORBOARD, PLASTERBOARD]


def get_material(name, table=None):
    """Look up a material by (case-insensitive) name."""
    table = builtin_materials() if table is None else table
    key = name.strip().lower().replace(" ", "").replace("_", "")
    for m in table:
        if m.name.lower().replace(" ", "").replace("_", "") == key:
            return m
    known = ", ".join(m.name for m in table)
    raise KeyError(f"unknown material {name!r}; known: {known}")


@dataclass(frozen=True)
class Wavenumbers:
    """Free-space and material wavenumbers at one frequency."""

    kappa1: float
    kappa2: complex
    wavelength: float
    eta1: float = FREE_SPACE_IMPEDANCE

    @classmethod
    def from_frequency(cls, frequency_hz, material=PERFECT_CONDUCTOR):
        if frequency_hz <= 0:
            raise ValueError("frequency must be positive")
        wavelength = SPEED_OF_LIGHT / frequency_hz
        kappa1 = 2.0 * np.pi / wavelength
        kappa2 = (complex(np.inf) if material.perfect_conductor
                  else material.n2 * kappa1)
        return cls(kappa1, kappa2, wavelength)


def longitudinal_wavenumber(kappa, kappa_rho):
    """``sqrt(kappa**2 - kappa_rho**2)`` on the radiating branch.

    The principal root is flipped wherever needed so that the imaginary
    part is non-negative; on the real axis below the branch point the
    result is real and positive.
    """
    kz = np.sqrt(np.asarray(kappa, dtype=complex) ** 2
                 - np.asarray(kappa_rho, dtype=complex) ** 2)
    return np.where(kz.imag < 0.0, -kz, kz)


def fresnel_angle(theta_i, material):
    """TE reflection coefficient as a function of incidence angle.

    Parameters
    ----------
    theta_i : float or array_like
        Incidence angle from the surface normal, radians, in [0, pi/2].
    material : Material

    Returns
    -------
    complex or ndarray of complex
    """
    theta_i = np.asarray(theta_i, dtype=float)
    if np.any(theta_i < 0) or np.any(theta_i > np.pi / 2 + 1e-15):
        raise ValueError("incidence angle must lie in [0, pi/2]")
    if material.perfect_conductor:
        out = np.full(theta_i.shape, -1.0 + 0.0j)
        return out[()] if out.ndim == 0 else out
    c = np.cos(theta_i)
    root = np.sqrt(material.n2 ** 2 - np.sin(theta_i) ** 2 + 0j)
    root = np.where(root.real < 0.0, -root, root)
    out = (c - root) / (c + root)
    return out[()] if np.ndim(out) == 0 else out


def fresnel_wavenumber(kappa_rho, wavenumbers, material):
    """TE reflection coefficient as a function of transverse wavenumber.

    ``R = (k1z - k2z) / (k1z + k2z)`` with both longitudinal wavenumbers on
    the radiating branch.  Accepts complex ``kappa_rho`` so it can be
    evaluated along a deformed integration contour.
    """
    kappa_rho = np.asarray(kappa_rho, dtype=complex)
    if material.perfect_conductor:
        out = np.full(kappa_rho.shape, -1.0 + 0.0j)
        return out[()] if out.ndim == 0 else out
    k1z = longitudinal_wavenumber(wavenumbers.kappa1, kappa_rho)
    k2z = longitudinal_wavenumber(material.n2 * wavenumbers.kappa1, kappa_rho)
    out = (k1z - k2z) / (k1z + k2z)
    return out[()] if out.ndim == 0 else out


class Transmission(NamedTuple):
    theta_t: complex
    T: complex
    defined: bool


def snell_transmission(theta_i, material):
    """Refraction angle and transmission coefficient ``T = 1 + R``.

    For a perfect conductor nothing is transmitted: ``T = 0`` and the
    refraction angle is reported as NaN with ``defined=False``.
    """
    if material.perfect_conductor:
        return Transmission(complex(np.nan, np.nan), 0.0j, False)
    sin_t = np.sin(theta_i) / material.n2
    theta_t = complex(np.arcsin(complex(sin_t)))
    R = complex(fresnel_angle(theta_i, material))
    return Transmission(theta_t, 1.0 + R, True)


def normal_incidence_loss_db(material):
    """``-20 log10 |R(0)|``: reflection loss at normal incidence in dB."""
    return -20.0 * np.log10(abs(complex(fresnel_angle(0.0, material))))

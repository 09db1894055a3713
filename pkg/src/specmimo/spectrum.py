"""Wavenumber-domain channel kernels for a source in front of a planar surface.

The channel between two z-planes is linear and space invariant, so it is
described by a wavenumber response ``H(kappa_rho; rz, sz)`` that depends only
on the transverse wavenumber magnitude.  This module evaluates that
response, the surface impulse response (the blur kernel applied to the
image source), and the closed-form spherical wave used as the LOS oracle.
"""
from __future__ import annotations

from enum import Enum

import numpy as np

from .bessel import bessel_j0_complex
from .materials import fresnel_wavenumber, longitudinal_wavenumber


class KernelMode(str, Enum):
    LOS = "los"
    REFLECTED = "reflected"
    TOTAL = "total"

    @property
    def has_los(self):
        return self is not KernelMode.REFLECTED

    @property
    def has_reflection(self):
        return self is not KernelMode.LOS


class Region(str, Enum):
    """Receiver location relative to the source.

    ``BELOW`` is ``rz < sz`` (away from the surface); ``BETWEEN`` is
    ``sz < rz <= D0`` (between source and surface).
    """

    BELOW = "below"
    BETWEEN = "between"


def region_of(rz, sz):
    return Region.BETWEEN if rz > sz else Region.BELOW


def engine_constant(wavenumbers):
    """Scale ``c`` such that the LOS kernel equals ``c exp(i k d) / d``."""
    return wavenumbers.kappa1 * wavenumbers.eta1 / (4j * np.pi)


def z_exponentials(k1z, rz, sz, D0, mode, region=None):
    """Bracketed plane-wave factor of the wavenumber response.

    Returns the LOS and/or image term, ``exp(+-i k1z (rz - sz))`` and
    ``R exp(-i k1z (rz + sz - 2 D0))``, without the Fresnel weight; the
    two are returned separately so callers can apply ``R`` once.
    """
    region = region_of(rz, sz) if region is None else Region(region)
    los = refl = None
    if mode.has_los:
        dz = rz - sz if region is Region.BETWEEN else sz - rz
        los = np.exp(1j * k1z * dz)
    if mode.has_reflection:
        refl = np.exp(-1j * k1z * (rz + sz - 2.0 * D0))
    return los, refl


def wavenumber_response(kappa_rho, rz, sz, wavenumbers, material, D0,
                        mode=KernelMode.TOTAL, region=None, indicator=False):
    """LSI wavenumber response between the planes ``sz`` and ``rz``.

    Parameters
    ----------
    kappa_rho : complex or array_like
        Transverse wavenumber; may be complex (deformed contour).
    rz, sz : float
        Receiver and source heights in metres.
    wavenumbers : Wavenumbers
    material : Material
    D0 : float
        Height of the reflecting plane.
    mode : KernelMode
    region : Region, optional
        Defaults to the region implied by ``rz`` and ``sz``.
    indicator : bool
        If true, zero the response outside the propagating disk
        ``Re(kappa_rho) > kappa1``.

    Returns
    -------
    complex or ndarray
    """
    mode = KernelMode(mode)
    kappa_rho = np.asarray(kappa_rho, dtype=complex)
    k1 = wavenumbers.kappa1
    if np.any(kappa_rho == k1):
        raise ValueError("kappa_rho equals kappa1: pole of 1/k1z")
    k1z = longitudinal_wavenumber(k1, kappa_rho)
    los, refl = z_exponentials(k1z, rz, sz, D0, mode, region)
    bracket = np.zeros_like(kappa_rho)
    if los is not None:
        bracket = bracket + los
    if refl is not None:
        bracket = bracket + fresnel_wavenumber(kappa_rho, wavenumbers,
                                               material) * refl
    out = 0.5 * k1 * wavenumbers.eta1 * bracket / k1z
    if indicator:
        out = np.where(kappa_rho.real > k1, 0.0, out)
    return out[()] if out.ndim == 0 else out


def weyl_los_closed_form(r, s, wavenumbers):
    """Spherical wave ``c exp(i k1 |r - s|) / |r - s|`` between points.

    ``r`` and ``s`` broadcast against each other along leading axes; the
    last axis holds (x, y, z).
    """
    d = np.linalg.norm(np.asarray(r, float) - np.asarray(s, float), axis=-1)
    if np.any(d == 0):
        raise ValueError("coincident source and receiver points")
    out = engine_constant(wavenumbers) * np.exp(1j * wavenumbers.kappa1 * d) / d
    return out[()] if np.ndim(out) == 0 else out


def _gauss_panels(edges, order):
    x, w = np.polynomial.legendre.leggauss(order)
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    return (a + half * (x + 1.0)).ravel(), (half * w).ravel()


def surface_impulse_response(rho, wavenumbers, material, kappa_max=None,
                             order=24, phase_per_panel=4.0):
    """Band-limited surface impulse response ``r(rho)``.

    Evaluates ``(1/2pi) int_0^kappa_max R(k) J0(k rho) k dk`` on the real
    axis.  Each sub-interval between the branch points ``kappa1`` and
    ``Re(kappa2)`` is mapped with ``k = a + (b - a)(1 - cos t)/2`` so the
    square-root behaviour of ``R`` at the break points becomes smooth.

    Parameters
    ----------
    rho : float or array_like
        Radial distance on the surface, metres, ``>= 0``.
    kappa_max : float, optional
        Band limit; defaults to ``kappa1`` (propagating waves only).
    """
    k1 = wavenumbers.kappa1
    kappa_max = k1 if kappa_max is None else float(kappa_max)
    if not kappa_max > 0:
        raise ValueError("kappa_max must be positive")
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise ValueError("rho must be non-negative")
    breaks = [0.0]
    for b in (k1, np.real(wavenumbers.kappa2) if not material.perfect_conductor
              else np.inf):
        if 0.0 < b < kappa_max:
            breaks.append(float(b))
    breaks.append(kappa_max)
    flat = np.atleast_1d(rho).ravel()
    total = np.zeros(flat.shape, dtype=complex)
    for a, b in zip(breaks[:-1], breaks[1:]):
        n_pan = max(4, int(np.ceil((b - a) * (flat.max() + 1.0 / k1)
                                   / phase_per_panel)))
        t, wt = _gauss_panels(np.linspace(0.0, np.pi, n_pan + 1), order)
        k = a + 0.5 * (b - a) * (1.0 - np.cos(t))
        dk = 0.5 * (b - a) * np.sin(t) * wt
        R = fresnel_wavenumber(k.astype(complex), wavenumbers, material)
        j0 = bessel_j0_complex(np.outer(flat, k).astype(complex))
        total += j0 @ (R * k * dk)
    out = (total / (2.0 * np.pi)).reshape(rho.shape)
    return out[()] if out.ndim == 0 else out

"""Sommerfeld-type integrals along a semi-elliptical contour.

The point-source channel reduces, by circular symmetry, to

    h = (k1 eta1 / 4 pi) int_0^inf  k J0(k rho) / k1z * B(k) dk

where ``B`` holds the LOS and image plane-wave factors.  The real-axis path
touches the branch points ``k1`` and ``k2``.  It is deformed onto

    k(theta) = (kmaj/2)(1 + cos theta) + i (kmin/2) sin theta,
    theta in (pi, 2 pi),

which dips into the fourth quadrant and rejoins the real axis at ``kmaj``.
Beyond ``kmaj`` an optional real-axis tail picks up the evanescent band.

Panels are composite Gauss-Legendre in ``theta``.  They are placed by
equidistributing the local phase rate of the integrand, so every panel
carries a bounded number of oscillations.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .bessel import bessel_j0_complex
from .exceptions import ConvergenceError, GuardError
from .materials import fresnel_wavenumber, longitudinal_wavenumber
from .spectrum import KernelMode, Region, region_of

GUARD_RHO_OVER_LAMBDA = 3600.0

# integrand factors smaller than exp(-SIGNIFICANCE) are below double
# precision relative to the result and need no oscillation resolution
SIGNIFICANCE = 45.0
_PILOT = 1 << 16
_MAX_PANELS = 400_000
_BRANCH_WEIGHT = 4.0


@dataclass(frozen=True)
class ContourConfig:
    """Knobs of the contour quadrature.

    Parameters
    ----------
    kappa_min_ratio : float
        Minor over major axis of the ellipse.
    n_nodes : int
        Minimum number of nodes on the ellipse.
    order : int
        Gauss-Legendre points per panel.
    phase_per_panel : float
        Maximum integrand phase change (radians) allowed on one panel.
    rel_tol : float
        Accepted relative change under :meth:`refined` when ``verify`` is on.
    tail : bool
        Integrate the evanescent band beyond the ellipse.  When false the
        integral is cut at ``kappa1`` (hard disk indicator).
    tail_eps : float
        Truncate the tail once the plane-wave factor falls below this.
    kappa_maj : float, optional
        Override the major axis; by default ``(k1 + Re k2) / 2``.
    verify : bool
        Repeat every evaluation with :meth:`refined` and raise
        :class:`ConvergenceError` if the two differ by more than ``rel_tol``.
    """

    kappa_min_ratio: float = 1e-3
    n_nodes: int = 2048
    order: int = 16
    phase_per_panel: float = 6.0
    rel_tol: float = 1e-9
    tail: bool = True
    tail_eps: float = 1e-18
    kappa_maj: float | None = None
    verify: bool = False

    def __post_init__(self):
        if self.n_nodes < 16:
            raise ValueError("n_nodes must be at least 16")
        if not 0 < self.kappa_min_ratio <= 1:
            raise ValueError("kappa_min_ratio must lie in (0, 1]")
        if self.order < 2 or self.phase_per_panel <= 0:
            raise ValueError("order >= 2 and phase_per_panel > 0 required")
        if not 0 < self.tail_eps < 1:
            raise ValueError("tail_eps must lie in (0, 1)")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")

    def refined(self, factor=2):
        """Same contour with ``factor`` times as many nodes."""
        return replace(self, n_nodes=self.n_nodes * factor,
                       phase_per_panel=self.phase_per_panel / factor)

    def axes(self, wavenumbers):
        """Major and minor ellipse axes ``(kmaj, kmin)``."""
        k1 = wavenumbers.kappa1
        if self.kappa_maj is not None:
            kmaj = float(self.kappa_maj)
        elif np.isfinite(wavenumbers.kappa2):
            kmaj = 0.5 * (k1 + float(np.real(wavenumbers.kappa2)))
        else:
            # perfect conductor: no second branch point, use n2 = 3
            kmaj = 2.0 * k1
        if kmaj <= k1:
            # Re(n2) == 1 leaves no room between the branch points
            kmaj = 1.25 * k1
        return kmaj, kmaj * self.kappa_min_ratio


class QuadratureNode(NamedTuple):
    kappa: complex
    weight: complex


@dataclass(frozen=True)
class Contour:
    """Quadrature nodes: ``int f(k) dk ~= sum(weight * f(kappa))``.

    ``k1z`` caches the radiating-branch longitudinal wavenumber at each node;
    on the hard-indicator path it is formed without cancellation.
    """

    kappa: np.ndarray
    weight: np.ndarray
    k1z: np.ndarray
    n_ellipse: int
    kappa_maj: float
    kappa_min: float

    def __len__(self):
        return self.kappa.size

    def nodes(self):
        return [QuadratureNode(complex(k), complex(w))
                for k, w in zip(self.kappa, self.weight)]


def ellipse_point(theta, kappa_maj, kappa_min):
    return (0.5 * kappa_maj * (1.0 + np.cos(theta))
            + 0.5j * kappa_min * np.sin(theta))


def ellipse_jacobian(theta, kappa_maj, kappa_min):
    return 0.5 * (-kappa_maj * np.sin(theta) + 1j * kappa_min * np.cos(theta))


def _legendre(order):
    return np.polynomial.legendre.leggauss(order)


def _panel_nodes(edges, order):
    x, w = _legendre(order)
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    return (a + half * (x + 1.0)).ravel(), (half * w).ravel()


def _equidistribute(t, density, n_min_panels, budget):
    """Panel edges on ``[t0, t1]`` carrying <= ``budget`` of ``density``."""
    span = t[-1] - t[0]
    g = density / budget + n_min_panels / span
    cum = np.concatenate(([0.0], np.cumsum(0.5 * (g[1:] + g[:-1]) * np.diff(t))))
    n_pan = int(np.ceil(cum[-1]))
    if n_pan > _MAX_PANELS:
        raise ConvergenceError(
            f"contour needs {n_pan} panels (limit {_MAX_PANELS}); "
            "reduce the transverse extent or the z-separation")
    edges = np.interp(np.linspace(0.0, cum[-1], n_pan + 1), cum, t)
    edges[0], edges[-1] = t[0], t[-1]
    return edges


def _phase_density(kappa, dk, k1z, k2z, z_max, z_min, rho_max):
    """Local rate of change of the integrand phase and log-magnitude."""
    dk_abs = np.abs(dk)
    dk1z = np.abs(kappa / k1z) * dk_abs
    dens = dk1z * z_max + dk_abs * rho_max
    # branch-point peaks of 1/k1z and R vary in magnitude, not phase;
    # weight them so a panel spans at most ~1.5 e-folds
    dens = dens + _BRANCH_WEIGHT * dk_abs * np.abs(kappa / k1z ** 2)
    if k2z is not None:
        dens = dens + _BRANCH_WEIGHT * dk_abs * np.abs(kappa / k2z ** 2)
    # exponentially small stretches need no oscillation resolution
    log_mag = -k1z.imag * z_min + np.abs(kappa.imag) * rho_max
    return np.where(log_mag < -SIGNIFICANCE, 0.0, dens)


def _ellipse(wavenumbers, cfg, z_max, z_min, rho_max):
    kmaj, kmin = cfg.axes(wavenumbers)
    t = np.linspace(np.pi, 2.0 * np.pi, _PILOT + 1)
    kappa = ellipse_point(t, kmaj, kmin)
    dk = ellipse_jacobian(t, kmaj, kmin)
    k1z = longitudinal_wavenumber(wavenumbers.kappa1, kappa)
    k2z = (longitudinal_wavenumber(wavenumbers.kappa2, kappa)
           if np.isfinite(wavenumbers.kappa2) else None)
    dens = _phase_density(kappa, dk, k1z, k2z, z_max, z_min, rho_max)
    edges = _equidistribute(t, dens, cfg.n_nodes / cfg.order,
                            cfg.phase_per_panel)
    theta, w = _panel_nodes(edges, cfg.order)
    kappa = ellipse_point(theta, kmaj, kmin)
    weight = w * ellipse_jacobian(theta, kmaj, kmin)
    return kappa, weight, kmaj, kmin


def _graded_edges(a, b, toward_b, levels=10, ratio=0.2):
    """Edges on [a, b] refined geometrically towards one end."""
    fr = ratio ** np.arange(levels + 1.0)
    if toward_b:
        return np.concatenate((b - (b - a) * fr, [b]))
    return np.concatenate(([a], a + (b - a) * fr[::-1]))


def _tail(wavenumbers, cfg, kmaj, z_min, rho_max):
    k1 = wavenumbers.kappa1
    if z_min <= 0:
        raise ConvergenceError(
            "evanescent tail does not converge for zero z-separation; "
            "antennas must occupy distinct z-planes")
    decay = -np.log(cfg.tail_eps)
    k_end = np.sqrt(k1 ** 2 + (decay / z_min) ** 2)
    if k_end <= kmaj:
        return np.empty(0, complex), np.empty(0, complex)
    k2 = (float(np.real(wavenumbers.kappa2))
          if np.isfinite(wavenumbers.kappa2) else np.inf)
    segments = []
    if kmaj < k2 < k_end:
        # square-root branch point of R on the path: grade panels into it
        segments.append(_graded_edges(kmaj, k2, toward_b=True))
        segments.append(_graded_edges(k2, k_end, toward_b=False))
    else:
        segments.append(np.array([kmaj, k_end]))
    nodes, weights = [], []
    for seg in segments:
        fine = []
        for a, b in zip(seg[:-1], seg[1:]):
            rate = rho_max + z_min + 1.0 / k1
            n = max(1, int(np.ceil((b - a) * rate / cfg.phase_per_panel)))
            fine.append(np.linspace(a, b, n + 1)[:-1])
        edges = np.concatenate(fine + [[seg[-1]]])
        if edges.size - 1 > _MAX_PANELS:
            raise ConvergenceError("evanescent tail exceeds the panel budget")
        x, w = _panel_nodes(edges, cfg.order)
        nodes.append(x)
        weights.append(w)
    return (np.concatenate(nodes).astype(complex),
            np.concatenate(weights).astype(complex))


def _hard_indicator(wavenumbers, cfg, z_max, rho_max):
    """Propagating band only, via ``k = k1 sin(alpha)``, alpha in [0, pi/2]."""
    k1 = wavenumbers.kappa1
    a = np.linspace(0.0, 0.5 * np.pi, _PILOT + 1)
    dens = k1 * (z_max * np.sin(a) + rho_max * np.cos(a))
    edges = _equidistribute(a, dens, cfg.n_nodes / cfg.order,
                            cfg.phase_per_panel)
    alpha, w = _panel_nodes(edges, cfg.order)
    kappa = (k1 * np.sin(alpha)).astype(complex)
    k1z = (k1 * np.cos(alpha)).astype(complex)
    weight = (w * k1 * np.cos(alpha)).astype(complex)
    return kappa, weight, k1z


def build_contour(wavenumbers, cfg=None, z_max=0.0, z_min=None, rho_max=0.0):
    """Quadrature nodes for the Sommerfeld integral.

    Parameters
    ----------
    wavenumbers : Wavenumbers
    cfg : ContourConfig, optional
    z_max, z_min : float
        Largest and smallest z-separation (LOS ``|rz - sz|`` or image
        ``2 D0 - rz - sz``) the contour must serve.  ``z_max`` sets the
        oscillation density; ``z_min`` sets the tail length.
    rho_max : float
        Largest transverse separation to be evaluated.

    Returns
    -------
    Contour
    """
    cfg = ContourConfig() if cfg is None else cfg
    z_min = z_max if z_min is None else z_min
    if not cfg.tail:
        kappa, weight, k1z = _hard_indicator(wavenumbers, cfg, z_max, rho_max)
        return Contour(kappa, weight, k1z, kappa.size, wavenumbers.kappa1, 0.0)
    kappa, weight, kmaj, kmin = _ellipse(wavenumbers, cfg, z_max, z_min,
                                         rho_max)
    n_ell = kappa.size
    tk, tw = _tail(wavenumbers, cfg, kmaj, z_min, rho_max)
    kappa = np.concatenate((kappa, tk))
    weight = np.concatenate((weight, tw))
    k1z = longitudinal_wavenumber(wavenumbers.kappa1, kappa)
    return Contour(kappa, weight, k1z, n_ell, kmaj, kmin)


def check_guard(rho, wavelength):
    """Raise :class:`GuardError` if ``rho / wavelength >= 3600``."""
    rho = np.asarray(rho, float)
    # compare lengths, not ratios, so that exactly 3600 wavelengths trips
    if np.any(rho >= GUARD_RHO_OVER_LAMBDA * wavelength):
        worst = float(np.max(rho) / wavelength)
        raise GuardError(
            f"transverse separation {worst:.1f} wavelengths >= "
            f"{GUARD_RHO_OVER_LAMBDA:.0f}: the elliptical contour is not "
            "valid here; a steepest-descent path would be required",
            ratio=worst)


class Term(NamedTuple):
    """One z-exponential ``exp(i k1z * dz)`` with an optional Fresnel weight."""

    dz: np.ndarray
    reflected: bool


def _terms(rz, sz, D0, mode):
    rz = np.asarray(rz, float)
    sz = np.asarray(sz, float)
    terms = []
    if mode.has_los:
        terms.append(Term(np.abs(rz - sz), False))
    if mode.has_reflection:
        terms.append(Term(2.0 * D0 - rz - sz, True))
    return terms


def _evaluate(contour, rho, terms, wavenumbers, material, chunk=1 << 22):
    k = contour.kappa
    base = contour.weight * k / contour.k1z
    R = None
    if any(t.reflected for t in terms):
        R = fresnel_wavenumber(k, wavenumbers, material)
    out = np.zeros(rho.size, dtype=complex)
    step = max(1, chunk // max(1, k.size))
    for lo in range(0, rho.size, step):
        sl = slice(lo, lo + step)
        j0 = bessel_j0_complex(np.outer(rho[sl], k))
        acc = np.zeros_like(j0)
        for t in terms:
            e = np.exp(1j * np.outer(t.dz[sl], contour.k1z))
            acc += e * R if t.reflected else e
        out[sl] = (j0 * acc) @ base
    scale = wavenumbers.kappa1 * wavenumbers.eta1 / (4.0 * np.pi)
    return scale * out


def _groups(rho, wavenumbers):
    """Bucket separations by octave of ``k1 * rho`` to size contours."""
    x = wavenumbers.kappa1 * rho
    key = np.floor(np.log2(np.maximum(x, 64.0)))
    return [np.flatnonzero(key == v) for v in np.unique(key)]


def _group_value(idx, rho, rz, sz, wavenumbers, material, D0, mode, cfg):
    terms = _terms(rz[idx], sz[idx], D0, mode)
    dzs = np.concatenate([t.dz for t in terms])
    extent = dict(z_max=float(dzs.max()), z_min=float(dzs.min()),
                  rho_max=float(rho[idx].max()))
    contour = build_contour(wavenumbers, cfg, **extent)
    val = _evaluate(contour, rho[idx], terms, wavenumbers, material)
    if cfg.verify:
        fine = build_contour(wavenumbers, cfg.refined(), **extent)
        ref = _evaluate(fine, rho[idx], terms, wavenumbers, material)
        err = float(np.max(np.abs(ref - val) / np.abs(ref)))
        if err > cfg.rel_tol:
            raise ConvergenceError(
                f"node doubling changed the result by {err:.3g} "
                f"(rel_tol {cfg.rel_tol:.3g})")
    return val


def sommerfeld_many(rho, rz, sz, wavenumbers, material, D0,
                    mode=KernelMode.TOTAL, cfg=None, workers=None):
    """Vectorised impulse response ``h(rho; rz, sz)``.

    All arguments broadcast to a common shape.  Separations are grouped by
    octave so that each contour is sized for its own transverse extent.
    Groups are independent; with ``workers > 1`` they are evaluated on a
    thread pool and the result is identical to the serial one.
    """
    cfg = ContourConfig() if cfg is None else cfg
    mode = KernelMode(mode)
    rho, rz, sz = np.broadcast_arrays(np.asarray(rho, float),
                                      np.asarray(rz, float),
                                      np.asarray(sz, float))
    shape = rho.shape
    rho, rz, sz = rho.ravel(), rz.ravel(), sz.ravel()
    if np.any(rho < 0):
        raise ValueError("transverse separation must be non-negative")
    check_guard(rho, wavenumbers.wavelength)
    if mode.has_reflection and np.any(np.maximum(rz, sz) > D0):
        raise ValueError("source and receiver must lie below the surface")
    out = np.empty(rho.size, dtype=complex)
    groups = _groups(rho, wavenumbers)
    args = (rho, rz, sz, wavenumbers, material, D0, mode, cfg)
    if workers and workers > 1 and len(groups) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            vals = list(pool.map(lambda g: _group_value(g, *args), groups))
    else:
        vals = [_group_value(g, *args) for g in groups]
    for idx, val in zip(groups, vals):
        out[idx] = val
    return out.reshape(shape)


def sommerfeld_h(rho, rz, sz, wavenumbers, material, D0,
                 mode=KernelMode.TOTAL, cfg=None, region=None,
                 return_error=False):
    """Point-source impulse response at a single (rho, rz, sz).

    Parameters
    ----------
    rho : float
        Transverse (xy-plane) distance between source and receiver.
    rz, sz : float
        Receiver and source heights.
    region : Region, optional
        Checked against ``rz``/``sz`` when given.
    return_error : bool
        Also return ``|h - h_refined|`` from a node-doubling pass.
    """
    if region is not None and Region(region) is not region_of(rz, sz):
        raise ValueError(f"rz={rz}, sz={sz} is not in region {region}")
    val = complex(sommerfeld_many(rho, rz, sz, wavenumbers, material, D0,
                                  mode, cfg))
    if not return_error:
        return val
    cfg = ContourConfig() if cfg is None else cfg
    ref = complex(sommerfeld_many(rho, rz, sz, wavenumbers, material, D0,
                                  mode, cfg.refined()))
    return val, abs(ref - val)

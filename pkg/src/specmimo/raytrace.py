"""Exact versus ray-traced (paraxial) reflected channels as apertures grow.

Ray tracing replaces the surface's spatial filtering by a single complex
weight ``R(theta0)`` on the image source.  This is accurate while the
arrays are small compared with the image range ``De``.  The sweep below
grows both apertures at the spacing optimised for the reflected link and
reports the spectral efficiency obtained from each model.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .channel import Scenario, build_exact, build_image_oracle, build_paraxial
from .geometry import ArraySpec
from .materials import CONCRETE, Material, Wavenumbers
from .mimo import (capacity_upper_bound, db_to_linear, normalized_eigenvalues,
                   waterfill_capacity)
from .quadrature import ContourConfig
from .spectrum import KernelMode


def reflected_aperture(n, wavelength, De, snr_db):
    """Aperture ``n * d`` of an ``n``-element ULA at the SNR-optimal spacing."""
    _, rho = capacity_upper_bound(n, n, float(db_to_linear(snr_db)))
    return float(np.sqrt(rho * wavelength * De))


def antennas_for_aperture(L, wavelength, De, snr_db, n_cap=100_000):
    """Largest ``n`` (at least 1) with ``n * d_opt(De, snr, n) <= L``."""
    n = 1
    while n < n_cap and reflected_aperture(n + 1, wavelength, De, snr_db) <= L:
        n += 1
    return n


@dataclass(frozen=True)
class ApertureSweep:
    ratios: tuple = (0.02, 0.05, 0.1, 0.2, 0.4, 0.7, 1.0)
    D: float = 2.0
    D0: float = 3.0
    snr_db: float = 0.0
    material: Material = CONCRETE
    frequency: float = 57.5e9
    contour: ContourConfig = field(default_factory=ContourConfig)

    def __post_init__(self):
        r = np.asarray(self.ratios, float)
        if r.size == 0 or np.any(r <= 0) or np.any(np.diff(r) <= 0):
            raise ValueError("ratios must be positive and strictly ascending")
        if not 0 < self.D < self.D0:
            raise ValueError("need 0 < D < D0")

    @property
    def De(self):
        return 2.0 * self.D0 - self.D

    def scenario(self, ratio):
        lam = Wavenumbers.from_frequency(self.frequency).wavelength
        n = antennas_for_aperture(ratio * self.De, lam, self.De, self.snr_db)
        _, rho = capacity_upper_bound(n, n, float(db_to_linear(self.snr_db)))
        d = np.sqrt(rho / n * lam * self.De / n)
        return Scenario(self.frequency, ArraySpec(n, d),
                        ArraySpec(n, d, centroid=(0.0, 0.0, self.D)),
                        D0=self.D0, material=self.material,
                        mode=KernelMode.REFLECTED, contour=self.contour)


class SweepPoint(NamedTuple):
    ratio: float
    n_antennas: int
    aperture: float
    se_exact: float
    se_paraxial: float

    @property
    def rel_gap(self):
        return abs(self.se_exact - self.se_paraxial) / self.se_exact


def run_point(sweep, ratio, workers=None):
    sc = sweep.scenario(ratio)
    snr = float(db_to_linear(sweep.snr_db))
    # common power reference: a perfect mirror at the same geometry
    ref = build_image_oracle(sc)
    se = []
    for H in (build_exact(sc, workers=workers), build_paraxial(sc)):
        lam = normalized_eigenvalues(H, reference=ref)
        se.append(waterfill_capacity(lam, snr).capacity)
    return SweepPoint(float(ratio), sc.tx.n_antennas, sc.tx.aperture, *se)


def run_sweep(sweep, workers=None):
    """Evaluate every ratio of ``sweep`` in ascending order."""
    return [run_point(sweep, r, workers) for r in sweep.ratios]


def write_sweep_csv(points, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["ratio", "n_antennas", "se_exact", "se_paraxial",
                    "rel_gap"])
        for p in points:
            w.writerow([f"{p.ratio:.17g}", p.n_antennas, f"{p.se_exact:.17g}",
                        f"{p.se_paraxial:.17g}", f"{p.rel_gap:.17g}"])

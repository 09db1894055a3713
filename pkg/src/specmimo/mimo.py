"""Eigen-analysis, water-filling capacity and antenna-spacing rules.

Eigenvalues are those of ``H H^H`` scaled so that they sum to ``Nr * Nt``
(optionally using another matrix, e.g. the LOS channel, as the power
reference).  Capacity assumes channel-state information at the
transmitter and is reported in bit/s/Hz.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from .geometry import equivalent_distance, incidence_angle
from .materials import PERFECT_CONDUCTOR, fresnel_angle


def db_to_linear(x_db):
    return 10.0 ** (np.asarray(x_db, float) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(x)


def _matrix(H):
    return np.asarray(getattr(H, "entries", H), dtype=complex)


def channel_gains(H):
    """Squared singular values of ``H``, sorted descending."""
    return np.linalg.svd(_matrix(H), compute_uv=False) ** 2


def normalized_eigenvalues(H, reference=None):
    """Eigenvalues of ``H H^H`` normalised to sum to ``Nr * Nt``.

    Parameters
    ----------
    H : ChannelMatrix or array_like
    reference : ChannelMatrix or array_like, optional
        Matrix whose total power defines the normalisation.  Defaults to
        ``H`` itself.  Using the LOS matrix here preserves the power gap
        between LOS and reflected channels.

    Returns
    -------
    ndarray
        ``min(Nr, Nt)`` non-negative values in descending order.
    """
    M = _matrix(H)
    gains = channel_gains(M)
    ref_total = gains.sum() if reference is None else channel_gains(reference).sum()
    if not ref_total > 0:
        raise ValueError("cannot normalise an all-zero channel matrix")
    nr, nt = M.shape
    return gains * (nr * nt / ref_total)


class WaterFilling(NamedTuple):
    capacity: float
    water_level: float
    powers: np.ndarray


def waterfill_capacity(eigenvalues, snr_linear):
    """Capacity with water-filling over the given eigenmodes.

    The active set is found exactly: with eigenvalues sorted descending,
    the water level for ``k`` active modes is
    ``(snr + sum_{i<k} 1/lam_i) / k``, and the largest ``k`` whose level
    exceeds ``1/lam_k`` is kept.

    Returns
    -------
    WaterFilling
        ``powers`` follows the input ordering and sums to ``snr_linear``.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    if snr_linear <= 0:
        raise ValueError("snr must be positive")
    order = np.argsort(-lam, kind="stable")
    srt = lam[order]
    pos = srt[srt > 0]
    if pos.size == 0:
        raise ValueError("no positive eigenvalues")
    inv = 1.0 / pos
    levels = (snr_linear + np.cumsum(inv)) / np.arange(1, pos.size + 1)
    active = int(np.flatnonzero(levels > inv)[-1]) + 1
    nu = levels[active - 1]
    p_sorted = np.zeros_like(srt)
    p_sorted[:active] = nu - inv[:active]
    powers = np.empty_like(p_sorted)
    powers[order] = p_sorted
    capacity = float(np.sum(np.log2(nu * pos[:active])))
    return WaterFilling(capacity, float(nu), powers)


class Bound(NamedTuple):
    bound: float
    streams: int


def capacity_upper_bound(nr, nt, snr_linear):
    """Best capacity over channels with ``rho`` equal nonzero eigenvalues.

    Maximises ``rho log2(1 + (snr/rho)(Nr Nt/rho))`` over
    ``rho = 1..min(Nr, Nt)``; ties go to the smaller ``rho``.
    """
    n_min = min(nr, nt)
    rho = np.arange(1, n_min + 1)
    vals = rho * np.log2(1.0 + (snr_linear / rho) * (nr * nt / rho))
    best = int(np.argmax(vals))
    return Bound(float(vals[best]), best + 1)


def dof_count(eigenvalues, threshold_db=40.0):
    """Number of eigenvalues within ``threshold_db`` of the largest."""
    lam = np.asarray(eigenvalues, dtype=float)
    if lam.size == 0:
        raise ValueError("empty eigenvalue list")
    return int(np.sum(lam >= lam.max() * 10.0 ** (-threshold_db / 10.0)))


@dataclass(frozen=True)
class SpacingQuery:
    """Inputs to :func:`optimal_spacing`.

    ``distance`` is ``D`` for a LOS link or ``De`` for a reflected one.
    ``n_min`` defaults to ``n_max`` (square arrays).
    """

    distance: float
    n_max: int
    wavelength: float
    snr_db: float | None = None
    tilt: float = 0.0
    n_min: int | None = None

    def __post_init__(self):
        if not self.distance > 0 or self.n_max < 1:
            raise ValueError("distance must be positive and n_max >= 1")
        if not -np.pi / 2 < self.tilt < np.pi / 2:
            raise ValueError("tilt must lie strictly inside (-pi/2, pi/2)")


def dof_fraction(n_max, n_min, snr_db):
    """``eta = rho*/Nmin`` from the capacity bound (1 when ``snr_db`` is None)."""
    if snr_db is None:
        return 1.0
    _, rho = capacity_upper_bound(n_max, n_min, float(db_to_linear(snr_db)))
    return rho / n_min


def optimal_spacing(q):
    """ULA spacing ``sqrt(eta lambda D / Nmax) / cos(tilt)``.

    With ``eta = 1`` this is the Rayleigh spacing that makes the paraxial
    LOS channel a scaled Fourier matrix.
    """
    n_min = q.n_max if q.n_min is None else q.n_min
    eta = dof_fraction(q.n_max, n_min, q.snr_db)
    return float(np.sqrt(eta * q.wavelength * q.distance / q.n_max)
                 / np.cos(q.tilt))


def rayleigh_spacing(wavelength, distance, n_max, snr_db=None, tilt=0.0):
    return optimal_spacing(SpacingQuery(distance, n_max, wavelength,
                                        snr_db, tilt))


class Pathloss(NamedTuple):
    gain: float
    loss_db: float


def pathloss(r0, D0, wavelength, material=PERFECT_CONDUCTOR, los=False):
    """Free-space gain of the LOS or reflected centroid-to-centroid path.

    Reflected: ``|R(theta0)|^2 (lambda / (4 pi De))^2``; LOS:
    ``(lambda / (4 pi D))^2``.  ``loss_db`` is ``-10 log10(gain)``.
    """
    r0 = np.asarray(r0, dtype=float)
    if los:
        dist, refl = float(np.linalg.norm(r0)), 1.0
    else:
        theta0 = incidence_angle(r0, D0)
        dist = equivalent_distance(theta0, D0, r0[2])
        refl = abs(complex(fresnel_angle(theta0, material))) ** 2
    gain = refl * (wavelength / (4.0 * np.pi * dist)) ** 2
    return Pathloss(float(gain), float(-linear_to_db(gain)))


@dataclass
class MimoReport:
    eigenvalues: np.ndarray
    capacity_bps_hz: float
    water_level: float
    dof: int
    snr_db: float
    pathloss_db: float = float("nan")
    provenance: str = ""
    powers: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        total = float(np.sum(self.powers)) if self.powers is not None else None
        if total is not None and not np.isclose(
                total, db_to_linear(self.snr_db), rtol=1e-12):
            raise ValueError("allocated powers do not sum to the SNR")

    def csv_row(self, scenario_id=""):
        eig = ";".join(f"{v:.17g}" for v in self.eigenvalues)
        return [scenario_id, f"{self.snr_db:.17g}", eig,
                f"{self.capacity_bps_hz:.17g}", str(self.dof),
                f"{self.pathloss_db:.17g}"]

    CSV_HEADER = ["scenario_id", "snr_db", "eigenvalues", "capacity",
                  "dof", "pathloss_db"]

    def as_dict(self):
        d = asdict(self)
        d["eigenvalues"] = list(map(float, self.eigenvalues))
        d.pop("powers")
        return d


def analyze(H, snr_db, reference=None, pathloss_db=float("nan"),
            threshold_db=40.0):
    """Eigenvalues, DOF and water-filling capacity of one channel."""
    lam = normalized_eigenvalues(H, reference)
    wf = waterfill_capacity(lam, float(db_to_linear(snr_db)))
    prov = getattr(getattr(H, "provenance", ""), "value", "")
    return MimoReport(lam, wf.capacity, wf.water_level,
                      dof_count(lam, threshold_db), float(snr_db),
                      float(pathloss_db), prov, wf.powers)

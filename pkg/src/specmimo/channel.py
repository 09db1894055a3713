"""MIMO channel matrices sampled from the point-source impulse response.

``H[m, n]`` is the field at receive antenna ``m`` due to a unit point
source at transmit antenna ``n``.  Besides the exact spectral construction
there are three closed-form references: the free-space spherical wave
(LOS oracle), the mirrored source with ``R = -1`` (image oracle) and the
mirrored source weighted by the Fresnel coefficient at the specular
angle (paraxial, i.e. what a ray tracer computes).
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .exceptions import GeometryError, GuardError
from .geometry import ArraySpec, incidence_angle, mirror, validate_placement
from .materials import PERFECT_CONDUCTOR, Material, Wavenumbers, fresnel_angle
from .quadrature import ContourConfig, check_guard, sommerfeld_many
from .spectrum import KernelMode, weyl_los_closed_form


class Provenance(str, Enum):
    EXACT = "exact"
    LOS_ORACLE = "los-oracle"
    IMAGE_ORACLE = "image-oracle"
    PARAXIAL = "paraxial"


@dataclass(frozen=True)
class Scenario:
    """Full link geometry and numerical settings.

    The surface is the plane ``z = D0``; the transmitter should sit near
    the origin so that ``0 < z < D0`` for every antenna.
    """

    frequency: float
    tx: ArraySpec
    rx: ArraySpec
    D0: float = np.inf
    material: Material = PERFECT_CONDUCTOR
    mode: KernelMode = KernelMode.TOTAL
    contour: ContourConfig = field(default_factory=ContourConfig)

    def __post_init__(self):
        if not self.frequency > 0:
            raise GeometryError("frequency must be positive")
        object.__setattr__(self, "mode", KernelMode(self.mode))
        if self.mode.has_reflection:
            if not np.isfinite(self.D0):
                raise GeometryError("reflected modes need a finite D0")
            validate_placement(self.tx_positions(), self.rx_positions(),
                               self.D0, margin=self.wavelength)

    @property
    def wavenumbers(self):
        return Wavenumbers.from_frequency(self.frequency, self.material)

    @property
    def wavelength(self):
        return Wavenumbers.from_frequency(self.frequency).wavelength

    def tx_positions(self):
        return self.tx.positions()

    def rx_positions(self):
        return self.rx.positions()

    def with_(self, **changes):
        return replace(self, **changes)

    def relative_receiver(self):
        """Receive centroid and surface offset relative to the tx centroid."""
        t = np.asarray(self.tx.centroid)
        r0 = np.asarray(self.rx.centroid) - t
        return r0, self.D0 - t[2]

    def as_dict(self):
        def arr(a):
            return {"n_antennas": a.n_antennas, "spacing": a.spacing,
                    "tilt": a.tilt, "centroid": list(a.centroid)}
        c = self.contour
        return {
            "frequency": self.frequency, "D0": self.D0,
            "material": self.material.as_dict(), "mode": self.mode.value,
            "tx": arr(self.tx), "rx": arr(self.rx),
            "contour": {k: getattr(c, k) for k in c.__dataclass_fields__},
        }

    def digest(self):
        blob = json.dumps(self.as_dict(), sort_keys=True, default=repr)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass
class ChannelMatrix:
    entries: np.ndarray
    provenance: Provenance
    scenario_hash: str = ""

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        if self.entries.ndim != 2:
            raise ValueError("channel matrix must be two-dimensional")
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("channel matrix has non-finite entries")
        self.provenance = Provenance(self.provenance)

    @property
    def shape(self):
        return self.entries.shape

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def to_csv(self, path):
        """Write one line per receive antenna, entries as ``re+imj``."""
        with open(path, "w", newline="\n") as fh:
            fh.write(f"# provenance={self.provenance.value} "
                     f"scenario={self.scenario_hash}\n")
            for row in self.entries:
                fh.write(",".join(format_complex(v) for v in row) + "\n")

    @classmethod
    def from_csv(cls, path):
        prov, digest = Provenance.EXACT, ""
        rows = []
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if line.startswith("#"):
                    meta = dict(kv.split("=", 1) for kv in line[1:].split())
                    prov = Provenance(meta.get("provenance", prov))
                    digest = meta.get("scenario", "")
                elif line:
                    rows.append([complex(v) for v in line.split(",")])
        return cls(np.array(rows), prov, digest)


def format_complex(v):
    return f"{v.real:.16e}{v.imag:+.16e}j"


def _pairs(scenario):
    r = scenario.rx_positions()
    s = scenario.tx_positions()
    dxy = r[:, None, :2] - s[None, :, :2]
    rho = np.hypot(dxy[..., 0], dxy[..., 1])
    rz = np.broadcast_to(r[:, None, 2], rho.shape)
    sz = np.broadcast_to(s[None, :, 2], rho.shape)
    return rho, rz, sz


def build_exact(scenario, workers=None):
    """Channel matrix from the contour-integrated impulse response.

    Entries are computed once per distinct ``(rho, rz, sz)`` triple, so a
    pair of parallel ULAs costs O(N) integrals rather than O(N^2).

    Raises
    ------
    GuardError
        If any antenna pair is 3600 wavelengths or more apart transversely;
        the message names the offending pair.
    """
    rho, rz, sz = _pairs(scenario)
    lam = scenario.wavelength
    try:
        check_guard(rho, lam)
    except GuardError as exc:
        m, n = np.unravel_index(np.argmax(rho), rho.shape)
        raise GuardError(
            f"{exc} (receive antenna {m}, transmit antenna {n})",
            pair=(int(m), int(n)), ratio=exc.ratio) from None
    # 1e-13 m keys: a phase error of ~1e-10 rad at mmWave
    keys = np.round(np.stack([rho.ravel(), rz.ravel(), sz.ravel()], 1), 13)
    uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
    vals = sommerfeld_many(uniq[:, 0], uniq[:, 1], uniq[:, 2],
                           scenario.wavenumbers, scenario.material,
                           scenario.D0, scenario.mode, scenario.contour,
                           workers=workers)
    H = vals[inverse.ravel()].reshape(rho.shape)
    return ChannelMatrix(H, Provenance.EXACT, scenario.digest())


def build_los_oracle(scenario):
    """Free-space spherical-wave matrix (no surface)."""
    r = scenario.rx_positions()[:, None, :]
    s = scenario.tx_positions()[None, :, :]
    H = weyl_los_closed_form(r, s, scenario.wavenumbers)
    return ChannelMatrix(H, Provenance.LOS_ORACLE, scenario.digest())


def _mirrored(scenario, weight):
    r = scenario.rx_positions()[:, None, :]
    s = scenario.tx_positions()[None, :, :]
    w = scenario.wavenumbers
    H = weight * weyl_los_closed_form(r, mirror(s, scenario.D0), w)
    if scenario.mode.has_los:
        H = H + weyl_los_closed_form(r, s, w)
    return H


def build_image_oracle(scenario):
    """Perfect-conductor reflection: sign-flipped source mirrored in the surface."""
    return ChannelMatrix(_mirrored(scenario, -1.0), Provenance.IMAGE_ORACLE,
                         scenario.digest())


def specular_reflectivity(scenario):
    """Fresnel coefficient at the centroid-to-centroid specular angle."""
    r0, D0 = scenario.relative_receiver()
    theta0 = incidence_angle(r0, D0)
    return complex(fresnel_angle(theta0, scenario.material))


def build_paraxial(scenario):
    """Ray-tracing approximation: image source weighted by ``R(theta0)``."""
    H = _mirrored(scenario, specular_reflectivity(scenario))
    return ChannelMatrix(H, Provenance.PARAXIAL, scenario.digest())


def build(scenario, provenance=Provenance.EXACT, workers=None):
    provenance = Provenance(provenance)
    if provenance is Provenance.EXACT:
        return build_exact(scenario, workers=workers)
    if provenance is Provenance.LOS_ORACLE:
        return build_los_oracle(scenario)
    if provenance is Provenance.IMAGE_ORACLE:
        return build_image_oracle(scenario)
    return build_paraxial(scenario)


__all__ = [
    "Provenance", "Scenario", "ChannelMatrix", "build", "build_exact",
    "build_los_oracle", "build_image_oracle", "build_paraxial",
    "specular_reflectivity", "format_complex",
]

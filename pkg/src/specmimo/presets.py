"""Experiment presets: each turns an :class:`ExperimentConfig` into tables.

A table is a header plus rows of numbers.  Every preset has its own
defaults for the link geometry; keys set explicitly in the config file
override them.  Eigenvalue and spectral-efficiency tables normalise all
channels against the LOS matrix of the same figure so that power gaps
between curves are preserved.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, replace

import numpy as np

from .channel import Scenario, build_exact, build_los_oracle
from .exceptions import ConfigError
from .geometry import (ArraySpec, equivalent_distance, incidence_angle,
                       projected_tilts)
from .materials import Wavenumbers
from .mimo import (analyze, capacity_upper_bound, db_to_linear, dof_count,
                   linear_to_db, normalized_eigenvalues, optimal_spacing,
                   pathloss, SpacingQuery, waterfill_capacity)
from .raytrace import ApertureSweep, run_sweep
from .spectrum import KernelMode

_DEFAULTS = {
    "fig12": {"rx_centroid_m": [1.0, 4.0, 10.0]},
    "fig13": {"rx_centroid_m": [1.0, 4.0, 10.0]},
    "fig14": {"d0_m": 3.0, "range_m": 2.0, "material": "concrete",
              "snr_db": 0.0},
}

# preset -> (sweep variable, default grid)
SWEEPS = {
    "fig5": ("snr_db", np.linspace(-10.0, 30.0, 9)),
    "fig7": ("snr_db", np.linspace(-10.0, 30.0, 9)),
    "fig13": ("snr_db", np.linspace(-10.0, 30.0, 9)),
    "fig8": ("d0_minus_d_m", np.linspace(0.0, 14.5, 30)),
    "fig9": ("d0_minus_d_m", np.linspace(0.0, 15.0, 31)),
    "fig10": ("r0x_m", np.linspace(0.0, 100.0, 21)),
    "fig14": ("ratio", np.array([0.02, 0.05, 0.1, 0.2, 0.4, 0.7, 1.0])),
    "custom": ("snr_db", None),
}


@dataclass
class Table:
    name: str
    header: list
    rows: list

    def write(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(self.header)
            for row in self.rows:
                w.writerow([_fmt(v) for v in row])


def _fmt(v):
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, str):
        return v
    return f"{float(v):.17g}"


class _Setup:
    """Resolved preset parameters (defaults merged with explicit keys)."""

    def __init__(self, cfg, contour, workers):
        self.cfg = cfg
        sc = cfg.scenario
        merged = dict(_DEFAULTS.get(cfg.preset, {}))
        merged.update({k: getattr(sc, k) for k in sc.model_fields_set})
        self.p = {**sc.model_dump(), **merged}
        if "rx_centroid_m" in sc.model_fields_set:
            self.p["range_m"] = None
        elif "range_m" in sc.model_fields_set:
            self.p["rx_centroid_m"] = None
        self.contour = contour
        self.workers = workers
        self.frequency = self.p["frequency_ghz"] * 1e9
        self.wavelength = Wavenumbers.from_frequency(self.frequency).wavelength
        self.D0 = float(self.p["d0_m"])
        self.nt, self.nr = int(self.p["n_tx"]), int(self.p["n_rx"])

    @property
    def r0(self):
        if self.p["rx_centroid_m"] is not None:
            return np.asarray(self.p["rx_centroid_m"], float)
        D = 10.0 if self.p["range_m"] is None else float(self.p["range_m"])
        return np.array([0.0, 0.0, D])

    def spacing(self, distance, snr_db=None, tilt=0.0):
        q = SpacingQuery(distance, max(self.nt, self.nr), self.wavelength,
                         snr_db, tilt, min(self.nt, self.nr))
        return optimal_spacing(q)

    def scenario(self, d, r0=None, material=None, mode=KernelMode.REFLECTED):
        r0 = self.r0 if r0 is None else np.asarray(r0, float)
        material = self.cfg.material() if material is None else material
        tx = ArraySpec(self.nt, d, np.deg2rad(self.p["tx_tilt_deg"]))
        rx = ArraySpec(self.nr, d, np.deg2rad(self.p["rx_tilt_deg"]),
                       tuple(map(float, r0)))
        D0 = self.D0 if KernelMode(mode).has_reflection else np.inf
        return Scenario(self.frequency, tx, rx, D0, material, mode,
                        self.contour)

    def exact(self, sc):
        return build_exact(sc, workers=self.workers)

    def distances(self, r0=None):
        """LOS range, reflected range and the two projected tilts."""
        r0 = self.r0 if r0 is None else r0
        theta0 = incidence_angle(r0, self.D0)
        De = equivalent_distance(theta0, self.D0, r0[2])
        tilts = projected_tilts(r0, self.D0)
        return float(np.linalg.norm(r0)), float(De), tilts


def _grid(cfg, preset):
    var, default = SWEEPS.get(preset, (None, None))
    if cfg.sweep is None:
        if default is None and var is not None:
            return np.array([cfg.scenario.snr_db])
        return default
    if var is None:
        raise ConfigError(f"preset {preset} does not take a sweep")
    if cfg.sweep.variable != var:
        raise ConfigError(f"preset {preset} sweeps {var!r}, "
                          f"not {cfg.sweep.variable!r}")
    return cfg.sweep.grid()


def _db(x):
    return linear_to_db(np.asarray(x, float))


def _eigen_table(s, name, los_spacing, refl_spacing, r0=None):
    los_sc = s.scenario(los_spacing, r0, mode=KernelMode.LOS)
    ref = build_los_oracle(los_sc)
    cols = {"los": normalized_eigenvalues(s.exact(los_sc), ref)}
    for m in s.cfg.figure_materials():
        sc = s.scenario(refl_spacing, r0, m)
        cols[m.name] = normalized_eigenvalues(s.exact(sc), ref)
    header = ["index"] + [f"{k}_db" for k in cols]
    n = min(s.nt, s.nr)
    rows = [[i + 1] + [_db(v[i]) for v in cols.values()] for i in range(n)]
    return [Table(name, header, rows)]


def _se_table(s, name, snrs, los_dist, refl_dist, tilts=None, r0=None):
    los_tilt, refl_tilt = tilts if tilts is not None else (0.0, 0.0)
    header = ["snr_db", "bound", "los"] + [m.name
                                          for m in s.cfg.figure_materials()]
    rows = []
    for snr_db in snrs:
        snr = float(db_to_linear(snr_db))
        d_los = s.spacing(los_dist, snr_db, los_tilt)
        d_ref = s.spacing(refl_dist, snr_db, refl_tilt)
        los_sc = s.scenario(d_los, r0, mode=KernelMode.LOS)
        ref = build_los_oracle(los_sc)
        row = [snr_db, capacity_upper_bound(s.nr, s.nt, snr).bound,
               waterfill_capacity(normalized_eigenvalues(s.exact(los_sc), ref),
                                  snr).capacity]
        for m in s.cfg.figure_materials():
            lam = normalized_eigenvalues(s.exact(s.scenario(d_ref, r0, m)), ref)
            row.append(waterfill_capacity(lam, snr).capacity)
        rows.append(row)
    return [Table(name, header, rows)]


def fig4(s, grid):
    D, _, _ = s.distances()
    d = s.spacing(D)
    return _eigen_table(s, "fig4_eigenvalues", d, d)


def fig5(s, grid):
    D, _, _ = s.distances()
    return _se_table(s, "fig5_spectral_efficiency", grid, D, D)


def fig6(s, grid):
    D, De, _ = s.distances()
    return _eigen_table(s, "fig6_eigenvalues", s.spacing(D), s.spacing(De))


def fig7(s, grid):
    D, De, _ = s.distances()
    return _se_table(s, "fig7_spectral_efficiency", grid, D, De)


def fig8(s, grid):
    mats = s.cfg.figure_materials()
    header = ["d0_minus_d_m", "los_db"] + [f"{m.name}_db" for m in mats]
    rows = []
    for x in grid:
        D = s.D0 - x
        if not 0 < D <= s.D0:
            raise ConfigError(f"d0_minus_d_m={x} puts the receiver outside "
                              f"(0, D0]")
        r0 = np.array([0.0, 0.0, D])
        row = [x, pathloss(r0, s.D0, s.wavelength, los=True).loss_db]
        row += [pathloss(r0, s.D0, s.wavelength, m).loss_db for m in mats]
        rows.append(row)
    return [Table("fig8_pathloss", header, rows)]


def fig9(s, grid):
    """DOF with the spacing frozen at ``D = D0`` and re-optimised per ``D``.

    The end points ``D = D0`` and ``D = 0`` are pulled in by one wavelength
    so that the receive array stays strictly inside the half-space.
    """
    margin = s.wavelength * (1.0 + 1e-9)
    frozen = s.spacing(s.D0)
    thr = s.p["dof_threshold_db"]
    header = ["d0_minus_d_m", "receiver_z_m", "dof_frozen", "dof_optimized"]
    rows = []
    for x in grid:
        D = float(np.clip(s.D0 - x, margin, s.D0 - margin))
        r0 = np.array([0.0, 0.0, D])
        row = [x, D]
        for d in (frozen, s.spacing(2.0 * s.D0 - D)):
            lam = normalized_eigenvalues(s.exact(s.scenario(d, r0)))
            row.append(dof_count(lam, thr))
        rows.append(row)
    return [Table("fig9_dof", header, rows)]


def fig10(s, grid):
    mats = s.cfg.figure_materials()
    rz = float(s.r0[2])
    header = ["r0x_m", "theta0_deg", "los_db"] + [f"{m.name}_db" for m in mats]
    rows = []
    for x in grid:
        r0 = np.array([x, 0.0, rz])
        theta0 = incidence_angle(r0, s.D0)
        row = [x, np.rad2deg(theta0),
               pathloss(r0, s.D0, s.wavelength, los=True).loss_db]
        row += [pathloss(r0, s.D0, s.wavelength, m).loss_db for m in mats]
        rows.append(row)
    return [Table("fig10_pathloss", header, rows)]


def fig12(s, grid):
    D, De, t = s.distances()
    return _eigen_table(s, "fig12_eigenvalues", s.spacing(D, None, t.los),
                        s.spacing(De, None, t.reflected))


def fig13(s, grid):
    D, De, t = s.distances()
    return _se_table(s, "fig13_spectral_efficiency", grid, D, De,
                     (t.los, t.reflected))


def fig14(s, grid):
    if s.nt != s.nr:
        raise ConfigError("fig14 uses square arrays; n_tx must equal n_rx")
    sweep = ApertureSweep(tuple(float(g) for g in grid), float(s.r0[2]),
                          s.D0, float(s.p["snr_db"]), s.cfg.material(),
                          s.frequency, s.contour)
    pts = run_sweep(sweep, workers=s.workers)
    header = ["ratio", "n_antennas", "se_exact", "se_paraxial", "rel_gap"]
    rows = [[p.ratio, p.n_antennas, p.se_exact, p.se_paraxial, p.rel_gap]
            for p in pts]
    return [Table("fig14_aperture_sweep", header, rows)]


def custom(s, grid):
    """One scenario from the config; spacing defaults to the optimal one."""
    mode = KernelMode(s.p["mode"])
    r0 = s.r0
    material = s.cfg.material()
    D, De, t = s.distances() if mode.has_reflection else (
        float(np.linalg.norm(r0)), None, None)
    refl = mode is KernelMode.REFLECTED
    sc0 = None
    rows = []
    for snr_db in grid:
        d = s.p["spacing_m"]
        if d is None:
            d = s.spacing(De, snr_db, t.reflected) if refl else \
                s.spacing(D, snr_db, t.los if t else 0.0)
        sc = s.scenario(d, r0, material, mode)
        H = s.exact(sc)
        sc0 = sc0 or (sc, H)
        pl = pathloss(r0, s.D0, s.wavelength, material, los=not refl)
        report = analyze(H, snr_db, reference=build_los_oracle(
            sc.with_(mode=KernelMode.LOS, D0=np.inf)),
            pathloss_db=pl.loss_db, threshold_db=s.p["dof_threshold_db"])
        rows.append(report.csv_row(sc.digest()))
    tables = [Table("custom_report", list(report.CSV_HEADER), rows)]
    return tables, sc0[1]


PRESET_FUNCS = {f.__name__: f for f in (fig4, fig5, fig6, fig7, fig8, fig9,
                                         fig10, fig12, fig13, fig14, custom)}


def run_preset(cfg, contour=None, workers=None):
    """Compute the tables of ``cfg.preset``.

    Returns
    -------
    tables : list of Table
    channel : ChannelMatrix or None
        The channel matrix of the first point for the ``custom`` preset.
    """
    contour = cfg.contour.to_config() if contour is None else contour
    s = _Setup(cfg, contour, workers)
    grid = _grid(cfg, cfg.preset)
    out = PRESET_FUNCS[cfg.preset](s, grid)
    if cfg.preset == "custom":
        return out
    return out, None


def with_indicator(contour, indicator):
    if indicator is None:
        return contour
    if indicator not in ("hard", "tail"):
        raise ConfigError("indicator must be 'hard' or 'tail'")
    return replace(contour, tail=indicator == "tail")

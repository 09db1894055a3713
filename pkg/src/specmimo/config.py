"""Experiment configuration files (TOML) and their validation.

Units are spelled out in key names.  Unknown keys anywhere in the file
are rejected.  Example::

    preset = "fig5"
    out_dir = "results/fig5"

    [scenario]
    frequency_ghz = 57.5
    d0_m = 15.0
    range_m = 10.0

    [contour]
    n_nodes = 4096

    [sweep]
    variable = "snr_db"
    start = -10.0
    stop = 30.0
    steps = 9
"""
from __future__ import annotations

from typing import List, Literal, Optional

import numpy as np
import tomli
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from .exceptions import ConfigError
from .materials import Material, builtin_materials, get_material
from .quadrature import ContourConfig

PRESETS = ("fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig12",
           "fig13", "fig14", "custom")


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class MaterialEntry(_Strict):
    name: str
    n2_real: float = 1.0
    n2_imag: float = 0.0
    perfect_conductor: bool = False

    def to_material(self):
        return Material(self.name, complex(self.n2_real, self.n2_imag),
                        self.perfect_conductor)


class ScenarioSection(_Strict):
    frequency_ghz: float = 57.5
    d0_m: float = 15.0
    range_m: Optional[float] = None
    rx_centroid_m: Optional[List[float]] = None
    n_tx: int = 8
    n_rx: int = 8
    spacing_m: Optional[float] = None
    tx_tilt_deg: float = 0.0
    rx_tilt_deg: float = 0.0
    material: str = "concrete"
    materials: Optional[List[str]] = None
    mode: Literal["los", "reflected", "total"] = "reflected"
    snr_db: float = 0.0
    dof_threshold_db: float = 40.0

    @model_validator(mode="after")
    def _check(self):
        if self.frequency_ghz <= 0 or self.d0_m <= 0:
            raise ValueError("frequency_ghz and d0_m must be positive")
        if self.n_tx < 1 or self.n_rx < 1:
            raise ValueError("n_tx and n_rx must be >= 1")
        if self.range_m is not None and self.rx_centroid_m is not None:
            raise ValueError("give either range_m or rx_centroid_m, not both")
        if self.rx_centroid_m is not None and len(self.rx_centroid_m) != 3:
            raise ValueError("rx_centroid_m needs three coordinates")
        if self.spacing_m is not None and self.spacing_m <= 0:
            raise ValueError("spacing_m must be positive")
        return self


class ContourSection(_Strict):
    kappa_min_ratio: float = 1e-3
    n_nodes: int = 2048
    rel_tol: float = 1e-9
    tail: bool = True
    order: int = 16
    phase_per_panel: float = 6.0
    verify: bool = False

    def to_config(self):
        return ContourConfig(**self.model_dump())


class SweepSection(_Strict):
    variable: str
    start: Optional[float] = None
    stop: Optional[float] = None
    steps: int = 1
    values: Optional[List[float]] = None

    @model_validator(mode="after")
    def _check(self):
        if self.values is None and self.start is None:
            raise ValueError("sweep needs either values or start/stop/steps")
        if self.steps < 1:
            raise ValueError("sweep steps must be >= 1")
        return self

    def grid(self):
        if self.values is not None:
            return np.asarray(self.values, dtype=float)
        if self.steps == 1 or self.stop is None:
            return np.array([self.start], dtype=float)
        return np.linspace(self.start, self.stop, self.steps)


class ExperimentConfig(_Strict):
    preset: Literal[PRESETS]
    out_dir: Optional[str] = None
    scenario: ScenarioSection = ScenarioSection()
    contour: ContourSection = ContourSection()
    sweep: Optional[SweepSection] = None
    materials: List[MaterialEntry] = []

    def material_table(self):
        table = builtin_materials()
        for entry in self.materials:
            m = entry.to_material()
            table = [t for t in table if t.name != m.name] + [m]
        return table

    def material(self, name=None):
        return get_material(name or self.scenario.material,
                            self.material_table())

    def figure_materials(self):
        names = self.scenario.materials
        if names is None:
            return self.material_table()
        return [self.material(n) for n in names]


def parse_config(text):
    """Validate TOML text; raises :class:`ConfigError` on any problem."""
    try:
        raw = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}") from None
    try:
        cfg = ExperimentConfig.model_validate(raw)
        cfg.material_table()
        names = cfg.scenario.materials or []
        for n in names + [cfg.scenario.material]:
            cfg.material(n)
        for entry in cfg.materials:
            entry.to_material()
        cfg.contour.to_config()
    except (ValidationError, KeyError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return parse_config(text)

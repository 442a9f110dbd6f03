"""Flat ``key = value`` run configuration.

Lengths are in micrometres and energies in keV. ``component`` may repeat::

    energy_kev = 8.05
    focal_length_um = 460000
    component = 1, 0, 112        # m, j, half-zone count
    component = 3, 2, max        # ... or 'max' (minimum-feature limit)
    component = 5, 4, 900.0      # ... or an outer radius in um (has a '.')
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ConfigError
from .geometry import CIRCULAR, LINEAR, DesignParams, assemble_compound
from .materials import (energy_to_wavelength, load_constants, pi_height, read_constants_csv,
                        silicon_table, wavelength_to_energy)

UM = 1e-6

_FLOAT_KEYS = {
    "energy_kev", "wavelength_um", "focal_length_um", "relief_height_um",
    "membrane_thickness_um", "min_feature_um", "spacing_um", "out_spacing_um", "extent_um",
    "integration_radius_um", "source_size_um", "source_distance_um",
}
_STR_KEYS = {"geometry", "material", "material_table", "out_dir"}
_KNOWN = _FLOAT_KEYS | _STR_KEYS | {"component"}


@dataclass(frozen=True)
class RunConfig:
    energy: float  # eV
    wavelength: float  # m
    focal_length: float
    plan: tuple
    material_table: Path | None = None
    material: str = "Si"
    geometry: str = CIRCULAR
    relief_height: float | None = None
    membrane_thickness: float = 0.0
    min_feature: float = 0.4e-6
    spacing: float | None = None
    out_spacing: float | None = None
    extent: float | None = None
    integration_radius: float | None = None
    source_size: float = 0.0
    source_distance: float | None = None
    out_dir: Path = Path("out")
    source: Path | None = field(default=None, compare=False)

    def constants_table(self):
        if self.material_table is None:
            return silicon_table()
        return read_constants_csv(self.material_table, material=self.material)

    def optical_constants(self):
        return load_constants(self.constants_table(), self.energy)

    def design(self):
        return DesignParams(self.wavelength, self.focal_length)

    def build_plate(self, oc=None):
        oc = oc or self.optical_constants()
        relief = pi_height(oc) if self.relief_height is None else self.relief_height
        return assemble_compound(self.design(), self.plan, relief, self.membrane_thickness,
                                 self.material, self.min_feature, self.geometry)


def _parse_component(text):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ConfigError(f"component needs 'm, j, count|radius_um|max', got {text!r}")
    try:
        m, j = int(parts[0]), int(parts[1])
    except ValueError:
        raise ConfigError(f"component order and offset must be integers: {text!r}") from None
    ext = parts[2]
    if ext.lower() == "max":
        return m, j, None
    try:
        if re.fullmatch(r"[+-]?\d+", ext):
            return m, j, int(ext)
        return m, j, float(ext) * UM
    except ValueError:
        raise ConfigError(f"bad component extent {ext!r}") from None


def parse_config(text, base_dir=Path(".")):
    values = {}
    plan = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KNOWN:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key == "component":
            plan.append(_parse_component(value))
        elif key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        elif key in _FLOAT_KEYS:
            try:
                values[key] = float(value)
            except ValueError:
                raise ConfigError(f"line {lineno}: {key} must be a number, got {value!r}") from None
        else:
            values[key] = value

    if ("energy_kev" in values) == ("wavelength_um" in values):
        raise ConfigError("give exactly one of energy_kev or wavelength_um")
    if "energy_kev" in values:
        energy = values["energy_kev"] * 1e3
        if energy <= 0:
            raise ConfigError("energy_kev must be positive")
        wavelength = energy_to_wavelength(energy)
    else:
        wavelength = values["wavelength_um"] * UM
        if wavelength <= 0:
            raise ConfigError("wavelength_um must be positive")
        energy = wavelength_to_energy(wavelength)
    if "focal_length_um" not in values:
        raise ConfigError("focal_length_um is required")
    if values["focal_length_um"] <= 0:
        raise ConfigError("focal_length_um must be positive")
    if not plan:
        raise ConfigError("at least one 'component = m, j, extent' line is required")
    geometry = values.get("geometry", CIRCULAR)
    if geometry not in (CIRCULAR, LINEAR):
        raise ConfigError(f"geometry must be circular or linear, got {geometry!r}")
    table = None
    if "material_table" in values:
        table = Path(values["material_table"])
        if not table.is_absolute():
            table = base_dir / table
        if not table.exists():
            raise ConfigError(f"material table {table} does not exist")

    def length(key, default=None):
        return values[key] * UM if key in values else default

    return RunConfig(
        energy=energy,
        wavelength=wavelength,
        focal_length=values["focal_length_um"] * UM,
        plan=tuple(plan),
        material_table=table,
        material=values.get("material", "Si"),
        geometry=geometry,
        relief_height=length("relief_height_um"),
        membrane_thickness=length("membrane_thickness_um", 0.0),
        min_feature=length("min_feature_um", 0.4e-6),
        spacing=length("spacing_um"),
        out_spacing=length("out_spacing_um"),
        extent=length("extent_um"),
        integration_radius=length("integration_radius_um"),
        source_size=length("source_size_um", 0.0),
        source_distance=length("source_distance_um"),
        out_dir=Path(values.get("out_dir", "out")),
    )


def load_config(path):
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file {path} does not exist")
    cfg = parse_config(path.read_text(encoding="utf-8"), base_dir=path.parent)
    return replace(cfg, source=path)

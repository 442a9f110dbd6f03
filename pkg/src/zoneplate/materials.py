"""X-ray optical constants and the thin-element material quantities.

All lengths are in metres and energies in eV. The refractive index is
n = 1 - delta + i*beta; the transmission phase is negative (retardation).
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import DomainError, FormatError, RangeError

HC_EV_UM = 1.2398419843  # eV * um
HC_EV_M = HC_EV_UM * 1e-6


def energy_to_wavelength(energy):
    """Photon energy (eV) -> wavelength (m)."""
    if energy <= 0:
        raise DomainError(f"energy must be positive, got {energy!r}")
    return HC_EV_M / energy


def wavelength_to_energy(wavelength):
    if wavelength <= 0:
        raise DomainError(f"wavelength must be positive, got {wavelength!r}")
    return HC_EV_M / wavelength


@dataclass(frozen=True)
class OpticalConstants:
    energy: float
    wavelength: float
    delta: float
    beta: float
    material: str = ""

    @classmethod
    def at_energy(cls, energy, delta, beta, material=""):
        return cls(energy, energy_to_wavelength(energy), delta, beta, material)


@dataclass(frozen=True)
class ConstantsTable:
    material: str
    energies: tuple
    deltas: tuple
    betas: tuple

    def __post_init__(self):
        n = len(self.energies)
        if n < 2:
            raise FormatError(f"{self.material or 'table'}: need at least 2 rows, got {n}")
        if not (len(self.deltas) == len(self.betas) == n):
            raise FormatError("energy, delta and beta columns differ in length")
        e = np.asarray(self.energies, dtype=float)
        if np.any(e <= 0) or np.any(np.diff(e) <= 0):
            raise FormatError("energies must be positive and strictly increasing")
        if min(self.deltas) <= 0 or min(self.betas) <= 0:
            raise FormatError("delta and beta must be positive")

    @property
    def energy_range(self):
        return self.energies[0], self.energies[-1]


def read_constants_csv(source, material=None):
    """Parse an ``energy_eV,delta,beta`` CSV from a path or an open text stream."""
    if isinstance(source, (str, Path)):
        path = Path(source)
        text = path.read_text(encoding="utf-8")
        material = material or path.stem
    else:
        text = source.read()
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row and not row[0].lstrip().startswith("#")]
    if not rows:
        raise FormatError("empty optical-constants file")
    header = [h.strip() for h in rows[0]]
    try:
        ie, idl, ib = (header.index(k) for k in ("energy_eV", "delta", "beta"))
    except ValueError:
        raise FormatError(f"header must contain energy_eV, delta, beta; got {header}") from None
    energies, deltas, betas = [], [], []
    for lineno, row in enumerate(rows[1:], start=2):
        try:
            energies.append(float(row[ie]))
            deltas.append(float(row[idl]))
            betas.append(float(row[ib]))
        except (IndexError, ValueError):
            raise FormatError(f"bad numeric row {lineno}: {row}") from None
    return ConstantsTable(material or "", tuple(energies), tuple(deltas), tuple(betas))


def silicon_table():
    """The bundled 7-9 keV silicon table (Chantler/Elam via xraydb, 2.33 g/cm^3)."""
    with resources.files("zoneplate.data").joinpath("si.csv").open("r", encoding="utf-8") as fh:
        return read_constants_csv(fh, material="Si")


def load_constants(table, energy):
    """Log-log interpolate delta and beta at ``energy`` (eV)."""
    lo, hi = table.energy_range
    if not lo <= energy <= hi:
        raise RangeError(f"energy {energy} eV outside table range [{lo}, {hi}] eV")
    le = np.log(np.asarray(table.energies))
    x = math.log(energy)
    k = int(np.searchsorted(le, x))
    if k < len(le) and le[k] == x:
        delta, beta = table.deltas[k], table.betas[k]
    else:
        k0, k1 = k - 1, k
        w = (x - le[k0]) / (le[k1] - le[k0])

        def interp(v):
            return math.exp((1 - w) * math.log(v[k0]) + w * math.log(v[k1]))

        delta, beta = interp(table.deltas), interp(table.betas)
    return OpticalConstants.at_energy(energy, delta, beta, table.material)


def pi_height(oc):
    """Relief thickness giving a pi phase shift, lambda / (2 delta)."""
    if oc.delta <= 0:
        raise DomainError(f"delta must be positive, got {oc.delta!r}")
    return oc.wavelength / (2.0 * oc.delta)


def attenuation_length(oc):
    """1/e intensity attenuation length, lambda / (4 pi beta)."""
    if oc.beta <= 0:
        raise DomainError(f"beta must be positive, got {oc.beta!r}")
    return oc.wavelength / (4.0 * math.pi * oc.beta)


def phase_retardation(oc, thickness):
    """Phase delay 2 pi delta d / lambda (radians, positive for delta > 0)."""
    if thickness < 0:
        raise DomainError(f"thickness must be non-negative, got {thickness!r}")
    return 2.0 * math.pi * oc.delta * thickness / oc.wavelength


def amplitude_transmission(oc, thickness):
    """Thin-element complex transmission exp(-2 pi (beta + i delta) d / lambda)."""
    if thickness < 0:
        raise DomainError(f"thickness must be non-negative, got {thickness!r}")
    if thickness == 0:
        return 1.0 + 0.0j
    k = 2.0 * math.pi * thickness / oc.wavelength
    return complex(math.exp(-k * oc.beta) * math.cos(k * oc.delta),
                   -math.exp(-k * oc.beta) * math.sin(k * oc.delta))


def intensity_transmission(oc, thickness):
    return abs(amplitude_transmission(oc, thickness)) ** 2


def relief_average_transmission(oc, relief_height):
    """Mean intensity transmission of a 50/50 ridge/groove relief."""
    return 0.5 * (1.0 + math.exp(-relief_height / attenuation_length(oc)))

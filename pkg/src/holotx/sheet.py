"""Analytic shunt-impedance-sheet model of transmission and reflection.

An infinite homogeneous sheet of impedance Z across a free-space line:
s21 = 2Z/(2Z + eta0), s11 = -eta0/(2Z + eta0). This is the ideal
surrogate for a full-wave periodic-patch simulation; agreement with
measured patch data is qualitative, not exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from holotx.errors import DomainError
from holotx.waves import ETA0


@dataclass(frozen=True)
class SheetImpedance:
    """Sheet impedance R + jX in ohms, R >= 0."""

    resistance: float
    reactance: float

    def __post_init__(self):
        if self.resistance < 0:
            raise DomainError(
                f"sheet resistance must be >= 0, got {self.resistance}")

    @property
    def z(self) -> complex:
        return complex(self.resistance, self.reactance)


class ZoneLabel(Enum):
    TRANSMISSION_ZONE = "transmission"
    FORBIDDEN_ZONE = "forbidden"


def shunt_sheet_sparams(z: SheetImpedance, eta0: float = ETA0):
    """S-parameters of a shunt sheet on a free-space line.

    Returns (s11, s21). A perfectly shorting sheet (Z = 0) reflects
    everything: (-1, 0).
    """
    if eta0 <= 0:
        raise DomainError(f"eta0 must be positive, got {eta0}")
    zz = z.z
    if zz == 0:
        return (-1.0 + 0.0j, 0.0 + 0.0j)
    den = 2.0 * zz + eta0
    return (-eta0 / den, 2.0 * zz / den)


def classify_zone(z: SheetImpedance, threshold_db: float = -1.0,
                  eta0: float = ETA0) -> ZoneLabel:
    """Transmission zone iff |s21| in dB clears the threshold."""
    if threshold_db >= 0:
        raise DomainError(
            f"threshold must be negative dB, got {threshold_db}")
    _, s21 = shunt_sheet_sparams(z, eta0)
    mag = abs(s21)
    if mag == 0.0:
        return ZoneLabel.FORBIDDEN_ZONE
    s21_db = 20.0 * math.log10(mag)
    if s21_db >= threshold_db:
        return ZoneLabel.TRANSMISSION_ZONE
    return ZoneLabel.FORBIDDEN_ZONE


def reactance_from_phase(phase_deg: float, eta0: float = ETA0) -> float:
    """Shunt reactance whose lossless-sheet transmission phase is `phase_deg`.

    X = eta0 / (2 tan(phase)). The phase is reduced exactly into
    [0, 180) first, so inputs 180 degrees apart give bit-identical
    results (fmod is exact in IEEE arithmetic).
    """
    if eta0 <= 0:
        raise DomainError(f"eta0 must be positive, got {eta0}")
    reduced = math.fmod(phase_deg, 180.0)
    if reduced < 0.0:
        reduced += 180.0
    if reduced == 0.0:
        raise DomainError("infinite reactance (transparent sheet)")
    if reduced == 90.0:
        return 0.0
    return eta0 / (2.0 * math.tan(math.radians(reduced)))


def sweep_sheet(resistance: float, reactance_range, step: float,
                eta0: float = ETA0):
    """Sweep reactance at fixed resistance.

    Returns an array of rows (X, |s11| dB, |s21| dB, s21 phase deg).
    """
    if step <= 0:
        raise DomainError(f"step must be positive, got {step}")
    lo, hi = reactance_range
    if hi < lo:
        raise DomainError("empty reactance range")
    xs = np.arange(lo, hi + 0.5 * step, step)
    if len(xs) == 0:
        raise DomainError("empty reactance range")
    rows = np.empty((len(xs), 4))
    floor = 1e-30
    for i, x in enumerate(xs):
        s11, s21 = shunt_sheet_sparams(SheetImpedance(resistance, x), eta0)
        rows[i] = (x,
                   20.0 * math.log10(max(abs(s11), floor)),
                   20.0 * math.log10(max(abs(s21), floor)),
                   math.degrees(np.angle(s21)))
    return rows

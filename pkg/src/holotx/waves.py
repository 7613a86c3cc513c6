"""Complex scalar wave fields and two-step holography math.

Reference and object waves, interference intensity, and reconstruction.
Time convention is exp(+j w t), so propagating waves carry exp(-j k r).
All lengths are in mm and frequencies in GHz throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from holotx.errors import DomainError

# Speed of light in mm*GHz: one unit system for every module.
C_MM_GHZ = 299.792458
# Free-space wave impedance, ohm.
ETA0 = 376.730


def wavelength_mm(freq_ghz: float) -> float:
    """Free-space wavelength in mm for a frequency in GHz."""
    if freq_ghz <= 0:
        raise DomainError(f"frequency must be positive, got {freq_ghz} GHz")
    return C_MM_GHZ / freq_ghz


def wavenumber(freq_ghz: float) -> float:
    """Free-space wavenumber k0 = 2*pi*f/c in rad/mm."""
    return 2.0 * np.pi / wavelength_mm(freq_ghz)


@dataclass(frozen=True)
class BeamSpec:
    """One desired radiated pencil beam.

    theta0_deg, phi0_deg : beam direction in degrees (theta0 < 90)
    weight : complex excitation weight (must be nonzero)
    """

    theta0_deg: float
    phi0_deg: float
    weight: complex = 1.0 + 0.0j

    def __post_init__(self):
        if not (0.0 <= self.theta0_deg < 90.0):
            raise DomainError(
                f"beam theta0 must lie in [0, 90), got {self.theta0_deg}")
        if self.weight == 0:
            raise DomainError("beam weight must be nonzero")

    @property
    def direction_cosines(self) -> tuple[float, float]:
        """(sin t cos p, sin t sin p) of the beam direction."""
        th = np.radians(self.theta0_deg)
        ph = np.radians(self.phi0_deg)
        return np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph)


@dataclass(frozen=True)
class FeedGeometry:
    """Feed phase-center position and pattern exponent.

    xf_mm, yf_mm : feed ground projection on the aperture plane
    h_mm : height above the aperture plane (> 0)
    q : cos^q pattern exponent (> 0)
    """

    xf_mm: float = 0.0
    yf_mm: float = 0.0
    h_mm: float = 173.9496
    q: float = 5.2

    def __post_init__(self):
        if self.h_mm <= 0:
            raise DomainError(f"feed height must be positive, got {self.h_mm}")
        if self.q <= 0:
            raise DomainError(f"feed exponent q must be positive, got {self.q}")


def plane_wave(point, beam: BeamSpec, k0: float):
    """Object plane wave toward (theta0, phi0), evaluated on the z = 0 plane.

    Returns weight * exp(-j k0 (x su + y sv)) with (su, sv) the beam
    direction cosines. Unit magnitude for unit weight. `point` is (x, y)
    in mm; arrays broadcast.
    """
    if k0 <= 0:
        raise DomainError(f"k0 must be positive, got {k0}")
    x, y = point
    su, sv = beam.direction_cosines
    return beam.weight * np.exp(-1j * k0 * (np.asarray(x) * su + np.asarray(y) * sv))


def spherical_wave(point, feed: FeedGeometry, k0: float):
    """Unit-magnitude spherical reference wave exp(-j k0 r) from the feed.

    r = sqrt((x-xf)^2 + (y-yf)^2 + h^2). The amplitude taper of a real
    feed lives in holotx.feed, not here.
    """
    if k0 <= 0:
        raise DomainError(f"k0 must be positive, got {k0}")
    x, y = point
    r = np.sqrt((np.asarray(x) - feed.xf_mm) ** 2
                + (np.asarray(y) - feed.yf_mm) ** 2 + feed.h_mm ** 2)
    return np.exp(-1j * k0 * r)


def superpose(beams, point, k0: float):
    """Coherent superposition of object plane waves."""
    if len(beams) == 0:
        raise DomainError("no object beams")
    total = plane_wave(point, beams[0], k0)
    for b in beams[1:]:
        total = total + plane_wave(point, b, k0)
    return total


def interference_intensity(ref, obj):
    """|ref + obj|^2, the recorded interference pattern."""
    s = np.asarray(ref) + np.asarray(obj)
    return (s * np.conj(s)).real


def reconstruct(intensity, ref):
    """Reconstruction wave: intensity times the reference wave.

    The secondary (illumination) wave is taken equal to the reference
    wave; the object-wave component obj*|ref|^2 is embedded in the result.
    """
    intensity = np.asarray(intensity)
    if np.any(intensity < 0):
        raise DomainError("intensity must be non-negative")
    return intensity * np.asarray(ref)

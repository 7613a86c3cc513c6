"""Continuous admittance hologram, forbidden-zone shift, and lattice sampling.

The hologram susceptance is X + M Re(psi_obj psi_ref*). Raw values near
zero fall in the transmitarray forbidden zone, so a piecewise shift moves
the negative branch up by A and the positive branch down by B, landing
every cell inside the realizable susceptance window [B, A].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from holotx.errors import DomainError
from holotx.waves import (BeamSpec, FeedGeometry, spherical_wave, superpose,
                          wavelength_mm, wavenumber)

BRANCH_NEG = "neg"
BRANCH_POS = "pos"


@dataclass(frozen=True)
class ModulationParams:
    """Average susceptance X, modulation depth M, and shift constants A, B.

    Defaults are the design constants of the 12 GHz reference antenna.
    A and B are the maximum and minimum of the realizable susceptance
    range; shift_a raises the negative branch, shift_b lowers the
    positive branch.
    """

    x_avg_s: float = -0.000041
    m_depth_s: float = 0.009680
    shift_a_s: float = 0.01287
    shift_b_s: float = -0.01227

    def __post_init__(self):
        if self.m_depth_s <= 0:
            raise DomainError("modulation depth M must be positive")
        if not (self.shift_a_s > 0 > self.shift_b_s):
            raise DomainError("need shift A > 0 > shift B")


@dataclass(frozen=True)
class AntennaSpec:
    """Full design description of one holographic transmitarray."""

    freq0_ghz: float = 12.0
    aperture_radius_mm: float = 132.0
    period_mm: float = 6.6
    feed: FeedGeometry = field(default_factory=FeedGeometry)
    beams: tuple = (BeamSpec(0.0, 0.0),)
    modulation: ModulationParams = field(default_factory=ModulationParams)
    table_ref: str = "synthetic"

    def __post_init__(self):
        if self.period_mm <= 0:
            raise DomainError("lattice period must be positive")
        if self.aperture_radius_mm < self.period_mm:
            raise DomainError("aperture radius must be at least one period")
        if len(self.beams) == 0:
            raise DomainError("no object beams")
        lam_half = wavelength_mm(self.freq0_ghz) / 2.0
        if not self.period_mm < lam_half:
            raise DomainError(
                f"Nyquist violation: period {self.period_mm} mm must be "
                f"below half a wavelength ({lam_half:.2f} mm)")

    @property
    def k0(self) -> float:
        return wavenumber(self.freq0_ghz)


@dataclass
class HologramMap:
    """Sampled hologram on the cell lattice.

    Arrays are index-aligned per cell, ordered row-major by y then x.
    lattice i/j are integer cell indices (x = i*period, y = j*period).
    radius_mm and clamped stay NaN/False until the unit-cell inversion
    fills them.
    """

    spec: AntennaSpec
    i: np.ndarray
    j: np.ndarray
    x_mm: np.ndarray
    y_mm: np.ndarray
    b_raw_s: np.ndarray
    b_shifted_s: np.ndarray
    branch: np.ndarray
    incidence_deg: np.ndarray
    radius_mm: np.ndarray
    clamped: np.ndarray

    def __len__(self) -> int:
        return len(self.x_mm)

    @property
    def clamp_fraction(self) -> float:
        return float(np.count_nonzero(self.clamped)) / max(len(self), 1)

    @property
    def radii_filled(self) -> bool:
        return bool(np.all(np.isfinite(self.radius_mm)))


def continuous_hologram(point, spec: AntennaSpec):
    """Raw hologram susceptance X + M Re(psi_obj_total conj(psi_ref)).

    For a single unit-weight beam this reduces to
    X + M cos(k0 (r - x su - y sv)). Output lies in X +/- M*sum|w|.
    """
    k0 = spec.k0
    obj = superpose(spec.beams, point, k0)
    ref = spherical_wave(point, spec.feed, k0)
    interference = np.real(obj * np.conj(ref))
    return spec.modulation.x_avg_s + spec.modulation.m_depth_s * interference


def htafz_shift(b_raw_s, p: ModulationParams):
    """Piecewise shift moving raw susceptance out of the forbidden zone.

    b < 0 -> b + A (branch 'neg'); b >= 0 -> b + B (branch 'pos').
    Zero is a measure-zero tie broken toward the positive branch.
    Returns (b_shifted, branch).
    """
    b = np.asarray(b_raw_s)
    neg = b < 0
    shifted = np.where(neg, b + p.shift_a_s, b + p.shift_b_s)
    branch = np.where(neg, BRANCH_NEG, BRANCH_POS)
    if b.ndim == 0:
        return float(shifted), str(branch)
    return shifted, branch


def sample_aperture(spec: AntennaSpec) -> HologramMap:
    """Sample the hologram on a square lattice over the circular aperture.

    One cell center sits exactly at the aperture center; a cell is kept
    iff its center lies within the aperture radius (integer index-space
    test, exact and symmetric). Cells are ordered row-major by y then x.
    """
    p = spec.period_mm
    n_max = int(np.floor(spec.aperture_radius_mm / p)) + 1
    rng = np.arange(-n_max, n_max + 1)
    jj, ii = np.meshgrid(rng, rng, indexing="ij")  # rows over y, cols over x
    keep = (ii * ii + jj * jj) <= (spec.aperture_radius_mm / p) ** 2
    i = ii[keep].astype(int)
    j = jj[keep].astype(int)
    if len(i) == 0:
        raise DomainError("zero cells retained on the aperture")
    x = i * p
    y = j * p

    b_raw = continuous_hologram((x, y), spec)
    b_shifted, branch = htafz_shift(b_raw, spec.modulation)
    rho = np.hypot(x - spec.feed.xf_mm, y - spec.feed.yf_mm)
    incidence = np.degrees(np.arctan2(rho, spec.feed.h_mm))

    n = len(x)
    return HologramMap(
        spec=spec,
        i=i, j=j, x_mm=x.astype(float), y_mm=y.astype(float),
        b_raw_s=np.asarray(b_raw, float),
        b_shifted_s=np.asarray(b_shifted, float),
        branch=np.asarray(branch),
        incidence_deg=incidence,
        radius_mm=np.full(n, np.nan),
        clamped=np.zeros(n, dtype=bool),
    )

"""Unit-cell tables: equivalent-circuit synthesis, CSV ingestion, lookup.

The physical cell is a stack of identical metal layers (circular patch
inside a square ring, a shunt parallel-LC per layer) separated by
substrate and air-gap line sections, cascaded as 2x2 transmission (ABCD)
matrices.

Synthetic tables store the cell's transfer susceptance Im(-1/B) taken
from the total ABCD matrix. That quantity has poles at the cell's
structural resonances; the poles split the radius sweep into monotone
usable segments exactly the way measured susceptance curves are trimmed
at their resonance arrows, and the segment endpoints on either side of a
removed resonance are physically adjacent radii. Tables loaded from CSV
carry only S-parameters, so their susceptance is derived with the
shunt-equivalent extraction Y = (2/eta0)(1/s21 - 1), which is exact for
any symmetric shunt-representable cell.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from holotx.errors import DomainError
from holotx.waves import C_MM_GHZ, ETA0

# Segment detection: ignore records whose susceptance magnitude exceeds
# B_CLIP (deep resonance flanks) or whose transmission is below FLOOR_DB.
B_CLIP_S = 0.08
FLOOR_DB = -10.0

DEFAULT_FREQS_GHZ = (11.0, 11.5, 12.0, 12.5, 13.0)
DEFAULT_ANGLES_DEG = tuple(range(0, 51, 5))
DEFAULT_RADII_MM = tuple(np.round(np.arange(0.1, 2.9001, 0.02), 10))

CSV_SCHEMA = "freq_ghz,theta_deg,radius_mm,s11_re,s11_im,s21_re,s21_im"


@dataclass(frozen=True)
class LayerCircuit:
    """Equivalent circuit of one layer: shunt parallel LC with series loss."""

    c_shunt_f: float
    l_shunt_h: float
    r_loss_ohm: float = 0.5

    def __post_init__(self):
        if self.c_shunt_f <= 0 or self.l_shunt_h <= 0:
            raise DomainError("layer L and C must be positive")
        if self.r_loss_ohm < 0:
            raise DomainError("layer loss must be >= 0")

    def admittance(self, freq_ghz: float) -> complex:
        w = 2.0 * math.pi * freq_ghz * 1e9
        y_lc = 1j * (w * self.c_shunt_f - 1.0 / (w * self.l_shunt_h))
        if y_lc == 0:
            return 0.0 + 0.0j
        return 1.0 / (self.r_loss_ohm + 1.0 / y_lc)


@dataclass(frozen=True)
class Stackup:
    """Layer count and spacer geometry of the cell stack."""

    n_layers: int = 3
    substrate_thickness_mm: float = 0.508
    substrate_eps_r: float = 3.55
    air_gap_mm: float = 6.0

    def __post_init__(self):
        if self.n_layers < 1:
            raise DomainError("need at least one layer")
        if min(self.substrate_thickness_mm, self.substrate_eps_r,
               self.air_gap_mm) <= 0:
            raise DomainError("stackup dimensions must be positive")


@dataclass(frozen=True)
class CellGeometry:
    """Printed geometry of one cell."""

    radius_mm: float
    ring_width_mm: float = 0.2
    period_mm: float = 6.6

    def __post_init__(self):
        if not (0 < self.radius_mm < self.period_mm / 2):
            raise DomainError(
                f"patch radius {self.radius_mm} must fit inside the cell")


@dataclass(frozen=True)
class PatchRingMap:
    """Radius -> (C, L) calibration of the patch/ring layer.

    C(R) = c0 + c1 R^2 (patch-area scaling); L(R) = l0/(1 + l1 R)
    (ring loading decreases slowly as the patch grows). Defaults are
    calibrated once against the qualitative cell criteria: band-pass
    response, a contiguous radius run above -1 dB, at least 180 degrees
    of transmission-phase span, and usable-branch susceptance coverage
    of the design window at every incidence bin.
    """

    c0_f: float = 5.6e-14
    c1_f_per_mm2: float = 1.3e-14
    l0_h: float = 1.5e-9
    l1_per_mm: float = 0.02
    r_loss_ohm: float = 0.5

    def layer(self, radius_mm: float) -> LayerCircuit:
        c = self.c0_f + self.c1_f_per_mm2 * radius_mm ** 2
        l = self.l0_h / (1.0 + self.l1_per_mm * radius_mm)
        return LayerCircuit(c, l, self.r_loss_ohm)

    def check_monotone(self, radii) -> None:
        r = np.asarray(radii, float)
        c = self.c0_f + self.c1_f_per_mm2 * r ** 2
        l = self.l0_h / (1.0 + self.l1_per_mm * r)
        if not np.all(np.diff(c) > 0):
            raise DomainError("geometry map: C(R) must increase with radius")
        if not np.all(np.diff(l) < 0):
            raise DomainError("geometry map: L(R) must decrease with radius")


def _te_lines(freq_ghz: float, theta_deg: float, stack: Stackup,
              eta0: float):
    """TE line parameters (impedance, electrical length) per spacer."""
    k0 = 2.0 * math.pi * freq_ghz / C_MM_GHZ
    th = math.radians(theta_deg)
    ct = math.cos(th)
    z_air = eta0 / ct
    bl_air = k0 * ct * stack.air_gap_mm
    n_sub = math.sqrt(stack.substrate_eps_r)
    st_sub = math.sin(th) / n_sub
    ct_sub = math.sqrt(1.0 - st_sub ** 2)
    z_sub = (eta0 / n_sub) / ct_sub
    bl_sub = k0 * n_sub * ct_sub * stack.substrate_thickness_mm
    return z_air, bl_air, z_sub, bl_sub


def _chain_abcd(y_layer, stack: Stackup, freq_ghz: float, theta_deg: float,
                eta0: float):
    """Total ABCD of [shunt][sub] ([air][shunt][sub])^(n-1), vectorized.

    y_layer may be a complex array; returns arrays (A, B, C, D).
    """
    z_air, bl_air, z_sub, bl_sub = _te_lines(freq_ghz, theta_deg, stack, eta0)
    y = np.asarray(y_layer, complex)

    cs, ss = math.cos(bl_sub), math.sin(bl_sub)
    ca, sa = math.cos(bl_air), math.sin(bl_air)
    one = np.ones_like(y)

    # shunt * substrate line
    sa_, sb_ = cs * one, 1j * z_sub * ss * one
    sc_, sd_ = (y * cs + 1j * ss / z_sub), (y * 1j * z_sub * ss + cs)
    A, B, C, D = sa_, sb_, sc_, sd_
    if stack.n_layers > 1:
        # unit = air line * shunt * substrate line
        la, lb = ca * one, 1j * z_air * sa * one
        lc, ld = 1j * sa / z_air * one, ca * one
        ua = la * sa_ + lb * sc_
        ub = la * sb_ + lb * sd_
        uc = lc * sa_ + ld * sc_
        ud = lc * sb_ + ld * sd_
        for _ in range(stack.n_layers - 1):
            A, B, C, D = (A * ua + B * uc, A * ub + B * ud,
                          C * ua + D * uc, C * ub + D * ud)
    return A, B, C, D


def _abcd_to_sparams(A, B, C, D, z0: float):
    den = A + B / z0 + C * z0 + D
    s11 = (A + B / z0 - C * z0 - D) / den
    s21 = 2.0 / den
    return s11, s21


def cascade_sparams(layer: LayerCircuit, stack: Stackup, freq_ghz: float,
                    eta0: float = ETA0, theta_deg: float = 0.0):
    """S-parameters of the full layer stack at one frequency and angle."""
    if freq_ghz <= 0:
        raise DomainError("frequency must be positive")
    y = layer.admittance(freq_ghz)
    A, B, C, D = _chain_abcd(y, stack, freq_ghz, theta_deg, eta0)
    z0 = eta0 / math.cos(math.radians(theta_deg))
    s11, s21 = _abcd_to_sparams(A, B, C, D, z0)
    return complex(s11), complex(s21)


@dataclass
class UnitCellTable:
    """(frequency, incidence angle, radius) -> S-parameters and susceptance.

    segments[fi][ai] lists usable monotone branch segments as index pairs
    (a, b) into the radius grid with susceptance[a] < susceptance[b];
    forbidden[fi][ai] lists excluded radius intervals (resonances and
    low-transmission flanks); bounds[fi][ai] is the usable susceptance
    range (b_min, b_max).
    """

    freqs_ghz: np.ndarray
    angles_deg: np.ndarray
    radii_mm: np.ndarray
    s11: np.ndarray           # (nf, na, nr) complex
    s21: np.ndarray           # (nf, na, nr) complex
    y_eq: np.ndarray          # (nf, na, nr) complex equivalent admittance
    convention: str           # 'transfer' or 'shunt'
    segments: list = field(default_factory=list)
    forbidden: list = field(default_factory=list)
    bounds: list = field(default_factory=list)

    @property
    def susceptance(self) -> np.ndarray:
        return self.y_eq.imag

    def nearest_freq_index(self, freq_ghz: float) -> int:
        return int(np.argmin(np.abs(self.freqs_ghz - freq_ghz)))

    def nearest_angle_index(self, angle_deg: float) -> int:
        return int(np.argmin(np.abs(self.angles_deg - angle_deg)))

    def plane(self, angle_deg: float, freq_ghz: float):
        fi = self.nearest_freq_index(freq_ghz)
        ai = self.nearest_angle_index(angle_deg)
        return fi, ai


def _detect_segments(b: np.ndarray, s21: np.ndarray):
    """Monotone usable runs of the susceptance curve.

    A record is usable when |b| <= B_CLIP_S and |s21| is above FLOOR_DB.
    Runs are maximal strictly-monotone stretches (either direction);
    each is stored as (a, b_idx) with susceptance increasing a -> b_idx.
    """
    mag_db = 20.0 * np.log10(np.maximum(np.abs(s21), 1e-30))
    usable = (np.abs(b) <= B_CLIP_S) & (mag_db > FLOOR_DB)
    n = len(b)
    segs = []
    i = 0
    while i < n - 1:
        if not (usable[i] and usable[i + 1]) or b[i + 1] == b[i]:
            i += 1
            continue
        up = b[i + 1] > b[i]
        j = i
        while (j + 1 < n and usable[j + 1] and b[j + 1] != b[j]
               and (b[j + 1] > b[j]) == up):
            j += 1
        if j > i:
            segs.append((i, j) if up else (j, i))
        i = j
    return segs


def _forbidden_from_segments(radii: np.ndarray, segs) -> list:
    """Radius intervals not covered by any usable segment."""
    covered = np.zeros(len(radii), dtype=bool)
    for a, b in segs:
        lo, hi = min(a, b), max(a, b)
        covered[lo:hi + 1] = True
    out = []
    i = 0
    n = len(radii)
    while i < n:
        if covered[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and not covered[j + 1]:
            j += 1
        out.append((float(radii[i]), float(radii[j])))
        i = j + 1
    return out


def _finalize_table(table: UnitCellTable) -> UnitCellTable:
    nf, na = len(table.freqs_ghz), len(table.angles_deg)
    table.segments = [[None] * na for _ in range(nf)]
    table.forbidden = [[None] * na for _ in range(nf)]
    table.bounds = [[None] * na for _ in range(nf)]
    b_all = table.susceptance
    for fi in range(nf):
        for ai in range(na):
            segs = _detect_segments(b_all[fi, ai], table.s21[fi, ai])
            if not segs:
                raise DomainError(
                    f"empty usable branch at {table.freqs_ghz[fi]} GHz, "
                    f"{table.angles_deg[ai]} deg")
            table.segments[fi][ai] = segs
            table.forbidden[fi][ai] = _forbidden_from_segments(
                table.radii_mm, segs)
            b = b_all[fi, ai]
            table.bounds[fi][ai] = (
                float(min(b[a] for a, _ in segs)),
                float(max(b[c] for _, c in segs)))
    return table


def generate_synthetic_table(geom_map: PatchRingMap = PatchRingMap(),
                             stack: Stackup = Stackup(),
                             freqs_ghz=DEFAULT_FREQS_GHZ,
                             angles_deg=DEFAULT_ANGLES_DEG,
                             radii_mm=DEFAULT_RADII_MM,
                             eta0: float = ETA0) -> UnitCellTable:
    """Populate a table from the equivalent-circuit cascade.

    Susceptance stored per record is the transfer susceptance Im(-1/B)
    of the total ABCD matrix (complex transfer admittance -1/B kept in
    y_eq); its resonance poles become the forbidden intervals.
    """
    freqs = np.asarray(freqs_ghz, float)
    angles = np.asarray(angles_deg, float)
    radii = np.asarray(radii_mm, float)
    if not np.all(np.diff(radii) > 0):
        raise DomainError("radius grid must be strictly increasing")
    geom_map.check_monotone(radii)

    nf, na, nr = len(freqs), len(angles), len(radii)
    s11 = np.empty((nf, na, nr), complex)
    s21 = np.empty((nf, na, nr), complex)
    y_eq = np.empty((nf, na, nr), complex)
    for fi, f in enumerate(freqs):
        w = 2.0 * math.pi * f * 1e9
        c = geom_map.c0_f + geom_map.c1_f_per_mm2 * radii ** 2
        l = geom_map.l0_h / (1.0 + geom_map.l1_per_mm * radii)
        b_lc = w * c - 1.0 / (w * l)
        safe = np.where(b_lc == 0, 1.0, b_lc)
        y_layer = np.where(b_lc == 0, 0.0,
                           1.0 / (geom_map.r_loss_ohm + 1.0 / (1j * safe)))
        for ai, th in enumerate(angles):
            A, B, C, D = _chain_abcd(y_layer, stack, f, th, eta0)
            z0 = eta0 / math.cos(math.radians(th))
            s11[fi, ai], s21[fi, ai] = _abcd_to_sparams(A, B, C, D, z0)
            y_eq[fi, ai] = -1.0 / B
    table = UnitCellTable(freqs, angles, radii, s11, s21, y_eq,
                          convention="transfer")
    return _finalize_table(table)


@lru_cache(maxsize=4)
def default_synthetic_table() -> UnitCellTable:
    """The shipped default table (calibrated circuit, default axes)."""
    return generate_synthetic_table()


def save_cell_table(table: UnitCellTable, dest) -> None:
    """Write the table as CSV (S-parameters only, bit-exact floats)."""
    own = isinstance(dest, (str, bytes))
    fh = open(dest, "w", encoding="utf-8") if own else dest
    try:
        fh.write(f"#schema: {CSV_SCHEMA}\n")
        fh.write(CSV_SCHEMA + "\n")
        for fi, f in enumerate(table.freqs_ghz):
            for ai, th in enumerate(table.angles_deg):
                for ri, r in enumerate(table.radii_mm):
                    v11 = table.s11[fi, ai, ri]
                    v21 = table.s21[fi, ai, ri]
                    fh.write(f"{f!r},{th!r},{r!r},{v11.real!r},{v11.imag!r},"
                             f"{v21.real!r},{v21.imag!r}\n")
    finally:
        if own:
            fh.close()


def load_cell_table(source, eta0: float = ETA0) -> UnitCellTable:
    """Load a table from CSV; susceptance via the shunt extraction.

    The grid must be complete (every freq x angle x radius combination
    present) and every record passive (|s21| <= 1).
    """
    own = isinstance(source, (str, bytes))
    fh = open(source, "r", encoding="utf-8") if own else source
    try:
        records = {}
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("freq_ghz"):
                continue
            parts = line.split(",")
            if len(parts) != 7:
                raise DomainError(f"malformed cell-table row: {line!r}")
            f, th, r = float(parts[0]), float(parts[1]), float(parts[2])
            s11 = complex(float(parts[3]), float(parts[4]))
            s21 = complex(float(parts[5]), float(parts[6]))
            if abs(s21) > 1.0 + 1e-9:
                raise DomainError(
                    f"non-passive record at f={f}, theta={th}, r={r}: "
                    f"|s21| = {abs(s21):.6f} > 1")
            records[(f, th, r)] = (s11, s21)
    finally:
        if own:
            fh.close()
    if not records:
        raise DomainError("empty cell table")

    freqs = np.array(sorted({k[0] for k in records}))
    angles = np.array(sorted({k[1] for k in records}))
    radii = np.array(sorted({k[2] for k in records}))
    missing = [(f, th, r) for f in freqs for th in angles for r in radii
               if (f, th, r) not in records]
    if missing:
        head = ", ".join(str(m) for m in missing[:5])
        raise DomainError(
            f"cell table grid has {len(missing)} missing points: {head}"
            + ("..." if len(missing) > 5 else ""))

    nf, na, nr = len(freqs), len(angles), len(radii)
    s11 = np.empty((nf, na, nr), complex)
    s21 = np.empty((nf, na, nr), complex)
    for fi, f in enumerate(freqs):
        for ai, th in enumerate(angles):
            for ri, r in enumerate(radii):
                s11[fi, ai, ri], s21[fi, ai, ri] = records[(f, th, r)]
    y_eq = (2.0 / eta0) * (1.0 / s21 - 1.0)
    table = UnitCellTable(freqs, angles, radii, s11, s21, y_eq,
                          convention="shunt")
    return _finalize_table(table)


def _interp_on_grid(radii, values, radius):
    k = int(np.searchsorted(radii, radius)) - 1
    k = min(max(k, 0), len(radii) - 2)
    t = (radius - radii[k]) / (radii[k + 1] - radii[k])
    return values[k] + t * (values[k + 1] - values[k])


def susceptance_of(table: UnitCellTable, radius_mm: float, angle_deg: float,
                   freq_ghz: float) -> float:
    """Susceptance at a radius: linear interpolation on the nearest plane.

    Raises if the radius is out of table range or inside a forbidden
    interval (the error carries the interval).
    """
    radii = table.radii_mm
    if not (radii[0] <= radius_mm <= radii[-1]):
        raise DomainError(
            f"radius {radius_mm} mm outside table range "
            f"[{radii[0]}, {radii[-1]}]")
    fi, ai = table.plane(angle_deg, freq_ghz)
    for lo, hi in table.forbidden[fi][ai]:
        if lo < radius_mm < hi:
            raise DomainError(
                f"radius {radius_mm} mm falls in forbidden interval "
                f"({lo}, {hi}) mm at {table.freqs_ghz[fi]} GHz, "
                f"{table.angles_deg[ai]} deg")
    return float(_interp_on_grid(radii, table.susceptance[fi, ai], radius_mm))


def s21_of(table: UnitCellTable, radius_mm: float, angle_deg: float,
           freq_ghz: float) -> complex:
    """Transmission coefficient at a radius (linear interp, nearest plane)."""
    radii = table.radii_mm
    if not (radii[0] <= radius_mm <= radii[-1]):
        raise DomainError(
            f"radius {radius_mm} mm outside table range "
            f"[{radii[0]}, {radii[-1]}]")
    fi, ai = table.plane(angle_deg, freq_ghz)
    return complex(_interp_on_grid(radii, table.s21[fi, ai], radius_mm))


def s11_of(table: UnitCellTable, radius_mm: float, angle_deg: float,
           freq_ghz: float) -> complex:
    radii = table.radii_mm
    fi, ai = table.plane(angle_deg, freq_ghz)
    return complex(_interp_on_grid(radii, table.s11[fi, ai], radius_mm))


def radius_from_susceptance(table: UnitCellTable, b_s: float,
                            angle_deg: float, freq_ghz: float):
    """Inverse lookup on the usable branch.

    Among usable segments containing the requested susceptance, returns
    the radius with the best transmission (tie: smallest radius). A
    request outside the plane's bounds clamps to the nearer bound; a
    request falling in an excluded resonance gap snaps to the nearest
    segment endpoint. Both cases set the clamped flag.
    """
    fi, ai = table.plane(angle_deg, freq_ghz)
    segs = table.segments[fi][ai]
    b = table.susceptance[fi, ai]
    s21 = table.s21[fi, ai]
    radii = table.radii_mm

    best = None
    for a, c in segs:
        blo, bhi = b[a], b[c]
        if blo <= b_s <= bhi:
            idx = np.arange(min(a, c), max(a, c) + 1)
            bseg = b[idx]
            if bseg[0] > bseg[-1]:
                idx = idx[::-1]
                bseg = bseg[::-1]
            k = int(np.searchsorted(bseg, b_s)) - 1
            k = min(max(k, 0), len(bseg) - 2)
            d = bseg[k + 1] - bseg[k]
            t = (b_s - bseg[k]) / d if d != 0 else 0.0
            i0, i1 = idx[k], idx[k + 1]
            r = radii[i0] + t * (radii[i1] - radii[i0])
            s = s21[i0] + t * (s21[i1] - s21[i0])
            if best is None or abs(s) > abs(best[1]) + 1e-15 or (
                    abs(abs(s) - abs(best[1])) <= 1e-15 and r < best[0]):
                best = (float(r), s)
    if best is not None:
        return best[0], False

    # outside coverage: clamp to the nearest segment endpoint
    cands = []
    for a, c in segs:
        for k in (a, c):
            cands.append((abs(b[k] - b_s), float(radii[k])))
    cands.sort()
    return cands[0][1], True


def fill_radii(hmap, table: UnitCellTable) -> None:
    """Invert every cell of a hologram map at its design plane (in place)."""
    f0 = hmap.spec.freq0_ghz
    for idx in range(len(hmap)):
        r, cl = radius_from_susceptance(
            table, float(hmap.b_shifted_s[idx]),
            float(hmap.incidence_deg[idx]), f0)
        hmap.radius_mm[idx] = r
        hmap.clamped[idx] = cl

"""Holographic transmitarray synthesis and analysis toolkit.

Turns a feed description plus one or more desired far-field beams into a
sampled admittance hologram, maps it to realizable unit-cell geometry, and
predicts the resulting radiation pattern and efficiency metrics.
"""

from holotx.waves import (
    C_MM_GHZ,
    ETA0,
    BeamSpec,
    FeedGeometry,
    interference_intensity,
    plane_wave,
    reconstruct,
    spherical_wave,
    superpose,
    wavelength_mm,
    wavenumber,
)
from holotx.sheet import (
    SheetImpedance,
    ZoneLabel,
    classify_zone,
    reactance_from_phase,
    shunt_sheet_sparams,
    sweep_sheet,
)
from holotx.hologram import (
    AntennaSpec,
    HologramMap,
    ModulationParams,
    continuous_hologram,
    htafz_shift,
    sample_aperture,
)
from holotx.cell import (
    CellGeometry,
    LayerCircuit,
    PatchRingMap,
    Stackup,
    UnitCellTable,
    cascade_sparams,
    default_synthetic_table,
    generate_synthetic_table,
    load_cell_table,
    radius_from_susceptance,
    save_cell_table,
    susceptance_of,
)
from holotx.feed import (
    EfficiencyReport,
    FeedModel,
    edge_taper,
    feed_field,
    illumination_efficiency,
    optimize_f_over_d,
    spillover_efficiency,
)
from holotx.farfield import (
    ApertureField,
    PatternMetrics,
    RadiationPattern,
    aperture_field,
    frequency_sweep,
    pattern_metrics,
    radiation_pattern,
)

__version__ = "0.1.0"

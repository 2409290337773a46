//! 2D digital waveguide meshes for wave propagation in elastic media.
//!
//! The crate covers the square, triangular, and hexagonal mesh geometries
//! end to end:
//!
//! - [`geometry`]: sampling-lattice math (bases, densities, reciprocals,
//!   critical lengths) and finite mesh topologies over tori and discs;
//! - [`dispersion`]: geometric factors, per-step phase shifts, and the raw /
//!   critically-sampled / dc-normalized propagation speed ratios, plus dense
//!   dispersion maps with CSV export;
//! - [`simulator`]: time-domain engines in waveguide and finite-difference
//!   form with excitation, probes, snapshots, energy accounting, and an
//!   empirical plane-wave phase measurement;
//! - [`sampling`]: critical and geometry-corrected temporal sample rates and
//!   the round-resonator planner;
//! - [`cost`]: per-junction and per-unit operation/memory accounting with a
//!   stepping-throughput micro-benchmark.

pub mod cost;
pub mod dispersion;
pub mod error;
pub mod geometry;
pub mod sampling;
pub mod simulator;

pub use cost::{benchmark, cost_row, BenchmarkReport, CostRow};
pub use dispersion::{
    critical_dc_limit, critical_speed_ratio, dc_limit, dispersion_map, geometric_factor,
    normalized_speed_ratio, phase_shift, phase_shift_from_factor, speed_ratio, BandValue,
    DispersionMap, DispersionSample, GridSpec, MapVariant, SpatialFrequency,
};
pub use error::{Error, Result};
pub use geometry::{
    build_topology, critical_length, lattice_basis, neighbor_directions, BoundaryKind,
    DirectionSet, Junction, LatticeBasis, MeshGeometry, MeshLattice, MeshTopology, Port, Region,
};
pub use sampling::{
    corrected_sample_rate, critical_sample_rate, plan_count_cross_check, plan_resonator, BandSpec,
    GeometryPlan, LengthRounding, MediumSpec, ResonatorPlan,
};
pub use simulator::{
    measure_plane_wave_phase, Excitation, Formulation, ProbeSeries, RunOutput, SimState, Snapshot,
};

/// Format a float with 9 significant digits, the precision used by all file
/// exports.
pub fn fmt_sig9(x: f64) -> String {
    format!("{x:.8e}")
}

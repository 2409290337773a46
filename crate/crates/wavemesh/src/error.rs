//! Error type shared by all modules of the crate.

use crate::geometry::{BoundaryKind, MeshGeometry};
use crate::simulator::Formulation;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be positive (got {value})")]
    NonPositive { name: &'static str, value: f64 },

    #[error("lattice basis is singular")]
    SingularBasis,

    #[error("orientation tag {tag} is invalid for the {geometry} mesh ({count} orientations)")]
    InvalidOrientation {
        geometry: MeshGeometry,
        tag: usize,
        count: usize,
    },

    #[error("torus {axis} extent {extent} is not an integer multiple of the lattice period {period}")]
    IncommensurateTorus {
        axis: char,
        extent: f64,
        period: f64,
    },

    #[error("{region} regions require the {required} boundary")]
    BoundaryMismatch {
        region: &'static str,
        required: BoundaryKind,
    },

    #[error("region holds no junctions")]
    EmptyRegion,

    #[error("junction index {index} is out of range ({count} junctions)")]
    JunctionOutOfRange { index: usize, count: usize },

    #[error("operation requires the {required} formulation")]
    FormulationMismatch { required: Formulation },

    #[error("spatial frequency ({xi_x}, {xi_y}) is not commensurate with a torus of tractable size")]
    IncommensurateFrequency { xi_x: f64, xi_y: f64 },

    #[error("frequency lies outside the propagating band (|b| > 2)")]
    OutOfBand,

    #[error("speed ratio is undefined at zero spatial frequency; use the dc limit")]
    ZeroFrequency,

    #[error("dispersion grid must be at least 2x2 (got {nx}x{ny})")]
    GridTooSmall { nx: usize, ny: usize },

    #[error("run too short to time reliably ({elapsed_ms:.3} ms < 10 ms); increase steps or size")]
    TimingTooCoarse { elapsed_ms: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositive { name, value })
    }
}

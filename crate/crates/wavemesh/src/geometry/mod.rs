//! Sampling-lattice mathematics and finite mesh topologies for the three
//! 2D waveguide mesh geometries.
//!
//! A mesh geometry is a regular tiling of the plane whose junctions lie on a
//! sampling lattice. The square and triangular meshes occupy a single lattice;
//! the hexagonal (honeycomb) mesh is obtained by removing a coarse triangular
//! sublattice from a fine one, which leaves two junction orientations.

mod topology;

pub use topology::{build_topology, BoundaryKind, Junction, MeshTopology, Port, Region};

use crate::error::{ensure_positive, Error, Result};
use std::fmt;

pub(crate) const SQRT_3: f64 = 1.732_050_807_568_877_293_5;

/// The three supported mesh geometries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeshGeometry {
    Square,
    Triangular,
    Hexagonal,
}

impl MeshGeometry {
    pub const ALL: [MeshGeometry; 3] = [
        MeshGeometry::Square,
        MeshGeometry::Triangular,
        MeshGeometry::Hexagonal,
    ];

    /// Number of waveguide ports N meeting at each junction.
    pub fn ports_per_junction(self) -> usize {
        match self {
            MeshGeometry::Square => 4,
            MeshGeometry::Triangular => 6,
            MeshGeometry::Hexagonal => 3,
        }
    }

    /// Number of distinct junction orientations (2 for the honeycomb).
    pub fn orientation_count(self) -> usize {
        match self {
            MeshGeometry::Hexagonal => 2,
            _ => 1,
        }
    }

    /// Time-step multiplier of the junction recurrence: the honeycomb couples
    /// its two orientations, so its characteristic recurrence advances two
    /// samples at a time.
    pub fn alpha(self) -> u32 {
        match self {
            MeshGeometry::Hexagonal => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MeshGeometry::Square => "square",
            MeshGeometry::Triangular => "triangular",
            MeshGeometry::Hexagonal => "hexagonal",
        }
    }
}

impl fmt::Display for MeshGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for MeshGeometry {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "square" | "s" => Ok(MeshGeometry::Square),
            "triangular" | "t" => Ok(MeshGeometry::Triangular),
            "hexagonal" | "h" => Ok(MeshGeometry::Hexagonal),
            other => Err(format!("unknown geometry `{other}`")),
        }
    }
}

/// Basis of a 2D sampling lattice: two column vectors in meters. The lattice
/// is the set of integer combinations of the columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeBasis {
    cols: [[f64; 2]; 2],
}

impl LatticeBasis {
    pub fn from_columns(a1: [f64; 2], a2: [f64; 2]) -> Result<Self> {
        let basis = LatticeBasis { cols: [a1, a2] };
        if basis.det().abs() <= f64::EPSILON * basis.norm_scale() {
            return Err(Error::SingularBasis);
        }
        Ok(basis)
    }

    fn norm_scale(&self) -> f64 {
        let [a, b] = self.cols;
        (a[0] * a[0] + a[1] * a[1] + b[0] * b[0] + b[1] * b[1]).max(f64::MIN_POSITIVE)
    }

    pub fn column(&self, i: usize) -> [f64; 2] {
        self.cols[i]
    }

    /// Matrix entry in row-major convention (`entry(r, c)` is row r, column c).
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.cols[col][row]
    }

    pub fn det(&self) -> f64 {
        let [a, b] = self.cols;
        a[0] * b[1] - a[1] * b[0]
    }

    /// Samples per unit area, 1/|det L|.
    pub fn sample_density(&self) -> f64 {
        1.0 / self.det().abs()
    }

    /// Basis of the reciprocal lattice: the inverse transpose. Fourier images
    /// of a signal sampled over this lattice center on the reciprocal lattice.
    pub fn reciprocal(&self) -> LatticeBasis {
        let [a, b] = self.cols;
        let inv_det = 1.0 / self.det();
        // inverse transpose of [[a0, b0], [a1, b1]]
        LatticeBasis {
            cols: [
                [b[1] * inv_det, -b[0] * inv_det],
                [-a[1] * inv_det, a[0] * inv_det],
            ],
        }
    }

    /// Lattice point at integer coordinates u.
    pub fn point(&self, u: [i64; 2]) -> [f64; 2] {
        let [a, b] = self.cols;
        [
            u[0] as f64 * a[0] + u[1] as f64 * b[0],
            u[0] as f64 * a[1] + u[1] as f64 * b[1],
        ]
    }

    /// Real-valued lattice coordinates of a position x (inverse map).
    pub fn coords(&self, x: [f64; 2]) -> [f64; 2] {
        let [a, b] = self.cols;
        let inv_det = 1.0 / self.det();
        [
            (b[1] * x[0] - b[0] * x[1]) * inv_det,
            (-a[1] * x[0] + a[0] * x[1]) * inv_det,
        ]
    }
}

/// Junction lattice of a mesh. The honeycomb carries junctions on the fine
/// triangular lattice minus a coarse sublattice, so its description needs both
/// bases and a subtraction flag; the other meshes occupy their lattice fully.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeshLattice {
    /// Every lattice point carries a junction.
    Full(LatticeBasis),
    /// Junctions are the fine-lattice points not on the coarse sublattice.
    Difference {
        fine: LatticeBasis,
        coarse: LatticeBasis,
    },
}

impl MeshLattice {
    /// Junctions per unit area. For the subtraction construction this is
    /// density(fine) - density(coarse).
    pub fn junction_density(&self) -> f64 {
        match self {
            MeshLattice::Full(basis) => basis.sample_density(),
            MeshLattice::Difference { fine, coarse } => {
                fine.sample_density() - coarse.sample_density()
            }
        }
    }

    /// The lattice the mesh samples signals over (the fine one for the
    /// honeycomb).
    pub fn sampling_basis(&self) -> &LatticeBasis {
        match self {
            MeshLattice::Full(basis) => basis,
            MeshLattice::Difference { fine, .. } => fine,
        }
    }
}

/// Sampling lattice of a mesh with waveguide length `d` (meters).
///
/// Square: [[d, 0], [0, d]]. Triangular: [[d, d/2], [0, sqrt(3) d/2]].
/// Hexagonal: the fine triangular basis together with the coarse sublattice
/// basis [[3d/2, 0], [sqrt(3) d/2, sqrt(3) d]] that is subtracted from it.
pub fn lattice_basis(geometry: MeshGeometry, d: f64) -> Result<MeshLattice> {
    ensure_positive("waveguide length", d)?;
    let fine_triangular = LatticeBasis::from_columns([d, 0.0], [d / 2.0, SQRT_3 * d / 2.0])?;
    Ok(match geometry {
        MeshGeometry::Square => {
            MeshLattice::Full(LatticeBasis::from_columns([d, 0.0], [0.0, d])?)
        }
        MeshGeometry::Triangular => MeshLattice::Full(fine_triangular),
        MeshGeometry::Hexagonal => MeshLattice::Difference {
            fine: fine_triangular,
            coarse: LatticeBasis::from_columns([1.5 * d, SQRT_3 * d / 2.0], [0.0, SQRT_3 * d])?,
        },
    })
}

/// Largest waveguide length for which the circular spatial band of radius
/// `bandwidth` (cycles/m) is sampled without overlap of its Fourier images.
pub fn critical_length(geometry: MeshGeometry, bandwidth: f64) -> Result<f64> {
    ensure_positive("spatial bandwidth", bandwidth)?;
    Ok(match geometry {
        MeshGeometry::Square => 1.0 / (2.0 * bandwidth),
        MeshGeometry::Triangular => 1.0 / (SQRT_3 * bandwidth),
        MeshGeometry::Hexagonal => 1.0 / (3.0 * bandwidth),
    })
}

/// Unit direction tables, one entry per port. The entries for a geometry with
/// several orientations are elementwise negations of each other, so a port
/// index pairs with the same index on the far junction.
const SQUARE_UNIT: [[f64; 2]; 4] = [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]];
const TRIANGULAR_UNIT: [[f64; 2]; 6] = [
    [1.0, 0.0],
    [0.5, SQRT_3 / 2.0],
    [-0.5, SQRT_3 / 2.0],
    [-1.0, 0.0],
    [-0.5, -SQRT_3 / 2.0],
    [0.5, -SQRT_3 / 2.0],
];
const HEX_UNIT_0: [[f64; 2]; 3] = [[0.0, 1.0], [-SQRT_3 / 2.0, -0.5], [SQRT_3 / 2.0, -0.5]];
const HEX_UNIT_1: [[f64; 2]; 3] = [[0.0, -1.0], [SQRT_3 / 2.0, 0.5], [-SQRT_3 / 2.0, 0.5]];

/// Integer lattice steps matching the unit tables entry for entry, expressed
/// in the coordinates of the topology chart for each geometry.
pub(crate) const SQUARE_STEPS: [[i64; 2]; 4] = [[1, 0], [-1, 0], [0, 1], [0, -1]];
pub(crate) const TRIANGULAR_STEPS: [[i64; 2]; 6] =
    [[1, 0], [0, 1], [-1, 1], [-1, 0], [0, -1], [1, -1]];
pub(crate) const HEX_STEPS_0: [[i64; 2]; 3] = [[0, 1], [-1, 0], [1, -1]];
pub(crate) const HEX_STEPS_1: [[i64; 2]; 3] = [[0, -1], [1, 0], [-1, 1]];

/// Port index on the far junction that points back along port `p`.
pub(crate) fn opposite_port(geometry: MeshGeometry, p: usize) -> usize {
    match geometry {
        MeshGeometry::Square => [1usize, 0, 3, 2][p],
        MeshGeometry::Triangular => (p + 3) % 6,
        // the two orientation tables are elementwise negations
        MeshGeometry::Hexagonal => p,
    }
}

/// The N waveguide directions leaving a junction, each of length D.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    directions: Vec<[f64; 2]>,
    orientation: usize,
}

impl DirectionSet {
    pub fn directions(&self) -> &[[f64; 2]] {
        &self.directions
    }

    pub fn orientation(&self) -> usize {
        self.orientation
    }
}

/// Direction vectors from a junction to its N neighbors.
///
/// Square and triangular junctions all share one direction set, closed under
/// negation. The honeycomb's two orientations carry mutually negated triples;
/// orientation 0 points `(0, D)` straight up.
pub fn neighbor_directions(
    geometry: MeshGeometry,
    d: f64,
    orientation: usize,
) -> Result<DirectionSet> {
    ensure_positive("waveguide length", d)?;
    if orientation >= geometry.orientation_count() {
        return Err(Error::InvalidOrientation {
            geometry,
            tag: orientation,
            count: geometry.orientation_count(),
        });
    }
    let unit: &[[f64; 2]] = match (geometry, orientation) {
        (MeshGeometry::Square, _) => &SQUARE_UNIT,
        (MeshGeometry::Triangular, _) => &TRIANGULAR_UNIT,
        (MeshGeometry::Hexagonal, 0) => &HEX_UNIT_0,
        (MeshGeometry::Hexagonal, _) => &HEX_UNIT_1,
    };
    Ok(DirectionSet {
        directions: unit.iter().map(|v| [v[0] * d, v[1] * d]).collect(),
        orientation,
    })
}

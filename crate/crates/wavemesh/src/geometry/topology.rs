//! Finite junction sets with adjacency: rectangular tori for exact analysis
//! and clamped discs for physical runs.

use super::{
    opposite_port, LatticeBasis, MeshGeometry, HEX_STEPS_0, HEX_STEPS_1, SQRT_3, SQUARE_STEPS,
    TRIANGULAR_STEPS,
};
use crate::error::{ensure_positive, Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::io::{self, Write};

/// Finite region a mesh is built over.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    /// Rectangle with periodic wrap; extents must be integer multiples of the
    /// lattice periods.
    TorusRect { width: f64, height: f64 },
    /// Disc centered at the origin; junctions strictly inside the radius.
    Disc { radius: f64 },
}

/// Boundary model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    /// Wrap-around adjacency; no boundary ports.
    Periodic,
    /// Clamped rim: waves reflect with sign inversion at missing neighbors.
    FixedRim,
}

impl BoundaryKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryKind::Periodic => "periodic",
            BoundaryKind::FixedRim => "fixedrim",
        }
    }
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for BoundaryKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "periodic" => Ok(BoundaryKind::Periodic),
            "fixedrim" | "fixed-rim" => Ok(BoundaryKind::FixedRim),
            other => Err(format!("unknown boundary `{other}`")),
        }
    }
}

/// One port of a junction: either the branch to a neighboring junction
/// (with the far junction's port index pointing back) or a rim termination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Port {
    Junction { index: u32, reverse: u8 },
    Rim,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Junction {
    pub position: [f64; 2],
    pub orientation: u8,
    pub is_boundary: bool,
}

/// Finite mesh: junction positions, per-port adjacency, boundary handling.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshTopology {
    geometry: MeshGeometry,
    waveguide_length: f64,
    boundary: BoundaryKind,
    junctions: Vec<Junction>,
    /// Junction-major port table, stride `ports_per_junction()`.
    ports: Vec<Port>,
    torus_extent: Option<[f64; 2]>,
}

impl MeshTopology {
    pub fn geometry(&self) -> MeshGeometry {
        self.geometry
    }

    pub fn waveguide_length(&self) -> f64 {
        self.waveguide_length
    }

    pub fn boundary(&self) -> BoundaryKind {
        self.boundary
    }

    pub fn junction_count(&self) -> usize {
        self.junctions.len()
    }

    pub fn junctions(&self) -> &[Junction] {
        &self.junctions
    }

    pub fn junction(&self, index: usize) -> &Junction {
        &self.junctions[index]
    }

    pub fn ports_per_junction(&self) -> usize {
        self.geometry.ports_per_junction()
    }

    pub fn port(&self, junction: usize, port: usize) -> Port {
        self.ports[junction * self.ports_per_junction() + port]
    }

    pub fn ports_of(&self, junction: usize) -> &[Port] {
        let n = self.ports_per_junction();
        &self.ports[junction * n..(junction + 1) * n]
    }

    /// Width/height of the fundamental rectangle for periodic topologies.
    pub fn torus_extent(&self) -> Option<[f64; 2]> {
        self.torus_extent
    }

    /// Displacement from junction `from` to junction position `to`, wrapped to
    /// the nearest periodic image where applicable.
    pub fn wrapped_delta(&self, from: [f64; 2], to: [f64; 2]) -> [f64; 2] {
        let mut dx = to[0] - from[0];
        let mut dy = to[1] - from[1];
        if let Some([w, h]) = self.torus_extent {
            dx -= w * (dx / w).round();
            dy -= h * (dy / h).round();
        }
        [dx, dy]
    }

    /// Plain-text export: header `geometry D boundary junction_count`, then
    /// one line per junction `index x y orientation is_boundary neighbors...`
    /// with `-1` marking rim ports.
    pub fn write_text<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "{} {} {} {}",
            self.geometry.name(),
            crate::fmt_sig9(self.waveguide_length),
            self.boundary.name(),
            self.junction_count()
        )?;
        for (j, junction) in self.junctions.iter().enumerate() {
            write!(
                out,
                "{} {} {} {} {}",
                j,
                crate::fmt_sig9(junction.position[0]),
                crate::fmt_sig9(junction.position[1]),
                junction.orientation,
                u8::from(junction.is_boundary)
            )?;
            for port in self.ports_of(j) {
                match port {
                    Port::Junction { index, .. } => write!(out, " {index}")?,
                    Port::Rim => write!(out, " -1")?,
                }
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("export is ASCII")
    }
}

/// Integer-coordinate chart of a junction lattice. Positions are
/// `u1 * a1 + u2 * a2`; for the honeycomb the chart spans the fine triangular
/// lattice (rotated 30 degrees so bonds line up with the analytic direction
/// sets) and the class `(u2 - u1) mod 3 == 0` marks the removed coarse points.
struct Chart {
    geometry: MeshGeometry,
    basis: LatticeBasis,
}

impl Chart {
    fn new(geometry: MeshGeometry, d: f64) -> Result<Chart> {
        let basis = match geometry {
            MeshGeometry::Square => LatticeBasis::from_columns([d, 0.0], [0.0, d])?,
            MeshGeometry::Triangular => {
                LatticeBasis::from_columns([d, 0.0], [d / 2.0, SQRT_3 * d / 2.0])?
            }
            MeshGeometry::Hexagonal => {
                LatticeBasis::from_columns([SQRT_3 * d / 2.0, d / 2.0], [0.0, d])?
            }
        };
        Ok(Chart { geometry, basis })
    }

    /// Junction orientation at integer coordinates, or None for fine-lattice
    /// points that belong to the subtracted coarse sublattice.
    fn orientation(&self, u: [i64; 2]) -> Option<u8> {
        match self.geometry {
            MeshGeometry::Hexagonal => match (u[1] - u[0]).rem_euclid(3) {
                0 => None,
                class => Some(class as u8 - 1),
            },
            _ => Some(0),
        }
    }

    fn steps(&self, orientation: u8) -> &'static [[i64; 2]] {
        match (self.geometry, orientation) {
            (MeshGeometry::Square, _) => &SQUARE_STEPS,
            (MeshGeometry::Triangular, _) => &TRIANGULAR_STEPS,
            (MeshGeometry::Hexagonal, 0) => &HEX_STEPS_0,
            (MeshGeometry::Hexagonal, _) => &HEX_STEPS_1,
        }
    }

    /// Rectangle periods (smallest pure-x and pure-y translations that map the
    /// junction set, orientations included, onto itself).
    fn base_periods(&self, d: f64) -> [f64; 2] {
        match self.geometry {
            MeshGeometry::Square => [d, d],
            MeshGeometry::Triangular => [d, SQRT_3 * d],
            MeshGeometry::Hexagonal => [SQRT_3 * d, 3.0 * d],
        }
    }

    /// Integer coordinate ranges covering one w-by-h fundamental rectangle.
    fn torus_ranges(&self, w: i64, h: i64) -> [i64; 2] {
        match self.geometry {
            MeshGeometry::Square => [w, h],
            MeshGeometry::Triangular => [w, 2 * h],
            MeshGeometry::Hexagonal => [2 * w, 3 * h],
        }
    }

    /// Reduce integer coordinates into the fundamental rectangle, applying the
    /// lattice translations that the torus extents correspond to.
    fn reduce(&self, mut u: [i64; 2], w: i64, h: i64) -> [i64; 2] {
        match self.geometry {
            MeshGeometry::Square => {
                u[0] = u[0].rem_euclid(w);
                u[1] = u[1].rem_euclid(h);
            }
            MeshGeometry::Triangular => {
                // height translation is the lattice vector (-h, 2h)
                let k = u[1].div_euclid(2 * h);
                u[1] -= 2 * h * k;
                u[0] += h * k;
                u[0] = u[0].rem_euclid(w);
            }
            MeshGeometry::Hexagonal => {
                // width translation is the lattice vector (2w, -w)
                let k = u[0].div_euclid(2 * w);
                u[0] -= 2 * w * k;
                u[1] += w * k;
                u[1] = u[1].rem_euclid(3 * h);
            }
        }
        u
    }
}

fn integer_multiplier(extent: f64, period: f64, axis: char) -> Result<i64> {
    let ratio = extent / period;
    let k = ratio.round();
    if k < 0.5 || (ratio - k).abs() > 1e-9 * ratio.max(1.0) {
        return Err(Error::IncommensurateTorus {
            axis,
            extent,
            period,
        });
    }
    Ok(k as i64)
}

/// Build a finite mesh over the given region.
///
/// Tori must use the periodic boundary and extents commensurate with the
/// lattice periods; discs must use the clamped rim, and ports whose neighbor
/// falls outside the disc become rim terminations.
pub fn build_topology(
    geometry: MeshGeometry,
    d: f64,
    region: Region,
    boundary: BoundaryKind,
) -> Result<MeshTopology> {
    ensure_positive("waveguide length", d)?;
    match region {
        Region::TorusRect { width, height } => {
            if boundary != BoundaryKind::Periodic {
                return Err(Error::BoundaryMismatch {
                    region: "torus",
                    required: BoundaryKind::Periodic,
                });
            }
            ensure_positive("torus width", width)?;
            ensure_positive("torus height", height)?;
            build_torus(geometry, d, width, height)
        }
        Region::Disc { radius } => {
            if boundary != BoundaryKind::FixedRim {
                return Err(Error::BoundaryMismatch {
                    region: "disc",
                    required: BoundaryKind::FixedRim,
                });
            }
            ensure_positive("disc radius", radius)?;
            build_disc(geometry, d, radius)
        }
    }
}

fn build_torus(geometry: MeshGeometry, d: f64, width: f64, height: f64) -> Result<MeshTopology> {
    let chart = Chart::new(geometry, d)?;
    let [px, py] = chart.base_periods(d);
    let w = integer_multiplier(width, px, 'x')?;
    let h = integer_multiplier(height, py, 'y')?;
    let extent = [w as f64 * px, h as f64 * py];
    let [n1, n2] = chart.torus_ranges(w, h);

    // enumerate the fundamental rectangle, skipping removed honeycomb points
    let mut index_of = vec![u32::MAX; (n1 * n2) as usize];
    let mut junctions = Vec::new();
    for u2 in 0..n2 {
        for u1 in 0..n1 {
            let Some(orientation) = chart.orientation([u1, u2]) else {
                continue;
            };
            index_of[(u2 * n1 + u1) as usize] = junctions.len() as u32;
            let raw = chart.basis.point([u1, u2]);
            junctions.push(Junction {
                position: [raw[0].rem_euclid(extent[0]), raw[1].rem_euclid(extent[1])],
                orientation,
                is_boundary: false,
            });
        }
    }
    if junctions.is_empty() {
        return Err(Error::EmptyRegion);
    }

    let n_ports = geometry.ports_per_junction();
    let mut ports = Vec::with_capacity(junctions.len() * n_ports);
    for u2 in 0..n2 {
        for u1 in 0..n1 {
            let Some(orientation) = chart.orientation([u1, u2]) else {
                continue;
            };
            for (p, step) in chart.steps(orientation).iter().enumerate() {
                let v = chart.reduce([u1 + step[0], u2 + step[1]], w, h);
                let index = index_of[(v[1] * n1 + v[0]) as usize];
                debug_assert_ne!(index, u32::MAX, "neighbor fell on a removed point");
                ports.push(Port::Junction {
                    index,
                    reverse: opposite_port(geometry, p) as u8,
                });
            }
        }
    }

    Ok(MeshTopology {
        geometry,
        waveguide_length: d,
        boundary: BoundaryKind::Periodic,
        junctions,
        ports,
        torus_extent: Some(extent),
    })
}

fn build_disc(geometry: MeshGeometry, d: f64, radius: f64) -> Result<MeshTopology> {
    let chart = Chart::new(geometry, d)?;
    // integer-coordinate bounds: |u_i| <= radius * ||row i of basis inverse||
    let inv_rows = {
        let b = &chart.basis;
        let inv_det = 1.0 / b.det();
        [
            [b.column(1)[1] * inv_det, -b.column(1)[0] * inv_det],
            [-b.column(0)[1] * inv_det, b.column(0)[0] * inv_det],
        ]
    };
    let bound = |row: [f64; 2]| (radius * row[0].hypot(row[1])).ceil() as i64 + 1;
    let b1 = bound(inv_rows[0]);
    let b2 = bound(inv_rows[1]);

    let mut coord_index = HashMap::new();
    let mut junctions = Vec::new();
    let mut coords = Vec::new();
    for u2 in -b2..=b2 {
        for u1 in -b1..=b1 {
            let Some(orientation) = chart.orientation([u1, u2]) else {
                continue;
            };
            let position = chart.basis.point([u1, u2]);
            if position[0].hypot(position[1]) >= radius {
                continue;
            }
            coord_index.insert((u1, u2), junctions.len() as u32);
            coords.push([u1, u2]);
            junctions.push(Junction {
                position,
                orientation,
                is_boundary: false,
            });
        }
    }
    if junctions.is_empty() {
        return Err(Error::EmptyRegion);
    }

    let n_ports = geometry.ports_per_junction();
    let mut ports = Vec::with_capacity(junctions.len() * n_ports);
    for (j, u) in coords.iter().enumerate() {
        let orientation = junctions[j].orientation;
        let mut on_rim = false;
        for (p, step) in chart.steps(orientation).iter().enumerate() {
            match coord_index.get(&(u[0] + step[0], u[1] + step[1])) {
                Some(&index) => ports.push(Port::Junction {
                    index,
                    reverse: opposite_port(geometry, p) as u8,
                }),
                None => {
                    ports.push(Port::Rim);
                    on_rim = true;
                }
            }
        }
        junctions[j].is_boundary = on_rim;
    }

    Ok(MeshTopology {
        geometry,
        waveguide_length: d,
        boundary: BoundaryKind::FixedRim,
        junctions,
        ports,
        torus_extent: None,
    })
}

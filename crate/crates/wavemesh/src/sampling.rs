//! Temporal sampling layer: critical sample rate for a circular spatial band,
//! geometry-corrected rates that restore the physical propagation speed at dc,
//! and the end-to-end resonator planner.

use crate::dispersion::critical_dc_limit;
use crate::error::{ensure_positive, Result};
use crate::geometry::{
    build_topology, critical_length, lattice_basis, BoundaryKind, MeshGeometry, Region,
};
use std::f64::consts::PI;
use std::io::{self, Write};

/// Circular spatial band of radius B (cycles/m) centered on dc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandSpec {
    bandwidth: f64,
}

impl BandSpec {
    pub fn new(bandwidth: f64) -> Result<Self> {
        ensure_positive("spatial bandwidth", bandwidth)?;
        Ok(BandSpec { bandwidth })
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }
}

/// Physical description of a round resonator model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumSpec {
    pub wave_speed: f64,
    pub max_frequency: f64,
    pub radius: f64,
}

impl MediumSpec {
    pub fn new(wave_speed: f64, max_frequency: f64, radius: f64) -> Result<Self> {
        ensure_positive("wave speed", wave_speed)?;
        ensure_positive("max frequency", max_frequency)?;
        ensure_positive("resonator radius", radius)?;
        Ok(MediumSpec {
            wave_speed,
            max_frequency,
            radius,
        })
    }

    /// Spatial bandwidth of the signal the resonator carries, B = f/c.
    pub fn spatial_bandwidth(&self) -> f64 {
        self.max_frequency / self.wave_speed
    }
}

/// Time sampling frequency required to recover a signal of circular spatial
/// band B traveling at speed c: F_s = 2 c B.
pub fn critical_sample_rate(wave_speed: f64, band: BandSpec) -> Result<f64> {
    ensure_positive("wave speed", wave_speed)?;
    Ok(2.0 * wave_speed * band.bandwidth())
}

/// Sample rate rescaled by the critically sampled dc speed ratio so that
/// low-frequency propagation matches the physical medium.
pub fn corrected_sample_rate(
    geometry: MeshGeometry,
    wave_speed: f64,
    band: BandSpec,
) -> Result<f64> {
    Ok(critical_sample_rate(wave_speed, band)? / critical_dc_limit(geometry))
}

/// Waveguide-length handling in the planner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LengthRounding {
    /// Full-precision critical lengths.
    #[default]
    Exact,
    /// Round the critical lengths to two significant digits before deriving
    /// junction counts, for parity with hand calculations carried out on
    /// rounded lengths.
    TwoSigFigs,
}

fn round_to_two_sig_figs(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let scale = 10f64.powi(x.abs().log10().floor() as i32 - 1);
    (x / scale).round() * scale
}

/// Design outputs for one geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryPlan {
    /// Critical waveguide length (m), possibly rounded per the plan mode.
    pub waveguide_length: f64,
    /// Junction count from the area-ratio estimate round(area * density).
    pub junction_count: u64,
    /// Uncorrected critical sample rate 2cB (Hz).
    pub sample_rate: f64,
    /// dc-corrected sample rate (Hz).
    pub corrected_sample_rate: f64,
}

/// Full resonator design: spatial bandwidth plus per-geometry lengths, counts
/// and rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonatorPlan {
    pub spatial_bandwidth: f64,
    pub square: GeometryPlan,
    pub triangular: GeometryPlan,
    pub hexagonal: GeometryPlan,
}

impl ResonatorPlan {
    pub fn for_geometry(&self, geometry: MeshGeometry) -> &GeometryPlan {
        match geometry {
            MeshGeometry::Square => &self.square,
            MeshGeometry::Triangular => &self.triangular,
            MeshGeometry::Hexagonal => &self.hexagonal,
        }
    }

    /// Structured text output: one JSON object with the bandwidth and the
    /// per-geometry length, count and rates, 6 significant digits.
    pub fn write_json<W: Write>(&self, mut out: W) -> io::Result<()> {
        let num = |x: f64| format!("{x:.5e}");
        writeln!(out, "{{")?;
        writeln!(out, "  \"B\": {},", num(self.spatial_bandwidth))?;
        for (i, g) in MeshGeometry::ALL.iter().enumerate() {
            let p = self.for_geometry(*g);
            writeln!(
                out,
                "  \"{}\": {{\"D\": {}, \"N\": {}, \"Fs\": {}, \"Fbar\": {}}}{}",
                g.name(),
                num(p.waveguide_length),
                p.junction_count,
                num(p.sample_rate),
                num(p.corrected_sample_rate),
                if i + 1 < MeshGeometry::ALL.len() { "," } else { "" }
            )?;
        }
        writeln!(out, "}}")
    }

    pub fn to_json(&self) -> String {
        let mut buf = Vec::new();
        self.write_json(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("output is ASCII")
    }

    /// Aligned human-readable table.
    pub fn render_table(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "spatial bandwidth B = {:.6} cycles/m\n",
            self.spatial_bandwidth
        ));
        s.push_str(&format!(
            "{:<12} {:>12} {:>10} {:>14} {:>14}\n",
            "geometry", "D (mm)", "junctions", "Fs (Hz)", "Fbar (Hz)"
        ));
        for g in MeshGeometry::ALL {
            let p = self.for_geometry(g);
            s.push_str(&format!(
                "{:<12} {:>12.6} {:>10} {:>14.3} {:>14.3}\n",
                g.name(),
                p.waveguide_length * 1e3,
                p.junction_count,
                p.sample_rate,
                p.corrected_sample_rate
            ));
        }
        s
    }
}

/// Design a round-resonator mesh for the medium: bandwidth B = f/c, critical
/// lengths per geometry, junction counts from the area-ratio estimate, and
/// uncorrected/corrected sample rates.
pub fn plan_resonator(medium: MediumSpec, rounding: LengthRounding) -> Result<ResonatorPlan> {
    let bandwidth = medium.spatial_bandwidth();
    let band = BandSpec::new(bandwidth)?;
    let area = PI * medium.radius * medium.radius;
    let mut plans = [None; 3];
    for (slot, geometry) in plans.iter_mut().zip(MeshGeometry::ALL) {
        let mut d = critical_length(geometry, bandwidth)?;
        if rounding == LengthRounding::TwoSigFigs {
            d = round_to_two_sig_figs(d);
        }
        let density = lattice_basis(geometry, d)?.junction_density();
        *slot = Some(GeometryPlan {
            waveguide_length: d,
            junction_count: (area * density).round() as u64,
            sample_rate: critical_sample_rate(medium.wave_speed, band)?,
            corrected_sample_rate: corrected_sample_rate(geometry, medium.wave_speed, band)?,
        });
    }
    let [square, triangular, hexagonal] = plans.map(|p| p.expect("all three geometries planned"));
    Ok(ResonatorPlan {
        spatial_bandwidth: bandwidth,
        square,
        triangular,
        hexagonal,
    })
}

/// Cross-check the planner's area-ratio junction counts against an actual
/// disc topology enumeration; returns (geometry, planned, built) triples.
pub fn plan_count_cross_check(
    plan: &ResonatorPlan,
    medium: MediumSpec,
) -> Result<Vec<(MeshGeometry, u64, u64)>> {
    let mut rows = Vec::with_capacity(3);
    for geometry in MeshGeometry::ALL {
        let p = plan.for_geometry(geometry);
        let topo = build_topology(
            geometry,
            p.waveguide_length,
            Region::Disc {
                radius: medium.radius,
            },
            BoundaryKind::FixedRim,
        )?;
        rows.push((geometry, p.junction_count, topo.junction_count() as u64));
    }
    Ok(rows)
}

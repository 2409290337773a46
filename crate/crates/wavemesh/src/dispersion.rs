//! Analytic dispersion layer: geometric factors, per-step phase shift, speed
//! ratios in raw / critically-sampled / dc-normalized variants, and dense grid
//! sampling for dispersion maps.
//!
//! The junction recurrence `s(n+a) + s(n-a) = b s(n)` (a = 1, or 2 for the
//! honeycomb) admits propagating solutions only for |b| <= 2; the phase a
//! traveling component gains per time step follows from the recurrence root
//! and is compared against the ideal medium to give the speed ratio.

use crate::error::{ensure_positive, Error, Result};
use crate::geometry::{critical_length, MeshGeometry};
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2, TAU};
use std::io::{self, Write};

const SQRT_3: f64 = crate::geometry::SQRT_3;

/// Spatial frequency in cycles per meter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialFrequency {
    pub xi_x: f64,
    pub xi_y: f64,
}

impl SpatialFrequency {
    pub fn new(xi_x: f64, xi_y: f64) -> Self {
        SpatialFrequency { xi_x, xi_y }
    }

    /// Radial frequency `xi = sqrt(xi_x^2 + xi_y^2)`.
    pub fn magnitude(&self) -> f64 {
        self.xi_x.hypot(self.xi_y)
    }

    pub fn is_dc(&self) -> bool {
        self.xi_x == 0.0 && self.xi_y == 0.0
    }
}

/// A quantity defined only inside the propagating band |b| <= 2. The marker is
/// a value, not an error: callers sampling wide frequency domains keep going.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BandValue {
    In(f64),
    OutOfBand,
}

impl BandValue {
    pub fn value(self) -> Option<f64> {
        match self {
            BandValue::In(v) => Some(v),
            BandValue::OutOfBand => None,
        }
    }

    pub fn is_out_of_band(self) -> bool {
        matches!(self, BandValue::OutOfBand)
    }

    /// Unwrap an in-band value; panics on the out-of-band marker.
    pub fn expect_in_band(self) -> f64 {
        match self {
            BandValue::In(v) => v,
            BandValue::OutOfBand => panic!("value is out of the propagating band"),
        }
    }
}

/// Geometric factor and its dc deficit `2 - b`, the latter accumulated from
/// `1 - cos x = 2 sin^2(x/2)` terms so that values near dc keep full relative
/// precision (the raw cosine sum would cancel).
fn factor_parts(geometry: MeshGeometry, d: f64, f: SpatialFrequency) -> Result<(f64, f64)> {
    ensure_positive("waveguide length", d)?;
    let half_deficit = |arg: f64| {
        let s = (0.5 * arg).sin();
        2.0 * s * s
    };
    let deficit = match geometry {
        MeshGeometry::Square => {
            half_deficit(TAU * d * f.xi_x) + half_deficit(TAU * d * f.xi_y)
        }
        MeshGeometry::Triangular => {
            let sum = half_deficit(TAU * d * f.xi_x)
                + half_deficit(TAU * d * (0.5 * f.xi_x + SQRT_3 / 2.0 * f.xi_y))
                + half_deficit(TAU * d * (0.5 * f.xi_x - SQRT_3 / 2.0 * f.xi_y));
            2.0 * sum / 3.0
        }
        MeshGeometry::Hexagonal => {
            let sum = half_deficit(TAU * SQRT_3 * d * f.xi_x)
                + half_deficit(TAU * d * (SQRT_3 / 2.0 * f.xi_x + 1.5 * f.xi_y))
                + half_deficit(TAU * d * (SQRT_3 / 2.0 * f.xi_x - 1.5 * f.xi_y));
            8.0 * sum / 9.0
        }
    };
    Ok((2.0 - deficit, deficit))
}

/// Geometric factor `b_g`: the geometry's cosine sum over the spatial
/// frequency, normalized to 2 at dc.
pub fn geometric_factor(geometry: MeshGeometry, d: f64, f: SpatialFrequency) -> Result<f64> {
    factor_parts(geometry, d, f).map(|(b, _)| b)
}

/// Slack beyond |b| = 2 treated as band edge rather than out of band; absorbs
/// rounding of the cosine sums right at the edge.
const BAND_EDGE_SLACK: f64 = 1e-12;

fn phase_from_deficit(deficit: f64, alpha: u32) -> BandValue {
    if !(-BAND_EDGE_SLACK..=4.0 + BAND_EDGE_SLACK).contains(&deficit) {
        return BandValue::OutOfBand;
    }
    let deficit = deficit.clamp(0.0, 4.0);
    // two-argument arctangent keeps the branch in (0, pi], continuous as b
    // crosses zero
    let theta = (deficit * (4.0 - deficit)).sqrt().atan2(2.0 - deficit);
    BandValue::In(-theta / alpha as f64)
}

/// Per-time-step phase shift of a traveling component directly from a
/// geometric factor value. Out of band when |b| > 2.
pub fn phase_shift_from_factor(b: f64, alpha: u32) -> BandValue {
    phase_from_deficit(2.0 - b, alpha)
}

/// Spatial phase shift (radians, <= 0) a traveling signal gains in one time
/// sample on the mesh.
pub fn phase_shift(geometry: MeshGeometry, d: f64, f: SpatialFrequency) -> Result<BandValue> {
    let (_, deficit) = factor_parts(geometry, d, f)?;
    Ok(phase_from_deficit(deficit, geometry.alpha()))
}

/// Ratio of mesh propagation speed to the ideal medium speed at frequency f.
/// Undefined at dc; use [`dc_limit`] there.
pub fn speed_ratio(geometry: MeshGeometry, d: f64, f: SpatialFrequency) -> Result<BandValue> {
    let xi = f.magnitude();
    if xi == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    let (_, deficit) = factor_parts(geometry, d, f)?;
    Ok(match phase_from_deficit(deficit, geometry.alpha()) {
        BandValue::In(dphi) => BandValue::In(dphi.abs() / (TAU * d * xi)),
        BandValue::OutOfBand => BandValue::OutOfBand,
    })
}

/// dc limit of the speed ratio: 1/sqrt(2) for all three geometries.
pub fn dc_limit(_geometry: MeshGeometry) -> f64 {
    FRAC_1_SQRT_2
}

/// Speed ratio of a critically sampled mesh: the geometric factor uses the
/// geometry's critical length for the band, while the phase is referenced to
/// the square mesh's critical length 1/(2B).
pub fn critical_speed_ratio(
    geometry: MeshGeometry,
    bandwidth: f64,
    f: SpatialFrequency,
) -> Result<BandValue> {
    let xi = f.magnitude();
    if xi == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    let d_g = critical_length(geometry, bandwidth)?;
    let d_ref = 1.0 / (2.0 * bandwidth);
    let (_, deficit) = factor_parts(geometry, d_g, f)?;
    Ok(match phase_from_deficit(deficit, geometry.alpha()) {
        BandValue::In(dphi) => BandValue::In(dphi.abs() / (TAU * d_ref * xi)),
        BandValue::OutOfBand => BandValue::OutOfBand,
    })
}

/// dc limit of the critically sampled speed ratio: 1/sqrt(2), sqrt(2)/sqrt(3),
/// sqrt(2)/3 for square, triangular, hexagonal.
pub fn critical_dc_limit(geometry: MeshGeometry) -> f64 {
    match geometry {
        MeshGeometry::Square => FRAC_1_SQRT_2,
        MeshGeometry::Triangular => SQRT_2 / SQRT_3,
        MeshGeometry::Hexagonal => SQRT_2 / 3.0,
    }
}

/// Critically sampled speed ratio rescaled to 1 at dc (the ratio obtained
/// when the sample rate is corrected per geometry).
pub fn normalized_speed_ratio(
    geometry: MeshGeometry,
    bandwidth: f64,
    f: SpatialFrequency,
) -> Result<BandValue> {
    Ok(match critical_speed_ratio(geometry, bandwidth, f)? {
        BandValue::In(k) => BandValue::In(k / critical_dc_limit(geometry)),
        BandValue::OutOfBand => BandValue::OutOfBand,
    })
}

/// Which speed-ratio variant a map samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapVariant {
    /// k_g at a fixed waveguide length over the Nyquist square.
    Raw { waveguide_length: f64 },
    /// Critically sampled ratio for a circular band.
    Critical { bandwidth: f64 },
    /// Critically sampled ratio normalized to 1 at dc.
    Normalized { bandwidth: f64 },
}

impl MapVariant {
    /// Half-extent of the natural frequency domain: the Nyquist square
    /// 1/(2D) for the raw variant, the band radius B otherwise.
    pub fn default_half_extent(&self) -> Result<f64> {
        Ok(match *self {
            MapVariant::Raw { waveguide_length } => {
                ensure_positive("waveguide length", waveguide_length)?;
                1.0 / (2.0 * waveguide_length)
            }
            MapVariant::Critical { bandwidth } | MapVariant::Normalized { bandwidth } => {
                ensure_positive("spatial bandwidth", bandwidth)?;
                bandwidth
            }
        })
    }

    fn dc_value(&self, geometry: MeshGeometry) -> f64 {
        match self {
            MapVariant::Raw { .. } => dc_limit(geometry),
            MapVariant::Critical { .. } => critical_dc_limit(geometry),
            MapVariant::Normalized { .. } => 1.0,
        }
    }

    fn evaluate(&self, geometry: MeshGeometry, f: SpatialFrequency) -> Result<(f64, BandValue)> {
        let b = match *self {
            MapVariant::Raw { waveguide_length } => geometric_factor(geometry, waveguide_length, f)?,
            MapVariant::Critical { bandwidth } | MapVariant::Normalized { bandwidth } => {
                geometric_factor(geometry, critical_length(geometry, bandwidth)?, f)?
            }
        };
        if f.is_dc() {
            return Ok((b, BandValue::In(self.dc_value(geometry))));
        }
        let k = match *self {
            MapVariant::Raw { waveguide_length } => speed_ratio(geometry, waveguide_length, f)?,
            MapVariant::Critical { bandwidth } => critical_speed_ratio(geometry, bandwidth, f)?,
            MapVariant::Normalized { bandwidth } => normalized_speed_ratio(geometry, bandwidth, f)?,
        };
        Ok((b, k))
    }
}

/// Rectangular frequency grid; samples sit at cell centers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub xi_x_range: (f64, f64),
    pub xi_y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    /// Square grid of n-by-n cells centered on dc with the given half-extent.
    pub fn centered(half_extent: f64, n: usize) -> Self {
        GridSpec {
            xi_x_range: (-half_extent, half_extent),
            xi_y_range: (-half_extent, half_extent),
            nx: n,
            ny: n,
        }
    }

    fn axis_center(range: (f64, f64), i: usize, n: usize) -> f64 {
        // midpoint form keeps grids symmetric about dc exact (the center cell
        // of an odd grid lands on 0.0 bit-exactly)
        let offset = (2 * i as i64 + 1 - n as i64) as f64;
        offset * (range.1 - range.0) / (2.0 * n as f64) + 0.5 * (range.0 + range.1)
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> SpatialFrequency {
        SpatialFrequency::new(
            Self::axis_center(self.xi_x_range, ix, self.nx),
            Self::axis_center(self.xi_y_range, iy, self.ny),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionSample {
    pub frequency: SpatialFrequency,
    pub b: f64,
    pub k: BandValue,
}

/// Dense sampling of a speed-ratio variant over a frequency grid, row-major
/// with xi_y as the row index.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionMap {
    geometry: MeshGeometry,
    variant: MapVariant,
    grid: GridSpec,
    samples: Vec<DispersionSample>,
}

impl DispersionMap {
    pub fn geometry(&self) -> MeshGeometry {
        self.geometry
    }

    pub fn variant(&self) -> MapVariant {
        self.variant
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn samples(&self) -> &[DispersionSample] {
        &self.samples
    }

    pub fn sample(&self, ix: usize, iy: usize) -> &DispersionSample {
        &self.samples[iy * self.grid.nx + ix]
    }

    /// CSV export: header `xi_x,xi_y,b,k`, the literal token `oob` for
    /// out-of-band cells, 9 significant digits otherwise.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "xi_x,xi_y,b,k")?;
        for s in &self.samples {
            let k = match s.k {
                BandValue::In(v) => crate::fmt_sig9(v),
                BandValue::OutOfBand => "oob".to_string(),
            };
            writeln!(
                out,
                "{},{},{},{}",
                crate::fmt_sig9(s.frequency.xi_x),
                crate::fmt_sig9(s.frequency.xi_y),
                crate::fmt_sig9(s.b),
                k
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("export is ASCII")
    }
}

/// Sample the selected variant over the grid. Out-of-band cells are flagged,
/// never NaN.
pub fn dispersion_map(
    geometry: MeshGeometry,
    variant: MapVariant,
    grid: GridSpec,
) -> Result<DispersionMap> {
    if grid.nx < 2 || grid.ny < 2 {
        return Err(Error::GridTooSmall {
            nx: grid.nx,
            ny: grid.ny,
        });
    }
    variant.default_half_extent()?;
    let mut samples = Vec::with_capacity(grid.nx * grid.ny);
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let f = grid.cell_center(ix, iy);
            let (b, k) = variant.evaluate(geometry, f)?;
            samples.push(DispersionSample { frequency: f, b, k });
        }
    }
    Ok(DispersionMap {
        geometry,
        variant,
        grid,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn freq(x: f64, y: f64) -> SpatialFrequency {
        SpatialFrequency::new(x, y)
    }

    #[test]
    fn factor_is_exactly_two_at_dc() {
        for g in MeshGeometry::ALL {
            assert_eq!(geometric_factor(g, 1.0, freq(0.0, 0.0)).unwrap(), 2.0);
        }
    }

    #[test]
    fn square_factor_at_nyquist_corner() {
        let b = geometric_factor(MeshGeometry::Square, 1.0, freq(0.5, 0.5)).unwrap();
        assert!((b + 2.0).abs() < 1e-15, "got {b}");
    }

    #[test]
    fn hexagonal_factor_closed_form_point() {
        let b =
            geometric_factor(MeshGeometry::Hexagonal, 1.0, freq(1.0 / (2.0 * SQRT_3), 0.0))
                .unwrap();
        assert!((b - (-14.0 / 9.0)).abs() < 1e-12, "got {b}");
    }

    #[test]
    fn phase_shift_is_zero_at_dc() {
        for g in MeshGeometry::ALL {
            assert_eq!(
                phase_shift(g, 1.0, freq(0.0, 0.0)).unwrap(),
                BandValue::In(0.0)
            );
        }
    }

    #[test]
    fn square_phase_at_quarter_band_diagonal() {
        let dphi = phase_shift(MeshGeometry::Square, 1.0, freq(0.25, 0.25))
            .unwrap()
            .expect_in_band();
        assert!((dphi + FRAC_PI_2).abs() < 1e-12, "got {dphi}");
    }

    #[test]
    fn out_of_band_factor_is_marked() {
        assert!(phase_shift_from_factor(2.5, 1).is_out_of_band());
        assert!(phase_shift_from_factor(-2.1, 2).is_out_of_band());
        // band edge: atan2 keeps the branch at pi
        let edge = phase_shift_from_factor(-2.0, 1).expect_in_band();
        assert!((edge + PI).abs() < 1e-15);
        // rounding-level overshoot is clamped, not rejected
        assert!(!phase_shift_from_factor(-2.0 - 1e-13, 1).is_out_of_band());
    }

    #[test]
    fn diagonal_speed_ratio_is_exact_inverse_sqrt2() {
        for u in [0.05, 0.1, 0.15, 0.2] {
            let k = speed_ratio(MeshGeometry::Square, 1.0, freq(u, u))
                .unwrap()
                .expect_in_band();
            assert!((k - FRAC_1_SQRT_2).abs() < 1e-12, "u={u}: got {k}");
        }
    }

    #[test]
    fn speed_ratio_near_dc_for_all_geometries() {
        for g in MeshGeometry::ALL {
            let k = speed_ratio(g, 1.0, freq(1e-6, 0.0)).unwrap().expect_in_band();
            assert!((k - FRAC_1_SQRT_2).abs() < 1e-6, "{g}: got {k}");
        }
    }

    #[test]
    fn axis_is_slower_than_diagonal_at_high_frequency() {
        let axis = speed_ratio(MeshGeometry::Square, 1.0, freq(0.45, 0.0))
            .unwrap()
            .expect_in_band();
        let u = 0.45 * FRAC_1_SQRT_2;
        let diagonal = speed_ratio(MeshGeometry::Square, 1.0, freq(u, u))
            .unwrap()
            .expect_in_band();
        assert!(axis < diagonal, "{axis} !< {diagonal}");
    }

    #[test]
    fn speed_ratio_rejects_dc() {
        assert_eq!(
            speed_ratio(MeshGeometry::Square, 1.0, freq(0.0, 0.0)).unwrap_err(),
            Error::ZeroFrequency
        );
    }

    #[test]
    fn speed_ratio_non_increasing_along_axis_and_diagonal() {
        for g in MeshGeometry::ALL {
            for diagonal in [false, true] {
                let mut last = f64::INFINITY;
                for i in 1..=100 {
                    let t = 0.25 * i as f64 / 100.0;
                    let f = if diagonal {
                        freq(t * FRAC_1_SQRT_2, t * FRAC_1_SQRT_2)
                    } else {
                        freq(t, 0.0)
                    };
                    let k = speed_ratio(g, 1.0, f).unwrap().expect_in_band();
                    assert!(k <= last + 1e-13, "{g} not monotone at xi={t}");
                    last = k;
                }
            }
        }
    }

    #[test]
    fn square_symmetries_hold() {
        let points = [(0.13, 0.07), (0.31, 0.22), (0.05, 0.41)];
        for (x, y) in points {
            let k = |fx: f64, fy: f64| {
                speed_ratio(MeshGeometry::Square, 1.0, freq(fx, fy))
                    .unwrap()
                    .expect_in_band()
            };
            assert!((k(x, y) - k(y, x)).abs() < 1e-12);
            assert!((k(x, y) - k(-x, y)).abs() < 1e-12);
        }
    }

    fn rotate(f: SpatialFrequency, angle: f64) -> SpatialFrequency {
        let (s, c) = angle.sin_cos();
        freq(c * f.xi_x - s * f.xi_y, s * f.xi_x + c * f.xi_y)
    }

    #[test]
    fn rotational_symmetries_hold() {
        let cases = [
            (MeshGeometry::Triangular, PI / 3.0),
            (MeshGeometry::Hexagonal, 2.0 * PI / 3.0),
        ];
        for (g, angle) in cases {
            for (x, y) in [(0.11, 0.04), (0.2, 0.17), (0.02, 0.31)] {
                let f = freq(x, y);
                let a = speed_ratio(g, 1.0, f).unwrap().expect_in_band();
                let b = speed_ratio(g, 1.0, rotate(f, angle)).unwrap().expect_in_band();
                assert!((a - b).abs() < 1e-12, "{g}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn dc_limits_are_closed_form() {
        for g in MeshGeometry::ALL {
            assert_eq!(dc_limit(g), FRAC_1_SQRT_2);
        }
        assert_eq!(critical_dc_limit(MeshGeometry::Square), FRAC_1_SQRT_2);
        assert!((critical_dc_limit(MeshGeometry::Triangular) - 0.816_496_580_927_726).abs() < 1e-12);
        assert!((critical_dc_limit(MeshGeometry::Hexagonal) - 0.471_404_520_791_031_7).abs() < 1e-12);
    }

    #[test]
    fn hexagonal_dc_limit_confirmed_by_richardson_extrapolation() {
        // numeric limit of the raw ratio along the x axis at xi = 1e-3, 1e-4,
        // 1e-5, Richardson-extrapolated assuming an even error expansion
        let k = |xi: f64| {
            speed_ratio(MeshGeometry::Hexagonal, 1.0, freq(xi, 0.0))
                .unwrap()
                .expect_in_band()
        };
        let (k1, k2, k3) = (k(1e-3), k(1e-4), k(1e-5));
        let r12 = (100.0 * k2 - k1) / 99.0;
        let r23 = (100.0 * k3 - k2) / 99.0;
        assert!((r12 - FRAC_1_SQRT_2).abs() < 1e-9, "got {r12}");
        assert!((r23 - FRAC_1_SQRT_2).abs() < 1e-9, "got {r23}");
    }

    #[test]
    fn critical_dc_limits_match_numeric_approach() {
        // the critically sampled ratio approaches its closed-form dc limit
        for g in MeshGeometry::ALL {
            let k = critical_speed_ratio(g, 0.5, freq(1e-7, 1e-7))
                .unwrap()
                .expect_in_band();
            assert!((k - critical_dc_limit(g)).abs() < 1e-9, "{g}: got {k}");
        }
    }

    #[test]
    fn normalized_ratio_is_one_at_dc() {
        for g in MeshGeometry::ALL {
            let k = normalized_speed_ratio(g, 0.5, freq(1e-9, 0.0))
                .unwrap()
                .expect_in_band();
            assert!((k - 1.0).abs() < 1e-9, "{g}: got {k}");
        }
    }

    #[test]
    fn square_critical_ratio_reduces_to_raw_at_reference_length() {
        let b = 0.5;
        let d = 1.0 / (2.0 * b);
        for (x, y) in [(0.1, 0.0), (0.2, 0.15), (0.3, 0.3)] {
            let raw = speed_ratio(MeshGeometry::Square, d, freq(x, y))
                .unwrap()
                .expect_in_band();
            let critical = critical_speed_ratio(MeshGeometry::Square, b, freq(x, y))
                .unwrap()
                .expect_in_band();
            assert!((raw - critical).abs() < 1e-14);
        }
    }

    #[test]
    fn map_has_dense_rows_and_diagonal_ridge() {
        let variant = MapVariant::Raw {
            waveguide_length: 1.0,
        };
        let grid = GridSpec::centered(variant.default_half_extent().unwrap(), 64);
        let map = dispersion_map(MeshGeometry::Square, variant, grid).unwrap();
        assert_eq!(map.samples().len(), 64 * 64);
        let max = map
            .samples()
            .iter()
            .filter_map(|s| s.k.value())
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((max - FRAC_1_SQRT_2).abs() < 1e-12, "ridge max {max}");
    }

    #[test]
    fn odd_normalized_map_is_exactly_one_at_center() {
        let variant = MapVariant::Normalized { bandwidth: 0.5 };
        let map = dispersion_map(
            MeshGeometry::Hexagonal,
            variant,
            GridSpec::centered(0.5, 129),
        )
        .unwrap();
        let center = map.sample(64, 64);
        assert_eq!(center.frequency.xi_x, 0.0);
        assert_eq!(center.frequency.xi_y, 0.0);
        assert_eq!(center.k, BandValue::In(1.0));
    }

    #[test]
    fn even_normalized_map_center_cells_are_near_one() {
        let map = dispersion_map(
            MeshGeometry::Hexagonal,
            MapVariant::Normalized { bandwidth: 0.5 },
            GridSpec::centered(0.5, 128),
        )
        .unwrap();
        for (ix, iy) in [(63, 63), (64, 63), (63, 64), (64, 64)] {
            let k = map.sample(ix, iy).k.expect_in_band();
            assert!((k - 1.0).abs() < 1e-3, "got {k}");
        }
    }

    #[test]
    fn map_samples_equal_direct_calls_at_pinned_points() {
        let variant = MapVariant::Raw {
            waveguide_length: 1.0,
        };
        let grid = GridSpec::centered(0.5, 64);
        let map = dispersion_map(MeshGeometry::Triangular, variant, grid).unwrap();
        let pinned = [
            (0, 0),
            (63, 0),
            (0, 63),
            (63, 63),
            (10, 20),
            (33, 40),
            (47, 5),
            (20, 59),
        ];
        for (ix, iy) in pinned {
            let s = map.sample(ix, iy);
            let direct = speed_ratio(MeshGeometry::Triangular, 1.0, s.frequency).unwrap();
            assert_eq!(s.k, direct, "cell ({ix},{iy})");
        }
    }

    #[test]
    fn tiny_grid_is_rejected() {
        let err = dispersion_map(
            MeshGeometry::Square,
            MapVariant::Raw {
                waveguide_length: 1.0,
            },
            GridSpec {
                xi_x_range: (-0.5, 0.5),
                xi_y_range: (-0.5, 0.5),
                nx: 1,
                ny: 8,
            },
        )
        .unwrap_err();
        assert_eq!(err, Error::GridTooSmall { nx: 1, ny: 8 });
    }

    #[test]
    fn csv_export_carries_oob_token() {
        // the real geometries never leave the band, so exercise the writer on
        // a hand-built sample
        let map = DispersionMap {
            geometry: MeshGeometry::Square,
            variant: MapVariant::Raw {
                waveguide_length: 1.0,
            },
            grid: GridSpec::centered(0.5, 2),
            samples: vec![
                DispersionSample {
                    frequency: freq(0.1, 0.2),
                    b: 1.5,
                    k: BandValue::In(0.625),
                },
                DispersionSample {
                    frequency: freq(0.3, 0.4),
                    b: 2.5,
                    k: BandValue::OutOfBand,
                },
            ],
        };
        let csv = map.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "xi_x,xi_y,b,k");
        assert!(lines[1].ends_with(",6.25000000e-1"));
        assert!(lines[2].ends_with(",oob"));
    }
}

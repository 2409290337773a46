//! Lattice-efficiency cross-checks done by brute-force point enumeration.

use wavemesh::{critical_length, lattice_basis, LatticeBasis, MeshGeometry, MeshLattice};

const SQRT_3: f64 = 1.732_050_807_568_877_3;

/// Sorted distances from the origin of all lattice points within `radius`.
fn origin_distance_spectrum(basis: &LatticeBasis, radius: f64) -> Vec<f64> {
    let bound = (radius
        * [basis.reciprocal().column(0), basis.reciprocal().column(1)]
            .iter()
            .map(|c| c[0].hypot(c[1]))
            .fold(0.0f64, f64::max))
    .ceil() as i64
        + 1;
    let mut distances = Vec::new();
    for u2 in -bound..=bound {
        for u1 in -bound..=bound {
            let p = basis.point([u1, u2]);
            let r = p[0].hypot(p[1]);
            if r < radius {
                distances.push(r);
            }
        }
    }
    distances.sort_by(|a, b| a.partial_cmp(b).unwrap());
    distances
}

#[test]
fn coarse_hexagonal_sublattice_is_a_rotated_triangular_lattice() {
    // the coarse sublattice at length d has the same distance spectrum as the
    // triangular lattice at length sqrt(3) d: congruent up to rotation
    let d = 0.7;
    let MeshLattice::Difference { coarse, .. } =
        lattice_basis(MeshGeometry::Hexagonal, d).unwrap()
    else {
        panic!("hexagonal lattice is a difference");
    };
    let MeshLattice::Full(triangular) =
        lattice_basis(MeshGeometry::Triangular, SQRT_3 * d).unwrap()
    else {
        panic!("triangular lattice is full");
    };
    let radius = 6.0 * SQRT_3 * d;
    let a = origin_distance_spectrum(&coarse, radius);
    let b = origin_distance_spectrum(&triangular, radius);
    assert_eq!(a.len(), b.len(), "point counts differ");
    assert!(a.len() > 100, "spectrum too small to be meaningful");
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() <= 1e-12, "{x} vs {y}");
    }
}

#[test]
fn critical_sampling_density_ratio_favors_the_triangular_mesh() {
    // at equal bandwidth the triangular mesh needs sqrt(3)/2 of the square
    // mesh's samples per unit area (13.4% fewer)
    let bandwidth = 2.31;
    let d_s = critical_length(MeshGeometry::Square, bandwidth).unwrap();
    let d_t = critical_length(MeshGeometry::Triangular, bandwidth).unwrap();
    let square = lattice_basis(MeshGeometry::Square, d_s).unwrap();
    let triangular = lattice_basis(MeshGeometry::Triangular, d_t).unwrap();
    let ratio = triangular.junction_density() / square.junction_density();
    assert!((ratio - SQRT_3 / 2.0).abs() <= 1e-13, "got {ratio}");
    // and the critical lengths relate by 2/sqrt(3)
    assert!((d_t / d_s - 2.0 / SQRT_3).abs() <= 1e-13);
}

#[test]
fn density_counts_match_brute_force_enumeration() {
    // junction densities against actual point counts in a large disc
    let radius = 40.0;
    let area = std::f64::consts::PI * radius * radius;
    for (geometry, d) in [
        (MeshGeometry::Square, 1.0),
        (MeshGeometry::Triangular, 1.3),
        (MeshGeometry::Hexagonal, 0.9),
    ] {
        let lattice = lattice_basis(geometry, d).unwrap();
        let count = match lattice {
            MeshLattice::Full(basis) => origin_distance_spectrum(&basis, radius).len(),
            MeshLattice::Difference { fine, coarse } => {
                origin_distance_spectrum(&fine, radius).len()
                    - origin_distance_spectrum(&coarse, radius).len()
            }
        };
        let expected = area * lattice.junction_density();
        let err = (count as f64 - expected).abs() / expected;
        assert!(err < 0.01, "{geometry}: {count} vs {expected}");
    }
}

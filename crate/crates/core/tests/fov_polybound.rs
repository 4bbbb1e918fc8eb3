mod common;

use common::*;
use fovk::fov::{certificate, constants_abc, fov_boundary, numerical_radius, CertificateOptions};
use fovk::linalg::{factor_spd, Matrix, WeightedSpace};
use fovk::polybound::{asymptotic_factor, en_values, estimate_en, Region};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn two_disks(n: usize) -> Region {
    let mut loops = Region::disk(c(-1.0, 0.0), 0.25, n).loops;
    loops.extend(Region::disk(c(2.0, 0.0), 1.2, n).loops);
    Region::from_loops(loops)
}

#[test]
fn two_disk_estimate_is_bracketed() {
    // Lower bound: the harder disk alone. Upper bound: products of the two
    // disk-optimal factors, best split of the degree.
    let region = two_disks(256);
    for n in [4, 8] {
        let e = estimate_en(&region, n).unwrap();
        let lower = 0.6f64.powi(n as i32);
        let upper = (0..=n)
            .map(|k| {
                region
                    .samples()
                    .iter()
                    .map(|z| ((1.0 + z).powi(k as i32) * (1.0 - z / 2.0).powi((n - k) as i32)).norm())
                    .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min);
        assert!(e >= lower * (1.0 - 1e-3) && e <= upper * (1.0 + 1e-6), "n {n}: {lower} ≤ {e} ≤ {upper}");
    }
}

#[test]
fn estimate_is_rotation_invariant() {
    let region = two_disks(128);
    let rot = c(0.6, 0.8);
    let rotated = Region::from_loops(region.loops.iter().map(|l| l.iter().map(|z| z * rot).collect()).collect());
    for n in [3, 6] {
        let (e1, e2) = (estimate_en(&region, n).unwrap(), estimate_en(&rotated, n).unwrap());
        assert!((e1 - e2).abs() <= 1e-6 * e1, "{e1} vs {e2}");
    }
}

#[test]
fn curve_is_monotone() {
    let values = en_values(&two_disks(128), &(0..=10).collect::<Vec<_>>()).unwrap();
    assert_eq!(values[0], 1.0);
    assert!(values.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn disk_factor_is_radius_over_distance() {
    let rho = asymptotic_factor(&Region::disk(c(1.0, 0.0), 0.5, 256), 12).unwrap();
    assert!((rho - 0.5).abs() <= 0.01);
}

#[test]
fn normal_matrix_field_of_values_is_eigenvalue_hull() {
    // Real block diagonal with eigenvalues 1, 2 ± i, 3: the hull is the
    // quadrilateral with those vertices.
    let a = Matrix::from_row_slice(4, 4, &[1.0, 0.0, 0.0, 0.0, 0.0, 2.0, 1.0, 0.0, 0.0, -1.0, 2.0, 0.0, 0.0, 0.0, 0.0, 3.0]);
    let b = fov_boundary(&a, &WeightedSpace::euclidean(4), 64).unwrap();
    let verts = [c(1.0, 0.0), c(2.0, -1.0), c(3.0, 0.0), c(2.0, 1.0)];
    for p in &b.points {
        let inside = (0..4).all(|k| {
            let (u, v) = (verts[k], verts[(k + 1) % 4]);
            ((v - u).conj() * (p - u)).im >= -1e-8
        });
        let on_edge = (0..4).any(|k| {
            let (u, v) = (verts[k], verts[(k + 1) % 4]);
            ((v - u).conj() * (p - u)).im.abs() <= 1e-8
        });
        assert!(inside && on_edge, "{p}");
    }
    let w = numerical_radius(&a, &WeightedSpace::euclidean(4)).unwrap();
    assert!((w - 3.0).abs() <= 1e-8);
}

#[test]
fn weighted_constants_match_similarity_svd() {
    let mut r = rng(21);
    let a = random_matrix(&mut r, 8, 8) + Matrix::identity(8, 8) * 4.0;
    let h = factor_spd(&random_spd(&mut r, 8)).unwrap();
    let (na, nb, nc) = constants_abc(&a, &h).unwrap();
    let at = h.similarity(&a);
    let sv = jacobi_singular_values(&at);
    assert!((na - sv[0]).abs() <= 1e-8 * sv[0]);
    assert!((nb - 1.0 / sv[7]).abs() <= 1e-8 * nb);
    let skew = (&at - at.transpose()) * 0.5;
    let sk = jacobi_singular_values(&skew)[0];
    assert!((nc - sk).abs() <= 1e-8 * sk.max(1.0));
}

#[test]
fn bc_is_scale_invariant() {
    let mut r = rng(22);
    let a = random_matrix(&mut r, 10, 10) + Matrix::identity(10, 10) * 5.0;
    let e = WeightedSpace::euclidean(10);
    let opts = CertificateOptions {
        n_angles: 32,
        ..Default::default()
    };
    let base = certificate(&a, &e, &opts).unwrap().bc;
    for alpha in [0.1, 10.0] {
        let bc = certificate(&(&a * alpha), &e, &opts).unwrap().bc;
        assert!((bc - base).abs() <= 1e-10 * base);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn disk_estimate_is_exact(cr in -3.0f64..3.0, ci in -3.0f64..3.0, frac in 0.1f64..0.9, n in 1usize..7) {
        let center = c(cr, ci);
        prop_assume!(center.norm() > 0.2);
        let e = estimate_en(&Region::disk(center, frac * center.norm(), 256), n).unwrap();
        prop_assert!((e - frac.powi(n as i32)).abs() <= 1e-3, "{e} vs {}", frac.powi(n as i32));
    }
}

//! Zeros of every builder lie on the unit circle.

use std::f64::consts::PI;

use leeyang_core::partition::uniform_couplings;
use leeyang_core::{
    build_exact, build_long_range, build_ring, find_zeros, predicted_zero_times, HalfInt, PartitionPolynomial,
};
use num_complex::Complex64;

const BETAS: [f64; 6] = [0.0, 1.0 / 32.0, 1.0 / 8.0, 0.5, 1.0, 4.0];

fn baths(beta: f64) -> Vec<(&'static str, PartitionPolynomial)> {
    let s52 = HalfInt::from_doubled(5);
    let mixed = [HalfInt::HALF, HalfInt::ONE, HalfInt::from_doubled(3)];
    let couplings = vec![vec![0.0, 0.7, 0.2], vec![0.7, 0.0, 1.3], vec![0.2, 1.3, 0.0]];
    vec![
        ("pair 5/2", build_exact(&[s52, s52], &uniform_couplings(2, 1.0), beta).unwrap()),
        ("mixed triple", build_exact(&mixed, &couplings, beta).unwrap()),
        ("long-range 4x1/2", build_long_range(4, HalfInt::HALF, 1.0, beta).unwrap()),
        ("long-range 5x1", build_long_range(5, HalfInt::ONE, 1.0, beta).unwrap()),
        ("ring 10x1", build_ring(10, HalfInt::ONE, 1.0, beta).unwrap()),
        ("ring 6x3/2", build_ring(6, HalfInt::from_doubled(3), 1.0, beta).unwrap()),
    ]
}

#[test]
fn zeros_on_unit_circle() {
    for beta in BETAS {
        for (name, poly) in baths(beta) {
            let zeros = find_zeros(&poly).unwrap();
            let clustered = zeros.clusters.iter().any(|c| c.multiplicity > 1);
            let tol = if clustered { 1e-4 } else { 1e-8 };
            assert!(zeros.circle_deviation < tol, "{name} beta={beta}: {:e}", zeros.circle_deviation);
            if !clustered {
                assert!(zeros.max_residual < 1e-10, "{name} beta={beta}: residual {:e}", zeros.max_residual);
            }
            // θ → −θ symmetry
            for &a in &zeros.angles {
                let mirrored = if a == PI { PI } else { -a };
                assert!(zeros.angles.iter().any(|&b| (b - mirrored).abs() < 1e-9), "{name} beta={beta}");
            }
        }
    }
}

#[test]
fn predicted_times_reproduce_roots() {
    for beta in [1.0 / 8.0, 1.0] {
        for (name, poly) in baths(beta) {
            let zeros = find_zeros(&poly).unwrap();
            for delta in [1u32, 2] {
                let lambda = 0.7;
                let pred = predicted_zero_times(&zeros, lambda, delta).unwrap();
                let period = 2.0 * PI / (lambda * f64::from(delta));
                for &t in &pred.times {
                    assert!((0.0..period).contains(&t));
                    let z = Complex64::from_polar(1.0, -lambda * f64::from(delta) * t);
                    let hit = zeros.roots.iter().map(|r| (r - z).norm()).fold(f64::INFINITY, f64::min);
                    assert!(hit < 1e-9, "{name} beta={beta} delta={delta}: {hit:e}");
                }
            }
        }
    }
}

#[test]
fn infinite_temperature_closed_forms() {
    let s52 = HalfInt::from_doubled(5);
    let pair = find_zeros(&build_exact(&[s52, s52], &uniform_couplings(2, 1.0), 0.0).unwrap()).unwrap();
    let sixth: Vec<f64> = [-2.0, -1.0, 1.0, 2.0, 3.0].iter().map(|k| k * PI / 3.0).collect();
    assert_eq!(pair.clusters.iter().map(|c| c.multiplicity).collect::<Vec<_>>(), vec![2; 5]);
    for (c, w) in pair.clusters.iter().zip(&sixth) {
        assert!((c.angle - w).abs() < 1e-6);
    }

    let lr = find_zeros(&build_long_range(4, HalfInt::HALF, 1.0, 0.0).unwrap()).unwrap();
    assert_eq!(lr.clusters.len(), 1);
    assert_eq!(lr.clusters[0].multiplicity, 4);
    assert!((lr.clusters[0].angle - PI).abs() < 1e-6);

    let ring = find_zeros(&build_ring(10, HalfInt::ONE, 1.0, 0.0).unwrap()).unwrap();
    assert_eq!(ring.clusters.len(), 2);
    for (c, w) in ring.clusters.iter().zip([-2.0 * PI / 3.0, 2.0 * PI / 3.0]) {
        assert_eq!(c.multiplicity, 10);
        assert!((c.angle - w).abs() < 1e-6);
    }
}

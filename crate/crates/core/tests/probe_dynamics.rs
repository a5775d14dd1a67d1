//! Invariants of the probe coherence signal and of zero detection.

use std::f64::consts::TAU;

use leeyang_core::partition::uniform_couplings;
use leeyang_core::probe::{DEFAULT_MATCH_WINDOW, DEFAULT_STEPS};
use leeyang_core::{
    build_exact, build_long_range, build_ring, correlate, detect_zero_times, expectation_series, find_zeros, HalfInt,
    PartitionPolynomial, ProbeSignal, ProbeState,
};

fn baths() -> Vec<(&'static str, PartitionPolynomial, HalfInt)> {
    let s52 = HalfInt::from_doubled(5);
    let mut out = Vec::new();
    for beta in [0.0, 1.0 / 8.0, 1.0] {
        out.push(("pair 5/2", build_exact(&[s52, s52], &uniform_couplings(2, 1.0), beta).unwrap(), s52));
        out.push(("long-range 4x1/2", build_long_range(4, HalfInt::HALF, 1.0, beta).unwrap(), HalfInt::HALF));
        out.push(("long-range 3x1/2", build_long_range(3, HalfInt::HALF, 1.0, beta).unwrap(), HalfInt::ONE));
        out.push(("ring 10x1", build_ring(10, HalfInt::ONE, 1.0, beta).unwrap(), HalfInt::from_doubled(3)));
    }
    out
}

#[test]
fn signal_is_real_and_bounded() {
    for (name, poly, s0) in baths() {
        let state = ProbeState::x_polarized(s0).unwrap();
        for delta in 1..=s0.doubled() as u32 {
            let series = expectation_series(&poly, &state, 1.0, delta, 0.0, 2.0 * TAU, 2000).unwrap();
            let f0 = series.values()[0].re;
            assert_eq!(series.values()[0].im, 0.0);
            for v in series.values() {
                assert!(v.im.abs() < 1e-12, "{name} delta={delta}: im {:e}", v.im);
                assert!(v.norm() <= f0 + 1e-12, "{name} delta={delta}");
            }
        }
    }
}

#[test]
fn magnitude_is_periodic() {
    for (name, poly, s0) in baths() {
        let state = ProbeState::x_polarized(s0).unwrap();
        let lambda = 1.7;
        let f = ProbeSignal::new(&poly, &state, lambda, 1, 0.0).unwrap();
        let period = f.period();
        for k in 0..50 {
            let t = 0.137 * k as f64;
            assert!((f.eval(t + period).norm() - f.eval(t).norm()).abs() < 1e-12, "{name}");
        }
    }
}

#[test]
fn ratio_compresses_with_delta() {
    for (name, poly, s0) in baths() {
        if s0.doubled() < 2 {
            continue;
        }
        let state = ProbeState::x_polarized(s0).unwrap();
        let one = ProbeSignal::new(&poly, &state, 1.0, 1, 0.0).unwrap();
        let two = ProbeSignal::new(&poly, &state, 1.0, 2, 0.0).unwrap();
        for k in 0..=400 {
            let t = TAU * k as f64 / 400.0;
            let d = (two.partition_ratio(t) - one.partition_ratio(2.0 * t)).norm();
            assert!(d < 1e-12, "{name} t={t}: {d:e}");
        }
    }
}

#[test]
fn probe_field_is_a_pure_phase() {
    let s52 = HalfInt::from_doubled(5);
    let poly = build_exact(&[s52, s52], &uniform_couplings(2, 1.0), 0.5).unwrap();
    let state = ProbeState::x_polarized(s52).unwrap();
    let plain = ProbeSignal::new(&poly, &state, 1.0, 2, 0.0).unwrap();
    let fielded = ProbeSignal::new(&poly, &state, 1.0, 2, 0.3).unwrap();
    for k in 0..100 {
        let t = 0.05 * k as f64;
        let want = plain.eval(t) * num_complex::Complex64::from_polar(1.0, -0.3 * 2.0 * t);
        assert!((fielded.eval(t) - want).norm() < 1e-12);
    }
}

#[test]
fn simple_zeros_detected_at_predicted_times() {
    for (name, poly, s0) in baths() {
        if poly.beta() == 0.0 {
            continue;
        }
        let zeros = find_zeros(&poly).unwrap();
        assert!(zeros.clusters.iter().all(|c| c.multiplicity == 1));
        let state = ProbeState::x_polarized(s0).unwrap();
        for delta in 1..=s0.doubled().min(2) as u32 {
            let period = TAU / f64::from(delta);
            let series = expectation_series(&poly, &state, 1.0, delta, 0.0, period, DEFAULT_STEPS).unwrap();
            let report = correlate(&zeros, &series, DEFAULT_MATCH_WINDOW).unwrap();
            assert!(report.all_predictions_matched(), "{name} delta={delta}: {:?}", report.unmatched_predicted);
            assert!(report.unmatched_detected.is_empty());
            assert!(report.max_deviation.unwrap() < 1e-8, "{name}");
            assert!(report.detected.iter().all(|d| d.residual < 1e-10), "{name}");
            assert!(report.matches.iter().all(|m| m.deviation <= report.window));
        }
    }
}

#[test]
fn susceptibility_channel_halves_zero_times() {
    for (name, poly, s0) in baths() {
        if s0.doubled() < 2 {
            continue;
        }
        let state = ProbeState::x_polarized(s0).unwrap();
        let one = expectation_series(&poly, &state, 1.0, 1, 0.0, TAU, DEFAULT_STEPS).unwrap();
        let two = expectation_series(&poly, &state, 1.0, 2, 0.0, TAU / 2.0, DEFAULT_STEPS).unwrap();
        let t1 = detect_zero_times(&one, 1e-6);
        let t2 = detect_zero_times(&two, 1e-6);
        assert_eq!(t1.len(), t2.len(), "{name}");
        assert!(!t1.is_empty());
        for (a, b) in t1.iter().zip(&t2) {
            assert!((a.time / 2.0 - b.time).abs() < 1e-8, "{name}: {} vs {}", a.time, b.time);
        }
    }
}

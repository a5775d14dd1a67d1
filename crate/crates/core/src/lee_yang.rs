//! Lee-Yang zeros of a partition polynomial and the probe times they predict.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::partition::PartitionPolynomial;
use crate::roots::{polynomial_roots, residual};

/// Roots whose angles differ by less than this are reported as one cluster.
pub const CLUSTER_ANGLE_TOL: f64 = 1e-4;

/// A group of coincident zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct RootCluster {
    /// Argument of the members' mean, in `(−π, π]`.
    pub angle: f64,
    pub multiplicity: usize,
    /// Indices into [`ZeroSet::roots`].
    pub members: Vec<usize>,
}

/// Zeros `z_n = |z_n| e^{iθ_n}` of `Σ p_n z^n`, counted with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    /// Sorted by angle.
    pub roots: Vec<Complex64>,
    /// `θ_n ∈ (−π, π]`, aligned with `roots`.
    pub angles: Vec<f64>,
    pub clusters: Vec<RootCluster>,
    /// `max | |z_n| − 1 |`.
    pub circle_deviation: f64,
    /// `max |P(z_n)|` on max-normalised coefficients.
    pub max_residual: f64,
}

impl ZeroSet {
    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    /// Multiplicity of the cluster holding root `index`.
    pub fn multiplicity_of(&self, index: usize) -> usize {
        self.clusters.iter().find(|c| c.members.contains(&index)).map_or(1, |c| c.multiplicity)
    }
}

/// Argument in `(−π, π]`; `−π` folds onto `π`.
fn angle_of(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a <= -PI {
        PI
    } else {
        a
    }
}

/// `max | |z| − 1 |` over a root set (zero for an empty set).
pub fn circle_deviation(roots: &[Complex64]) -> f64 {
    roots.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max)
}

/// All `2Ns` zeros of the partition polynomial.
pub fn find_zeros(poly: &PartitionPolynomial) -> Result<ZeroSet> {
    let coeffs = poly.normalized_coeffs();
    let mut roots = polynomial_roots(&coeffs)?;
    for z in roots.iter_mut() {
        // a real root must read as θ = π, not −π
        if z.im == 0.0 {
            *z = Complex64::new(z.re, 0.0);
        }
    }
    roots.sort_by(|a, b| angle_of(*a).total_cmp(&angle_of(*b)).then(a.norm().total_cmp(&b.norm())));
    let angles: Vec<f64> = roots.iter().map(|&z| angle_of(z)).collect();
    let clusters = cluster_by_angle(&roots, &angles);
    let max_residual = roots.iter().map(|&z| residual(&coeffs, z)).fold(0.0, f64::max);
    Ok(ZeroSet { circle_deviation: circle_deviation(&roots), roots, angles, clusters, max_residual })
}

/// Chains angle-sorted roots whose neighbours are within [`CLUSTER_ANGLE_TOL`],
/// wrapping across `±π`.
fn cluster_by_angle(roots: &[Complex64], angles: &[f64]) -> Vec<RootCluster> {
    let n = angles.len();
    if n == 0 {
        return Vec::new();
    }
    let mut groups: Vec<Vec<usize>> = vec![vec![0]];
    for i in 1..n {
        if angles[i] - angles[i - 1] <= CLUSTER_ANGLE_TOL {
            groups.last_mut().unwrap().push(i);
        } else {
            groups.push(vec![i]);
        }
    }
    if groups.len() > 1 && angles[0] + TAU - angles[n - 1] <= CLUSTER_ANGLE_TOL {
        let first = groups.remove(0);
        groups.last_mut().unwrap().extend(first);
    }
    groups
        .into_iter()
        .map(|members| {
            let mean = members.iter().map(|&i| roots[i]).sum::<Complex64>() / members.len() as f64;
            RootCluster { angle: angle_of(mean), multiplicity: members.len(), members }
        })
        .collect()
}

/// Zero times for one coupling/ladder-power pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictedTimes {
    pub lambda: f64,
    pub delta: u32,
    /// Ascending, in `[0, 2π/(λδ))`.
    pub times: Vec<f64>,
}

impl PredictedTimes {
    pub fn period(&self) -> f64 {
        TAU / (self.lambda * f64::from(self.delta))
    }
}

/// `((−θ) mod 2π) / rate`, with `rate = λδ`.
pub fn zero_time(theta: f64, rate: f64) -> f64 {
    let phase = (-theta).rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny positive θ
    if phase >= TAU {
        0.0
    } else {
        phase / rate
    }
}

/// `t_n = ((−θ_n) mod 2π) / (λδ)`, one per root.
pub fn predicted_zero_times(zeros: &ZeroSet, lambda: f64, delta: u32) -> Result<PredictedTimes> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return domain(format!("coupling lambda must be positive, got {lambda}"));
    }
    if delta == 0 {
        return domain("ladder power delta must be at least 1");
    }
    let rate = lambda * f64::from(delta);
    let mut times: Vec<f64> = zeros.angles.iter().map(|&theta| zero_time(theta, rate)).collect();
    times.sort_by(f64::total_cmp);
    Ok(PredictedTimes { lambda, delta, times })
}

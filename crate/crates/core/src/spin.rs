//! Exact half-integer spin bookkeeping and ladder-operator matrix elements.
//!
//! Quantum numbers are stored doubled so that `s = 5/2` is the integer `5`.
//! All arithmetic on them is integer arithmetic; values only become `f64`
//! inside the square roots of the ladder coefficients.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::probe::ProbeState;

/// A half-integer `doubled / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt {
    doubled: i32,
}

impl HalfInt {
    pub const HALF: HalfInt = HalfInt { doubled: 1 };
    pub const ONE: HalfInt = HalfInt { doubled: 2 };

    pub const fn from_doubled(doubled: i32) -> Self {
        Self { doubled }
    }

    pub const fn from_int(n: i32) -> Self {
        Self { doubled: 2 * n }
    }

    /// A spin magnitude `s = doubled/2`, which must be at least `1/2`.
    pub fn spin(doubled: i32) -> Result<Self> {
        let s = Self { doubled };
        s.check_magnitude()?;
        Ok(s)
    }

    pub const fn doubled(self) -> i32 {
        self.doubled
    }

    pub fn value(self) -> f64 {
        f64::from(self.doubled) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.doubled % 2 == 0
    }

    /// Adds a whole number.
    pub const fn shift(self, k: i32) -> Self {
        Self { doubled: self.doubled + 2 * k }
    }

    /// Multiplet dimension `2s + 1`.
    pub fn multiplicity(self) -> usize {
        (self.doubled.max(-1) + 1) as usize
    }

    pub(crate) fn check_magnitude(self) -> Result<()> {
        if self.doubled < 1 {
            return domain(format!("spin magnitude must be at least 1/2, got {self}"));
        }
        Ok(())
    }

    /// Checks that `self` is one of the projections `-s, -s+1, …, s` of `s`.
    pub fn check_projection_of(self, s: HalfInt) -> Result<()> {
        s.check_magnitude()?;
        if (s.doubled - self.doubled) % 2 != 0 || self.doubled.abs() > s.doubled {
            return domain(format!("{self} is not a projection of spin {s}"));
        }
        Ok(())
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: Self) -> Self {
        Self { doubled: self.doubled + rhs.doubled }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: Self) -> Self {
        Self { doubled: self.doubled - rhs.doubled }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> Self {
        Self { doubled: -self.doubled }
    }
}

/// Projections `m = -s, -s+1, …, s` in ascending order.
pub fn projections(s: HalfInt) -> Result<Vec<HalfInt>> {
    s.check_magnitude()?;
    Ok((0..=s.doubled).map(|k| HalfInt::from_doubled(-s.doubled + 2 * k)).collect())
}

/// `∏_{q=1}^{δ} √(s₀(s₀+1) − (l+q−1)(l+q))`, the matrix element
/// `⟨l+δ| (s₀⁺)^δ |l⟩`.
///
/// Requires `-s₀ ≤ l ≤ s₀ − δ`; outside that range the element vanishes and
/// asking for it is a domain error.
pub fn ladder_product_coeff(s0: HalfInt, l: HalfInt, delta: u32) -> Result<f64> {
    l.check_projection_of(s0)?;
    if delta == 0 {
        return domain("ladder power must be at least 1");
    }
    let d0 = i64::from(s0.doubled);
    let dl = i64::from(l.doubled);
    let dd = 2 * i64::from(delta);
    if dd > 2 * d0 || dl + dd > d0 {
        return domain(format!("(s0+)^{delta} annihilates |{l}> for s0 = {s0}"));
    }
    // 4·[s₀(s₀+1) − (l+q−1)(l+q)] in doubled units is an exact integer.
    let casimir4 = d0 * (d0 + 2);
    let product = (1..=i64::from(delta))
        .map(|q| {
            let lo = dl + 2 * q - 2;
            let numer = casimir4 - lo * (lo + 2);
            (numer as f64).sqrt() / 2.0
        })
        .product();
    Ok(product)
}

/// The eigenstate of `s₀ˣ` with eigenvalue `s₀`, in the `s₀ᶻ` basis.
///
/// `a_m = 2^{-s₀} √C(2s₀, s₀+m)`, all real and non-negative.
pub fn sx_top_eigenstate(s0: HalfInt) -> Result<ProbeState> {
    s0.check_magnitude()?;
    let n = s0.doubled as usize;
    // ln C(n, k) built up by ratios, then rescaled and normalised explicitly.
    let mut log_binom = Vec::with_capacity(n + 1);
    let mut acc = 0.0f64;
    log_binom.push(acc);
    for k in 1..=n {
        acc += ((n - k + 1) as f64).ln() - (k as f64).ln();
        log_binom.push(acc);
    }
    let peak = log_binom.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut amps: Vec<f64> = log_binom.iter().map(|&lb| (0.5 * (lb - peak)).exp()).collect();
    let norm = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    // C(n, k) = C(n, n-k): enforce the mirror symmetry bit for bit.
    for k in 0..n / 2 + 1 {
        let v = amps[k];
        amps[n - k] = v;
    }
    ProbeState::new(s0, amps.into_iter().map(|a| Complex64::new(a, 0.0)).collect())
}

//! Partition polynomials `Z(β, h) ∝ Σ_n p_n z^n`, `z = exp(-βh)`.
//!
//! `p_n` is the zero-field partition function restricted to total projection
//! `Ns − n`. The bath energy is the ferromagnetic pair sum
//! `H = −Σ_{i<j} J_ij m_i m_j`, so the field enters only through `z`.
//! Coefficients are kept as natural logarithms.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::logspace::LogAccumulator;
use crate::spin::{projections, HalfInt};

/// Upper bound on configurations enumerated by [`build_exact`].
pub const ENUMERATION_CAP: u64 = 2_000_000;

/// The model a polynomial was generated from.
#[derive(Debug, Clone, PartialEq)]
pub enum BathModel {
    /// Arbitrary ferromagnetic couplings, summed by enumeration.
    Exact { spins: Vec<HalfInt>, couplings: Vec<Vec<f64>> },
    /// All pairs coupled by `J/N`.
    LongRange { n: usize, s: HalfInt, j: f64 },
    /// Nearest-neighbour ring of `n` sites.
    Ring { n: usize, s: HalfInt, j: f64 },
    /// Coefficients supplied directly.
    Custom,
}

impl BathModel {
    pub fn name(&self) -> &'static str {
        match self {
            BathModel::Exact { .. } => "exact",
            BathModel::LongRange { .. } => "long_range",
            BathModel::Ring { .. } => "ring",
            BathModel::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionPolynomial {
    beta: f64,
    log_coeffs: Vec<f64>,
    model: BathModel,
}

impl PartitionPolynomial {
    fn new(beta: f64, log_coeffs: Vec<f64>, model: BathModel) -> Result<Self> {
        if log_coeffs.len() < 2 {
            return domain("partition polynomial must have degree at least 1");
        }
        if let Some(bad) = log_coeffs.iter().position(|x| !x.is_finite()) {
            return Err(Error::Numerical(format!("log p_{bad} is not finite")));
        }
        Ok(Self { beta, log_coeffs, model })
    }

    /// Wraps strictly positive linear coefficients `p_0, …, p_d`.
    pub fn from_coeffs(coeffs: &[f64]) -> Result<Self> {
        if coeffs.iter().any(|&c| !(c > 0.0 && c.is_finite())) {
            return domain("coefficients must be positive and finite");
        }
        Self::new(0.0, coeffs.iter().map(|c| c.ln()).collect(), BathModel::Custom)
    }

    /// Polynomial degree `2Ns`.
    pub fn degree(&self) -> usize {
        self.log_coeffs.len() - 1
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn model(&self) -> &BathModel {
        &self.model
    }

    /// `ln p_n`, `n = 0..=2Ns`.
    pub fn log_coeffs(&self) -> &[f64] {
        &self.log_coeffs
    }

    /// `c_n = exp(ln p_n − max_k ln p_k)`; the largest entry is exactly 1.
    pub fn normalized_coeffs(&self) -> Vec<f64> {
        let max = self.log_coeffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        self.log_coeffs.iter().map(|&l| (l - max).exp()).collect()
    }

    /// See [`eval_ratio`].
    pub fn eval_ratio(&self, z: Complex64) -> Complex64 {
        eval_ratio(self, z)
    }
}

/// `Σ p_n z^n / Σ p_n`.
///
/// Numerator and denominator go through the same Horner recurrence, so the
/// result at `z = 1` is exactly one.
pub fn eval_ratio(poly: &PartitionPolynomial, z: Complex64) -> Complex64 {
    let c = poly.normalized_coeffs();
    let num = c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &cn| acc * z + cn);
    let den = c.iter().rev().fold(0.0, |acc, &cn| acc + cn);
    num / den
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return domain(format!("inverse temperature must be finite and non-negative, got {beta}"));
    }
    Ok(())
}

fn check_coupling(j: f64) -> Result<()> {
    if !(j >= 0.0 && j.is_finite()) {
        return domain(format!("coupling must be finite and ferromagnetic (J >= 0), got {j}"));
    }
    Ok(())
}

/// Exhaustive enumeration of `Σ_config exp(β Σ_{i<j} J_ij m_i m_j)` per sector.
///
/// `couplings` is symmetric with zero diagonal, in units of `J`.
pub fn build_exact(spins: &[HalfInt], couplings: &[Vec<f64>], beta: f64) -> Result<PartitionPolynomial> {
    check_beta(beta)?;
    let n = spins.len();
    if n == 0 {
        return domain("bath must contain at least one spin");
    }
    for s in spins {
        s.check_magnitude()?;
    }
    if couplings.len() != n || couplings.iter().any(|row| row.len() != n) {
        return domain(format!("coupling matrix must be {n}x{n}"));
    }
    for i in 0..n {
        if couplings[i][i] != 0.0 {
            return domain(format!("coupling matrix diagonal must be zero (entry {i},{i})"));
        }
        for j in 0..i {
            check_coupling(couplings[i][j])?;
            if couplings[i][j] != couplings[j][i] {
                return domain(format!("coupling matrix is not symmetric at ({i},{j})"));
            }
        }
    }
    let requested: u128 = spins.iter().map(|s| s.multiplicity() as u128).product();
    if requested > u128::from(ENUMERATION_CAP) {
        return Err(Error::Capacity { requested, cap: ENUMERATION_CAP });
    }

    let levels: Vec<Vec<HalfInt>> = spins.iter().map(|&s| projections(s)).collect::<Result<_>>()?;
    let degree: i32 = spins.iter().map(|s| s.doubled()).sum();
    let mut sectors = vec![LogAccumulator::new(); degree as usize + 1];
    let mut idx = vec![0usize; n];
    let mut m = vec![0.0f64; n];
    loop {
        let mut lowered = 0i32; // Σ (s_i − m_i) in doubled units
        for i in 0..n {
            let mi = levels[i][idx[i]];
            m[i] = mi.value();
            lowered += spins[i].doubled() - mi.doubled();
        }
        let mut bond = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                bond += couplings[i][j] * m[i] * m[j];
            }
        }
        sectors[(lowered / 2) as usize].push(beta * bond);

        // odometer, last spin fastest
        let mut k = n;
        loop {
            if k == 0 {
                let log_coeffs = sectors.iter().map(LogAccumulator::value).collect();
                let model = BathModel::Exact { spins: spins.to_vec(), couplings: couplings.to_vec() };
                return PartitionPolynomial::new(beta, log_coeffs, model);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < levels[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Mean-field bath: every pair coupled by `J/N`.
///
/// With `M = Σ m_i` the energy is `−(J/2N)(M² − Σ m_i²)`, so
/// `p_n = exp((βJ/2N)(Ns − n)²) · W_n` where `W_n` sums the single-site
/// weights `exp(−(βJ/2N) m²)` over configurations with `M = Ns − n`. `W_n`
/// comes from an `N`-fold convolution over sectors.
pub fn build_long_range(n: usize, s: HalfInt, j: f64, beta: f64) -> Result<PartitionPolynomial> {
    check_beta(beta)?;
    check_coupling(j)?;
    if n == 0 {
        return domain("long-range bath needs N >= 1");
    }
    let a = beta * j / (2.0 * n as f64);
    let site: Vec<f64> = projections(s)?.iter().rev().map(|m| -a * m.value() * m.value()).collect();
    let width = site.len() - 1; // 2s

    let mut conv = vec![0.0f64];
    for _ in 0..n {
        let mut next = vec![LogAccumulator::new(); conv.len() + width];
        for (p, &lp) in conv.iter().enumerate() {
            for (q, &lq) in site.iter().enumerate() {
                next[p + q].push(lp + lq);
            }
        }
        conv = next.iter().map(LogAccumulator::value).collect();
    }

    let ns = n as f64 * s.value();
    let log_coeffs = conv
        .iter()
        .enumerate()
        .map(|(k, &lw)| {
            let total = ns - k as f64;
            a * total * total + lw
        })
        .collect();
    PartitionPolynomial::new(beta, log_coeffs, BathModel::LongRange { n, s, j })
}

/// Independent evaluation of one long-range coefficient through the
/// projection integral
/// `p_n = e^{a(Ns−n)²} (1/2π) ∫₀^{2π} e^{−iφ(Ns−n)} (Σ_m e^{−a m²} cos mφ)^N dφ`,
/// `a = βJ/2N`.
///
/// The integrand is a trigonometric polynomial, so the periodic trapezoid
/// rule is exact once it has more than `2Ns` nodes; the node count still
/// doubles from `8(2Ns+1)` until two passes agree to `1e-12`.
pub fn long_range_integral_oracle(n_spins: usize, s: HalfInt, j: f64, beta: f64, n: usize) -> Result<f64> {
    check_beta(beta)?;
    check_coupling(j)?;
    if n_spins == 0 {
        return domain("long-range bath needs N >= 1");
    }
    let ms: Vec<f64> = projections(s)?.iter().map(|m| m.value()).collect();
    let degree = n_spins * s.doubled() as usize;
    if n > degree {
        return domain(format!("coefficient index {n} outside 0..={degree}"));
    }
    let a = beta * j / (2.0 * n_spins as f64);
    let target = n_spins as f64 * s.value() - n as f64;
    let weights: Vec<f64> = ms.iter().map(|m| (-a * m * m).exp()).collect();

    // returns the node average and the average modulus of the integrand
    let trapezoid = |nodes: usize| -> (Complex64, f64) {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        for k in 0..nodes {
            let phi = 2.0 * PI * k as f64 / nodes as f64;
            let g: f64 = ms.iter().zip(&weights).map(|(m, w)| w * (m * phi).cos()).sum();
            let gn = g.powi(n_spins as i32);
            acc += Complex64::from_polar(1.0, -phi * target) * gn;
            magnitude += gn.abs();
        }
        (acc / nodes as f64, magnitude / nodes as f64)
    };

    let mut nodes = 8 * (degree + 1);
    let (mut prev, _) = trapezoid(nodes);
    let integral = loop {
        nodes *= 2;
        let (next, magnitude) = trapezoid(nodes);
        let noise = 64.0 * f64::EPSILON * magnitude;
        let done = (next - prev).norm() <= 1e-12 * next.norm() + noise;
        prev = next;
        if done {
            break next;
        }
        if nodes > 1 << 24 {
            return Err(Error::Numerical("projection quadrature did not settle".into()));
        }
    };
    if integral.re <= 0.0 || integral.im.abs() > 1e-10 * integral.re {
        return Err(Error::Numerical(format!(
            "projection integral has residue {:e} against real part {:e}",
            integral.im, integral.re
        )));
    }
    Ok((a * target * target).exp() * integral.re)
}

/// Closed ring of `n ≥ 3` spins with nearest-neighbour coupling `J`.
///
/// `p_n` are the coefficients of `Tr V(z)^N` with
/// `V[m, m'] = e^{βJ m m'} z^{s−m}`. Entries are polynomials in `z` held as
/// log-coefficient vectors, so extraction is exact in `n`.
pub fn build_ring(n: usize, s: HalfInt, j: f64, beta: f64) -> Result<PartitionPolynomial> {
    check_beta(beta)?;
    check_coupling(j)?;
    if n < 3 {
        return domain(format!("ring needs at least 3 sites, got {n}"));
    }
    let ms: Vec<f64> = projections(s)?.iter().map(|m| m.value()).collect();
    let dim = ms.len();
    let width = dim - 1;
    let degree = n * width;
    // Row k carries z^{s − m_k}; with ascending projections that is width − k.
    let lower = |k: usize| width - k;
    let bond = |a: usize, b: usize| beta * j * ms[a] * ms[b];

    // power[i][k] = (V^p)[i][k] as log coefficients of length degree + 1
    let empty = vec![f64::NEG_INFINITY; degree + 1];
    let mut power: Vec<Vec<Vec<f64>>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|k| {
                    let mut p = empty.clone();
                    p[lower(i)] = bond(i, k);
                    p
                })
                .collect()
        })
        .collect();
    for _ in 1..n {
        power = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|col| {
                        let mut acc = vec![LogAccumulator::new(); degree + 1];
                        for k in 0..dim {
                            let shift = lower(k);
                            let w = bond(k, col);
                            for (e, &lc) in power[i][k].iter().enumerate().take(degree + 1 - shift) {
                                acc[e + shift].push(lc + w);
                            }
                        }
                        acc.iter().map(LogAccumulator::value).collect()
                    })
                    .collect()
            })
            .collect();
    }

    let mut trace = vec![LogAccumulator::new(); degree + 1];
    for (i, row) in power.iter().enumerate() {
        for (e, &lc) in row[i].iter().enumerate() {
            trace[e].push(lc);
        }
    }
    let log_coeffs = trace.iter().map(LogAccumulator::value).collect();
    PartitionPolynomial::new(beta, log_coeffs, BathModel::Ring { n, s, j })
}

/// Coupling matrix of a nearest-neighbour ring.
pub fn ring_couplings(n: usize, j: f64) -> Vec<Vec<f64>> {
    let mut c = vec![vec![0.0; n]; n];
    for i in 0..n {
        let k = (i + 1) % n;
        c[i][k] = j;
        c[k][i] = j;
    }
    c
}

/// All-pairs coupling matrix with every off-diagonal entry `j`.
pub fn uniform_couplings(n: usize, j: f64) -> Vec<Vec<f64>> {
    (0..n).map(|a| (0..n).map(|b| if a == b { 0.0 } else { j }).collect()).collect()
}

//! Probe-spin coherence `⟨(s₀⁺)^δ⟩(t)` and the times at which it vanishes.
//!
//! With the bath Hamiltonian, the probe field term and the Ising coupling
//! `λ s₀ᶻ Σ s_iᶻ` all commuting, the reduced probe dynamics is exact:
//!
//! ```text
//! ⟨(s₀⁺)^δ⟩(t) = Z(β, h + iλδt/β)/Z(β, h) · e^{−ih₀δt} · Σ_l a_l a*_{l+δ} ∏_q √(s₀(s₀+1) − (l+q−1)(l+q))
//! ```
//!
//! At `h = 0` the partition ratio is `e^{iNsλδt} Σ p_n z^n / Σ p_n` with
//! `z = e^{−iλδt}`, so it vanishes exactly when `z` hits a Lee-Yang zero.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::lee_yang::{predicted_zero_times, PredictedTimes, ZeroSet};
use crate::partition::PartitionPolynomial;
use crate::spin::{ladder_product_coeff, HalfInt};

/// Steps per fundamental period when none are given.
pub const DEFAULT_STEPS: usize = 4096;
/// Detection threshold on `|f(t)| / |f(0)|`.
pub const DEFAULT_MAGNITUDE_TOL: f64 = 1e-6;
/// Largest accepted distance between a detected and a predicted time.
pub const DEFAULT_MATCH_WINDOW: f64 = 1e-6;
/// Predicted times closer than this are one (multiple) prediction.
pub const COINCIDENCE_TOL: f64 = 1e-6;

/// Probe initial state `Σ_m a_m |m⟩`, amplitudes ordered `m = −s₀ … s₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeState {
    s0: HalfInt,
    amplitudes: Vec<Complex64>,
}

impl ProbeState {
    /// Requires `2s₀ + 1` amplitudes with `Σ |a_m|² = 1` to `1e-12`.
    pub fn new(s0: HalfInt, amplitudes: Vec<Complex64>) -> Result<Self> {
        s0.check_magnitude()?;
        if amplitudes.len() != s0.multiplicity() {
            return domain(format!("spin {s0} needs {} amplitudes, got {}", s0.multiplicity(), amplitudes.len()));
        }
        if amplitudes.iter().any(|a| !a.is_finite()) {
            return domain("amplitudes must be finite");
        }
        let norm: f64 = amplitudes.iter().map(Complex64::norm_sqr).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return domain(format!("state norm is {norm}, expected 1"));
        }
        Ok(Self { s0, amplitudes })
    }

    /// Scales arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(s0: HalfInt, amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return domain("amplitudes must be finite and not all zero");
        }
        Self::new(s0, amplitudes.into_iter().map(|a| a / norm).collect())
    }

    /// The `s₀ˣ = s₀` eigenstate used for every figure.
    pub fn x_polarized(s0: HalfInt) -> Result<Self> {
        crate::spin::sx_top_eigenstate(s0)
    }

    pub fn s0(&self) -> HalfInt {
        self.s0
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, m: HalfInt) -> Option<Complex64> {
        m.check_projection_of(self.s0).ok()?;
        Some(self.amplitudes[((m.doubled() + self.s0.doubled()) / 2) as usize])
    }

    /// `Σ_{l=−s₀}^{s₀−δ} a_l a*_{l+δ} ⟨l+δ|(s₀⁺)^δ|l⟩`, the `t = 0` value.
    pub fn coherence(&self, delta: u32) -> Result<Complex64> {
        if delta == 0 || delta as i32 > self.s0.doubled() {
            return domain(format!("ladder power {delta} must lie in 1..={}", self.s0.doubled()));
        }
        let d = delta as usize;
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..self.amplitudes.len() - d {
            let l = HalfInt::from_doubled(-self.s0.doubled() + 2 * k as i32);
            sum += self.amplitudes[k] * self.amplitudes[k + d].conj() * ladder_product_coeff(self.s0, l, delta)?;
        }
        Ok(sum)
    }
}

/// `f(t) = ⟨(s₀⁺)^δ⟩(t)` for one bath, probe state and coupling.
///
/// Expanded, `f(t) = C Σ_n w_n e^{iω_n t}` with `w_n = p_n / Σ p`,
/// `ω_n = λδ(Ns − n) − h₀δ` and `C` the state coherence, which gives every
/// time derivative in closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSignal {
    poly: PartitionPolynomial,
    lambda: f64,
    delta: u32,
    h0: f64,
    coherence: Complex64,
    weights: Vec<f64>,
    freqs: Vec<f64>,
}

impl ProbeSignal {
    pub fn new(poly: &PartitionPolynomial, state: &ProbeState, lambda: f64, delta: u32, h0: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return domain(format!("coupling lambda must be positive, got {lambda}"));
        }
        if !h0.is_finite() {
            return domain("probe field h0 must be finite");
        }
        let coherence = state.coherence(delta)?;
        let c = poly.normalized_coeffs();
        let total: f64 = c.iter().sum();
        let half_degree = poly.degree() as f64 / 2.0;
        let rate = lambda * f64::from(delta);
        Ok(Self {
            poly: poly.clone(),
            lambda,
            delta,
            h0,
            coherence,
            weights: c.iter().map(|x| x / total).collect(),
            freqs: (0..c.len()).map(|n| rate * (half_degree - n as f64) - h0 * f64::from(delta)).collect(),
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn h0(&self) -> f64 {
        self.h0
    }

    pub fn poly(&self) -> &PartitionPolynomial {
        &self.poly
    }

    /// `f(0)`.
    pub fn coherence(&self) -> Complex64 {
        self.coherence
    }

    /// `2π/(λδ)`, the period of `|f|`.
    pub fn period(&self) -> f64 {
        TAU / (self.lambda * f64::from(self.delta))
    }

    /// `Z(β, iλδt/β) / Z(β, 0)`, including the `e^{iNsλδt}` field prefactor.
    pub fn partition_ratio(&self, t: f64) -> Complex64 {
        let phase = self.lambda * f64::from(self.delta) * t;
        let z = Complex64::from_polar(1.0, -phase);
        let prefactor = Complex64::from_polar(1.0, 0.5 * self.poly.degree() as f64 * phase);
        prefactor * self.poly.eval_ratio(z)
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        let probe_phase = Complex64::from_polar(1.0, -self.h0 * f64::from(self.delta) * t);
        self.coherence * probe_phase * self.partition_ratio(t)
    }

    /// `f(t), f'(t), …, f^{(order)}(t)`.
    pub fn derivatives(&self, t: f64, order: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
        for (&w, &omega) in self.weights.iter().zip(&self.freqs) {
            let mut term = Complex64::from_polar(w, omega * t);
            let factor = Complex64::new(0.0, omega);
            for d in out.iter_mut() {
                *d += term;
                term *= factor;
            }
        }
        out.iter_mut().for_each(|d| *d *= self.coherence);
        out
    }

    /// Upper bound `|C| Σ w_n |ω_n|^k` on `|f^{(k)}|`, for `k = 0..=order`.
    fn derivative_scales(&self, order: usize) -> Vec<f64> {
        (0..=order)
            .map(|k| {
                self.coherence.norm()
                    * self.weights.iter().zip(&self.freqs).map(|(w, o)| w * o.abs().powi(k as i32)).sum::<f64>()
            })
            .collect()
    }
}

/// `f` sampled on `t_j = j · t_max / steps`, `j = 0..=steps`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    signal: ProbeSignal,
    times: Vec<f64>,
    values: Vec<Complex64>,
}

impl TimeSeries {
    /// Rebuilds a series from stored samples; lengths must match and times
    /// must be strictly increasing.
    pub fn from_parts(signal: ProbeSignal, times: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if times.len() != values.len() {
            return domain(format!("{} times but {} values", times.len(), values.len()));
        }
        if times.len() < 2 {
            return domain("a series needs at least two samples");
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return domain("series times must be strictly increasing");
        }
        Ok(Self { signal, times, values })
    }

    pub fn signal(&self) -> &ProbeSignal {
        &self.signal
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn lambda(&self) -> f64 {
        self.signal.lambda
    }

    pub fn delta(&self) -> u32 {
        self.signal.delta
    }

    pub fn h0(&self) -> f64 {
        self.signal.h0
    }
}

/// Samples `⟨(s₀⁺)^δ⟩(t)` on a uniform grid over `[0, t_max]`.
pub fn expectation_series(
    poly: &PartitionPolynomial,
    state: &ProbeState,
    lambda: f64,
    delta: u32,
    h0: f64,
    t_max: f64,
    steps: usize,
) -> Result<TimeSeries> {
    if steps < 2 {
        return domain(format!("need at least 2 steps, got {steps}"));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return domain(format!("t_max must be positive, got {t_max}"));
    }
    let signal = ProbeSignal::new(poly, state, lambda, delta, h0)?;
    let times: Vec<f64> = (0..=steps).map(|j| t_max * j as f64 / steps as f64).collect();
    let values = times.iter().map(|&t| signal.eval(t)).collect();
    Ok(TimeSeries { signal, times, values })
}

/// A time where the probe signal vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectedZero {
    pub time: f64,
    /// `|f|` at `time`.
    pub residual: f64,
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const GOLDEN_TIME_TOL: f64 = 1e-9;
/// A derivative below this fraction of its bound counts as vanishing.
const VANISHING: f64 = 1e-5;
const MAX_ORDER: usize = 24;

fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut a = hi - GOLDEN * (hi - lo);
    let mut b = lo + GOLDEN * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > GOLDEN_TIME_TOL {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - GOLDEN * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + GOLDEN * (hi - lo);
            fb = f(b);
        }
    }
    if fa <= fb {
        a
    } else {
        b
    }
}

/// Sharpens a zero estimate past the golden-section limit.
///
/// A zero of multiplicity `k` is a simple zero of `f^{(k−1)}`. The
/// multiplicity is read off as the lowest derivative order that has not
/// collapsed, and Newton runs on the one below it; the estimate is redone
/// every step since it rises as `t` closes in.
fn polish(signal: &ProbeSignal, t_start: f64, reach: f64) -> f64 {
    let order = MAX_ORDER.min(signal.weights.len());
    let scales = signal.derivative_scales(order);
    let mut t = t_start;
    for _ in 0..100 {
        let d = signal.derivatives(t, order);
        let Some(k) = (1..=order).find(|&k| d[k].norm() >= VANISHING * scales[k]) else {
            break;
        };
        let step = (d[k - 1] / d[k]).re;
        if !step.is_finite() || (t - step - t_start).abs() > reach {
            break;
        }
        t -= step;
        if step.abs() <= 1e-15 * t.abs().max(1.0) {
            break;
        }
    }
    t
}

/// Times in the series where `|f|` drops to zero.
///
/// Every grid-level local minimum of `|f|` is refined by golden-section
/// search on the exact signal and then polished by derivative Newton; a
/// candidate is kept when the refined `|f| / |f(0)|` is below
/// `magnitude_tol`. Detections within half a grid step are merged.
pub fn detect_zero_times(series: &TimeSeries, magnitude_tol: f64) -> Vec<DetectedZero> {
    let signal = &series.signal;
    let scale = signal.coherence.norm();
    let times = &series.times;
    let n = times.len();
    if scale == 0.0 || n < 2 {
        return Vec::new();
    }
    let mags: Vec<f64> = series.values.iter().map(|v| v.norm()).collect();
    let spacing = times[1] - times[0];
    let abs = |t: f64| signal.eval(t).norm();

    let mut found: Vec<DetectedZero> = Vec::new();
    for j in 0..n {
        let left_ok = j == 0 || mags[j] <= mags[j - 1];
        let right_ok = j + 1 == n || mags[j] < mags[j + 1];
        if !(left_ok && right_ok) {
            continue;
        }
        let lo = times[j.saturating_sub(1)];
        let hi = times[(j + 1).min(n - 1)];
        let coarse = golden_section(abs, lo, hi);
        let fine = polish(signal, coarse, 64.0 * spacing);
        let (time, residual) = {
            let (rc, rf) = (abs(coarse), abs(fine));
            if rf <= rc + 16.0 * f64::EPSILON * scale {
                (fine, rf)
            } else {
                (coarse, rc)
            }
        };
        if residual / scale < magnitude_tol && time >= times[0] && time <= times[n - 1] {
            found.push(DetectedZero { time, residual });
        }
    }

    found.sort_by(|a, b| a.time.total_cmp(&b.time));
    let mut merged: Vec<DetectedZero> = Vec::new();
    for z in found {
        match merged.last_mut() {
            Some(last) if z.time - last.time <= 0.5 * spacing => {
                if z.residual < last.residual {
                    *last = z;
                }
            }
            _ => merged.push(z),
        }
    }
    merged
}

/// A predicted zero time and how many roots land on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictedZero {
    pub time: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroMatch {
    pub predicted: f64,
    pub detected: f64,
    pub deviation: f64,
}

/// Detected probe zeros paired against Lee-Yang predictions.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub predicted: Vec<PredictedZero>,
    pub detected: Vec<DetectedZero>,
    pub matches: Vec<ZeroMatch>,
    /// Largest match deviation; `None` when nothing matched.
    pub max_deviation: Option<f64>,
    pub unmatched_predicted: Vec<f64>,
    pub unmatched_detected: Vec<f64>,
    pub window: f64,
}

impl CorrelationReport {
    pub fn all_predictions_matched(&self) -> bool {
        self.unmatched_predicted.is_empty()
    }
}

/// Detects the zeros of `series` and pairs them with the zero-time
/// predictions of `zeros`, using the series' own `λ` and `δ`.
pub fn correlate(zeros: &ZeroSet, series: &TimeSeries, window: f64) -> Result<CorrelationReport> {
    if zeros.degree() != series.signal.poly.degree() {
        return domain(format!(
            "zero set has {} roots but the series bath polynomial has degree {}",
            zeros.degree(),
            series.signal.poly.degree()
        ));
    }
    let predicted = predicted_zero_times(zeros, series.lambda(), series.delta())?;
    correlate_with(&predicted, series, DEFAULT_MAGNITUDE_TOL, window)
}

/// Pairs precomputed predictions with the zeros detected in `series`.
///
/// The predictions' `λ` and `δ` must equal the series'. Coincident
/// predictions merge first; then detection/prediction pairs are taken
/// greedily by increasing circular distance, one-to-one, within `window`.
pub fn correlate_with(
    predicted: &PredictedTimes,
    series: &TimeSeries,
    magnitude_tol: f64,
    window: f64,
) -> Result<CorrelationReport> {
    if predicted.lambda != series.lambda() {
        return domain(format!(
            "prediction lambda {} does not match series lambda {}",
            predicted.lambda,
            series.lambda()
        ));
    }
    if predicted.delta != series.delta() {
        return domain(format!("prediction delta {} does not match series delta {}", predicted.delta, series.delta()));
    }
    if series.h0() != 0.0 {
        return domain("zero-time correlation requires h0 = 0");
    }
    if !(window > 0.0) || !(magnitude_tol > 0.0) {
        return domain("match window and magnitude tolerance must be positive");
    }

    let period = predicted.period();
    let mut merged: Vec<PredictedZero> = Vec::new();
    for &t in &predicted.times {
        match merged.last_mut() {
            Some(last) if t - last.time <= COINCIDENCE_TOL => {
                // keep the running mean of the merged times
                let m = last.multiplicity as f64;
                last.time = (last.time * m + t) / (m + 1.0);
                last.multiplicity += 1;
            }
            _ => merged.push(PredictedZero { time: t, multiplicity: 1 }),
        }
    }
    if merged.len() > 1 {
        let last = merged.len() - 1;
        if merged[0].time + period - merged[last].time <= COINCIDENCE_TOL {
            let tail = merged.pop().unwrap();
            merged[0].multiplicity += tail.multiplicity;
        }
    }

    let detected = detect_zero_times(series, magnitude_tol);
    let circular = |a: f64, b: f64| {
        let d = (a - b).rem_euclid(period);
        d.min(period - d)
    };
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (di, d) in detected.iter().enumerate() {
        for (pi, p) in merged.iter().enumerate() {
            let dev = circular(d.time, p.time);
            if dev <= window {
                pairs.push((dev, di, pi));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut used_d = vec![false; detected.len()];
    let mut used_p = vec![false; merged.len()];
    let mut matches = Vec::new();
    for (dev, di, pi) in pairs {
        if used_d[di] || used_p[pi] {
            continue;
        }
        used_d[di] = true;
        used_p[pi] = true;
        matches.push(ZeroMatch { predicted: merged[pi].time, detected: detected[di].time, deviation: dev });
    }
    matches.sort_by(|a, b| a.predicted.total_cmp(&b.predicted));
    let max_deviation = matches.iter().map(|m| m.deviation).reduce(f64::max);

    Ok(CorrelationReport {
        unmatched_predicted: merged.iter().zip(&used_p).filter(|(_, &u)| !u).map(|(p, _)| p.time).collect(),
        unmatched_detected: detected.iter().zip(&used_d).filter(|(_, &u)| !u).map(|(d, _)| d.time).collect(),
        predicted: merged,
        detected,
        matches,
        max_deviation,
        window,
    })
}

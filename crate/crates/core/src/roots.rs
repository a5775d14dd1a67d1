//! All roots of a real-coefficient polynomial by Aberth–Ehrlich iteration.
//!
//! After the simultaneous iteration, roots that sit in a tight group are
//! tested as one multiple root: the group centre is refined by Newton on the
//! `(k−1)`-th derivative and accepted only if every lower derivative vanishes
//! to rounding level there. Accepted groups collapse onto that centre. A
//! final pass pairs each root with its conjugate partner.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// Sweeps allowed before reporting non-convergence.
pub const MAX_SWEEPS: usize = 200;
/// Initial guesses sit on a circle of this radius.
pub const INITIAL_RADIUS: f64 = 1.0 + 1e-3;
/// Angular offset of the first guess, in units of the guess spacing.
const GUESS_OFFSET: f64 = 0.381_966_011_250_105_2; // 2 − golden ratio

const EPS: f64 = f64::EPSILON;

/// `(P(z), Σ |c_n| |z|^n)` by Horner.
fn eval_with_scale(coeffs: &[f64], z: Complex64) -> (Complex64, f64) {
    let r = z.norm();
    let mut p = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for &c in coeffs.iter().rev() {
        p = p * z + c;
        scale = scale * r + c.abs();
    }
    (p, scale)
}

fn eval_with_derivative(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs.iter().enumerate().skip(1).map(|(n, &c)| n as f64 * c).collect()
}

/// `|P(z)|` for coefficients in ascending order.
pub fn residual(coeffs: &[f64], z: Complex64) -> f64 {
    eval_with_scale(coeffs, z).0.norm()
}

/// Rounding-level bound on a computed `|P(z)|`.
fn noise_bound(coeffs: &[f64], scale: f64) -> f64 {
    4.0 * EPS * coeffs.len() as f64 * scale
}

/// Roots of `Σ c_n z^n`, `coeffs = [c_0, …, c_d]`, counted with multiplicity.
pub fn polynomial_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    if coeffs.iter().any(|c| !c.is_finite()) {
        return domain("polynomial coefficients must be finite");
    }
    let top = coeffs.iter().rposition(|&c| c != 0.0).ok_or_else(|| Error::Domain("zero polynomial".into()))?;
    let low = coeffs.iter().position(|&c| c != 0.0).unwrap_or(0);
    let mut roots = vec![Complex64::new(0.0, 0.0); low];
    let core = &coeffs[low..=top];
    if core.len() < 2 {
        return Ok(roots);
    }
    let mut found = aberth(core)?;
    polish_simple(core, &mut found);
    collapse_multiple(core, &mut found);
    symmetrize_conjugates(&mut found);
    roots.extend(found);
    Ok(roots)
}

fn aberth(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let d = coeffs.len() - 1;
    // scale the guess circle to the root modulus suggested by the end coefficients
    let radius = INITIAL_RADIUS * (coeffs[0].abs() / coeffs[d].abs()).powf(1.0 / d as f64);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64 + GUESS_OFFSET) / d as f64;
            Complex64::from_polar(radius, angle)
        })
        .collect();
    let mut done = vec![false; d];

    for _ in 0..MAX_SWEEPS {
        let mut active = false;
        for i in 0..d {
            if done[i] {
                continue;
            }
            let (p, scale) = eval_with_scale(coeffs, z[i]);
            if p.norm() <= noise_bound(coeffs, scale) {
                done[i] = true;
                continue;
            }
            active = true;
            let (_, dp) = eval_with_derivative(coeffs, z[i]);
            let newton = p / dp;
            let repulsion: Complex64 = (0..d).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = newton / (Complex64::new(1.0, 0.0) - newton * repulsion);
            if !step.is_finite() {
                // coincident iterate or vanishing derivative: nudge and retry next sweep
                z[i] *= Complex64::from_polar(1.0 + 1e-8, 1e-8);
                continue;
            }
            z[i] -= step;
            if step.norm() <= 2.0 * EPS * z[i].norm() {
                done[i] = true;
            }
        }
        if !active {
            return Ok(z);
        }
    }

    let worst = z.iter().zip(&done).filter(|(_, &ok)| !ok).map(|(&zi, _)| residual(coeffs, zi)).fold(0.0, f64::max);
    Err(Error::NoConvergence { sweeps: MAX_SWEEPS, worst_residual: worst })
}

/// A few Newton steps on each root, kept only while the residual drops.
fn polish_simple(coeffs: &[f64], z: &mut [Complex64]) {
    for zi in z.iter_mut() {
        let mut best = residual(coeffs, *zi);
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(coeffs, *zi);
            let cand = *zi - p / dp;
            if !cand.is_finite() {
                break;
            }
            let r = residual(coeffs, cand);
            if r < best {
                best = r;
                *zi = cand;
            } else {
                break;
            }
        }
    }
}

/// Groups roots by single linkage at `threshold`.
fn link_groups(z: &[Complex64], members: &[usize], threshold: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut assigned = vec![false; members.len()];
    for start in 0..members.len() {
        if assigned[start] {
            continue;
        }
        assigned[start] = true;
        let mut group = vec![members[start]];
        let mut frontier = vec![start];
        while let Some(a) = frontier.pop() {
            for b in 0..members.len() {
                if !assigned[b] && (z[members[a]] - z[members[b]]).norm() <= threshold {
                    assigned[b] = true;
                    group.push(members[b]);
                    frontier.push(b);
                }
            }
        }
        groups.push(group);
    }
    groups
}

/// Collapses groups that behave as a single multiple root.
fn collapse_multiple(coeffs: &[f64], z: &mut [Complex64]) {
    let all: Vec<usize> = (0..z.len()).collect();
    let mut derivs = vec![coeffs.to_vec()];
    while derivs.last().map_or(0, Vec::len) > 1 {
        let next = derivative(derivs.last().unwrap());
        derivs.push(next);
    }
    let mut pending = vec![(all, 0.25f64)];
    while let Some((members, threshold)) = pending.pop() {
        for group in link_groups(z, &members, threshold) {
            if group.len() < 2 {
                continue;
            }
            let pts: Vec<Complex64> = group.iter().map(|&i| z[i]).collect();
            if let Some(centre) = multiple_root(&derivs, &pts) {
                for &i in &group {
                    z[i] = centre;
                }
            } else if threshold > 1e-7 {
                pending.push((group, threshold / 4.0));
            }
        }
    }
}

/// Refines a candidate `k`-fold root; `None` unless `P, P', …, P^{(k−1)}`
/// all vanish to rounding level at the refined centre.
fn multiple_root(derivs: &[Vec<f64>], pts: &[Complex64]) -> Option<Complex64> {
    let k = pts.len();
    if k >= derivs.len() {
        return None;
    }
    let mean = pts.iter().sum::<Complex64>() / k as f64;
    let spread = pts.iter().map(|p| (p - mean).norm()).fold(0.0, f64::max);

    let target = &derivs[k - 1];
    let mut c = mean;
    for _ in 0..50 {
        let (q, dq) = eval_with_derivative(target, c);
        let step = q / dq;
        if !step.is_finite() {
            break;
        }
        c -= step;
        if step.norm() <= 4.0 * EPS * c.norm().max(1.0) {
            break;
        }
    }
    if !c.is_finite() || (c - mean).norm() > 2.0 * spread + 1e-12 {
        return None;
    }
    let tol = 1e3 * EPS * derivs[0].len() as f64;
    derivs[..k - 1]
        .iter()
        .all(|dp| {
            let (v, scale) = eval_with_scale(dp, c);
            v.norm() <= tol * scale
        })
        .then_some(c)
}

/// Highest Taylor order examined by [`root_error_bound`].
const MAX_TAYLOR_ORDER: usize = 32;

/// Distance within which rounding in the coefficients can move the root at `z`:
/// `min_k (η / |P^{(k)}(z)/k!|)^{1/k}`, with `η` the larger of `|P(z)|` and its
/// rounding bound. Accounts for near-multiple roots, unlike `η / |P'(z)|`.
pub fn root_error_bound(coeffs: &[f64], z: Complex64) -> f64 {
    let d = coeffs.len().saturating_sub(1);
    if d == 0 {
        return 0.0;
    }
    let (p, scale) = eval_with_scale(coeffs, z);
    let eta = p.norm().max(noise_bound(coeffs, scale));
    let mut t: Vec<Complex64> = coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let mut best = f64::INFINITY;
    for k in 0..=d.min(MAX_TAYLOR_ORDER) {
        for n in (k..d).rev() {
            let next = t[n + 1];
            t[n] += z * next;
        }
        if k > 0 && t[k].norm() > 0.0 {
            best = best.min((eta / t[k].norm()).powf(1.0 / k as f64));
        }
    }
    best
}

/// Enforces conjugate closure. Candidate pairs `(i, j)`, including `i = j`,
/// are taken greedily by `|z_i − conj(z_j)|`; each pair is replaced by its
/// symmetric average, and self-paired roots become real.
fn symmetrize_conjugates(z: &mut [Complex64]) {
    let n = z.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            pairs.push(((z[i] - z[j].conj()).norm(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut used = vec![false; n];
    for (_, i, j) in pairs {
        if used[i] || used[j] {
            continue;
        }
        used[i] = true;
        used[j] = true;
        if i == j {
            z[i] = Complex64::new(z[i].re, 0.0);
        } else {
            let avg = 0.5 * (z[i] + z[j].conj());
            z[i] = avg;
            z[j] = avg.conj();
        }
    }
}

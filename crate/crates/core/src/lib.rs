//! Lee-Yang zeros of ferromagnetic Ising spin baths and their detection through
//! the coherence dynamics of a coupled probe spin.
//!
//! The pipeline is:
//!
//! 1. build the partition polynomial `Σ p_n z^n`, `z = exp(-βh)`, of a bath
//!    ([`partition`]), in log domain;
//! 2. locate its zeros `z_n = |z_n| e^{iθ_n}` ([`lee_yang`]);
//! 3. evolve the probe observable `⟨(s₀⁺)^δ⟩(t)` and find the times where it
//!    vanishes ([`probe`]);
//! 4. match those times against `t_n = -θ_n / (λδ)` modulo the period.
//!
//! Units: `J = 1` for energies, `ħ = k_B = 1`, times in `1/λ`.

pub mod error;
pub mod lee_yang;
pub mod logspace;
pub mod partition;
pub mod probe;
pub mod roots;
pub mod spin;

pub use error::{Error, Result};
pub use lee_yang::{
    circle_deviation, find_zeros, predicted_zero_times, zero_time, PredictedTimes, RootCluster, ZeroSet,
};
pub use partition::{
    build_exact, build_long_range, build_ring, eval_ratio, long_range_integral_oracle, BathModel, PartitionPolynomial,
};
pub use probe::{
    correlate, correlate_with, detect_zero_times, expectation_series, CorrelationReport, DetectedZero, ProbeSignal,
    ProbeState, TimeSeries,
};
pub use spin::{ladder_product_coeff, projections, sx_top_eigenstate, HalfInt};

//! Sharpness numerics: the exponent ratio, crossovers against Qi's bounds and
//! a numeric replay of the identities used in the proofs.
//!
//! The exponent ratio is `ln(3(tan x - x)/x^3) / ln(tan x / x)`: the bound
//! `tan x - x < x^(3-g) tan^g x / 3` holds at `x` exactly when `g` exceeds it.
//! It is evaluated in arbitrary precision and is exploratory, not certified.
//! Crossover brackets, on the other hand, are certified by interval signs.

mod crossover;
pub mod hp;
mod replay;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use crossover::{crossover_lower, crossover_upper, CrossoverId, CrossoverResult};
pub use replay::{replay_identity, Identity, ReplayReport, DEFAULT_REPLAY_TOL};

use crate::error::{Error, Result};
use crate::hexfloat::serde_f64;
use hp::Hp;

/// Working precision used by the CLI sweeps.
pub const DEFAULT_BITS: usize = 128;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioSample {
    #[serde(with = "serde_f64")]
    pub x: f64,
    /// The ratio rounded to binary64.
    #[serde(with = "serde_f64")]
    pub phi: f64,
    /// The ratio with all working digits.
    pub phi_decimal: String,
    pub precision_bits: usize,
}

/// Evaluates the exponent ratio at `x`, `1e-6 < x < pi/2 - 1e-9`.
///
/// `tan x - x` and `ln(tan x / x)` both lose about `2 log2(1/x)` bits to
/// cancellation, so the working precision is raised accordingly.
pub fn exponent_ratio(x: f64, precision_bits: usize) -> Result<RatioSample> {
    if !(x > 1e-6 && x < std::f64::consts::FRAC_PI_2 - 1e-9) {
        return Err(Error::Domain(format!("x = {x} outside (1e-6, pi/2 - 1e-9)")));
    }
    let guard = if x < 1.0 { 4 * (-x.log2()).ceil() as usize } else { 0 };
    let mut h = Hp::new(precision_bits + guard + 32);
    let xb = h.num(x);
    let t = h.tan(&xb);
    let x3 = h.powi(&xb, 3);
    let excess = h.div(&h.mul(&h.int(3), &h.sub(&t, &xb)), &x3);
    let ratio = h.div(&t, &xb);
    let num = h.ln(&excess);
    let den = h.ln(&ratio);
    let phi = h.div(&num, &den);
    Ok(RatioSample { x, phi: h.to_f64(&phi), phi_decimal: h.decimal(&phi), precision_bits })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    /// Samples sorted by `x`.
    pub samples: Vec<RatioSample>,
    #[serde(with = "serde_f64")]
    pub inf: f64,
    #[serde(with = "serde_f64")]
    pub sup: f64,
    /// `inf > 1 - tol` and `sup < 6/5 + tol`.
    pub within_limits: bool,
    /// Every sample lies strictly inside `(1, 6/5)`.
    pub strictly_inside: bool,
}

/// Tolerance of the limit checks in [`optimality_scan`].
pub const SCAN_TOL: f64 = 1e-12;

/// Samples the exponent ratio on a grid in `(0, pi/2)`.
pub fn optimality_scan(grid: &[f64]) -> Result<ScanReport> {
    optimality_scan_with(grid, DEFAULT_BITS)
}

pub fn optimality_scan_with(grid: &[f64], precision_bits: usize) -> Result<ScanReport> {
    let mut samples: Vec<RatioSample> =
        grid.par_iter().map(|&x| exponent_ratio(x, precision_bits)).collect::<Result<_>>()?;
    samples.sort_by(|a, b| a.x.total_cmp(&b.x));
    let inf = samples.iter().map(|s| s.phi).fold(f64::INFINITY, f64::min);
    let sup = samples.iter().map(|s| s.phi).fold(f64::NEG_INFINITY, f64::max);
    Ok(ScanReport {
        within_limits: inf > 1.0 - SCAN_TOL && sup < 1.2 + SCAN_TOL,
        strictly_inside: samples.iter().all(|s| s.phi > 1.0 && s.phi < 1.2),
        samples,
        inf,
        sup,
    })
}

/// `n` equally spaced points from `a` to `b` inclusive.
pub fn linear_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect(),
    }
}

/// Parses `a:b:n`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::Format(format!("grid {spec:?} is not a:b:n"));
    let [a, b, n] = parts[..] else { return Err(bad()) };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if !(a < b) || n < 2 {
        return Err(bad());
    }
    Ok(linear_grid(a, b, n))
}

/// CSV with columns `x, phi`, both hex floats.
pub fn scan_csv(report: &ScanReport) -> String {
    let mut out = String::from("x,phi\n");
    for s in &report.samples {
        out.push_str(&format!("{},{}\n", crate::hexfloat::format(s.x), crate::hexfloat::format(s.phi)));
    }
    out
}

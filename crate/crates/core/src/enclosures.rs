//! Rigorous enclosures of the entire trigonometric building blocks.
//!
//! `cos`, `sinc(x) = sin x / x` and `p(x) = (sin x - x cos x) / x^3` are summed
//! from their Maclaurin series in `x^2` with a certified truncation remainder.
//! `tan` and the normalized quotients are never expanded themselves; they are
//! quotients of these entire pieces by `cos`.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::interval::{half_pi_enclosure, inv_factorial, mul_up, Interval, Rational};
use crate::series::p_coefficient;

/// Number of series terms used by the direct enclosures.
pub const DIRECT_TERMS: usize = 20;

/// Largest |x| accepted by `cos_enc` / `sinc_enc`; covers `3x` for `x <= pi/2`.
pub const TRIG_ARG_LIMIT: f64 = 5.0;

fn alternating(coeffs: impl Iterator<Item = Interval>) -> Vec<Interval> {
    coeffs.enumerate().map(|(k, c)| if k % 2 == 0 { c } else { -c }).collect()
}

fn cos_coeffs() -> &'static [Interval] {
    static C: OnceLock<Vec<Interval>> = OnceLock::new();
    C.get_or_init(|| alternating((0..DIRECT_TERMS).map(|k| inv_factorial(2 * k))))
}

fn sinc_coeffs() -> &'static [Interval] {
    static C: OnceLock<Vec<Interval>> = OnceLock::new();
    C.get_or_init(|| alternating((0..DIRECT_TERMS).map(|k| inv_factorial(2 * k + 1))))
}

/// Signed coefficients `(-1)^m 2(m+1)/(2m+3)!`, one past the summed range.
fn p_coeffs() -> &'static [Interval] {
    static C: OnceLock<Vec<Interval>> = OnceLock::new();
    C.get_or_init(|| (0..=DIRECT_TERMS).map(|m| Interval::from_rational(&p_coefficient(m))).collect())
}

/// Horner evaluation of `sum c_k y^k`.
pub(crate) fn horner(coeffs: &[Interval], y: Interval) -> Interval {
    coeffs.iter().rev().fold(Interval::ZERO, |acc, c| acc * y + *c)
}

fn check_trig_arg(x: &Interval) -> Result<()> {
    if x.mag() > TRIG_ARG_LIMIT {
        return Err(Error::Domain(format!("trigonometric argument {x} outside [-{TRIG_ARG_LIMIT}, {TRIG_ARG_LIMIT}]")));
    }
    Ok(())
}

/// Upper bound of `|x|^k * c` for an interval coefficient `c >= 0`.
fn lagrange_bound(mag: f64, k: u32, c: Interval) -> f64 {
    mul_up(Interval::point(mag).int_pow(k).hi(), c.hi())
}

pub fn cos_enc(x: Interval) -> Result<Interval> {
    check_trig_arg(&x)?;
    let y = x.sqr();
    let n = DIRECT_TERMS;
    let rem = lagrange_bound(x.mag(), 2 * n as u32, inv_factorial(2 * n));
    let v = horner(cos_coeffs(), y) + Interval::symmetric(rem);
    Ok(v.intersect(&Interval::new(-1.0, 1.0)).unwrap_or(v))
}

/// `sin x / x`, extended by 1 at 0.
pub fn sinc_enc(x: Interval) -> Result<Interval> {
    check_trig_arg(&x)?;
    let y = x.sqr();
    let n = DIRECT_TERMS;
    // |sinc - P| = |sin - xP| / |x| <= |x|^{2n} / (2n+1)!
    let rem = lagrange_bound(x.mag(), 2 * n as u32, inv_factorial(2 * n + 1));
    let v = horner(sinc_coeffs(), y) + Interval::symmetric(rem);
    Ok(v.intersect(&Interval::new(-1.0, 1.0)).unwrap_or(v))
}

/// `sin x` as `x * sinc x`.
pub fn sin_enc(x: Interval) -> Result<Interval> {
    Ok(x * sinc_enc(x)?)
}

fn p_domain_limit() -> f64 {
    half_pi_enclosure().hi().next_up()
}

/// `p(x) = (sin x - x cos x) / x^3`, with `p(0) = 1/3`.
///
/// The tail of the alternating series is bounded by the first omitted term;
/// the ratio of consecutive term magnitudes is `x^2 / (2(m+1)(2m+5))`, which
/// is decreasing in `m`, so checking it at the first omitted index suffices.
pub fn p_enc(x: Interval) -> Result<Interval> {
    if x.lo() < 0.0 || x.hi() > p_domain_limit() {
        return Err(Error::Domain(format!("p_enc argument {x} outside [0, pi/2]")));
    }
    let n = DIRECT_TERMS;
    let y = x.sqr();
    let ratio_den = (2 * (n + 1) * (2 * n + 5)) as f64;
    if y.hi() >= ratio_den {
        return Err(Error::Domain("p series terms not decreasing".into()));
    }
    let coeffs = p_coeffs();
    let first_omitted = coeffs[n] * y.int_pow(n as u32);
    // first_omitted has the sign (-1)^n; the tail lies between 0 and it.
    let tail = if n.is_multiple_of(2) {
        Interval::new(0.0, first_omitted.hi())
    } else {
        Interval::new(first_omitted.lo(), 0.0)
    };
    Ok(horner(&coeffs[..n], y) + tail)
}

fn tan_domain(x: &Interval) -> Result<()> {
    if x.lo() < 0.0 || x.hi() > half_pi_enclosure().lo() {
        return Err(Error::Domain(format!("argument {x} outside [0, pi/2)")));
    }
    Ok(())
}

fn positive_cos(x: Interval) -> Result<Interval> {
    let c = cos_enc(x)?;
    if c.certainly_positive() {
        Ok(c)
    } else {
        Err(Error::CosNotPositive(x))
    }
}

/// `tan x = x sinc(x) / cos x` on `[0, pi/2)`.
pub fn tan_enc(x: Interval) -> Result<Interval> {
    tan_domain(&x)?;
    let c = positive_cos(x)?;
    let t = (x * sinc_enc(x)?).checked_div(&c)?;
    // tan y >= y >= x.lo on the box; clamp only when the enclosure agrees.
    if t.hi() < x.lo() {
        return Err(Error::Domain(format!("tan enclosure {t} inconsistent with tan x >= x on {x}")));
    }
    Ok(Interval::new(t.lo().max(x.lo()), t.hi()))
}

/// `(tan x - x) / x^3 = p(x) / cos x`, with value 1/3 at 0.
pub fn r_enc(x: Interval) -> Result<Interval> {
    tan_domain(&x)?;
    let c = positive_cos(x)?;
    p_enc(x)?.checked_div(&c)
}

/// `tan x / x = sinc(x) / cos x`, with value 1 at 0.
pub fn s_enc(x: Interval) -> Result<Interval> {
    tan_domain(&x)?;
    let c = positive_cos(x)?;
    sinc_enc(x)?.checked_div(&c)
}

/// Exact-rational check that `1/3` lies in an interval.
pub fn contains_third(v: &Interval) -> bool {
    v.contains_rational(&Rational::new(1.into(), 3.into()))
}

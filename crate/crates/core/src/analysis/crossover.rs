//! Where the bounds of the main theorem and Qi's bounds change places.
//!
//! Upper: the main theorem's excess `x^(9/5) tan^(6/5) x / 3` against Qi's
//! `x^3/3 + (2/pi)^4 x^4 tan x`. Both are positive, so comparing fifth powers
//! is equivalent: `D = x^9 tan^6 x / 243 - (x^3/3 + (2/pi)^4 x^4 tan x)^5`.
//!
//! Lower: `x + x^2 tan x / 3` against `x + x^3/3 + (2/15) x^4 tan x`. Their
//! difference is `x^2 (tan x (5 - 2x^2) - 5x) / 15`, and `5 - 2x^2 > 0` on the
//! bracket, so the sign is that of `G = tan x (5 - 2x^2) - 5x`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::enclosures::tan_enc;
use crate::error::{Error, Result};
use crate::interval::{pi_enclosure, Interval};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossoverId {
    UpperX0,
    LowerX1,
}

impl CrossoverId {
    pub fn as_str(&self) -> &'static str {
        match self {
            CrossoverId::UpperX0 => "upper_x0",
            CrossoverId::LowerX1 => "lower_x1",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossoverResult {
    pub id: CrossoverId,
    pub bracket: Interval,
    pub iterations: u32,
    /// Certified signs of the root function at the bracket ends.
    pub sign_lo: i8,
    pub sign_hi: i8,
}

fn upper_root_fn(x: Interval) -> Result<Interval> {
    let t = tan_enc(x)?;
    let two_over_pi = Interval::from_int(2).checked_div(&pi_enclosure())?;
    let main = x.int_pow(9) * t.int_pow(6) * Interval::from_int(243).recip()?;
    let qi = x.int_pow(3) * Interval::from_int(3).recip()? + two_over_pi.int_pow(4) * x.int_pow(4) * t;
    Ok(main - qi.int_pow(5))
}

fn lower_root_fn(x: Interval) -> Result<Interval> {
    let t = tan_enc(x)?;
    Ok(t * (Interval::from_int(5) - x.sqr().scale(2.0)) - x.scale(5.0))
}

fn sign_at(f: fn(Interval) -> Result<Interval>, x: f64) -> Result<Option<Ordering>> {
    Ok(f(Interval::point(x))?.sign())
}

fn to_i8(o: Ordering) -> i8 {
    o as i8
}

/// Bisection with certified signs. When the midpoint sign is ambiguous, the
/// probe moves to nearby points until one is decided.
fn bisect(
    id: CrossoverId,
    f: fn(Interval) -> Result<Interval>,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<CrossoverResult> {
    if !(tol >= 1e-6) {
        return Err(Error::Domain(format!("tol = {tol} below 1e-6")));
    }
    let s_lo = sign_at(f, lo)?;
    let s_hi = sign_at(f, hi)?;
    let (s_lo, s_hi) = match (s_lo, s_hi) {
        (Some(a), Some(b)) if a != b && a != Ordering::Equal && b != Ordering::Equal => (a, b),
        _ => return Err(Error::NoSignChange(Interval::new(lo, hi))),
    };
    let mut iterations = 0;
    while hi - lo > tol {
        iterations += 1;
        let w = hi - lo;
        let probes = (0..16).flat_map(|k| {
            let off = w * k as f64 / 64.0;
            [lo + w / 2.0 + off, lo + w / 2.0 - off]
        });
        let mut moved = false;
        for m in probes {
            if !(lo < m && m < hi) {
                continue;
            }
            match sign_at(f, m)? {
                Some(s) if s == s_lo => {
                    lo = m;
                    moved = true;
                }
                Some(s) if s == s_hi => {
                    hi = m;
                    moved = true;
                }
                _ => continue,
            }
            break;
        }
        if !moved {
            break;
        }
    }
    if hi - lo > tol {
        return Err(Error::NoSignChange(Interval::new(lo, hi)));
    }
    Ok(CrossoverResult { id, bracket: Interval::new(lo, hi), iterations, sign_lo: to_i8(s_lo), sign_hi: to_i8(s_hi) })
}

/// Root of `D` in `[1.0, 1.4]`, near 1.2332.
pub fn crossover_upper(tol: f64) -> Result<CrossoverResult> {
    bisect(CrossoverId::UpperX0, upper_root_fn, 1.0, 1.4, tol)
}

/// Root of `G` in `[1.4, 1.56]`, near 1.5255.
pub fn crossover_lower(tol: f64) -> Result<CrossoverResult> {
    bisect(CrossoverId::LowerX1, lower_root_fn, 1.4, 1.56, tol)
}

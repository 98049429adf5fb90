//! Outward-rounded interval arithmetic over binary64.
//!
//! Every endpoint is rounded away from the interior after each operation. The
//! direction of the rounding error is recovered exactly from an error-free
//! transformation (two-sum, fused multiply-add) so results are as tight as a
//! correctly rounded directed operation; where that transformation is not exact
//! (overflow, the subnormal range) both endpoints are pushed one ulp outward.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hexfloat;

/// Exact rational in lowest terms with a positive denominator.
pub type Rational = BigRational;

// Below this magnitude fma residuals may be inexact.
const TINY: f64 = 1.0e-290;

/// Largest float not above the exact `a + b`.
pub fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return if s == f64::INFINITY && a.is_finite() && b.is_finite() {
            f64::MAX
        } else {
            s
        };
    }
    if two_sum_err(a, b, s) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

pub fn add_up(a: f64, b: f64) -> f64 {
    -add_down(-a, -b)
}

pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

pub fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if p.is_nan() {
        // 0 * inf: the endpoints denote reals, so the product is 0.
        return 0.0;
    }
    if !p.is_finite() {
        return if p == f64::INFINITY && a.is_finite() && b.is_finite() {
            f64::MAX
        } else {
            p
        };
    }
    if p.abs() < TINY {
        return if p == 0.0 && (a == 0.0 || b == 0.0) {
            0.0
        } else {
            p.next_down()
        };
    }
    if a.mul_add(b, -p) < 0.0 {
        p.next_down()
    } else {
        p
    }
}

pub fn mul_up(a: f64, b: f64) -> f64 {
    -mul_down(-a, b)
}

pub fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    if q.is_nan() {
        return 0.0;
    }
    if !q.is_finite() {
        return if q == f64::INFINITY && a.is_finite() {
            f64::MAX
        } else {
            q
        };
    }
    if q.abs() < TINY || a.abs() < TINY || b.is_infinite() {
        return if a == 0.0 { 0.0 } else { q.next_down() };
    }
    // a - q*b is exact here; a/b - q has its sign times sign(b).
    let r = (-q).mul_add(b, a);
    let above = (r > 0.0) == (b > 0.0);
    if r != 0.0 && !above {
        q.next_down()
    } else {
        q
    }
}

pub fn div_up(a: f64, b: f64) -> f64 {
    -div_down(-a, b)
}

/// A closed interval `[lo, hi]` of reals with binary64 endpoints.
///
/// Operations never produce empty intervals. `hi = +inf` is representable but
/// nothing in this crate produces it.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Panics if `lo > hi` or either endpoint is NaN.
    pub fn new(lo: f64, hi: f64) -> Interval {
        Interval::try_new(lo, hi).expect("invalid interval endpoints")
    }

    pub fn try_new(lo: f64, hi: f64) -> Result<Interval> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(Error::Domain(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: f64) -> Interval {
        Interval::new(x, x)
    }

    /// Symmetric interval `[-r, r]`.
    pub fn symmetric(r: f64) -> Interval {
        let r = r.abs();
        Interval::new(-r, r)
    }

    pub fn from_int(n: i64) -> Interval {
        Interval::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    /// Tightest enclosure of an exact rational: one outward rounding step.
    pub fn from_rational(q: &Rational) -> Interval {
        let (lo, hi) = rational_bounds(q);
        Interval { lo, hi }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    /// A float inside the interval close to its center.
    pub fn mid(&self) -> f64 {
        if self.lo == f64::NEG_INFINITY || self.hi == f64::INFINITY {
            return if self.lo.is_finite() { self.lo } else if self.hi.is_finite() { self.hi } else { 0.0 };
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value in the interval.
    pub fn mig(&self) -> f64 {
        if self.contains(0.0) {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        let below = match Rational::from_float(self.lo) {
            Some(lo) => lo <= *q,
            None => self.lo == f64::NEG_INFINITY,
        };
        let above = match Rational::from_float(self.hi) {
            Some(hi) => *q <= hi,
            None => self.hi == f64::INFINITY,
        };
        below && above
    }

    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo > 0.0
    }

    pub fn certainly_negative(&self) -> bool {
        self.hi < 0.0
    }

    /// Sign of every element, if they all agree strictly.
    pub fn sign(&self) -> Option<Ordering> {
        if self.certainly_positive() {
            Some(Ordering::Greater)
        } else if self.certainly_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// Splits at a float midpoint; both halves share that endpoint.
    pub fn split(&self) -> (Interval, Interval) {
        let m = self.mid();
        (Interval { lo: self.lo, hi: m }, Interval { lo: m, hi: self.hi })
    }

    pub fn sqr(&self) -> Interval {
        self.int_pow(2)
    }

    pub fn int_pow(&self, k: u32) -> Interval {
        if k == 0 {
            return Interval::ONE;
        }
        let odd = k % 2 == 1;
        if self.lo >= 0.0 {
            Interval { lo: pow_down(self.lo, k), hi: pow_up(self.hi, k) }
        } else if self.hi <= 0.0 {
            let (a, b) = (-self.hi, -self.lo);
            if odd {
                Interval { lo: -pow_up(b, k), hi: -pow_down(a, k) }
            } else {
                Interval { lo: pow_down(a, k), hi: pow_up(b, k) }
            }
        } else if odd {
            Interval { lo: -pow_up(-self.lo, k), hi: pow_up(self.hi, k) }
        } else {
            Interval { lo: 0.0, hi: pow_up(self.mag(), k) }
        }
    }

    pub fn recip(&self) -> Result<Interval> {
        Interval::ONE.checked_div(self)
    }

    /// Interval quotient; fails when the divisor contains zero.
    pub fn checked_div(&self, rhs: &Interval) -> Result<Interval> {
        if rhs.contains(0.0) {
            return Err(Error::Domain(format!("division by {rhs}, which contains 0")));
        }
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        let lo = div_down(a, c).min(div_down(a, d)).min(div_down(b, c)).min(div_down(b, d));
        let hi = div_up(a, c).max(div_up(a, d)).max(div_up(b, c)).max(div_up(b, d));
        Ok(Interval { lo, hi })
    }

    pub fn scale(&self, k: f64) -> Interval {
        *self * Interval::point(k)
    }
}

fn pow_down(a: f64, k: u32) -> f64 {
    debug_assert!(a >= 0.0);
    let (mut base, mut k, mut acc) = (a, k, 1.0);
    while k > 0 {
        if k & 1 == 1 {
            acc = mul_down(acc, base);
        }
        k >>= 1;
        if k > 0 {
            base = mul_down(base, base);
        }
    }
    acc
}

fn pow_up(a: f64, k: u32) -> f64 {
    debug_assert!(a >= 0.0);
    let (mut base, mut k, mut acc) = (a, k, 1.0);
    while k > 0 {
        if k & 1 == 1 {
            acc = mul_up(acc, base);
        }
        k >>= 1;
        if k > 0 {
            base = mul_up(base, base);
        }
    }
    acc
}

/// Largest float `<= q` and smallest float `>= q`.
fn rational_bounds(q: &Rational) -> (f64, f64) {
    let approx = q.to_f64().unwrap_or(if q.is_negative() { f64::MIN } else { f64::MAX });
    if !approx.is_finite() {
        return if approx > 0.0 { (f64::MAX, f64::INFINITY) } else { (f64::NEG_INFINITY, f64::MIN) };
    }
    let exact = |f: f64| Rational::from_float(f).expect("finite float");
    let mut lo = approx;
    while exact(lo) > *q {
        lo = lo.next_down();
    }
    loop {
        let up = lo.next_up();
        if up.is_finite() && exact(up) <= *q {
            lo = up;
        } else {
            break;
        }
    }
    if exact(lo) == *q {
        (lo, lo)
    } else {
        (lo, lo.next_up())
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval { lo: add_down(self.lo, rhs.lo), hi: add_up(self.hi, rhs.hi) }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval { lo: sub_down(self.lo, rhs.hi), hi: sub_up(self.hi, rhs.lo) }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        if a >= 0.0 && c >= 0.0 {
            return Interval { lo: mul_down(a, c), hi: mul_up(b, d) };
        }
        let lo = mul_down(a, c).min(mul_down(a, d)).min(mul_down(b, c)).min(mul_down(b, d));
        let hi = mul_up(a, c).max(mul_up(a, d)).max(mul_up(b, c)).max(mul_up(b, d));
        Interval { lo, hi }
    }
}

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |acc, x| acc + x)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", hexfloat::format(self.lo), hexfloat::format(self.hi))
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [hexfloat::format(self.lo), hexfloat::format(self.hi)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Interval, D::Error> {
        let [lo, hi] = <[String; 2]>::deserialize(d)?;
        let lo = hexfloat::parse(&lo).map_err(serde::de::Error::custom)?;
        let hi = hexfloat::parse(&hi).map_err(serde::de::Error::custom)?;
        Interval::try_new(lo, hi).map_err(serde::de::Error::custom)
    }
}

// pi = 0x1.921fb54442d18469898cc51701b8...p+1; the nearest float is below it.
const PI_LO_BITS: u64 = 0x4009_21fb_5444_2d18;
const PI_HI_BITS: u64 = 0x4009_21fb_5444_2d19;
const HALF_PI_LO_BITS: u64 = 0x3ff9_21fb_5444_2d18;
const HALF_PI_HI_BITS: u64 = 0x3ff9_21fb_5444_2d19;

/// Stored enclosure of pi, one ulp wide.
pub fn pi_enclosure() -> Interval {
    Interval { lo: f64::from_bits(PI_LO_BITS), hi: f64::from_bits(PI_HI_BITS) }
}

/// Stored enclosure of pi/2, one ulp wide; `lo < pi/2 < hi` strictly.
pub fn half_pi_enclosure() -> Interval {
    Interval { lo: f64::from_bits(HALF_PI_LO_BITS), hi: f64::from_bits(HALF_PI_HI_BITS) }
}

/// Enclosure of `1/k!`, `k <= 170`.
pub fn inv_factorial(k: usize) -> Interval {
    static TABLE: OnceLock<Vec<Interval>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut fact = BigInt::one();
        (0..=170usize)
            .map(|k| {
                if k > 0 {
                    fact *= BigInt::from(k);
                }
                Interval::from_rational(&Rational::new(BigInt::one(), fact.clone()))
            })
            .collect()
    });
    table[k]
}

/// Exact `k!` as a rational.
pub fn factorial(k: u32) -> Rational {
    let f: BigInt = (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i));
    Rational::from_integer(f)
}

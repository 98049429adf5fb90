//! Taylor models: interval polynomial plus a high-order remainder.
//!
//! A model of degree `n` about a center, in the model variable `t`
//! (`t = x` about 0, `t = pi/2 - x` about pi/2), asserts that for every
//! `|t| <= radius`
//!
//! ```text
//! f = sum_{k<=n} c_k t^k + t^{n+1} * tail
//! ```
//!
//! for some value in the interval `tail`. Keeping the remainder as a multiple
//! of `t^{n+1}` lets a model be divided by `t^k` for `k <= n`, which is what
//! the endpoint proofs do once low-order coefficients are known to vanish.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::interval::{add_up, half_pi_enclosure, inv_factorial, mul_up, pi_enclosure, Interval};
use crate::series::{Center, ExactSeries};

/// Default model degree.
pub const DEFAULT_DEGREE: usize = 16;

/// Base functions a model can be built for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseFn {
    X,
    Sin,
    Cos,
    Sinc,
    P,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaylorModel {
    center: Center,
    coeffs: Vec<Interval>,
    tail: Interval,
    radius: f64,
}

impl TaylorModel {
    pub fn center(&self) -> Center {
        self.center
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn coefficients(&self) -> &[Interval] {
        &self.coeffs
    }

    pub fn coefficient(&self, k: usize) -> Interval {
        self.coeffs[k]
    }

    /// Factor multiplying `t^{degree+1}` in the remainder.
    pub fn tail(&self) -> Interval {
        self.tail
    }

    /// Absolute remainder over the whole validity range `|t| <= radius`.
    pub fn remainder(&self) -> Interval {
        self.tail * Interval::symmetric(self.radius).int_pow(self.degree() as u32 + 1)
    }

    pub fn constant(center: Center, degree: usize, radius: f64, c: Interval) -> TaylorModel {
        let mut coeffs = vec![Interval::ZERO; degree + 1];
        coeffs[0] = c;
        TaylorModel { center, coeffs, tail: Interval::ZERO, radius }
    }

    /// Model with the exact polynomial part of `series` and the given tail.
    fn from_exact(series: &ExactSeries, tail: Interval, radius: f64) -> TaylorModel {
        TaylorModel {
            center: series.center(),
            coeffs: series.coeffs().iter().map(|c| c.to_interval()).collect(),
            tail,
            radius,
        }
    }

    /// Evaluates at a model-variable interval `t` with `|t| <= radius`.
    pub fn eval_t(&self, t: Interval) -> Result<Interval> {
        if t.mag() > self.radius {
            return Err(Error::Domain(format!("{t} outside model radius {}", self.radius)));
        }
        Ok(eval_poly(&self.coeffs, t) + t.int_pow(self.degree() as u32 + 1) * self.tail)
    }

    /// Evaluates at `x`, converting to the model variable.
    pub fn eval(&self, x: Interval) -> Result<Interval> {
        let t = match self.center {
            Center::Zero => x,
            Center::HalfPi => half_pi_enclosure() - x,
        };
        self.eval_t(t)
    }

    pub fn scale(&self, c: Interval) -> TaylorModel {
        TaylorModel {
            center: self.center,
            coeffs: self.coeffs.iter().map(|a| *a * c).collect(),
            tail: self.tail * c,
            radius: self.radius,
        }
    }

    pub fn int_pow(&self, k: u32) -> TaylorModel {
        let mut acc = TaylorModel::constant(self.center, self.degree(), self.radius, Interval::ONE);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Lowers the degree, folding dropped coefficients into the tail.
    pub fn truncate(&self, degree: usize) -> TaylorModel {
        if degree >= self.degree() {
            return self.clone();
        }
        let t = Interval::symmetric(self.radius);
        let dropped = &self.coeffs[degree + 1..];
        let tail = eval_poly(dropped, t) + t.int_pow((self.degree() - degree) as u32) * self.tail;
        TaylorModel {
            center: self.center,
            coeffs: self.coeffs[..=degree].to_vec(),
            tail,
            radius: self.radius,
        }
    }

    /// Sets coefficient `k` to exactly zero.
    ///
    /// Only sound when the exact coefficient this interval encloses is known to
    /// be zero; the endpoint proofs establish that with `ExactSeries` first.
    pub(crate) fn zero_coefficient(&mut self, k: usize) {
        self.coeffs[k] = Interval::ZERO;
    }

    /// The model divided by `t^k`, valid on `0 < |t| <= radius` (and at 0 by
    /// continuity). Coefficients below `k` must already be exactly zero.
    pub(crate) fn shifted_down(&self, k: usize) -> Result<(Vec<Interval>, Interval)> {
        if self.coeffs[..k].iter().any(|c| *c != Interval::ZERO) {
            return Err(Error::OrderMismatch(format!("coefficients below degree {k} are not zero")));
        }
        Ok((self.coeffs[k..].to_vec(), self.tail))
    }

    fn compatible(&self, other: &TaylorModel) -> (usize, f64) {
        assert_eq!(self.center, other.center, "models about different centers");
        (self.degree().min(other.degree()), self.radius.min(other.radius))
    }
}

/// Builds the model of a base function.
///
/// Sin and cos (and sinc about 0) get Lagrange remainders from the bound 1 on
/// every derivative; `p` about 0 uses the first omitted term of its
/// alternating series; about pi/2 `sinc` and `p` are products with the
/// geometric expansion of `1/x`.
pub fn tm_build(f: BaseFn, center: Center, degree: usize, radius: f64) -> Result<TaylorModel> {
    if degree < 2 {
        return Err(Error::Domain(format!("model degree {degree} below 2")));
    }
    let max_radius = match center {
        Center::Zero => 1.0,
        Center::HalfPi => 0.5,
    };
    if !(radius > 0.0 && radius <= max_radius) {
        return Err(Error::RadiusTooLarge { radius, reason: format!("radius must lie in (0, {max_radius}]") });
    }
    let n = degree;
    Ok(match (f, center) {
        (BaseFn::X, _) => TaylorModel::from_exact(&ExactSeries::identity(center, n), Interval::ZERO, radius),
        (BaseFn::Cos, Center::Zero) | (BaseFn::Sin, Center::HalfPi) => {
            let s = ExactSeries::cos_at_zero(n);
            let m = next_index_with_parity(n, 0);
            let tm = TaylorModel::from_exact(&s, lagrange_tail(n, m, radius, inv_factorial(m)), radius);
            TaylorModel { center, ..tm }
        }
        (BaseFn::Sin, Center::Zero) | (BaseFn::Cos, Center::HalfPi) => {
            let s = ExactSeries::sin_at_zero(n);
            let m = next_index_with_parity(n, 1);
            let tm = TaylorModel::from_exact(&s, lagrange_tail(n, m, radius, inv_factorial(m)), radius);
            TaylorModel { center, ..tm }
        }
        (BaseFn::Sinc, Center::Zero) => {
            // sinc - P = (sin - x P) / x and x P is the sin polynomial of degree m-1.
            let m = next_index_with_parity(n, 0);
            let tail = lagrange_tail(n, m, radius, inv_factorial(m + 1));
            TaylorModel::from_exact(&ExactSeries::sinc_at_zero(n), tail, radius)
        }
        (BaseFn::P, Center::Zero) => p_model_at_zero(n, radius)?,
        (BaseFn::Sinc, Center::HalfPi) => {
            &tm_build(BaseFn::Sin, center, n, radius)? * &recip_x_at_half_pi(n, radius)?
        }
        (BaseFn::P, Center::HalfPi) => {
            let x = tm_build(BaseFn::X, center, n, radius)?;
            let num = &tm_build(BaseFn::Sin, center, n, radius)? - &(&x * &tm_build(BaseFn::Cos, center, n, radius)?);
            &num * &recip_x_at_half_pi(n, radius)?.int_pow(3)
        }
    })
}

/// Smallest index `> n` with the given parity.
fn next_index_with_parity(n: usize, parity: usize) -> usize {
    if (n + 1) % 2 == parity {
        n + 1
    } else {
        n + 2
    }
}

/// Remainder `t^m * [-c, c]` written as `t^{n+1} * tail` for `|t| <= r`.
fn lagrange_tail(n: usize, m: usize, r: f64, c: Interval) -> Interval {
    let extra = Interval::point(r).int_pow((m - n - 1) as u32).hi();
    Interval::symmetric(mul_up(extra, c.hi()))
}

fn p_model_at_zero(n: usize, r: f64) -> Result<TaylorModel> {
    let series = ExactSeries::p_at_zero(n);
    // First omitted term index m* (degree 2 m* > n).
    let m_star = n / 2 + 1;
    let deg = 2 * m_star;
    // Consecutive magnitude ratio r^2 / (2(m+1)(2m+5)) decreases in m; check at m*.
    let r2 = Interval::point(r).sqr().hi();
    let den = (2 * (m_star + 1) * (2 * m_star + 5)) as f64;
    if r2 >= den {
        return Err(Error::RadiusTooLarge { radius: r, reason: "p series terms not decreasing".into() });
    }
    let a = Interval::from_rational(&crate::series::p_coefficient(m_star));
    // Remainder lies between 0 and a t^{deg}; as t^{n+1} * tail, tail is a * t^{deg-n-1} * [0,1].
    let extra_pow = (deg - n - 1) as u32;
    let t_pow = Interval::symmetric(r).int_pow(extra_pow);
    let tail = a * t_pow * Interval::new(0.0, 1.0);
    Ok(TaylorModel::from_exact(&series, tail, r))
}

/// Model of `1/x` about pi/2: `sum (2/pi)^{k+1} eps^k`, geometric tail.
fn recip_x_at_half_pi(n: usize, r: f64) -> Result<TaylorModel> {
    let series = ExactSeries::recip_x_at_half_pi(n);
    let q = Interval::point(2.0).checked_div(&pi_enclosure())?;
    let ratio = Interval::point(r) * q;
    if ratio.hi() >= 1.0 {
        return Err(Error::RadiusTooLarge { radius: r, reason: "1/x expansion about pi/2 diverges".into() });
    }
    // |sum_{k>n} q^{k+1} eps^k| <= |eps|^{n+1} q^{n+2} / (1 - q r)
    let bound = q.int_pow(n as u32 + 2).checked_div(&(Interval::ONE - ratio))?;
    Ok(TaylorModel::from_exact(&series, Interval::symmetric(bound.hi()), r))
}

/// Horner evaluation of `sum c_k t^k`.
pub(crate) fn eval_poly(coeffs: &[Interval], t: Interval) -> Interval {
    coeffs.iter().rev().fold(Interval::ZERO, |acc, c| acc * t + *c)
}

/// Upper bound of `sum |c_k| r^k`.
fn poly_bound(coeffs: &[Interval], r: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| add_up(mul_up(acc, r), c.mag()))
}

impl Add for &TaylorModel {
    type Output = TaylorModel;
    fn add(self, rhs: &TaylorModel) -> TaylorModel {
        let (n, radius) = self.compatible(rhs);
        let (a, b) = (self.truncate(n), rhs.truncate(n));
        TaylorModel {
            center: self.center,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| *x + *y).collect(),
            tail: a.tail + b.tail,
            radius,
        }
    }
}

impl Neg for &TaylorModel {
    type Output = TaylorModel;
    fn neg(self) -> TaylorModel {
        self.scale(Interval::point(-1.0))
    }
}

impl Sub for &TaylorModel {
    type Output = TaylorModel;
    fn sub(self, rhs: &TaylorModel) -> TaylorModel {
        self + &(-rhs)
    }
}

impl Mul for &TaylorModel {
    type Output = TaylorModel;
    fn mul(self, rhs: &TaylorModel) -> TaylorModel {
        let (n, radius) = self.compatible(rhs);
        let (a, b) = (self.truncate(n), rhs.truncate(n));
        let mut low = vec![Interval::ZERO; n + 1];
        let mut high = vec![Interval::ZERO; n];
        for (i, ci) in a.coeffs.iter().enumerate() {
            for (j, cj) in b.coeffs.iter().enumerate() {
                let prod = *ci * *cj;
                if i + j <= n {
                    low[i + j] = low[i + j] + prod;
                } else {
                    high[i + j - n - 1] = high[i + j - n - 1] + prod;
                }
            }
        }
        let r = radius;
        let t_range = Interval::symmetric(r);
        let pa = Interval::symmetric(poly_bound(&a.coeffs, r));
        let pb = Interval::symmetric(poly_bound(&b.coeffs, r));
        let high_part = Interval::symmetric(poly_bound(&high, r));
        let tail = high_part + a.tail * pb + pa * b.tail + a.tail * b.tail * t_range.int_pow(n as u32 + 1);
        TaylorModel { center: self.center, coeffs: low, tail, radius }
    }
}

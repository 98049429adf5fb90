//! Exact truncated power series.
//!
//! Coefficients live in `Q[pi, 1/pi]` so that series expanded about `pi/2`
//! stay exact. A Laurent polynomial in `pi` is zero as a real number whenever
//! it is zero as a polynomial, which is all the vanishing-order checks need.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::interval::{pi_enclosure, factorial, Interval, Rational};

/// Laurent polynomial in pi with rational coefficients: `sum q_k pi^k`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct PiPoly {
    terms: BTreeMap<i32, Rational>,
}

impl PiPoly {
    pub fn zero() -> PiPoly {
        PiPoly::default()
    }

    pub fn rational(q: Rational) -> PiPoly {
        PiPoly::monomial(q, 0)
    }

    pub fn int(n: i64) -> PiPoly {
        PiPoly::rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> PiPoly {
        PiPoly::rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `q * pi^k`.
    pub fn monomial(q: Rational, k: i32) -> PiPoly {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(k, q);
        }
        PiPoly { terms }
    }

    pub fn pi() -> PiPoly {
        PiPoly::monomial(Rational::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a plain rational, when no power of pi is involved.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, q: &Rational) -> PiPoly {
        if q.is_zero() {
            return PiPoly::zero();
        }
        PiPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, c * q)).collect(),
        }
    }

    /// Enclosure of the real value, with pi taken from the stored enclosure.
    pub fn to_interval(&self) -> Interval {
        let pi = pi_enclosure();
        let inv_pi = pi.recip().expect("pi enclosure excludes zero");
        self.terms
            .iter()
            .map(|(k, c)| {
                let power = if *k >= 0 { pi.int_pow(*k as u32) } else { inv_pi.int_pow(k.unsigned_abs()) };
                Interval::from_rational(c) * power
            })
            .sum()
    }

    fn accumulate(&mut self, k: i32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }
}

impl Add for &PiPoly {
    type Output = PiPoly;
    fn add(self, rhs: &PiPoly) -> PiPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.accumulate(*k, c.clone());
        }
        out
    }
}

impl Sub for &PiPoly {
    type Output = PiPoly;
    fn sub(self, rhs: &PiPoly) -> PiPoly {
        self + &(-rhs)
    }
}

impl Neg for &PiPoly {
    type Output = PiPoly;
    fn neg(self) -> PiPoly {
        PiPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Mul for &PiPoly {
    type Output = PiPoly;
    fn mul(self, rhs: &PiPoly) -> PiPoly {
        let mut out = PiPoly::zero();
        for (ka, a) in &self.terms {
            for (kb, b) in &rhs.terms {
                out.accumulate(ka + kb, a * b);
            }
        }
        out
    }
}

impl fmt::Debug for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("{c}*pi"),
                k => format!("{c}*pi^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Expansion point of a series or Taylor model.
///
/// About `HalfPi` the series variable is `eps = pi/2 - x`, so the endpoint
/// side `x < pi/2` corresponds to `eps > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Center {
    Zero,
    HalfPi,
}

/// Power series in the model variable truncated after `degree`.
#[derive(Clone, PartialEq, Debug)]
pub struct ExactSeries {
    center: Center,
    coeffs: Vec<PiPoly>,
}

impl ExactSeries {
    pub fn from_coeffs(center: Center, mut coeffs: Vec<PiPoly>, degree: usize) -> ExactSeries {
        coeffs.resize(degree + 1, PiPoly::zero());
        ExactSeries { center, coeffs }
    }

    pub fn constant(center: Center, degree: usize, c: PiPoly) -> ExactSeries {
        ExactSeries::from_coeffs(center, vec![c], degree)
    }

    pub fn center(&self) -> Center {
        self.center
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[PiPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &PiPoly {
        &self.coeffs[k]
    }

    /// Index of the first nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn pow(&self, k: u32) -> ExactSeries {
        let mut acc = ExactSeries::constant(self.center, self.degree(), PiPoly::int(1));
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, c: &PiPoly) -> ExactSeries {
        ExactSeries {
            center: self.center,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    // --- series about 0 ---------------------------------------------------

    /// `sum_k sign_k a^k x^k / k!` over the parity class of `cos` or `sin`.
    fn trig_scaled(degree: usize, a: i64, odd: bool) -> ExactSeries {
        let mut coeffs = vec![PiPoly::zero(); degree + 1];
        let start = usize::from(odd);
        for k in (start..=degree).step_by(2) {
            let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
            let q = Rational::from_integer(BigInt::from(sign) * BigInt::from(a).pow(k as u32)) / factorial(k as u32);
            coeffs[k] = PiPoly::rational(q);
        }
        ExactSeries { center: Center::Zero, coeffs }
    }

    pub fn cos_at_zero(degree: usize) -> ExactSeries {
        ExactSeries::trig_scaled(degree, 1, false)
    }

    pub fn sin_at_zero(degree: usize) -> ExactSeries {
        ExactSeries::trig_scaled(degree, 1, true)
    }

    /// `sin x / x = sum (-1)^k x^{2k} / (2k+1)!`.
    pub fn sinc_at_zero(degree: usize) -> ExactSeries {
        let mut coeffs = vec![PiPoly::zero(); degree + 1];
        for k in (0..=degree).step_by(2) {
            let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
            coeffs[k] = PiPoly::rational(Rational::from_integer(BigInt::from(sign)) / factorial(k as u32 + 1));
        }
        ExactSeries { center: Center::Zero, coeffs }
    }

    /// `(sin x - x cos x) / x^3 = sum (-1)^m 2(m+1) x^{2m} / (2m+3)!`.
    pub fn p_at_zero(degree: usize) -> ExactSeries {
        let mut coeffs = vec![PiPoly::zero(); degree + 1];
        for k in (0..=degree).step_by(2) {
            coeffs[k] = PiPoly::rational(p_coefficient(k / 2));
        }
        ExactSeries { center: Center::Zero, coeffs }
    }

    pub fn identity(center: Center, degree: usize) -> ExactSeries {
        match center {
            Center::Zero => ExactSeries::from_coeffs(center, vec![PiPoly::zero(), PiPoly::int(1)], degree),
            Center::HalfPi => ExactSeries::from_coeffs(
                center,
                vec![PiPoly::monomial(Rational::new(1.into(), 2.into()), 1), PiPoly::int(-1)],
                degree,
            ),
        }
    }

    /// `(9 - 24 x^2) cos x - 9 cos 3x - 4 x sin 3x` about 0.
    pub fn lemma_phi_at_zero(degree: usize) -> ExactSeries {
        let x = ExactSeries::identity(Center::Zero, degree);
        let quad = &ExactSeries::constant(Center::Zero, degree, PiPoly::int(9)) - &(&x * &x).scale(&PiPoly::int(24));
        let cos3 = ExactSeries::trig_scaled(degree, 3, false);
        let sin3 = ExactSeries::trig_scaled(degree, 3, true);
        &(&(&quad * &ExactSeries::cos_at_zero(degree)) - &cos3.scale(&PiPoly::int(9))) - &(&x * &sin3).scale(&PiPoly::int(4))
    }

    // --- series about pi/2 in eps = pi/2 - x -------------------------------

    /// `sin x = cos eps`.
    pub fn sin_at_half_pi(degree: usize) -> ExactSeries {
        ExactSeries { center: Center::HalfPi, ..ExactSeries::cos_at_zero(degree) }
    }

    /// `cos x = sin eps`.
    pub fn cos_at_half_pi(degree: usize) -> ExactSeries {
        ExactSeries { center: Center::HalfPi, ..ExactSeries::sin_at_zero(degree) }
    }

    /// `1/x = (2/pi) / (1 - 2 eps/pi) = sum (2/pi)^{k+1} eps^k`.
    pub fn recip_x_at_half_pi(degree: usize) -> ExactSeries {
        let coeffs = (0..=degree)
            .map(|k| PiPoly::monomial(Rational::from_integer(BigInt::from(2).pow(k as u32 + 1)), -(k as i32 + 1)))
            .collect();
        ExactSeries { center: Center::HalfPi, coeffs }
    }

    pub fn sinc_at_half_pi(degree: usize) -> ExactSeries {
        &ExactSeries::sin_at_half_pi(degree) * &ExactSeries::recip_x_at_half_pi(degree)
    }

    pub fn p_at_half_pi(degree: usize) -> ExactSeries {
        let x = ExactSeries::identity(Center::HalfPi, degree);
        let num = &ExactSeries::sin_at_half_pi(degree) - &(&x * &ExactSeries::cos_at_half_pi(degree));
        &num * &ExactSeries::recip_x_at_half_pi(degree).pow(3)
    }
}

/// `2(m+1)/(2m+3)!` with the alternating sign `(-1)^m` applied.
pub fn p_coefficient(m: usize) -> Rational {
    let sign = if m.is_multiple_of(2) { 1 } else { -1 };
    Rational::from_integer(BigInt::from(sign * 2 * (m as i64 + 1))) / factorial(2 * m as u32 + 3)
}

fn check_compatible(a: &ExactSeries, b: &ExactSeries) {
    assert_eq!(a.center, b.center, "series about different centers");
}

impl Add for &ExactSeries {
    type Output = ExactSeries;
    fn add(self, rhs: &ExactSeries) -> ExactSeries {
        check_compatible(self, rhs);
        let n = self.degree().min(rhs.degree());
        ExactSeries {
            center: self.center,
            coeffs: (0..=n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect(),
        }
    }
}

impl Sub for &ExactSeries {
    type Output = ExactSeries;
    fn sub(self, rhs: &ExactSeries) -> ExactSeries {
        check_compatible(self, rhs);
        let n = self.degree().min(rhs.degree());
        ExactSeries {
            center: self.center,
            coeffs: (0..=n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect(),
        }
    }
}

impl Mul for &ExactSeries {
    type Output = ExactSeries;
    fn mul(self, rhs: &ExactSeries) -> ExactSeries {
        check_compatible(self, rhs);
        let n = self.degree().min(rhs.degree());
        let mut coeffs = vec![PiPoly::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                if !rhs.coeffs[j].is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(&self.coeffs[i] * &rhs.coeffs[j]);
                }
            }
        }
        ExactSeries { center: self.center, coeffs }
    }
}

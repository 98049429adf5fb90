//! The integer sequences behind the series of
//! `phi(x) = (9 - 24x^2) cos x - 9 cos 3x - 4x sin 3x`.
//!
//! Expanding the cosines and sines gives
//! `phi(x) = 3 sum_{n>=0} (-1)^n T_n x^{2n} / (2n)!` with
//! `T_n = 2(4n-1)^2 + 1 + (8n-27) 9^{n-1}`, and `T_0 = ... = T_3 = 0`.
//! The companion sequence `U_n = (2n+2)(2n+1) T_n - 3 T_{n+1}` has the closed
//! form `B_n + A_n 9^{n-1}` with
//! `A_n = 32n^3 - 60n^2 - 362n + 459` and
//! `B_n = 128n^4 + 128n^3 - 116n^2 - 158n - 51`.

use std::fmt::Write as _;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::enclosures::{cos_enc, horner, sin_enc};
use crate::error::{Error, Result};
use crate::interval::{factorial, mul_up, Interval, Rational};

/// Series terms used by [`phi_lemma_enc`] when called from the certifier.
pub const DEFAULT_PHI_TERMS: usize = 24;

/// Largest term count accepted by [`phi_lemma_enc`].
pub const MAX_PHI_TERMS: usize = 60;

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// `9^{n-1}` as a rational (`1/9` at `n = 0`).
fn pow9(n: u32) -> Rational {
    if n == 0 {
        Rational::new(BigInt::one(), big(9))
    } else {
        Rational::from_integer(num_traits::pow(big(9), n as usize - 1))
    }
}

pub fn t_seq(n: u32) -> Rational {
    let n_ = n as i64;
    let q = 2 * (4 * n_ - 1) * (4 * n_ - 1) + 1;
    Rational::from_integer(big(q)) + Rational::from_integer(big(8 * n_ - 27)) * pow9(n)
}

/// `A_n = 32n^3 - 60n^2 - 362n + 459`.
pub fn a_seq(n: u32) -> BigInt {
    IntPoly::a().eval(&BigInt::from(n))
}

/// `B_n = 128n^4 + 128n^3 - 116n^2 - 158n - 51`.
pub fn b_seq(n: u32) -> BigInt {
    IntPoly::b().eval(&BigInt::from(n))
}

fn to_integer(q: Rational, what: &str) -> Result<BigInt> {
    if q.is_integer() {
        Ok(q.to_integer())
    } else {
        Err(Error::IdentityMismatch(format!("{what} = {q} is not an integer")))
    }
}

/// `U_n` by the recurrence and by the closed form, in that order.
pub fn u_seq(n: u32) -> Result<(BigInt, BigInt)> {
    let w = Rational::from_integer(big((2 * n as i64 + 2) * (2 * n as i64 + 1)));
    let rec = w * t_seq(n) - Rational::from_integer(big(3)) * t_seq(n + 1);
    let closed = Rational::from_integer(b_seq(n)) + Rational::from_integer(a_seq(n)) * pow9(n);
    Ok((to_integer(rec, &format!("U_{n}"))?, to_integer(closed, &format!("B_{n} + A_{n} 9^{{n-1}}"))?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeqTerm {
    pub n: u32,
    pub t: BigInt,
    pub u: BigInt,
    pub a: BigInt,
    pub b: BigInt,
}

/// Rows `0..=n_max`, failing if the two routes for `U_n` ever disagree.
pub fn sequence_table(n_max: u32) -> Result<Vec<SeqTerm>> {
    (0..=n_max)
        .map(|n| {
            let (u, closed) = u_seq(n)?;
            if u != closed {
                return Err(Error::IdentityMismatch(format!("U_{n}: recurrence {u} != closed form {closed}")));
            }
            Ok(SeqTerm { n, t: to_integer(t_seq(n), &format!("T_{n}"))?, u, a: a_seq(n), b: b_seq(n) })
        })
        .collect()
}

pub fn sequence_csv(rows: &[SeqTerm]) -> String {
    let mut out = String::from("n,T,U,A,B\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{}", r.n, r.t, r.u, r.a, r.b);
    }
    out
}

/// Dense integer polynomial, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly(pub Vec<BigInt>);

impl IntPoly {
    pub fn from_i64(c: &[i64]) -> IntPoly {
        IntPoly(c.iter().map(|&v| big(v)).collect()).trimmed()
    }

    fn a() -> IntPoly {
        IntPoly::from_i64(&[459, -362, -60, 32])
    }

    fn b() -> IntPoly {
        IntPoly::from_i64(&[-51, -158, -116, 128, 128])
    }

    fn trimmed(mut self) -> IntPoly {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn eval(&self, n: &BigInt) -> BigInt {
        self.0.iter().rev().fold(BigInt::zero(), |acc, c| acc * n + c)
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let len = self.0.len().max(other.0.len());
        let get = |p: &IntPoly, k: usize| p.0.get(k).cloned().unwrap_or_default();
        IntPoly((0..len).map(|k| get(self, k) + get(other, k)).collect()).trimmed()
    }

    pub fn scale(&self, c: i64) -> IntPoly {
        IntPoly(self.0.iter().map(|v| v * c).collect()).trimmed()
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.0.is_empty() || other.0.is_empty() {
            return IntPoly(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly(out).trimmed()
    }

    /// `q(n) = p(n + s)`.
    pub fn shift(&self, s: i64) -> IntPoly {
        let lin = IntPoly::from_i64(&[s, 1]);
        self.0.iter().rev().fold(IntPoly(Vec::new()), |acc, c| acc.mul(&lin).add(&IntPoly(vec![c.clone()])))
    }

    pub fn coefficient(&self, k: usize) -> BigInt {
        self.0.get(k).cloned().unwrap_or_default()
    }

    pub fn all_nonnegative(&self) -> bool {
        self.0.iter().all(|c| !c.is_negative())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftReport {
    /// Coefficients of `B(n+1)`, lowest degree first.
    pub b_shifted: Vec<BigInt>,
    /// Coefficients of `A(n+4)`, lowest degree first.
    pub a_shifted: Vec<BigInt>,
    /// `A_n > 0` for all `n >= a_positive_from`.
    pub a_positive_from: u32,
    /// `B_n > 0` for all `n >= b_positive_from`.
    pub b_positive_from: u32,
    /// `T_n > 0` and `U_n > 0` for all `n >= 4`, and the scan up to here agreed.
    pub scanned_to: u32,
}

fn mismatch(what: &str, got: &IntPoly, want: &IntPoly) -> Result<()> {
    let len = got.0.len().max(want.0.len());
    for k in 0..len {
        if got.coefficient(k) != want.coefficient(k) {
            return Err(Error::IdentityMismatch(format!(
                "{what}: coefficient of n^{k} is {} but expected {}",
                got.coefficient(k),
                want.coefficient(k)
            )));
        }
    }
    Ok(())
}

/// Symbolic checks of the closed form of `U_n` and of the shifted forms used
/// for positivity, followed by an exact scan of `4..=n_max`.
///
/// * the recurrence applied to `T_n = Q(n) + E(n) 9^{n-1}` splits into a
///   polynomial part that must equal `B` and a `9^{n-1}` part that must equal `A`;
/// * `B(n+1) = 128n^4 + 640n^3 + 1036n^2 + 437n + 69(n-1)`, every group
///   nonnegative for `n >= 1`, so `B_m > 0` for `m >= 2`;
/// * `A(n+4) = 32n^3 + 324n^2 + 694n + 99`, so `A_m > 0` for `m >= 4`;
/// * `T(n+4) = 32n^2 + 240n + 451 + (8n+5) 9^{n+3}`, so `T_m > 0` for `m >= 4`.
pub fn verify_shift_identities(n_max: u32) -> Result<ShiftReport> {
    if n_max < 8 {
        return Err(Error::Domain(format!("n_max = {n_max} must be at least 8")));
    }
    let q = IntPoly::from_i64(&[3, -16, 32]); // 2(4n-1)^2 + 1
    let e = IntPoly::from_i64(&[-27, 8]); // 8n - 27
    let w = IntPoly::from_i64(&[2, 6, 4]); // (2n+2)(2n+1)
    let poly_part = w.mul(&q).add(&q.shift(1).scale(-3));
    // 9^n = 9 * 9^{n-1}
    let exp_part = w.mul(&e).add(&e.shift(1).scale(-27));
    mismatch("polynomial part of U_n", &poly_part, &IntPoly::b())?;
    mismatch("exponential part of U_n", &exp_part, &IntPoly::a())?;

    let b1 = IntPoly::b().shift(1);
    let grouped = IntPoly::from_i64(&[0, 437, 1036, 640, 128]).add(&IntPoly::from_i64(&[-1, 1]).scale(69));
    mismatch("B(n+1)", &b1, &grouped)?;
    mismatch("B(n+1) expanded", &b1, &IntPoly::from_i64(&[-69, 506, 1036, 640, 128]))?;

    let a4 = IntPoly::a().shift(4);
    mismatch("A(n+4)", &a4, &IntPoly::from_i64(&[99, 694, 324, 32]))?;
    if !a4.all_nonnegative() || a4.coefficient(0).is_zero() {
        return Err(Error::NotPositive("A(n+4) has a nonpositive constant or negative coefficient".into()));
    }

    let t4_poly = q.shift(4);
    mismatch("polynomial part of T(n+4)", &t4_poly, &IntPoly::from_i64(&[451, 240, 32]))?;
    mismatch("exponential factor of T(n+4)", &e.shift(4), &IntPoly::from_i64(&[5, 8]))?;

    for n in 4..=n_max {
        let t = t_seq(n);
        let (u, closed) = u_seq(n)?;
        if u != closed {
            return Err(Error::IdentityMismatch(format!("U_{n}: recurrence {u} != closed form {closed}")));
        }
        if !t.is_positive() || !u.is_positive() {
            return Err(Error::NotPositive(format!("T_{n} = {t}, U_{n} = {u}")));
        }
    }
    Ok(ShiftReport {
        b_shifted: b1.0,
        a_shifted: a4.0,
        a_positive_from: 4,
        b_positive_from: 2,
        scanned_to: n_max,
    })
}

/// `3 T_n / (2n)!` for `n = 4, 5, ...`, one past the largest term count.
fn phi_coefficients() -> &'static [Interval] {
    static C: OnceLock<Vec<Interval>> = OnceLock::new();
    C.get_or_init(|| {
        (4..=4 + MAX_PHI_TERMS as u32)
            .map(|n| {
                let v = Rational::from_integer(big(3)) * t_seq(n) / factorial(2 * n);
                Interval::from_rational(&v)
            })
            .collect()
    })
}

/// Whether the `n`-th and `(n+1)`-th terms of the series decrease at `x`,
/// decided exactly: `x^2 T_{n+1} < (2n+1)(2n+2) T_n`.
pub fn terms_decrease(n: u32, x: &Rational) -> bool {
    let lhs = x * x * t_seq(n + 1);
    let rhs = Rational::from_integer(big((2 * n as i64 + 1) * (2 * n as i64 + 2))) * t_seq(n);
    lhs < rhs
}

/// Enclosure of `phi` on `x`, `|x| <= sqrt 3`, from `terms` terms of its
/// alternating series.
///
/// For `n >= 4`, `T_{n+1} = 9 T_n + 8 * 9^n + Q(n+1) - 9 Q(n)` with
/// `Q(n) = 2(4n-1)^2 + 1`, and `8 * 9^n <= (72/5) T_n`, `Q(n+1) <= T_n`, so
/// `T_{n+1} < 25 T_n`. With `x^2 <= 3` the term ratio is below
/// `75 / ((2n+1)(2n+2)) < 1`: terms decrease from `n = 4` on and the tail is
/// bracketed by the first omitted term.
pub fn phi_lemma_enc(x: Interval, terms: usize) -> Result<Interval> {
    if !(1..=MAX_PHI_TERMS).contains(&terms) {
        return Err(Error::Domain(format!("term count {terms} outside 1..={MAX_PHI_TERMS}")));
    }
    let y = x.sqr();
    if y.hi() > 3.0 {
        return Err(Error::Domain(format!("phi series argument {x} outside [-sqrt 3, sqrt 3]")));
    }
    let c = phi_coefficients();
    let signed: Vec<Interval> = c[..terms].iter().enumerate().map(|(k, v)| if k % 2 == 0 { *v } else { -*v }).collect();
    let sum = horner(&signed, y) * y.int_pow(4);
    let n_star = 4 + terms as u32;
    let first_omitted = mul_up(c[terms].hi(), Interval::point(y.hi()).int_pow(n_star).hi());
    let tail = if n_star.is_multiple_of(2) {
        Interval::new(0.0, first_omitted)
    } else {
        Interval::new(-first_omitted, 0.0)
    };
    Ok(sum + tail)
}

/// `phi` from its trigonometric definition, for cross-checks.
pub fn phi_trig_enc(x: Interval) -> Result<Interval> {
    let three_x = x.scale(3.0);
    let a = (Interval::from_int(9) - x.sqr().scale(24.0)) * cos_enc(x)?;
    Ok(a - cos_enc(three_x)?.scale(9.0) - x.scale(4.0) * sin_enc(three_x)?)
}

/// Lower bound of `3 (T_4/8! - T_5 d^2/10!)`, which brackets `phi(x)/x^8`
/// from below on `0 < x <= d` for `d^2 <= 3`.
pub fn phi_near_zero_bound(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta * delta <= 3.0) {
        return Err(Error::Domain(format!("delta = {delta} outside (0, sqrt 3]")));
    }
    let d = Rational::from_float(delta).ok_or_else(|| Error::Domain("delta not finite".into()))?;
    let v = Rational::from_integer(big(3)) * (t_seq(4) / factorial(8) - t_seq(5) * &d * &d / factorial(10));
    Ok(Interval::from_rational(&v).lo())
}

/// Convenience for small `n`.
pub fn t_seq_i128(n: u32) -> Option<i128> {
    let t = t_seq(n);
    if t.is_integer() {
        t.to_integer().to_i128()
    } else {
        None
    }
}

//! The inequality catalog and its entire-form numerators.
//!
//! Each inequality `L(x) < R(x)` on `(0, pi/2)` is turned into `F(x) > 0` for
//! an entire `F` built from `x, sin, cos, sinc, p`, rational constants and
//! powers of pi, by multiplying through with positive factors (`cos^k`, `x^k`)
//! or raising both positive sides to the fifth power:
//!
//! | id            | inequality                                  | F                                         |
//! |---------------|---------------------------------------------|-------------------------------------------|
//! | `prop1_lower` | `x + x^3/3 < tan x`                         | `3p - cos`                                |
//! | `prop1_upper` | `tan x < x + tan^3 x / 3`                   | `x(x^2 sinc^3 - 3 sinc cos^2 + 3 cos^3)`  |
//! | `main_lower`  | `x^2 tan x < 3(tan x - x)`                  | `3p - sinc`                               |
//! | `main_upper`  | `3(tan x - x) < x^{9/5} tan^{6/5} x`        | `sinc^6 - 243 p^5 cos`                    |
//! | `bs_lower`    | `8x / (pi^2 - 4x^2) < tan x`                | `sin (pi^2 - 4x^2) - 8x cos`              |
//! | `bs_upper`    | `tan x < pi^2 x / (pi^2 - 4x^2)`            | `pi^2 x cos - sin (pi^2 - 4x^2)`          |
//! | `qi_lower`    | `x + x^3/3 + (2/15) x^4 tan x < tan x`      | `sin - (x + x^3/3) cos - (2/15) x^4 sin`  |
//! | `qi_upper`    | `tan x < x + x^3/3 + (2/pi)^4 x^4 tan x`    | `(x + x^3/3) cos + (2/pi)^4 x^4 sin - sin`|
//! | `lemma_phi`   | `0 < (9 - 24x^2) cos x - 9 cos 3x - 4x sin 3x` on `(0, pi/2]` | itself          |
//!
//! For `main_upper`: `3(tan x - x) < x^{9/5} tan^{6/5} x` iff
//! `243 (tan x - x)^5 < x^9 tan^6 x`; with `tan x - x = x^3 p / cos` and
//! `tan x = x sinc / cos`, multiplying by `cos^6 / x^15` gives the form above.
//! Here `sin` stands for `x * sinc`.
//!
//! All inequalities other than `lemma_phi` involve even or odd functions on
//! both sides, so they extend from `(0, pi/2)` to `(-pi/2, 0)` by symmetry.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::enclosures::{cos_enc, p_enc, sinc_enc};
use crate::error::{Error, Result};
use crate::interval::{Interval, Rational};
use crate::lemma::{phi_lemma_enc, DEFAULT_PHI_TERMS};
use crate::series::{Center, ExactSeries, PiPoly};
use crate::taylor::{tm_build, BaseFn, TaylorModel};

/// Symbolic entire expression over the base functions.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Base(BaseFn),
    Const(PiPoly),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn pow(self, k: u32) -> Expr {
        Expr::Pow(Box::new(self), k)
    }

    /// Evaluates over any value backend.
    pub fn eval<B: Basis>(&self, basis: &B) -> Result<B::Value> {
        let mut cache = LeafCache::default();
        self.eval_cached(basis, &mut cache)
    }

    fn eval_cached<B: Basis>(&self, basis: &B, cache: &mut LeafCache<B::Value>) -> Result<B::Value> {
        Ok(match self {
            Expr::Base(f) => cache.get(basis, *f)?,
            Expr::Const(c) => basis.constant(c),
            Expr::Add(a, b) => basis.add(a.eval_cached(basis, cache)?, b.eval_cached(basis, cache)?),
            Expr::Sub(a, b) => basis.sub(a.eval_cached(basis, cache)?, b.eval_cached(basis, cache)?),
            Expr::Mul(a, b) => basis.mul(a.eval_cached(basis, cache)?, b.eval_cached(basis, cache)?),
            Expr::Pow(a, k) => basis.pow(a.eval_cached(basis, cache)?, *k),
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            _ => 3,
        }
    }
}

struct LeafCache<V>(Vec<(BaseFn, V)>);

impl<V> Default for LeafCache<V> {
    fn default() -> Self {
        LeafCache(Vec::new())
    }
}

impl<V: Clone> LeafCache<V> {
    fn get<B: Basis<Value = V>>(&mut self, basis: &B, f: BaseFn) -> Result<V> {
        if let Some((_, v)) = self.0.iter().find(|(g, _)| *g == f) {
            return Ok(v.clone());
        }
        let v = basis.base(f)?;
        self.0.push((f, v.clone()));
        Ok(v)
    }
}

fn base(f: BaseFn) -> Expr {
    Expr::Base(f)
}

fn c(v: PiPoly) -> Expr {
    Expr::Const(v)
}

fn int(n: i64) -> Expr {
    c(PiPoly::int(n))
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |e: &Expr, min: u8, f: &mut fmt::Formatter<'_>| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Base(b) => write!(f, "{}", match b {
                BaseFn::X => "x",
                BaseFn::Sin => "sin",
                BaseFn::Cos => "cos",
                BaseFn::Sinc => "sinc",
                BaseFn::P => "p",
            }),
            Expr::Const(v) => match v.as_rational() {
                Some(q) => write!(f, "{q}"),
                None => write!(f, "({v})"),
            },
            Expr::Add(a, b) => {
                write!(f, "{a} + ")?;
                wrap(b, 2, f)
            }
            Expr::Sub(a, b) => {
                write!(f, "{a} - ")?;
                wrap(b, 2, f)
            }
            Expr::Mul(a, b) => {
                wrap(a, 2, f)?;
                write!(f, "*")?;
                wrap(b, 3, f)
            }
            Expr::Pow(a, k) => {
                wrap(a, 3, f)?;
                write!(f, "^{k}")
            }
        }
    }
}

/// A value backend for [`Expr`].
pub trait Basis {
    type Value: Clone;
    fn base(&self, f: BaseFn) -> Result<Self::Value>;
    fn constant(&self, c: &PiPoly) -> Self::Value;
    fn add(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn sub(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn pow(&self, a: Self::Value, k: u32) -> Self::Value;
}

/// Interval evaluation on a box of `x`.
pub struct IntervalBasis(pub Interval);

impl Basis for IntervalBasis {
    type Value = Interval;

    fn base(&self, f: BaseFn) -> Result<Interval> {
        let x = self.0;
        match f {
            BaseFn::X => Ok(x),
            BaseFn::Sin => Ok(x * sinc_enc(x)?),
            BaseFn::Cos => cos_enc(x),
            BaseFn::Sinc => sinc_enc(x),
            BaseFn::P => p_enc(x),
        }
    }

    fn constant(&self, c: &PiPoly) -> Interval {
        c.to_interval()
    }

    fn add(&self, a: Interval, b: Interval) -> Interval {
        a + b
    }

    fn sub(&self, a: Interval, b: Interval) -> Interval {
        a - b
    }

    fn mul(&self, a: Interval, b: Interval) -> Interval {
        a * b
    }

    fn pow(&self, a: Interval, k: u32) -> Interval {
        a.int_pow(k)
    }
}

/// Taylor-model evaluation about an endpoint.
pub struct ModelBasis {
    pub center: Center,
    pub degree: usize,
    pub radius: f64,
}

impl Basis for ModelBasis {
    type Value = TaylorModel;

    fn base(&self, f: BaseFn) -> Result<TaylorModel> {
        tm_build(f, self.center, self.degree, self.radius)
    }

    fn constant(&self, c: &PiPoly) -> TaylorModel {
        TaylorModel::constant(self.center, self.degree, self.radius, c.to_interval())
    }

    fn add(&self, a: TaylorModel, b: TaylorModel) -> TaylorModel {
        &a + &b
    }

    fn sub(&self, a: TaylorModel, b: TaylorModel) -> TaylorModel {
        &a - &b
    }

    fn mul(&self, a: TaylorModel, b: TaylorModel) -> TaylorModel {
        &a * &b
    }

    fn pow(&self, a: TaylorModel, k: u32) -> TaylorModel {
        a.int_pow(k)
    }
}

/// Exact series evaluation about an endpoint.
pub struct SeriesBasis {
    pub center: Center,
    pub degree: usize,
}

impl Basis for SeriesBasis {
    type Value = ExactSeries;

    fn base(&self, f: BaseFn) -> Result<ExactSeries> {
        let n = self.degree;
        Ok(match (f, self.center) {
            (BaseFn::X, c) => ExactSeries::identity(c, n),
            (BaseFn::Sin, Center::Zero) => ExactSeries::sin_at_zero(n),
            (BaseFn::Cos, Center::Zero) => ExactSeries::cos_at_zero(n),
            (BaseFn::Sinc, Center::Zero) => ExactSeries::sinc_at_zero(n),
            (BaseFn::P, Center::Zero) => ExactSeries::p_at_zero(n),
            (BaseFn::Sin, Center::HalfPi) => ExactSeries::sin_at_half_pi(n),
            (BaseFn::Cos, Center::HalfPi) => ExactSeries::cos_at_half_pi(n),
            (BaseFn::Sinc, Center::HalfPi) => ExactSeries::sinc_at_half_pi(n),
            (BaseFn::P, Center::HalfPi) => ExactSeries::p_at_half_pi(n),
        })
    }

    fn constant(&self, c: &PiPoly) -> ExactSeries {
        ExactSeries::constant(self.center, self.degree, c.clone())
    }

    fn add(&self, a: ExactSeries, b: ExactSeries) -> ExactSeries {
        &a + &b
    }

    fn sub(&self, a: ExactSeries, b: ExactSeries) -> ExactSeries {
        &a - &b
    }

    fn mul(&self, a: ExactSeries, b: ExactSeries) -> ExactSeries {
        &a * &b
    }

    fn pow(&self, a: ExactSeries, k: u32) -> ExactSeries {
        a.pow(k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityId {
    Prop1Lower,
    Prop1Upper,
    MainLower,
    MainUpper,
    BsLower,
    BsUpper,
    QiLower,
    QiUpper,
    LemmaPhi,
}

impl InequalityId {
    pub const ALL: [InequalityId; 9] = [
        InequalityId::Prop1Lower,
        InequalityId::Prop1Upper,
        InequalityId::MainLower,
        InequalityId::MainUpper,
        InequalityId::BsLower,
        InequalityId::BsUpper,
        InequalityId::QiLower,
        InequalityId::QiUpper,
        InequalityId::LemmaPhi,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            InequalityId::Prop1Lower => "prop1_lower",
            InequalityId::Prop1Upper => "prop1_upper",
            InequalityId::MainLower => "main_lower",
            InequalityId::MainUpper => "main_upper",
            InequalityId::BsLower => "bs_lower",
            InequalityId::BsUpper => "bs_upper",
            InequalityId::QiLower => "qi_lower",
            InequalityId::QiUpper => "qi_upper",
            InequalityId::LemmaPhi => "lemma_phi",
        }
    }

    pub fn spec(&self) -> InequalitySpec {
        catalog()[*self as usize].clone()
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InequalityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<InequalityId> {
        InequalityId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

#[derive(Clone, Debug)]
pub enum EntireForm {
    Expr(Expr),
    /// `(9 - 24x^2) cos x - 9 cos 3x - 4x sin 3x`, evaluated through its
    /// alternating series.
    LemmaPhi,
}

impl fmt::Display for EntireForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntireForm::Expr(e) => write!(f, "{e}"),
            EntireForm::LemmaPhi => write!(f, "(9 - 24*x^2)*cos(x) - 9*cos(3x) - 4*x*sin(3x)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct InequalitySpec {
    pub id: InequalityId,
    pub statement: &'static str,
    pub entire_form: EntireForm,
    /// `F ~ c x^k0` as `x -> 0+`.
    pub vanish_order_zero: usize,
    /// `F ~ c eps^k1` as `eps = pi/2 - x -> 0+`; 0 when `F(pi/2) > 0`.
    pub vanish_order_half_pi: usize,
    pub leading_coeff_zero: PiPoly,
    /// Whether `x = pi/2` itself belongs to the claimed domain.
    pub includes_half_pi: bool,
}

fn catalog_entry(id: InequalityId) -> InequalitySpec {
    use BaseFn::*;
    let (x, sin, cos, sinc, p) = (base(X), base(Sin), base(Cos), base(Sinc), base(P));
    let pi2 = c(&PiPoly::pi() * &PiPoly::pi());
    // (2/pi)^4 = 16 pi^-4
    let two_over_pi_4 = c(PiPoly::monomial(Rational::from_integer(16.into()), -4));
    let third = c(PiPoly::ratio(1, 3));
    let cubic = x.clone() + third * x.clone().pow(3);
    let bs_poly = pi2.clone() - int(4) * x.clone().pow(2);

    let (statement, form, k0, k1, lead) = match id {
        InequalityId::Prop1Lower => (
            "x + x^3/3 < tan x",
            int(3) * p - cos,
            2,
            0,
            PiPoly::ratio(2, 5),
        ),
        InequalityId::Prop1Upper => (
            "tan x < x + tan^3(x)/3",
            x.clone()
                * (x.clone().pow(2) * sinc.clone().pow(3) - int(3) * sinc * cos.clone().pow(2) + int(3) * cos.pow(3)),
            5,
            0,
            PiPoly::ratio(3, 5),
        ),
        InequalityId::MainLower => (
            "x^2 tan x < 3(tan x - x)",
            int(3) * p - sinc,
            2,
            0,
            PiPoly::ratio(1, 15),
        ),
        InequalityId::MainUpper => (
            "3(tan x - x) < x^(9/5) tan^(6/5) x",
            sinc.pow(6) - int(243) * p.pow(5) * cos,
            4,
            0,
            PiPoly::ratio(2, 35),
        ),
        InequalityId::BsLower => (
            "8x/(pi^2 - 4x^2) < tan x",
            sin * bs_poly - int(8) * x * cos,
            1,
            2,
            &(&PiPoly::pi() * &PiPoly::pi()) - &PiPoly::int(8),
        ),
        InequalityId::BsUpper => (
            "tan x < pi^2 x/(pi^2 - 4x^2)",
            pi2 * x * cos - sin * bs_poly,
            3,
            1,
            &PiPoly::int(4) - &PiPoly::monomial(Rational::new(1.into(), 3.into()), 2),
        ),
        InequalityId::QiLower => (
            "x + x^3/3 + (2/15) x^4 tan x < tan x",
            sin.clone() - cubic * cos - c(PiPoly::ratio(2, 15)) * x.pow(4) * sin,
            7,
            0,
            PiPoly::ratio(1, 105),
        ),
        InequalityId::QiUpper => (
            "tan x < x + x^3/3 + (2/pi)^4 x^4 tan x",
            cubic * cos + two_over_pi_4 * x.pow(4) * sin.clone() - sin,
            5,
            1,
            &PiPoly::monomial(Rational::from_integer(16.into()), -4) - &PiPoly::ratio(2, 15),
        ),
        InequalityId::LemmaPhi => {
            return InequalitySpec {
                id,
                statement: "0 < (9 - 24x^2) cos x - 9 cos 3x - 4x sin 3x",
                entire_form: EntireForm::LemmaPhi,
                vanish_order_zero: 8,
                vanish_order_half_pi: 0,
                leading_coeff_zero: PiPoly::ratio(32, 105),
                includes_half_pi: true,
            }
        }
    };
    InequalitySpec {
        id,
        statement,
        entire_form: EntireForm::Expr(form),
        vanish_order_zero: k0,
        vanish_order_half_pi: k1,
        leading_coeff_zero: lead,
        includes_half_pi: false,
    }
}

/// Enclosure of the entire-form numerator `F` on a box.
///
/// When the natural interval evaluation does not decide the sign, it is
/// intersected with the mean-value form `F(m) + F'(x) (x - m)`, which is much
/// tighter on forms that cancel to high order.
pub fn eval_form(id: InequalityId, x: Interval) -> Result<Interval> {
    let e = match &catalog()[id as usize].entire_form {
        EntireForm::Expr(e) => e,
        EntireForm::LemmaPhi => return phi_lemma_enc(x, DEFAULT_PHI_TERMS),
    };
    let natural = e.eval(&IntervalBasis(x))?;
    if natural.lo() > 0.0 || natural.hi() < 0.0 || x.is_point() {
        return Ok(natural);
    }
    let Ok(slope) = e.eval(&DualBasis(x)) else { return Ok(natural) };
    let m = x.mid();
    let centered = e.eval(&IntervalBasis(Interval::point(m)))? + slope.d * (x - Interval::point(m));
    Ok(natural.intersect(&centered).unwrap_or(natural))
}

fn catalog() -> &'static [InequalitySpec] {
    static CATALOG: OnceLock<Vec<InequalitySpec>> = OnceLock::new();
    CATALOG.get_or_init(|| InequalityId::ALL.iter().map(|&id| catalog_entry(id)).collect())
}

/// Value and derivative enclosures on a box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual {
    pub v: Interval,
    pub d: Interval,
}

/// Forward-mode derivative evaluation on a box of `x`; needs `x > 0` for
/// the derivatives of `sinc` and `p`.
pub struct DualBasis(pub Interval);

impl Basis for DualBasis {
    type Value = Dual;

    fn base(&self, f: BaseFn) -> Result<Dual> {
        let x = self.0;
        let sinc = || sinc_enc(x);
        Ok(match f {
            BaseFn::X => Dual { v: x, d: Interval::ONE },
            BaseFn::Sin => Dual { v: x * sinc()?, d: cos_enc(x)? },
            BaseFn::Cos => Dual { v: cos_enc(x)?, d: -(x * sinc()?) },
            // sinc' = (cos - sinc) / x
            BaseFn::Sinc => Dual { v: sinc()?, d: (cos_enc(x)? - sinc()?).checked_div(&x)? },
            // p' = (sinc - 3p) / x
            BaseFn::P => {
                let p = p_enc(x)?;
                Dual { v: p, d: (sinc()? - p.scale(3.0)).checked_div(&x)? }
            }
        })
    }

    fn constant(&self, c: &PiPoly) -> Dual {
        Dual { v: c.to_interval(), d: Interval::ZERO }
    }

    fn add(&self, a: Dual, b: Dual) -> Dual {
        Dual { v: a.v + b.v, d: a.d + b.d }
    }

    fn sub(&self, a: Dual, b: Dual) -> Dual {
        Dual { v: a.v - b.v, d: a.d - b.d }
    }

    fn mul(&self, a: Dual, b: Dual) -> Dual {
        Dual { v: a.v * b.v, d: a.v * b.d + a.d * b.v }
    }

    fn pow(&self, a: Dual, k: u32) -> Dual {
        match k {
            0 => Dual { v: Interval::ONE, d: Interval::ZERO },
            _ => Dual { v: a.v.int_pow(k), d: Interval::from_int(k as i64) * a.v.int_pow(k - 1) * a.d },
        }
    }
}

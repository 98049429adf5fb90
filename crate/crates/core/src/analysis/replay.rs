//! Numeric replay of the derivative identities behind the proofs.
//!
//! * `eq22_factorization`: for `g = 3 - x^2 - 3x cot x`,
//!   `g' = x - 3 cot x + 3x cot^2 x = (1 + 3 cot^2 x) h` with
//!   `h = x - 3 tan x / (3 + tan^2 x)`;
//! * `thm_a_h_prime`: `h' = 4 tan^4 x / (3 + tan^2 x)^2` (since
//!   `(3 + t^2)^2 - 3(3 - t^2)(1 + t^2) = 4t^4`);
//! * `eq24_quotient`: for `g = 6 ln(tan x / x) - 5 ln(3(tan x - x)/x^3)`,
//!   `g' * 4x cos^2 x sin x (tan x - x) = (9 - 24x^2) cos x - 9 cos 3x - 4x sin 3x`.
//!
//! Derivatives are central differences in high precision with one Richardson
//! step, so the check is numeric evidence only.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::hp::{Big, Hp};
use crate::error::{Error, Result};
use crate::hexfloat::serde_f64;

const BITS: usize = 256;
const SEED: u64 = 0x7a6e_6365_7274;

pub const DEFAULT_REPLAY_TOL: f64 = 1e-20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    Eq22Factorization,
    Eq24Quotient,
    ThmAHPrime,
}

impl Identity {
    pub const ALL: [Identity; 3] = [Identity::Eq22Factorization, Identity::Eq24Quotient, Identity::ThmAHPrime];

    pub fn as_str(&self) -> &'static str {
        match self {
            Identity::Eq22Factorization => "eq22_factorization",
            Identity::Eq24Quotient => "eq24_quotient",
            Identity::ThmAHPrime => "thm_a_h_prime",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Identity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Identity> {
        Identity::ALL.into_iter().find(|i| i.as_str() == s).ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub identity: Identity,
    pub samples: usize,
    #[serde(with = "serde_f64")]
    pub tol: f64,
    #[serde(with = "serde_f64")]
    pub worst_x: f64,
    /// Largest relative residual over all samples.
    #[serde(with = "serde_f64")]
    pub max_residual: f64,
}

fn cot(h: &mut Hp, x: &Big) -> Big {
    let t = h.tan(x);
    h.div(&h.int(1), &t)
}

fn g22(h: &mut Hp, x: &Big) -> Big {
    let c = cot(h, x);
    let a = h.sub(&h.int(3), &h.mul(x, x));
    h.sub(&a, &h.mul(&h.mul(&h.int(3), x), &c))
}

fn h22(h: &mut Hp, x: &Big) -> Big {
    let t = h.tan(x);
    let den = h.add(&h.int(3), &h.mul(&t, &t));
    h.sub(x, &h.div(&h.mul(&h.int(3), &t), &den))
}

fn g24(h: &mut Hp, x: &Big) -> Big {
    let t = h.tan(x);
    let s = h.div(&t, x);
    let e = h.div(&h.mul(&h.int(3), &h.sub(&t, x)), &h.powi(x, 3));
    let a = h.ln(&s);
    let b = h.ln(&e);
    h.sub(&h.mul(&h.int(6), &a), &h.mul(&h.int(5), &b))
}

fn lemma_phi(h: &mut Hp, x: &Big) -> Big {
    let x3 = h.mul(&h.int(3), x);
    let c1 = h.cos(x);
    let c3 = h.cos(&x3);
    let s3 = h.sin(&x3);
    let a = h.mul(&h.sub(&h.int(9), &h.mul(&h.int(24), &h.mul(x, x))), &c1);
    let b = h.add(&h.mul(&h.int(9), &c3), &h.mul(&h.mul(&h.int(4), x), &s3));
    h.sub(&a, &b)
}

/// Richardson-extrapolated central difference.
fn derivative(h: &mut Hp, f: fn(&mut Hp, &Big) -> Big, x: &Big) -> Big {
    let step = h.num((-24f64).exp2());
    let central = |h: &mut Hp, d: &Big| {
        let fp = f(h, &h.add(x, d));
        let fm = f(h, &h.sub(x, d));
        h.div(&h.sub(&fp, &fm), &h.mul(&h.int(2), d))
    };
    let d1 = central(h, &step);
    let half = h.div(&step, &h.int(2));
    let d2 = central(h, &half);
    h.div(&h.sub(&h.mul(&h.int(4), &d2), &d1), &h.int(3))
}

fn rel(h: &mut Hp, a: &Big, b: &Big) -> f64 {
    let d = h.to_f64(&h.abs(&h.sub(a, b)));
    let scale = h.to_f64(&h.abs(a)).max(h.to_f64(&h.abs(b))).max(1e-300);
    d / scale
}

/// Relative residual of the identity at `x`.
pub fn residual(which: Identity, x: f64) -> f64 {
    let mut h = Hp::new(BITS);
    let xb = h.num(x);
    match which {
        Identity::Eq22Factorization => {
            let numeric = derivative(&mut h, g22, &xb);
            let c = cot(&mut h, &xb);
            let c2 = h.mul(&c, &c);
            let middle = h.add(&h.sub(&xb, &h.mul(&h.int(3), &c)), &h.mul(&h.mul(&h.int(3), &xb), &c2));
            let hx = h22(&mut h, &xb);
            let factored = h.mul(&h.add(&h.int(1), &h.mul(&h.int(3), &c2)), &hx);
            rel(&mut h, &numeric, &middle).max(rel(&mut h, &middle, &factored))
        }
        Identity::ThmAHPrime => {
            let numeric = derivative(&mut h, h22, &xb);
            let t = h.tan(&xb);
            let t2 = h.mul(&t, &t);
            let den = h.powi(&h.add(&h.int(3), &t2), 2);
            let closed = h.div(&h.mul(&h.int(4), &h.mul(&t2, &t2)), &den);
            rel(&mut h, &numeric, &closed)
        }
        Identity::Eq24Quotient => {
            let numeric = derivative(&mut h, g24, &xb);
            let c = h.cos(&xb);
            let s = h.sin(&xb);
            let t = h.tan(&xb);
            let w = h.mul(&h.mul(&h.mul(&h.int(4), &xb), &h.mul(&c, &c)), &h.mul(&s, &h.sub(&t, &xb)));
            let lhs = h.mul(&numeric, &w);
            let rhs = lemma_phi(&mut h, &xb);
            rel(&mut h, &lhs, &rhs)
        }
    }
}

/// Checks the identity at `samples` seeded random points of `(0.05, 1.5)`.
pub fn replay_identity(which: Identity, samples: usize, tol: f64) -> Result<ReplayReport> {
    if samples < 10 {
        return Err(Error::Domain(format!("samples = {samples} below 10")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = (0.0, -1.0);
    for _ in 0..samples {
        let x = rng.gen_range(0.05..1.5);
        let r = residual(which, x);
        if !(r <= worst.1) {
            worst = (x, r);
        }
    }
    if !(worst.1 <= tol) {
        return Err(Error::IdentityViolation { which: which.to_string(), worst_x: worst.0, residual: worst.1 });
    }
    Ok(ReplayReport { identity: which, samples, tol, worst_x: worst.0, max_residual: worst.1 })
}

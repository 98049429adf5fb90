//! High-precision reference values for the integration tests.
//!
//! Everything is evaluated directly from the defining formulas at 256 bits
//! (about 77 digits), independently of the library's own numerics.

#![allow(dead_code)]

use astro_float::{BigFloat, Consts, RoundingMode};
use tancert::Interval;

const RM: RoundingMode = RoundingMode::ToEven;
pub const BITS: usize = 256;

pub struct Oracle {
    cc: Consts,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { cc: Consts::new().expect("constants cache") }
    }
}

pub type Big = BigFloat;

impl Oracle {
    pub fn num(&self, v: f64) -> Big {
        BigFloat::from_f64(v, BITS)
    }

    pub fn int(&self, v: i64) -> Big {
        BigFloat::from_i64(v, BITS)
    }

    pub fn add(&self, a: &Big, b: &Big) -> Big {
        a.add(b, BITS, RM)
    }

    pub fn sub(&self, a: &Big, b: &Big) -> Big {
        a.sub(b, BITS, RM)
    }

    pub fn mul(&self, a: &Big, b: &Big) -> Big {
        a.mul(b, BITS, RM)
    }

    pub fn div(&self, a: &Big, b: &Big) -> Big {
        a.div(b, BITS, RM)
    }

    pub fn powi(&self, a: &Big, n: usize) -> Big {
        a.powi(n, BITS, RM)
    }

    pub fn pi(&mut self) -> Big {
        self.cc.pi(BITS, RM)
    }

    pub fn sin(&mut self, a: &Big) -> Big {
        a.sin(BITS, RM, &mut self.cc)
    }

    pub fn cos(&mut self, a: &Big) -> Big {
        a.cos(BITS, RM, &mut self.cc)
    }

    pub fn tan(&mut self, a: &Big) -> Big {
        a.tan(BITS, RM, &mut self.cc)
    }

    pub fn ln(&mut self, a: &Big) -> Big {
        a.ln(BITS, RM, &mut self.cc)
    }

    /// `a^(n/d)` for `a > 0`.
    pub fn pow_ratio(&mut self, a: &Big, n: i64, d: i64) -> Big {
        let e = self.div(&self.int(n), &self.int(d));
        a.pow(&e, BITS, RM, &mut self.cc)
    }

    /// `sin x / x`, with the value 1 at 0.
    pub fn sinc(&mut self, x: &Big) -> Big {
        if x.is_zero() {
            return self.int(1);
        }
        let s = self.sin(x);
        self.div(&s, x)
    }

    /// `(sin x - x cos x) / x^3`, with the value 1/3 at 0. Tiny arguments use
    /// the series, where the difference would cancel completely.
    pub fn p(&mut self, x: &Big) -> Big {
        let small = self.num(1e-12);
        if x.abs_cmp(&small).is_some_and(|c| c < 0) {
            let x2 = self.mul(x, x);
            let t = self.div(&x2, &self.int(30));
            return self.sub(&self.div(&self.int(1), &self.int(3)), &t);
        }
        let s = self.sin(x);
        let c = self.cos(x);
        let num = self.sub(&s, &self.mul(x, &c));
        self.div(&num, &self.powi(x, 3))
    }

    pub fn value(&mut self, a: &Big) -> f64 {
        a.format(astro_float::Radix::Dec, RM, &mut self.cc).expect("format").parse().expect("parse")
    }

    pub fn contains(&self, iv: &Interval, v: &Big) -> bool {
        let lo = self.num(iv.lo());
        let hi = self.num(iv.hi());
        lo.cmp(v).is_some_and(|c| c <= 0) && v.cmp(&hi).is_some_and(|c| c <= 0)
    }
}

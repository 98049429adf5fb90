//! Thin arbitrary-precision float layer over `astro-float`, round-to-nearest.
//!
//! Nothing here is rigorous; it backs the exploratory analysis only.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

const RM: RoundingMode = RoundingMode::ToEven;

pub struct Hp {
    p: usize,
    cc: Consts,
}

pub type Big = BigFloat;

impl Hp {
    pub fn new(bits: usize) -> Hp {
        Hp { p: bits.max(64), cc: Consts::new().expect("astro-float constants cache") }
    }

    pub fn bits(&self) -> usize {
        self.p
    }

    pub fn num(&self, v: f64) -> Big {
        BigFloat::from_f64(v, self.p)
    }

    pub fn int(&self, v: i64) -> Big {
        self.num(v as f64)
    }

    pub fn add(&self, a: &Big, b: &Big) -> Big {
        a.add(b, self.p, RM)
    }

    pub fn sub(&self, a: &Big, b: &Big) -> Big {
        a.sub(b, self.p, RM)
    }

    pub fn mul(&self, a: &Big, b: &Big) -> Big {
        a.mul(b, self.p, RM)
    }

    pub fn div(&self, a: &Big, b: &Big) -> Big {
        a.div(b, self.p, RM)
    }

    pub fn powi(&self, a: &Big, n: usize) -> Big {
        a.powi(n, self.p, RM)
    }

    pub fn abs(&self, a: &Big) -> Big {
        if a.is_negative() {
            a.neg()
        } else {
            a.clone()
        }
    }

    pub fn pi(&mut self) -> Big {
        self.cc.pi(self.p, RM)
    }

    pub fn sin(&mut self, a: &Big) -> Big {
        a.sin(self.p, RM, &mut self.cc)
    }

    pub fn cos(&mut self, a: &Big) -> Big {
        a.cos(self.p, RM, &mut self.cc)
    }

    pub fn tan(&mut self, a: &Big) -> Big {
        a.tan(self.p, RM, &mut self.cc)
    }

    pub fn ln(&mut self, a: &Big) -> Big {
        a.ln(self.p, RM, &mut self.cc)
    }

    /// Decimal rendering with all working digits.
    pub fn decimal(&mut self, a: &Big) -> String {
        a.format(Radix::Dec, RM, &mut self.cc).unwrap_or_else(|_| "NaN".into())
    }

    /// Nearest binary64 value.
    pub fn to_f64(&mut self, a: &Big) -> f64 {
        self.decimal(a).parse().unwrap_or(f64::NAN)
    }
}

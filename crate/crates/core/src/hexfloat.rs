//! Bit-exact hexadecimal float text, in the `%a` style of C (`0x1.921fb54442d18p+1`).
//!
//! Parsing only accepts values that are exactly representable as binary64, so
//! `parse(&format(x))` is the identity on every float, including signed zeros
//! and subnormals.

use crate::error::{Error, Result};

const MANT_BITS: u32 = 52;
const EXP_BIAS: i32 = 1023;

pub fn format(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    let sign = if x.is_sign_negative() { "-" } else { "" };
    if x.is_infinite() {
        return format!("{sign}inf");
    }
    let bits = x.to_bits();
    let biased = ((bits >> MANT_BITS) & 0x7ff) as i32;
    let mant = bits & ((1u64 << MANT_BITS) - 1);
    if biased == 0 && mant == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, exp) = if biased == 0 {
        (0, 1 - EXP_BIAS)
    } else {
        (1, biased - EXP_BIAS)
    };
    let mut frac = format!("{mant:013x}");
    while frac.ends_with('0') {
        frac.pop();
    }
    let esign = if exp < 0 { '-' } else { '+' };
    if frac.is_empty() {
        format!("{sign}0x{lead}p{esign}{}", exp.abs())
    } else {
        format!("{sign}0x{lead}.{frac}p{esign}{}", exp.abs())
    }
}

pub fn parse(text: &str) -> Result<f64> {
    let bad = || Error::HexFloat(text.to_string());
    let s = text.trim();
    let (negative, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let signed = |v: f64| if negative { -v } else { v };
    if body.eq_ignore_ascii_case("inf") || body.eq_ignore_ascii_case("infinity") {
        return Ok(signed(f64::INFINITY));
    }
    let body = body
        .strip_prefix("0x")
        .or_else(|| body.strip_prefix("0X"))
        .ok_or_else(bad)?;
    let (digits, exp) = body
        .split_once(['p', 'P'])
        .ok_or_else(bad)?;
    let exp: i32 = exp.parse().map_err(|_| bad())?;
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }

    // Accumulate the significand; reject anything wider than 64 bits outright.
    let mut mant: u128 = 0;
    for c in int_part.chars().chain(frac_part.chars()) {
        let d = c.to_digit(16).ok_or_else(bad)?;
        mant = mant.checked_mul(16).ok_or_else(bad)? | d as u128;
        if mant >> 64 != 0 {
            return Err(bad());
        }
    }
    if mant == 0 {
        return Ok(signed(0.0));
    }
    let mut exp = exp - 4 * frac_part.len() as i32;
    // Strip trailing zero bits so the significand fits in 53 bits when exact.
    let tz = mant.trailing_zeros();
    mant >>= tz;
    exp += tz as i32;
    if mant >> 53 != 0 {
        return Err(bad());
    }
    let value = scale_pow2(mant as f64, exp);
    if !value.is_finite() || value == 0.0 || scale_pow2(value, -exp) != mant as f64 {
        return Err(bad());
    }
    Ok(signed(value))
}

fn scale_pow2(mut x: f64, mut e: i32) -> f64 {
    let step_up = f64::from_bits(((EXP_BIAS + 600) as u64) << MANT_BITS);
    let step_down = f64::from_bits(((EXP_BIAS - 600) as u64) << MANT_BITS);
    while e > 600 {
        x *= step_up;
        e -= 600;
    }
    while e < -600 {
        x *= step_down;
        e += 600;
    }
    x * f64::from_bits(((EXP_BIAS + e) as u64) << MANT_BITS)
}

/// Serde adapter for a single float stored as a hex string.
pub mod serde_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).map_err(serde::de::Error::custom)
    }
}

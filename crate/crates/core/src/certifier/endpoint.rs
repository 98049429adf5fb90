//! Positivity next to the endpoints, where `F` vanishes and plain interval
//! evaluation cannot produce a positive lower bound.
//!
//! If `F ~ c t^k` with `c > 0`, a Taylor model of `F` in `t` has its first `k`
//! coefficients equal to zero. Those are proved zero on the exact series
//! (coefficients in `Q[pi, 1/pi]`), removed from the interval model, and the
//! quotient `F / t^k` is bounded from below on `(0, reach]`.

use serde::{Deserialize, Serialize};

use super::forms::{EntireForm, Expr, InequalityId, ModelBasis, SeriesBasis};
use crate::error::{Error, Result};
use crate::hexfloat::serde_f64;
use crate::interval::{half_pi_enclosure, sub_down, sub_up, Interval};
use crate::lemma::{phi_near_zero_bound, verify_shift_identities};
use crate::series::{Center, ExactSeries};
use crate::taylor::eval_poly;

/// Pieces of `[0, reach]` on which the normalized quotient is bounded.
const PIECES: usize = 32;

/// Width allowed for low-order model coefficients about pi/2, which enclose
/// an exact zero only up to the width of the stored pi.
pub const HALF_PI_ZERO_TOL: f64 = 1e-10;

/// Width required of the normalized leading coefficient about 0.
pub const LEADING_WIDTH_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndpointProof {
    pub center: Center,
    /// The proof covers model variable values in `(0, reach]`.
    #[serde(with = "serde_f64")]
    pub reach: f64,
    /// Where the box-covered part of the domain starts (about 0) or ends
    /// (about pi/2), as an `x` value.
    #[serde(with = "serde_f64")]
    pub switch_point: f64,
    pub order: usize,
    pub model_degree: usize,
    /// Lower bound of `F / t^order` on `(0, reach]`.
    #[serde(with = "serde_f64")]
    pub normalized_lower_bound: f64,
    pub leading_coefficient: Interval,
}

fn expr_of(id: InequalityId) -> Option<Expr> {
    match id.spec().entire_form {
        EntireForm::Expr(e) => Some(e),
        EntireForm::LemmaPhi => None,
    }
}

/// Checks the exact series: zero below `order`, nonzero at `order`.
fn exact_order(id: InequalityId, series: &ExactSeries, order: usize) -> Result<()> {
    if let Some(j) = (0..order).find(|&j| !series.coeff(j).is_zero()) {
        return Err(Error::OrderMismatch(format!(
            "{id}: coefficient {j} about {:?} is {}, expected order {order}",
            series.center(),
            series.coeff(j)
        )));
    }
    if series.coeff(order).is_zero() {
        return Err(Error::OrderMismatch(format!("{id}: coefficient {order} vanishes")));
    }
    Ok(())
}

/// Lower bound of `sum q_k t^k + t^e * tail` over `[0, reach]`.
fn quotient_lower_bound(q: &[Interval], tail: Interval, e: u32, reach: f64) -> f64 {
    (0..PIECES)
        .map(|i| {
            let a = reach * i as f64 / PIECES as f64;
            let b = if i + 1 == PIECES { reach } else { reach * (i + 1) as f64 / PIECES as f64 };
            let t = Interval::new(a, b);
            (eval_poly(q, t) + t.int_pow(e) * tail).lo()
        })
        .fold(f64::INFINITY, f64::min)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    id: InequalityId,
    center: Center,
    reach: f64,
    switch_point: f64,
    order: usize,
    degree: usize,
    lower: f64,
    leading: Interval,
) -> Result<EndpointProof> {
    if !(lower > 0.0) {
        return Err(Error::NotPositive(format!(
            "{id}: normalized lower bound {lower} about {center:?} (reach {reach}, degree {degree}); \
             shrink the reach or raise the degree"
        )));
    }
    Ok(EndpointProof {
        center,
        reach,
        switch_point,
        order,
        model_degree: degree,
        normalized_lower_bound: lower,
        leading_coefficient: leading,
    })
}

/// Proves `F > 0` on `(0, delta]`.
pub fn near_zero_proof(id: InequalityId, delta: f64, degree: usize) -> Result<EndpointProof> {
    let spec = id.spec();
    let k0 = spec.vanish_order_zero;
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::Domain(format!("delta = {delta} outside (0, 0.5]")));
    }
    if degree < k0 + 8 {
        return Err(Error::Domain(format!("degree {degree} below order + 8 = {}", k0 + 8)));
    }
    let Some(expr) = expr_of(id) else {
        return lemma_near_zero(delta, degree);
    };
    let exact = expr.eval(&SeriesBasis { center: Center::Zero, degree })?;
    exact_order(id, &exact, k0)?;
    if exact.coeff(k0) != &spec.leading_coeff_zero {
        return Err(Error::OrderMismatch(format!(
            "{id}: leading coefficient {} differs from catalog value {}",
            exact.coeff(k0),
            spec.leading_coeff_zero
        )));
    }
    let mut tm = expr.eval(&ModelBasis { center: Center::Zero, degree, radius: delta })?;
    for j in 0..k0 {
        if !tm.coefficient(j).contains(0.0) {
            return Err(Error::OrderMismatch(format!("{id}: model coefficient {j} excludes zero")));
        }
        tm.zero_coefficient(j);
    }
    let (q, tail) = tm.shifted_down(k0)?;
    let leading = q[0];
    let consistent = match spec.leading_coeff_zero.as_rational() {
        Some(c) => leading.contains_rational(&c),
        None => leading.intersect(&spec.leading_coeff_zero.to_interval()).is_some(),
    };
    if !(leading.width() < LEADING_WIDTH_TOL && consistent) {
        return Err(Error::OrderMismatch(format!("{id}: leading coefficient enclosure {leading:?} too wide or off")));
    }
    let lower = quotient_lower_bound(&q, tail, (degree + 1 - k0) as u32, delta);
    finish(id, Center::Zero, delta, delta, k0, degree, lower, leading)
}

/// `phi(x) / x^8` is bracketed below by `3 (T_4/8! - T_5 x^2/10!)`: its series
/// alternates with decreasing terms once the sequence checks hold.
fn lemma_near_zero(delta: f64, degree: usize) -> Result<EndpointProof> {
    let id = InequalityId::LemmaPhi;
    let spec = id.spec();
    verify_shift_identities(8)?;
    let exact = ExactSeries::lemma_phi_at_zero(degree);
    exact_order(id, &exact, spec.vanish_order_zero)?;
    let lead = exact.coeff(spec.vanish_order_zero);
    if lead != &spec.leading_coeff_zero {
        return Err(Error::OrderMismatch(format!("{id}: leading coefficient {lead}")));
    }
    let lower = phi_near_zero_bound(delta)?;
    // the bracket uses the x^8 and x^10 terms
    finish(id, Center::Zero, delta, delta, 8, 10, lower, lead.to_interval())
}

/// Switch point `pi/2 - epsilon_max`, rounded down, and the resulting reach
/// in `eps = pi/2 - x`, rounded up.
pub fn half_pi_split(epsilon_max: f64) -> (f64, f64) {
    let hp = half_pi_enclosure();
    let s = sub_down(hp.lo(), epsilon_max);
    (s, sub_up(hp.hi(), s))
}

/// Proves `F > 0` on `[pi/2 - epsilon_max, pi/2)`.
pub fn near_half_pi_proof(id: InequalityId, epsilon_max: f64, degree: usize) -> Result<EndpointProof> {
    let spec = id.spec();
    let k1 = spec.vanish_order_half_pi;
    if k1 == 0 {
        return Err(Error::Domain(format!("{id} does not vanish at pi/2")));
    }
    if !(epsilon_max > 0.0 && epsilon_max <= 0.25) {
        return Err(Error::Domain(format!("epsilon_max = {epsilon_max} outside (0, 0.25]")));
    }
    if degree < k1 + 8 {
        return Err(Error::Domain(format!("degree {degree} below order + 8 = {}", k1 + 8)));
    }
    let expr = expr_of(id).ok_or_else(|| Error::Domain(format!("{id} has no model form")))?;
    let (s, reach) = half_pi_split(epsilon_max);

    let exact = expr.eval(&SeriesBasis { center: Center::HalfPi, degree })?;
    exact_order(id, &exact, k1)?;
    let exact_lead = exact.coeff(k1).to_interval();
    if !exact_lead.certainly_positive() {
        return Err(Error::NotPositive(format!("{id}: leading coefficient about pi/2 is {}", exact.coeff(k1))));
    }

    let mut tm = expr.eval(&ModelBasis { center: Center::HalfPi, degree, radius: reach })?;
    for j in 0..k1 {
        let c = tm.coefficient(j);
        if !(c.contains(0.0) && c.width() < HALF_PI_ZERO_TOL) {
            return Err(Error::OrderMismatch(format!("{id}: model coefficient {j} about pi/2 is {c:?}")));
        }
        tm.zero_coefficient(j);
    }
    let (q, tail) = tm.shifted_down(k1)?;
    let leading = q[0];
    let lower = quotient_lower_bound(&q, tail, (degree + 1 - k1) as u32, reach);
    finish(id, Center::HalfPi, reach, s, k1, degree, lower, leading)
}

//! Certification of the catalog inequalities on `(0, pi/2)`.
//!
//! A certificate splits the domain into three parts: `(0, delta]` handled by a
//! Taylor model about 0, `[pi/2 - epsilon_max, pi/2)` handled by a model about
//! pi/2 (only when `F` vanishes there), and a finite list of boxes in between,
//! each with a strictly positive lower bound on `F`.

mod endpoint;
mod forms;

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use endpoint::{half_pi_split, near_half_pi_proof, near_zero_proof, EndpointProof};
pub use forms::{
    eval_form, Basis, EntireForm, Expr, InequalityId, InequalitySpec, IntervalBasis, ModelBasis, SeriesBasis,
};

use crate::error::{Error, Result};
use crate::hexfloat::serde_f64;
use crate::interval::{half_pi_enclosure, Interval};
use crate::taylor::DEFAULT_DEGREE;

pub const SCHEMA: &str = "tancert-cert-v1";

/// Upper limit on box evaluations for one certification run.
pub const EVALUATION_BUDGET: usize = 4_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifyConfig {
    #[serde(with = "serde_f64")]
    pub delta: f64,
    #[serde(with = "serde_f64")]
    pub epsilon_max: f64,
    pub degree: usize,
    pub max_depth: u32,
    #[serde(with = "serde_f64")]
    pub min_width: f64,
    /// Whether `(0, delta]` is covered by the model about 0; when off, boxes
    /// start at 0.
    pub near_zero: bool,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            delta: 0.25,
            epsilon_max: 0.125,
            degree: DEFAULT_DEGREE,
            max_depth: 48,
            min_width: (-40f64).exp2(),
            near_zero: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Certified,
    Undecided,
    Falsified,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Certified => "certified",
            Status::Undecided => "undecided",
            Status::Falsified => "falsified",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxRecord {
    pub interval: Interval,
    /// Enclosure of `F` on the box; the whole line when it could not be evaluated.
    pub margin: Interval,
    pub depth: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub box_count: usize,
    pub evaluations: usize,
    pub max_depth_reached: u32,
    /// Kept out of the serialized form so that repeated runs are byte-identical.
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub inequality_id: InequalityId,
    pub statement: String,
    pub entire_form: String,
    pub domain: Interval,
    pub status: Status,
    pub config: CertifyConfig,
    pub near_zero_proof: Option<EndpointProof>,
    pub near_half_pi_proof: Option<EndpointProof>,
    pub boxes: Vec<BoxRecord>,
    /// Smallest-margin box that could not be accepted.
    pub failed_box: Option<BoxRecord>,
    pub stats: Stats,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }
}

fn whole_line() -> Interval {
    Interval::new(f64::NEG_INFINITY, f64::INFINITY)
}

struct Search {
    accepted: Vec<BoxRecord>,
    failed: Option<BoxRecord>,
    falsified: bool,
    evaluations: usize,
    max_depth: u32,
}

fn worse(a: &BoxRecord, b: &Option<BoxRecord>) -> bool {
    match b {
        None => true,
        Some(b) => a.margin.lo() < b.margin.lo(),
    }
}

/// Level-synchronous bisection. Every level is evaluated in parallel and then
/// consumed in order, so the result does not depend on the thread count.
fn branch_and_bound(id: InequalityId, root: Interval, cfg: &CertifyConfig) -> Result<Search> {
    let mut s = Search { accepted: Vec::new(), failed: None, falsified: false, evaluations: 0, max_depth: 0 };
    let mut frontier = vec![(root, 0u32)];
    while !frontier.is_empty() {
        if s.evaluations + frontier.len() > EVALUATION_BUDGET {
            let b = frontier[0];
            s.failed.get_or_insert(BoxRecord { interval: b.0, margin: whole_line(), depth: b.1 });
            break;
        }
        s.evaluations += frontier.len();
        let margins: Vec<Result<Interval>> = frontier.par_iter().map(|(b, _)| eval_form(id, *b)).collect();
        let mut next = Vec::new();
        for ((b, depth), m) in frontier.into_iter().zip(margins) {
            s.max_depth = s.max_depth.max(depth);
            let margin = match m {
                Ok(m) => m,
                Err(Error::CosNotPositive(_)) => whole_line(),
                Err(e) => return Err(e),
            };
            let record = BoxRecord { interval: b, margin, depth };
            if margin.lo() > 0.0 {
                s.accepted.push(record);
            } else if margin.hi() < 0.0 {
                s.falsified = true;
                if worse(&record, &s.failed) {
                    s.failed = Some(record);
                }
            } else if depth < cfg.max_depth && b.width() > cfg.min_width && b.lo() < b.mid() && b.mid() < b.hi() {
                let (l, r) = b.split();
                next.push((l, depth + 1));
                next.push((r, depth + 1));
            } else if worse(&record, &s.failed) {
                s.failed = Some(record);
            }
        }
        frontier = next;
    }
    s.accepted.sort_by(|a, b| a.interval.lo().total_cmp(&b.interval.lo()));
    Ok(s)
}

fn validate_config(cfg: &CertifyConfig) -> Result<()> {
    if !(cfg.min_width > 0.0) || cfg.max_depth == 0 {
        return Err(Error::Domain("min_width must be positive and max_depth nonzero".into()));
    }
    Ok(())
}

/// Certifies one inequality. `threads` sets the worker count of the box
/// evaluation; it does not change the result.
pub fn certify(id: InequalityId, cfg: &CertifyConfig, threads: usize) -> Result<Certificate> {
    validate_config(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Domain(e.to_string()))?;
    pool.install(|| certify_in_pool(id, cfg))
}

fn certify_in_pool(id: InequalityId, cfg: &CertifyConfig) -> Result<Certificate> {
    let start = Instant::now();
    let spec = id.spec();
    let near_zero = if cfg.near_zero { Some(near_zero_proof(id, cfg.delta, cfg.degree)?) } else { None };
    let near_half_pi = if spec.vanish_order_half_pi > 0 {
        Some(near_half_pi_proof(id, cfg.epsilon_max, cfg.degree)?)
    } else {
        None
    };
    let hp = half_pi_enclosure();
    let lo = near_zero.as_ref().map_or(0.0, |p| p.switch_point);
    let hi = near_half_pi.as_ref().map_or(hp.hi(), |p| p.switch_point);
    let search = branch_and_bound(id, Interval::new(lo, hi), cfg)?;
    let status = if search.falsified {
        Status::Falsified
    } else if search.failed.is_some() {
        Status::Undecided
    } else {
        Status::Certified
    };
    let wall_time = start.elapsed();
    log::info!("{id}: {status}, {} boxes, {:?}", search.accepted.len(), wall_time);
    Ok(Certificate {
        schema: SCHEMA.to_string(),
        inequality_id: id,
        statement: spec.statement.to_string(),
        entire_form: spec.entire_form.to_string(),
        domain: Interval::new(0.0, hp.hi()),
        status,
        config: cfg.clone(),
        near_zero_proof: near_zero,
        near_half_pi_proof: near_half_pi,
        stats: Stats {
            box_count: search.accepted.len(),
            evaluations: search.evaluations,
            max_depth_reached: search.max_depth,
            wall_time,
        },
        boxes: search.accepted,
        failed_box: search.failed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub valid: bool,
    pub diagnoses: Vec<String>,
}

/// Independently re-verifies a certificate: coverage, per-box margins
/// recomputed from scratch, and both endpoint proofs re-run.
pub fn check_certificate(cert: &Certificate) -> CheckReport {
    let mut d = Vec::new();
    if cert.schema != SCHEMA {
        d.push(format!("schema {:?} is not {SCHEMA:?}", cert.schema));
    }
    if cert.status != Status::Certified {
        d.push(format!("status is {}", cert.status));
    }
    let id = cert.inequality_id;
    let spec = id.spec();
    let cfg = &cert.config;
    let hp = half_pi_enclosure();

    let start = match (&cert.near_zero_proof, cfg.near_zero) {
        (Some(p), true) => {
            match near_zero_proof(id, cfg.delta, cfg.degree) {
                Ok(q) if &q == p => {}
                Ok(_) => d.push("near-zero proof differs from recomputation".into()),
                Err(e) => d.push(format!("near-zero proof fails: {e}")),
            }
            p.switch_point
        }
        (None, false) => 0.0,
        _ => {
            d.push("near-zero proof missing or inconsistent with config".into());
            0.0
        }
    };
    let end = match (&cert.near_half_pi_proof, spec.vanish_order_half_pi > 0) {
        (Some(p), true) => {
            match near_half_pi_proof(id, cfg.epsilon_max, cfg.degree) {
                Ok(q) if &q == p => {}
                Ok(_) => d.push("near-pi/2 proof differs from recomputation".into()),
                Err(e) => d.push(format!("near-pi/2 proof fails: {e}")),
            }
            p.switch_point
        }
        (None, false) => hp.hi(),
        _ => {
            d.push("near-pi/2 proof missing or unexpected".into());
            hp.hi()
        }
    };

    match cert.boxes.first() {
        None => d.push("no boxes".into()),
        Some(b) if b.interval.lo() != start => {
            d.push(format!("gap at start: boxes begin at {} instead of {start}", b.interval.lo()))
        }
        _ => {}
    }
    if let Some(b) = cert.boxes.last() {
        if b.interval.hi() != end {
            d.push(format!("gap at end: boxes stop at {} instead of {end}", b.interval.hi()));
        }
    }
    for w in cert.boxes.windows(2) {
        if w[0].interval.hi() != w[1].interval.lo() {
            d.push(format!("gap between {} and {}", w[0].interval.hi(), w[1].interval.lo()));
        }
    }
    let recomputed: Vec<Result<Interval>> = cert.boxes.par_iter().map(|b| eval_form(id, b.interval)).collect();
    for (b, m) in cert.boxes.iter().zip(recomputed) {
        if !(b.margin.lo() > 0.0) {
            d.push(format!("margin not positive on {}", b.interval));
        }
        match m {
            Ok(m) if m.lo() > 0.0 => {
                if m != b.margin {
                    d.push(format!("recorded margin differs from recomputation on {}", b.interval));
                }
            }
            Ok(m) => d.push(format!("recomputed margin {m} not positive on {}", b.interval)),
            Err(e) => d.push(format!("evaluation failed on {}: {e}", b.interval)),
        }
    }
    if cert.stats.box_count != cert.boxes.len() {
        d.push("box_count does not match the box list".into());
    }
    CheckReport { valid: d.is_empty(), diagnoses: d }
}

/// Parses and checks a certificate file's contents.
pub fn check_certificate_json(text: &str) -> CheckReport {
    match Certificate::from_json(text) {
        Ok(c) => check_certificate(&c),
        Err(e) => CheckReport { valid: false, diagnoses: vec![format!("unreadable certificate: {e}")] },
    }
}

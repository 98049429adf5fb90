//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#![allow(clippy::approx_constant)]

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::Oracle;
use tancert::analysis::{crossover_lower, crossover_upper, exponent_ratio, linear_grid, optimality_scan, DEFAULT_BITS};
use tancert::certifier::{certify, eval_form, near_zero_proof, Certificate, CertifyConfig, InequalityId, Status};
use tancert::enclosures::{cos_enc, p_enc, sin_enc, sinc_enc, tan_enc};
use tancert::interval::{half_pi_enclosure, pi_enclosure};
use tancert::lemma::{phi_lemma_enc, t_seq, u_seq, verify_shift_identities, DEFAULT_PHI_TERMS};
use tancert::{Interval, Rational};

#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn within(&mut self, what: &str, started: Instant, limit: Duration) {
        let took = started.elapsed();
        self.notes.push(format!("{what} {:.2}s", took.as_secs_f64()));
        self.expect(took < limit, format!("{what} took {took:?}, limit {limit:?}"));
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn seconds(s: u64) -> Duration {
    Duration::from_secs(s)
}

/// `T_n` read off the Maclaurin coefficient of `x^{2n}` in
/// `(9 - 24x^2) cos x - 9 cos 3x - 4x sin 3x`, times `(-1)^n (2n)! / 3`.
fn t_oracle(n: u32) -> BigInt {
    let nb = BigInt::from(n);
    let mut s: BigInt = BigInt::from(9) + BigInt::from(48) * &nb * (BigInt::from(2) * &nb - 1) - BigInt::from(9).pow(n + 1);
    if n > 0 {
        s += BigInt::from(8) * &nb * BigInt::from(3).pow(2 * n - 1);
    }
    assert!((&s % 3u32).is_zero());
    s / 3
}

fn u_oracle(n: u32) -> BigInt {
    let w = BigInt::from((2 * n + 1) * (2 * n + 2));
    w * t_oracle(n) - 3 * t_oracle(n + 1)
}

fn criterion_1() -> Checks {
    let mut c = Checks::default();
    let start = Instant::now();
    for n in 0..4 {
        c.expect(t_seq(n).is_zero(), format!("T_{n} = {} is not 0", t_seq(n)));
    }
    for n in 0..=200u32 {
        let t = t_seq(n);
        c.expect(t == Rational::from_integer(t_oracle(n)), format!("T_{n} differs from the series coefficient"));
        if n < 4 {
            continue;
        }
        match u_seq(n) {
            Ok((rec, closed)) => {
                c.expect(rec == closed, format!("U_{n}: routes disagree"));
                c.expect(rec == u_oracle(n), format!("U_{n} differs from the oracle"));
                c.expect(t.is_positive() && rec.is_positive(), format!("T_{n} or U_{n} not positive"));
            }
            Err(e) => c.expect(false, format!("U_{n}: {e}")),
        }
    }
    c.within("runtime", start, seconds(1));
    c
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&k| BigInt::from(k)).collect()
}

fn eval_poly(coeffs: &[BigInt], n: i64) -> BigInt {
    coeffs.iter().rev().fold(BigInt::zero(), |acc, k| acc * n + k)
}

fn criterion_2() -> Checks {
    let mut c = Checks::default();
    let start = Instant::now();
    match verify_shift_identities(200) {
        Ok(r) => {
            c.expect(r.b_shifted == ints(&[-69, 506, 1036, 640, 128]), format!("B(n+1) = {:?}", r.b_shifted));
            c.expect(r.a_shifted == ints(&[99, 694, 324, 32]), format!("A(n+4) = {:?}", r.a_shifted));
            // U_n = B(n) + A(n) 9^{n-1}; a quartic plus a cubic times 9^{n-1} is pinned
            // down by far fewer than these 40 values.
            for n in 5..45u32 {
                let b = eval_poly(&r.b_shifted, n as i64 - 1);
                let a = eval_poly(&r.a_shifted, n as i64 - 4);
                let u = b + a * BigInt::from(9).pow(n - 1);
                c.expect(u == u_oracle(n), format!("shifted forms disagree with U_{n}"));
            }
        }
        Err(e) => c.expect(false, e.to_string()),
    }
    c.within("runtime", start, seconds(1));
    c
}

fn criterion_3() -> Checks {
    let mut c = Checks::default();
    let start = Instant::now();
    match certify(InequalityId::LemmaPhi, &CertifyConfig::default(), 1) {
        Ok(cert) => {
            c.expect(cert.status == Status::Certified, format!("status {}", cert.status));
            c.expect(cert.boxes.len() <= 10_000, format!("{} boxes", cert.boxes.len()));
            c.expect(cert.domain.hi() >= half_pi_enclosure().hi(), format!("domain {} misses pi/2", cert.domain));
            c.note(format!("{} boxes", cert.boxes.len()));
        }
        Err(e) => c.expect(false, e.to_string()),
    }
    c.within("runtime", start, seconds(10));
    let mut o = Oracle::default();
    let two_pi = {
        let pi = o.pi();
        o.mul(&o.int(2), &pi)
    };
    match phi_lemma_enc(half_pi_enclosure(), DEFAULT_PHI_TERMS) {
        Ok(v) => {
            c.expect(o.contains(&v, &two_pi), format!("phi at pi/2 = {v} misses 2 pi"));
            c.expect(v.width() < 1e-10, format!("phi at pi/2 width {}", v.width()));
        }
        Err(e) => c.expect(false, e.to_string()),
    }
    c
}

fn criterion_4() -> Checks {
    let mut c = Checks::default();
    for id in [InequalityId::MainLower, InequalityId::MainUpper] {
        let start = Instant::now();
        match certify(id, &CertifyConfig::default(), 1) {
            Ok(cert) => c.expect(cert.status == Status::Certified, format!("{id}: {}", cert.status)),
            Err(e) => c.expect(false, format!("{id}: {e}")),
        }
        c.within(id.as_str(), start, seconds(30));
    }

    let mut o = Oracle::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let x = rng.gen_range(1e-4..1.5707963);
        let xb = o.num(x);
        let t = o.tan(&xb);
        let left = o.mul(&o.mul(&xb, &xb), &t);
        let mid = o.mul(&o.int(3), &o.sub(&t, &xb));
        let a = o.pow_ratio(&xb, 9, 5);
        let b = o.pow_ratio(&t, 6, 5);
        let right = o.mul(&a, &b);
        let ordered = left.cmp(&mid).is_some_and(|s| s < 0) && mid.cmp(&right).is_some_and(|s| s < 0);
        c.expect(ordered, format!("oracle ordering fails at x = {x}"));
        for id in [InequalityId::MainLower, InequalityId::MainUpper] {
            if let Ok(v) = eval_form(id, Interval::point(x)) {
                c.expect(!v.certainly_negative(), format!("{id} form negative at x = {x}"));
            }
        }
    }

    // x + x^2 tan x / 3 < tan x < x + x^(9/5) tan^(6/5) x / 3 at x = 1
    let one = o.num(1.0);
    let t1 = o.tan(&one);
    let lower_o = o.add(&one, &o.div(&t1, &o.int(3)));
    let upper_o = {
        let p = o.pow_ratio(&t1, 6, 5);
        o.add(&one, &o.div(&p, &o.int(3)))
    };
    let oracle = [o.value(&lower_o), o.value(&t1), o.value(&upper_o)];
    match tan_enc(Interval::point(1.0)) {
        Ok(t) => {
            let ours = [1.0 + t.mid() / 3.0, t.mid(), 1.0 + t.mid().powf(1.2) / 3.0];
            for ((ours, want), quoted) in ours.iter().zip(oracle).zip([1.519136, 1.557408, 1.567233]) {
                c.expect((ours - want).abs() < 1e-12, format!("x = 1: {ours} vs oracle {want}"));
                c.expect((quoted - want).abs() < 5e-7, format!("x = 1: quoted {quoted} vs oracle {want}"));
            }
            c.expect(ours[0] < ours[1] && ours[1] < ours[2], "chain at x = 1 not ordered");
            c.note(format!("x = 1: {:.9} < {:.9} < {:.9}", ours[0], ours[1], ours[2]));
        }
        Err(e) => c.expect(false, e.to_string()),
    }
    c
}

fn criterion_5() -> Checks {
    let mut c = Checks::default();
    let cases = [
        (InequalityId::Prop1Lower, 2, 5),
        (InequalityId::MainLower, 1, 15),
        (InequalityId::MainUpper, 2, 35),
        (InequalityId::QiLower, 1, 105),
        (InequalityId::Prop1Upper, 3, 5),
    ];
    let cfg = CertifyConfig::default();
    for (id, num, den) in cases {
        let q = BigRational::new(num.into(), den.into());
        match near_zero_proof(id, cfg.delta, cfg.degree) {
            Ok(p) => {
                let lc = p.leading_coefficient;
                c.expect(lc.contains_rational(&q), format!("{id}: {lc} misses {q}"));
                c.expect(lc.width() < 1e-12, format!("{id}: width {}", lc.width()));
            }
            Err(e) => c.expect(false, format!("{id}: {e}")),
        }
    }
    c
}

fn criterion_6() -> Checks {
    let mut c = Checks::default();
    let start = Instant::now();
    for (name, r, target) in [("upper", crossover_upper(1e-3), 1.2332), ("lower", crossover_lower(1e-3), 1.5255)] {
        match r {
            Ok(r) => {
                c.expect(r.bracket.width() <= 1e-3, format!("{name}: width {}", r.bracket.width()));
                c.expect(r.bracket.contains(target), format!("{name}: {} misses {target}", r.bracket));
                c.expect(r.sign_lo * r.sign_hi == -1, format!("{name}: signs {} {}", r.sign_lo, r.sign_hi));
                c.note(format!("{name} {}", r.bracket));
            }
            Err(e) => c.expect(false, format!("{name}: {e}")),
        }
    }
    c.within("runtime", start, seconds(5));
    c
}

fn ratio_oracle(o: &mut Oracle, x: f64) -> f64 {
    let xb = o.num(x);
    let t = o.tan(&xb);
    let excess = o.div(&o.mul(&o.int(3), &o.sub(&t, &xb)), &o.powi(&xb, 3));
    let num = o.ln(&excess);
    let den = o.ln(&o.div(&t, &xb));
    let r = o.div(&num, &den);
    o.value(&r)
}

fn criterion_7() -> Checks {
    let mut c = Checks::default();
    let mut o = Oracle::default();
    match exponent_ratio(0.01, DEFAULT_BITS) {
        Ok(s) => {
            c.expect((1.1999..=1.2001).contains(&s.phi), format!("phi(0.01) = {}", s.phi));
            let want = ratio_oracle(&mut o, 0.01);
            c.expect((s.phi - want).abs() < 1e-12, format!("phi(0.01) = {} vs oracle {want}", s.phi));
            c.note(format!("phi(0.01) = {:.8}", s.phi));
        }
        Err(e) => c.expect(false, e.to_string()),
    }
    let trend: Vec<f64> = [1.45, 1.50, 1.55, 1.57].iter().filter_map(|&x| exponent_ratio(x, DEFAULT_BITS).ok()).map(|s| s.phi).collect();
    c.expect(trend.len() == 4, "phi failed on the trend grid");
    c.expect(trend.windows(2).all(|w| w[0] > w[1]), format!("not decreasing: {trend:?}"));
    c.expect(trend.iter().all(|&v| v > 1.0), format!("not above 1: {trend:?}"));
    match optimality_scan(&linear_grid(1e-3, 1.5707, 1000)) {
        Ok(r) => {
            c.expect(r.samples.len() == 1000, format!("{} samples", r.samples.len()));
            let inside = r.samples.iter().all(|s| s.phi > 1.0 && s.phi < 1.2);
            c.expect(inside && r.strictly_inside, format!("range [{}, {}]", r.inf, r.sup));
            c.note(format!("grid range [{:.6}, {:.6}]", r.inf, r.sup));
        }
        Err(e) => c.expect(false, e.to_string()),
    }
    c
}

fn criterion_8() -> Checks {
    let mut c = Checks::default();
    for id in [InequalityId::BsLower, InequalityId::BsUpper, InequalityId::QiLower, InequalityId::QiUpper] {
        match certify(id, &CertifyConfig::default(), 1) {
            Ok(cert) => c.expect(cert.status == Status::Certified, format!("{id}: {}", cert.status)),
            Err(e) => c.expect(false, format!("{id}: {e}")),
        }
    }

    let mut o = Oracle::default();
    let one = o.num(1.0);
    let t1 = o.tan(&one);
    let pi = o.pi();
    let pi2 = o.mul(&pi, &pi);
    let bs_den = o.sub(&pi2, &o.int(4));
    let third = o.div(&o.int(1), &o.int(3));
    let qi_base = o.add(&one, &third);
    let two_over_pi_4 = o.powi(&o.div(&o.int(2), &pi), 4);
    let oracle = [
        o.div(&o.int(8), &bs_den),
        o.div(&pi2, &bs_den),
        o.add(&qi_base, &o.mul(&o.div(&o.int(2), &o.int(15)), &t1)),
        o.add(&qi_base, &o.mul(&two_over_pi_4, &t1)),
    ]
    .map(|v| o.value(&v));
    let tan1 = o.value(&t1);

    let ours = (|| -> tancert::Result<[f64; 4]> {
        let t = tan_enc(Interval::point(1.0))?;
        let pi = pi_enclosure();
        let den = pi.sqr() - Interval::from_int(4);
        let base = Interval::from_int(4).checked_div(&Interval::from_int(3))?;
        let two_over_pi = Interval::from_int(2).checked_div(&pi)?;
        Ok([
            Interval::from_int(8).checked_div(&den)?.mid(),
            pi.sqr().checked_div(&den)?.mid(),
            (base + Interval::from_int(2).checked_div(&Interval::from_int(15))? * t).mid(),
            (base + two_over_pi.int_pow(4) * t).mid(),
        ])
    })();
    let quoted = [1.36294, 1.68148, 1.54099, 1.58915];
    let names = ["becker-stark lower", "becker-stark upper", "qi lower", "qi upper"];
    match ours {
        Ok(ours) => {
            for i in 0..4 {
                c.expect((ours[i] - oracle[i]).abs() < 1e-12, format!("{}: {} vs oracle {}", names[i], ours[i], oracle[i]));
                c.expect(
                    (quoted[i] - oracle[i]).abs() <= 1e-5,
                    format!("{}: quoted {} vs oracle {:.9} (off by {:.2e})", names[i], quoted[i], oracle[i], (quoted[i] - oracle[i]).abs()),
                );
            }
            c.expect(oracle[0] < tan1 && tan1 < oracle[1], "becker-stark chain");
            c.expect(oracle[2] < tan1 && tan1 < oracle[3], "qi chain");
        }
        Err(e) => c.expect(false, e.to_string()),
    }
    c
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

fn random_interval(rng: &mut ChaCha8Rng) -> Interval {
    let e = rng.gen_range(-30..=30);
    let a = rng.gen_range(-1.0..1.0) * (e as f64).exp2();
    let w = match rng.gen_range(0..4) {
        0 => 0.0,
        1 => a.abs() * 1e-12,
        _ => rng.gen_range(0.0..1.0) * (rng.gen_range(-30..=30) as f64).exp2(),
    };
    Interval::new(a, a + w)
}

fn sample(rng: &mut ChaCha8Rng, v: &Interval) -> f64 {
    match rng.gen_range(0..4) {
        0 => v.lo(),
        1 => v.hi(),
        _ => (v.lo() + rng.gen_range(0.0..1.0) * (v.hi() - v.lo())).clamp(v.lo(), v.hi()),
    }
}

fn interval_containment(count: usize) -> (usize, Option<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut violations = 0;
    let mut first = None;
    for i in 0..count {
        let a = random_interval(&mut rng);
        let b = random_interval(&mut rng);
        let (x, y) = (sample(&mut rng, &a), sample(&mut rng, &b));
        let (got, want) = match i % 4 {
            0 => (a + b, exact(x) + exact(y)),
            1 => (a - b, exact(x) - exact(y)),
            2 => (a * b, exact(x) * exact(y)),
            _ => match a.checked_div(&b) {
                Ok(q) if y != 0.0 => (q, exact(x) / exact(y)),
                _ => (a * b, exact(x) * exact(y)),
            },
        };
        if !got.contains_rational(&want) {
            violations += 1;
            first.get_or_insert_with(|| format!("op {} on {a}, {b} at {x}, {y} gave {got}", i % 4));
        }
    }
    (violations, first)
}

fn enclosure_containment(count: usize) -> (usize, usize, Option<String>) {
    let mut o = Oracle::default();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut violations, mut skipped, mut first) = (0, 0, None);
    for i in 0..count {
        let lo = rng.gen_range(0.0..1.5707963);
        let w = 10f64.powf(rng.gen_range(-15.0..-2.0));
        let b = Interval::new(lo, (lo + w).min(1.5707963));
        let x = sample(&mut rng, &b);
        let xb = o.num(x);
        let (got, want) = match i % 5 {
            0 => (sin_enc(b), o.sin(&xb)),
            1 => (cos_enc(b), o.cos(&xb)),
            2 => (sinc_enc(b), o.sinc(&xb)),
            3 => (p_enc(b), o.p(&xb)),
            _ => (tan_enc(b), o.tan(&xb)),
        };
        match got {
            Ok(v) if o.contains(&v, &want) => {}
            Ok(v) => {
                violations += 1;
                first.get_or_insert_with(|| format!("function {} on {b} at {x} gave {v}", i % 5));
            }
            Err(_) => skipped += 1,
        }
    }
    (violations, skipped, first)
}

fn criterion_9() -> Checks {
    let mut c = Checks::default();
    let (v, first) = interval_containment(1_000_000);
    c.expect(v == 0, format!("{v} interval violations, first: {first:?}"));
    let (v, skipped, first) = enclosure_containment(10_000);
    c.expect(v == 0, format!("{v} enclosure violations, first: {first:?}"));
    c.expect(skipped < 100, format!("{skipped} enclosure evaluations refused"));
    c.note(format!("1000000 + 10000 checks, {skipped} refused"));
    let cfg = CertifyConfig { near_zero: false, ..CertifyConfig::default() };
    match certify(InequalityId::MainLower, &cfg, 1) {
        Ok(cert) => c.expect(cert.status == Status::Undecided, format!("guard gave {}", cert.status)),
        Err(e) => c.expect(false, e.to_string()),
    }
    c
}

fn run_certify_all(dir: &std::path::Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_tancert"))
        .args(["--threads", "8", "--out"])
        .arg(dir)
        .args(["certify", "all"])
        .output()
        .map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(format!("exit {:?}: {}", status.status.code(), String::from_utf8_lossy(&status.stderr)));
    }
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok())
        .map(|e| (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap_or_default()))
        .collect();
    files.sort();
    Ok(files)
}

fn criterion_10() -> Checks {
    let mut c = Checks::default();
    let (Ok(a), Ok(b)) = (tempfile::tempdir(), tempfile::tempdir()) else {
        c.expect(false, "cannot create temporary directories");
        return c;
    };
    match (run_certify_all(a.path()), run_certify_all(b.path())) {
        (Ok(first), Ok(second)) => {
            c.expect(first.len() == InequalityId::ALL.len(), format!("{} files written", first.len()));
            c.expect(first == second, "runs differ");
            for (name, bytes) in &first {
                let ok = std::str::from_utf8(bytes)
                    .ok()
                    .and_then(|s| Certificate::from_json(s).ok())
                    .is_some_and(|cert| cert.status == Status::Certified);
                c.expect(ok, format!("{name} is not a certified certificate"));
            }
            c.note(format!("{} files identical", first.len()));
        }
        (Err(e), _) | (_, Err(e)) => c.expect(false, e),
    }
    c
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Checks); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        let c = run();
        let notes = if c.notes.is_empty() { String::new() } else { format!(" ({})", c.notes.join(", ")) };
        if c.failures.is_empty() {
            println!("criterion {n}: PASS{notes}");
        } else {
            failed += 1;
            println!("criterion {n}: FAIL{notes}");
            for f in &c.failures {
                println!("    {f}");
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Explicit analytic inequalities: valuation estimates for γ^n − 1, the
//! lower bound for the largest primitive prime, the thresholds where they
//! are proven, and certified checks of the auxiliary estimates.
//!
//! Every comparison goes through [`Interval`] and yields a [`Verdict`].
//! Reports carry `in_proven_range`; outside that range a violation is an
//! observation, not a counterexample.

pub mod interval;
pub mod iterated;

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::{Float, Integer};
use serde::Serialize;

pub use interval::{Interval, Verdict, MIN_PRECISION};
pub use iterated::IteratedLog;

use crate::arith::{factor_u64, Divisors};
use crate::error::{domain, precondition, Error, Result};
use crate::primitive::{gamma_rank, OrderFactorizer, PrimeKind};
use crate::quadratic::{gamma_class, FrobeniusParams};
use crate::sequence::cyclo_norm;

pub const DEFAULT_PRECISION: u32 = 128;

/// Either side of a reported inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Quantity {
    Real(f64),
    Tower(IteratedLog),
}

impl Quantity {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Quantity::Real(x) => Some(*x),
            Quantity::Tower(t) => t.to_f64(),
        }
    }
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Quantity::Real(x) => write!(f, "{x}"),
            Quantity::Tower(t) => write!(f, "{t}"),
        }
    }
}

/// One inequality `lhs <= rhs` evaluated at a point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: &'static str,
    pub lhs: Quantity,
    pub rhs: Quantity,
    pub verdict: Verdict,
    /// rhs − lhs when both sides are representable.
    pub slack: Option<f64>,
    pub in_proven_range: bool,
    pub details: BTreeMap<String, String>,
}

impl BoundReport {
    fn from_intervals(name: &'static str, lhs: &Interval, rhs: &Interval, in_proven_range: bool) -> Self {
        BoundReport {
            name,
            lhs: Quantity::Real(lhs.mid_f64()),
            rhs: Quantity::Real(rhs.mid_f64()),
            verdict: lhs.le(rhs),
            slack: Some(rhs.sub(lhs).mid_f64()),
            in_proven_range,
            details: BTreeMap::new(),
        }
    }

    fn detail(mut self, key: &str, value: impl ToString) -> Self {
        self.details.insert(key.to_string(), value.to_string());
        self
    }

    /// An asserted check that did not certify.
    pub fn is_failure(&self) -> bool {
        self.in_proven_range && self.verdict != Verdict::Holds
    }
}

fn e_interval(prec: u32) -> Interval {
    Interval::from_i64(1, prec).exp()
}

/// Right side of the valuation estimate for a prime ideal of norm `norm` in
/// a field of degree d: N·exp(−0.002/d·log N/log log N)·h·log* n.
pub fn stewart_rat_bound(norm: &Interval, d: u32, height: &Interval, n: u64) -> Result<Interval> {
    let prec = norm.prec().max(height.prec());
    if norm.le(&e_interval(prec)) != Verdict::Violated {
        return Err(domain("stewart_rat_bound", format!("norm {norm} is not certified above e")));
    }
    if d == 0 || height.lo() < &0 || n == 0 {
        return Err(domain("stewart_rat_bound", "need d >= 1, h >= 0 and n >= 1"));
    }
    let log_norm = norm.ln();
    let c = Interval::from_ratio(-2, 1000 * i64::from(d), prec);
    let damp = c.mul(&log_norm).div(&log_norm.ln()).exp();
    let log_star_n = Interval::from_int(&Integer::from(n), prec).log_star();
    Ok(norm.mul(&damp).mul(height).mul(&log_star_n))
}

/// Right side of the quadratic-field estimate: p·exp(−0.001·log p/log log p)·h·log* n.
pub fn stewart_quad_bound(p: &Integer, height: &Interval, n: u64) -> Result<Interval> {
    let prec = height.prec();
    if *p < 3 {
        return Err(domain("stewart_quad_bound", format!("p = {p} is not above e")));
    }
    if height.lo() < &0 || n == 0 {
        return Err(domain("stewart_quad_bound", "need h >= 0 and n >= 1"));
    }
    let pi = Interval::from_int(p, prec);
    let log_p = pi.ln();
    let damp = Interval::from_ratio(-1, 1000, prec).mul(&log_p).div(&log_p.ln()).exp();
    let log_star_n = Interval::from_int(&Integer::from(n), prec).log_star();
    Ok(pi.mul(&damp).mul(height).mul(&log_star_n))
}

/// log n + 0.0001·log n/log log n, the logarithm of the lower bound for the
/// largest primitive prime. Needs n >= 16.
pub fn main_theorem_log_bound(n: u64, prec: u32) -> Result<Interval> {
    if n < 16 {
        return Err(domain("main_theorem_log_bound", format!("n = {n} is below 16")));
    }
    let log_n = Interval::from_int(&Integer::from(n), prec).ln();
    Ok(log_n.add(&Interval::from_ratio(1, 10_000, prec).mul(&log_n).div(&log_n.ln())))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Thresholds {
    /// exp exp(max(10^10, 3q))
    pub n0: IteratedLog,
    /// exp exp(max(10^8, 2|D_K|))
    pub p0_quad: IteratedLog,
    /// exp(80000·d·(log* d)²) at d = 2
    pub p0_rat: IteratedLog,
    pub field_discriminant: String,
}

/// exp(80000·d·(log* d)²)
pub fn p0_rat(d: u32) -> IteratedLog {
    let d = f64::from(d);
    let log_star = d.ln().max(1.0);
    IteratedLog::new(1, 80_000.0 * d * log_star * log_star)
}

pub fn thresholds(params: &FrobeniusParams) -> Thresholds {
    let q = params.q().to_f64();
    let disc = params.field_discriminant();
    let abs_disc = Integer::from(disc.abs_ref()).to_f64();
    Thresholds {
        n0: IteratedLog::new(2, (3.0 * q).max(1e10)),
        p0_quad: IteratedLog::new(2, (2.0 * abs_disc).max(1e8)),
        p0_rat: p0_rat(2),
        field_discriminant: disc.to_string(),
    }
}

/// |½·log Ψ_n − ½·φ(n)·log q| <= 5.
pub fn phin_log_check(params: &FrobeniusParams, n: u64, prec: u32) -> Result<BoundReport> {
    if n == 0 {
        return Err(precondition("phin_log_check", "n must be positive"));
    }
    let factors = factor_u64(n)?;
    let phi = crate::arith::phi_of(&factors);
    let psi = cyclo_norm(params, n);
    let half = Interval::from_ratio(1, 2, prec);
    let log_psi = Interval::from_int(&psi, prec).ln();
    let log_q = Interval::from_int(params.q(), prec).ln();
    let deviation = half.mul(&log_psi).sub(&half.mul(&Interval::from_int(&Integer::from(phi), prec)).mul(&log_q));
    let report = BoundReport::from_intervals("cyclotomic_norm_log_deviation", &deviation.abs(), &Interval::from_i64(5, prec), true);
    Ok(report.detail("n", n).detail("phi", phi).detail("deviation", deviation.mid_f64()))
}

fn ln_int(v: &Integer, prec: u32) -> Interval {
    Interval::from_int(v, prec).ln()
}

/// The divisor, prime-factor-count and totient estimates at n, given its
/// factorization (primes with exponents).
pub fn arith_inequalities_factored(factors: &[(Integer, u32)], prec: u32) -> Result<Vec<BoundReport>> {
    let n = factors.iter().fold(Integer::from(1), |acc, (p, e)| acc * Integer::from(p.pow(*e)));
    if n < 3 {
        return Err(domain("arith_inequalities", format!("n = {n} is below 3")));
    }
    let tau = factors.iter().fold(Integer::from(1), |acc, (_, e)| acc * (e + 1));
    let omega = factors.len() as i64;
    let phi = factors.iter().fold(Integer::from(1), |acc, (p, e)| {
        acc * Integer::from(p - 1u32) * Integer::from(p.pow(e - 1))
    });
    let log_n = ln_int(&n, prec);
    let loglog_n = log_n.ln();
    let log_tau = ln_int(&tau, prec);
    let omega_i = Interval::from_i64(omega, prec);
    let ln2 = Interval::from_i64(2, prec).ln();
    let big = n >= 16;
    let mut out = Vec::with_capacity(6);

    let tau_rhs = Interval::from_ratio(11, 10, prec).mul(&log_n).div(&loglog_n);
    out.push(BoundReport::from_intervals("divisor_count_upper", &log_tau, &tau_rhs, true).detail("form", "log tau(n) <= 1.1 log n / log log n"));

    let omega_rhs = Interval::from_ratio(14, 10, prec).mul(&log_n).div(&loglog_n);
    out.push(BoundReport::from_intervals("prime_factor_count_upper", &omega_i, &omega_rhs, big));

    // exact: log τ >= ω·log 2 iff τ >= 2^ω
    let geometric = omega_i.mul(&ln2);
    let mut lower = BoundReport::from_intervals("divisor_count_lower_by_omega", &geometric, &log_tau, big)
        .detail("form", "omega(n) log 2 <= log tau(n)");
    lower.verdict = if Integer::from(Integer::u_pow_u(2, omega as u32)) <= tau { Verdict::Holds } else { Verdict::Violated };
    out.push(lower);

    let exponent_cap = omega_i.mul(&log_n.div(&ln2).add(&Interval::from_i64(1, prec)).ln());
    let mut upper = BoundReport::from_intervals("divisor_count_upper_by_omega", &log_tau, &exponent_cap, big);
    if upper.verdict == Verdict::Inconclusive && factors.iter().all(|(_, e)| Integer::from(Integer::u_pow_u(2, *e)) <= n) {
        // each e + 1 <= log2 n + 1, so the product bound holds (ties occur at powers of 2)
        upper.verdict = Verdict::Holds;
    }
    out.push(upper);
    let loglog_cap = omega_i.scale(2).mul(&loglog_n);
    out.push(BoundReport::from_intervals("divisor_count_upper_by_loglog", &exponent_cap, &loglog_cap, big));

    let ten_20 = Integer::from(Integer::u_pow_u(10, 20));
    let totient_lhs = Interval::from_ratio(1, 2, prec).mul(&Interval::from_int(&n, prec)).div(&loglog_n);
    out.push(
        BoundReport::from_intervals("totient_lower", &totient_lhs, &Interval::from_int(&phi, prec), n >= ten_20)
            .detail("phi_over_n", Interval::from_int(&phi, prec).div(&Interval::from_int(&n, prec)).mid_f64()),
    );
    for r in &mut out {
        r.details.insert("n".into(), n.to_string());
    }
    Ok(out)
}

pub fn arith_inequalities(n: u64, prec: u32) -> Result<Vec<BoundReport>> {
    let factors: Vec<(Integer, u32)> = factor_u64(n)?.into_iter().map(|(p, e)| (Integer::from(p), e)).collect();
    arith_inequalities_factored(&factors, prec)
}

/// Cached evaluator of the divisor and prime-factor-count estimates for
/// exhaustive scans; agrees with [`arith_inequalities`] on those reports.
pub struct ArithScanner {
    prec: u32,
    ln2: Interval,
    one: Interval,
    tau_coeff: Interval,
    omega_coeff: Interval,
    ln_small: Vec<Option<Interval>>,
}

impl ArithScanner {
    pub const NAMES: [&'static str; 5] = [
        "divisor_count_upper",
        "prime_factor_count_upper",
        "divisor_count_lower_by_omega",
        "divisor_count_upper_by_omega",
        "divisor_count_upper_by_loglog",
    ];

    pub fn new(prec: u32) -> Self {
        ArithScanner {
            prec,
            ln2: Interval::from_i64(2, prec).ln(),
            one: Interval::from_i64(1, prec),
            tau_coeff: Interval::from_ratio(11, 10, prec),
            omega_coeff: Interval::from_ratio(14, 10, prec),
            ln_small: Vec::new(),
        }
    }

    fn ln_of(&mut self, k: u64) -> Interval {
        let i = k as usize;
        if i >= self.ln_small.len() {
            self.ln_small.resize(i + 1, None);
        }
        let prec = self.prec;
        self.ln_small[i].get_or_insert_with(|| Interval::from_int(&Integer::from(k), prec).ln()).clone()
    }

    /// Verdicts in the order of [`Self::NAMES`]; n >= 3.
    pub fn check(&mut self, n: u64, factors: &[(u64, u32)]) -> [Verdict; 5] {
        assert!(n >= 3);
        let tau: u64 = factors.iter().map(|&(_, e)| u64::from(e) + 1).product();
        let omega = factors.len() as i64;
        let log_n = Interval::from_int(&Integer::from(n), self.prec).ln();
        let loglog_n = log_n.ln();
        let log_tau = self.ln_of(tau);
        let omega_i = Interval::from_i64(omega, self.prec);

        let divisor_count_upper = log_tau.le(&self.tau_coeff.mul(&log_n).div(&loglog_n));
        let prime_factor_count_upper = omega_i.le(&self.omega_coeff.mul(&log_n).div(&loglog_n));
        let lower = if 1u64.checked_shl(omega as u32).is_some_and(|p| p <= tau) { Verdict::Holds } else { Verdict::Violated };
        let exponent_cap = omega_i.mul(&log_n.div(&self.ln2).add(&self.one).ln());
        let mut upper = log_tau.le(&exponent_cap);
        if upper == Verdict::Inconclusive && factors.iter().all(|&(_, e)| 1u64.checked_shl(e).is_some_and(|p| p <= n)) {
            upper = Verdict::Holds;
        }
        let loglog = exponent_cap.le(&omega_i.scale(2).mul(&loglog_n));
        [divisor_count_upper, prime_factor_count_upper, lower, upper, loglog]
    }
}

/// Outcome of one estimate over a range of n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RangeSummary {
    pub name: &'static str,
    pub first: u64,
    pub last: u64,
    pub checked: u64,
    /// Up to 20 witnesses each.
    pub violated: Vec<u64>,
    pub inconclusive: Vec<u64>,
    pub violated_count: u64,
    pub inconclusive_count: u64,
}

impl RangeSummary {
    fn new(name: &'static str, first: u64, last: u64) -> Self {
        RangeSummary { name, first, last, checked: 0, violated: vec![], inconclusive: vec![], violated_count: 0, inconclusive_count: 0 }
    }

    fn record(&mut self, n: u64, v: Verdict) {
        self.checked += 1;
        match v {
            Verdict::Holds | Verdict::NotApplicable => {}
            Verdict::Violated => {
                self.violated_count += 1;
                if self.violated.len() < 20 {
                    self.violated.push(n);
                }
            }
            Verdict::Inconclusive => {
                self.inconclusive_count += 1;
                if self.inconclusive.len() < 20 {
                    self.inconclusive.push(n);
                }
            }
        }
    }

    pub fn all_hold(&self) -> bool {
        self.violated_count == 0 && self.inconclusive_count == 0
    }
}

/// Every n in [n_min, n_max] against the five estimates of
/// [`ArithScanner::NAMES`]; the first applies from 3, the others from 16.
///
/// From 16 on the right-hand sides 1.1·log n/log log n, 1.4·log n/log log n,
/// log(log₂ n + 1) and log log n increase with n, so on a block [L, R] it is
/// enough to compare against their certified values at L (and the left side
/// of the last estimate at R). Any n the block bound does not settle is
/// evaluated on its own.
pub fn arith_inequalities_exhaustive(n_min: u64, n_max: u64, prec: u32) -> Result<Vec<RangeSummary>> {
    const BLOCK: u64 = 4096;
    let n_min = n_min.max(3);
    if n_max > u64::from(u32::MAX) {
        return Err(domain("arith_inequalities_exhaustive", format!("n_max = {n_max} is too large to sieve")));
    }
    let starts = [n_min, n_min.max(16), n_min.max(16), n_min.max(16), n_min.max(16)];
    let mut out: Vec<RangeSummary> =
        ArithScanner::NAMES.iter().zip(starts).map(|(name, first)| RangeSummary::new(name, first, n_max)).collect();
    if n_min > n_max {
        return Ok(out);
    }
    let sieve = crate::arith::ArithSieve::new(n_max as u32);
    let mut scanner = ArithScanner::new(prec);
    let record_all = |out: &mut Vec<RangeSummary>, n: u64, verdicts: [Verdict; 5]| {
        for (summary, v) in out.iter_mut().zip(verdicts) {
            if n >= summary.first {
                summary.record(n, v);
            }
        }
    };
    let mut n = n_min;
    while n < 16 && n <= n_max {
        let verdicts = scanner.check(n, &sieve.factor(n as u32));
        record_all(&mut out, n, verdicts);
        n += 1;
    }
    let ln2 = scanner.ln2.clone();
    let one = scanner.one.clone();
    let mut omega_caps: Vec<Interval> = Vec::new();
    while n <= n_max {
        let (lo_n, hi_n) = (n, (n + BLOCK - 1).min(n_max));
        let log_l = Interval::from_int(&Integer::from(lo_n), prec).ln();
        let loglog_l = log_l.ln();
        let tau_rhs = scanner.tau_coeff.mul(&log_l).div(&loglog_l);
        let omega_rhs = scanner.omega_coeff.mul(&log_l).div(&loglog_l);
        let cap_l = log_l.div(&ln2).add(&one).ln();
        let log_r = Interval::from_int(&Integer::from(hi_n), prec).ln();
        let cap_r = log_r.div(&ln2).add(&one).ln();
        let loglog_block = cap_r.le(&loglog_l.scale(2)) == Verdict::Holds;
        omega_caps.clear();
        for m in lo_n..=hi_n {
            let factors = sieve.factor(m as u32);
            let tau: u64 = factors.iter().map(|&(_, e)| u64::from(e) + 1).product();
            let omega = factors.len();
            let log_tau = scanner.ln_of(tau);
            while omega_caps.len() <= omega {
                let k = omega_caps.len() as i64;
                omega_caps.push(cap_l.scale(k));
            }
            let fast = [
                log_tau.hi() <= tau_rhs.lo(),
                Float::with_val(64, omega) <= *omega_rhs.lo(),
                1u64 << omega <= tau,
                log_tau.hi() <= omega_caps[omega].lo(),
                loglog_block && omega > 0,
            ];
            let verdicts = if fast.iter().all(|&ok| ok) {
                [Verdict::Holds; 5]
            } else {
                scanner.check(m, &factors)
            };
            record_all(&mut out, m, verdicts);
        }
        n = hi_n + 1;
    }
    Ok(out)
}

/// The split/inert dichotomy: with A and B the contributions
/// Σ ν_p(Ψ_n)·log p of primitive split and inert primes, reports
/// 0.4·φ(n)·log q <= max(A, B). Never in the proven range.
pub fn case_split_report(factorizer: &mut OrderFactorizer, n: u64, prec: u32) -> Result<BoundReport> {
    let params = factorizer.params().clone();
    let report = factorizer.primitive_primes(n)?;
    if let Some(err) = report.incomplete_error(&params) {
        return Err(err);
    }
    let zero = Interval::from_i64(0, prec);
    let (mut split, mut inert, mut ramified) = (zero.clone(), zero.clone(), zero);
    for rec in &report.primitive {
        let term = Interval::from_i64(i64::from(rec.nu_psi), prec).mul(&ln_int(&rec.p, prec));
        match rec.kind {
            PrimeKind::Split => split = split.add(&term),
            PrimeKind::Inert => inert = inert.add(&term),
            PrimeKind::Ramified => ramified = ramified.add(&term),
        }
    }
    let phi = crate::arith::phi_of(&factor_u64(n)?);
    let threshold = Interval::from_ratio(4, 10, prec)
        .mul(&Interval::from_int(&Integer::from(phi), prec))
        .mul(&ln_int(params.q(), prec));
    let larger = split.max(&inert);
    Ok(BoundReport::from_intervals("split_inert_dichotomy", &threshold, &larger, false)
        .detail("n", n)
        .detail("split_sum", split.mid_f64())
        .detail("inert_sum", inert.mid_f64())
        .detail("total", split.add(&inert).mid_f64())
        .detail("ramified_sum", ramified.mid_f64())
        .detail("log_psi", ln_int(&report.psi.value, prec).mid_f64()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InertRankEntry {
    pub p: String,
    pub gamma_rank: u64,
    /// n / gamma_rank
    pub index: u64,
    pub small_index: bool,
}

/// Counts the inert primes p | N_n whose index n/rank_γ(p) lies below
/// τ(n)·log n and compares the count with
/// (P/n + 1)·exp(80·log n·log log log n/(log log n)²), P the largest such prime.
pub fn pprime_bound_report(factorizer: &mut OrderFactorizer, n: u64, prec: u32) -> Result<(BoundReport, Vec<InertRankEntry>)> {
    let params = factorizer.params().clone();
    if n < 3 {
        return Err(precondition("pprime_bound_report", format!("n = {n} is below 3")));
    }
    if gamma_class(&params).is_degenerate() {
        return Err(precondition("pprime_bound_report", format!("gamma is a root of unity for {params}")));
    }
    let order = factorizer.order(n)?;
    if !order.is_complete() {
        return Err(Error::IncompleteFactorization { what: format!("N_{n} for {params}") });
    }
    let factors = factor_u64(n)?;
    let tau = crate::arith::tau_of(&factors);
    let log_n = Interval::from_int(&Integer::from(n), prec).ln();
    let cutoff = Interval::from_int(&Integer::from(tau), prec).mul(&log_n);

    let mut entries = Vec::new();
    let mut largest = Integer::new();
    let mut count = 0i64;
    for (p, _) in order.known_primes() {
        if crate::primitive::classify_prime(&params, &p).kind != PrimeKind::Inert {
            continue;
        }
        let rank = gamma_rank(&params, &p, n).expect("inert prime of N_n has gamma rank at most n");
        assert_eq!(n % rank, 0, "gamma rank {rank} of {p} does not divide {n}");
        let index = n / rank;
        let small_index = Interval::from_int(&Integer::from(index), prec).lt(&cutoff) == Verdict::Holds;
        if small_index {
            count += 1;
            if p > largest {
                largest = p.clone();
            }
        }
        entries.push(InertRankEntry { p: p.to_string(), gamma_rank: rank, index, small_index });
    }

    let loglog = log_n.ln();
    let exponent = Interval::from_i64(80, prec).mul(&log_n).mul(&loglog.ln()).div(&loglog.mul(&loglog));
    let ratio = Interval::from_int(&largest, prec).div(&Interval::from_int(&Integer::from(n), prec));
    let rhs = ratio.add(&Interval::from_i64(1, prec)).mul(&exponent.exp());

    // bookkeeping for large indices: Σ_{d | n, d >= τ(n)·log n} 1/d and τ(n)·log 2
    let mut tail = Interval::from_i64(0, prec);
    for d in Divisors::new(&factors) {
        let di = Interval::from_int(&Integer::from(d), prec);
        if di.lt(&cutoff) != Verdict::Holds {
            tail = tail.add(&Interval::from_i64(1, prec).div(&di));
        }
    }
    let tau_log2 = Interval::from_int(&Integer::from(tau), prec).mul(&Interval::from_i64(2, prec).ln());

    let report = BoundReport::from_intervals("large_inert_prime_count", &Interval::from_i64(count, prec), &rhs, false)
        .detail("n", n)
        .detail("cutoff", cutoff.mid_f64())
        .detail("largest_prime", &largest)
        .detail("inert_primes", entries.len())
        .detail("large_index_reciprocal_sum", tail.mid_f64())
        .detail("tau_log2", tau_log2.mid_f64());
    Ok((report, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::FactorBudget;
    use rug::Float;

    fn p(q: i64, a: i64) -> FrobeniusParams {
        FrobeniusParams::new(q, a).unwrap()
    }

    fn fz(q: i64, a: i64) -> OrderFactorizer {
        OrderFactorizer::new(p(q, a), FactorBudget::default())
    }

    /// Straight-line 256-bit evaluation, no interval arithmetic.
    fn oracle_rat(np: f64, d: u32, h: f64, n: u64) -> f64 {
        let prec = 256;
        let npf = Float::with_val(prec, np);
        let l = Float::with_val(prec, npf.ln_ref());
        let ll = Float::with_val(prec, l.ln_ref());
        let mut expo = Float::with_val(prec, &l / &ll);
        expo *= Float::with_val(prec, rug::Rational::from((-2, 1000 * d as i64)));
        let ls = (n as f64).ln().max(1.0);
        (Float::with_val(prec, np) * expo.exp() * Float::with_val(prec, h) * ls).to_f64()
    }

    #[test]
    fn scanner_agrees_with_reports() {
        let mut scanner = ArithScanner::new(128);
        for n in 3..3000u64 {
            let reports = arith_inequalities(n, 128).unwrap();
            let verdicts = scanner.check(n, &factor_u64(n).unwrap());
            for (name, v) in ArithScanner::NAMES.iter().zip(verdicts) {
                let r = reports.iter().find(|r| r.name == *name).unwrap();
                assert_eq!(r.verdict, v, "{name} at n={n}");
            }
        }
    }

    #[test]
    fn exhaustive_scan_agrees_with_pointwise_checks() {
        let summaries = arith_inequalities_exhaustive(3, 20_000, 128).unwrap();
        let mut scanner = ArithScanner::new(128);
        let mut expected: Vec<RangeSummary> = summaries.iter().map(|s| RangeSummary::new(s.name, s.first, s.last)).collect();
        for n in 3..=20_000u64 {
            let verdicts = scanner.check(n, &factor_u64(n).unwrap());
            for (e, v) in expected.iter_mut().zip(verdicts) {
                if n >= e.first {
                    e.record(n, v);
                }
            }
        }
        assert_eq!(summaries, expected);
        assert_eq!(summaries[0].checked, 19_998);
        assert_eq!(summaries[1].checked, 20_000 - 15);
        assert!(summaries.iter().all(RangeSummary::all_hold));
        assert!(arith_inequalities_exhaustive(10, 5, 128).unwrap().iter().all(|s| s.checked == 0));
    }

    #[test]
    fn stewart_rat_examples() {
        let np = Interval::from_f64(1e6, 128);
        let h = Interval::from_i64(1, 128);
        let b = stewart_rat_bound(&np, 2, &h, 2).unwrap();
        let expect = 1e6 * (-0.001 * 1e6f64.ln() / 1e6f64.ln().ln()).exp();
        assert!((b.mid_f64() - expect).abs() / expect < 1e-14);
        assert!(b.width_f64() / expect < 1e-30);
        assert!((b.mid_f64() - oracle_rat(1e6, 2, 1.0, 2)).abs() / expect < 1e-15);
        // log* 1 = 1 and linearity in h
        let b1 = stewart_rat_bound(&np, 2, &h, 1).unwrap();
        let b2 = stewart_rat_bound(&np, 2, &Interval::from_i64(2, 128), 1).unwrap();
        assert_eq!(b2.mid_f64(), 2.0 * b1.mid_f64());
        assert!(stewart_rat_bound(&Interval::from_f64(2.7, 128), 2, &h, 1).is_err());
    }

    #[test]
    fn stewart_quad_examples() {
        let h = Interval::from_i64(2, 128).ln().mul(&Interval::from_ratio(1, 2, 128));
        let b = stewart_quad_bound(&Integer::from(3), &h, 4).unwrap();
        let l3 = 3f64.ln();
        let expect = 3.0 * (-0.001 * l3 / l3.ln()).exp() * 0.5 * 2f64.ln() * 4f64.ln();
        assert!((b.mid_f64() - expect).abs() / expect < 1e-14);
        let zero = stewart_quad_bound(&Integer::from(3), &Interval::from_i64(0, 128), 4).unwrap();
        assert_eq!(zero.mid_f64(), 0.0);
        assert!(stewart_quad_bound(&Integer::from(2), &h, 4).is_err());
    }

    #[test]
    fn main_bound_examples() {
        let b = main_theorem_log_bound(1619, 128).unwrap();
        let l = 1619f64.ln();
        assert!((b.mid_f64() - (l + 0.0001 * l / l.ln())).abs() < 1e-13);
        assert!(main_theorem_log_bound(15, 128).is_err());
        let mut prev = main_theorem_log_bound(16, 128).unwrap();
        for n in 17..2000 {
            let cur = main_theorem_log_bound(n, 128).unwrap();
            assert!(cur.lo() > &Float::with_val(128, n).ln());
            assert_eq!(prev.le(&cur), Verdict::Holds);
            prev = cur;
        }
    }

    #[test]
    fn threshold_values() {
        let t = thresholds(&p(2, 1));
        assert_eq!(t.field_discriminant, "-7");
        assert_eq!(t.p0_quad, IteratedLog::new(2, 1e8));
        assert_eq!(t.n0, IteratedLog::new(2, 1e10));
        assert_eq!(t.p0_rat, IteratedLog::new(1, 160_000.0));
        assert!(t.p0_rat < t.p0_quad && t.p0_quad < t.n0);
        let big_q = thresholds(&p(10_000_000_000, 1));
        assert_eq!(big_q.n0, IteratedLog::new(2, 3e10));
    }

    #[test]
    fn phin_examples() {
        let r = phin_log_check(&p(2, 1), 1, 128).unwrap();
        assert!(r.lhs.as_f64().unwrap().abs() < 1e-30);
        let r = phin_log_check(&p(2, 1), 6, 128).unwrap();
        let dev: f64 = r.details["deviation"].parse().unwrap();
        assert!((dev + 2f64.ln()).abs() < 1e-15);
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(phin_log_check(&p(5, 3), 12, 128).unwrap().verdict, Verdict::Holds);
    }

    #[test]
    fn arith_examples() {
        let r = arith_inequalities(12, 128).unwrap();
        let tau = r.iter().find(|r| r.name == "divisor_count_upper").unwrap();
        assert_eq!(tau.verdict, Verdict::Holds);
        let rhs = tau.rhs.as_f64().unwrap().exp();
        assert!((rhs - 20.1).abs() < 0.1, "{rhs}");
        let r30 = arith_inequalities(30, 128).unwrap();
        let geo = r30.iter().find(|r| r.name == "divisor_count_lower_by_omega").unwrap();
        // squarefree: equality, certified as holding with zero slack
        assert_eq!(geo.verdict, Verdict::Holds);
        assert!(geo.slack.unwrap().abs() < 1e-30);
        assert!(arith_inequalities(2, 128).is_err());
    }

    #[test]
    fn totient_on_primorial() {
        let primes = crate::arith::primes_up_to(59);
        let f: Vec<(Integer, u32)> = primes.iter().map(|&p| (Integer::from(p), 1)).collect();
        let r = arith_inequalities_factored(&f, 128).unwrap();
        let tot = r.iter().find(|r| r.name == "totient_lower").unwrap();
        assert!(tot.in_proven_range);
        assert_eq!(tot.verdict, Verdict::Holds);
    }

    #[test]
    fn case_split_examples() {
        let mut f = fz(2, 1);
        let r = case_split_report(&mut f, 5, 128).unwrap();
        let a: f64 = r.details["split_sum"].parse().unwrap();
        let b: f64 = r.details["inert_sum"].parse().unwrap();
        assert!((a - 11f64.ln()).abs() < 1e-14 && b == 0.0);
        assert!(!r.in_proven_range);
        let r = case_split_report(&mut f, 4, 128).unwrap();
        assert_eq!(r.details["split_sum"], "0");
        assert_eq!(r.details["inert_sum"], "0");
    }

    #[test]
    fn pprime_examples() {
        let mut f = fz(2, 1);
        assert!(pprime_bound_report(&mut f, 2, 128).is_err());
        // N_12 = 4144 = 2^4 * 7 * 37 has no inert prime
        let (r, entries) = pprime_bound_report(&mut f, 12, 128).unwrap();
        assert_eq!(crate::sequence::group_order(f.params(), 12), 4144);
        assert!(entries.is_empty());
        assert_eq!((r.lhs, r.verdict), (Quantity::Real(0.0), Verdict::Holds));
        // N_24 = 2^5 * 3^4 * 5^2 * 7 * 37; 3 and 5 are inert with gamma ranks 4 and 6
        let (r, entries) = pprime_bound_report(&mut f, 24, 128).unwrap();
        let got: Vec<(&str, u64, u64, bool)> =
            entries.iter().map(|e| (e.p.as_str(), e.gamma_rank, e.index, e.small_index)).collect();
        assert_eq!(got, vec![("3", 4, 6, true), ("5", 6, 4, true)]);
        assert_eq!(r.lhs, Quantity::Real(2.0));
        assert_eq!(r.details["largest_prime"], "5");
        assert!(!r.in_proven_range);
        assert!(pprime_bound_report(&mut fz(2, 2), 16, 128).is_err());
    }
}

//! Primitive prime divisors of N_n, their splitting type in Q(√Δ), and the
//! valuations of γ^n − 1 at inert primes.

pub mod crt;

use std::collections::HashMap;
use std::fmt;

use rug::Integer;
use serde::Serialize;

use crate::arith::{factor_u64, kronecker, Divisors};
use crate::error::{precondition, Error, Result};
use crate::factor::{factorize, is_probable_prime, valuation, CofactorStatus, FactorBudget, FactoredInteger};
use crate::quadratic::{gamma_class, FrobeniusParams};
use crate::sequence::{cyclo_norm, group_order, order_value};

pub use crt::{crt_class, crt_class_even, prime_class, small_divisor_census, CrtClass, ParityBranch, SmallDivisorCensus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeKind {
    Split,
    Inert,
    Ramified,
}

impl PrimeKind {
    /// Residue degree of a prime ideal above p.
    pub fn residue_degree(self) -> u32 {
        match self {
            PrimeKind::Inert => 2,
            PrimeKind::Split | PrimeKind::Ramified => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PrimeKind::Split => "split",
            PrimeKind::Inert => "inert",
            PrimeKind::Ramified => "ramified",
        }
    }
}

impl fmt::Display for PrimeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeClassification {
    pub p: Integer,
    pub kind: PrimeKind,
}

impl PrimeClassification {
    /// Absolute norm p^f of a prime ideal above p.
    pub fn ideal_norm(&self) -> Integer {
        if self.kind == PrimeKind::Inert {
            Integer::from(self.p.square_ref())
        } else {
            self.p.clone()
        }
    }
}

/// Splitting type of p relative to Δ = a² − 4q: ramified when p | Δ.
pub fn classify_prime(params: &FrobeniusParams, p: &Integer) -> PrimeClassification {
    let kind = if params.delta().is_divisible(p) {
        PrimeKind::Ramified
    } else if kronecker(params.delta(), p) == 1 {
        PrimeKind::Split
    } else {
        PrimeKind::Inert
    };
    PrimeClassification { p: p.clone(), kind }
}

/// Least m <= n_max with p | N_m.
pub fn rank_of_apparition(params: &FrobeniusParams, p: &Integer, n_max: u64) -> Option<u64> {
    let q = Integer::from(params.q() % p);
    let a = Integer::from(params.a() % p);
    let mut t_prev = Integer::from(2);
    let mut t = a.clone();
    let mut q_pow = q.clone();
    for m in 1..=n_max {
        let order = Integer::from(&q_pow + 1u32) - &t;
        if order.is_divisible(p) {
            return Some(m);
        }
        let next = (Integer::from(&a * &t) - Integer::from(&q * &t_prev)) % p;
        t_prev = std::mem::replace(&mut t, next);
        q_pow *= &q;
        q_pow %= p;
    }
    None
}

/// Least m <= n_max with p | w_m = t_m² − 4q^m, i.e. the order of γ
/// modulo the primes above p when p ∤ qΔ.
pub fn gamma_rank(params: &FrobeniusParams, p: &Integer, n_max: u64) -> Option<u64> {
    if n_max == 0 {
        return None;
    }
    if params.delta().is_divisible(p) {
        return Some(1);
    }
    // w_m = Δ·U_m², so for p ∤ Δ this is the rank of p in the Lucas sequence U
    let q = Integer::from(params.q() % p);
    let a = Integer::from(params.a() % p);
    let mut u_prev = Integer::new();
    let mut u = Integer::from(1);
    for m in 1..=n_max {
        if u.is_divisible(p) {
            return Some(m);
        }
        let next = (Integer::from(&a * &u) - Integer::from(&q * &u_prev)) % p;
        u_prev = std::mem::replace(&mut u, next);
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationRecord {
    pub p: Integer,
    pub n: u64,
    /// ν_p(N_n)
    pub nu_order: u32,
    /// ν_p(Ψ_n)
    pub nu_psi: u32,
    pub rank: Option<u64>,
    pub primitive: bool,
    pub kind: PrimeKind,
}

/// Caller-owned memo of Ψ_d factorizations for one parameter set. N_n is
/// assembled from the factorizations of Ψ_d, d | n.
#[derive(Debug, Clone)]
pub struct OrderFactorizer {
    params: FrobeniusParams,
    budget: FactorBudget,
    psi: HashMap<u64, FactoredInteger>,
}

#[derive(Debug, Clone)]
pub struct PrimitiveReport {
    pub n: u64,
    pub order: FactoredInteger,
    pub psi: FactoredInteger,
    pub primitive: Vec<ValuationRecord>,
    pub nonprimitive: Vec<ValuationRecord>,
}

impl PrimitiveReport {
    /// Composite part of N_n that the budget could not split. Its prime
    /// factors have unknown primitivity.
    pub fn unresolved(&self) -> Option<&Integer> {
        (self.order.cofactor_status == CofactorStatus::CompositeUnknown).then_some(&self.order.cofactor)
    }

    pub fn is_complete(&self) -> bool {
        self.order.is_complete()
    }

    pub fn incomplete_error(&self, params: &FrobeniusParams) -> Option<Error> {
        self.unresolved().map(|_| Error::IncompleteFactorization { what: format!("N_{} for {params}", self.n) })
    }
}

impl OrderFactorizer {
    pub fn new(params: FrobeniusParams, budget: FactorBudget) -> Self {
        OrderFactorizer { params, budget, psi: HashMap::new() }
    }

    pub fn params(&self) -> &FrobeniusParams {
        &self.params
    }

    pub fn psi(&mut self, d: u64) -> &FactoredInteger {
        let (params, budget) = (&self.params, &self.budget);
        self.psi.entry(d).or_insert_with(|| factorize(&cyclo_norm(params, d), budget))
    }

    pub fn order(&mut self, n: u64) -> Result<FactoredInteger> {
        let factors = factor_u64(n)?;
        let mut divisors: Vec<u64> = Divisors::new(&factors).collect();
        divisors.sort_unstable();
        for &d in &divisors {
            self.psi(d);
        }
        let parts = divisors.iter().map(|d| &self.psi[d]);
        Ok(FactoredInteger::product(parts))
    }

    /// Every known prime of N_n with its rank, split into primitive
    /// (rank = n) and non-primitive lists.
    pub fn primitive_primes(&mut self, n: u64) -> Result<PrimitiveReport> {
        if n == 0 {
            return Err(precondition("primitive_primes", "n must be positive"));
        }
        let order = self.order(n)?;
        let psi = self.psi(n).clone();
        let mut primitive = Vec::new();
        let mut nonprimitive = Vec::new();
        for (p, _) in order.known_primes() {
            let rank = rank_of_apparition(&self.params, &p, n);
            let rec = ValuationRecord {
                nu_order: valuation(&order.value, &p),
                nu_psi: valuation(&psi.value, &p),
                primitive: rank == Some(n),
                rank,
                kind: classify_prime(&self.params, &p).kind,
                n,
                p,
            };
            debug_assert!(rec.nu_psi <= rec.nu_order);
            if rec.primitive {
                primitive.push(rec);
            } else {
                nonprimitive.push(rec);
            }
        }
        Ok(PrimitiveReport { n, order, psi, primitive, nonprimitive })
    }
}

pub fn primitive_primes(params: &FrobeniusParams, n: u64, budget: &FactorBudget) -> Result<PrimitiveReport> {
    OrderFactorizer::new(params.clone(), budget.clone()).primitive_primes(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CongruenceVerdict {
    Pass,
    SkippedRamified,
}

fn congruence_preconditions(rec: &ValuationRecord) -> Result<()> {
    if !rec.primitive {
        return Err(precondition("check_congruence", format!("{} is not primitive for n = {}", rec.p, rec.n)));
    }
    if rec.n < 3 {
        return Err(precondition("check_congruence", "n must be at least 3"));
    }
    Ok(())
}

/// N℘ ≡ 1 (mod n), which also gives N℘ >= n + 1.
pub fn check_norm_congruence(params: &FrobeniusParams, rec: &ValuationRecord) -> Result<CongruenceVerdict> {
    congruence_preconditions(rec)?;
    let class = classify_prime(params, &rec.p);
    if class.kind == PrimeKind::Ramified {
        return Ok(CongruenceVerdict::SkippedRamified);
    }
    let norm = class.ideal_norm();
    if !Integer::from(&norm - 1u32).is_divisible_u(rec.n as u32) || norm <= rec.n {
        return Err(Error::CongruenceViolation {
            p: rec.p.to_string(),
            n: rec.n,
            kind: class.kind.to_string(),
            detail: format!("norm congruence: N = {norm} is not 1 mod {}", rec.n),
        });
    }
    Ok(CongruenceVerdict::Pass)
}

/// The norm congruence together with the signed form: p ≡ 1 (mod n) for
/// split p and p ≡ −1 (mod n) for inert p.
pub fn check_congruence(params: &FrobeniusParams, rec: &ValuationRecord) -> Result<CongruenceVerdict> {
    if check_norm_congruence(params, rec)? == CongruenceVerdict::SkippedRamified {
        return Ok(CongruenceVerdict::SkippedRamified);
    }
    let kind = classify_prime(params, &rec.p).kind;
    let r = rec.p.mod_u(rec.n as u32) as u64;
    let expected = if kind == PrimeKind::Split { 1 } else { rec.n - 1 };
    if r != expected {
        return Err(Error::CongruenceViolation {
            p: rec.p.to_string(),
            n: rec.n,
            kind: kind.to_string(),
            detail: format!("signed congruence: p = {r} mod {}, expected {expected}", rec.n),
        });
    }
    Ok(CongruenceVerdict::Pass)
}

fn gamma_preconditions(op: &'static str, params: &FrobeniusParams, p: &Integer) -> Result<()> {
    if !is_probable_prime(p) {
        return Err(precondition(op, format!("{p} is not prime")));
    }
    let kind = classify_prime(params, p).kind;
    if kind != PrimeKind::Inert {
        return Err(precondition(op, format!("{p} is {kind}, not inert")));
    }
    if *p == 2 || params.q().is_divisible(p) {
        return Err(precondition(op, format!("{p} divides 2q")));
    }
    if gamma_class(params).is_degenerate() {
        return Err(precondition(op, format!("gamma is a root of unity for {params}")));
    }
    Ok(())
}

/// ν_p(γ^n − 1) for inert p ∤ 2qΔ, computed as ν_p(w_n)/2.
pub fn gamma_valuation(params: &FrobeniusParams, p: &Integer, n: u64) -> Result<u32> {
    gamma_preconditions("gamma_valuation", params, p)?;
    if n == 0 {
        return Err(precondition("gamma_valuation", "n must be positive"));
    }
    let w = order_value(params, n).w_n;
    let v = valuation(&w, p);
    assert!(v % 2 == 0, "odd valuation {v} of w_{n} at inert {p}");
    Ok(v / 2)
}

/// For an inert p ∤ 2qΔ whose γ-rank is exactly n: checks n | p + 1.
pub fn check_gamma_congruence(params: &FrobeniusParams, p: &Integer, n: u64) -> Result<CongruenceVerdict> {
    gamma_preconditions("check_gamma_congruence", params, p)?;
    if gamma_rank(params, p, n) != Some(n) {
        return Err(precondition("check_gamma_congruence", format!("{p} is not gamma-primitive for n = {n}")));
    }
    if !Integer::from(p + 1u32).is_divisible_u(n as u32) {
        return Err(Error::CongruenceViolation {
            p: p.to_string(),
            n,
            kind: PrimeKind::Inert.to_string(),
            detail: format!("gamma-primitive prime is not -1 mod {n}"),
        });
    }
    Ok(CongruenceVerdict::Pass)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiValuationEntry {
    pub p: Integer,
    pub nu_psi: u32,
    pub nu_n: u32,
    /// ν_p(Ψ_n) <= 2·ν_p(n)
    pub within_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiValuationReport {
    pub n: u64,
    pub psi: Integer,
    /// Non-primitive primes of Ψ_n, ascending.
    pub entries: Vec<PhiValuationEntry>,
    /// Product of non-primitive primes of Ψ_n that do not divide n and
    /// could not be split within the budget.
    pub unfactored: Option<Integer>,
    /// Every non-primitive p | Ψ_n has ν_p(Ψ_n) <= 2·ν_p(n).
    pub holds_for_all: bool,
    /// The bound for the non-primitive primes that divide n.
    pub holds_for_divisors_of_n: bool,
}

/// Valuations of Ψ_n at its non-primitive primes against 2·ν_p(n).
///
/// The non-primitive part of Ψ_n is isolated exactly as
/// gcd(Ψ_n, ∏_{m<n} N_m), so no full factorization of Ψ_n is needed.
pub fn nonprimitive_phi_valuation_check(
    params: &FrobeniusParams,
    n: u64,
    budget: &FactorBudget,
) -> Result<PhiValuationReport> {
    if n < 8 {
        return Err(precondition("nonprimitive_phi_valuation_check", format!("n = {n} is below 8")));
    }
    let psi = cyclo_norm(params, n);
    let mut acc = Integer::from(1);
    for m in 1..n {
        acc *= group_order(params, m);
        acc %= &psi;
    }
    let mut shared = Integer::from(psi.gcd_ref(&acc));
    if psi == 1 {
        shared = Integer::from(1);
    }
    let n_factors = factor_u64(n)?;
    let mut entries = Vec::new();
    for &(p, e) in &n_factors {
        let pi = Integer::from(p);
        if shared.is_divisible(&pi) {
            shared.remove_factor_mut(&pi);
            let nu_psi = valuation(&psi, &pi);
            entries.push(PhiValuationEntry { p: pi, nu_psi, nu_n: e, within_bound: nu_psi <= 2 * e });
        }
    }
    let holds_for_divisors_of_n = entries.iter().all(|e| e.within_bound);
    let mut unfactored = None;
    if shared > 1 {
        let f = factorize(&shared, budget);
        for (p, _) in f.known_primes() {
            let nu_psi = valuation(&psi, &p);
            entries.push(PhiValuationEntry { p, nu_psi, nu_n: 0, within_bound: false });
        }
        if f.cofactor_status == CofactorStatus::CompositeUnknown {
            unfactored = Some(f.cofactor);
        }
    }
    entries.sort_by(|x, y| x.p.cmp(&y.p));
    let holds_for_all = unfactored.is_none() && entries.iter().all(|e| e.within_bound);
    Ok(PhiValuationReport { n, psi, entries, unfactored, holds_for_all, holds_for_divisors_of_n })
}

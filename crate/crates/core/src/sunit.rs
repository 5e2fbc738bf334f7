//! Counting S-units: positive integers up to x whose prime factors all lie
//! in a finite set S, with three explicit upper estimates.

use rug::Integer;
use serde::Serialize;

use crate::bounds::interval::Interval;
use crate::error::{precondition, Error, Result};
use crate::factor::is_probable_prime;

/// Enumerations larger than this are refused.
pub const THETA_ENUMERATION_CAP: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SUnitInstance {
    x: f64,
    primes: Vec<u64>,
}

impl SUnitInstance {
    /// Sorts and deduplicates `primes`; rejects non-primes and negative or
    /// non-finite x.
    pub fn new(x: f64, mut primes: Vec<u64>) -> Result<Self> {
        if !(x.is_finite() && x >= 0.0) {
            return Err(precondition("SUnitInstance", format!("x = {x} must be finite and non-negative")));
        }
        primes.sort_unstable();
        primes.dedup();
        if let Some(bad) = primes.iter().find(|&&p| !is_probable_prime(&Integer::from(p))) {
            return Err(precondition("SUnitInstance", format!("{bad} is not prime")));
        }
        Ok(SUnitInstance { x, primes })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn k(&self) -> usize {
        self.primes.len()
    }

    fn floor_x(&self) -> u64 {
        if self.x >= u64::MAX as f64 {
            u64::MAX
        } else {
            self.x.floor() as u64
        }
    }

    /// ∏ (⌊log_p x⌋ + 1), an upper bound on the count that is cheap to get.
    fn exponent_box(&self) -> f64 {
        let x = self.floor_x().max(1) as f64;
        self.primes.iter().map(|&p| (x.ln() / (p as f64).ln()).floor() + 1.0).product()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaVariant {
    /// exp(2k·log log x), x >= 7.
    Trivial,
    /// exp(10·(log x/log* k)·log*(k·log* k/log x)), x >= 3 and p² >= k for p in S.
    LargePrimes,
    /// exp(2√k·log log x + 20·(log x/log* k)·log*(k·log* k/log x)), x >= 3.
    General,
}

impl ThetaVariant {
    pub const ALL: [ThetaVariant; 3] = [ThetaVariant::Trivial, ThetaVariant::LargePrimes, ThetaVariant::General];

    pub fn as_str(self) -> &'static str {
        match self {
            ThetaVariant::Trivial => "trivial",
            ThetaVariant::LargePrimes => "large_primes",
            ThetaVariant::General => "general",
        }
    }

    pub fn applies_to(self, inst: &SUnitInstance) -> bool {
        match self {
            ThetaVariant::Trivial => inst.x >= 7.0,
            ThetaVariant::LargePrimes => {
                inst.x >= 3.0 && inst.primes.iter().all(|&p| u128::from(p) * u128::from(p) >= inst.k() as u128)
            }
            ThetaVariant::General => inst.x >= 3.0,
        }
    }
}

impl std::str::FromStr for ThetaVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ThetaVariant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| precondition("ThetaVariant", format!("unknown variant {s:?}")))
    }
}

/// Θ(x, S) by depth-first enumeration, refusing counts above `cap`.
pub fn theta_exact_capped(inst: &SUnitInstance, cap: u64) -> Result<u64> {
    if inst.x < 1.0 {
        return Ok(0);
    }
    let mut guard = inst.exponent_box();
    if ThetaVariant::Trivial.applies_to(inst) {
        let ln_x = inst.x.ln();
        guard = guard.min((2.0 * inst.k() as f64 * ln_x.ln()).exp());
    }
    if guard > cap as f64 {
        // the guard overestimates; only a real overflow of the cap is an error
        return count_dfs(inst, cap).ok_or(Error::EnumerationTooLarge { cap });
    }
    Ok(count_dfs(inst, u64::MAX).expect("count below the guard"))
}

pub fn theta_exact(inst: &SUnitInstance) -> Result<u64> {
    theta_exact_capped(inst, THETA_ENUMERATION_CAP)
}

/// Exponent vectors visited in lexicographic order, pruned by the running
/// product. None once the count passes `cap`.
fn count_dfs(inst: &SUnitInstance, cap: u64) -> Option<u64> {
    let x = u128::from(inst.floor_x());
    let primes = &inst.primes;
    let mut count: u64 = 1;
    // (next prime index, running product)
    let mut stack: Vec<(usize, u128)> = vec![(0, 1)];
    while let Some((start, prod)) = stack.pop() {
        for (j, &p) in primes.iter().enumerate().skip(start) {
            let mut next = prod * u128::from(p);
            if next > x {
                break;
            }
            while next <= x {
                count += 1;
                if count > cap {
                    return None;
                }
                stack.push((j + 1, next));
                next *= u128::from(p);
            }
        }
    }
    Some(count)
}

/// All S-units up to x, ascending.
pub fn sunits_up_to(inst: &SUnitInstance) -> Result<Vec<u64>> {
    let count = theta_exact(inst)?;
    let x = u128::from(inst.floor_x());
    let mut out = Vec::with_capacity(count as usize);
    if inst.x >= 1.0 {
        out.push(1u64);
    }
    let mut stack: Vec<(usize, u128)> = vec![(0, 1)];
    while let Some((start, prod)) = stack.pop() {
        for (j, &p) in inst.primes.iter().enumerate().skip(start) {
            let mut next = prod * u128::from(p);
            if next > x {
                break;
            }
            while next <= x {
                out.push(next as u64);
                stack.push((j + 1, next));
                next *= u128::from(p);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Certified enclosure of the chosen upper estimate for Θ(x, S).
pub fn theta_bound_interval(inst: &SUnitInstance, variant: ThetaVariant, prec: u32) -> Result<Interval> {
    if !variant.applies_to(inst) {
        return Err(precondition(
            "theta_bound",
            format!("variant {} does not apply to x = {}, k = {}", variant.as_str(), inst.x, inst.k()),
        ));
    }
    let k = Interval::from_i64(inst.k() as i64, prec);
    let log_x = Interval::from_f64(inst.x, prec).ln();
    let loglog_x = log_x.ln();
    // (log x/log* k)·log*(k·log* k/log x)
    let tail = || {
        let ls_k = k.log_star();
        log_x.div(&ls_k).mul(&k.mul(&ls_k).div(&log_x).log_star())
    };
    let exponent = match variant {
        ThetaVariant::Trivial => k.scale(2).mul(&loglog_x),
        ThetaVariant::LargePrimes => tail().scale(10),
        ThetaVariant::General => k.sqrt().scale(2).mul(&loglog_x).add(&tail().scale(20)),
    };
    Ok(exponent.exp())
}

/// Midpoint of [`theta_bound_interval`] at 128 bits.
pub fn theta_bound(inst: &SUnitInstance, variant: ThetaVariant) -> Result<f64> {
    Ok(theta_bound_interval(inst, variant, 128)?.mid_f64())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionCount {
    /// #{a ∈ Z_{>=0}^k : a_1 + … + a_k <= ell} = C(k + ell, ell)
    pub exact: Integer,
    /// Σ_{i=0}^{ell} C(k + i, i), the count used in the large-primes estimate.
    pub stated: Integer,
}

pub fn count_bounded_compositions(k: u32, ell: u32) -> Result<CompositionCount> {
    if k == 0 {
        return Err(precondition("count_bounded_compositions", "k must be at least 1"));
    }
    let exact = Integer::from(k + ell).binomial(ell);
    let stated = (0..=ell).fold(Integer::new(), |acc, i| acc + Integer::from(k + i).binomial(i));
    assert!(exact <= stated);
    Ok(CompositionCount { exact, stated })
}

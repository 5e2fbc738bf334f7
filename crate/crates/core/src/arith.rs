//! Classical arithmetic functions: φ, τ, ω, μ, divisor lists and the
//! Kronecker symbol used to classify primes in Q(√Δ).

use rug::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{factorize, FactorBudget};

/// Materialized divisor lists are refused above this many divisors;
/// use [`Divisors`] to walk larger sets.
pub const DIVISOR_LIST_CAP: u64 = 1_000_000;

/// Largest argument accepted by [`profile`].
pub const PROFILE_MAX: u64 = 1_000_000_000_000;

/// A factorization into prime powers, primes ascending.
pub type PrimePowers = Vec<(u64, u32)>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArithProfile {
    pub n: u64,
    pub factors: PrimePowers,
    pub phi: u64,
    pub tau: u64,
    pub omega: u32,
    pub mu: i8,
    /// Sorted ascending.
    pub divisors: Vec<u64>,
}

/// Exact arithmetic profile of `n`, computed from its factorization.
pub fn profile(n: u64) -> Result<ArithProfile> {
    if n == 0 || n > PROFILE_MAX {
        return Err(crate::error::domain(
            "profile",
            format!("n = {n} outside 1..={PROFILE_MAX}"),
        ));
    }
    let factors = factor_u64(n)?;
    let tau = tau_of(&factors);
    if tau > DIVISOR_LIST_CAP {
        return Err(crate::error::domain("profile", format!("tau({n}) = {tau} exceeds the divisor list cap")));
    }
    Ok(ArithProfile {
        n,
        phi: phi_of(&factors),
        tau,
        omega: factors.len() as u32,
        mu: mu_of(&factors),
        divisors: divisors_of(&factors),
        factors,
    })
}

/// Factor a machine-size integer completely, or report the budget failure.
pub fn factor_u64(n: u64) -> Result<PrimePowers> {
    const SMALL: u64 = 1 << 12;
    if n == 0 {
        return Err(crate::error::domain("factor_u64", "cannot factor 0"));
    }
    let mut out: PrimePowers = Vec::new();
    let mut m = n;
    let mut push = |m: &mut u64, p: u64| {
        let mut e = 0;
        while *m % p == 0 {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(&mut m, 2);
    let mut p = 3;
    while p < SMALL && p * p <= m {
        push(&mut m, p);
        p += 2;
    }
    if m == 1 {
        return Ok(out);
    }
    if m < SMALL * SMALL || p * p > m {
        out.push((m, 1));
        return Ok(out);
    }
    let f = factorize(&Integer::from(m), &FactorBudget::default());
    if !f.is_fully_factored() {
        return Err(Error::FactorizationExceeded(n.to_string()));
    }
    out.extend(f.factors.iter().map(|(p, e)| (p.to_u64().expect("factor of a u64 fits in u64"), *e)));
    Ok(out)
}

pub fn phi_of(factors: &[(u64, u32)]) -> u64 {
    factors
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

pub fn tau_of(factors: &[(u64, u32)]) -> u64 {
    factors.iter().map(|&(_, e)| u64::from(e) + 1).product()
}

pub fn mu_of(factors: &[(u64, u32)]) -> i8 {
    if factors.iter().any(|&(_, e)| e > 1) {
        0
    } else if factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All divisors, sorted ascending.
pub fn divisors_of(factors: &[(u64, u32)]) -> Vec<u64> {
    let mut out: Vec<u64> = Divisors::new(factors).collect();
    out.sort_unstable();
    out
}

/// Unordered walk over the divisors of a factored integer, one exponent
/// vector at a time. Memory use is independent of τ(n).
#[derive(Debug, Clone)]
pub struct Divisors<'a> {
    factors: &'a [(u64, u32)],
    exps: Vec<u32>,
    current: u64,
    done: bool,
}

impl<'a> Divisors<'a> {
    pub fn new(factors: &'a [(u64, u32)]) -> Self {
        Divisors { factors, exps: vec![0; factors.len()], current: 1, done: false }
    }
}

impl Iterator for Divisors<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.done {
            return None;
        }
        let out = self.current;
        // odometer step
        let mut i = 0;
        loop {
            if i == self.factors.len() {
                self.done = true;
                break;
            }
            let (p, e) = self.factors[i];
            if self.exps[i] < e {
                self.exps[i] += 1;
                self.current *= p;
                break;
            }
            self.current /= p.pow(self.exps[i]);
            self.exps[i] = 0;
            i += 1;
        }
        Some(out)
    }
}

/// Σ_{d | n} μ(d): 1 for n = 1 and 0 otherwise.
pub fn mobius_sum_check(n: u64) -> Result<i64> {
    let factors = factor_u64(n)?;
    Ok(Divisors::new(&factors)
        .map(|d| {
            let fd = factors
                .iter()
                .filter(|&&(p, _)| d % p == 0)
                .map(|&(p, _)| (p, if d % (p * p) == 0 { 2 } else { 1 }))
                .collect::<Vec<_>>();
            i64::from(mu_of(&fd))
        })
        .sum())
}

/// Least non-negative residue of `a` modulo `m != 0`.
pub fn mod_euc(a: &Integer, m: &Integer) -> Integer {
    let mut r = Integer::from(a % m);
    if r < 0 {
        r += m.clone().abs();
    }
    r
}

/// Jacobi symbol (a / m) for odd positive m.
pub fn jacobi(a: &Integer, m: &Integer) -> i32 {
    assert!(m.is_odd() && *m > 0, "jacobi needs an odd positive modulus");
    let mut a = mod_euc(a, m);
    let mut m = m.clone();
    let mut sign = 1;
    while a != 0 {
        let tz = a.find_one(0).unwrap_or(0);
        if tz > 0 {
            a >>= tz;
            let m8 = m.mod_u(8);
            if tz % 2 == 1 && (m8 == 3 || m8 == 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a.mod_u(4) == 3 && m.mod_u(4) == 3 {
            sign = -sign;
        }
        a %= &m;
    }
    if m == 1 {
        sign
    } else {
        0
    }
}

/// Kronecker symbol (d / p) for a prime p. At p = 2 the value is 0 for even
/// d and ±1 by d mod 8 otherwise.
pub fn kronecker(d: &Integer, p: &Integer) -> i32 {
    if *p == 2 {
        if d.is_even() {
            return 0;
        }
        let r = mod_euc(d, &Integer::from(8)).to_u32().unwrap();
        return if r == 1 || r == 7 { 1 } else { -1 };
    }
    jacobi(d, p)
}

/// Prime sieve of Eratosthenes up to and including `limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Smallest-prime-factor sieve for exhaustive scans over `1..=limit`.
#[derive(Debug, Clone)]
pub struct ArithSieve {
    spf: Vec<u32>,
}

impl ArithSieve {
    pub fn new(limit: u32) -> Self {
        let limit = limit as usize;
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        ArithSieve { spf }
    }

    pub fn limit(&self) -> u32 {
        (self.spf.len() - 1) as u32
    }

    pub fn factor(&self, mut n: u32) -> PrimePowers {
        assert!(n >= 1 && n <= self.limit());
        let mut out: PrimePowers = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize];
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((u64::from(p), e));
        }
        out
    }
}

//! Residue classes of primes p with n | p² − 1, sorted by how n splits
//! between p − 1 and p + 1.

use rug::Integer;
use serde::Serialize;

use crate::arith::{factor_u64, tau_of, Divisors};
use crate::bounds::interval::{Interval, Verdict};
use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityBranch {
    /// n odd, classes modulo n.
    Odd,
    /// n even and p ≡ 3 (mod 4), classes modulo n/2 with d odd.
    ThreeMod4,
    /// n even and p ≡ 1 (mod 4), classes modulo n/2 with (n/2)/d odd.
    OneMod4,
}

/// The residue r (mod modulus) with r ≡ 1 (mod d) and r ≡ −1 (mod modulus/d).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CrtClass {
    pub n: u64,
    pub d: u64,
    pub residue: u64,
    pub modulus: u64,
    pub branch: ParityBranch,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn inverse_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (i128::from(m), i128::from(a % m));
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(i128::from(m)) as u64
}

/// Solves r ≡ 1 (mod d), r ≡ −1 (mod m/d) for a unitary divisor d of m.
fn solve(m: u64, d: u64) -> u64 {
    let e = m / d;
    // r = 1 + d·k with d·k ≡ −2 (mod e)
    let k = if e == 1 {
        0
    } else {
        let minus_two = (e - 2 % e) % e;
        (u128::from(minus_two) * u128::from(inverse_mod(d, e)) % u128::from(e)) as u64
    };
    ((1 + u128::from(d) * u128::from(k)) % u128::from(m)) as u64
}

fn check_unitary(m: u64, d: u64) -> Result<()> {
    if d == 0 || m % d != 0 {
        return Err(domain("crt_class", format!("{d} does not divide {m}")));
    }
    if gcd(d, m / d) != 1 {
        return Err(Error::NotUnitary { d, modulus: m });
    }
    Ok(())
}

/// Class of the primes with p ≡ 1 (mod d) and p ≡ −1 (mod n/d), for odd n.
pub fn crt_class(n: u64, d: u64) -> Result<CrtClass> {
    if n % 2 == 0 {
        return Err(domain("crt_class", format!("n = {n} is even; use crt_class_even")));
    }
    check_unitary(n, d)?;
    Ok(CrtClass { n, d, residue: solve(n, d), modulus: n, branch: ParityBranch::Odd })
}

/// Even-n class modulo n/2 for the given branch.
pub fn crt_class_even(n: u64, d: u64, branch: ParityBranch) -> Result<CrtClass> {
    if n == 0 || n % 2 == 1 {
        return Err(domain("crt_class_even", format!("n = {n} is not a positive even number")));
    }
    let m = n / 2;
    check_unitary(m, d)?;
    match branch {
        ParityBranch::Odd => return Err(domain("crt_class_even", "the odd branch needs odd n")),
        ParityBranch::ThreeMod4 if d % 2 == 0 => {
            return Err(domain("crt_class_even", format!("d = {d} must be odd when p = 3 mod 4")))
        }
        ParityBranch::OneMod4 if (m / d) % 2 == 0 => {
            return Err(domain("crt_class_even", format!("n/2d = {} must be odd when p = 1 mod 4", m / d)))
        }
        _ => {}
    }
    Ok(CrtClass { n, d, residue: solve(m, d), modulus: m, branch })
}

/// The class of an odd prime p with n | p² − 1: the branch follows the
/// parity of n and p mod 4, and d is the part of the modulus dividing p − 1
/// (or (p − 1)/2 when p ≡ 3 mod 4).
pub fn prime_class(n: u64, p: u64) -> Result<CrtClass> {
    if n == 0 || p % 2 == 0 || (u128::from(p) * u128::from(p) - 1) % u128::from(n) != 0 {
        return Err(domain("prime_class", format!("need odd p with n | p^2 - 1 (n = {n}, p = {p})")));
    }
    let class = if n % 2 == 1 {
        crt_class(n, gcd(p - 1, n))?
    } else if p % 4 == 3 {
        crt_class_even(n, gcd((p - 1) / 2, n / 2), ParityBranch::ThreeMod4)?
    } else {
        crt_class_even(n, gcd(p - 1, n / 2), ParityBranch::OneMod4)?
    };
    debug_assert_eq!(p % class.modulus, class.residue);
    Ok(class)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmallDivisorCensus {
    pub n: u64,
    pub tau: u64,
    /// #{d | n : d < τ(n)·log n}
    pub count: u64,
    pub cutoff: f64,
    /// 70·log n·log log log n / (log log n)²
    pub log_bound: f64,
    pub bound: f64,
    /// Certified comparison count <= bound.
    pub verdict: Verdict,
    /// Always false: the estimate is only proven for astronomically large n.
    pub in_proven_range: bool,
}

/// Counts the divisors of n below τ(n)·log n and evaluates the upper
/// estimate exp(70·log n·log log log n/(log log n)²). Needs n >= 3.
pub fn small_divisor_census(n: u64, prec: u32) -> Result<SmallDivisorCensus> {
    if n < 3 {
        return Err(domain("small_divisor_census", format!("n = {n} is below 3")));
    }
    let factors = factor_u64(n)?;
    let tau = tau_of(&factors);
    let log_n = Interval::from_int(&Integer::from(n), prec).ln();
    let cutoff = Interval::from_int(&Integer::from(tau), prec).mul(&log_n);
    let mut count = 0;
    for d in Divisors::new(&factors) {
        match Interval::from_int(&Integer::from(d), prec).lt(&cutoff) {
            Verdict::Holds => count += 1,
            Verdict::Violated => {}
            other => panic!("cannot certify {d} against the cutoff ({other})"),
        }
    }
    let lnln = log_n.ln();
    let lnlnln = lnln.ln();
    let log_bound = Interval::from_i64(70, prec).mul(&log_n).mul(&lnlnln).div(&lnln.mul(&lnln));
    let verdict = Interval::from_int(&Integer::from(count), prec).ln().le(&log_bound);
    Ok(SmallDivisorCensus {
        n,
        tau,
        count,
        cutoff: cutoff.mid_f64(),
        log_bound: log_bound.mid_f64(),
        bound: log_bound.mid_f64().exp(),
        verdict,
        in_proven_range: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(modulus: u64, d: u64) -> Vec<u64> {
        (0..modulus.max(1))
            .filter(|r| r % d == 1 % d && (r + 1) % (modulus / d) == 0)
            .collect()
    }

    #[test]
    fn odd_examples() {
        assert_eq!(crt_class(15, 3).unwrap().residue, 4);
        assert_eq!(crt_class(15, 15).unwrap().residue, 1);
        assert_eq!(crt_class(15, 1).unwrap().residue, 14);
        assert_eq!(crt_class(1, 1).unwrap().residue, 0);
    }

    #[test]
    fn refusals() {
        assert_eq!(crt_class(9, 3), Err(Error::NotUnitary { d: 3, modulus: 9 }));
        assert!(crt_class(15, 4).is_err());
        assert!(crt_class(12, 3).is_err());
        assert!(crt_class_even(12, 2, ParityBranch::ThreeMod4).is_err());
        assert!(crt_class_even(12, 3, ParityBranch::OneMod4).is_err());
        assert!(crt_class_even(24, 2, ParityBranch::OneMod4).is_err());
        assert!(crt_class_even(15, 1, ParityBranch::OneMod4).is_err());
    }

    #[test]
    fn odd_brute_force() {
        for n in (1..=301u64).step_by(2) {
            for d in (1..=n).filter(|d| n % d == 0 && gcd(*d, n / d) == 1) {
                let c = crt_class(n, d).unwrap();
                assert_eq!(vec![c.residue], brute(n, d), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn prime_class_examples() {
        // 29 = -1 mod 15? no: 29 = 14 mod 15, so d = gcd(28, 15) = 1
        assert_eq!(prime_class(15, 29).unwrap().residue, 14);
        // 31 = 1 mod 15
        assert_eq!(prime_class(15, 31).unwrap().residue, 1);
        let c = prime_class(8, 7).unwrap();
        assert_eq!((c.branch, c.modulus, c.residue), (ParityBranch::ThreeMod4, 4, 3));
        let c = prime_class(12, 13).unwrap();
        assert_eq!((c.branch, c.d, c.residue), (ParityBranch::OneMod4, 6, 1));
        assert_eq!(prime_class(8, 5).unwrap().d, 4);
        assert!(prime_class(16, 5).is_err());
    }

    #[test]
    fn census_examples() {
        let c = small_divisor_census(16, 128).unwrap();
        assert_eq!((c.tau, c.count), (5, 4));
        assert!((c.cutoff - 5.0 * 16f64.ln()).abs() < 1e-12);
        let c = small_divisor_census(11, 128).unwrap();
        assert_eq!(c.count, 1);
        let c = small_divisor_census(1 << 20, 128).unwrap();
        let cutoff = 21.0 * 20.0 * 2f64.ln();
        assert_eq!(c.count, (0..=20).filter(|&k| ((1u64 << k) as f64) < cutoff).count() as u64);
        assert!(!c.in_proven_range);
        assert!(small_divisor_census(2, 128).is_err());
    }
}

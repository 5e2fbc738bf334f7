//! Frobenius traces t_n, group orders N_n = q^n + 1 − t_n, cyclotomic norms
//! Ψ_n = Φ_n(α)·Φ_n(ᾱ) and w_n = t_n² − 4q^n.

use rug::ops::Pow;
use rug::Integer;

use crate::arith::{factor_u64, mu_of, Divisors};
use crate::error::{Error, Result};
use crate::quadratic::{FrobeniusParams, QuadInt};

/// Default cap on the size of q^n handled by scans.
pub const DEFAULT_BIT_BUDGET: u64 = 4096;

/// Φ_n with coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloPoly {
    pub n: u64,
    pub coeffs: Vec<Integer>,
}

impl CycloPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Φ_n(u) in Z[α] by Horner's rule.
    pub fn eval_quad(&self, u: &QuadInt, params: &FrobeniusParams) -> QuadInt {
        let mut acc = QuadInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(u, params).add_int(c);
        }
        acc
    }

    pub fn eval(&self, t: &Integer) -> Integer {
        let mut acc = Integer::new();
        for c in self.coeffs.iter().rev() {
            acc *= t;
            acc += c;
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderValue {
    pub n: u64,
    pub t_n: Integer,
    pub order: Integer,
    pub w_n: Integer,
}

/// t_0 .. t_{n_max}: t_0 = 2, t_1 = a, t_{k+1} = a·t_k − q·t_{k−1}.
pub fn trace_seq(params: &FrobeniusParams, n_max: u64) -> Vec<Integer> {
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(Integer::from(2));
    if n_max >= 1 {
        out.push(params.a().clone());
    }
    for k in 2..=n_max as usize {
        let next = Integer::from(params.a() * &out[k - 1]) - Integer::from(params.q() * &out[k - 2]);
        out.push(next);
    }
    out
}

/// Lucas U_0 .. U_{n_max} with U_n = (α^n − ᾱ^n)/(α − ᾱ).
pub fn lucas_u_seq(params: &FrobeniusParams, n_max: u64) -> Vec<Integer> {
    let mut out = vec![Integer::from(0), Integer::from(1)];
    for k in 2..=n_max as usize {
        let next = Integer::from(params.a() * &out[k - 1]) - Integer::from(params.q() * &out[k - 2]);
        out.push(next);
    }
    out.truncate(n_max as usize + 1);
    out
}

pub fn order_value(params: &FrobeniusParams, n: u64) -> OrderValue {
    assert!(n >= 1);
    let t_n = trace_seq(params, n).pop().unwrap();
    let qn = Integer::from(params.q().pow(n as u32));
    let order = Integer::from(&qn + 1u32) - &t_n;
    let w_n = Integer::from(t_n.square_ref()) - qn * 4u32;
    OrderValue { n, t_n, order, w_n }
}

/// N_n = q^n + 1 − t_n.
pub fn group_order(params: &FrobeniusParams, n: u64) -> Integer {
    order_value(params, n).order
}

/// N_n as the norm of α^n − 1.
pub fn group_order_by_norm(params: &FrobeniusParams, n: u64) -> Integer {
    QuadInt::alpha().pow(n, params).add_int(&Integer::from(-1)).norm(params)
}

/// Error unless q^n fits in `max_bits` bits.
pub fn check_bit_budget(params: &FrobeniusParams, n: u64, max_bits: u64) -> Result<()> {
    let bits = (u64::from(params.q().significant_bits()) - 1) * n + 1;
    let exact = if bits <= max_bits + 1 {
        u64::from(Integer::from(params.q().pow(n as u32)).significant_bits())
    } else {
        bits
    };
    if exact > max_bits {
        return Err(Error::BitBudgetExceeded { n, bits: exact, max_bits });
    }
    Ok(())
}

/// Φ_n(t) as the exact product ∏_{d|n} (1 − t^d)^{μ(n/d)} (n > 1), evaluated
/// on power series truncated at degree φ(n).
pub fn cyclotomic_poly(n: u64) -> CycloPoly {
    assert!(n >= 1, "cyclotomic_poly needs n >= 1");
    if n == 1 {
        return CycloPoly { n, coeffs: vec![Integer::from(-1), Integer::from(1)] };
    }
    let factors = factor_u64(n).expect("n is small enough to factor");
    let phi = crate::arith::phi_of(&factors) as usize;
    let mut steps: Vec<(usize, i8)> = Divisors::new(&factors)
        .filter_map(|d| {
            let m = mu_of(&factor_u64(n / d).unwrap());
            (m != 0 && (d as usize) <= phi).then_some((d as usize, m))
        })
        .collect();
    // multiplications first keeps the intermediate series polynomial-sized
    steps.sort_by_key(|&(d, m)| (-m, d));
    let coeffs = series_small(phi, &steps).unwrap_or_else(|| series_big(phi, &steps));
    CycloPoly { n, coeffs }
}

fn series_small(phi: usize, steps: &[(usize, i8)]) -> Option<Vec<Integer>> {
    let mut c = vec![0i128; phi + 1];
    c[0] = 1;
    for &(d, m) in steps {
        if m > 0 {
            for i in (d..=phi).rev() {
                c[i] = c[i].checked_sub(c[i - d])?;
            }
        } else {
            for i in d..=phi {
                c[i] = c[i].checked_add(c[i - d])?;
            }
        }
    }
    Some(c.into_iter().map(Integer::from).collect())
}

fn series_big(phi: usize, steps: &[(usize, i8)]) -> Vec<Integer> {
    let mut c = vec![Integer::new(); phi + 1];
    c[0] = Integer::from(1);
    for &(d, m) in steps {
        if m > 0 {
            for i in (d..=phi).rev() {
                let prev = c[i - d].clone();
                c[i] -= prev;
            }
        } else {
            for i in d..=phi {
                let prev = c[i - d].clone();
                c[i] += prev;
            }
        }
    }
    c
}

/// Ψ_n = |Φ_n(α)|², by evaluating Φ_n at α in Z[α] and taking the norm.
pub fn cyclo_norm(params: &FrobeniusParams, n: u64) -> Integer {
    cyclotomic_poly(n).eval_quad(&QuadInt::alpha(), params).norm(params)
}

/// Checks N_n = ∏_{d|n} Ψ_d and returns the Ψ_d for d | n ascending.
pub fn order_product_check(params: &FrobeniusParams, n: u64) -> Result<Vec<(u64, Integer)>> {
    let factors = factor_u64(n)?;
    let mut divs: Vec<u64> = Divisors::new(&factors).collect();
    divs.sort_unstable();
    let psis: Vec<(u64, Integer)> = divs.into_iter().map(|d| (d, cyclo_norm(params, d))).collect();
    let product = psis.iter().fold(Integer::from(1), |acc, (_, psi)| acc * psi);
    let order = group_order(params, n);
    if product != order {
        return Err(Error::Mismatch {
            op: "order_product_check",
            detail: format!("N_{n} = {order} but the product of cyclotomic norms is {product}"),
        });
    }
    Ok(psis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(q: i64, a: i64) -> FrobeniusParams {
        FrobeniusParams::new(q, a).unwrap()
    }

    /// Recursive definition Φ_n = (t^n − 1) / ∏_{d|n, d<n} Φ_d by long division.
    fn cyclotomic_by_division(n: u64) -> Vec<i64> {
        let mut memo: Vec<Vec<i64>> = vec![Vec::new(); n as usize + 1];
        for m in 1..=n {
            if n % m != 0 {
                continue;
            }
            let mut num = vec![0i64; m as usize + 1];
            num[0] = -1;
            num[m as usize] = 1;
            for d in 1..m {
                if m % d == 0 {
                    num = divide(&num, &memo[d as usize]);
                }
            }
            memo[m as usize] = num;
        }
        memo[n as usize].clone()
    }

    fn divide(num: &[i64], den: &[i64]) -> Vec<i64> {
        let mut rem = num.to_vec();
        let dd = den.len() - 1;
        let mut quot = vec![0i64; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd] / den[dd];
            quot[i] = c;
            for j in 0..=dd {
                rem[i + j] -= c * den[j];
            }
        }
        assert!(rem.iter().all(|&r| r == 0));
        quot
    }

    #[test]
    fn trace_examples() {
        let t = trace_seq(&p(2, 1), 5);
        assert_eq!(t, [2, 1, -3, -5, 1, 11].map(Integer::from).to_vec());
        assert_eq!(trace_seq(&p(7, 3), 0), vec![Integer::from(2)]);
    }

    #[test]
    fn trace_matches_complex_powers() {
        // α = (1 + i√7)/2
        let (re, im) = (0.5f64, 7f64.sqrt() / 2.0);
        let t = trace_seq(&p(2, 1), 20);
        let (mut zr, mut zi) = (1.0f64, 0.0f64);
        for (k, tk) in t.iter().enumerate() {
            assert_eq!(Integer::from((2.0 * zr).round() as i64), *tk, "k = {k}");
            (zr, zi) = (zr * re - zi * im, zr * im + zi * re);
        }
    }

    #[test]
    fn group_order_examples() {
        let pr = p(2, 1);
        assert_eq!(group_order(&pr, 1), 2);
        assert_eq!(group_order(&pr, 3), 14);
        assert_eq!(group_order(&pr, 4), 16);
        assert_eq!(group_order_by_norm(&pr, 3), 14);
        assert_eq!(group_order(&pr, 11), 1982);
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic_poly(1).coeffs, [-1, 1].map(Integer::from).to_vec());
        assert_eq!(cyclotomic_poly(2).coeffs, [1, 1].map(Integer::from).to_vec());
        assert_eq!(cyclotomic_poly(6).coeffs, [1, -1, 1].map(Integer::from).to_vec());
        let c105 = cyclotomic_poly(105);
        assert_eq!(c105.degree(), 48);
        let first_big = c105.coeffs.iter().position(|c| c.clone().abs() > 1).unwrap();
        assert_eq!(c105.coeffs[first_big], -2);
        assert_eq!(first_big, 7);
    }

    #[test]
    fn cyclotomic_matches_recursive_division() {
        for n in 1..=200u64 {
            let expect: Vec<Integer> = cyclotomic_by_division(n).into_iter().map(Integer::from).collect();
            assert_eq!(cyclotomic_poly(n).coeffs, expect, "n = {n}");
        }
    }

    #[test]
    fn cyclotomic_product_is_t_n_minus_1() {
        for n in 1..=60u64 {
            let mut prod = vec![Integer::from(1)];
            for d in (1..=n).filter(|d| n % d == 0) {
                let c = cyclotomic_poly(d).coeffs;
                let mut next = vec![Integer::new(); prod.len() + c.len() - 1];
                for (i, a) in prod.iter().enumerate() {
                    for (j, b) in c.iter().enumerate() {
                        next[i + j] += Integer::from(a * b);
                    }
                }
                prod = next;
            }
            let mut expect = vec![Integer::new(); n as usize + 1];
            expect[0] = Integer::from(-1);
            expect[n as usize] = Integer::from(1);
            assert_eq!(prod, expect, "n = {n}");
        }
    }

    #[test]
    fn cyclo_norm_examples() {
        let pr = p(2, 1);
        assert_eq!(cyclo_norm(&pr, 1), 2);
        assert_eq!(cyclo_norm(&pr, 6), 1);
        assert_eq!(cyclotomic_poly(6).eval_quad(&QuadInt::alpha(), &pr), QuadInt::new(-1, 0));
        assert_eq!(cyclo_norm(&pr, 5), 11);
    }

    #[test]
    fn order_product_examples() {
        let pr = p(2, 1);
        let psis = order_product_check(&pr, 6).unwrap();
        let vals: Vec<Integer> = psis.into_iter().map(|(_, v)| v).collect();
        assert_eq!(vals, [2, 4, 7, 1].map(Integer::from).to_vec());
        assert_eq!(order_product_check(&pr, 1).unwrap(), vec![(1, Integer::from(2))]);
        assert!(order_product_check(&p(3, 1), 4).is_ok());
    }

    #[test]
    fn w_n_is_delta_times_lucas_square() {
        for (q, a) in [(2, 1), (3, -2), (25, 7), (13, 0)] {
            let pr = p(q, a);
            let u = lucas_u_seq(&pr, 30);
            for n in 1..=30u64 {
                let ov = order_value(&pr, n);
                assert_eq!(ov.w_n, Integer::from(pr.delta() * u[n as usize].clone().square()));
            }
        }
    }

    #[test]
    fn bit_budget() {
        let pr = p(2, 1);
        assert!(check_bit_budget(&pr, 4095, 4096).is_ok());
        assert!(check_bit_budget(&pr, 4096, 4096).is_err());
        assert!(check_bit_budget(&p(25, 1), 900, 4096).is_err());
    }
}

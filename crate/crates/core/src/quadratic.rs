//! Arithmetic in the order Z[α], α² = aα − q, and the heights of α and
//! γ = ᾱ/α.

use std::fmt;

use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::factor::{factorize, FactorBudget};

/// Field size `q` and Frobenius trace `a` with q >= 2 and a² < 4q.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrobeniusParams {
    q: Integer,
    a: Integer,
    delta: Integer,
}

impl FrobeniusParams {
    pub fn new(q: impl Into<Integer>, a: impl Into<Integer>) -> Result<Self> {
        let (q, a) = (q.into(), a.into());
        let invalid = |reason| Error::InvalidParams { q: q.to_string(), a: a.to_string(), reason };
        if q < 2 {
            return Err(invalid("q must be at least 2"));
        }
        let delta = Integer::from(a.square_ref()) - Integer::from(&q * 4u32);
        if delta >= 0 {
            return Err(invalid("a^2 must be smaller than 4q"));
        }
        Ok(FrobeniusParams { q, a, delta })
    }

    pub fn q(&self) -> &Integer {
        &self.q
    }

    pub fn a(&self) -> &Integer {
        &self.a
    }

    /// a² − 4q, always negative.
    pub fn delta(&self) -> &Integer {
        &self.delta
    }

    /// Every trace a with a² < 4q, ascending.
    pub fn admissible_traces(q: u64) -> Vec<i64> {
        if q < 2 {
            return Vec::new();
        }
        // largest a with a^2 < 4q
        let mut bound = (4.0 * q as f64).sqrt() as i64 + 1;
        while (bound as i128) * (bound as i128) >= 4 * q as i128 {
            bound -= 1;
        }
        (-bound..=bound).collect()
    }

    /// Discriminant of the quadratic field Q(√Δ).
    pub fn field_discriminant(&self) -> Integer {
        let abs = Integer::from(self.delta.abs_ref());
        let f = factorize(&abs, &FactorBudget::default());
        assert!(f.is_complete(), "|a^2 - 4q| could not be factored");
        let mut core = Integer::from(-1);
        for (p, e) in f.known_primes() {
            if e % 2 == 1 {
                core *= p;
            }
        }
        if core.mod_u(4) == 1 {
            core
        } else {
            core * 4u32
        }
    }
}

impl fmt::Display for FrobeniusParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(q = {}, a = {})", self.q, self.a)
    }
}

/// x + y·α in Z[α].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub x: Integer,
    pub y: Integer,
}

impl QuadInt {
    pub fn new(x: impl Into<Integer>, y: impl Into<Integer>) -> Self {
        QuadInt { x: x.into(), y: y.into() }
    }

    pub fn zero() -> Self {
        QuadInt::new(0, 0)
    }

    pub fn one() -> Self {
        QuadInt::new(1, 0)
    }

    pub fn alpha() -> Self {
        QuadInt::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn add(&self, rhs: &QuadInt) -> QuadInt {
        QuadInt { x: Integer::from(&self.x + &rhs.x), y: Integer::from(&self.y + &rhs.y) }
    }

    pub fn sub(&self, rhs: &QuadInt) -> QuadInt {
        QuadInt { x: Integer::from(&self.x - &rhs.x), y: Integer::from(&self.y - &rhs.y) }
    }

    pub fn add_int(&self, c: &Integer) -> QuadInt {
        QuadInt { x: Integer::from(&self.x + c), y: self.y.clone() }
    }

    /// Product reduced on the basis (1, α).
    pub fn mul(&self, rhs: &QuadInt, params: &FrobeniusParams) -> QuadInt {
        // (x1 + y1 α)(x2 + y2 α) = x1x2 + (x1y2 + x2y1) α + y1y2 (aα − q)
        let yy = Integer::from(&self.y * &rhs.y);
        let x = Integer::from(&self.x * &rhs.x) - Integer::from(&yy * &params.q);
        let y = Integer::from(&self.x * &rhs.y) + Integer::from(&rhs.x * &self.y) + yy * &params.a;
        QuadInt { x, y }
    }

    pub fn pow(&self, mut k: u64, params: &FrobeniusParams) -> QuadInt {
        let mut base = self.clone();
        let mut acc = QuadInt::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, params);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, params);
            }
        }
        acc
    }

    /// Complex conjugate: ᾱ = a − α.
    pub fn conj(&self, params: &FrobeniusParams) -> QuadInt {
        QuadInt { x: Integer::from(&self.x + Integer::from(&self.y * &params.a)), y: Integer::from(-&self.y) }
    }

    /// (x² + a·x·y + q·y², 2x + a·y)
    pub fn norm_trace(&self, params: &FrobeniusParams) -> (Integer, Integer) {
        let norm = Integer::from(self.x.square_ref())
            + Integer::from(&params.a * &self.x) * &self.y
            + Integer::from(&params.q * &self.y) * &self.y;
        let trace = Integer::from(&self.x * 2u32) + Integer::from(&params.a * &self.y);
        (norm, trace)
    }

    pub fn norm(&self, params: &FrobeniusParams) -> Integer {
        self.norm_trace(params).0
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}α", self.x, self.y)
    }
}

/// Root-of-unity status and logarithmic height of γ = ᾱ/α.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaClass {
    /// Multiplicative order of γ, or 0 when γ is not a root of unity.
    pub order_of_unity: u32,
    /// Leading coefficient of the primitive minimal polynomial of γ, which
    /// is its Mahler measure since both roots lie on the unit circle.
    pub mahler_measure: Integer,
    /// ½·log(mahler_measure).
    pub height: f64,
}

impl GammaClass {
    pub fn is_degenerate(&self) -> bool {
        self.order_of_unity != 0
    }
}

pub fn gamma_class(params: &FrobeniusParams) -> GammaClass {
    let (q, a) = (params.q(), params.a());
    let a2 = Integer::from(a.square_ref());
    let order_of_unity = if a2 == 0 {
        2
    } else if a2 == *q {
        3
    } else if a2 == Integer::from(q * 2u32) {
        4
    } else if a2 == Integer::from(q * 3u32) {
        6
    } else {
        0
    };
    // γ is a root of q x² − (a² − 2q) x + q
    let middle = a2 - Integer::from(q * 2u32);
    let content = Integer::from(q.gcd_ref(&middle));
    let mahler_measure = Integer::from(q / &content);
    let height = 0.5 * ln_integer(&mahler_measure);
    assert!(height <= 0.5 * ln_integer(q) + 1e-12);
    assert!(Float::with_val(64, height) <= Float::with_val(64, q) * 2u32);
    assert_eq!(height == 0.0, order_of_unity != 0, "height vanishes exactly at roots of unity");
    GammaClass { order_of_unity, mahler_measure, height }
}

/// h(α) = ½·log q.
pub fn height_alpha(params: &FrobeniusParams) -> f64 {
    0.5 * ln_integer(params.q())
}

/// Natural logarithm of a positive integer, correctly rounded to f64.
pub fn ln_integer(n: &Integer) -> f64 {
    assert!(*n > 0, "log of a non-positive integer");
    Float::with_val(n.significant_bits().max(64) + 64, n).ln().to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(q: i64, a: i64) -> FrobeniusParams {
        FrobeniusParams::new(q, a).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(FrobeniusParams::new(1, 0).is_err());
        assert!(FrobeniusParams::new(4, 4).is_err());
        assert!(FrobeniusParams::new(4, -4).is_err());
        assert!(FrobeniusParams::new(4, 3).is_ok());
    }

    #[test]
    fn admissible_traces_match_definition() {
        for q in 2..200u64 {
            let expect: Vec<i64> = (-40..=40).filter(|a: &i64| (a * a) < 4 * q as i64).collect();
            assert_eq!(FrobeniusParams::admissible_traces(q), expect);
        }
    }

    #[test]
    fn mul_examples() {
        let pr = p(2, 1);
        let u = QuadInt::new(5, -3);
        assert_eq!(QuadInt::one().mul(&u, &pr), u);
        assert_eq!(QuadInt::alpha().mul(&QuadInt::alpha(), &pr), QuadInt::new(-2, 1));
        let am1 = QuadInt::new(-1, 1);
        assert_eq!(am1.mul(&am1.conj(&pr), &pr), QuadInt::new(2, 0));
    }

    #[test]
    fn pow_examples() {
        let pr = p(2, 1);
        assert_eq!(QuadInt::alpha().pow(1, &pr), QuadInt::alpha());
        assert_eq!(QuadInt::alpha().pow(0, &pr), QuadInt::one());
        assert_eq!(QuadInt::alpha().pow(2, &pr), QuadInt::new(-2, 1));
        let (_, t5) = QuadInt::alpha().pow(5, &pr).norm_trace(&pr);
        assert_eq!(t5, 11);
    }

    #[test]
    fn norm_trace_examples() {
        let pr = p(2, 1);
        assert_eq!(QuadInt::alpha().norm_trace(&pr), (Integer::from(2), Integer::from(1)));
        assert_eq!(QuadInt::one().norm_trace(&pr), (Integer::from(1), Integer::from(2)));
        assert_eq!(QuadInt::new(-1, 1).norm_trace(&pr), (Integer::from(2), Integer::from(-1)));
        let pr = p(7, -3);
        assert_eq!(QuadInt::alpha().norm_trace(&pr), (Integer::from(7), Integer::from(-3)));
    }

    #[test]
    fn gamma_examples() {
        let g = gamma_class(&p(2, 2));
        assert_eq!(g.order_of_unity, 4);
        assert_eq!(g.height, 0.0);

        let g = gamma_class(&p(2, 1));
        assert_eq!(g.order_of_unity, 0);
        assert_eq!(g.mahler_measure, 2);
        assert!((g.height - 0.5 * 2f64.ln()).abs() < 1e-15);

        let g = gamma_class(&p(3, 1));
        assert_eq!(g.mahler_measure, 3);
        assert!((g.height - 0.5 * 3f64.ln()).abs() < 1e-15);

        assert_eq!(gamma_class(&p(5, 0)).order_of_unity, 2);
        assert_eq!(gamma_class(&p(9, 3)).order_of_unity, 3);
        assert_eq!(gamma_class(&p(12, 6)).order_of_unity, 6);
    }

    #[test]
    fn gamma_height_against_roots() {
        // Mahler measure from the complex roots of the integer minimal polynomial
        for q in 2..40i64 {
            for a in FrobeniusParams::admissible_traces(q as u64) {
                let g = gamma_class(&p(q, a));
                let theta = (a as f64 / (2.0 * (q as f64).sqrt())).acos();
                let gamma_arg = -2.0 * theta;
                let is_root = (1..=12).any(|k| ((k as f64 * gamma_arg).cos() - 1.0).abs() < 1e-9);
                assert_eq!(g.order_of_unity != 0, is_root, "q={q} a={a}");
                assert_eq!(g.height, gamma_class(&p(q, -a)).height);
            }
        }
    }

    #[test]
    fn height_alpha_examples() {
        assert!((height_alpha(&p(2, 0)) - 0.346_573_590_279_972_6).abs() < 1e-15);
        assert!((height_alpha(&p(4, 1)) - 2f64.ln()).abs() < 1e-15);
        assert!((height_alpha(&p(9, 1)) - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn field_discriminants() {
        assert_eq!(p(2, 1).field_discriminant(), -7);
        // Δ = 1 − 12 = −11
        assert_eq!(p(3, 1).field_discriminant(), -11);
        // Δ = −8
        assert_eq!(p(2, 0).field_discriminant(), -8);
        // Δ = 4 − 20 = −16 → Q(i)
        assert_eq!(p(5, 2).field_discriminant(), -4);
        // Δ = 9 − 36 = −27 → Q(√−3)
        assert_eq!(p(9, 3).field_discriminant(), -3);
    }
}

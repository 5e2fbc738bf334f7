//! Closed real intervals with outward (directed) rounding on MPFR floats.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::ops::{AddAssignRound, DivAssignRound, MulAssignRound, SubAssignRound};
use rug::{Float, Integer, Rational};
use serde::Serialize;

/// Working precision never drops below this many bits.
pub const MIN_PRECISION: u32 = 128;

#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

/// Outcome of a certified comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    /// The enclosures overlap, so the sign of the difference is not certified.
    Inconclusive,
    NotApplicable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
            Verdict::NotApplicable => "not_applicable",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn rounded<T>(prec: u32, val: T, round: Round) -> Float
where
    Float: rug::Assign<T> + rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, val, round).0
}

impl Interval {
    fn from_bounds(lo: Float, hi: Float) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    /// Enclosure of f(x) from one correctly rounded downward evaluation:
    /// the true value lies below the next representable float.
    fn point_image(x: &Float, f: impl FnOnce(&mut Float) -> Ordering) -> Interval {
        let mut lo = x.clone();
        let exact = f(&mut lo) == Ordering::Equal;
        let mut hi = lo.clone();
        if !exact {
            hi.next_up();
        }
        Interval::from_bounds(lo, hi)
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn from_int(n: &Integer, prec: u32) -> Self {
        let prec = prec.max(MIN_PRECISION);
        Interval::from_bounds(rounded(prec, n, Round::Down), rounded(prec, n, Round::Up))
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Interval::from_int(&Integer::from(n), prec)
    }

    /// The exact binary value of `x`.
    pub fn from_f64(x: f64, prec: u32) -> Self {
        assert!(x.is_finite(), "non-finite interval endpoint");
        let prec = prec.max(MIN_PRECISION);
        Interval::from_bounds(Float::with_val(prec, x), Float::with_val(prec, x))
    }

    /// num/den enclosed exactly (used for decimal constants such as 0.002).
    pub fn from_ratio(num: i64, den: i64, prec: u32) -> Self {
        let prec = prec.max(MIN_PRECISION);
        let r = Rational::from((num, den));
        Interval::from_bounds(rounded(prec, &r, Round::Down), rounded(prec, &r, Round::Up))
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64_round(Round::Down)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64_round(Round::Up)
    }

    pub fn mid_f64(&self) -> f64 {
        let prec = self.prec();
        let mut m = Float::with_val(prec, &self.lo + &self.hi);
        m /= 2u32;
        m.to_f64()
    }

    pub fn width_f64(&self) -> f64 {
        Float::with_val(self.prec(), &self.hi - &self.lo).to_f64_round(Round::Up)
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    pub fn add(&self, rhs: &Interval) -> Interval {
        let prec = self.prec().max(rhs.prec());
        let mut lo = Float::with_val(prec, &self.lo);
        lo.add_assign_round(&rhs.lo, Round::Down);
        let mut hi = Float::with_val(prec, &self.hi);
        hi.add_assign_round(&rhs.hi, Round::Up);
        Interval::from_bounds(lo, hi)
    }

    pub fn sub(&self, rhs: &Interval) -> Interval {
        let prec = self.prec().max(rhs.prec());
        let mut lo = Float::with_val(prec, &self.lo);
        lo.sub_assign_round(&rhs.hi, Round::Down);
        let mut hi = Float::with_val(prec, &self.hi);
        hi.sub_assign_round(&rhs.lo, Round::Up);
        Interval::from_bounds(lo, hi)
    }

    pub fn neg(&self) -> Interval {
        Interval::from_bounds(Float::with_val(self.prec(), -&self.hi), Float::with_val(self.prec(), -&self.lo))
    }

    pub fn mul(&self, rhs: &Interval) -> Interval {
        let prec = self.prec().max(rhs.prec());
        let corners = [(&self.lo, &rhs.lo), (&self.lo, &rhs.hi), (&self.hi, &rhs.lo), (&self.hi, &rhs.hi)];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (x, y) in corners {
            let mut down = Float::with_val(prec, x);
            down.mul_assign_round(y, Round::Down);
            let mut up = Float::with_val(prec, x);
            up.mul_assign_round(y, Round::Up);
            if lo.as_ref().map_or(true, |l| down < *l) {
                lo = Some(down);
            }
            if hi.as_ref().map_or(true, |h| up > *h) {
                hi = Some(up);
            }
        }
        Interval::from_bounds(lo.unwrap(), hi.unwrap())
    }

    /// Panics if `rhs` contains zero.
    pub fn div(&self, rhs: &Interval) -> Interval {
        assert!(!rhs.contains_zero(), "interval division by an enclosure of zero");
        let prec = self.prec().max(rhs.prec());
        let corners = [(&self.lo, &rhs.lo), (&self.lo, &rhs.hi), (&self.hi, &rhs.lo), (&self.hi, &rhs.hi)];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (x, y) in corners {
            let mut down = Float::with_val(prec, x);
            down.div_assign_round(y, Round::Down);
            let mut up = Float::with_val(prec, x);
            up.div_assign_round(y, Round::Up);
            if lo.as_ref().map_or(true, |l| down < *l) {
                lo = Some(down);
            }
            if hi.as_ref().map_or(true, |h| up > *h) {
                hi = Some(up);
            }
        }
        Interval::from_bounds(lo.unwrap(), hi.unwrap())
    }

    pub fn scale(&self, k: i64) -> Interval {
        self.mul(&Interval::from_i64(k, self.prec()))
    }

    /// Panics unless the interval is strictly positive.
    pub fn ln(&self) -> Interval {
        assert!(self.lo > 0, "log of an interval that is not strictly positive");
        if self.lo == self.hi {
            return Interval::point_image(&self.lo, |x| x.ln_round(Round::Down));
        }
        let mut lo = self.lo.clone();
        lo.ln_round(Round::Down);
        let mut hi = self.hi.clone();
        hi.ln_round(Round::Up);
        Interval::from_bounds(lo, hi)
    }

    pub fn exp(&self) -> Interval {
        if self.lo == self.hi {
            return Interval::point_image(&self.lo, |x| x.exp_round(Round::Down));
        }
        let mut lo = self.lo.clone();
        lo.exp_round(Round::Down);
        let mut hi = self.hi.clone();
        hi.exp_round(Round::Up);
        Interval::from_bounds(lo, hi)
    }

    pub fn sqrt(&self) -> Interval {
        assert!(self.lo >= 0, "square root of a negative interval");
        let mut lo = self.lo.clone();
        lo.sqrt_round(Round::Down);
        let mut hi = self.hi.clone();
        hi.sqrt_round(Round::Up);
        Interval::from_bounds(lo, hi)
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            self.neg()
        } else {
            let hi = if Float::with_val(self.prec(), -&self.lo) > self.hi {
                Float::with_val(self.prec(), -&self.lo)
            } else {
                self.hi.clone()
            };
            Interval::from_bounds(Float::with_val(self.prec(), 0), hi)
        }
    }

    pub fn max(&self, rhs: &Interval) -> Interval {
        let lo = if self.lo > rhs.lo { &self.lo } else { &rhs.lo };
        let hi = if self.hi > rhs.hi { &self.hi } else { &rhs.hi };
        Interval::from_bounds(lo.clone(), hi.clone())
    }

    /// max(ln t, 1) with the convention log*(t) = 1 for t <= 0.
    pub fn log_star(&self) -> Interval {
        let one = Interval::from_i64(1, self.prec());
        if self.hi <= 0 {
            return one;
        }
        if self.lo <= 0 {
            // the enclosure straddles 0: log* is at least 1 and at most log* of the upper end
            let upper = Interval::from_bounds(self.hi.clone(), self.hi.clone()).ln().max(&one);
            return Interval::from_bounds(one.lo, upper.hi);
        }
        self.ln().max(&one)
    }

    /// Certified `self <= rhs`.
    pub fn le(&self, rhs: &Interval) -> Verdict {
        if self.hi <= rhs.lo {
            Verdict::Holds
        } else if self.lo > rhs.hi {
            Verdict::Violated
        } else {
            Verdict::Inconclusive
        }
    }

    /// Certified `self < rhs`.
    pub fn lt(&self, rhs: &Interval) -> Verdict {
        if self.hi < rhs.lo {
            Verdict::Holds
        } else if self.lo >= rhs.hi {
            Verdict::Violated
        } else {
            Verdict::Inconclusive
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo_f64(), self.hi_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encloses_known_constants() {
        let ln2 = Interval::from_i64(2, 128).ln();
        assert!(ln2.lo_f64() <= std::f64::consts::LN_2 && std::f64::consts::LN_2 <= ln2.hi_f64());
        assert!(ln2.width_f64() < 1e-35);
        let e = Interval::from_i64(1, 128).exp();
        assert!(e.lo_f64() <= std::f64::consts::E && std::f64::consts::E <= e.hi_f64());
    }

    #[test]
    fn decimal_constant_enclosure() {
        let c = Interval::from_ratio(2, 1000, 128);
        assert!(c.lo() < c.hi());
        let back = c.scale(500);
        assert!(back.lo_f64() <= 1.0 && back.hi_f64() >= 1.0);
    }

    #[test]
    fn arithmetic_examples() {
        let a = Interval::from_i64(3, 128);
        let b = Interval::from_i64(-2, 128);
        assert_eq!(a.mul(&b).mid_f64(), -6.0);
        assert_eq!(a.sub(&b).mid_f64(), 5.0);
        assert_eq!(a.div(&b).mid_f64(), -1.5);
        assert_eq!(b.abs().mid_f64(), 2.0);
        assert_eq!(Interval::from_i64(16, 128).sqrt().mid_f64(), 4.0);
    }

    #[test]
    fn comparisons_are_certified() {
        let third = Interval::from_ratio(1, 3, 128);
        let also_third = Interval::from_i64(1, 128).div(&Interval::from_i64(3, 128));
        assert_eq!(third.le(&also_third), Verdict::Inconclusive);
        assert_eq!(third.le(&Interval::from_ratio(1, 2, 128)), Verdict::Holds);
        assert_eq!(Interval::from_i64(1, 128).le(&third), Verdict::Violated);
        assert_eq!(Interval::from_i64(1, 128).le(&Interval::from_i64(1, 128)), Verdict::Holds);
        assert_eq!(Interval::from_i64(1, 128).lt(&Interval::from_i64(1, 128)), Verdict::Violated);
    }

    #[test]
    fn log_star_convention() {
        assert_eq!(Interval::from_i64(0, 128).log_star().mid_f64(), 1.0);
        assert_eq!(Interval::from_i64(-3, 128).log_star().mid_f64(), 1.0);
        assert_eq!(Interval::from_i64(2, 128).log_star().mid_f64(), 1.0);
        let l = Interval::from_i64(100, 128).log_star();
        assert!((l.mid_f64() - 100f64.ln()).abs() < 1e-15);
    }
}

//! Towers exp(exp(…(v))) for thresholds that overflow any float type.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

/// ln(f64::MAX): a depth-0 value can hold every real below e^this.
const LN_F64_MAX: f64 = 709.782_712_893_384;

/// `exp` applied `depth` times to `value`, kept in normal form: either
/// depth = 0, or depth >= 1 and e^value would overflow an f64.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IteratedLog {
    depth: u32,
    value: f64,
}

impl IteratedLog {
    pub fn new(depth: u32, value: f64) -> Self {
        assert!(!value.is_nan(), "NaN in an iterated exponential");
        let mut out = IteratedLog { depth, value };
        while out.depth > 0 && out.value <= LN_F64_MAX {
            out.value = out.value.exp();
            out.depth -= 1;
        }
        out
    }

    pub fn real(value: f64) -> Self {
        IteratedLog::new(0, value)
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// The real value when it fits in an f64.
    pub fn to_f64(&self) -> Option<f64> {
        (self.depth == 0).then_some(self.value)
    }

    /// Natural logarithm; None for non-positive reals.
    pub fn ln(&self) -> Option<IteratedLog> {
        if self.depth > 0 {
            Some(IteratedLog::new(self.depth - 1, self.value))
        } else if self.value > 0.0 {
            Some(IteratedLog::real(self.value.ln()))
        } else {
            None
        }
    }

    pub fn exp(&self) -> IteratedLog {
        IteratedLog::new(self.depth + 1, self.value)
    }
}

impl Eq for IteratedLog {}

impl PartialOrd for IteratedLog {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IteratedLog {
    // Normal form makes every depth-k tower exceed every depth-(k-1) one.
    fn cmp(&self, other: &Self) -> Ordering {
        self.depth.cmp(&other.depth).then(self.value.total_cmp(&other.value))
    }
}

impl fmt::Display for IteratedLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in 0..self.depth {
            f.write_str("exp(")?;
        }
        write!(f, "{}", self.value)?;
        for _ in 0..self.depth {
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_small_towers() {
        let t = IteratedLog::new(2, 1.0);
        assert_eq!(t.depth(), 0);
        assert!((t.value() - std::f64::consts::E.exp()).abs() < 1e-12);
        let big = IteratedLog::new(2, 1e10);
        assert_eq!(big.depth(), 2);
        assert_eq!(IteratedLog::new(1, 1000.0).depth(), 1);
    }

    #[test]
    fn ordering_across_depths() {
        let a = IteratedLog::real(f64::MAX);
        let b = IteratedLog::new(1, 710.0);
        let c = IteratedLog::new(2, 710.0);
        let d = IteratedLog::new(2, 1e10);
        assert!(a < b && b < c && c < d);
        assert!(IteratedLog::real(-5.0) < IteratedLog::real(3.0));
    }

    #[test]
    fn ln_and_exp_round_trip() {
        let n0 = IteratedLog::new(2, 1e10);
        let l = n0.ln().unwrap();
        assert_eq!((l.depth(), l.value()), (1, 1e10));
        assert_eq!(l.exp(), n0);
        assert!(IteratedLog::real(0.0).ln().is_none());
    }

    #[test]
    fn display() {
        assert_eq!(IteratedLog::new(2, 1e8).to_string(), "exp(exp(100000000))");
    }
}

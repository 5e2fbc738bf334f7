//! Primitive divisors of group orders of elliptic curves over finite fields,
//! with certified evaluation of the explicit bounds involved.

pub mod arith;
pub mod bounds;
pub mod error;
pub mod factor;
pub mod primitive;
pub mod quadratic;
pub mod sequence;
pub mod sunit;

pub use arith::{profile, ArithProfile, PrimePowers};
pub use bounds::{BoundReport, Interval, IteratedLog, Quantity, Verdict, DEFAULT_PRECISION};
pub use error::{Error, Result};
pub use factor::{factorize, CofactorStatus, FactorBudget, FactoredInteger};
pub use primitive::{
    classify_prime, crt_class, crt_class_even, gamma_valuation, primitive_primes, rank_of_apparition, CrtClass,
    OrderFactorizer, ParityBranch, PrimeClassification, PrimeKind, PrimitiveReport, ValuationRecord,
};
pub use quadratic::{gamma_class, FrobeniusParams, GammaClass, QuadInt};
pub use sequence::{cyclo_norm, cyclotomic_poly, group_order, order_value, trace_seq, CycloPoly, OrderValue};
pub use sunit::{theta_bound, theta_exact, SUnitInstance, ThetaVariant};

//! Shared inputs for the benchmarks.

use ellprim_core::{group_order, FrobeniusParams};
use rug::Integer;

/// Parameter sets with q up to 25, one per q, a chosen near the Hasse edge.
pub fn edge_params() -> Vec<FrobeniusParams> {
    (2..=25u64)
        .map(|q| {
            let a = (2.0 * (q as f64).sqrt()).floor() as i64;
            let a = if a * a >= 4 * q as i64 { a - 1 } else { a };
            FrobeniusParams::new(q, a).unwrap()
        })
        .collect()
}

/// Group orders N_n for a fixed parameter set, a mix of smooth and hard inputs.
pub fn orders(q: u64, a: i64, ns: &[u64]) -> Vec<Integer> {
    let p = FrobeniusParams::new(q, a).unwrap();
    ns.iter().map(|&n| group_order(&p, n)).collect()
}

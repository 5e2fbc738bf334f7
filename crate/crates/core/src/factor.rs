//! Primality testing and factorization with explicit work budgets.
//!
//! Factoring never fails: when the budget runs out the unsplit part is kept
//! as a cofactor whose status says what is known about it. Runs are
//! deterministic for a fixed budget unless a wall-clock limit is set.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Integer;
use serde::Serialize;

use crate::arith::primes_up_to;

/// Miller-Rabin with the first 13 prime bases is exact below this value.
pub const DETERMINISTIC_MR_BOUND: &str = "3317044064679887385961981";

const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const MR_RANDOM_ROUNDS: usize = 40;
const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

fn mr_bound() -> &'static Integer {
    static BOUND: OnceLock<Integer> = OnceLock::new();
    BOUND.get_or_init(|| DETERMINISTIC_MR_BOUND.parse().unwrap())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorBudget {
    /// Primes up to this bound are removed by trial division.
    pub trial_bound: u64,
    /// Total Pollard-rho iterations spent on one composite piece, across restarts.
    pub rho_iterations: u64,
    /// Optional wall-clock limit for the whole call. Makes results timing dependent.
    pub time_limit: Option<Duration>,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget { trial_bound: DEFAULT_TRIAL_BOUND, rho_iterations: 1 << 17, time_limit: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CofactorStatus {
    Unit,
    ProbablePrime,
    CompositeUnknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInteger {
    pub value: Integer,
    /// Primes ascending, exponents >= 1.
    pub factors: Vec<(Integer, u32)>,
    pub cofactor: Integer,
    pub cofactor_status: CofactorStatus,
}

impl FactoredInteger {
    pub fn one() -> Self {
        FactoredInteger {
            value: Integer::from(1),
            factors: Vec::new(),
            cofactor: Integer::from(1),
            cofactor_status: CofactorStatus::Unit,
        }
    }

    pub fn is_fully_factored(&self) -> bool {
        self.cofactor_status == CofactorStatus::Unit
    }

    /// Complete in the sense that every prime factor is known (the cofactor is
    /// 1 or a probable prime).
    pub fn is_complete(&self) -> bool {
        self.cofactor_status != CofactorStatus::CompositeUnknown
    }

    /// All known primes with exponents, including a probable-prime cofactor.
    pub fn known_primes(&self) -> Vec<(Integer, u32)> {
        let mut out = self.factors.clone();
        if self.cofactor_status == CofactorStatus::ProbablePrime {
            out.push((self.cofactor.clone(), 1));
            out.sort();
        }
        out
    }

    /// P(value) as far as it is known, with `complete` telling whether the
    /// answer is exact. P(1) = 1.
    pub fn largest_known_prime_factor(&self) -> (Integer, bool) {
        let mut best = self.factors.last().map(|(p, _)| p.clone()).unwrap_or_else(|| Integer::from(1));
        if self.cofactor_status == CofactorStatus::ProbablePrime && self.cofactor > best {
            best = self.cofactor.clone();
        }
        (best, self.is_complete())
    }

    /// value == cofactor · ∏ p^e
    pub fn reconstructs(&self) -> bool {
        let mut acc = self.cofactor.clone();
        for (p, e) in &self.factors {
            acc *= Integer::from(p.pow(*e));
        }
        acc == self.value
    }

    /// Factorization of a product from factorizations of its parts.
    ///
    /// Probable-prime cofactors become listed factors; composite cofactors
    /// are multiplied into a single composite cofactor.
    pub fn product<'a>(parts: impl IntoIterator<Item = &'a FactoredInteger>) -> FactoredInteger {
        let mut value = Integer::from(1);
        let mut primes: BTreeMap<Integer, u32> = BTreeMap::new();
        let mut cofactor = Integer::from(1);
        for part in parts {
            value *= &part.value;
            for (p, e) in part.known_primes() {
                *primes.entry(p).or_default() += e;
            }
            if part.cofactor_status == CofactorStatus::CompositeUnknown {
                cofactor *= &part.cofactor;
            }
        }
        let cofactor_status =
            if cofactor == 1 { CofactorStatus::Unit } else { CofactorStatus::CompositeUnknown };
        FactoredInteger { value, factors: primes.into_iter().collect(), cofactor, cofactor_status }
    }
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        match self.cofactor_status {
            CofactorStatus::Unit => {}
            CofactorStatus::ProbablePrime => parts.push(format!("{}(prp)", self.cofactor)),
            CofactorStatus::CompositeUnknown => parts.push(format!("[{}]", self.cofactor)),
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

fn strong_probable_prime(n: &Integer, base: &Integer, d: &Integer, s: u32) -> bool {
    let n_minus_1 = Integer::from(n - 1u32);
    let mut x = base.clone().pow_mod(d, n).unwrap();
    if x == 1 || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x.square_mut();
        x %= n;
        if x == n_minus_1 {
            return true;
        }
        if x == 1 {
            return false;
        }
    }
    false
}

/// Strong probable-prime test. Exact for n < 3.3·10^24; beyond that the
/// fixed bases are followed by 40 bases drawn from a generator seeded by n.
pub fn is_probable_prime(n: &Integer) -> bool {
    if *n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if *n == p {
            return true;
        }
        if n.is_divisible_u(p) {
            return false;
        }
    }
    let n_minus_1 = Integer::from(n - 1u32);
    let s = n_minus_1.find_one(0).unwrap();
    let d = Integer::from(&n_minus_1 >> s);
    for &b in &MR_BASES {
        if !strong_probable_prime(n, &Integer::from(b), &d, s) {
            return false;
        }
    }
    if n < mr_bound() {
        return true;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed_of(n));
    let span = Integer::from(n - 3u32);
    for _ in 0..MR_RANDOM_ROUNDS {
        // base in [2, n-2]
        let r: u64 = rng.gen();
        let base = Integer::from(2) + Integer::from(r) % &span;
        if !strong_probable_prime(n, &base, &d, s) {
            return false;
        }
    }
    true
}

fn seed_of(n: &Integer) -> u64 {
    let low = n.to_u64_wrapping();
    low ^ (u64::from(n.significant_bits())).rotate_left(32) ^ 0x9e37_79b9_7f4a_7c15
}

struct TrialTable {
    bound: u64,
    primes: Vec<u64>,
    product: Integer,
}

impl TrialTable {
    fn new(bound: u64) -> Self {
        let primes = primes_up_to(bound);
        let product = product_tree(&primes);
        TrialTable { bound, primes, product }
    }
}

fn product_tree(values: &[u64]) -> Integer {
    match values.len() {
        0 => Integer::from(1),
        1 => Integer::from(values[0]),
        len => {
            let (lo, hi) = values.split_at(len / 2);
            product_tree(lo) * product_tree(hi)
        }
    }
}

fn default_table() -> &'static TrialTable {
    static TABLE: OnceLock<TrialTable> = OnceLock::new();
    TABLE.get_or_init(|| TrialTable::new(DEFAULT_TRIAL_BOUND))
}

/// Removes every prime <= the table bound from `m`, recording multiplicities.
fn trial_divide(m: &mut Integer, table: &TrialTable, out: &mut BTreeMap<Integer, u32>) {
    let mut g = Integer::from(&table.product % &*m);
    g.gcd_mut(m);
    if g == 1 {
        return;
    }
    for &p in &table.primes {
        if g == 1 {
            break;
        }
        if Integer::from(p) * p > g {
            // what is left of g is a single prime
            let p = g.clone();
            let e = m.remove_factor_mut(&p);
            out.insert(p, e);
            break;
        }
        if g.is_divisible_u(p as u32) {
            g.div_exact_u_mut(p as u32);
            let e = m.remove_factor_mut(&Integer::from(p));
            out.insert(Integer::from(p), e);
        }
    }
}

struct RhoState {
    iterations_left: u64,
    deadline: Option<Instant>,
}

impl RhoState {
    fn expired(&self) -> bool {
        self.iterations_left == 0 || self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

/// One Brent cycle search with f(x) = x² + c mod n.
fn brent(n: &Integer, x0: Integer, c: &Integer, state: &mut RhoState) -> Option<Integer> {
    const BATCH: u64 = 128;
    let step = |v: &mut Integer| {
        v.square_mut();
        *v += c;
        *v %= n;
    };
    let mut y = x0;
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut acc = Integer::from(1);
    let mut g = Integer::from(1);
    let mut r: u64 = 1;
    while g == 1 {
        x.clone_from(&y);
        for _ in 0..r {
            step(&mut y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys.clone_from(&y);
            let batch = BATCH.min(r - k);
            for _ in 0..batch {
                step(&mut y);
                let diff = Integer::from(&x - &y).abs();
                acc *= diff;
                acc %= n;
            }
            g = Integer::from(acc.gcd_ref(n));
            k += batch;
            state.iterations_left = state.iterations_left.saturating_sub(batch);
            if g == 1 && state.expired() {
                return None;
            }
        }
        r *= 2;
    }
    if g == *n {
        // batch overshot: replay one step at a time
        loop {
            step(&mut ys);
            g = Integer::from(&x - &ys).abs().gcd(n);
            if g > 1 {
                break;
            }
        }
    }
    if g == *n {
        None
    } else {
        Some(g)
    }
}

/// Pollard rho (Brent variant) with deterministic restarts seeded from n.
fn rho_split(n: &Integer, state: &mut RhoState) -> Option<Integer> {
    if n.is_even() {
        return Some(Integer::from(2));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed_of(n));
    while !state.expired() {
        let x0 = Integer::from(rng.gen::<u64>()) % n;
        let c = Integer::from(1 + rng.gen::<u32>() as u64) % n;
        if let Some(f) = brent(n, x0, &c, state) {
            return Some(f);
        }
    }
    None
}

/// Factor `n` under `budget`: trial division, then Pollard rho on each
/// remaining composite piece.
pub fn factorize(n: &Integer, budget: &FactorBudget) -> FactoredInteger {
    assert!(*n >= 1, "factorize needs a positive integer");
    let deadline = budget.time_limit.map(|t| Instant::now() + t);
    let mut primes: BTreeMap<Integer, u32> = BTreeMap::new();
    let mut m = n.clone();

    let owned;
    let table = if budget.trial_bound == DEFAULT_TRIAL_BOUND {
        default_table()
    } else {
        owned = TrialTable::new(budget.trial_bound);
        &owned
    };
    trial_divide(&mut m, table, &mut primes);

    let mut cofactor = Integer::from(1);
    let mut status = CofactorStatus::Unit;
    if m > 1 {
        let below_square = Integer::from(table.bound + 1).square() > m;
        if below_square || is_probable_prime(&m) {
            if below_square || m < *mr_bound() {
                primes.insert(m, 1);
            } else {
                cofactor = m;
                status = CofactorStatus::ProbablePrime;
            }
        } else {
            let mut stack = vec![m];
            while let Some(piece) = stack.pop() {
                if is_probable_prime(&piece) {
                    *primes.entry(piece).or_default() += 1;
                    continue;
                }
                if let Some(sq) = perfect_power_root(&piece) {
                    let (root, k) = sq;
                    for _ in 0..k {
                        stack.push(root.clone());
                    }
                    continue;
                }
                let mut state = RhoState { iterations_left: budget.rho_iterations, deadline };
                match rho_split(&piece, &mut state) {
                    Some(f) => {
                        let other = Integer::from(&piece / &f);
                        stack.push(f);
                        stack.push(other);
                    }
                    None => {
                        cofactor *= piece;
                        status = CofactorStatus::CompositeUnknown;
                    }
                }
            }
        }
    }
    FactoredInteger {
        value: n.clone(),
        factors: primes.into_iter().collect(),
        cofactor,
        cofactor_status: status,
    }
}

/// (root, k) with root^k == n for the largest such k > 1, if any.
fn perfect_power_root(n: &Integer) -> Option<(Integer, u32)> {
    if !n.is_perfect_power() {
        return None;
    }
    let bits = n.significant_bits();
    for k in (2..=bits).rev() {
        let (root, rem) = n.clone().root_rem(Integer::new(), k);
        if rem == 0 {
            return Some((root, k));
        }
    }
    None
}

/// Largest e with p^e | n (n nonzero, p >= 2).
pub fn valuation(n: &Integer, p: &Integer) -> u32 {
    assert!(*n != 0, "valuation of zero");
    assert!(*p >= 2, "valuation base must be at least 2");
    let mut m = n.clone();
    m.remove_factor_mut(p)
}

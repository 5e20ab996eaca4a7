//! Layered primality decisions for arbitrary-precision integers.
//!
//! Classification runs trial division first, then a deterministic
//! Miller-Rabin witness set while the input is small enough for published
//! sets to constitute a proof, and above that a BPSW-style probable-prime
//! test: one base-2 strong test, one strong Lucas test with Selfridge
//! parameters, plus a configurable number of seeded random-base strong
//! rounds. No composite passing BPSW is known; statuses above the
//! deterministic threshold are still reported as probable, never proven.
//!
//! References: Baillie & Wagstaff, "Lucas pseudoprimes", Math. Comp. 35
//! (1980); Crandall & Pomerance, *Prime Numbers*, 2nd ed., ch. 3.

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixed::int_root;
use crate::Natural;

/// Deterministic witness thresholds: testing every base in the set proves
/// primality for inputs strictly below the paired bound.
const MR_TIERS: &[(u64, &[u64])] = &[
    (2_047, &[2]),
    (1_373_653, &[2, 3]),
    (9_080_191, &[31, 73]),
    (25_326_001, &[2, 3, 5]),
    (3_215_031_751, &[2, 3, 5, 7]),
    (4_759_123_141, &[2, 7, 61]),
    (1_122_004_669_633, &[2, 13, 23, 1_662_803]),
    (2_152_302_898_747, &[2, 3, 5, 7, 11]),
    (3_474_749_660_383, &[2, 3, 5, 7, 11, 13]),
    (341_550_071_728_321, &[2, 3, 5, 7, 11, 13, 17]),
    (3_825_123_056_546_413_051, &[2, 3, 5, 7, 11, 13, 17, 19, 23]),
    (u64::MAX, &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]),
];

/// The first 13 primes are a proven witness set below this bound
/// (Sorenson & Webster, 2015). Deterministic thresholds beyond it are
/// rejected at config validation.
pub static WITNESS_SET_LIMIT: Lazy<Natural> =
    Lazy::new(|| "3317044064679887385961981".parse().unwrap());

const BIG_WITNESS_SET: &[u64] = &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

static DEFAULT_TRIAL_PRIMES: Lazy<Vec<u64>> =
    Lazy::new(|| small_prime_sieve(10_000).expect("default bound is in range"));

/// How a proven-prime verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProvenMethod {
    TrialDivision,
    DeterministicWitnessSet,
}

/// Outcome of [`classify`].
///
/// A `Composite` witness, when present, is either a nontrivial factor or a
/// Miller-Rabin witness base; re-running that single check confirms
/// compositeness (see [`witness_confirms_composite`]). `ProvenPrime` is only
/// issued below the configured deterministic threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PrimalityStatus {
    Composite {
        #[serde(with = "crate::serde_util::decimal_opt")]
        witness: Option<Natural>,
    },
    ProvenPrime {
        method: ProvenMethod,
    },
    ProbablePrime {
        bpsw: bool,
        extra_rounds: u32,
    },
}

impl PrimalityStatus {
    /// True for both proven and probable primes.
    pub fn is_prime_positive(&self) -> bool {
        !matches!(self, PrimalityStatus::Composite { .. })
    }

    /// Short label for one-line text output.
    pub fn label(&self) -> String {
        match self {
            PrimalityStatus::Composite { .. } => "composite".into(),
            PrimalityStatus::ProvenPrime {
                method: ProvenMethod::TrialDivision,
            } => "proven(trial-division)".into(),
            PrimalityStatus::ProvenPrime {
                method: ProvenMethod::DeterministicWitnessSet,
            } => "proven(witness-set)".into(),
            PrimalityStatus::ProbablePrime { extra_rounds, .. } => {
                format!("probable(bpsw+{extra_rounds})")
            }
        }
    }
}

/// Knobs for [`classify`]. All searches and sequence builds thread one of
/// these through, so a run is reproducible from (inputs, config) alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimalityConfig {
    /// Candidates are trial-divided by all primes up to this bound.
    pub trial_division_bound: u64,
    /// Inputs below this are decided exactly; defaults to 2^64.
    pub deterministic_threshold: Natural,
    /// Random-base strong rounds appended after the BPSW pair.
    pub extra_mr_rounds: u32,
    /// Seed for the random-base generator; recorded so runs are repeatable.
    pub rng_seed: u64,
}

impl Default for PrimalityConfig {
    fn default() -> Self {
        PrimalityConfig {
            trial_division_bound: 10_000,
            deterministic_threshold: Natural::one() << 64,
            extra_mr_rounds: 16,
            rng_seed: 0,
        }
    }
}

impl PrimalityConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trial_division_bound < 2 {
            return Err(Error::InvalidArgument(
                "trial_division_bound must be >= 2".into(),
            ));
        }
        if self.trial_division_bound > 1 << 32 {
            return Err(Error::InvalidArgument(
                "trial_division_bound must fit the sieve range 2^32".into(),
            ));
        }
        if self.deterministic_threshold > *WITNESS_SET_LIMIT {
            return Err(Error::InvalidArgument(format!(
                "deterministic_threshold exceeds the proven witness-set limit {}",
                *WITNESS_SET_LIMIT
            )));
        }
        Ok(())
    }
}

/// All primes `p <= limit`, ascending. Limits above 2^32 are rejected.
pub fn small_prime_sieve(limit: u64) -> Result<Vec<u64>> {
    if limit > 1 << 32 {
        return Err(Error::LimitTooLarge { limit });
    }
    if limit < 2 {
        return Ok(Vec::new());
    }
    // Odds-only bitmap: bit i stands for 2i + 3.
    let len = ((limit - 1) / 2) as usize;
    let mut composite = vec![false; len];
    let mut primes = vec![2u64];
    let mut i = 0usize;
    while i < len {
        if !composite[i] {
            let p = 2 * i as u64 + 3;
            primes.push(p);
            let mut j = match p.checked_mul(p) {
                Some(sq) if sq <= limit => ((sq - 3) / 2) as usize,
                _ => len,
            };
            while j < len {
                composite[j] = true;
                j += p as usize;
            }
        }
        i += 1;
    }
    Ok(primes)
}

fn trial_primes(bound: u64) -> std::borrow::Cow<'static, [u64]> {
    let bound = bound.clamp(2, 1 << 32);
    if bound == 10_000 {
        std::borrow::Cow::Borrowed(&DEFAULT_TRIAL_PRIMES)
    } else {
        std::borrow::Cow::Owned(small_prime_sieve(bound).expect("bound clamped to range"))
    }
}

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Strong probable-prime test to one base, native width. `n` odd, `n > 2`.
fn strong_test_u64(n: u64, base: u64) -> bool {
    let base = base % n;
    if base == 0 {
        return true;
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    let mut x = powmod_u64(base, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mulmod_u64(x, x, n);
        if x == n - 1 {
            return true;
        }
        if x == 1 {
            return false;
        }
    }
    false
}

/// Deterministic primality for native integers via the tiered witness sets.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    witness_decide_u64(n) == Some(0)
}

/// `Some(0)` = prime, `Some(w)` = composite where `w` is a factor or a
/// failing strong base. Split out so callers can report the witness.
fn witness_decide_u64(n: u64) -> Option<u64> {
    if n < 2 {
        return Some(1); // placeholder; classify handles n < 2 before this
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == p {
            return Some(0);
        }
        if n.is_multiple_of(p) {
            return Some(p);
        }
    }
    let set = MR_TIERS
        .iter()
        .find(|(bound, _)| n < *bound)
        .map(|(_, set)| *set)
        .unwrap_or(MR_TIERS[MR_TIERS.len() - 1].1);
    for &base in set {
        if !strong_test_u64(n, base) {
            return Some(base);
        }
    }
    Some(0)
}

/// Strong probable-prime test to one base. `n` odd, `n >= 3`.
fn strong_test(n: &Natural, base: &Natural) -> bool {
    let a = base % n;
    if a.is_zero() {
        return true;
    }
    let n_m1 = n - 1u32;
    let s = n_m1.trailing_zeros().expect("n odd, so n-1 > 0");
    let d = &n_m1 >> s;
    let mut x = a.modpow(&d, n);
    if x.is_one() || x == n_m1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_m1 {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

/// Jacobi symbol (a / n) for odd positive n.
fn jacobi(a: &BigInt, n: &Natural) -> i32 {
    debug_assert!(n.is_odd());
    let n_int = BigInt::from(n.clone());
    let mut a = a.mod_floor(&n_int).to_biguint().expect("mod_floor >= 0");
    let mut n = n.clone();
    let mut sign = 1i32;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = (&n % 8u32).to_u32().unwrap();
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32().unwrap() == 3 && (&n % 4u32).to_u32().unwrap() == 3 {
            sign = -sign;
        }
        a %= &n;
    }
    if n.is_one() {
        sign
    } else {
        0
    }
}

fn is_perfect_square(n: &Natural) -> bool {
    let r = int_root(n, 2).expect("r = 2 is valid");
    &r * &r == *n
}

/// Strong Lucas probable-prime test with Selfridge ("method A") parameters:
/// D = 5, -7, 9, -11, ... until (D/n) = -1, then P = 1, Q = (1 - D) / 4.
/// Passes when U_d = 0 or V_(d*2^r) = 0 for some 0 <= r < s, where
/// n + 1 = d * 2^s with d odd.
///
/// Expects odd `n >= 3` with no factor below the trial-division bound.
fn strong_lucas(n: &Natural) -> bool {
    if is_perfect_square(n) {
        // No D with (D/n) = -1 exists for squares.
        return false;
    }
    let mut d_abs: u64 = 5;
    let mut negative = false;
    let d: BigInt = loop {
        let cand = if negative {
            -BigInt::from(d_abs)
        } else {
            BigInt::from(d_abs)
        };
        match jacobi(&cand, n) {
            -1 => break cand,
            0 => {
                // Shared factor with n: prime only if n is |D| itself.
                return *n == Natural::from(d_abs);
            }
            _ => {}
        }
        negative = !negative;
        d_abs += 2;
        if d_abs > 1_000_000 {
            // Unreachable for non-squares; bail out rather than spin.
            return false;
        }
    };
    let q: BigInt = (BigInt::one() - &d) / 4;
    let n_int = BigInt::from(n.clone());

    fn reduce(v: BigInt, n: &BigInt) -> BigInt {
        v.mod_floor(n)
    }
    // (v / 2) mod n for odd n.
    fn halve(v: BigInt, n: &BigInt) -> BigInt {
        if v.is_even() {
            v / 2
        } else {
            (v + n) / 2
        }
    }

    let n_p1 = n + 1u32;
    let s = n_p1.trailing_zeros().expect("n odd, so n+1 > 0");
    let d_odd = &n_p1 >> s;

    // Binary ladder for U_k, V_k, Q^k with P = 1.
    let mut u = BigInt::one();
    let mut v = BigInt::one();
    let mut qk = reduce(q.clone(), &n_int);
    for i in (0..d_odd.bits() - 1).rev() {
        // (U, V, Q^k) -> index 2k
        let u2 = reduce(&u * &v, &n_int);
        let v2 = reduce(&v * &v - 2 * &qk, &n_int);
        qk = reduce(&qk * &qk, &n_int);
        u = u2;
        v = v2;
        if d_odd.bit(i) {
            // index 2k + 1
            let u_next = halve(reduce(&u + &v, &n_int), &n_int);
            let v_next = halve(reduce(&d * &u + &v, &n_int), &n_int);
            u = reduce(u_next, &n_int);
            v = reduce(v_next, &n_int);
            qk = reduce(&qk * &q, &n_int);
        }
    }

    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = reduce(&v * &v - 2 * &qk, &n_int);
        if v.is_zero() {
            return true;
        }
        qk = reduce(&qk * &qk, &n_int);
    }
    false
}

fn random_base(rng: &mut ChaCha8Rng, n: &Natural) -> Natural {
    // Uniform in [2, n - 2]; callers guarantee n is far above 4.
    rng.gen_biguint_below(&(n - 3u32)) + 2u32
}

/// Classify `n`. Total on naturals: `n < 2` is composite by convention with
/// no witness, and errors cannot occur. Deterministic given `(n, cfg)`.
pub fn classify(n: &Natural, cfg: &PrimalityConfig) -> PrimalityStatus {
    let two = Natural::from(2u32);
    if *n < two {
        return PrimalityStatus::Composite { witness: None };
    }

    // Stage 1: trial division, which also proves primality while
    // n <= bound^2.
    let primes = trial_primes(cfg.trial_division_bound);
    let bound_sq = Natural::from(cfg.trial_division_bound) * cfg.trial_division_bound;
    if let Some(small) = n.to_u64() {
        for &p in primes.iter() {
            if p.checked_mul(p).is_none_or(|sq| sq > small) {
                return PrimalityStatus::ProvenPrime {
                    method: ProvenMethod::TrialDivision,
                };
            }
            if small % p == 0 {
                return PrimalityStatus::Composite {
                    witness: Some(Natural::from(p)),
                };
            }
        }
    } else {
        for &p in primes.iter() {
            if (n % p).is_zero() {
                return PrimalityStatus::Composite {
                    witness: Some(Natural::from(p)),
                };
            }
        }
    }
    if *n <= bound_sq {
        // No factor up to sqrt(n).
        return PrimalityStatus::ProvenPrime {
            method: ProvenMethod::TrialDivision,
        };
    }

    // Stage 2: deterministic witness sets.
    if *n < cfg.deterministic_threshold && *n < *WITNESS_SET_LIMIT {
        if let Some(small) = n.to_u64() {
            return match witness_decide_u64(small) {
                Some(0) => PrimalityStatus::ProvenPrime {
                    method: ProvenMethod::DeterministicWitnessSet,
                },
                Some(w) => PrimalityStatus::Composite {
                    witness: Some(Natural::from(w)),
                },
                None => unreachable!(),
            };
        }
        for &base in BIG_WITNESS_SET {
            if !strong_test(n, &Natural::from(base)) {
                return PrimalityStatus::Composite {
                    witness: Some(Natural::from(base)),
                };
            }
        }
        return PrimalityStatus::ProvenPrime {
            method: ProvenMethod::DeterministicWitnessSet,
        };
    }

    // Stage 3: BPSW plus seeded extra rounds.
    if !strong_test(n, &two) {
        return PrimalityStatus::Composite { witness: Some(two) };
    }
    if !strong_lucas(n) {
        // The Lucas failure has no single-number witness.
        return PrimalityStatus::Composite { witness: None };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    for _ in 0..cfg.extra_mr_rounds {
        let base = random_base(&mut rng, n);
        if !strong_test(n, &base) {
            return PrimalityStatus::Composite {
                witness: Some(base),
            };
        }
    }
    PrimalityStatus::ProbablePrime {
        bpsw: true,
        extra_rounds: cfg.extra_mr_rounds,
    }
}

/// Re-run the single check a `Composite` witness stands for: divisibility if
/// the witness is a factor, otherwise a strong test to that base.
pub fn witness_confirms_composite(n: &Natural, witness: &Natural) -> bool {
    if witness > &Natural::one() && witness < n && (n % witness).is_zero() {
        return true;
    }
    if n.is_even() {
        return false;
    }
    !strong_test(n, witness)
}

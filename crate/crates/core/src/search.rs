//! Extremal prime location: greatest prime strictly below `x` and least
//! prime strictly above `x`.
//!
//! Native-width inputs walk candidates directly under the deterministic
//! test. Larger inputs sieve a window next to `x` by every prime up to the
//! trial-division bound first — at 600+ digits that removes roughly nine
//! candidates in ten before any modular exponentiation runs — then test the
//! survivors in order moving away from `x`, so the first hit is extremal by
//! construction.

use std::time::Instant;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primality::{classify, is_prime_u64, PrimalityConfig, PrimalityStatus};
use crate::Natural;

/// Work counters for one search call.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub candidates_examined: u64,
    pub sieve_eliminated: u64,
    pub mr_tests_run: u64,
    pub elapsed_seconds: f64,
}

/// Greatest prime `p < x`. Every integer in `(p, x)` is known composite,
/// either by sieve elimination or by an explicit test.
pub fn prev_prime(x: &Natural, cfg: &PrimalityConfig) -> Result<(Natural, SearchStats)> {
    prev_prime_detail(x, cfg).map(|(p, _, s)| (p, s))
}

/// Least prime `p > x`. Every integer in `(x, p)` is known composite.
pub fn next_prime(x: &Natural, cfg: &PrimalityConfig) -> Result<(Natural, SearchStats)> {
    next_prime_detail(x, cfg).map(|(p, _, s)| (p, s))
}

pub(crate) fn prev_prime_detail(
    x: &Natural,
    cfg: &PrimalityConfig,
) -> Result<(Natural, PrimalityStatus, SearchStats)> {
    if *x < Natural::from(3u32) {
        return Err(Error::InvalidArgument(format!(
            "prev_prime requires x >= 3, got {x}"
        )));
    }
    let started = Instant::now();
    let mut stats = SearchStats::default();

    // Leave gap headroom below u64::MAX so candidate stepping cannot wrap.
    if let Some(xs) = x.to_u64().filter(|&v| v < u64::MAX - (1 << 20)) {
        let mut c = xs - 1;
        if c > 2 && c % 2 == 0 {
            c -= 1;
        }
        loop {
            stats.candidates_examined += 1;
            stats.mr_tests_run += 1;
            if is_prime_u64(c) {
                let value = Natural::from(c);
                let status = classify(&value, cfg);
                stats.elapsed_seconds = started.elapsed().as_secs_f64();
                return Ok((value, status, stats));
            }
            c = if c == 3 { 2 } else { c - 2 };
        }
    }

    let primes = sieve_primes(cfg);
    let block = window_block(x);
    let mut hi = x.clone(); // exclusive upper end of the current window
    loop {
        let top = &hi - 1u32; // greatest candidate in this window
        let mut mask = vec![false; block];
        for &p in primes.iter().skip(1) {
            // Value top - i is divisible by p exactly when i = top mod p.
            let mut i = (&top % p).to_u64().expect("p fits u64") as usize;
            while i < block {
                mask[i] = true;
                i += p as usize;
            }
        }
        // Odd candidates only, descending.
        let mut i = if (&top % 2u32).is_zero() { 1 } else { 0 };
        while i < block {
            stats.candidates_examined += 1;
            if mask[i] {
                stats.sieve_eliminated += 1;
            } else {
                stats.mr_tests_run += 1;
                let value = &top - i as u64;
                let status = classify(&value, cfg);
                if status.is_prime_positive() {
                    stats.elapsed_seconds = started.elapsed().as_secs_f64();
                    return Ok((value, status, stats));
                }
            }
            i += 2;
        }
        hi -= block as u64;
    }
}

pub(crate) fn next_prime_detail(
    x: &Natural,
    cfg: &PrimalityConfig,
) -> Result<(Natural, PrimalityStatus, SearchStats)> {
    if x.is_zero() {
        return Err(Error::InvalidArgument("next_prime requires x >= 1".into()));
    }
    let started = Instant::now();
    let mut stats = SearchStats::default();

    if let Some(xs) = x.to_u64().filter(|&v| v < u64::MAX - (1 << 20)) {
        let mut c = if xs < 2 {
            2
        } else if xs == 2 {
            3
        } else if xs % 2 == 0 {
            xs + 1
        } else {
            xs + 2
        };
        loop {
            stats.candidates_examined += 1;
            stats.mr_tests_run += 1;
            if is_prime_u64(c) {
                let value = Natural::from(c);
                let status = classify(&value, cfg);
                stats.elapsed_seconds = started.elapsed().as_secs_f64();
                return Ok((value, status, stats));
            }
            c += if c == 2 { 1 } else { 2 };
        }
    }

    let primes = sieve_primes(cfg);
    let block = window_block(x);
    let mut lo = x + 1u32; // least candidate in the current window
    loop {
        let mut mask = vec![false; block];
        for &p in primes.iter().skip(1) {
            // Value lo + i is divisible by p exactly when i = -lo mod p.
            let r = (&lo % p).to_u64().expect("p fits u64");
            let mut i = ((p - r) % p) as usize;
            while i < block {
                mask[i] = true;
                i += p as usize;
            }
        }
        let mut i = if (&lo % 2u32).is_zero() { 1 } else { 0 };
        while i < block {
            stats.candidates_examined += 1;
            if mask[i] {
                stats.sieve_eliminated += 1;
            } else {
                stats.mr_tests_run += 1;
                let value = &lo + i as u64;
                let status = classify(&value, cfg);
                if status.is_prime_positive() {
                    stats.elapsed_seconds = started.elapsed().as_secs_f64();
                    return Ok((value, status, stats));
                }
            }
            i += 2;
        }
        lo += block as u64;
    }
}

fn sieve_primes(cfg: &PrimalityConfig) -> Vec<u64> {
    crate::primality::small_prime_sieve(cfg.trial_division_bound.clamp(2, 1 << 32))
        .expect("bound clamped to range")
}

/// Candidates are processed in blocks of max(1024, 4 ln x ln 10) integers;
/// the expected gap near x is about ln x, so one block nearly always
/// suffices and the sieve setup amortizes.
fn window_block(x: &Natural) -> usize {
    let ln_x = x.bits() as f64 * std::f64::consts::LN_2;
    (4.0 * ln_x * std::f64::consts::LN_10).ceil().max(1024.0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primality::small_prime_sieve;

    fn nat(s: &str) -> Natural {
        s.parse().unwrap()
    }

    fn cfg() -> PrimalityConfig {
        PrimalityConfig::default()
    }

    #[test]
    fn prev_prime_examples() {
        let (p, _) = prev_prime(&nat("8"), &cfg()).unwrap();
        assert_eq!(p, nat("7"));
        let (p, _) = prev_prime(&nat("3"), &cfg()).unwrap();
        assert_eq!(p, nat("2"));
        let cube = nat("337").pow(3);
        assert_eq!(cube, nat("38272753"));
        let (p, _) = prev_prime(&cube, &cfg()).unwrap();
        assert_eq!(p, nat("38272739"));
        let (p, _) = prev_prime(&nat("1000000"), &cfg()).unwrap();
        assert_eq!(p, nat("999983"));
    }

    #[test]
    fn next_prime_examples() {
        let (p, _) = next_prime(&nat("2"), &cfg()).unwrap();
        assert_eq!(p, nat("3"));
        let (p, _) = next_prime(&nat("1"), &cfg()).unwrap();
        assert_eq!(p, nat("2"));
        let (p, _) = next_prime(&nat("8"), &cfg()).unwrap();
        assert_eq!(p, nat("11"));
        let (p, _) = next_prime(&nat("1331"), &cfg()).unwrap();
        assert_eq!(p, nat("1361"));
    }

    #[test]
    fn rejects_out_of_domain_inputs() {
        assert!(prev_prime(&nat("2"), &cfg()).is_err());
        assert!(prev_prime(&nat("0"), &cfg()).is_err());
        assert!(next_prime(&nat("0"), &cfg()).is_err());
    }

    #[test]
    fn window_path_matches_known_neighbors_of_powers_of_ten() {
        // 10^30 is far above the native fast path.
        let x = Natural::from(10u32).pow(30);
        let (p, _, _) = prev_prime_detail(&x, &cfg()).unwrap();
        assert_eq!(p, nat("999999999999999999999999999989"));
        let (q, _, _) = next_prime_detail(&x, &cfg()).unwrap();
        assert_eq!(q, nat("1000000000000000000000000000057"));
        // Extremality: the gap below 10^30 is 11, everything inside is composite.
        for k in [3u32, 5, 7, 9] {
            let between = &x - k;
            assert!(!classify(&between, &cfg()).is_prime_positive());
        }
    }

    #[test]
    fn stats_invariant_holds() {
        for x in ["1000003", "38272753", "1000000000000000000000000000000"] {
            let (_, stats) = prev_prime(&nat(x), &cfg()).unwrap();
            assert!(stats.sieve_eliminated + stats.mr_tests_run >= stats.candidates_examined);
            assert!(stats.mr_tests_run >= 1);
        }
    }

    #[test]
    fn oracle_equivalence_to_one_hundred_thousand() {
        let limit = 100_000u64;
        let primes = small_prime_sieve(limit + 100).unwrap();
        let mut is_p = vec![false; (limit + 100) as usize];
        for &p in &primes {
            is_p[p as usize] = true;
        }
        let c = cfg();
        let mut prev_oracle = 2u64;
        for x in 3..=limit {
            let (got, _) = prev_prime(&Natural::from(x), &c).unwrap();
            assert_eq!(got.to_u64().unwrap(), prev_oracle, "prev_prime({x})");
            let next_oracle = (x + 1..).find(|&k| is_p[k as usize]).unwrap();
            let (got, _) = next_prime(&Natural::from(x), &c).unwrap();
            assert_eq!(got.to_u64().unwrap(), next_oracle, "next_prime({x})");
            if is_p[x as usize] {
                prev_oracle = x;
            }
        }
    }

    #[test]
    fn extremality_by_sampling_and_duality_for_primes() {
        use rand::{Rng, SeedableRng};
        let c = cfg();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        // Windowed path around a 40-digit point.
        let x = Natural::from(10u32).pow(40) + 7u32;
        let (p, _) = prev_prime(&x, &c).unwrap();
        let gap = (&x - &p).to_u64().unwrap();
        for _ in 0..50 {
            let k = rng.gen_range(1..gap);
            let inside = &p + k;
            assert!(!classify(&inside, &c).is_prime_positive());
        }
        // Duality at sampled primes below 10^6.
        let primes = small_prime_sieve(1_000_000).unwrap();
        for _ in 0..200 {
            let p = Natural::from(primes[rng.gen_range(2..primes.len())]);
            let (below, _) = prev_prime(&p, &c).unwrap();
            let (roundtrip, _) = next_prime(&below, &c).unwrap();
            assert!(roundtrip <= p);
            assert_eq!(roundtrip, p);
            let (above, _) = next_prime(&p, &c).unwrap();
            let (back, _) = prev_prime(&above, &c).unwrap();
            assert!(back >= p);
            assert_eq!(back, p);
        }
    }
}

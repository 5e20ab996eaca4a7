//! Generalized Mills prime sequences and certified digits of their limit
//! constants.
//!
//! The floor variant iterates `next_prime(P^c)` from a prime seed and, for
//! `c = 3` and seed 2, converges on Mills' constant `A` with
//! `floor(A^(3^n)) = P_n`. The ceiling variant iterates `prev_prime(P^c)`
//! instead; its limit `B` satisfies `ceil(B^(c^n)) = P_n`. Construction
//! enforces the sandwich `(P_n - 1)^c + 1 < P_{n+1} < P_n^c` (ceiling form)
//! at every step, which is exactly what makes the approximant interval
//! `[u_n, v_n]` nest and therefore makes decimal digits of the constant
//! certifiable.
//!
//! - [`primality`]: layered primality decisions — trial division,
//!   deterministic witness sets below 2^64, BPSW probable-prime above.
//! - [`search`]: greatest prime below / least prime above an arbitrary
//!   precision integer, with windowed sieving at large sizes.
//! - [`sequence`]: sequence construction with per-step bound checks, Kuipers
//!   parameters, empirical gap-lemma sweeps, and a resumable JSON cache.
//! - [`fixed`]: exact decimal fixed point with directed rounding; integer
//!   roots, iterated roots, and big-exponent powers.
//! - [`digits`]: certified digit extraction from a directed interval and the
//!   round trip back to the prime sequence.

pub mod digits;
pub mod error;
pub mod fixed;
pub mod primality;
pub mod search;
pub mod sequence;
pub mod serde_util;

pub use error::{Error, Result};

/// Arbitrary-precision nonnegative integer. Exact at any size; the decimal
/// string round trip is the identity.
pub type Natural = num_bigint::BigUint;

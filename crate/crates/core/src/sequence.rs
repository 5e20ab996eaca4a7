//! Construction and validation of the prime sequences behind the constants.
//!
//! Ceiling variant: `P_{n+1}` is the greatest prime below `P_n^c`, and every
//! step must satisfy the exact integer sandwich
//! `(P_n - 1)^c + 1 < P_{n+1} < P_n^c`. Floor variant (classical Mills):
//! `P_{n+1}` is the least prime above `P_n^c`, with `P_{n+1} > P_n^c` and
//! `P_{n+1} + 1 <= (P_n + 1)^c`. The sandwich is equivalent to monotonicity
//! of the root approximants, so a violated bound invalidates the limit
//! construction — building aborts rather than continuing.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{BoundSide, Error, Result};
use crate::primality::{classify, PrimalityConfig, PrimalityStatus};
use crate::search::{next_prime_detail, prev_prime_detail, SearchStats};
use crate::Natural;

/// Which prime-representing function the sequence feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `ceil(B^(c^n))`: steps take the greatest prime below the cube.
    Ceiling,
    /// `floor(A^(c^n))`: steps take the least prime above the cube.
    Floor,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Ceiling => "ceiling",
            Variant::Floor => "floor",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ceiling" => Ok(Variant::Ceiling),
            "floor" => Ok(Variant::Floor),
            other => Err(Error::InvalidArgument(format!(
                "variant must be \"ceiling\" or \"floor\", got {other:?}"
            ))),
        }
    }
}

/// Build parameters for [`build_sequence`].
#[derive(Debug, Clone)]
pub struct MillsConfig {
    /// Integer exponent; the theorem needs `c >= 3`. `c = 2` is exploratory
    /// and only accepted behind `allow_c2`.
    pub c: u32,
    pub variant: Variant,
    pub seed: Natural,
    pub terms: usize,
    pub primality: PrimalityConfig,
    pub allow_c2: bool,
}

impl MillsConfig {
    pub fn new(c: u32, variant: Variant, seed: Natural, terms: usize) -> Self {
        MillsConfig {
            c,
            variant,
            seed,
            terms,
            primality: PrimalityConfig::default(),
            allow_c2: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.c < 2 || (self.c == 2 && !self.allow_c2) {
            return Err(Error::InvalidExponent { c: self.c });
        }
        if self.terms == 0 {
            return Err(Error::InvalidArgument("terms must be >= 1".into()));
        }
        self.primality.validate()?;
        if !classify(&self.seed, &self.primality).is_prime_positive() {
            return Err(Error::SeedNotPrime {
                seed: self.seed.clone(),
            });
        }
        Ok(())
    }
}

/// One term of the sequence with its audit trail.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceRecord {
    /// 1-based, matching the customary `p_1, p_2, ...` labels.
    pub index: usize,
    pub value: Natural,
    pub status: PrimalityStatus,
    pub lower_bound_ok: bool,
    pub upper_bound_ok: bool,
    pub decimal_digits: usize,
    pub stats: SearchStats,
}

/// A built sequence plus the parameters that produced it.
#[derive(Debug, Clone)]
pub struct Sequence {
    pub c: u32,
    pub variant: Variant,
    pub seed: Natural,
    pub records: Vec<SequenceRecord>,
}

impl Sequence {
    pub fn last_value(&self) -> &Natural {
        &self.records.last().expect("sequence never empty").value
    }

    /// View of the first `terms` records as a sequence.
    pub fn truncated(&self, terms: usize) -> Sequence {
        Sequence {
            c: self.c,
            variant: self.variant,
            seed: self.seed.clone(),
            records: self.records[..terms.min(self.records.len())].to_vec(),
        }
    }
}

/// Exact integer bound checks for one adjacent pair.
///
/// Ceiling: `value > (prev - 1)^c + 1` and `value < prev^c`.
/// Floor: `value > prev^c` and `value + 1 <= (prev + 1)^c`; the second is the
/// integer form that keeps the floor-variant upper approximants decreasing.
pub fn bounds_ok(prev: &Natural, value: &Natural, c: u32, variant: Variant) -> (bool, bool) {
    match variant {
        Variant::Ceiling => {
            let lower = (prev - 1u32).pow(c) + 1u32;
            let upper = prev.pow(c);
            (*value > lower, *value < upper)
        }
        Variant::Floor => {
            let lower = prev.pow(c);
            let upper = (prev + 1u32).pow(c);
            (*value > lower, *value < upper)
        }
    }
}

fn seed_record(cfg: &MillsConfig) -> SequenceRecord {
    SequenceRecord {
        index: 1,
        value: cfg.seed.clone(),
        status: classify(&cfg.seed, &cfg.primality),
        lower_bound_ok: true,
        upper_bound_ok: true,
        decimal_digits: cfg.seed.to_string().len(),
        stats: SearchStats::default(),
    }
}

fn next_record(prev: &Natural, index: usize, cfg: &MillsConfig) -> Result<SequenceRecord> {
    let target = prev.pow(cfg.c);
    let (value, status, stats) = match cfg.variant {
        Variant::Ceiling => prev_prime_detail(&target, &cfg.primality)?,
        Variant::Floor => next_prime_detail(&target, &cfg.primality)?,
    };
    let (lower_bound_ok, upper_bound_ok) = bounds_ok(prev, &value, cfg.c, cfg.variant);
    if !lower_bound_ok {
        return Err(Error::BoundViolation {
            index,
            side: BoundSide::Lower,
        });
    }
    if !upper_bound_ok {
        return Err(Error::BoundViolation {
            index,
            side: BoundSide::Upper,
        });
    }
    Ok(SequenceRecord {
        index,
        decimal_digits: value.to_string().len(),
        value,
        status,
        lower_bound_ok,
        upper_bound_ok,
        stats,
    })
}

/// Build the sequence from the seed. Record 1 holds the seed itself; record
/// n+1 holds the extremal prime next to `P_n^c` for the chosen variant. Any
/// failed sandwich bound aborts with [`Error::BoundViolation`].
pub fn build_sequence(cfg: &MillsConfig) -> Result<Sequence> {
    cfg.validate()?;
    let mut seq = Sequence {
        c: cfg.c,
        variant: cfg.variant,
        seed: cfg.seed.clone(),
        records: vec![seed_record(cfg)],
    };
    extend_sequence(&mut seq, cfg.terms, cfg)?;
    Ok(seq)
}

/// Grow `seq` in place until it has `terms` records. No-op when it is
/// already long enough.
pub fn extend_sequence(seq: &mut Sequence, terms: usize, cfg: &MillsConfig) -> Result<()> {
    while seq.records.len() < terms {
        let prev = seq.last_value().clone();
        let index = seq.records.len() + 1;
        seq.records.push(next_record(&prev, index, cfg)?);
    }
    Ok(())
}

/// Kuipers exponent parameters for general `c`: `a = 3c - 4`, `b = 3c - 1`,
/// tied together by `c*a + 1 = b*(c - 1)` and `a/b >= 5/8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KuipersParams {
    pub c: u32,
    pub a: u64,
    pub b: u64,
}

pub fn kuipers_params(c: u32) -> Result<KuipersParams> {
    if c < 3 {
        return Err(Error::InvalidExponent { c });
    }
    let c64 = u64::from(c);
    let params = KuipersParams {
        c,
        a: 3 * c64 - 4,
        b: 3 * c64 - 1,
    };
    // Construction re-verifies the identities.
    assert_eq!(c64 * params.a + 1, params.b * (c64 - 1));
    assert!(8 * params.a >= 5 * params.b);
    Ok(params)
}

/// Slack record for the tightest `N` in a lemma sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaMargin {
    pub n: u64,
    pub prime: Natural,
    /// `p - ((N-1)^c + 1)`; positive exactly when the interval claim holds.
    pub slack_low: Natural,
    /// `N^c - p`.
    pub slack_high: Natural,
}

/// Result of sweeping `N in [n_min, n_max]` for a prime in
/// `((N-1)^c + 1, N^c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub c: u32,
    pub n_min: u64,
    pub n_max: u64,
    /// Values of `N` whose open interval contained no prime, ascending.
    pub violations: Vec<u64>,
    /// Tightest non-violating `N` by `slack_low`; `None` when every `N`
    /// violated.
    pub worst_margin: Option<LemmaMargin>,
}

/// Empirical check of the gap lemma: for each `N`, take the greatest prime
/// below `N^c` as the canonical witness and record a violation when it does
/// not clear `(N-1)^c + 1`.
pub fn check_lemma1(c: u32, n_min: u64, n_max: u64, cfg: &PrimalityConfig) -> Result<LemmaReport> {
    if c < 3 {
        return Err(Error::InvalidExponent { c });
    }
    if n_min < 2 || n_min > n_max {
        return Err(Error::InvalidRange { n_min, n_max });
    }
    let mut violations = Vec::new();
    let mut worst: Option<LemmaMargin> = None;
    for n in n_min..=n_max {
        let big_n = Natural::from(n);
        let target = big_n.pow(c);
        let (p, _) = crate::search::prev_prime(&target, cfg)?;
        let lower = (&big_n - 1u32).pow(c) + 1u32;
        if p <= lower {
            violations.push(n);
            continue;
        }
        let margin = LemmaMargin {
            n,
            slack_low: &p - &lower,
            slack_high: &target - &p,
            prime: p,
        };
        if worst
            .as_ref()
            .is_none_or(|w| margin.slack_low < w.slack_low)
        {
            worst = Some(margin);
        }
    }
    Ok(LemmaReport {
        c,
        n_min,
        n_max,
        violations,
        worst_margin: worst,
    })
}

/// Resumable cache file: all values as decimal strings. Loading re-verifies
/// every term with `classify` and re-checks every bound flag before the
/// sequence is extended or used.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceCache {
    pub c: u32,
    pub variant: Variant,
    pub seed: String,
    pub terms: Vec<String>,
    pub statuses: Vec<PrimalityStatus>,
}

impl SequenceCache {
    pub fn from_sequence(seq: &Sequence) -> Self {
        SequenceCache {
            c: seq.c,
            variant: seq.variant,
            seed: seq.seed.to_string(),
            terms: seq.records.iter().map(|r| r.value.to_string()).collect(),
            statuses: seq.records.iter().map(|r| r.status.clone()).collect(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    /// Verify the cached terms against `cfg` and rebuild a [`Sequence`].
    /// Cached search stats are gone; restored records carry zeroed stats.
    pub fn into_sequence(self, cfg: &MillsConfig) -> Result<Sequence> {
        if self.c != cfg.c || self.variant != cfg.variant {
            return Err(Error::CacheInvalid(format!(
                "cache is for c = {}, variant = {}; requested c = {}, variant = {}",
                self.c, self.variant, cfg.c, cfg.variant
            )));
        }
        let seed: Natural = self
            .seed
            .parse()
            .map_err(|e| Error::CacheInvalid(format!("bad seed: {e}")))?;
        if seed != cfg.seed {
            return Err(Error::CacheInvalid(format!(
                "cache seed {} does not match requested seed {}",
                seed, cfg.seed
            )));
        }
        if self.terms.is_empty() {
            return Err(Error::CacheInvalid("cache holds no terms".into()));
        }
        let mut records = Vec::with_capacity(self.terms.len());
        let mut prev: Option<Natural> = None;
        for (i, term) in self.terms.iter().enumerate() {
            let index = i + 1;
            let value: Natural = term
                .parse()
                .map_err(|e| Error::CacheInvalid(format!("bad term {index}: {e}")))?;
            let status = classify(&value, &cfg.primality);
            if !status.is_prime_positive() {
                return Err(Error::CacheInvalid(format!(
                    "cached term {index} = {value} is composite"
                )));
            }
            let (lower_bound_ok, upper_bound_ok) = match &prev {
                None => {
                    if value != seed {
                        return Err(Error::CacheInvalid(
                            "first cached term does not equal the seed".into(),
                        ));
                    }
                    (true, true)
                }
                Some(p) => bounds_ok(p, &value, cfg.c, cfg.variant),
            };
            if !lower_bound_ok {
                return Err(Error::BoundViolation {
                    index,
                    side: BoundSide::Lower,
                });
            }
            if !upper_bound_ok {
                return Err(Error::BoundViolation {
                    index,
                    side: BoundSide::Upper,
                });
            }
            prev = Some(value.clone());
            records.push(SequenceRecord {
                index,
                decimal_digits: value.to_string().len(),
                value,
                status,
                lower_bound_ok,
                upper_bound_ok,
                stats: SearchStats::default(),
            });
        }
        Ok(Sequence {
            c: cfg.c,
            variant: cfg.variant,
            seed,
            records,
        })
    }
}

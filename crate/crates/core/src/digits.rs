//! Certified decimal digits of the limit constants.
//!
//! With `k` terms built, the constant is bracketed by directed roots of the
//! last term: ceiling variant `[(P-1)^(c^-k) down, P^(c^-k) up]`, floor
//! variant `[P^(c^-k) down, (P+1)^(c^-k) up]`. A digit position is certified
//! when `floor(lo * 10^t) = floor(hi * 10^t)` — floor equality, not string
//! prefix comparison, so a carry boundary like 1.2999/1.3001 certifies
//! exactly what the bracket proves and nothing more.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixed::{iter_root, pow10, pow_fixed, FixedDec, Rounding};
use crate::primality::PrimalityStatus;
use crate::sequence::{Sequence, Variant};
use crate::Natural;

/// Directed bracket around the target constant: `lo <= constant <= hi`,
/// both ends at the same fractional digit count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: FixedDec,
    hi: FixedDec,
}

impl Interval {
    pub fn new(lo: FixedDec, hi: FixedDec) -> Result<Self> {
        if lo.frac_digits() != hi.frac_digits() {
            return Err(Error::InvalidArgument(
                "interval endpoints must share frac_digits".into(),
            ));
        }
        if lo > hi {
            return Err(Error::InvalidArgument("interval requires lo <= hi".into()));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> &FixedDec {
        &self.lo
    }

    pub fn hi(&self) -> &FixedDec {
        &self.hi
    }

    pub fn frac_digits(&self) -> u32 {
        self.lo.frac_digits()
    }

    /// Same bracket at a coarser scale; directed rounding keeps it valid.
    pub fn truncate(&self, frac_digits: u32) -> Interval {
        Interval {
            lo: self.lo.rescale(frac_digits, Rounding::Down),
            hi: self.hi.rescale(frac_digits, Rounding::Up),
        }
    }
}

/// Certified decimal prefix of a constant with its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantDigits {
    pub c: u32,
    pub variant: Variant,
    pub terms_used: usize,
    /// Greatest t with `floor(lo * 10^t) = floor(hi * 10^t)`, capped at the
    /// requested precision.
    pub certified_fraction_digits: u32,
    /// Decimal rendering of the certified value, e.g. `"1.24055"`.
    pub digits: String,
    pub interval: Interval,
}

/// Per-index outcome of a round-trip verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundtripEntry {
    pub index: usize,
    pub expected: Natural,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundtripReport {
    pub c: u32,
    pub variant: Variant,
    pub frac_digits: u32,
    pub entries: Vec<RoundtripEntry>,
    pub all_passed: bool,
}

/// Digit-file sidecar, serialized as JSON next to the digit file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DigitFileMetadata {
    pub c: u32,
    pub variant: Variant,
    pub seed: String,
    pub terms_used: usize,
    pub certified_fraction_digits: u32,
    pub statuses: Vec<PrimalityStatus>,
}

/// Directed bracket from the last term of `seq` at `t` fractional digits.
pub fn constant_interval(seq: &Sequence, c: u32, variant: Variant, t: u32) -> Result<Interval> {
    if seq.records.is_empty() {
        return Err(Error::EmptySequence);
    }
    if seq.c != c || seq.variant != variant {
        return Err(Error::VariantMismatch {
            expected: format!("c = {c}, variant = {variant}"),
            found: format!("c = {}, variant = {}", seq.c, seq.variant),
        });
    }
    let depth = seq.records.len() as u32;
    let last = seq.last_value();
    let (lo_base, hi_base) = match variant {
        Variant::Ceiling => (last - 1u32, last.clone()),
        Variant::Floor => (last.clone(), last + 1u32),
    };
    let lo = iter_root(&lo_base, c, depth, t, Rounding::Down)?;
    let hi = iter_root(&hi_base, c, depth, t, Rounding::Up)?;
    Interval::new(lo, hi)
}

/// Greatest `t <= requested_t` with `floor(lo * 10^t) = floor(hi * 10^t)`,
/// plus the decimal rendering of that common floor. Errors with
/// [`Error::NoCommonPrefix`] when even the integer parts differ.
pub fn certified_prefix(interval: &Interval, requested_t: u32) -> Result<(u32, String)> {
    let mut lo = interval.lo().floor_shifted(requested_t);
    let mut hi = interval.hi().floor_shifted(requested_t);
    let mut t = requested_t;
    while lo != hi {
        if t == 0 {
            return Err(Error::NoCommonPrefix);
        }
        lo /= 10u32;
        hi /= 10u32;
        t -= 1;
    }
    Ok((t, render_digits(&lo, t)))
}

fn render_digits(shifted: &Natural, t: u32) -> String {
    use num_integer::Integer;
    if t == 0 {
        return shifted.to_string();
    }
    let (int, frac) = shifted.div_rem(&pow10(t));
    format!(
        "{int}.{frac:0>width$}",
        frac = frac.to_string(),
        width = t as usize
    )
}

/// Certify digits of the constant bracketed by `interval`, labeling them
/// with the provenance carried by `seq`.
pub fn certify(seq: &Sequence, interval: &Interval, requested_t: u32) -> Result<ConstantDigits> {
    if seq.records.is_empty() {
        return Err(Error::EmptySequence);
    }
    let (t_star, digits) = certified_prefix(interval, requested_t)?;
    Ok(ConstantDigits {
        c: seq.c,
        variant: seq.variant,
        terms_used: seq.records.len(),
        certified_fraction_digits: t_star,
        digits,
        interval: interval.clone(),
    })
}

/// Default digit request for a sequence: the last term supports roughly its
/// own digit count, so ask for that plus headroom.
pub fn default_requested_t(seq: &Sequence) -> u32 {
    seq.records
        .last()
        .map(|r| r.decimal_digits as u32 + 20)
        .unwrap_or(20)
}

/// Verify the constant reproduces the sequence: for each `n`, two directed
/// powers must land on `P_n` after ceil (ceiling variant) or floor (floor
/// variant). When the two powers straddle an integer the report cannot be
/// issued and [`Error::PrecisionInsufficient`] names the first failing
/// index — a signal that more digits are needed, not that the sequence is
/// wrong.
///
/// Indices below `terms_used` power the certification interval outward
/// (lo down, hi up), which certifies the strict inequalities numerically.
/// The last index is different in kind: there the exact powers of `u_k`,
/// `v_k` ARE the integers `P_k - 1`, `P_k`, so outward rounding lands just
/// outside the open interval no matter the precision; its strictness is the
/// integer sandwich checked at construction. That index is therefore checked
/// with inward-rounded roots and matching power directions, which provably
/// land inside `(P_k - 1, P_k]` on both routes.
pub fn roundtrip(digits: &ConstantDigits, seq: &Sequence) -> Result<RoundtripReport> {
    if seq.c != digits.c || seq.variant != digits.variant {
        return Err(Error::VariantMismatch {
            expected: format!("c = {}, variant = {}", digits.c, digits.variant),
            found: format!("c = {}, variant = {}", seq.c, seq.variant),
        });
    }
    if seq.records.is_empty() {
        return Err(Error::EmptySequence);
    }
    let t = digits.interval.frac_digits();
    let terms = digits.terms_used.min(seq.records.len());
    let last = &seq.records[terms - 1].value;
    let (lo_base, hi_base) = match digits.variant {
        Variant::Ceiling => (last - 1u32, last.clone()),
        Variant::Floor => (last.clone(), last + 1u32),
    };
    let inward_lo = iter_root(&lo_base, digits.c, terms as u32, t, Rounding::Up)?;
    let inward_hi = iter_root(&hi_base, digits.c, terms as u32, t, Rounding::Down)?;

    let mut entries = Vec::with_capacity(terms);
    let mut all_passed = true;
    for record in &seq.records[..terms] {
        let exponent = Natural::from(digits.c).pow(record.index as u32);
        let (power_lo, power_hi) = if record.index < terms {
            (
                pow_fixed(digits.interval.lo(), &exponent, t, Rounding::Down)?,
                pow_fixed(digits.interval.hi(), &exponent, t, Rounding::Up)?,
            )
        } else {
            (
                pow_fixed(&inward_lo, &exponent, t, Rounding::Up)?,
                pow_fixed(&inward_hi, &exponent, t, Rounding::Down)?,
            )
        };
        let (a, b) = match digits.variant {
            Variant::Ceiling => (power_lo.ceil(), power_hi.ceil()),
            Variant::Floor => (power_lo.floor(), power_hi.floor()),
        };
        if a != b {
            return Err(Error::PrecisionInsufficient {
                index: record.index,
            });
        }
        let passed = a == record.value;
        all_passed &= passed;
        entries.push(RoundtripEntry {
            index: record.index,
            expected: record.value.clone(),
            passed,
        });
    }
    Ok(RoundtripReport {
        c: digits.c,
        variant: digits.variant,
        frac_digits: t,
        entries,
        all_passed,
    })
}

/// Digit-file body: the integer part and point, then the certified
/// fractional digits 50 per line, trailing newline.
pub fn format_digit_file(digits: &ConstantDigits) -> String {
    let (head, frac) = digits
        .digits
        .split_once('.')
        .unwrap_or((digits.digits.as_str(), ""));
    let mut out = String::with_capacity(frac.len() + frac.len() / 50 + 8);
    out.push_str(head);
    out.push('.');
    for (i, chunk) in frac.as_bytes().chunks(50).enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(std::str::from_utf8(chunk).expect("ascii digits"));
    }
    out.push('\n');
    out
}

pub fn metadata_for(digits: &ConstantDigits, seq: &Sequence) -> DigitFileMetadata {
    DigitFileMetadata {
        c: digits.c,
        variant: digits.variant,
        seed: seq.seed.to_string(),
        terms_used: digits.terms_used,
        certified_fraction_digits: digits.certified_fraction_digits,
        statuses: seq
            .records
            .iter()
            .take(digits.terms_used)
            .map(|r| r.status.clone())
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::{build_sequence, MillsConfig};

    fn nat(s: &str) -> Natural {
        s.parse().unwrap()
    }

    fn fd(s: &str) -> FixedDec {
        s.parse().unwrap()
    }

    fn ceiling_seq(terms: usize) -> Sequence {
        build_sequence(&MillsConfig::new(3, Variant::Ceiling, nat("2"), terms)).unwrap()
    }

    #[test]
    fn single_term_interval_is_cube_root_bracket_of_two() {
        let seq = ceiling_seq(1);
        let iv = constant_interval(&seq, 3, Variant::Ceiling, 5).unwrap();
        assert_eq!(iv.lo().to_decimal_string(), "1.00000");
        assert_eq!(iv.hi().to_decimal_string(), "1.25993");
    }

    #[test]
    fn interval_argument_validation() {
        let seq = ceiling_seq(2);
        assert!(matches!(
            constant_interval(&seq, 3, Variant::Floor, 5),
            Err(Error::VariantMismatch { .. })
        ));
        assert!(matches!(
            constant_interval(&seq, 4, Variant::Ceiling, 5),
            Err(Error::VariantMismatch { .. })
        ));
        let empty = Sequence {
            c: 3,
            variant: Variant::Ceiling,
            seed: nat("2"),
            records: vec![],
        };
        assert!(matches!(
            constant_interval(&empty, 3, Variant::Ceiling, 5),
            Err(Error::EmptySequence)
        ));
    }

    #[test]
    fn certified_prefix_cases() {
        // Degenerate interval certifies everything requested.
        let iv = Interval::new(fd("1.24055"), fd("1.24055")).unwrap();
        let (t, s) = certified_prefix(&iv, 5).unwrap();
        assert_eq!((t, s.as_str()), (5, "1.24055"));

        // Carry boundary collapses certification to the integer part.
        let iv = Interval::new(fd("1.2999"), fd("1.3001")).unwrap();
        let (t, s) = certified_prefix(&iv, 4).unwrap();
        assert_eq!((t, s.as_str()), (0, "1"));

        // Differing integer parts cannot certify anything.
        let iv = Interval::new(fd("1.9"), fd("2.1")).unwrap();
        assert!(matches!(
            certified_prefix(&iv, 4),
            Err(Error::NoCommonPrefix)
        ));
    }

    #[test]
    fn five_term_interval_certifies_the_known_prefix() {
        let seq = ceiling_seq(5);
        let iv = constant_interval(&seq, 3, Variant::Ceiling, 30).unwrap();
        let d = certify(&seq, &iv, 30).unwrap();
        assert!(d.digits.starts_with("1.2405547052"));
        // Five terms pin 24 fractional digits; requesting 20 stops at 20.
        let d20 = certify(&seq, &iv, 20).unwrap();
        assert_eq!(d20.certified_fraction_digits, 20);
        assert_eq!(d20.digits, "1.24055470525201424067");
    }

    #[test]
    fn floor_variant_certifies_the_mills_prefix() {
        let cfg = MillsConfig::new(3, Variant::Floor, nat("2"), 4);
        let seq = build_sequence(&cfg).unwrap();
        let iv = constant_interval(&seq, 3, Variant::Floor, 15).unwrap();
        let d = certify(&seq, &iv, 10).unwrap();
        assert_eq!(d.digits, "1.3063778838");
        assert_eq!(d.certified_fraction_digits, 10);
    }

    #[test]
    fn certified_count_tracks_term_size() {
        let seq = ceiling_seq(7);
        let mut previous = 0u32;
        for k in 1..=7usize {
            let sub = seq.truncated(k);
            let t_req = default_requested_t(&sub);
            let iv = constant_interval(&sub, 3, Variant::Ceiling, t_req + 20).unwrap();
            let d = certify(&sub, &iv, t_req).unwrap();
            assert!(
                d.certified_fraction_digits >= previous,
                "certified digits shrank at k = {k}"
            );
            let term_digits = sub.records.last().unwrap().decimal_digits as u32;
            assert!(
                d.certified_fraction_digits + 2 >= term_digits,
                "k = {k}: certified {} too small for {term_digits}-digit term",
                d.certified_fraction_digits
            );
            previous = d.certified_fraction_digits;
        }
    }

    #[test]
    fn intervals_nest_within_one_ulp() {
        let seq = ceiling_seq(5);
        let t = 30;
        let mut prev: Option<Interval> = None;
        for k in 1..=5usize {
            let iv = constant_interval(&seq.truncated(k), 3, Variant::Ceiling, t).unwrap();
            if let Some(p) = &prev {
                let one_ulp = nat("1");
                // lo may only move up (give or take one ulp of directed slack).
                assert!(
                    iv.lo().mantissa() + &one_ulp >= *p.lo().mantissa(),
                    "lo regressed at k = {k}"
                );
                assert!(
                    iv.hi().mantissa() <= &(p.hi().mantissa() + &one_ulp),
                    "hi grew at k = {k}"
                );
            }
            prev = Some(iv);
        }
    }

    #[test]
    fn roundtrip_five_terms() {
        let seq = ceiling_seq(5);
        let iv = constant_interval(&seq, 3, Variant::Ceiling, 40).unwrap();
        let d = certify(&seq, &iv, 30).unwrap();
        let report = roundtrip(&d, &seq).unwrap();
        assert!(report.all_passed);
        assert_eq!(report.entries.len(), 5);
        assert_eq!(report.entries[0].expected, nat("2"));
        assert_eq!(report.entries[2].expected, nat("337"));
    }

    #[test]
    fn truncated_interval_reports_insufficient_precision() {
        let seq = ceiling_seq(5);
        let iv = constant_interval(&seq, 3, Variant::Ceiling, 40).unwrap();
        let coarse = iv.truncate(3);
        let d = ConstantDigits {
            c: 3,
            variant: Variant::Ceiling,
            terms_used: 5,
            certified_fraction_digits: 3,
            digits: "1.240".into(),
            interval: coarse,
        };
        match roundtrip(&d, &seq) {
            Err(Error::PrecisionInsufficient { index }) => {
                assert!(index <= 4, "straddle should appear by index 4, got {index}");
            }
            other => panic!("expected precision error, got {other:?}"),
        }
    }

    #[test]
    fn digit_file_wraps_at_fifty() {
        let digits = ConstantDigits {
            c: 3,
            variant: Variant::Ceiling,
            terms_used: 5,
            certified_fraction_digits: 60,
            digits: format!("1.{}", "9".repeat(60)),
            interval: Interval::new(fd("1"), fd("2")).unwrap(),
        };
        let body = format_digit_file(&digits);
        let lines: Vec<&str> = body.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], format!("1.{}", "9".repeat(50)));
        assert_eq!(lines[1], "9".repeat(10));
        assert!(body.ends_with('\n'));
    }
}

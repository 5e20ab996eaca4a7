//! Output encoders. JSON documents carry every big integer as a decimal
//! string and round-trip byte-identically through their typed structs;
//! bfile output is the OEIS bulk-term convention, one `n a(n)` pair per
//! line with no header.

use serde::{Deserialize, Serialize};

use millscale_core::digits::{ConstantDigits, RoundtripReport};
use millscale_core::primality::PrimalityStatus;
use millscale_core::search::SearchStats;
use millscale_core::sequence::{LemmaReport, Sequence};
use millscale_core::Natural;

fn pretty<T: Serialize>(doc: &T) -> Result<String, serde_json::Error> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    Ok(s)
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct SequenceDoc {
    pub c: u32,
    pub variant: String,
    pub seed: String,
    pub records: Vec<RecordDoc>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct RecordDoc {
    pub index: usize,
    pub value: String,
    pub decimal_digits: usize,
    pub status: PrimalityStatus,
    pub lower_bound_ok: bool,
    pub upper_bound_ok: bool,
    pub stats: SearchStats,
}

impl From<&Sequence> for SequenceDoc {
    fn from(seq: &Sequence) -> Self {
        SequenceDoc {
            c: seq.c,
            variant: seq.variant.to_string(),
            seed: seq.seed.to_string(),
            records: seq
                .records
                .iter()
                .map(|r| RecordDoc {
                    index: r.index,
                    value: r.value.to_string(),
                    decimal_digits: r.decimal_digits,
                    status: r.status.clone(),
                    lower_bound_ok: r.lower_bound_ok,
                    upper_bound_ok: r.upper_bound_ok,
                    stats: r.stats.clone(),
                })
                .collect(),
        }
    }
}

pub fn sequence_text(seq: &Sequence) -> String {
    let mut out = String::new();
    for r in &seq.records {
        out.push_str(&format!("{} {} {}\n", r.index, r.value, r.status.label()));
    }
    out
}

pub fn sequence_json(seq: &Sequence) -> Result<String, millscale_core::Error> {
    Ok(pretty(&SequenceDoc::from(seq))?)
}

pub fn sequence_bfile(seq: &Sequence) -> String {
    let mut out = String::new();
    for r in &seq.records {
        out.push_str(&format!("{} {}\n", r.index, r.value));
    }
    out
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct IntervalDoc {
    pub lo: String,
    pub hi: String,
    pub frac_digits: u32,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ConstantDoc {
    pub c: u32,
    pub variant: String,
    pub seed: String,
    pub terms_used: usize,
    pub certified_fraction_digits: u32,
    pub digits: String,
    pub interval: IntervalDoc,
    pub statuses: Vec<PrimalityStatus>,
}

pub fn constant_doc(digits: &ConstantDigits, seq: &Sequence) -> ConstantDoc {
    ConstantDoc {
        c: digits.c,
        variant: digits.variant.to_string(),
        seed: seq.seed.to_string(),
        terms_used: digits.terms_used,
        certified_fraction_digits: digits.certified_fraction_digits,
        digits: digits.digits.clone(),
        interval: IntervalDoc {
            lo: digits.interval.lo().to_decimal_string(),
            hi: digits.interval.hi().to_decimal_string(),
            frac_digits: digits.interval.frac_digits(),
        },
        statuses: seq
            .records
            .iter()
            .take(digits.terms_used)
            .map(|r| r.status.clone())
            .collect(),
    }
}

pub fn constant_text(digits: &ConstantDigits, seq: &Sequence) -> String {
    let mut out = String::new();
    out.push_str(&digits.digits);
    out.push('\n');
    out.push_str(&format!("c = {}\n", digits.c));
    out.push_str(&format!("variant = {}\n", digits.variant));
    out.push_str(&format!("seed = {}\n", seq.seed));
    out.push_str(&format!("terms_used = {}\n", digits.terms_used));
    out.push_str(&format!(
        "certified_fraction_digits = {}\n",
        digits.certified_fraction_digits
    ));
    for r in seq.records.iter().take(digits.terms_used) {
        out.push_str(&format!("status[{}] = {}\n", r.index, r.status.label()));
    }
    out
}

pub fn constant_json(
    digits: &ConstantDigits,
    seq: &Sequence,
) -> Result<String, millscale_core::Error> {
    Ok(pretty(&constant_doc(digits, seq))?)
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct VerifyDoc {
    pub c: u32,
    pub variant: String,
    pub seed: String,
    pub frac_digits: u32,
    pub retried: bool,
    pub entries: Vec<VerifyEntryDoc>,
    pub all_passed: bool,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct VerifyEntryDoc {
    pub index: usize,
    pub expected: String,
    pub passed: bool,
}

pub fn verify_text(report: &RoundtripReport, used_t: u32, retried: bool) -> String {
    let mut out = String::new();
    for e in &report.entries {
        out.push_str(&format!(
            "index {}: expected {} {}\n",
            e.index,
            e.expected,
            if e.passed { "ok" } else { "MISMATCH" }
        ));
    }
    let verdict = if report.all_passed {
        "passed"
    } else {
        "FAILED"
    };
    let retry_note = if retried {
        ", after one precision retry"
    } else {
        ""
    };
    out.push_str(&format!(
        "round trip {} for {} terms at t = {}{}\n",
        verdict,
        report.entries.len(),
        used_t,
        retry_note
    ));
    out
}

pub fn verify_json(
    report: &RoundtripReport,
    seq: &Sequence,
    used_t: u32,
    retried: bool,
) -> Result<String, millscale_core::Error> {
    let doc = VerifyDoc {
        c: report.c,
        variant: report.variant.to_string(),
        seed: seq.seed.to_string(),
        frac_digits: used_t,
        retried,
        entries: report
            .entries
            .iter()
            .map(|e| VerifyEntryDoc {
                index: e.index,
                expected: e.expected.to_string(),
                passed: e.passed,
            })
            .collect(),
        all_passed: report.all_passed,
    };
    Ok(pretty(&doc)?)
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct LemmaDoc {
    pub c: u32,
    pub n_min: u64,
    pub n_max: u64,
    pub violations: Vec<u64>,
    pub worst_margin: Option<LemmaMarginDoc>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct LemmaMarginDoc {
    pub n: u64,
    pub prime: String,
    pub slack_low: String,
    pub slack_high: String,
}

pub fn lemma_text(report: &LemmaReport) -> String {
    let mut out = format!(
        "c = {}, N in [{}, {}]\n",
        report.c, report.n_min, report.n_max
    );
    if report.violations.is_empty() {
        out.push_str("violations: none\n");
    } else {
        let list: Vec<String> = report.violations.iter().map(u64::to_string).collect();
        out.push_str(&format!("violations: {}\n", list.join(" ")));
    }
    if let Some(w) = &report.worst_margin {
        out.push_str(&format!(
            "worst margin: N = {}, prime = {}, slack_low = {}, slack_high = {}\n",
            w.n, w.prime, w.slack_low, w.slack_high
        ));
    }
    out
}

pub fn lemma_json(report: &LemmaReport) -> Result<String, millscale_core::Error> {
    let doc = LemmaDoc {
        c: report.c,
        n_min: report.n_min,
        n_max: report.n_max,
        violations: report.violations.clone(),
        worst_margin: report.worst_margin.as_ref().map(|w| LemmaMarginDoc {
            n: w.n,
            prime: w.prime.to_string(),
            slack_low: w.slack_low.to_string(),
            slack_high: w.slack_high.to_string(),
        }),
    };
    Ok(pretty(&doc)?)
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct BenchDoc {
    pub scale: u32,
    pub digits: u32,
    pub target: String,
    pub prime: String,
    pub stats: SearchStats,
}

pub fn bench_text(
    scale: u32,
    digits: u32,
    target: &Natural,
    prime: &Natural,
    stats: &SearchStats,
) -> String {
    format!(
        "scale = {scale} ({digits} digits)\ntarget = {target}\nprime = {prime}\n\
         candidates_examined = {}\nsieve_eliminated = {}\nmr_tests_run = {}\n\
         elapsed_seconds = {:.6}\n",
        stats.candidates_examined,
        stats.sieve_eliminated,
        stats.mr_tests_run,
        stats.elapsed_seconds
    )
}

pub fn bench_json(
    scale: u32,
    digits: u32,
    target: &Natural,
    prime: &Natural,
    stats: &SearchStats,
) -> Result<String, millscale_core::Error> {
    let doc = BenchDoc {
        scale,
        digits,
        target: target.to_string(),
        prime: prime.to_string(),
        stats: stats.clone(),
    };
    Ok(pretty(&doc)?)
}

//! Exact decimal fixed point with directed rounding.
//!
//! A [`FixedDec`] is `mantissa / 10^frac_digits` with an arbitrary-precision
//! nonnegative mantissa, so no value is ever silently rounded in binary. The
//! root and power kernels take an explicit [`Rounding`] direction and maintain
//! `Down <= exact <= Up` end to end; the digit certification layer depends on
//! that guarantee and on nothing else.
//!
//! `x^(c^-n)` is computed as `n` iterated c-th roots rather than one `c^n`-th
//! root: a single root of `x * 10^(c^n * t)` would need a mantissa of millions
//! of digits already at `n = 8`, `t = 620`, while the iterated form costs `n`
//! root extractions at roughly `t`-digit scale with a few guard digits.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::Natural;

/// Hard ceiling for `pow_fixed` exponents; 3^40 covers every round-trip depth
/// reachable on a desk while rejecting runaway inputs.
static MAX_POW_EXPONENT: Lazy<Natural> = Lazy::new(|| Natural::from(3u32).pow(40));

/// 10^k.
pub fn pow10(k: u32) -> Natural {
    Natural::from(10u32).pow(k)
}

/// Rounding direction. `Down` never exceeds the exact value, `Up` never
/// undershoots it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

/// Exact decimal fixed-point value `mantissa / 10^frac_digits`.
///
/// Comparisons are value comparisons: `1.20` equals `1.2`.
#[derive(Debug, Clone)]
pub struct FixedDec {
    mantissa: Natural,
    frac_digits: u32,
}

impl FixedDec {
    pub fn new(mantissa: Natural, frac_digits: u32) -> Self {
        FixedDec {
            mantissa,
            frac_digits,
        }
    }

    pub fn from_natural(n: Natural) -> Self {
        FixedDec {
            mantissa: n,
            frac_digits: 0,
        }
    }

    pub fn one(frac_digits: u32) -> Self {
        FixedDec {
            mantissa: pow10(frac_digits),
            frac_digits,
        }
    }

    pub fn mantissa(&self) -> &Natural {
        &self.mantissa
    }

    pub fn frac_digits(&self) -> u32 {
        self.frac_digits
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    /// Change the fractional digit count, rounding in `mode` when digits are
    /// dropped. Widening is exact.
    pub fn rescale(&self, frac_digits: u32, mode: Rounding) -> FixedDec {
        match frac_digits.cmp(&self.frac_digits) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => FixedDec {
                mantissa: &self.mantissa * pow10(frac_digits - self.frac_digits),
                frac_digits,
            },
            Ordering::Less => {
                let (q, r) = self
                    .mantissa
                    .div_rem(&pow10(self.frac_digits - frac_digits));
                let m = match mode {
                    Rounding::Down => q,
                    Rounding::Up if r.is_zero() => q,
                    Rounding::Up => q + 1u32,
                };
                FixedDec {
                    mantissa: m,
                    frac_digits,
                }
            }
        }
    }

    /// `floor(value * 10^t)` as an integer, computed exactly.
    pub fn floor_shifted(&self, t: u32) -> Natural {
        if t >= self.frac_digits {
            &self.mantissa * pow10(t - self.frac_digits)
        } else {
            &self.mantissa / pow10(self.frac_digits - t)
        }
    }

    pub fn floor(&self) -> Natural {
        self.floor_shifted(0)
    }

    pub fn ceil(&self) -> Natural {
        self.mantissa.div_ceil(&pow10(self.frac_digits))
    }

    /// Multiply and round the exact product to `frac_digits` in `mode`.
    pub fn mul_round(&self, other: &FixedDec, frac_digits: u32, mode: Rounding) -> FixedDec {
        FixedDec {
            mantissa: &self.mantissa * &other.mantissa,
            frac_digits: self.frac_digits + other.frac_digits,
        }
        .rescale(frac_digits, mode)
    }

    /// Mantissa distance between two values carrying the same `frac_digits`.
    /// Panics if the scales differ; tests use it for ulp-tolerance asserts.
    pub fn ulp_distance(&self, other: &FixedDec) -> Natural {
        assert_eq!(self.frac_digits, other.frac_digits, "ulp scale mismatch");
        if self.mantissa >= other.mantissa {
            &self.mantissa - &other.mantissa
        } else {
            &other.mantissa - &self.mantissa
        }
    }

    pub fn to_decimal_string(&self) -> String {
        if self.frac_digits == 0 {
            return self.mantissa.to_string();
        }
        let (int, frac) = self.mantissa.div_rem(&pow10(self.frac_digits));
        format!(
            "{int}.{frac:0>width$}",
            frac = frac.to_string(),
            width = self.frac_digits as usize
        )
    }
}

impl PartialEq for FixedDec {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for FixedDec {}

impl PartialOrd for FixedDec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FixedDec {
    fn cmp(&self, other: &Self) -> Ordering {
        // Cross-scale to the finer grid; scaling up is exact.
        if self.frac_digits == other.frac_digits {
            self.mantissa.cmp(&other.mantissa)
        } else if self.frac_digits > other.frac_digits {
            let scaled = &other.mantissa * pow10(self.frac_digits - other.frac_digits);
            self.mantissa.cmp(&scaled)
        } else {
            let scaled = &self.mantissa * pow10(other.frac_digits - self.frac_digits);
            scaled.cmp(&other.mantissa)
        }
    }
}

impl fmt::Display for FixedDec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl FromStr for FixedDec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (int, frac) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        let digits: String = format!("{int}{frac}");
        let mantissa = digits
            .parse::<Natural>()
            .map_err(|e| Error::InvalidArgument(format!("bad decimal {s:?}: {e}")))?;
        Ok(FixedDec {
            mantissa,
            frac_digits: frac.len() as u32,
        })
    }
}

/// `floor(x^(1/r))`: the unique `y` with `y^r <= x < (y+1)^r`.
///
/// Newton iteration on integers from a bit-length seed that is provably at or
/// above the root; termination and the final answer rest on exact integer
/// comparisons only.
pub fn int_root(x: &Natural, r: u32) -> Result<Natural> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!(
            "int_root requires r >= 2, got {r}"
        )));
    }
    if x.is_zero() || x.is_one() {
        return Ok(x.clone());
    }
    let bits = x.bits();
    if u64::from(r) >= bits {
        // x < 2^r and x >= 2 means 1 <= x^(1/r) < 2.
        return Ok(Natural::one());
    }
    // 2^ceil(bits/r) >= x^(1/r), so the iteration approaches from above.
    let mut y: Natural = Natural::one() << bits.div_ceil(u64::from(r));
    loop {
        let next = (&y * (r - 1) + x / y.pow(r - 1)) / r;
        if next >= y {
            break;
        }
        y = next;
    }
    while y.pow(r) > *x {
        y -= 1u32;
    }
    debug_assert!((&y + 1u32).pow(r) > *x);
    Ok(y)
}

/// r-th root of a fixed-point value at `t_out` fractional digits.
///
/// `Down` is the greatest `t_out`-digit value `y` with `y^r <= x`; `Up` equals
/// `Down` when the root is exact and `Down + 1` ulp otherwise.
pub fn root_fixed(x: &FixedDec, r: u32, t_out: u32, mode: Rounding) -> Result<FixedDec> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!(
            "root_fixed requires r >= 2, got {r}"
        )));
    }
    // floor(x^(1/r) * 10^t_out) = floor((m * 10^(r*t_out - t_x))^(1/r)),
    // using floor(z^(1/r)) = floor(floor(z)^(1/r)) when the shift is negative.
    let shift = i64::from(r) * i64::from(t_out) - i64::from(x.frac_digits());
    let (scaled, divisible) = if shift >= 0 {
        (x.mantissa() * pow10(shift as u32), true)
    } else {
        let (q, rem) = x.mantissa().div_rem(&pow10((-shift) as u32));
        (q, rem.is_zero())
    };
    let y = int_root(&scaled, r)?;
    let exact = divisible && y.pow(r) == scaled;
    let m = match mode {
        Rounding::Down => y,
        Rounding::Up if exact => y,
        Rounding::Up => y + 1u32,
    };
    Ok(FixedDec::new(m, t_out))
}

fn decimal_len(n: u64) -> u32 {
    n.to_string().len() as u32
}

/// Guard digits carried through an iterated root of `depth` stages with
/// exponent `c`. Directed rounding keeps the result trustworthy at any guard
/// count; the count only decides how many digits survive certification.
fn iter_guard_digits(depth: u32, c: u32) -> u32 {
    10 + decimal_len(u64::from(depth) * u64::from(c))
}

/// `x^(c^-depth)` at `t_out` fractional digits: `depth` iterated c-th roots,
/// each carried at `t_out` plus guard digits and rounded per `mode`, then one
/// final directed rescale. `Down <= x^(c^-depth) <= Up` holds end to end.
pub fn iter_root(x: &Natural, c: u32, depth: u32, t_out: u32, mode: Rounding) -> Result<FixedDec> {
    iter_root_fixed(&FixedDec::from_natural(x.clone()), c, depth, t_out, mode)
}

/// [`iter_root`] generalized over fixed-point inputs.
pub fn iter_root_fixed(
    x: &FixedDec,
    c: u32,
    depth: u32,
    t_out: u32,
    mode: Rounding,
) -> Result<FixedDec> {
    if c < 2 {
        return Err(Error::InvalidArgument(format!(
            "iter_root requires c >= 2, got {c}"
        )));
    }
    if depth == 0 {
        return Err(Error::InvalidArgument(
            "iter_root requires depth >= 1".into(),
        ));
    }
    let t = t_out + iter_guard_digits(depth, c);
    let mut cur = x.clone();
    for _ in 0..depth {
        cur = root_fixed(&cur, c, t, mode)?;
    }
    Ok(cur.rescale(t_out, mode))
}

/// `x^e` by binary exponentiation. Every intermediate product is rounded to
/// `t_out` plus guard digits in direction `mode`, the final value to `t_out`,
/// so the directed guarantee holds end to end for nonnegative `x`.
pub fn pow_fixed(x: &FixedDec, e: &Natural, t_out: u32, mode: Rounding) -> Result<FixedDec> {
    if *e > *MAX_POW_EXPONENT {
        return Err(Error::ExponentTooLarge {
            exponent: e.clone(),
        });
    }
    if e.is_zero() {
        return Ok(FixedDec::one(t_out));
    }
    let t = t_out + 10 + e.to_string().len() as u32;
    let base = x.rescale(t, mode);
    let mut acc = base.clone();
    for i in (0..e.bits() - 1).rev() {
        acc = acc.mul_round(&acc, t, mode);
        if e.bit(i) {
            acc = acc.mul_round(&base, t, mode);
        }
    }
    Ok(acc.rescale(t_out, mode))
}

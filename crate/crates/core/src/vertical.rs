//! The vertical quadratic mean `Av_m(N,k)` and the classification of the
//! spaces with `Av_2(N,k) ≤ 1`.
//!
//! `Av_m(N,k)² = (1/s) Σ_{d | m} Tr T'_{m²/d²}` with `s = dim S_k(Γ₀(N))`; every
//! index `m²/d²` is a square, so the value is an exact rational.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::arith::{self, rational, ExactRational};
use crate::error::{Error, Result};
use crate::trace::{LevelWeight, TraceCache, TracePlan};

/// Odd levels below this are searched by computer; above it the explicit
/// constants make the lower bound on `Tr T'_4` positive for every weight.
pub const LEVEL_LIMIT: u64 = 150_000;

/// Significant digits of the decimal column.
pub const DECIMAL_DIGITS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvSquared {
    pub space: LevelWeight,
    pub m: u64,
    pub value: ExactRational,
}

/// `q·√r` with `r` square-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalForm {
    pub rational_part: ExactRational,
    pub radicand: BigUint,
}

impl RadicalForm {
    /// The non-negative square root of a non-negative rational, as `q·√r`.
    pub fn from_square(square: &ExactRational) -> Result<Self> {
        if square.is_negative() {
            return Err(Error::OutOfRange(format!("negative square {square}")));
        }
        if square.is_zero() {
            return Ok(RadicalForm {
                rational_part: ExactRational::zero(),
                radicand: BigUint::one(),
            });
        }
        // a/b = (sa² ra)/(sb² rb) = (sa/(sb rb))² · ra rb; ra, rb coprime.
        let (sa, ra) = arith::square_free_decomposition(square.numer().magnitude());
        let (sb, rb) = arith::square_free_decomposition(square.denom().magnitude());
        Ok(RadicalForm {
            rational_part: BigRational::new(BigInt::from(sa), BigInt::from(sb * &rb)),
            radicand: ra * rb,
        })
    }

    pub fn square(&self) -> ExactRational {
        &self.rational_part * &self.rational_part * BigInt::from(self.radicand.clone())
    }

    pub fn to_f64(&self) -> f64 {
        self.rational_part.to_f64().unwrap_or(f64::NAN) * self.radicand.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    fn rational_text(&self) -> String {
        let q = &self.rational_part;
        if q.is_integer() {
            q.numer().to_string()
        } else {
            format!("{}/{}", q.numer(), q.denom())
        }
    }

    /// Machine form: `3/8*sqrt(2)`, `1`, `0`, `sqrt(3)`.
    pub fn exact_text(&self) -> String {
        if self.rational_part.is_zero() {
            "0".into()
        } else if self.radicand.is_one() {
            self.rational_text()
        } else if self.rational_part.is_one() {
            format!("sqrt({})", self.radicand)
        } else {
            format!("{}*sqrt({})", self.rational_text(), self.radicand)
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "num": self.rational_part.numer().to_string(),
            "den": self.rational_part.denom().to_string(),
            "radicand": self.radicand.to_string(),
        })
    }

    /// Correctly rounded decimal with `digits` significant digits (round half
    /// to even), derived from exact integer square roots.
    pub fn decimal(&self, digits: usize) -> String {
        assert!(digits >= 1);
        let square = self.square();
        if square.is_zero() {
            return "0".into();
        }
        let num = square.numer().magnitude().clone();
        let den = square.denom().magnitude().clone();
        let ten = BigUint::from(10u32);
        let lower = ten.pow(digits as u32 - 1);
        let upper = ten.pow(digits as u32);
        // value·10^shift has `digits` integer digits.
        let mut exponent = self.to_f64().log10().floor() as i64;
        let scaled = |exponent: i64| -> (BigUint, BigUint) {
            let shift = digits as i64 - 1 - exponent;
            if shift >= 0 {
                (&num * ten.pow(2 * shift as u32), den.clone())
            } else {
                (num.clone(), &den * ten.pow((-2 * shift) as u32))
            }
        };
        let (mut n, mut d, mut floor) = (BigUint::zero(), BigUint::one(), BigUint::zero());
        for _ in 0..4 {
            (n, d) = scaled(exponent);
            floor = (&n / &d).sqrt();
            if floor < lower {
                exponent -= 1;
            } else if floor >= upper {
                exponent += 1;
            } else {
                break;
            }
        }
        // Compare value·10^shift with floor + 1/2 via (2·floor + 1)²·d vs 4n.
        let twice = &floor * 2u32 + 1u32;
        let lhs = &twice * &twice * &d;
        let rhs = &n * 4u32;
        let mut rounded = match lhs.cmp(&rhs) {
            std::cmp::Ordering::Less => &floor + 1u32,
            std::cmp::Ordering::Equal if floor.is_odd() => &floor + 1u32,
            _ => floor,
        };
        if rounded == upper {
            rounded = lower.clone();
            exponent += 1;
        }
        let text = rounded.to_string();
        if exponent >= 0 {
            let int_len = exponent as usize + 1;
            if int_len >= text.len() {
                format!("{text}{}", "0".repeat(int_len - text.len()))
            } else {
                format!("{}.{}", &text[..int_len], &text[int_len..])
            }
        } else {
            format!("0.{}{text}", "0".repeat((-exponent - 1) as usize))
        }
    }
}

/// Renders as `(a/b)·sqrt(c)`.
impl fmt::Display for RadicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = &self.rational_part;
        if q.is_zero() {
            return write!(f, "0");
        }
        let qs = if q.is_integer() {
            q.numer().to_string()
        } else {
            format!("({}/{})", q.numer(), q.denom())
        };
        match (self.radicand.is_one(), q.is_one()) {
            (true, _) => write!(f, "{}", self.rational_text()),
            (false, true) => write!(f, "sqrt({})", self.radicand),
            (false, false) => write!(f, "{qs}·sqrt({})", self.radicand),
        }
    }
}

pub fn av_squared(space: LevelWeight, m: u64) -> Result<AvSquared> {
    av_squared_with(&TraceCache::new(), space, m)
}

pub fn av_squared_with(cache: &TraceCache, space: LevelWeight, m: u64) -> Result<AvSquared> {
    if m == 0 {
        return Err(Error::Zero("m"));
    }
    if m.gcd(&space.level()) != 1 {
        return Err(Error::NotCoprime {
            m,
            level: space.level(),
        });
    }
    let s = cache.dim(space);
    if s == 0 {
        return Err(Error::ZeroDimensional {
            level: space.level(),
            weight: space.weight(),
        });
    }
    let mut total = ExactRational::zero();
    for d in arith::divisors(m)? {
        total += cache.normalized(space, (m / d) * (m / d))?.value;
    }
    Ok(AvSquared {
        space,
        m,
        value: total / BigInt::from(s),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AvValue {
    pub squared: AvSquared,
    pub decimal: f64,
    pub radical: RadicalForm,
}

pub fn av(space: LevelWeight, m: u64) -> Result<AvValue> {
    let squared = av_squared(space, m)?;
    let radical = RadicalForm::from_square(&squared.value)?;
    Ok(AvValue {
        decimal: radical.to_f64(),
        radical,
        squared,
    })
}

fn check_odd(space: LevelWeight) -> Result<()> {
    if space.level().is_multiple_of(2) {
        return Err(Error::OutOfRange(format!(
            "level {} must be odd for the T_4 bound",
            space.level()
        )));
    }
    Ok(())
}

/// Rigorous lower bound
/// `ψ(N)[(k−1)/24 − (14·2^ω/ψ + ½·2^ω√N/ψ)]` for `Tr T'_4(N,k)`, with `√N`
/// replaced by the rational upper estimate `⌊√N⌋ + 1`.
pub fn t4_lower_bound(space: LevelWeight) -> Result<ExactRational> {
    check_odd(space)?;
    let n = space.level();
    let psi = arith::psi(n)?;
    let two_omega = 1i64 << arith::omega(n)?;
    let sqrt_upper = arith::isqrt(n) as i64 + 1;
    let main = rational((space.weight() as i64 - 1) * psi as i64, 24);
    Ok(main - rational(14 * two_omega, 1) - rational(two_omega * sqrt_upper, 2))
}

/// Smallest even weight at which [`t4_lower_bound`] is positive; it stays
/// positive for all larger weights since only the `(k−1)/24` term grows.
pub fn cutoff_weight(level: u64) -> Result<u32> {
    let psi = arith::psi(level)?;
    let two_omega = 1u64 << arith::omega(level)?;
    // (k−1)ψ > 12·2^ω·(28 + ⌊√N⌋ + 1)
    let rhs = 12 * two_omega * (29 + arith::isqrt(level));
    let mut k = (rhs / psi + 2) as u32;
    if k % 2 == 1 {
        k += 1;
    }
    Ok(k.max(2))
}

/// The explicit constants valid for `N ≥ 150000`:
/// `2^ω/ψ ≤ 0.000147` and `2^ω√N/ψ ≤ 0.0607`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailCertificate {
    pub omega_ratio_bound: ExactRational,
    pub sqrt_ratio_bound: ExactRational,
    pub error_total: ExactRational,
    pub threshold: ExactRational,
    pub holds: bool,
}

pub fn tail_certificate() -> TailCertificate {
    let omega_ratio_bound = rational(147, 1_000_000);
    let sqrt_ratio_bound = rational(607, 10_000);
    let error_total = rational(14, 1) * &omega_ratio_bound + rational(1, 2) * &sqrt_ratio_bound;
    let threshold = rational(1, 24);
    TailCertificate {
        holds: error_total < threshold,
        omega_ratio_bound,
        sqrt_ratio_bound,
        error_total,
        threshold,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutoffEntry {
    pub level: u64,
    pub cutoff_weight: u32,
    /// `t4_lower_bound(N, cutoff_weight)`, positive.
    pub bound_at_cutoff: ExactRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchCertificate {
    pub level_limit: u64,
    /// One entry per odd level below the limit, sorted by level.
    pub entries: Vec<CutoffEntry>,
    pub pairs_checked: u64,
    pub tail: TailCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifiedPair {
    pub space: LevelWeight,
    pub av_squared: ExactRational,
    pub av: RadicalForm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationResult {
    pub pairs: Vec<ClassifiedPair>,
    pub search_certificate: SearchCertificate,
}

impl ClassificationResult {
    /// `N,k,av_exact,av_decimal`, one row per pair.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,k,av_exact,av_decimal\n");
        for p in &self.pairs {
            out.push_str(&format!(
                "{},{},{},{}\n",
                p.space.level(),
                p.space.weight(),
                p.av.exact_text(),
                p.av.decimal(DECIMAL_DIGITS)
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let cert = &self.search_certificate;
        let nontrivial: Vec<_> = cert
            .entries
            .iter()
            .filter(|e| e.cutoff_weight > 2)
            .map(|e| {
                json!({
                    "N": e.level,
                    "cutoff_k": e.cutoff_weight,
                    "bound_at_cutoff": e.bound_at_cutoff.to_string(),
                })
            })
            .collect();
        json!({
            "pairs": self.pairs.iter().map(|p| json!({
                "N": p.space.level(),
                "k": p.space.weight(),
                "av_squared": p.av_squared.to_string(),
                "av": p.av.to_json(),
                "av_exact": p.av.exact_text(),
                "av_decimal": p.av.decimal(DECIMAL_DIGITS),
            })).collect::<Vec<_>>(),
            "certificate": {
                "level_limit": cert.level_limit,
                "levels_searched": cert.entries.len(),
                "pairs_checked": cert.pairs_checked,
                "levels_with_cutoff_above_2": nontrivial,
                "tail": {
                    "omega_ratio_bound": cert.tail.omega_ratio_bound.to_string(),
                    "sqrt_ratio_bound": cert.tail.sqrt_ratio_bound.to_string(),
                    "error_total": cert.tail.error_total.to_string(),
                    "threshold": cert.tail.threshold.to_string(),
                    "holds": cert.tail.holds,
                },
            },
        })
    }
}

struct LevelOutcome {
    entry: CutoffEntry,
    pairs: Vec<ClassifiedPair>,
    checked: u64,
}

fn classify_level(cache: &TraceCache, level: u64) -> Result<LevelOutcome> {
    let cutoff = cutoff_weight(level)?;
    let bound_at_cutoff = t4_lower_bound(LevelWeight::new(level, cutoff)?)?;
    if !bound_at_cutoff.is_positive() {
        return Err(Error::Integrity(format!("bound not positive at N={level}, k={cutoff}")));
    }
    if cutoff > 2 && t4_lower_bound(LevelWeight::new(level, cutoff - 2)?)?.is_positive() {
        return Err(Error::Integrity(format!("cutoff for N={level} is not minimal")));
    }
    let mut pairs = Vec::new();
    let mut checked = 0;
    if cutoff > 2 {
        let dim_plan = TracePlan::new(level, 1)?;
        let t4_plan = TracePlan::new(level, 4)?;
        for k in (2..cutoff).step_by(2) {
            let s = cache.trace_with_plan(&dim_plan, k)?;
            if s.is_zero() {
                continue;
            }
            checked += 1;
            let t4 = cache.trace_with_plan(&t4_plan, k)?;
            // Av₂² = 1 + Tr T'_4 / s, so Av₂ ≤ 1 exactly when Tr T_4 ≤ 0.
            if !t4.is_positive() {
                let space = LevelWeight::new(level, k)?;
                let normalized = BigRational::new(t4, BigInt::from(2).pow(k - 1));
                let square = ExactRational::one() + normalized / s;
                pairs.push(ClassifiedPair {
                    space,
                    av: RadicalForm::from_square(&square)?,
                    av_squared: square,
                });
            }
        }
    }
    Ok(LevelOutcome {
        entry: CutoffEntry {
            level,
            cutoff_weight: cutoff,
            bound_at_cutoff,
        },
        pairs,
        checked,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    pub level_limit: u64,
    /// Levels per progress report.
    pub chunk: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            level_limit: LEVEL_LIMIT,
            chunk: 10_000,
        }
    }
}

/// Every `(N, k)` with `N` odd, `k ≥ 2` even, `s(N,k) > 0` and `Av_2(N,k) ≤ 1`.
pub fn classify_av2_le_1() -> Result<ClassificationResult> {
    classify_with(ClassifyOptions::default(), &TraceCache::new(), &|_, _| {})
}

/// As [`classify_av2_le_1`], with a shared trace cache and a progress hook
/// called as `progress(levels_done_below, level_limit)` after each chunk.
/// Runs on the ambient rayon pool; output does not depend on its size.
pub fn classify_with(
    options: ClassifyOptions,
    cache: &TraceCache,
    progress: &(dyn Fn(u64, u64) + Sync),
) -> Result<ClassificationResult> {
    let tail = tail_certificate();
    if !tail.holds {
        return Err(Error::Integrity("explicit constants do not close the tail".into()));
    }
    let limit = options.level_limit;
    let chunk = options.chunk.max(2);
    let mut outcomes = Vec::new();
    let mut start = 1u64;
    while start < limit {
        let end = (start + chunk).min(limit);
        let levels: Vec<u64> = (start..end).filter(|n| n % 2 == 1).collect();
        let batch = levels
            .into_par_iter()
            .map(|n| classify_level(cache, n))
            .collect::<Result<Vec<_>>>()?;
        outcomes.extend(batch);
        progress(end, limit);
        start = end;
    }
    outcomes.sort_by_key(|o| o.entry.level);
    let pairs_checked = outcomes.iter().map(|o| o.checked).sum();
    let mut pairs: Vec<ClassifiedPair> = Vec::new();
    let mut entries = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        pairs.extend(o.pairs);
        entries.push(o.entry);
    }
    pairs.sort_by_key(|p| (p.space.level(), p.space.weight()));
    Ok(ClassificationResult {
        pairs,
        search_certificate: SearchCertificate {
            level_limit: limit,
            entries,
            pairs_checked,
            tail,
        },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub space: LevelWeight,
    /// `(Av_m, limit, |Av_m − limit|)` or the reason the space was rejected.
    pub outcome: std::result::Result<(f64, f64, f64), String>,
}

/// `√(σ₁(m)/m)`, the limit of `Av_m(N,k)` as `N + k → ∞`.
pub fn vertical_limit(m: u64) -> Result<f64> {
    let s = arith::sigma(m, 1)?.to_f64().unwrap_or(f64::NAN);
    Ok((s / m as f64).sqrt())
}

pub fn vertical_convergence(m: u64, spaces: &[LevelWeight]) -> Result<Vec<ConvergenceRow>> {
    let limit = vertical_limit(m)?;
    let cache = TraceCache::new();
    Ok(spaces
        .iter()
        .map(|&space| ConvergenceRow {
            space,
            outcome: av_squared_with(&cache, space, m)
                .and_then(|sq| RadicalForm::from_square(&sq.value))
                .map(|r| {
                    let av = r.to_f64();
                    (av, limit, (av - limit).abs())
                })
                .map_err(|e| e.to_string()),
        })
        .collect())
}

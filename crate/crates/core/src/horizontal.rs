//! Horizontal statistics of a single form: partial quadratic means of the
//! normalized coefficients, the Rankin–Selberg limit, and the limiting
//! measures of the normalized prime coefficients.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::ddouble::DDouble;
use crate::error::{Error, Result};
use crate::level1::CoefficientSeries;
use crate::quadrature;

/// `⟨Δ,Δ⟩^{1/2}`, the Petersson norm of `Δ`.
pub const DELTA_PETERSSON_NORM: f64 = 0.001017527;

pub const DEFAULT_R_GRID: [f64; 7] = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0];
pub const AGREEMENT_TOLERANCE: f64 = 1e-8;
pub const MOMENT_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_EPSILON: f64 = 0.5;
pub const DEFAULT_SCAN_LIMIT: usize = 100_000;

const BLOCK: usize = 4096;

/// Number of divisors of every `m ≤ n`; index 0 unused.
pub fn divisor_counts(n: usize) -> Vec<u32> {
    let mut d = vec![0u32; n + 1];
    for i in 1..=n {
        for j in (i..=n).step_by(i) {
            d[j] += 1;
        }
    }
    d
}

/// `a′(m) = a(m)/m^{(k−1)/2}` for a normalized eigenform.
#[derive(Debug, Clone)]
pub struct NormalizedSeries {
    pub label: String,
    /// Present when built from integral coefficients.
    pub base: Option<CoefficientSeries>,
    values: Vec<DDouble>,
}

impl NormalizedSeries {
    /// Normalizes integral coefficients, checking `a(1) = 1` and the Deligne
    /// bound `a(m)² ≤ σ₀(m)²·m^{k−1}` exactly.
    pub fn new(base: CoefficientSeries) -> Result<Self> {
        if base.is_empty() {
            return Err(Error::OutOfRange("empty coefficient series".into()));
        }
        if !base.values[0].is_one() {
            return Err(Error::Integrity(format!(
                "{}: a(1) = {}, expected 1",
                base.label, base.values[0]
            )));
        }
        if base.weight < 2 || base.weight % 2 == 1 {
            return Err(Error::BadWeight(base.weight));
        }
        let d = divisor_counts(base.len());
        let exponent = base.weight - 1;
        let values = base
            .values
            .par_iter()
            .enumerate()
            .map(|(i, a)| {
                let m = i + 1;
                let power = BigInt::from(m).pow(exponent);
                let square = a * a;
                let bound = BigInt::from(d[m]).pow(2) * &power;
                if square > bound {
                    return Err(Error::Integrity(format!(
                        "{}: |a'({m})| exceeds the divisor bound {}",
                        base.label, d[m]
                    )));
                }
                let magnitude = (DDouble::from_bigint(&square) / DDouble::from_bigint(&power)).sqrt();
                Ok(if a.is_negative() { -magnitude } else { magnitude })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NormalizedSeries {
            label: base.label.clone(),
            base: Some(base),
            values,
        })
    }

    /// Takes already normalized values; checks `a′(1) = 1` and
    /// `|a′(m)| ≤ σ₀(m)` up to a relative slack of `1e-12`.
    pub fn from_normalized(label: impl Into<String>, values: Vec<DDouble>) -> Result<Self> {
        let label = label.into();
        if values.is_empty() {
            return Err(Error::OutOfRange("empty coefficient series".into()));
        }
        if (values[0] - DDouble::ONE).abs().to_f64() > 1e-12 {
            return Err(Error::Integrity(format!("{label}: a'(1) = {}, expected 1", values[0].to_f64())));
        }
        let d = divisor_counts(values.len());
        for (i, v) in values.iter().enumerate() {
            let bound = d[i + 1] as f64;
            if v.abs().to_f64() > bound * (1.0 + 1e-12) {
                return Err(Error::Integrity(format!(
                    "{label}: |a'({})| exceeds the divisor bound {bound}",
                    i + 1
                )));
            }
        }
        Ok(NormalizedSeries {
            label,
            base: None,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[DDouble] {
        &self.values
    }

    /// `a′(m)`, 1-based.
    pub fn get(&self, m: usize) -> Result<DDouble> {
        if m == 0 || m > self.values.len() {
            return Err(Error::Precision {
                needed: m,
                available: self.values.len(),
            });
        }
        Ok(self.values[m - 1])
    }
}

/// `Σ_{m ≤ x} a′(m)²`, summed blockwise and combined by a fixed pairwise tree.
pub fn sum_of_squares(series: &NormalizedSeries, x: usize) -> Result<DDouble> {
    if x == 0 {
        return Err(Error::Zero("x"));
    }
    if x > series.len() {
        return Err(Error::Precision {
            needed: x,
            available: series.len(),
        });
    }
    let mut level: Vec<DDouble> = series.values[..x]
        .par_chunks(BLOCK)
        .map(|c| c.iter().map(|v| v.sqr()).sum())
        .collect();
    while level.len() > 1 {
        level = level
            .chunks(2)
            .map(|p| if p.len() == 2 { p[0] + p[1] } else { p[0] })
            .collect();
    }
    Ok(level[0])
}

/// `Av_f(x) = √((1/x) Σ_{m ≤ x} a′(m)²)`.
pub fn avf_partial(series: &NormalizedSeries, x: usize) -> Result<f64> {
    Ok(avf_partial_dd(series, x)?.to_f64())
}

pub fn avf_partial_dd(series: &NormalizedSeries, x: usize) -> Result<DDouble> {
    Ok((sum_of_squares(series, x)? / DDouble::from(x as f64)).sqrt())
}

/// `lim Av_f(x) = √(12·(4π)^{k−1}/(k−1)! · ⟨f,f⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitConstant {
    pub weight: u32,
    pub petersson_norm_sq: f64,
    pub value: f64,
}

impl LimitConstant {
    pub fn from_norm_sq(weight: u32, petersson_norm_sq: f64) -> Result<Self> {
        if weight < 2 || weight % 2 == 1 {
            return Err(Error::BadWeight(weight));
        }
        if !(petersson_norm_sq > 0.0 && petersson_norm_sq.is_finite()) {
            return Err(Error::OutOfRange(format!("Petersson norm {petersson_norm_sq} must be positive")));
        }
        Ok(LimitConstant {
            weight,
            petersson_norm_sq,
            value: (residue_factor(weight) * petersson_norm_sq).sqrt(),
        })
    }

    pub fn petersson_norm(&self) -> f64 {
        self.petersson_norm_sq.sqrt()
    }
}

/// `12·(4π)^{k−1}/(k−1)!`, accumulated as a product of moderate factors.
pub fn residue_factor(weight: u32) -> f64 {
    (1..weight).fold(12.0, |acc, j| acc * (4.0 * PI / j as f64))
}

/// The limit for a form of Petersson norm `‖f‖ = ⟨f,f⟩^{1/2}`.
pub fn avf_limit(weight: u32, petersson_norm: f64) -> Result<LimitConstant> {
    if !(petersson_norm > 0.0 && petersson_norm.is_finite()) {
        return Err(Error::OutOfRange(format!("Petersson norm {petersson_norm} must be positive")));
    }
    LimitConstant::from_norm_sq(weight, petersson_norm * petersson_norm)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergencePoint {
    pub x: usize,
    pub avf: f64,
    pub gap: f64,
}

pub fn convergence_trace(
    series: &NormalizedSeries,
    limit: &LimitConstant,
    checkpoints: &[usize],
) -> Result<Vec<ConvergencePoint>> {
    checkpoints
        .iter()
        .map(|&x| {
            let avf = avf_partial(series, x)?;
            Ok(ConvergencePoint {
                x,
                avf,
                gap: (avf - limit.value).abs(),
            })
        })
        .collect()
}

/// Limiting distributions on `[−2, 2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitMeasure {
    /// Eigenvalues of `T′_p` over growing spaces.
    Serre(u64),
    SatoTate,
    /// Half an atom at 0 plus an arcsine-type density.
    Cm,
}

impl fmt::Display for LimitMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitMeasure::Serre(p) => write!(f, "serre({p})"),
            LimitMeasure::SatoTate => write!(f, "sato_tate"),
            LimitMeasure::Cm => write!(f, "cm"),
        }
    }
}

impl LimitMeasure {
    pub fn serre(p: u64) -> Result<Self> {
        if p < 2 || crate::arith::factorize(p) != [(p, 1)] {
            return Err(Error::OutOfRange(format!("{p} is not prime")));
        }
        Ok(LimitMeasure::Serre(p))
    }

    /// Mass of the atom at `t = 0`.
    pub fn atom_at_zero(&self) -> f64 {
        match self {
            LimitMeasure::Cm => 0.5,
            _ => 0.0,
        }
    }

    /// Density in `θ` after `t = 2 sin θ`, `θ ∈ [−π/2, π/2]`.
    fn theta_density(&self, theta: f64) -> f64 {
        let c = theta.cos();
        match *self {
            LimitMeasure::SatoTate => 2.0 / PI * c * c,
            LimitMeasure::Cm => 1.0 / (2.0 * PI),
            LimitMeasure::Serre(p) => {
                let p = p as f64;
                let s = theta.sin();
                let shift = p.sqrt() + 1.0 / p.sqrt();
                (p + 1.0) / PI * 2.0 * c * c / (shift * shift - 4.0 * s * s)
            }
        }
    }

    /// Density in `t`; infinite at `±2` for the CM measure.
    pub fn density(&self, t: f64) -> f64 {
        if !(-2.0..=2.0).contains(&t) {
            return 0.0;
        }
        let u = (1.0 - t * t / 4.0).max(0.0).sqrt();
        match *self {
            LimitMeasure::SatoTate => u / PI,
            LimitMeasure::Cm => 1.0 / (4.0 * PI * u),
            LimitMeasure::Serre(p) => {
                let p = p as f64;
                let shift = p.sqrt() + 1.0 / p.sqrt();
                (p + 1.0) / PI * u / (shift * shift - t * t)
            }
        }
    }

    /// `∫ g(t) dμ` over the continuous part, split at `t = 0`.
    fn integrate_continuous<G: Fn(f64) -> f64>(&self, g: G) -> Result<f64> {
        let tol = MOMENT_TOLERANCE / 16.0;
        let f = |theta: f64| g(2.0 * theta.sin()) * self.theta_density(theta);
        Ok(quadrature::integrate(f, -FRAC_PI_2, 0.0, tol)? + quadrature::integrate(f, 0.0, FRAC_PI_2, tol)?)
    }
}

/// `∫|t|^r dμ`, or `∫t^r dμ` when `absolute` is false (integer `r` only).
pub fn measure_moment(measure: LimitMeasure, r: f64, absolute: bool) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::OutOfRange(format!("moment order {r} must be positive")));
    }
    if !absolute && r.fract() != 0.0 {
        return Err(Error::OutOfRange(format!("signed moment needs an integer order, got {r}")));
    }
    // The atom at 0 contributes 0^r = 0.
    if absolute {
        measure.integrate_continuous(|t| t.abs().powf(r))
    } else {
        let n = r as i32;
        measure.integrate_continuous(|t| t.powi(n))
    }
}

/// Total mass, atom included.
pub fn total_mass(measure: LimitMeasure) -> Result<f64> {
    Ok(measure.integrate_continuous(|_| 1.0)? + measure.atom_at_zero())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RthMeanRow {
    pub r: f64,
    pub sato_tate: f64,
    pub cm: f64,
    pub difference: f64,
    pub agrees: bool,
}

/// `(∫|t|^r dμ)^{1/r}` for the Sato–Tate and CM measures.
pub fn rth_mean_comparison(r_grid: &[f64]) -> Result<Vec<RthMeanRow>> {
    if r_grid.is_empty() {
        return Err(Error::OutOfRange("empty r grid".into()));
    }
    r_grid
        .iter()
        .map(|&r| {
            let st = measure_moment(LimitMeasure::SatoTate, r, true)?.powf(1.0 / r);
            let cm = measure_moment(LimitMeasure::Cm, r, true)?.powf(1.0 / r);
            let difference = (st - cm).abs();
            Ok(RthMeanRow {
                r,
                sato_tate: st,
                cm,
                difference,
                agrees: difference < AGREEMENT_TOLERANCE,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanResult {
    pub min_ratio: f64,
    pub argmin: u64,
    pub zero_count: u64,
}

/// Minimum of `|a(m)|/m^{(k−3)/2−ε}` over `m ≤ x_max` with `a(m) ≠ 0`, plus
/// the number of vanishing coefficients.
pub fn atkin_serre_scan(series: &CoefficientSeries, epsilon: f64, x_max: usize) -> Result<ScanResult> {
    let k = series.weight;
    if k < 4 {
        return Err(Error::BadWeight(k));
    }
    let exponent = (k as f64 - 3.0) / 2.0 - epsilon;
    if !(epsilon > 0.0 && exponent > 0.0) {
        return Err(Error::OutOfRange(format!(
            "epsilon {epsilon} must lie in (0, {})",
            (k as f64 - 3.0) / 2.0
        )));
    }
    if x_max == 0 || x_max > series.len() {
        return Err(Error::Precision {
            needed: x_max,
            available: series.len(),
        });
    }
    let mut best: Option<(f64, u64)> = None;
    let mut zero_count = 0;
    for (i, a) in series.values[..x_max].iter().enumerate() {
        let m = (i + 1) as u64;
        if a.is_zero() {
            zero_count += 1;
            continue;
        }
        let ln_a = ln_abs(a);
        let ratio = (ln_a - exponent * (m as f64).ln()).exp();
        if best.is_none_or(|(b, _)| ratio < b) {
            best = Some((ratio, m));
        }
    }
    let (min_ratio, argmin) = best.unwrap_or((f64::INFINITY, 0));
    Ok(ScanResult {
        min_ratio,
        argmin,
        zero_count,
    })
}

fn ln_abs(a: &BigInt) -> f64 {
    let bits = a.bits();
    if bits < 1000 {
        return a.abs().to_f64().expect("fits").ln();
    }
    let shift = bits - 64;
    (a.abs() >> shift).to_f64().expect("fits").ln() + shift as f64 * std::f64::consts::LN_2
}

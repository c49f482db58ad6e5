//! Exact traces of Hecke operators on `S_k(Γ₀(N))` for `gcd(m, N) = 1`.
//!
//! The Eichler–Selberg trace formula with trivial character is
//!
//! ```text
//! Tr T_m = A₁ + A₂ + A₃ + A₄
//! A₁ = [m square] · m^{k/2−1} · (k−1)/12 · ψ(N)
//! A₂ = −½ Σ_{t² < 4m} P_k(t, m) Σ_f h_w((t²−4m)/f²) μ(t, f, N)
//! A₃ = −½ Σ_{d | m} min(d, m/d)^{k−1} Σ_{τ | N, g = gcd(τ, N/τ) | m/d − d} φ(g)
//! A₄ = [k = 2] · Σ_{c | m} c
//! ```
//!
//! where `f` runs over `f² | t²−4m` with `(t²−4m)/f² ≡ 0, 1 (mod 4)`,
//! `h_w` is the class number weighted by `2/|Aut|`, and
//! `μ(t, f, N) = ψ(N)/ψ(N/N_f) · #{x mod N : x² − tx + m ≡ 0 (mod N·N_f)}` with
//! `N_f = gcd(N, f)`.
//!
//! In `A₃` the sum runs over *all* divisors `d` of `m`, so each unordered
//! factorization `m = d·d'` with `d ≠ d'` counts twice and the square-root
//! divisor `d = d' = √m` once; with the leading `½` the boundary term is
//! halved. This convention is pinned by the level-one Hecke-matrix oracle.
//!
//! Nothing in this module touches floating point.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{self, ExactRational};
use crate::error::{Error, Result};

/// Bumped whenever the formula or its conventions change; invalidates disk caches.
pub const FORMULA_VERSION: &str = "eichler-selberg-gamma0/v1";

/// Moduli up to this size are handled by direct enumeration of residues.
const DIRECT_COUNT_LIMIT: u64 = 1_000_000;

/// The space `S_k(Γ₀(N))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelWeight {
    level: u64,
    weight: u32,
}

impl LevelWeight {
    pub fn new(level: u64, weight: u32) -> Result<Self> {
        if level == 0 {
            return Err(Error::Zero("N"));
        }
        if weight < 2 || weight % 2 == 1 {
            return Err(Error::BadWeight(weight));
        }
        Ok(LevelWeight { level, weight })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }
}

impl std::fmt::Display for LevelWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.level, self.weight)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceValue {
    pub space: LevelWeight,
    pub index: u64,
    pub value: BigInt,
}

/// `Tr T'_m = Tr T_m / m^{(k−1)/2}` for square `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedTrace {
    pub space: LevelWeight,
    pub index: u64,
    pub value: ExactRational,
}

/// `P_k(t, m) = (ρ^{k−1} − ρ̄^{k−1})/(ρ − ρ̄)` for the roots of `X² − tX + m`.
pub fn gegenbauer_p(k: u32, t: i64, m: u64) -> Result<BigInt> {
    if k < 2 {
        return Err(Error::BadWeight(k));
    }
    let t2 = (t as i128) * (t as i128);
    if t2 > 4 * m as i128 {
        return Err(Error::OutOfRange(format!("t² = {t2} exceeds 4m = {}", 4 * m as i128)));
    }
    let (t, m) = (BigInt::from(t), BigInt::from(m));
    let mut prev = BigInt::zero(); // P_1
    let mut cur = BigInt::one(); // P_2
    for _ in 2..k {
        let next = &t * &cur - &m * &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// `#{x mod N : x² − tx + m ≡ 0 (mod N·N_f)}`.
fn solution_count(t: i64, m: u64, level: u64, level_f: u64) -> u64 {
    if level <= DIRECT_COUNT_LIMIT {
        count_direct(t, m, level, level * level_f)
    } else {
        count_by_prime_powers(t, m, level, level_f)
    }
}

fn count_direct(t: i64, m: u64, range: u64, modulus: u64) -> u64 {
    let md = modulus as i128;
    let (t, m) = (t as i128, m as i128);
    (0..range as i128)
        .filter(|&x| (x * x - t * x + m).rem_euclid(md) == 0)
        .count() as u64
}

/// Chinese-remainder split of [`count_direct`] over the prime powers `p^e ‖ N`.
fn count_by_prime_powers(t: i64, m: u64, level: u64, level_f: u64) -> u64 {
    let disc = (t as i128) * (t as i128) - 4 * m as i128;
    let mut total = 1u64;
    for (p, e) in arith::factorize(level) {
        let pe = p.pow(e);
        let extra = level_f.gcd(&pe);
        let count = if p != 2 && extra == 1 && disc.rem_euclid(p as i128) != 0 {
            // Unramified odd prime: Hensel lifts each simple root mod p uniquely.
            let d = disc.rem_euclid(p as i128) as i64;
            (1 + arith::kronecker_symbol(d, p as i64)) as u64
        } else {
            count_direct(t, m, pe, pe * extra)
        };
        if count == 0 {
            return 0;
        }
        total *= count;
    }
    total
}

/// The `k`-independent data of the trace formula for fixed `(N, m)`.
///
/// Building a plan does all the residue counting and class-number work;
/// [`TracePlan::evaluate`] then costs only a few big-integer powers per weight.
#[derive(Debug, Clone)]
pub struct TracePlan {
    level: u64,
    index: u64,
    psi: u64,
    square_root: Option<u64>,
    /// `(t, Σ_f h_w μ)` for every `t` with `t² < 4m`.
    elliptic: Vec<(i64, ExactRational)>,
    /// `(min(d, m/d), Σ_τ φ(g))` for every divisor `d` of `m`.
    hyperbolic: Vec<(u64, u64)>,
    sigma1: u64,
}

impl TracePlan {
    pub fn new(level: u64, m: u64) -> Result<Self> {
        if level == 0 {
            return Err(Error::Zero("N"));
        }
        if m == 0 {
            return Err(Error::Zero("m"));
        }
        if m.gcd(&level) != 1 {
            return Err(Error::NotCoprime { m, level });
        }
        let psi = arith::psi(level)?;
        let psi_big = BigInt::from(psi);
        let bound = arith::isqrt(4 * m);
        let mut elliptic = Vec::new();
        for t in -(bound as i64)..=(bound as i64) {
            let disc = (t as i128) * (t as i128) - 4 * m as i128;
            if disc >= 0 {
                continue;
            }
            let abs = disc.unsigned_abs() as u64;
            let mut weight = ExactRational::zero();
            let mut f = 1u64;
            while f * f <= abs {
                if abs.is_multiple_of(f * f) {
                    let reduced = -((abs / (f * f)) as i64);
                    if matches!(reduced.rem_euclid(4), 0 | 1) {
                        let level_f = level.gcd(&f);
                        let count = solution_count(t, m, level, level_f);
                        if count > 0 {
                            let index_ratio = BigRational::new(
                                psi_big.clone(),
                                BigInt::from(arith::psi(level / level_f)?),
                            );
                            weight += arith::weighted_class_number(reduced)
                                * index_ratio
                                * BigInt::from(count);
                        }
                    }
                }
                f += 1;
            }
            if !weight.is_zero() {
                elliptic.push((t, weight));
            }
        }

        let level_divisors = arith::divisors(level)?;
        let hyperbolic = arith::divisors(m)?
            .into_iter()
            .map(|d| {
                let diff = (m / d) as i128 - d as i128;
                let weight = level_divisors
                    .iter()
                    .map(|&tau| tau.gcd(&(level / tau)))
                    .filter(|&g| diff % g as i128 == 0)
                    .map(|g| arith::euler_phi(g).unwrap())
                    .sum();
                (d.min(m / d), weight)
            })
            .collect();

        Ok(TracePlan {
            level,
            index: m,
            psi,
            square_root: arith::square_root(m),
            elliptic,
            hyperbolic,
            sigma1: arith::divisors(m)?.iter().sum(),
        })
    }

    /// The four terms `(A₁, A₂, A₃, A₄)` as exact rationals.
    pub fn terms(&self, k: u32) -> Result<[ExactRational; 4]> {
        if k < 2 || k % 2 == 1 {
            return Err(Error::BadWeight(k));
        }
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let identity = match self.square_root {
            Some(_) => BigRational::new(
                BigInt::from(k - 1) * BigInt::from(self.psi) * BigInt::from(self.index).pow(k / 2 - 1),
                BigInt::from(12),
            ),
            None => ExactRational::zero(),
        };
        let mut elliptic = ExactRational::zero();
        for (t, w) in &self.elliptic {
            elliptic += w * gegenbauer_p(k, *t, self.index)?;
        }
        let elliptic = -(elliptic * &half);
        let hyperbolic: BigInt = self
            .hyperbolic
            .iter()
            .map(|&(d, w)| BigInt::from(d).pow(k - 1) * BigInt::from(w))
            .sum();
        let hyperbolic = -(BigRational::from_integer(hyperbolic) * &half);
        let weight_two = if k == 2 {
            BigRational::from_integer(self.sigma1.into())
        } else {
            ExactRational::zero()
        };
        Ok([identity, elliptic, hyperbolic, weight_two])
    }

    pub fn evaluate(&self, k: u32) -> Result<BigInt> {
        let total: ExactRational = self.terms(k)?.into_iter().sum();
        if !total.is_integer() {
            return Err(Error::Integrity(format!(
                "trace of T_{} on S_{k}(Gamma0({})) assembled to non-integer {total}",
                self.index, self.level
            )));
        }
        Ok(total.to_integer())
    }
}

pub fn trace_hecke(space: LevelWeight, m: u64) -> Result<TraceValue> {
    let value = TracePlan::new(space.level, m)?.evaluate(space.weight)?;
    Ok(TraceValue {
        space,
        index: m,
        value,
    })
}

/// `dim S_k(Γ₀(N)) = Tr T_1`.
pub fn dim_cusp(space: LevelWeight) -> u64 {
    let value = trace_hecke(space, 1).expect("T_1 is always admissible").value;
    u64::try_from(value).expect("dimension is a non-negative machine integer")
}

fn normalize(space: LevelWeight, m: u64, value: BigInt) -> Result<NormalizedTrace> {
    let root = arith::square_root(m).ok_or(Error::NonSquareIndex(m))?;
    let denom = BigInt::from(root).pow(space.weight - 1);
    Ok(NormalizedTrace {
        space,
        index: m,
        value: BigRational::new(value, denom),
    })
}

pub fn normalized_trace(space: LevelWeight, m: u64) -> Result<NormalizedTrace> {
    if arith::square_root(m).is_none() {
        return Err(Error::NonSquareIndex(m));
    }
    normalize(space, m, trace_hecke(space, m)?.value)
}

/// Thread-safe memo of traces keyed by `(N, k, m)`, with a versioned binary
/// layout for persisting it between runs.
#[derive(Debug, Default)]
pub struct TraceCache {
    map: RwLock<HashMap<(u64, u32, u64), BigInt>>,
}

const CACHE_MAGIC: &[u8; 8] = b"HKTRACE\0";
const CACHE_LAYOUT: u32 = 1;

impl TraceCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, space: LevelWeight, m: u64) -> Option<BigInt> {
        self.map
            .read()
            .unwrap()
            .get(&(space.level, space.weight, m))
            .cloned()
    }

    pub fn insert(&self, space: LevelWeight, m: u64, value: BigInt) {
        self.map
            .write()
            .unwrap()
            .insert((space.level, space.weight, m), value);
    }

    pub fn trace(&self, space: LevelWeight, m: u64) -> Result<TraceValue> {
        if let Some(value) = self.get(space, m) {
            return Ok(TraceValue {
                space,
                index: m,
                value,
            });
        }
        let tv = trace_hecke(space, m)?;
        self.insert(space, m, tv.value.clone());
        Ok(tv)
    }

    /// Evaluates a prepared plan at `space.weight`, going through the cache.
    pub fn trace_with_plan(&self, plan: &TracePlan, weight: u32) -> Result<BigInt> {
        let space = LevelWeight::new(plan.level, weight)?;
        if let Some(v) = self.get(space, plan.index) {
            return Ok(v);
        }
        let v = plan.evaluate(weight)?;
        self.insert(space, plan.index, v.clone());
        Ok(v)
    }

    pub fn normalized(&self, space: LevelWeight, m: u64) -> Result<NormalizedTrace> {
        if arith::square_root(m).is_none() {
            return Err(Error::NonSquareIndex(m));
        }
        normalize(space, m, self.trace(space, m)?.value)
    }

    pub fn dim(&self, space: LevelWeight) -> u64 {
        let v = self.trace(space, 1).expect("T_1 is always admissible").value;
        u64::try_from(v).expect("dimension is a non-negative machine integer")
    }

    /// Layout: magic, `u32` layout version, length-prefixed formula version,
    /// `u64` entry count, then entries `(u64 N, u32 k, u64 m, u32 len, len
    /// bytes of little-endian two's complement)` sorted by key. Little-endian.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        let map = self.map.read().unwrap();
        let mut keys: Vec<_> = map.keys().copied().collect();
        keys.sort_unstable();
        out.write_all(CACHE_MAGIC)?;
        out.write_all(&CACHE_LAYOUT.to_le_bytes())?;
        out.write_all(&(FORMULA_VERSION.len() as u32).to_le_bytes())?;
        out.write_all(FORMULA_VERSION.as_bytes())?;
        out.write_all(&(keys.len() as u64).to_le_bytes())?;
        for key in keys {
            let bytes = map[&key].to_signed_bytes_le();
            out.write_all(&key.0.to_le_bytes())?;
            out.write_all(&key.1.to_le_bytes())?;
            out.write_all(&key.2.to_le_bytes())?;
            out.write_all(&(bytes.len() as u32).to_le_bytes())?;
            out.write_all(&bytes)?;
        }
        Ok(())
    }

    /// Reads a cache written by [`TraceCache::write_to`]. A different layout
    /// or formula version yields an empty cache rather than an error.
    pub fn read_from<R: Read>(mut input: R) -> Result<Self> {
        let cache = TraceCache::new();
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(Error::Integrity("not a trace cache file".into()));
        }
        if read_u32(&mut input)? != CACHE_LAYOUT {
            return Ok(cache);
        }
        let len = read_u32(&mut input)? as usize;
        let mut version = vec![0u8; len];
        input.read_exact(&mut version)?;
        if version != FORMULA_VERSION.as_bytes() {
            return Ok(cache);
        }
        let count = read_u64(&mut input)?;
        {
            let mut map = cache.map.write().unwrap();
            for _ in 0..count {
                let level = read_u64(&mut input)?;
                let weight = read_u32(&mut input)?;
                let m = read_u64(&mut input)?;
                let len = read_u32(&mut input)? as usize;
                let mut bytes = vec![0u8; len];
                input.read_exact(&mut bytes)?;
                map.insert((level, weight, m), BigInt::from_signed_bytes_le(&bytes));
            }
        }
        Ok(cache)
    }
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use crate::level1;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn lw(n: u64, k: u32) -> LevelWeight {
        LevelWeight::new(n, k).unwrap()
    }

    #[test]
    fn level_weight_validation() {
        assert!(LevelWeight::new(0, 2).is_err());
        assert!(LevelWeight::new(1, 3).is_err());
        assert!(LevelWeight::new(1, 0).is_err());
        assert!(LevelWeight::new(5, 2).is_ok());
    }

    #[test]
    fn gegenbauer_examples() {
        for (t, m) in [(0i64, 1u64), (1, 1), (2, 1), (-3, 4), (5, 7)] {
            assert_eq!(gegenbauer_p(2, t, m).unwrap(), BigInt::one());
        }
        assert_eq!(gegenbauer_p(4, 1, 2).unwrap(), BigInt::from(-1));
        assert_eq!(gegenbauer_p(12, 0, 1).unwrap(), BigInt::from(-1));
        assert!(gegenbauer_p(4, 3, 2).is_err());
        // Boundary t² = 4m: double root √m, P_k = (k−1) m^{k/2−1}.
        assert_eq!(gegenbauer_p(6, 4, 4).unwrap(), BigInt::from(5 * 16));
    }

    #[test]
    fn gegenbauer_bound() {
        for k in (2..=30u32).step_by(2) {
            for m in 1..=16u64 {
                let b = 2 * arith::isqrt(m) as i64 + 1;
                for t in -b..=b {
                    if (t * t) as u64 > 4 * m {
                        continue;
                    }
                    let p = gegenbauer_p(k, t, m).unwrap();
                    let bound = BigInt::from(k - 1) * BigInt::from(m).pow(k / 2 - 1);
                    // |P_k| ≤ (k−1) m^{(k−2)/2}
                    assert!(p.abs() <= bound, "k={k} t={t} m={m}");
                }
            }
        }
    }

    #[test]
    fn trace_examples() {
        assert_eq!(trace_hecke(lw(1, 12), 4).unwrap().value, BigInt::from(-1472));
        assert_eq!(trace_hecke(lw(37, 2), 4).unwrap().value, BigInt::zero());
        assert_eq!(trace_hecke(lw(9, 4), 4).unwrap().value, BigInt::from(-8));
        assert!(matches!(trace_hecke(lw(4, 12), 2), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dim_cusp(lw(1, 12)), 1);
        assert_eq!(dim_cusp(lw(1, 2)), 0);
        assert_eq!(dim_cusp(lw(37, 2)), 2);
        assert_eq!(dim_cusp(lw(11, 2)), 1);
        // Genus of X₀(N) for a few more levels.
        for (n, g) in [(2u64, 0u64), (23, 2), (29, 2), (64, 3), (100, 7), (143, 13)] {
            assert_eq!(dim_cusp(lw(n, 2)), g, "N = {n}");
        }
    }

    /// Closed form for k ≥ 4 even:
    /// (k−1)ψ/12 − ν₂ ((k−1)/4 − ⌊k/4⌋) − ν₃ ((k−1)/3 − ⌊k/3⌋) − c/2,
    /// with ν₂, ν₃ the elliptic points and c the cusps of Γ₀(N).
    fn dimension_closed_form(n: u64, k: u32) -> ExactRational {
        let fac = arith::factorize(n);
        let psi = arith::psi(n).unwrap() as i64;
        let nu2: i64 = if n.is_multiple_of(4) {
            0
        } else {
            fac.iter().map(|&(p, _)| 1 + arith::kronecker_symbol(-4, p as i64) as i64).product()
        };
        let nu3: i64 = if n.is_multiple_of(9) {
            0
        } else {
            fac.iter().map(|&(p, _)| 1 + arith::kronecker_symbol(-3, p as i64) as i64).product()
        };
        let cusps: i64 = arith::divisors(n)
            .unwrap()
            .iter()
            .map(|&d| arith::euler_phi(d.gcd(&(n / d))).unwrap() as i64)
            .sum();
        let k = k as i64;
        let mut dim = rational((k - 1) * psi, 12);
        dim -= rational(nu2 * (k - 1), 4) - rational(nu2 * (k / 4), 1);
        dim -= rational(nu3 * (k - 1), 3) - rational(nu3 * (k / 3), 1);
        dim -= rational(cusps, 2);
        dim
    }

    #[test]
    fn dimension_matches_closed_form() {
        for n in 1..=120u64 {
            for k in (4..=24u32).step_by(2) {
                let expected = dimension_closed_form(n, k);
                assert_eq!(
                    BigRational::from_integer(dim_cusp(lw(n, k)).into()),
                    expected,
                    "N={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn normalized_examples() {
        assert_eq!(normalized_trace(lw(1, 12), 4).unwrap().value, rational(-23, 32));
        assert_eq!(normalized_trace(lw(9, 4), 4).unwrap().value, rational(-1, 1));
        for (n, k) in [(1u64, 12u32), (11, 2), (37, 2), (5, 10)] {
            assert_eq!(
                normalized_trace(lw(n, k), 1).unwrap().value,
                BigRational::from_integer(dim_cusp(lw(n, k)).into())
            );
        }
        assert!(matches!(normalized_trace(lw(1, 12), 2), Err(Error::NonSquareIndex(2))));
    }

    #[test]
    fn oracle_equivalence_level_one() {
        for k in (2..=30u32).step_by(2) {
            for m in 1..=12u64 {
                let oracle = level1::hecke_matrix(k, m, level1::hecke_precision(k, m))
                    .unwrap()
                    .trace();
                assert_eq!(trace_hecke(lw(1, k), m).unwrap().value, oracle, "k={k} m={m}");
            }
        }
    }

    #[test]
    fn level_one_elliptic_term_is_hurwitz_sum() {
        // At N = 1, μ = 1 and Σ_f h_w = H(4m − t²); including t² = 4m with
        // H(0) = −1/12 reproduces the identity term as well.
        for k in (12..=26u32).step_by(2) {
            for m in 1..=12u64 {
                let plan = TracePlan::new(1, m).unwrap();
                let [a1, a2, _, _] = plan.terms(k).unwrap();
                let mut sum = ExactRational::zero();
                let b = 2 * arith::isqrt(m) as i64 + 1;
                for t in -b..=b {
                    let t2 = (t * t) as u64;
                    if t2 > 4 * m {
                        continue;
                    }
                    sum += arith::hurwitz_class_number(4 * m - t2) * gegenbauer_p(k, t, m).unwrap();
                }
                let hurwitz_route = -(sum * rational(1, 2));
                assert_eq!(a1 + a2, hurwitz_route, "k={k} m={m}");
            }
        }
    }

    #[test]
    fn composition_identity_level_one() {
        // T_p² = T_{p²} + p^{k−1} T_1
        for p in [2u64, 3, 5] {
            for k in (12..=26u32).step_by(2) {
                let lhs = trace_hecke(lw(1, k), p * p).unwrap().value
                    + BigInt::from(p).pow(k - 1) * trace_hecke(lw(1, k), 1).unwrap().value;
                let tp = level1::hecke_matrix(k, p, level1::hecke_precision(k, p * p)).unwrap();
                assert_eq!(lhs, tp.mul(&tp).trace(), "p={p} k={k}");
            }
        }
    }

    #[test]
    fn traces_are_integral_across_levels() {
        for n in 1..=60u64 {
            for m in 1..=12u64 {
                if m.gcd(&n) != 1 {
                    continue;
                }
                let plan = TracePlan::new(n, m).unwrap();
                for k in (2..=14u32).step_by(2) {
                    let total: ExactRational = plan.terms(k).unwrap().into_iter().sum();
                    assert!(total.is_integer(), "N={n} m={m} k={k}: {total}");
                }
            }
        }
    }

    #[test]
    fn prime_power_count_matches_direct() {
        for n in 1..=400u64 {
            for t in -6i64..=6 {
                for m in [1u64, 4, 9, 7] {
                    if m.gcd(&n) != 1 || t * t >= 4 * m as i64 {
                        continue;
                    }
                    for nf in arith::divisors(n).unwrap().into_iter().filter(|d| *d <= 4) {
                        assert_eq!(
                            count_direct(t, m, n, n * nf),
                            count_by_prime_powers(t, m, n, nf),
                            "N={n} t={t} m={m} N_f={nf}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn asymptotic_sanity_for_prime_levels() {
        // Tr T'_4 ≈ (k−1)ψ(N)/24 with an O(√N) error.
        let primes: Vec<u64> = (10_000..=10_100).filter(|&n| arith::factorize(n).len() == 1 && arith::factorize(n)[0].1 == 1).collect();
        assert!(!primes.is_empty());
        for n in primes {
            let t = normalized_trace(lw(n, 2), 4).unwrap().value;
            let main = rational((n + 1) as i64, 24);
            let ratio = t / main;
            assert!(ratio > rational(1, 2) && ratio < rational(3, 2), "N={n}: {ratio}");
        }
    }

    #[test]
    fn cache_round_trip_and_version_guard() {
        let cache = TraceCache::new();
        for (n, k, m) in [(1u64, 12u32, 4u64), (37, 2, 4), (9, 4, 1), (1, 46, 4)] {
            cache.trace(lw(n, k), m).unwrap();
        }
        let mut buf = Vec::new();
        cache.write_to(&mut buf).unwrap();
        let back = TraceCache::read_from(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 4);
        assert_eq!(back.get(lw(1, 12), 4), Some(BigInt::from(-1472)));

        // Corrupt the formula version: the cache is discarded, not trusted.
        let pos = 8 + 4 + 4;
        buf[pos] ^= 0x20;
        assert!(TraceCache::read_from(buf.as_slice()).unwrap().is_empty());
        assert!(TraceCache::read_from(&b"garbage!"[..]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn plan_evaluation_matches_fresh_trace(n in 1u64..300, k in 1u32..10, m in 1u64..20) {
            prop_assume!(n.gcd(&m) == 1);
            let k = 2 * k;
            let plan = TracePlan::new(n, m).unwrap();
            prop_assert_eq!(plan.evaluate(k).unwrap(), trace_hecke(lw(n, k), m).unwrap().value);
        }
    }
}

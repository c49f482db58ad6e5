//! Multiplicative functions, class numbers and the Kronecker symbol.
//!
//! Inputs in this crate are small (levels below a few million, discriminants
//! below a few hundred), so factorization is plain trial division.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type ExactRational = BigRational;

/// A tabulated Hurwitz class number `H(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HurwitzValue {
    pub argument: u64,
    pub value: ExactRational,
}

pub fn rational(num: i64, den: i64) -> ExactRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::Zero("n"));
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

/// Divisor power sum `σ_j(n) = Σ_{d | n} d^j`.
pub fn sigma(n: u64, j: u32) -> Result<BigUint> {
    Ok(divisors(n)?
        .into_iter()
        .map(|d| BigUint::from(d).pow(j))
        .sum())
}

/// `ψ(N) = N Π_{p | N} (1 + 1/p)`, the index of `Γ₀(N)` in `SL₂(ℤ)`.
pub fn psi(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Zero("N"));
    }
    Ok(factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p + 1)))
}

/// Number of distinct prime divisors.
pub fn omega(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::Zero("N"));
    }
    Ok(factorize(n).len() as u32)
}

pub fn euler_phi(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Zero("n"));
    }
    Ok(factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1)))
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn square_root(n: u64) -> Option<u64> {
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

/// Splits `n = s² · r` with `r` square-free; returns `(s, r)`.
pub fn square_free_decomposition(n: &BigUint) -> (BigUint, BigUint) {
    let mut rest = n.clone();
    let mut square = BigUint::one();
    let mut free = BigUint::one();
    if rest.is_zero() {
        return (BigUint::zero(), BigUint::one());
    }
    let mut p = BigUint::from(2u32);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            square *= p.pow(e / 2);
            if e % 2 == 1 {
                free *= &p;
            }
        }
        p += if p == BigUint::from(2u32) { 1u32 } else { 2u32 };
    }
    free *= rest;
    (square, free)
}

/// Kronecker symbol `(a | n)`, extending the Jacobi symbol to all integers.
pub fn kronecker_symbol(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut result = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let v = n.trailing_zeros();
    n >>= v;
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if v % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    // n is now odd and positive: Jacobi symbol.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Reduced positive-definite forms `(a, b, c)` of discriminant `-n`:
/// `|b| ≤ a ≤ c`, and `b ≥ 0` when `|b| = a` or `a = c`.
fn reduced_forms(n: u64) -> Vec<(i64, i64, i64)> {
    let mut forms = Vec::new();
    if n == 0 || !matches!(n % 4, 0 | 3) {
        return forms;
    }
    let n = n as i64;
    let a_max = isqrt(n as u64 / 3) as i64;
    for a in 1..=a_max {
        for b in (-a + 1)..=a {
            if (b - n).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b + n;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            forms.push((a, b, c));
        }
    }
    forms
}

fn form_weight(a: i64, b: i64, c: i64) -> ExactRational {
    if a == b && b == c {
        rational(1, 3)
    } else if b == 0 && a == c {
        rational(1, 2)
    } else {
        ExactRational::one()
    }
}

/// Class number of primitive forms of discriminant `disc < 0`, weighted by
/// `2 / |Aut|` (so `h_w(-3) = 1/3`, `h_w(-4) = 1/2`).
pub fn weighted_class_number(disc: i64) -> ExactRational {
    if disc >= 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
        return ExactRational::zero();
    }
    reduced_forms(disc.unsigned_abs())
        .into_iter()
        .filter(|&(a, b, c)| a.gcd(&b).gcd(&c) == 1)
        .map(|(a, b, c)| form_weight(a, b, c))
        .sum()
}

fn hurwitz_memo() -> &'static RwLock<HashMap<u64, ExactRational>> {
    static MEMO: OnceLock<RwLock<HashMap<u64, ExactRational>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Hurwitz class number `H(n)`, with `H(0) = -1/12` and `H(n) = 0` for
/// `n ≡ 1, 2 (mod 4)`. Memoized; safe to call from many threads.
pub fn hurwitz_class_number(n: u64) -> ExactRational {
    if n == 0 {
        return rational(-1, 12);
    }
    if let Some(v) = hurwitz_memo().read().unwrap().get(&n) {
        return v.clone();
    }
    let value: ExactRational = reduced_forms(n)
        .into_iter()
        .map(|(a, b, c)| form_weight(a, b, c))
        .sum();
    hurwitz_memo().write().unwrap().insert(n, value.clone());
    value
}

pub fn hurwitz_table(max: u64) -> Vec<HurwitzValue> {
    (0..=max)
        .map(|n| HurwitzValue {
            argument: n,
            value: hurwitz_class_number(n),
        })
        .collect()
}

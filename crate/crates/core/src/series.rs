//! Truncated integer power series in `q` and exact convolution.
//!
//! Products switch from schoolbook to a fast kernel above
//! [`KARATSUBA_THRESHOLD`] terms: multi-prime number-theoretic transforms for
//! `i128` when the result bound fits, Karatsuba otherwise. The fixed-width
//! kernels use checked arithmetic; any overflow aborts the kernel and the
//! caller retries on [`BigInt`].

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Truncated series `Σ_{n < precision} c_n qⁿ`; every stored coefficient is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    coefficients: Vec<BigInt>,
}

impl QExpansion {
    pub fn new(coefficients: Vec<BigInt>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Zero("precision"));
        }
        Ok(QExpansion { coefficients })
    }

    pub fn from_i64(coefficients: &[i64]) -> Result<Self> {
        Self::new(coefficients.iter().copied().map(BigInt::from).collect())
    }

    pub fn one(precision: usize) -> Self {
        let mut coefficients = vec![<BigInt as Zero>::zero(); precision.max(1)];
        coefficients[0] = BigInt::one();
        QExpansion { coefficients }
    }

    pub fn precision(&self) -> usize {
        self.coefficients.len()
    }

    /// Coefficient of `qⁿ`; asking beyond the precision is an error.
    pub fn coeff(&self, n: usize) -> Result<&BigInt> {
        self.coefficients.get(n).ok_or(Error::Precision {
            needed: n + 1,
            available: self.precision(),
        })
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<BigInt> {
        self.coefficients
    }

    pub fn truncate(&mut self, precision: usize) {
        self.coefficients.truncate(precision.max(1));
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        QExpansion {
            coefficients: self.coefficients.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = QExpansion::one(self.precision());
        for _ in 0..exp {
            result = &result * self;
        }
        result
    }

    /// Index of the first non-zero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coefficients.iter().position(|c| !Zero::is_zero(c))
    }
}

impl Add for &QExpansion {
    type Output = QExpansion;
    fn add(self, rhs: &QExpansion) -> QExpansion {
        let n = self.precision().min(rhs.precision());
        QExpansion {
            coefficients: (0..n)
                .map(|i| &self.coefficients[i] + &rhs.coefficients[i])
                .collect(),
        }
    }
}

impl Sub for &QExpansion {
    type Output = QExpansion;
    fn sub(self, rhs: &QExpansion) -> QExpansion {
        let n = self.precision().min(rhs.precision());
        QExpansion {
            coefficients: (0..n)
                .map(|i| &self.coefficients[i] - &rhs.coefficients[i])
                .collect(),
        }
    }
}

impl Neg for &QExpansion {
    type Output = QExpansion;
    fn neg(self) -> QExpansion {
        QExpansion {
            coefficients: self.coefficients.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &QExpansion {
    type Output = QExpansion;
    fn mul(self, rhs: &QExpansion) -> QExpansion {
        let n = self.precision().min(rhs.precision());
        QExpansion {
            coefficients: mul_truncated_big(&self.coefficients[..n], &rhs.coefficients[..n], n),
        }
    }
}

/// Ring operations a convolution kernel needs; `None` signals overflow.
pub trait ConvCoeff: Clone + Send + Sync {
    fn zero() -> Self;
    fn checked_add(&self, rhs: &Self) -> Option<Self>;
    fn checked_sub(&self, rhs: &Self) -> Option<Self>;
    fn checked_mul(&self, rhs: &Self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    /// A transform-based truncated product, when the type supports one and
    /// the result provably fits.
    fn transform_product(_a: &[Self], _b: &[Self], _len: usize) -> Option<Vec<Self>> {
        None
    }
}

impl ConvCoeff for i128 {
    fn zero() -> Self {
        0
    }
    fn checked_add(&self, rhs: &Self) -> Option<Self> {
        i128::checked_add(*self, *rhs)
    }
    fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        i128::checked_sub(*self, *rhs)
    }
    fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        i128::checked_mul(*self, *rhs)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn transform_product(a: &[Self], b: &[Self], len: usize) -> Option<Vec<Self>> {
        crate::ntt::mul_i128(a, b, len)
    }
}

impl ConvCoeff for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn checked_add(&self, rhs: &Self) -> Option<Self> {
        Some(self + rhs)
    }
    fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        Some(self - rhs)
    }
    fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        Some(self * rhs)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// Below this many terms products use schoolbook convolution.
pub const KARATSUBA_THRESHOLD: usize = 10_000;
const KARATSUBA_BASE: usize = 48;
const PARALLEL_SPLIT: usize = 1 << 14;

fn schoolbook<T: ConvCoeff>(a: &[T], b: &[T], out: &mut [T]) -> Option<()> {
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].checked_add(&x.checked_mul(y)?)?;
        }
    }
    Some(())
}

fn add_slices<T: ConvCoeff>(a: &[T], b: &[T]) -> Option<Vec<T>> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x.checked_add(y),
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (None, None) => unreachable!(),
        })
        .collect()
}

/// Full product of `a` and `b` (length `a.len() + b.len() - 1`).
fn karatsuba<T: ConvCoeff>(a: &[T], b: &[T]) -> Option<Vec<T>> {
    if a.is_empty() || b.is_empty() {
        return Some(Vec::new());
    }
    let len = a.len() + b.len() - 1;
    if a.len().min(b.len()) <= KARATSUBA_BASE {
        let mut out = vec![T::zero(); len];
        schoolbook(a, b, &mut out)?;
        return Some(out);
    }
    let half = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(half.min(a.len()));
    let (b0, b1) = b.split_at(half.min(b.len()));
    let sum_a = add_slices(a0, a1)?;
    let sum_b = add_slices(b0, b1)?;

    let (low, (high, mid)) = if len > PARALLEL_SPLIT {
        rayon::join(
            || karatsuba(a0, b0),
            || rayon::join(|| karatsuba(a1, b1), || karatsuba(&sum_a, &sum_b)),
        )
    } else {
        (karatsuba(a0, b0), (karatsuba(a1, b1), karatsuba(&sum_a, &sum_b)))
    };
    let (low, high, mut mid) = (low?, high?, mid?);
    for (i, x) in low.iter().enumerate() {
        mid[i] = mid[i].checked_sub(x)?;
    }
    for (i, x) in high.iter().enumerate() {
        mid[i] = mid[i].checked_sub(x)?;
    }

    let mut out = vec![T::zero(); len];
    for (i, x) in low.into_iter().enumerate() {
        out[i] = x;
    }
    for (i, x) in high.into_iter().enumerate() {
        out[i + 2 * half] = out[i + 2 * half].checked_add(&x)?;
    }
    for (i, x) in mid.into_iter().enumerate() {
        if i + half < len {
            out[i + half] = out[i + half].checked_add(&x)?;
        } else if !x.is_zero() {
            // Cancellation guarantees these trailing terms vanish.
            return None;
        }
    }
    Some(out)
}

fn sparse_mul<T: ConvCoeff>(sparse: &[(usize, T)], dense: &[T], len: usize) -> Option<Vec<T>> {
    let mut out = vec![T::zero(); len];
    for (i, x) in sparse {
        for (j, y) in dense.iter().enumerate().take(len.saturating_sub(*i)) {
            if !y.is_zero() {
                out[i + j] = out[i + j].checked_add(&x.checked_mul(y)?)?;
            }
        }
    }
    Some(out)
}

/// Product of two series truncated to `len` terms. Exact; `None` on overflow.
pub fn mul_truncated<T: ConvCoeff>(a: &[T], b: &[T], len: usize) -> Option<Vec<T>> {
    let a = &a[..a.len().min(len)];
    let b = &b[..b.len().min(len)];
    let nonzero = |s: &[T]| s.iter().filter(|x| !x.is_zero()).count();
    // Sparse operands (theta-like series) are cheaper term by term.
    if nonzero(a) * 8 < a.len() || nonzero(b) * 8 < b.len() {
        let (sparse, dense) = if nonzero(a) <= nonzero(b) { (a, b) } else { (b, a) };
        let terms: Vec<(usize, T)> = sparse
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect();
        return sparse_mul(&terms, dense, len);
    }
    let mut out = if a.len().max(b.len()) < KARATSUBA_THRESHOLD {
        let mut out = vec![T::zero(); (a.len() + b.len()).saturating_sub(1)];
        schoolbook(a, b, &mut out)?;
        out
    } else if let Some(out) = T::transform_product(a, b, len) {
        return Some(out);
    } else {
        karatsuba(a, b)?
    };
    out.resize(len, T::zero());
    Some(out)
}

pub fn mul_truncated_big(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let small = |s: &[BigInt]| -> Option<Vec<i128>> { s.iter().map(|x| x.to_i128()).collect() };
    if let (Some(x), Some(y)) = (small(a), small(b)) {
        if let Some(out) = mul_truncated(&x, &y, len) {
            return out.into_iter().map(BigInt::from).collect();
        }
    }
    mul_truncated(a, b, len).expect("big-integer convolution cannot overflow")
}

/// Coefficients of `Π_{n ≥ 1} (1 - qⁿ)³ = Σ_{n ≥ 0} (-1)ⁿ (2n+1) q^{n(n+1)/2}` (Jacobi).
pub fn eta_cube(len: usize) -> Vec<i128> {
    let mut out = vec![0i128; len];
    let mut n = 0usize;
    loop {
        let e = n * (n + 1) / 2;
        if e >= len {
            break;
        }
        let c = (2 * n + 1) as i128;
        out[e] = if n.is_multiple_of(2) { c } else { -c };
        n += 1;
    }
    out
}

/// Coefficients of `Π (1 - qⁿ)^24` to `len` terms, by three squarings of the
/// η-cube series. Falls back to big integers on any `i128` overflow.
pub fn eta_power_24(len: usize) -> Vec<BigInt> {
    let cube = eta_cube(len);
    let fast = (|| {
        let mut s = cube.clone();
        for _ in 0..3 {
            s = mul_truncated(&s, &s, len)?;
        }
        Some(s)
    })();
    match fast {
        Some(s) => s.into_iter().map(BigInt::from).collect(),
        None => {
            let mut s: Vec<BigInt> = cube.into_iter().map(BigInt::from).collect();
            for _ in 0..3 {
                s = mul_truncated(&s, &s, len).expect("big-integer convolution cannot overflow");
            }
            s
        }
    }
}

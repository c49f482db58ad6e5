//! Double-double floating point: an unevaluated sum `hi + lo` with
//! `|lo| ≤ ulp(hi)/2`, giving about 31 significant decimal digits.

use std::cmp::Ordering;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{FromPrimitive, ToPrimitive};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DDouble {
    pub const ZERO: DDouble = DDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: DDouble = DDouble { hi: 1.0, lo: 0.0 };

    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        DDouble { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Nearest double-double to an integer of any size (infinite if out of
    /// `f64` range).
    pub fn from_bigint(x: &BigInt) -> Self {
        let hi = x.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() {
            return DDouble { hi, lo: 0.0 };
        }
        let rest = x - BigInt::from_f64(hi).expect("finite");
        DDouble::new(hi, rest.to_f64().unwrap_or(0.0))
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn is_negative(self) -> bool {
        self.hi < 0.0
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return DDouble::from(self.hi.sqrt());
        }
        // One Newton step from the f64 root doubles the precision.
        let x = self.hi.sqrt();
        let (p, e) = two_prod(x, x);
        let residual = ((self.hi - p) - e + self.lo) / (2.0 * x);
        let (hi, lo) = quick_two_sum(x, residual);
        DDouble { hi, lo }
    }
}

impl From<f64> for DDouble {
    fn from(hi: f64) -> Self {
        DDouble { hi, lo: 0.0 }
    }
}

impl Neg for DDouble {
    type Output = DDouble;
    fn neg(self) -> DDouble {
        DDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DDouble {
    type Output = DDouble;
    fn add(self, b: DDouble) -> DDouble {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        DDouble { hi, lo }
    }
}

impl AddAssign for DDouble {
    fn add_assign(&mut self, b: DDouble) {
        *self = *self + b;
    }
}

impl Sub for DDouble {
    type Output = DDouble;
    fn sub(self, b: DDouble) -> DDouble {
        self + (-b)
    }
}

impl Mul for DDouble {
    type Output = DDouble;
    fn mul(self, b: DDouble) -> DDouble {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DDouble { hi, lo }
    }
}

impl Div for DDouble {
    type Output = DDouble;
    fn div(self, b: DDouble) -> DDouble {
        let q1 = self.hi / b.hi;
        let r = self - b * DDouble::from(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * DDouble::from(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DDouble { hi, lo } + DDouble::from(q3)
    }
}

impl PartialOrd for DDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl Sum for DDouble {
    fn sum<I: Iterator<Item = DDouble>>(iter: I) -> DDouble {
        iter.fold(DDouble::ZERO, |a, b| a + b)
    }
}

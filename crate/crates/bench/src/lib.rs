//! Benchmark fixtures.

use heckeavg_core::horizontal::NormalizedSeries;
use heckeavg_core::level1::tau_series;
use heckeavg_core::series::eta_cube;

/// `η¹²`, the operand of the last squaring on the way to `Δ`.
pub fn eta_twelve_fixture(len: usize) -> Vec<i128> {
    let mut s = eta_cube(len);
    for _ in 0..2 {
        s = heckeavg_core::series::mul_truncated(&s, &s, len).expect("fits in i128");
    }
    s
}

pub fn delta_normalized(len: usize) -> NormalizedSeries {
    NormalizedSeries::new(tau_series(len).expect("tau")).expect("Deligne bound")
}

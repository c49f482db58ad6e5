//! Exact integer convolution by number-theoretic transforms over several
//! word-sized primes, recombined with Garner's algorithm.

use rayon::prelude::*;

/// `(p, g)` with `g` a primitive root mod `p` and `2^23 | p − 1`.
const PRIMES: [(u64, u64); 5] = [
    (2_013_265_921, 31),
    (998_244_353, 3),
    (754_974_721, 11),
    (469_762_049, 3),
    (167_772_161, 3),
];

/// Longest cyclic transform every prime supports.
pub const MAX_TRANSFORM: usize = 1 << 23;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn transform(a: &mut [u64], p: u64, g: u64, inverse: bool) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod(g, (p - 1) / len as u64, p);
        if inverse {
            w = pow_mod(w, p - 2, p);
        }
        let mut powers = Vec::with_capacity(len / 2);
        let mut x = 1;
        for _ in 0..len / 2 {
            powers.push(x);
            x = x * w % p;
        }
        for block in a.chunks_mut(len) {
            let (lo, hi) = block.split_at_mut(len / 2);
            for ((u, v), &wk) in lo.iter_mut().zip(hi.iter_mut()).zip(&powers) {
                let t = *v * wk % p;
                let s = *u;
                *u = if s + t >= p { s + t - p } else { s + t };
                *v = if s >= t { s - t } else { s + p - t };
            }
        }
        len <<= 1;
    }
    if inverse {
        let inv = pow_mod(n as u64, p - 2, p);
        for x in a.iter_mut() {
            *x = *x * inv % p;
        }
    }
}

fn residues(a: &[i128], p: u64, size: usize) -> Vec<u64> {
    let mut out = vec![0u64; size];
    for (o, &x) in out.iter_mut().zip(a) {
        *o = x.rem_euclid(p as i128) as u64;
    }
    out
}

fn bits(a: &[i128]) -> u32 {
    a.iter().map(|x| 128 - x.unsigned_abs().leading_zeros()).max().unwrap_or(0)
}

fn log2_norm(a: &[i128]) -> f64 {
    0.5 * a.iter().map(|&x| (x as f64) * (x as f64)).sum::<f64>().log2()
}

/// Bits covering every `|c_k|`: the smaller of the max-times-length bound and
/// Cauchy–Schwarz `‖a‖₂‖b‖₂`, the latter padded for floating-point error.
fn result_bits(a: &[i128], b: &[i128]) -> u32 {
    let shorter = a.len().min(b.len()) as u64;
    let crude = bits(a) + bits(b) + (64 - shorter.leading_zeros());
    let schwarz = (log2_norm(a) + log2_norm(b)).max(0.0).ceil() as u32 + 1;
    crude.min(schwarz)
}

/// Product of `a` and `b` truncated to `len` terms. `None` when the result
/// could exceed 126 bits or the transform would be too long.
pub fn mul_i128(a: &[i128], b: &[i128], len: usize) -> Option<Vec<i128>> {
    if a.is_empty() || b.is_empty() {
        return Some(vec![0; len]);
    }
    let full = a.len() + b.len() - 1;
    let size = full.next_power_of_two();
    if size > MAX_TRANSFORM {
        return None;
    }
    let needed = result_bits(a, b) + 1;
    if needed > 126 {
        return None;
    }
    // Enough primes that M > 2^(needed + 1) covers both signs.
    let mut count = 0;
    let mut modulus_bits = 0.0;
    while modulus_bits <= (needed + 1) as f64 {
        modulus_bits += (PRIMES[count].0 as f64).log2();
        count += 1;
    }
    let primes = &PRIMES[..count];
    let take = len.min(full);
    let channels: Vec<Vec<u64>> = primes
        .par_iter()
        .map(|&(p, g)| {
            let mut fa = residues(a, p, size);
            let mut fb = residues(b, p, size);
            transform(&mut fa, p, g, false);
            transform(&mut fb, p, g, false);
            for (x, y) in fa.iter_mut().zip(&fb) {
                *x = *x * y % p;
            }
            transform(&mut fa, p, g, true);
            fa.truncate(take);
            fa
        })
        .collect();

    // inverse[j][i] = p_j^{-1} mod p_i for j < i.
    let inverse: Vec<Vec<u64>> = (0..count)
        .map(|j| (0..count).map(|i| if j < i { pow_mod(primes[j].0, primes[i].0 - 2, primes[i].0) } else { 0 }).collect())
        .collect();
    let mut out = vec![0i128; len];
    let mut digits = vec![0u64; count];
    for (k, slot) in out.iter_mut().enumerate().take(take) {
        for i in 0..count {
            let p = primes[i].0;
            let mut v = channels[i][k];
            for j in 0..i {
                v = (v + p - digits[j] % p) % p * inverse[j][i] % p;
            }
            digits[i] = v;
        }
        // Mixed-radix digits of (M − 1)/2 are (p_i − 1)/2.
        let mut negative = false;
        for i in (0..count).rev() {
            let half = (primes[i].0 - 1) / 2;
            if digits[i] != half {
                negative = digits[i] > half;
                break;
            }
        }
        let mut value = 0i128;
        let mut modulus = 1i128;
        for i in 0..count {
            value = value.wrapping_add((digits[i] as i128).wrapping_mul(modulus));
            modulus = modulus.wrapping_mul(primes[i].0 as i128);
        }
        *slot = if negative { value.wrapping_sub(modulus) } else { value };
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;

    #[test]
    fn primitive_roots() {
        for (p, g) in PRIMES {
            assert_eq!(factorize(p), vec![(p, 1)]);
            assert_eq!((p - 1) % MAX_TRANSFORM as u64, 0);
            for (q, _) in factorize(p - 1) {
                assert_ne!(pow_mod(g, (p - 1) / q, p), 1, "p={p} q={q}");
            }
        }
    }

    fn naive(a: &[i128], b: &[i128], len: usize) -> Vec<i128> {
        let mut out = vec![0i128; len];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j < len {
                    out[i + j] += x * y;
                }
            }
        }
        out
    }

    #[test]
    fn matches_naive_across_sizes_and_signs() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move |bits: u32| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> (64 - bits)) as i128 - (1i128 << (bits - 1))
        };
        for (la, lb, bits) in [(1, 1, 8), (7, 300, 20), (513, 1000, 40), (1500, 1499, 55), (40, 40, 58)] {
            let a: Vec<i128> = (0..la).map(|_| next(bits)).collect();
            let b: Vec<i128> = (0..lb).map(|_| next(bits)).collect();
            for len in [1, la, la + lb - 1, la + lb + 5] {
                assert_eq!(mul_i128(&a, &b, len).unwrap(), naive(&a, &b, len), "{la}x{lb} len {len}");
            }
        }
    }

    #[test]
    fn extreme_values_reconstruct() {
        let big = (1i128 << 61) - 1;
        let a = vec![big, -big, big];
        let b = vec![-big, -big];
        assert_eq!(mul_i128(&a, &b, 4).unwrap(), naive(&a, &b, 4));
    }

    #[test]
    fn norm_bound_admits_long_moderate_inputs() {
        // Max-times-length would need 55 + 55 + 11 bits; the norms need far fewer.
        let mut a = vec![1i128; 2000];
        a[0] = 1 << 54;
        let b = a.clone();
        assert!(result_bits(&a, &b) < 112);
        assert_eq!(mul_i128(&a, &b, 2500).unwrap(), naive(&a, &b, 2500));
    }

    #[test]
    fn declines_when_result_may_not_fit() {
        let a = vec![1i128 << 70; 4];
        assert!(mul_i128(&a, &a, 7).is_none());
    }
}

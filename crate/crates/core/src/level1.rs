//! Level one: Eisenstein series, the Victor Miller basis of `S_k(SL₂(ℤ))`,
//! Hecke matrices, Ramanujan's τ and Hecke eigenforms.
//!
//! Everything here is computed from q-expansions alone and shares no code
//! with the trace formula, which makes it an independent check on [`crate::trace`].

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, ExactRational};
use crate::error::{Error, Result};
use crate::series::{self, QExpansion};

/// `dim S_k(SL₂(ℤ))` for even `k ≥ 2`.
pub fn cusp_dimension(k: u32) -> usize {
    if k < 12 || k % 2 == 1 {
        return 0;
    }
    let d = (k / 12) as usize;
    if k % 12 == 2 {
        d - 1
    } else {
        d
    }
}

/// `E₄ = 1 + 240 Σ σ₃(n) qⁿ` or `E₆ = 1 − 504 Σ σ₅(n) qⁿ`.
pub fn eisenstein(weight: u32, precision: usize) -> Result<QExpansion> {
    let (factor, power) = match weight {
        4 => (240i64, 3u32),
        6 => (-504, 5),
        _ => return Err(Error::Unsupported(format!("Eisenstein generator of weight {weight}"))),
    };
    if precision == 0 {
        return Err(Error::Zero("precision"));
    }
    let mut coefficients = vec![BigInt::one()];
    for n in 1..precision as u64 {
        coefficients.push(BigInt::from(factor) * BigInt::from(arith::sigma(n, power)?));
    }
    QExpansion::new(coefficients)
}

/// `Δ = q Π (1 − qⁿ)^24` to the given precision (coefficients of `q⁰ … q^{precision−1}`).
pub fn delta(precision: usize) -> Result<QExpansion> {
    if precision == 0 {
        return Err(Error::Zero("precision"));
    }
    let mut coefficients = vec![BigInt::zero()];
    coefficients.extend(series::eta_power_24(precision - 1));
    QExpansion::new(coefficients)
}

/// Echelon basis `f₁ … f_d` of `S_k(SL₂(ℤ))` with `a_{f_i}(j) = δ_ij` for `1 ≤ i, j ≤ d`.
///
/// Built from `Δ^j E₆^{2(d−j)} g` where `g ∈ {1, E₄, E₆, E₄², E₄E₆, E₄²E₆}`
/// carries the weight left over modulo 12.
pub fn victor_miller_basis(k: u32, precision: usize) -> Result<Vec<QExpansion>> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::BadWeight(k));
    }
    let d = cusp_dimension(k);
    if d == 0 {
        return Ok(Vec::new());
    }
    if precision < d + 1 {
        return Err(Error::Precision {
            needed: d + 1,
            available: precision,
        });
    }
    let rest = k as usize - 12 * d;
    let (a, b) = match rest {
        0 => (0, 0),
        4 => (1, 0),
        6 => (0, 1),
        8 => (2, 0),
        10 => (1, 1),
        14 => (2, 1),
        _ => unreachable!("k - 12 d is in {{0,4,6,8,10,14}} for even k"),
    };
    let e4 = eisenstein(4, precision)?;
    let e6 = eisenstein(6, precision)?;
    let delta = delta(precision)?;
    let g = &e4.pow(a) * &e6.pow(b);
    let e6_sq = &e6 * &e6;

    let mut basis: Vec<QExpansion> = (1..=d)
        .map(|j| &(&delta.pow(j as u32) * &e6_sq.pow((d - j) as u32)) * &g)
        .collect();
    // Δ^j starts at q^j with coefficient 1, so the system is unitriangular
    // and back-substitution stays integral.
    for i in (0..d).rev() {
        for j in (i + 1)..d {
            let c = basis[i].coeff(j + 1)?.clone();
            if !c.is_zero() {
                basis[i] = &basis[i] - &basis[j].scale(&c);
            }
        }
    }
    Ok(basis)
}

/// Coefficient `a_{T_m f}(n) = Σ_{d | gcd(m,n)} d^{k−1} a_f(mn/d²)` at level one.
pub fn hecke_coefficient(f: &QExpansion, k: u32, m: u64, n: u64) -> Result<BigInt> {
    if n == 0 {
        return Ok(f.coeff(0)? * arith::sigma(m, k - 1).map(BigInt::from)?);
    }
    let g = m.gcd(&n);
    let mut total = BigInt::zero();
    for d in arith::divisors(g)? {
        let idx = (m / d) * (n / d);
        total += BigInt::from(d).pow(k - 1) * f.coeff(idx as usize)?;
    }
    Ok(total)
}

/// Matrix of `T_m` on the Victor Miller basis. Row `i` holds the first `d`
/// coefficients of `T_m f_i`, which are its coordinates in the echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeMatrix {
    pub weight: u32,
    pub dimension: usize,
    pub entries: Vec<Vec<BigInt>>,
}

impl HeckeMatrix {
    pub fn identity(weight: u32, dimension: usize) -> Self {
        let entries = (0..dimension)
            .map(|i| {
                (0..dimension)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        HeckeMatrix {
            weight,
            dimension,
            entries,
        }
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dimension).map(|i| &self.entries[i][i]).sum()
    }

    pub fn mul(&self, rhs: &HeckeMatrix) -> HeckeMatrix {
        let n = self.dimension;
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|l| &self.entries[i][l] * &rhs.entries[l][j]).sum())
                    .collect()
            })
            .collect();
        HeckeMatrix {
            weight: self.weight,
            dimension: n,
            entries,
        }
    }

    pub fn scale(&self, c: &BigInt) -> HeckeMatrix {
        HeckeMatrix {
            weight: self.weight,
            dimension: self.dimension,
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|x| x * c).collect())
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &HeckeMatrix) -> HeckeMatrix {
        HeckeMatrix {
            weight: self.weight,
            dimension: self.dimension,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
                .collect(),
        }
    }
}

/// Smallest precision accepted by [`hecke_matrix`] for `T_m` in weight `k`.
pub fn hecke_precision(k: u32, m: u64) -> usize {
    m as usize * (cusp_dimension(k) + 1)
}

pub fn hecke_matrix(k: u32, m: u64, precision: usize) -> Result<HeckeMatrix> {
    if m == 0 {
        return Err(Error::Zero("m"));
    }
    let needed = hecke_precision(k, m);
    if precision < needed {
        return Err(Error::Precision {
            needed,
            available: precision,
        });
    }
    let basis = victor_miller_basis(k, precision)?;
    hecke_matrix_on(&basis, k, m)
}

fn hecke_matrix_on(basis: &[QExpansion], k: u32, m: u64) -> Result<HeckeMatrix> {
    let d = basis.len();
    let entries = basis
        .iter()
        .map(|f| {
            (1..=d as u64)
                .map(|n| hecke_coefficient(f, k, m, n))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HeckeMatrix {
        weight: k,
        dimension: d,
        entries,
    })
}

/// Fourier coefficients `a(1..=x)` of one form, with weight metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientSeries {
    pub weight: u32,
    pub label: String,
    pub values: Vec<BigInt>,
}

impl CoefficientSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `a(m)` for `1 ≤ m ≤ len`.
    pub fn get(&self, m: usize) -> Result<&BigInt> {
        if m == 0 {
            return Err(Error::Zero("m"));
        }
        self.values.get(m - 1).ok_or(Error::Precision {
            needed: m,
            available: self.values.len(),
        })
    }

    /// Writes the tab-separated coefficient format: a `# label weight=k`
    /// header followed by one `m<TAB>a(m)` line per index.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        let mut buf = String::new();
        writeln!(buf, "# {} weight={}", self.label, self.weight).unwrap();
        for (i, a) in self.values.iter().enumerate() {
            writeln!(buf, "{}\t{}", i + 1, a).unwrap();
        }
        out.write_all(buf.as_bytes())?;
        Ok(())
    }

    pub fn read_from<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines().enumerate();
        let header = loop {
            match lines.next() {
                Some((i, line)) => {
                    let line = line?;
                    if !line.trim().is_empty() {
                        break (i + 1, line);
                    }
                }
                None => {
                    return Err(Error::Parse {
                        line: 1,
                        message: "empty coefficient file".into(),
                    })
                }
            }
        };
        let (label, weight) = parse_header(&header.1).ok_or_else(|| Error::Parse {
            line: header.0,
            message: "expected header `# label weight=k`".into(),
        })?;
        let mut values = Vec::new();
        for (i, line) in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: &str| Error::Parse {
                line: i + 1,
                message: message.to_string(),
            };
            let (m, a) = line.split_once('\t').ok_or_else(|| parse_err("expected `m<TAB>a(m)`"))?;
            let m: usize = m.trim().parse().map_err(|_| parse_err("bad index"))?;
            if m != values.len() + 1 {
                return Err(parse_err(&format!("expected index {}, found {m}", values.len() + 1)));
            }
            let a: BigInt = a.trim().parse().map_err(|_| parse_err("bad coefficient"))?;
            values.push(a);
        }
        if values.is_empty() {
            return Err(Error::Parse {
                line: header.0,
                message: "no coefficients".into(),
            });
        }
        Ok(CoefficientSeries {
            weight,
            label,
            values,
        })
    }
}

fn parse_header(line: &str) -> Option<(String, u32)> {
    let body = line.strip_prefix('#')?.trim();
    let (label, weight) = body.rsplit_once(char::is_whitespace)?;
    let weight = weight.strip_prefix("weight=")?.parse().ok()?;
    Some((label.trim().to_string(), weight))
}

/// `τ(1..=x)` from `Δ = q (η³)⁸`.
pub fn tau_series(x: usize) -> Result<CoefficientSeries> {
    if x == 0 {
        return Err(Error::Zero("x"));
    }
    Ok(CoefficientSeries {
        weight: 12,
        label: "Delta".to_string(),
        values: series::eta_power_24(x),
    })
}

/// Element `a + b√D` of a quadratic field (`D` square-free, `D ≠ 1`), or a
/// rational when `b = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticNumber {
    pub rational: ExactRational,
    pub irrational: ExactRational,
    pub radicand: BigInt,
}

impl QuadraticNumber {
    pub fn trace(&self) -> ExactRational {
        &self.rational + &self.rational
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let sqrt = self.radicand.to_f64().unwrap_or(f64::NAN).sqrt();
        self.rational.to_f64().unwrap_or(f64::NAN) + self.irrational.to_f64().unwrap_or(f64::NAN) * sqrt
    }
}

/// A normalized Hecke eigenform whose coefficients may lie in `ℚ(√D)`.
#[derive(Debug, Clone)]
pub struct Eigenform {
    pub weight: u32,
    pub coefficients: Vec<QuadraticNumber>,
}

/// How to report eigenforms whose coefficients are irrational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldPolicy {
    /// Fail with [`Error::IrrationalEigenvalues`].
    RequireRational,
    /// Return one series per Galois orbit holding the traces `a_f(m) + a_{f^σ}(m)`.
    GaloisTrace,
}

fn big_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Normalized Hecke eigenforms of `S_k(SL₂(ℤ))` with `x` coefficients each.
///
/// Dimension one returns the basis element. Dimension two diagonalizes `T_2`,
/// working in `ℚ(√D)` when its characteristic polynomial is irreducible.
pub fn eigenforms(k: u32, x: usize) -> Result<Vec<Eigenform>> {
    let d = cusp_dimension(k);
    if d == 0 {
        return Ok(Vec::new());
    }
    let precision = (x + 1).max(hecke_precision(k, 2));
    let basis = victor_miller_basis(k, precision)?;
    let rational = |v: &BigInt| BigRational::from_integer(v.clone());
    let from_rational = |v: ExactRational| QuadraticNumber {
        rational: v,
        irrational: ExactRational::zero(),
        radicand: BigInt::one(),
    };
    match d {
        1 => Ok(vec![Eigenform {
            weight: k,
            coefficients: basis[0].coefficients()[1..=x]
                .iter()
                .map(|c| from_rational(rational(c)))
                .collect(),
        }]),
        2 => {
            let t2 = hecke_matrix_on(&basis, k, 2)?;
            let [m11, m12] = [&t2.entries[0][0], &t2.entries[0][1]];
            let [m21, m22] = [&t2.entries[1][0], &t2.entries[1][1]];
            if m21.is_zero() {
                return Err(Error::Unsupported(format!("degenerate T_2 matrix in weight {k}")));
            }
            let tr = m11 + m22;
            let det = m11 * m22 - m12 * m21;
            let disc = &tr * &tr - BigInt::from(4) * det;
            let (square, free) = arith::square_free_decomposition(&disc.magnitude().clone());
            let (square, free) = (BigInt::from(square), BigInt::from(free));
            // λ = (tr ± s√r)/2 and the row eigenvector is (1, (λ − m11)/m21).
            let half = ExactRational::new(BigInt::one(), BigInt::from(2));
            let mut forms = Vec::new();
            for sign in [1i32, -1] {
                let (lam_a, lam_b, radicand) = if free.is_one() {
                    let root = big_sqrt_exact(&disc).expect("square discriminant");
                    let lam = ExactRational::new(&tr + BigInt::from(sign) * root, BigInt::from(2));
                    (lam, ExactRational::zero(), BigInt::one())
                } else {
                    (
                        rational(&tr) * &half,
                        rational(&(BigInt::from(sign) * &square)) * &half,
                        free.clone(),
                    )
                };
                let v_a = (&lam_a - rational(m11)) / rational(m21);
                let v_b = &lam_b / rational(m21);
                let coefficients = (1..=x)
                    .map(|n| {
                        let c1 = rational(basis[0].coeff(n)?);
                        let c2 = rational(basis[1].coeff(n)?);
                        Ok(QuadraticNumber {
                            rational: c1 + &v_a * &c2,
                            irrational: &v_b * &c2,
                            radicand: radicand.clone(),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                forms.push(Eigenform {
                    weight: k,
                    coefficients,
                });
            }
            Ok(forms)
        }
        _ => Err(Error::Unsupported(format!(
            "eigenform extraction for dim S_{k} = {d} > 2"
        ))),
    }
}

/// Integer coefficient series of the eigenforms in weight `k`.
pub fn eigen_coefficients(k: u32, x: usize, policy: FieldPolicy) -> Result<Vec<CoefficientSeries>> {
    let forms = eigenforms(k, x)?;
    let to_int = |q: &ExactRational| -> Result<BigInt> {
        if q.is_integer() {
            Ok(q.to_integer())
        } else {
            Err(Error::Integrity(format!("non-integral eigenform coefficient {q}")))
        }
    };
    let irrational = forms
        .iter()
        .flat_map(|f| &f.coefficients)
        .find(|c| !c.irrational.is_zero());
    match (irrational, policy) {
        (None, _) => forms
            .iter()
            .enumerate()
            .map(|(i, f)| {
                Ok(CoefficientSeries {
                    weight: k,
                    label: format!("{k}.{}", i + 1),
                    values: f.coefficients.iter().map(|c| to_int(&c.rational)).collect::<Result<_>>()?,
                })
            })
            .collect(),
        (Some(c), FieldPolicy::RequireRational) => Err(Error::IrrationalEigenvalues {
            weight: k,
            discriminant: c.radicand.to_string(),
        }),
        (Some(_), FieldPolicy::GaloisTrace) => Ok(vec![CoefficientSeries {
            weight: k,
            label: format!("{k}.orbit-trace"),
            values: forms[0].coefficients.iter().map(|c| to_int(&c.trace())).collect::<Result<_>>()?,
        }]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().copied().map(BigInt::from).collect()
    }

    #[test]
    fn eisenstein_examples() {
        assert_eq!(eisenstein(4, 3).unwrap().coefficients(), ints(&[1, 240, 2160]).as_slice());
        assert_eq!(eisenstein(6, 2).unwrap().coefficients(), ints(&[1, -504]).as_slice());
        assert_eq!(eisenstein(4, 1).unwrap().coefficients(), ints(&[1]).as_slice());
        assert!(eisenstein(8, 3).is_err());
    }

    #[test]
    fn e4_cubed_minus_e6_squared_is_1728_delta() {
        let p = 40;
        let e4 = eisenstein(4, p).unwrap();
        let e6 = eisenstein(6, p).unwrap();
        let lhs = &e4.pow(3) - &e6.pow(2);
        assert_eq!(lhs, delta(p).unwrap().scale(&BigInt::from(1728)));
    }

    #[test]
    fn victor_miller_examples() {
        let b = victor_miller_basis(12, 5).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].coefficients(), ints(&[0, 1, -24, 252, -1472]).as_slice());
        assert!(victor_miller_basis(2, 10).unwrap().is_empty());
        let b = victor_miller_basis(24, 6).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(&b[0].coefficients()[..3], ints(&[0, 1, 0]).as_slice());
        assert_eq!(&b[1].coefficients()[..3], ints(&[0, 0, 1]).as_slice());
        assert!(victor_miller_basis(24, 2).is_err());
    }

    #[test]
    fn basis_is_echelon_for_all_small_weights() {
        for k in (12..=60).step_by(2) {
            let d = cusp_dimension(k);
            let b = victor_miller_basis(k, d + 3).unwrap();
            assert_eq!(b.len(), d);
            for (i, f) in b.iter().enumerate() {
                for j in 0..=d {
                    let expected = if j == i + 1 { 1 } else { 0 };
                    assert_eq!(f.coeff(j).unwrap(), &BigInt::from(expected), "k={k} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn hecke_examples() {
        let p = hecke_precision(12, 4);
        assert_eq!(hecke_matrix(12, 2, 4).unwrap().entries, vec![ints(&[-24])]);
        assert_eq!(hecke_matrix(12, 4, p).unwrap().entries, vec![ints(&[-1472])]);
        for k in [12u32, 24, 36] {
            let d = cusp_dimension(k);
            assert_eq!(hecke_matrix(k, 1, d + 1).unwrap(), HeckeMatrix::identity(k, d));
        }
        assert!(matches!(hecke_matrix(12, 4, 3), Err(Error::Precision { .. })));
    }

    fn matrix(k: u32, m: u64) -> HeckeMatrix {
        hecke_matrix(k, m, hecke_precision(k, m)).unwrap()
    }

    #[test]
    fn hecke_multiplicativity_and_commutation() {
        for k in (12..=26).step_by(2) {
            for (m, n) in [(2u64, 3u64), (2, 5), (3, 4), (4, 5), (3, 7)] {
                let lhs = matrix(k, m).mul(&matrix(k, n));
                assert_eq!(lhs, matrix(k, m * n), "k={k} m={m} n={n}");
                assert_eq!(lhs, matrix(k, n).mul(&matrix(k, m)));
            }
            for (m, n) in [(2u64, 4u64), (4, 9), (3, 9)] {
                assert_eq!(matrix(k, m).mul(&matrix(k, n)), matrix(k, n).mul(&matrix(k, m)));
            }
        }
    }

    #[test]
    fn hecke_prime_power_recurrence() {
        for k in (12..=26).step_by(2) {
            for p in [2u64, 3] {
                let pk = BigInt::from(p).pow(k - 1);
                for r in 1..=3u32 {
                    let lhs = matrix(k, p.pow(r + 1));
                    let rhs = matrix(k, p).mul(&matrix(k, p.pow(r))).sub(&matrix(k, p.pow(r - 1)).scale(&pk));
                    assert_eq!(lhs, rhs, "k={k} p={p} r={r}");
                }
            }
        }
    }

    #[test]
    fn tau_examples() {
        let t = tau_series(5).unwrap();
        assert_eq!(t.values, ints(&[1, -24, 252, -1472, 4830]));
        assert_eq!(tau_series(1).unwrap().values, ints(&[1]));
        let t = tau_series(6).unwrap();
        assert_eq!(t.get(6).unwrap(), &(t.get(2).unwrap() * t.get(3).unwrap()));
        assert_eq!(t.get(6).unwrap(), &BigInt::from(-6048));
        assert!(tau_series(0).is_err());
        assert!(t.get(7).is_err());
    }

    #[test]
    fn tau_matches_victor_miller_delta() {
        let x = 1000;
        let vm = victor_miller_basis(12, x + 1).unwrap();
        assert_eq!(&vm[0].coefficients()[1..], tau_series(x).unwrap().values.as_slice());
    }

    #[test]
    fn eigenform_examples() {
        let s = eigen_coefficients(12, 5, FieldPolicy::RequireRational).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].values, tau_series(5).unwrap().values);
        let s = eigen_coefficients(16, 3, FieldPolicy::RequireRational).unwrap();
        assert_eq!(s[0].values, ints(&[1, 216, -3348]));
        assert!(eigen_coefficients(2, 10, FieldPolicy::RequireRational).unwrap().is_empty());
    }

    #[test]
    fn weight_24_eigenforms_live_in_quadratic_field() {
        assert!(matches!(
            eigen_coefficients(24, 10, FieldPolicy::RequireRational),
            Err(Error::IrrationalEigenvalues { .. })
        ));
        let forms = eigenforms(24, 12).unwrap();
        assert_eq!(forms.len(), 2);
        // 144169 is the well-known radicand for weight 24.
        assert_eq!(forms[0].coefficients[1].radicand, BigInt::from(144169));
        // Galois-orbit traces equal the Hecke-matrix traces.
        let traces = eigen_coefficients(24, 12, FieldPolicy::GaloisTrace).unwrap();
        for m in 1..=12u64 {
            assert_eq!(traces[0].get(m as usize).unwrap(), &matrix(24, m).trace(), "m={m}");
        }
        // Eigenforms are multiplicative and a(1) = 1.
        for f in &forms {
            assert_eq!(f.coefficients[0].rational, ExactRational::one());
            let a2 = f.coefficients[1].to_f64();
            let a3 = f.coefficients[2].to_f64();
            let a6 = f.coefficients[5].to_f64();
            assert!((a2 * a3 - a6).abs() < 1e-6 * a6.abs());
        }
    }

    #[test]
    fn coefficient_file_round_trip_and_errors() {
        let s = tau_series(20).unwrap();
        let mut buf = Vec::new();
        s.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# Delta weight=12\n1\t1\n2\t-24\n"));
        assert_eq!(CoefficientSeries::read_from(buf.as_slice()).unwrap(), s);

        let bad = "# f weight=4\n1\t1\n3\t5\n";
        assert!(matches!(
            CoefficientSeries::read_from(bad.as_bytes()),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(CoefficientSeries::read_from("1\t1\n".as_bytes()).is_err());
        let labelled = "# my form 11a weight=2\n1\t1\n2\t-2\n";
        let s = CoefficientSeries::read_from(labelled.as_bytes()).unwrap();
        assert_eq!((s.label.as_str(), s.weight, s.len()), ("my form 11a", 2, 2));
    }
}

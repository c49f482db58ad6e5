use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("argument must be positive, got 0 for `{0}`")]
    Zero(&'static str),

    #[error("weight k = {0} is not an even integer >= 2")]
    BadWeight(u32),

    #[error("gcd(m, N) = gcd({m}, {level}) != 1; traces are only defined here for m coprime to the level")]
    NotCoprime { m: u64, level: u64 },

    #[error("index m = {0} is not a perfect square, so T'_m has irrational normalization")]
    NonSquareIndex(u64),

    #[error("S_{weight}(Gamma0({level})) is zero-dimensional; the quadratic mean is undefined")]
    ZeroDimensional { level: u64, weight: u32 },

    #[error("insufficient precision: need {needed} coefficients, have {available}")]
    Precision { needed: usize, available: usize },

    #[error("eigenvalues of T_2 in weight {weight} are irrational (discriminant {discriminant})")]
    IrrationalEigenvalues { weight: u32, discriminant: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("quadrature did not converge (estimated error {estimate:e})")]
    Quadrature { estimate: f64 },

    #[error("data integrity: {0}")]
    Integrity(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

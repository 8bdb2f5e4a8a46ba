//! Exact rational scalars and the small special-function helpers built on them.
//!
//! [`Scalar`] is an arbitrary-precision rational kept in canonical form
//! (positive denominator, coprime parts). Its text form is `p/q`, or `p` for
//! integers, with no embedded whitespace.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// `p/q` in canonical form. Panics if `q == 0`.
pub fn frac(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// Parses a single `p/q` or `p` token.
pub fn parse(token: &str) -> Result<Scalar> {
    if token.is_empty() || token.chars().any(char::is_whitespace) {
        return Err(Error::Parse(format!("invalid rational token {token:?}")));
    }
    token
        .parse::<Scalar>()
        .map_err(|e| Error::Parse(format!("invalid rational token {token:?}: {e}")))
}

/// Parses a comma-separated list of rational tokens.
pub fn parse_list(list: &str) -> Result<Vec<Scalar>> {
    list.split(',').map(parse).collect()
}

pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Decimal rendering with 17 significant digits.
pub fn decimal17(x: &Scalar) -> String {
    format!("{:.16e}", to_f64(x))
}

/// The decimal value rounded to 17 significant digits, as an `f64`.
pub fn decimal17_f64(x: &Scalar) -> f64 {
    decimal17(x).parse().unwrap_or(f64::NAN)
}

pub fn is_integer(x: &Scalar) -> bool {
    x.denom().is_one()
}

pub fn is_negative_integer(x: &Scalar) -> bool {
    is_integer(x) && x.is_negative()
}

/// Rising factorial `(z)_n = z (z+1) ... (z+n-1)`, with `(z)_0 = 1`.
pub fn pochhammer(z: &Scalar, n: usize) -> Scalar {
    let mut acc = Scalar::one();
    let mut factor = z.clone();
    for _ in 0..n {
        acc *= &factor;
        factor += Scalar::one();
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

//! Truncated formal power series with an explicitly tracked valid order.

use std::ops::{Add, Mul, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Coefficients `c_0..=c_order` of a power series in `t`; nothing is known
/// about the coefficients beyond `order`. `order == -1` is the series about
/// which nothing is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Scalar>,
    order: i64,
}

impl TruncatedSeries {
    /// A series whose every listed coefficient is trusted.
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        let order = coeffs.len() as i64 - 1;
        TruncatedSeries { coeffs, order }
    }

    pub fn unknown() -> Self {
        TruncatedSeries {
            coeffs: Vec::new(),
            order: -1,
        }
    }

    /// The constant `c`, known through `t^order`.
    pub fn constant(c: Scalar, order: i64) -> Self {
        let mut coeffs = vec![Scalar::zero(); (order + 1).max(0) as usize];
        if let Some(first) = coeffs.first_mut() {
            *first = c;
        }
        TruncatedSeries { coeffs, order }
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `t^n`, or `None` if it lies beyond the tracked order.
    pub fn coeff(&self, n: usize) -> Option<&Scalar> {
        self.coeffs.get(n)
    }

    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order).max(-1);
        TruncatedSeries {
            coeffs: self.coeffs[..(order + 1) as usize].to_vec(),
            order,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            order: self.order,
        }
    }

    /// `self / (c t)`. Requires a zero constant term; the order drops by one.
    /// A series of order `-1` stays unknown.
    pub fn divide_by_ct(&self, c: &Scalar) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let Some(first) = self.coeffs.first() else {
            return Ok(Self::unknown());
        };
        if !first.is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        Ok(TruncatedSeries {
            coeffs: self.coeffs[1..].iter().map(|x| x / c).collect(),
            order: self.order - 1,
        })
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Self {
        let order = self.order.min(other.order);
        let len = (order + 1) as usize;
        TruncatedSeries {
            coeffs: self.coeffs[..len]
                .iter()
                .zip(&other.coeffs[..len])
                .map(|(a, b)| f(a, b))
                .collect(),
            order,
        }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, other: &TruncatedSeries) -> TruncatedSeries {
        self.zip_with(other, |a, b| a - b)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, other: &TruncatedSeries) -> TruncatedSeries {
        self.zip_with(other, |a, b| a + b)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, other: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order.min(other.order);
        let len = (order + 1) as usize;
        let coeffs = (0..len)
            .map(|n| {
                (0..=n).fold(Scalar::zero(), |acc, i| {
                    acc + &self.coeffs[i] * &other.coeffs[n - i]
                })
            })
            .collect();
        TruncatedSeries { coeffs, order }
    }
}

/// Coefficientwise difference; the result order is the smaller input order.
pub fn series_sub(a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
    a - b
}

pub fn series_divide_by_ct(a: &TruncatedSeries, c: &Scalar) -> Result<TruncatedSeries> {
    a.divide_by_ct(c)
}

//! Gauss-Borel (pivot-free LU) factorisation of the moment matrices of a
//! system and of its `r` Darboux shifts, and the extraction of the bidiagonal
//! coefficients `alpha_n` from them.
//!
//! With `M^[j] = A^[j] B^[j]` for `j = 0..=r`:
//!
//! ```text
//! alpha_{(r+1)n}   = b^[r]_{n,n} / b^[0]_{n,n}       = a^[0]_{n+1,n} - a^[r]_{n,n-1}
//! alpha_{(r+1)n+i} = b^[i-1]_{n+1,n+1} / b^[i]_{n,n} = a^[i]_{n+1,n} - a^[i-1]_{n+1,n}
//! ```
//!
//! The LU of a truncation is the truncation of the LU, so an `N x N` window
//! determines `alpha_0..=alpha_{(r+1)(N-2)+r}` exactly.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::moments::{build_moment_matrix, StripedMomentMatrix, SystemSpec};
use crate::scalar::Scalar;

/// Provenance of an [`AlphaSequence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    GaussBorel,
    Minors,
    EulerGauss,
    ClosedForm,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::GaussBorel,
        Method::Minors,
        Method::EulerGauss,
        Method::ClosedForm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::GaussBorel => "gauss-borel",
            Method::Minors => "minors",
            Method::EulerGauss => "bcf",
            Method::ClosedForm => "closed-form",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown method {s:?}")))
    }
}

/// `alpha_0..=alpha_K`, all nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaSequence {
    values: Vec<Scalar>,
    method: Method,
}

impl AlphaSequence {
    /// Fails with `NoBidiagonalFactorisation` at the first zero entry.
    pub fn new(values: Vec<Scalar>, method: Method) -> Result<Self> {
        if let Some(index) = values.iter().position(Zero::is_zero) {
            return Err(Error::NoBidiagonalFactorisation { index });
        }
        Ok(AlphaSequence { values, method })
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// Index of the last valid coefficient, `None` when empty.
    pub fn valid_through(&self) -> Option<usize> {
        self.values.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, index: usize) -> Result<&Scalar> {
        self.values.get(index).ok_or(Error::AlphaIndexOutOfRange {
            index,
            available: self.values.len(),
        })
    }

    pub fn truncated(mut self, count: usize) -> Self {
        self.values.truncate(count);
        self
    }
}

/// `M = A B` with `A` unit-lower-triangular and `B` upper-triangular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LUPair {
    pub a: Matrix,
    pub b: Matrix,
}

impl LUPair {
    pub fn size(&self) -> usize {
        self.a.rows()
    }
}

/// Doolittle elimination without pivoting. Stops at the first zero pivot and
/// returns its index; rows and columns past it are left unfilled.
fn doolittle(m: &Matrix) -> (Matrix, Matrix, Option<usize>) {
    let n = m.rows();
    let mut a = Matrix::identity(n);
    let mut b = Matrix::zeros(n, n);
    for i in 0..n {
        for k in i..n {
            let mut acc = m[(i, k)].clone();
            for p in 0..i {
                acc -= &a[(i, p)] * &b[(p, k)];
            }
            b[(i, k)] = acc;
        }
        if b[(i, i)].is_zero() {
            return (a, b, Some(i));
        }
        for k in i + 1..n {
            let mut acc = m[(k, i)].clone();
            for p in 0..i {
                acc -= &a[(k, p)] * &b[(p, i)];
            }
            a[(k, i)] = acc / &b[(i, i)];
        }
    }
    (a, b, None)
}

pub fn lu_factorise(m: &StripedMomentMatrix) -> Result<LUPair> {
    match doolittle(m.entries()) {
        (a, b, None) => Ok(LUPair { a, b }),
        (_, _, Some(p)) => Err(Error::SingularLeadingMinor {
            shift: m.shift(),
            n: p + 1,
        }),
    }
}

/// Truncation size `N` of the moment matrices needed for `alpha_0..=alpha_K`.
pub fn window_size(r: usize, max_index: usize) -> usize {
    if max_index <= r {
        2
    } else {
        (max_index - r).div_ceil(r + 1) + 2
    }
}

/// Last alpha index determined by `N x N` moment matrices.
pub fn window_max_index(r: usize, size: usize) -> usize {
    assert!(size >= 2, "need N >= 2");
    (r + 1) * (size - 2) + r
}

/// Alpha index whose numerator is the pivot `b^[shift]_{p,p}`.
fn alpha_index_of_pivot(r: usize, shift: usize, p: usize) -> usize {
    if shift == r {
        (r + 1) * p
    } else {
        // b^[j]_{p,p} = numerator of alpha_{(r+1)(p-1)+j+1}; b^[j]_{0,0} = 1 for j < r.
        debug_assert!(p >= 1);
        (r + 1) * (p - 1) + shift + 1
    }
}

/// LU factorisations of `M^[0], ..., M^[r]` at a common size `N`.
#[derive(Debug, Clone)]
pub struct MomentMatrixSet {
    r: usize,
    size: usize,
    matrices: Vec<StripedMomentMatrix>,
    lus: Vec<LUPair>,
}

impl MomentMatrixSet {
    /// A zero pivot in `M^[0]` means the multiple orthogonal polynomials of
    /// the system itself degenerate (`SingularLeadingMinor`). A zero pivot in
    /// a shifted matrix means some alpha vanishes; the first such index is
    /// reported as `NoBidiagonalFactorisation`.
    pub fn build(spec: &SystemSpec, size: usize) -> Result<Self> {
        assert!(size >= 2, "need N >= 2");
        let r = spec.r();
        let factored = (0..=r)
            .into_par_iter()
            .map(|j| {
                let m = build_moment_matrix(&spec.shifted(j), size)?;
                let (a, b, zero) = doolittle(m.entries());
                Ok((m, LUPair { a, b }, zero))
            })
            .collect::<Result<Vec<_>>>()?;

        if let Some(p) = factored[0].2 {
            return Err(Error::SingularLeadingMinor { shift: 0, n: p + 1 });
        }
        let first_zero = factored
            .iter()
            .enumerate()
            .skip(1)
            .filter_map(|(j, (_, _, zero))| zero.map(|p| alpha_index_of_pivot(r, j, p)))
            .min();
        if let Some(index) = first_zero {
            return Err(Error::NoBidiagonalFactorisation { index });
        }

        let (matrices, lus) = factored.into_iter().map(|(m, lu, _)| (m, lu)).unzip();
        Ok(MomentMatrixSet {
            r,
            size,
            matrices,
            lus,
        })
    }

    /// Builds the smallest set that determines `alpha_0..=alpha_{max_index}`.
    pub fn for_max_index(spec: &SystemSpec, max_index: usize) -> Result<Self> {
        Self::build(spec, window_size(spec.r(), max_index))
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn matrix(&self, shift: usize) -> &StripedMomentMatrix {
        &self.matrices[shift]
    }

    pub fn lu(&self, shift: usize) -> &LUPair {
        &self.lus[shift]
    }

    pub fn max_index(&self) -> usize {
        window_max_index(self.r, self.size)
    }

    /// Recurrence matrix `H^[j]` of the shifted system `V^[j]`.
    pub fn hessenberg(&self, shift: usize) -> Result<Matrix> {
        hessenberg_from_lu(&self.lus[shift], self.r)
    }
}

fn b_ratio(set: &MomentMatrixSet, t: usize) -> Scalar {
    let r = set.r;
    let (n, i) = (t / (r + 1), t % (r + 1));
    let b = |j: usize, p: usize| &set.lus[j].b[(p, p)];
    if i == 0 {
        b(r, n) / b(0, n)
    } else {
        b(i - 1, n + 1) / b(i, n)
    }
}

fn a_difference(set: &MomentMatrixSet, t: usize) -> Scalar {
    let r = set.r;
    let (n, i) = (t / (r + 1), t % (r + 1));
    let a = |j: usize, row: usize, col: usize| &set.lus[j].a[(row, col)];
    if i == 0 {
        let tail = if n == 0 {
            Scalar::zero()
        } else {
            a(r, n, n - 1).clone()
        };
        a(0, n + 1, n) - tail
    } else {
        a(i, n + 1, n) - a(i - 1, n + 1, n)
    }
}

/// `alpha_t` as ratios of LU pivots, for every `t` in the window.
pub fn pivot_ratio_alphas(set: &MomentMatrixSet) -> Vec<Scalar> {
    (0..=set.max_index()).map(|t| b_ratio(set, t)).collect()
}

/// `alpha_t` as differences of subdiagonal entries of the unit-lower factors.
pub fn lower_difference_alphas(set: &MomentMatrixSet) -> Vec<Scalar> {
    (0..=set.max_index())
        .map(|t| a_difference(set, t))
        .collect()
}

fn agree(method: &str, first: Vec<Scalar>, second: Vec<Scalar>) -> Result<Vec<Scalar>> {
    for (t, (x, y)) in first.iter().zip(&second).enumerate() {
        if x != y {
            return Err(Error::InternalInconsistency(format!(
                "alpha_{t}: the two {method} forms give {x} and {y}"
            )));
        }
    }
    Ok(first)
}

/// Alphas from the LU pivots, cross-checked against the unit-lower factors.
pub fn alphas_from_lu(set: &MomentMatrixSet) -> Result<AlphaSequence> {
    let values = agree("LU", pivot_ratio_alphas(set), lower_difference_alphas(set))?;
    AlphaSequence::new(values, Method::GaussBorel)
}

/// Leading principal minors `Delta_0 = 1, Delta_1, ..., Delta_N` and the
/// deleted minors `D_p` (the `p x p` minor of the leading `(p+1)`-block with
/// its second-to-last row and last column removed), for which
/// `a_{p,p-1} = D_p / Delta_p`.
struct Minors {
    leading: Vec<Scalar>,
    deleted: Vec<Scalar>,
}

impl Minors {
    fn of(m: &Matrix) -> Self {
        let n = m.rows();
        let leading = (0..=n).map(|p| m.leading(p, p).determinant()).collect();
        let deleted = (0..n)
            .map(|p| {
                if p == 0 {
                    return Scalar::zero();
                }
                let rows: Vec<usize> = (0..p - 1).chain(std::iter::once(p)).collect();
                let cols: Vec<usize> = (0..p).collect();
                m.select(&rows, &cols).determinant()
            })
            .collect();
        Minors { leading, deleted }
    }

    fn all(set: &MomentMatrixSet) -> Vec<Minors> {
        set.matrices
            .par_iter()
            .map(|m| Minors::of(m.entries()))
            .collect()
    }
}

fn checked_div(num: Scalar, den: &Scalar, t: usize) -> Result<Scalar> {
    if den.is_zero() {
        return Err(Error::InternalInconsistency(format!(
            "vanishing minor in the denominator of alpha_{t}"
        )));
    }
    Ok(num / den)
}

fn minor_ratios(set: &MomentMatrixSet, minors: &[Minors]) -> Result<Vec<Scalar>> {
    let r = set.r;
    let delta = |j: usize, p: usize| &minors[j].leading[p];
    (0..=set.max_index())
        .map(|t| {
            let (n, i) = (t / (r + 1), t % (r + 1));
            if i == 0 {
                checked_div(
                    delta(r, n + 1) * delta(0, n),
                    &(delta(r, n) * delta(0, n + 1)),
                    t,
                )
            } else {
                checked_div(
                    delta(i - 1, n + 2) * delta(i, n),
                    &(delta(i - 1, n + 1) * delta(i, n + 1)),
                    t,
                )
            }
        })
        .collect()
}

fn minor_differences(set: &MomentMatrixSet, minors: &[Minors]) -> Result<Vec<Scalar>> {
    let r = set.r;
    let lower = |j: usize, p: usize, t: usize| {
        checked_div(minors[j].deleted[p].clone(), &minors[j].leading[p], t)
    };
    (0..=set.max_index())
        .map(|t| {
            let (n, i) = (t / (r + 1), t % (r + 1));
            if i == 0 {
                let tail = if n == 0 {
                    Scalar::zero()
                } else {
                    lower(r, n, t)?
                };
                Ok(lower(0, n + 1, t)? - tail)
            } else {
                Ok(lower(i, n + 1, t)? - lower(i - 1, n + 1, t)?)
            }
        })
        .collect()
}

/// `alpha_t` as ratios of leading principal minors of the moment matrices.
pub fn minor_ratio_alphas(set: &MomentMatrixSet) -> Result<Vec<Scalar>> {
    minor_ratios(set, &Minors::all(set))
}

/// `alpha_t` as differences of deleted-row minors over leading minors.
pub fn minor_difference_alphas(set: &MomentMatrixSet) -> Result<Vec<Scalar>> {
    minor_differences(set, &Minors::all(set))
}

/// Alphas from ratios of leading principal minors, cross-checked against the
/// difference form built from deleted minors.
pub fn alphas_from_minors(set: &MomentMatrixSet) -> Result<AlphaSequence> {
    let minors = Minors::all(set);
    let values = agree(
        "determinant",
        minor_ratios(set, &minors)?,
        minor_differences(set, &minors)?,
    )?;
    AlphaSequence::new(values, Method::Minors)
}

/// Truncated recurrence matrix `H = A^{-1} Lambda A` of size `(N-1) x (N-1)`,
/// checked against `B (Lambda^T)^r B^{-1}` on the columns where the latter is
/// exact.
pub fn hessenberg_from_lu(lu: &LUPair, r: usize) -> Result<Matrix> {
    let n = lu.size();
    assert!(n >= 2, "need N >= 2");
    let m = n - 1;
    let a_inv =
        lu.a.triangular_inverse()
            .ok_or_else(|| Error::InternalInconsistency("singular unit-lower factor".into()))?;
    let h = Matrix::from_fn(m, m, |i, k| {
        (0..=i).fold(Scalar::zero(), |acc, p| {
            acc + &a_inv[(i, p)] * &lu.a[(p + 1, k)]
        })
    });

    let b_inv =
        lu.b.triangular_inverse()
            .ok_or_else(|| Error::InternalInconsistency("singular upper factor".into()))?;
    // (B (Lambda^T)^r B^{-1})_{i,k} = sum_{p >= r} b_{i,p} c_{p-r,k}; exact for k + r < N.
    for i in 0..m {
        for k in 0..m.min(n.saturating_sub(r)) {
            let alt = (r.max(i)..n).fold(Scalar::zero(), |acc, p| {
                acc + &lu.b[(i, p)] * &b_inv[(p - r, k)]
            });
            if alt != h[(i, k)] {
                return Err(Error::InternalInconsistency(format!(
                    "H[{i},{k}]: A^-1 Lambda A gives {} but B Lambda^T^r B^-1 gives {alt}",
                    h[(i, k)]
                )));
            }
        }
    }

    for i in 0..m {
        for k in 0..m {
            let ok = if k == i + 1 {
                h[(i, k)].is_one()
            } else if k > i + 1 || i > k + r {
                h[(i, k)].is_zero()
            } else {
                true
            };
            if !ok {
                return Err(Error::InternalInconsistency(format!(
                    "H[{i},{k}] = {} breaks the banded unit-Hessenberg shape",
                    h[(i, k)]
                )));
            }
        }
    }
    Ok(h)
}

/// `alpha_0..alpha_{count-1}` by the LU route.
pub fn gauss_borel_alphas(spec: &SystemSpec, count: usize) -> Result<AlphaSequence> {
    let set = MomentMatrixSet::for_max_index(spec, count.saturating_sub(1))?;
    Ok(alphas_from_lu(&set)?.truncated(count))
}

/// `alpha_0..alpha_{count-1}` by the determinant route.
pub fn minors_alphas(spec: &SystemSpec, count: usize) -> Result<AlphaSequence> {
    let set = MomentMatrixSet::for_max_index(spec, count.saturating_sub(1))?;
    Ok(alphas_from_minors(&set)?.truncated(count))
}

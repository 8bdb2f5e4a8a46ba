//! Systems of moment functionals `(v_1, ..., v_r)`, their Darboux shifts and
//! the striped moment matrices built from them.
//!
//! Every system is normalised so that `<v_j, 1> = 1`. Rescaling a functional
//! leaves the recurrence coefficients unchanged, and the power-series route
//! requires the normalisation.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{self, is_integer, is_negative_integer, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemKind {
    /// Weights `x^{a_j} (1-x)^b` on `(0, 1)`.
    JacobiPineiro { a: Vec<Scalar>, b: Scalar },
    /// Weights `x^{a_j} e^{-x}` on `(0, inf)`.
    LaguerreFirstKind { a: Vec<Scalar> },
    /// Explicit moment tables, one list per functional, already normalised.
    Custom { moments: Vec<Vec<Scalar>> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSpec {
    r: usize,
    kind: SystemKind,
}

/// On-disk custom moment table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentFile {
    pub r: usize,
    pub moments: Vec<Vec<String>>,
}

impl SystemSpec {
    pub fn jacobi_pineiro(a: Vec<Scalar>, b: Scalar) -> Result<Self> {
        check_r(a.len())?;
        for (j, aj) in a.iter().enumerate() {
            if is_negative_integer(aj) {
                return Err(Error::DegenerateParameters(format!(
                    "a_{} = {aj} is a negative integer",
                    j + 1
                )));
            }
            let shifted = aj + &b + Scalar::one();
            if is_negative_integer(&shifted) {
                return Err(Error::DegenerateParameters(format!(
                    "a_{} + b + 1 = {shifted} is a negative integer",
                    j + 1
                )));
            }
        }
        Ok(SystemSpec {
            r: a.len(),
            kind: SystemKind::JacobiPineiro { a, b },
        })
    }

    pub fn laguerre(a: Vec<Scalar>) -> Result<Self> {
        check_r(a.len())?;
        for (j, aj) in a.iter().enumerate() {
            if is_negative_integer(aj) {
                return Err(Error::DegenerateParameters(format!(
                    "a_{} = {aj} is a negative integer",
                    j + 1
                )));
            }
        }
        Ok(SystemSpec {
            r: a.len(),
            kind: SystemKind::LaguerreFirstKind { a },
        })
    }

    /// Builds a system from raw moment tables, dividing each table by its
    /// zeroth moment.
    pub fn custom(moments: Vec<Vec<Scalar>>) -> Result<Self> {
        check_r(moments.len())?;
        let mut normalised = Vec::with_capacity(moments.len());
        for (j, table) in moments.into_iter().enumerate() {
            let Some(first) = table.first().cloned() else {
                return Err(Error::InvalidSystem(format!(
                    "moment table of v{} is empty",
                    j + 1
                )));
            };
            if first.is_zero() {
                return Err(Error::InvalidSystem(format!(
                    "zeroth moment of v{} is zero and cannot be normalised",
                    j + 1
                )));
            }
            normalised.push(table.into_iter().map(|m| m / &first).collect());
        }
        Ok(SystemSpec {
            r: normalised.len(),
            kind: SystemKind::Custom {
                moments: normalised,
            },
        })
    }

    pub fn from_moment_file(file: &MomentFile) -> Result<Self> {
        if file.r != file.moments.len() {
            return Err(Error::InvalidSystem(format!(
                "r = {} but {} moment lists given",
                file.r,
                file.moments.len()
            )));
        }
        let tables = file
            .moments
            .iter()
            .map(|list| list.iter().map(|t| scalar::parse(t)).collect())
            .collect::<Result<Vec<Vec<Scalar>>>>()?;
        Self::custom(tables)
    }

    pub fn from_moment_json(text: &str) -> Result<Self> {
        let file: MomentFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("moment file: {e}")))?;
        Self::from_moment_file(&file)
    }

    /// The normalised moments `<v_j, x^n>`, `n < count`, in file form.
    pub fn to_moment_file(&self, count: usize) -> Result<MomentFile> {
        let moments = (1..=self.r)
            .map(|j| {
                self.moments(j, count)
                    .map(|v| v.iter().map(ToString::to_string).collect())
            })
            .collect::<Result<_>>()?;
        Ok(MomentFile { r: self.r, moments })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn kind(&self) -> &SystemKind {
        &self.kind
    }

    pub fn is_builtin(&self) -> bool {
        !matches!(self.kind, SystemKind::Custom { .. })
    }

    /// Non-fatal parameter diagnostics: built-in systems with `a_i - a_j`
    /// integral fall outside the hypotheses of the closed forms.
    pub fn warnings(&self) -> Vec<String> {
        let a = match &self.kind {
            SystemKind::JacobiPineiro { a, .. } | SystemKind::LaguerreFirstKind { a } => a,
            SystemKind::Custom { .. } => return Vec::new(),
        };
        let mut out = Vec::new();
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                if is_integer(&(&a[i] - &a[j])) {
                    out.push(format!(
                        "a_{} - a_{} = {} is an integer; the system may be degenerate",
                        i + 1,
                        j + 1,
                        &a[i] - &a[j]
                    ));
                }
            }
        }
        out
    }

    /// Number of moments available for `v_j`, `None` if unbounded.
    pub fn available(&self, j: usize) -> Option<usize> {
        match &self.kind {
            SystemKind::Custom { moments } => moments.get(j.wrapping_sub(1)).map(Vec::len),
            _ => None,
        }
    }

    fn check_index(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.r {
            return Err(Error::FunctionalIndexOutOfRange {
                index: j,
                r: self.r,
            });
        }
        Ok(())
    }

    /// `<v_j, x^n>` for `1 <= j <= r`.
    pub fn moment(&self, j: usize, n: usize) -> Result<Scalar> {
        self.check_index(j)?;
        match &self.kind {
            SystemKind::JacobiPineiro { a, b } => {
                let aj = &a[j - 1];
                let top = aj + Scalar::one();
                let bottom = aj + b + scalar::int(2);
                Ok(scalar::pochhammer(&top, n) / scalar::pochhammer(&bottom, n))
            }
            SystemKind::LaguerreFirstKind { a } => {
                Ok(scalar::pochhammer(&(&a[j - 1] + Scalar::one()), n))
            }
            SystemKind::Custom { moments } => {
                let table = &moments[j - 1];
                table.get(n).cloned().ok_or(Error::MomentTableExhausted {
                    functional: j,
                    order: n,
                    available: table.len(),
                })
            }
        }
    }

    /// `<v_j, x^n>` for `n < count`.
    pub fn moments(&self, j: usize, count: usize) -> Result<Vec<Scalar>> {
        self.check_index(j)?;
        match &self.kind {
            SystemKind::JacobiPineiro { a, b } => {
                let aj = &a[j - 1];
                let mut out = Vec::with_capacity(count);
                let mut m = Scalar::one();
                for n in 0..count {
                    if n > 0 {
                        let k = scalar::int(n as i64 - 1);
                        m = m * (aj + Scalar::one() + &k) / (aj + b + scalar::int(2) + &k);
                    }
                    out.push(m.clone());
                }
                Ok(out)
            }
            SystemKind::LaguerreFirstKind { a } => {
                let aj = &a[j - 1];
                let mut out = Vec::with_capacity(count);
                let mut m = Scalar::one();
                for n in 0..count {
                    if n > 0 {
                        m *= aj + scalar::int(n as i64);
                    }
                    out.push(m.clone());
                }
                Ok(out)
            }
            SystemKind::Custom { .. } => (0..count).map(|n| self.moment(j, n)).collect(),
        }
    }

    pub fn shifted(&self, shift: usize) -> ShiftedSystem<'_> {
        assert!(shift <= self.r, "shift {shift} out of range 0..={}", self.r);
        ShiftedSystem { base: self, shift }
    }
}

fn check_r(r: usize) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidSystem(
            "a system needs at least one functional".into(),
        ));
    }
    Ok(())
}

/// The Darboux-shifted system `V^[j] = (v_{j+1}, ..., v_r, x v_1, ..., x v_j)`.
#[derive(Debug, Clone, Copy)]
pub struct ShiftedSystem<'a> {
    base: &'a SystemSpec,
    shift: usize,
}

impl<'a> ShiftedSystem<'a> {
    pub fn base(&self) -> &'a SystemSpec {
        self.base
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    /// Maps `<v^[j]_i, x^n>` onto a base moment `(functional, order)`.
    fn source(&self, i: usize, n: usize) -> (usize, usize) {
        let r = self.base.r;
        if i + self.shift <= r {
            (i + self.shift, n)
        } else {
            (i + self.shift - r, n + 1)
        }
    }

    /// `<v^[j]_i, x^n>`.
    pub fn moment(&self, i: usize, n: usize) -> Result<Scalar> {
        self.base.check_index(i)?;
        let (f, order) = self.source(i, n);
        self.base.moment(f, order)
    }
}

pub fn shifted_moment(sys: &ShiftedSystem<'_>, i: usize, n: usize) -> Result<Scalar> {
    sys.moment(i, n)
}

/// Leading `N x N` block of the moment matrix of a shifted system, with
/// entry `(n, r k + q) = <v^[j]_{q+1}, x^{k+n}>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripedMomentMatrix {
    shift: usize,
    r: usize,
    entries: Matrix,
}

impl StripedMomentMatrix {
    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn size(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }
}

pub fn build_moment_matrix(sys: &ShiftedSystem<'_>, size: usize) -> Result<StripedMomentMatrix> {
    assert!(size > 0, "moment matrix size must be positive");
    let base = sys.base();
    let r = base.r();
    // Highest base moment order touched: (N-1) + (N-1)/r, plus one for wrapped functionals.
    let max_order = (size - 1) + (size - 1) / r + 1;
    let tables = (1..=r)
        .map(|j| {
            let count = base
                .available(j)
                .map_or(max_order + 1, |a| a.min(max_order + 1));
            base.moments(j, count)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut entries = Matrix::zeros(size, size);
    for n in 0..size {
        for col in 0..size {
            let (k, q) = (col / r, col % r);
            let (f, order) = sys.source(q + 1, k + n);
            let table = &tables[f - 1];
            entries[(n, col)] = table
                .get(order)
                .cloned()
                .ok_or(Error::MomentTableExhausted {
                    functional: f,
                    order,
                    available: table.len(),
                })?;
        }
    }
    Ok(StripedMomentMatrix {
        shift: sys.shift(),
        r,
        entries,
    })
}

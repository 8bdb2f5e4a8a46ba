//! The Euler-Gauss power-series ladder for `alpha_n`, and r-Dyck path
//! enumeration (Stieltjes-Rogers polynomials evaluated at the alphas) used to
//! check the production-matrix and moment identities.
//!
//! With `g_0 = 1` and `g_j(t) = sum_n <v_j, x^n> t^n` for `1 <= j <= r`, the
//! ladder is `g_{k+1} - g_k = alpha_k t g_{k+r+1}`.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gauss_borel::{AlphaSequence, Method};
use crate::hessenberg::assemble;
use crate::matrix::Matrix;
use crate::moments::SystemSpec;
use crate::scalar::Scalar;
use crate::series::TruncatedSeries;

/// Series order that suffices for `alpha_0..=alpha_K`.
pub fn required_order(r: usize, max_index: usize) -> usize {
    max_index / r + 1
}

#[derive(Debug, Clone)]
pub struct EulerGaussState {
    r: usize,
    table: Vec<TruncatedSeries>,
    alphas: Vec<Scalar>,
}

impl EulerGaussState {
    /// Seeds `g_0..=g_r` with the moments through `t^order`.
    pub fn new(spec: &SystemSpec, order: usize) -> Result<Self> {
        let r = spec.r();
        let mut table = vec![TruncatedSeries::constant(Scalar::one(), order as i64)];
        for j in 1..=r {
            table.push(TruncatedSeries::new(spec.moments(j, order + 1)?));
        }
        Ok(EulerGaussState {
            r,
            table,
            alphas: Vec::new(),
        })
    }

    pub fn series(&self, k: usize) -> Option<&TruncatedSeries> {
        self.table.get(k)
    }

    pub fn alphas(&self) -> &[Scalar] {
        &self.alphas
    }

    /// Computes the next `alpha_k` and `g_{k+r+1}`.
    pub fn step(&mut self) -> Result<&Scalar> {
        let k = self.alphas.len();
        let diff = &self.table[k + 1] - &self.table[k];
        let alpha = diff.coeff(1).cloned().ok_or(Error::InsufficientOrder {
            series: k + 1,
            needed: 1,
            order: diff.order(),
        })?;
        if alpha.is_zero() {
            return Err(Error::NoBidiagonalFactorisation { index: k });
        }
        let next = diff.divide_by_ct(&alpha).map_err(|e| match e {
            Error::NonzeroConstantTerm => Error::InternalInconsistency(format!(
                "g_{} - g_{k} has a nonzero constant term",
                k + 1
            )),
            other => other,
        })?;
        debug_assert_eq!(self.table.len(), k + self.r + 1);
        self.table.push(next);
        self.alphas.push(alpha);
        Ok(&self.alphas[k])
    }
}

/// `alpha_0..=alpha_K` by the Euler-Gauss ladder.
pub fn euler_gauss(spec: &SystemSpec, max_index: usize) -> Result<AlphaSequence> {
    let mut state = EulerGaussState::new(spec, required_order(spec.r(), max_index))?;
    for _ in 0..=max_index {
        state.step()?;
    }
    AlphaSequence::new(state.alphas, Method::EulerGauss)
}

/// `alpha_0..alpha_{count-1}` by the Euler-Gauss ladder.
pub fn euler_gauss_alphas(spec: &SystemSpec, count: usize) -> Result<AlphaSequence> {
    if count == 0 {
        return AlphaSequence::new(Vec::new(), Method::EulerGauss);
    }
    euler_gauss(spec, count - 1)
}

/// Weighted r-Dyck path enumeration: rises weigh 1, a fall of `r` ending at
/// height `h` weighs `alpha_h`.
#[derive(Debug, Clone)]
pub struct PathWeightOracle {
    r: usize,
    weights: Vec<Scalar>,
}

impl PathWeightOracle {
    pub fn new(alphas: &AlphaSequence, r: usize) -> Self {
        Self::from_weights(alphas.values().to_vec(), r)
    }

    /// Arbitrary (possibly zero) fall weights.
    pub fn from_weights(weights: Vec<Scalar>, r: usize) -> Self {
        assert!(r >= 1);
        PathWeightOracle { r, weights }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    fn weight(&self, h: usize) -> Result<&Scalar> {
        self.weights.get(h).ok_or(Error::AlphaIndexOutOfRange {
            index: h,
            available: self.weights.len(),
        })
    }

    /// Total weight of paths from `(0, 0)` with `steps` steps ending at height `end`.
    pub fn paths(&self, steps: usize, end: usize) -> Result<Scalar> {
        let mut memo = HashMap::new();
        self.walk(steps, 0, end, &mut memo)
    }

    fn walk(
        &self,
        left: usize,
        h: usize,
        end: usize,
        memo: &mut HashMap<(usize, usize), Scalar>,
    ) -> Result<Scalar> {
        // With u rises and d falls left: u + d = left, h + u - r d = end.
        let span = h + left;
        if span < end
            || !(span - end).is_multiple_of(self.r + 1)
            || (span - end) / (self.r + 1) > left
        {
            return Ok(Scalar::zero());
        }
        if left == 0 {
            return Ok(Scalar::one());
        }
        if let Some(v) = memo.get(&(left, h)) {
            return Ok(v.clone());
        }
        let mut total = self.walk(left - 1, h + 1, end, memo)?;
        if h >= self.r {
            let down = self.walk(left - 1, h - self.r, end, memo)?;
            if !down.is_zero() {
                total += self.weight(h - self.r)? * down;
            }
        }
        memo.insert((left, h), total.clone());
        Ok(total)
    }
}

/// `S_n`: closed r-Dyck paths of length `(r+1)n`.
pub fn sr_polynomial(oracle: &PathWeightOracle, n: usize) -> Result<Scalar> {
    oracle.paths((oracle.r + 1) * n, 0)
}

/// `S_{n,k}`: paths from the origin to `((r+1)n, (r+1)k)`.
pub fn generalised_sr(oracle: &PathWeightOracle, n: usize, k: usize) -> Result<Scalar> {
    let r1 = oracle.r + 1;
    oracle.paths(r1 * n, r1 * k)
}

/// `S-bar_{n;j}`: paths from the origin to `((r+1)n + j, j)`.
pub fn modified_sr(oracle: &PathWeightOracle, n: usize, j: usize) -> Result<Scalar> {
    oracle.paths((oracle.r + 1) * n + j, j)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductionCell {
    pub n: usize,
    pub k: usize,
    pub matrix: Scalar,
    pub paths: Scalar,
}

impl ProductionCell {
    pub fn passed(&self) -> bool {
        self.matrix == self.paths
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductionReport {
    pub cells: Vec<ProductionCell>,
}

impl ProductionReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(ProductionCell::passed)
    }
}

/// Compares `(H^n)_{0,k}` with `S_{n,k}` for `n <= n_max`, `k <= k_max`, where
/// `H = L_1 ... L_r U` is assembled from the alphas.
pub fn production_check(
    alphas: &AlphaSequence,
    r: usize,
    n_max: usize,
    k_max: usize,
) -> Result<ProductionReport> {
    let m = n_max.max(k_max) + 1;
    let h = assemble(alphas, r, m)?.product();
    let mut rows = Vec::with_capacity(n_max + 1);
    // row 0 of H^n, for n = 0..=n_max
    let mut row = Matrix::from_fn(1, m, |_, k| {
        if k == 0 {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    for _ in 0..=n_max {
        rows.push(row.row(0).to_vec());
        row = &row * &h;
    }
    let oracle = PathWeightOracle::new(alphas, r);
    let cells = (0..=n_max)
        .flat_map(|n| (0..=k_max).map(move |k| (n, k)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(n, k)| {
            Ok(ProductionCell {
                n,
                k,
                matrix: rows[n][k].clone(),
                paths: generalised_sr(&oracle, n, k)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProductionReport { cells })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentCell {
    pub j: usize,
    pub n: usize,
    pub moment: Scalar,
    pub paths: Scalar,
}

impl MomentCell {
    pub fn passed(&self) -> bool {
        self.moment == self.paths
    }
}

/// Alpha count needed by [`production_check`] and [`moment_identity_check`].
pub fn required_alpha_count(r: usize, n_max: usize, k_max: usize) -> usize {
    (r + 1) * n_max.max(k_max) + r
}

/// Compares `<v_j, x^n>` with `S-bar_{n;j-1}` for `1 <= j <= r`, `n <= n_max`.
pub fn moment_identity_check(
    spec: &SystemSpec,
    alphas: &AlphaSequence,
    n_max: usize,
) -> Result<Vec<MomentCell>> {
    let r = spec.r();
    let oracle = PathWeightOracle::new(alphas, r);
    (1..=r)
        .flat_map(|j| (0..=n_max).map(move |n| (j, n)))
        .map(|(j, n)| {
            Ok(MomentCell {
                j,
                n,
                moment: spec.moment(j, n)?,
                paths: modified_sr(&oracle, n, j - 1)?,
            })
        })
        .collect()
}

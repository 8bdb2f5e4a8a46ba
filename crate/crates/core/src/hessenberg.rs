//! Bidiagonal factors `L_1, ..., L_r, U`, the banded Hessenberg matrix
//! `H = L_1 ... L_r U`, its bands `gamma_n^[k]`, the type II polynomials of
//! the recurrence, and checks of step-line orthogonality and of
//! `P_n = det(x I_n - H_n)`.
//!
//! `U` carries `alpha_{(r+1)n}` on its diagonal and ones above it; `L_k` is
//! unit-lower-bidiagonal with `alpha_{(r+1)n+k}` at `(n+1, n)`.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::Result;
use crate::gauss_borel::AlphaSequence;
use crate::matrix::Matrix;
use crate::moments::SystemSpec;
use crate::poly::Poly;
use crate::scalar::Scalar;

/// Size `m` of the factors that only use `alpha_0..=alpha_K`.
pub fn factor_size(r: usize, max_index: usize) -> Option<usize> {
    max_index.checked_sub(r).map(|d| d / (r + 1) + 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BidiagonalFactors {
    r: usize,
    size: usize,
    lower: Vec<Matrix>,
    upper: Matrix,
}

impl BidiagonalFactors {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `L_k`, `k = 1..=r`.
    pub fn lower(&self, k: usize) -> &Matrix {
        &self.lower[k - 1]
    }

    pub fn upper(&self) -> &Matrix {
        &self.upper
    }

    /// `L_1 ... L_r U`. Exact on the whole `m x m` block.
    pub fn product(&self) -> Matrix {
        self.cyclic_product(0)
    }

    /// `L_{j+1} ... L_r U L_1 ... L_j`, the recurrence matrix of the `j`-th
    /// Darboux shift. Exact on rows `0..m-1` (all rows for `j = 0`).
    pub fn cyclic_product(&self, j: usize) -> Matrix {
        assert!(j <= self.r, "shift {j} exceeds r = {}", self.r);
        let mut acc = Matrix::identity(self.size);
        for l in &self.lower[j..] {
            acc = &acc * l;
        }
        acc = &acc * &self.upper;
        for l in &self.lower[..j] {
            acc = &acc * l;
        }
        acc
    }
}

pub fn assemble(alphas: &AlphaSequence, r: usize, m: usize) -> Result<BidiagonalFactors> {
    assert!(r >= 1 && m >= 1);
    let upper = {
        let mut u = Matrix::zeros(m, m);
        for n in 0..m {
            u[(n, n)] = alphas.get((r + 1) * n)?.clone();
            if n + 1 < m {
                u[(n, n + 1)] = Scalar::one();
            }
        }
        u
    };
    let lower = (1..=r)
        .map(|k| {
            let mut l = Matrix::identity(m);
            for n in 0..m - 1 {
                l[(n + 1, n)] = alphas.get((r + 1) * n + k)?.clone();
            }
            Ok(l)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BidiagonalFactors {
        r,
        size: m,
        lower,
        upper,
    })
}

/// Index lists `r >= l_0 > l_1 > ... > l_k >= 0` of the summands of
/// `gamma_n^[k]`; there are `C(r+1, k+1)` of them.
pub fn summands(r: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(top: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for l in (left - 1..top).rev() {
            cur.push(l);
            go(l, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(r + 1, k + 1, &mut Vec::new(), &mut out);
    out
}

/// `gamma_n^[k]` for `0 <= k <= r`, stored as `gammas[k][n]` for `n < m - k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HessenbergBands {
    r: usize,
    gammas: Vec<Vec<Scalar>>,
}

impl HessenbergBands {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn gamma(&self, k: usize, n: usize) -> Option<&Scalar> {
        self.gammas.get(k)?.get(n)
    }

    pub fn band(&self, k: usize) -> &[Scalar] {
        &self.gammas[k]
    }

    /// Number of rows covered, `m`.
    pub fn size(&self) -> usize {
        self.gammas[0].len()
    }

    /// Unit-lower-Hessenberg `m x m` matrix with `gamma_n^[k]` at `(n+k, n)`.
    pub fn to_matrix(&self) -> Matrix {
        let m = self.size();
        let mut h = Matrix::zeros(m, m);
        for (k, band) in self.gammas.iter().enumerate() {
            for (n, g) in band.iter().enumerate() {
                h[(n + k, n)] = g.clone();
            }
        }
        for i in 0..m.saturating_sub(1) {
            h[(i, i + 1)] = Scalar::one();
        }
        h
    }
}

/// `gamma_n^[k] = sum prod_{i=0..=k} alpha_{(r+1)(n+i)+l_i-r}` over the index
/// lists of [`summands`], with `alpha` at negative indices taken as zero.
pub fn gamma_expand(alphas: &AlphaSequence, r: usize, m: usize) -> Result<HessenbergBands> {
    let gammas = (0..=r.min(m.saturating_sub(1)))
        .map(|k| {
            let terms = summands(r, k);
            (0..m - k)
                .map(|n| {
                    let mut total = Scalar::zero();
                    'term: for ls in &terms {
                        let mut prod = Scalar::one();
                        for (i, &l) in ls.iter().enumerate() {
                            let Some(idx) = ((r + 1) * (n + i) + l).checked_sub(r) else {
                                continue 'term;
                            };
                            prod *= alphas.get(idx)?;
                        }
                        total += prod;
                    }
                    Ok(total)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HessenbergBands { r, gammas })
}

/// Monic `P_0, ..., P_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialTable {
    polys: Vec<Poly>,
}

impl PolynomialTable {
    pub fn get(&self, n: usize) -> &Poly {
        &self.polys[n]
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    /// Highest degree present.
    pub fn max_degree(&self) -> usize {
        self.polys.len() - 1
    }
}

/// `P_{n+1} = x P_n - sum_{k=0}^{min(r,n)} gamma_{n-k}^[k] P_{n-k}`, `P_0 = 1`.
///
/// Panics if the bands do not cover `n < m`.
pub fn polynomials(bands: &HessenbergBands, m: usize) -> PolynomialTable {
    assert!(m <= bands.size(), "bands cover only {} rows", bands.size());
    let mut polys = vec![Poly::one()];
    for n in 0..m {
        let mut next = polys[n].mul_x();
        for k in 0..=bands.r.min(n) {
            next = &next - &polys[n - k].scale(&bands.gammas[k][n - k]);
        }
        polys.push(next);
    }
    PolynomialTable { polys }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalityCheck {
    pub j: usize,
    pub k: usize,
    pub n: usize,
    pub value: Scalar,
    pub expect_zero: bool,
}

impl OrthogonalityCheck {
    pub fn passed(&self) -> bool {
        self.value.is_zero() == self.expect_zero
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalityReport {
    pub checks: Vec<OrthogonalityCheck>,
}

impl OrthogonalityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(OrthogonalityCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &OrthogonalityCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

/// `<v_j, x^k p>` from the moment table.
pub fn pair(spec: &SystemSpec, j: usize, k: usize, p: &Poly) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (i, c) in p.coeffs().iter().enumerate() {
        acc += c * spec.moment(j, k + i)?;
    }
    Ok(acc)
}

/// Step-line type II conditions: `<v_j, x^k P_n> = 0` for `n >= rk + j` and
/// `!= 0` for `n = rk + j - 1`, over every `(j, k)` with `rk + j - 1 <= n`.
pub fn verify_orthogonality(
    polys: &PolynomialTable,
    spec: &SystemSpec,
) -> Result<OrthogonalityReport> {
    let r = spec.r();
    let checks = polys
        .polys
        .par_iter()
        .enumerate()
        .map(|(n, p)| {
            let mut out = Vec::new();
            for j in 1..=r {
                let mut k = 0;
                while r * k + j <= n + 1 {
                    out.push(OrthogonalityCheck {
                        j,
                        k,
                        n,
                        value: pair(spec, j, k, p)?,
                        expect_zero: n >= r * k + j,
                    });
                    k += 1;
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(OrthogonalityReport { checks })
}

/// `det(x I_n - H_n)` of a lower-Hessenberg `H` by expansion along the last
/// row: with `B = x I - H`,
/// `D_{i+1} = sum_{j<=i} (-1)^{i-j} b_{i,j} (prod_{p=j}^{i-1} b_{p,p+1}) D_j`.
pub fn char_poly(h: &Matrix, n: usize) -> Poly {
    assert!(n <= h.rows());
    let b = |i: usize, j: usize| -> Poly {
        let c = Poly::constant(-h[(i, j)].clone());
        if i == j {
            &c + &Poly::new(vec![Scalar::zero(), Scalar::one()])
        } else {
            c
        }
    };
    let mut dets = vec![Poly::one()];
    for i in 0..n {
        let mut acc = Poly::zero();
        let mut chain = Scalar::one();
        for j in (0..=i).rev() {
            if j < i {
                // (-1) * b_{j,j+1} = h_{j,j+1}
                chain *= &h[(j, j + 1)];
            }
            acc = &acc + &(&b(i, j) * &dets[j]).scale(&chain);
        }
        dets.push(acc);
    }
    dets.pop().unwrap_or_else(Poly::one)
}

/// `P_n == det(x I_n - H_n)` with `H` the product of the factors.
pub fn char_poly_check(factors: &BidiagonalFactors, polys: &PolynomialTable, n: usize) -> bool {
    assert!(n <= factors.size() && n <= polys.max_degree());
    char_poly(&factors.product(), n) == *polys.get(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss_borel::{alphas_from_lu, gauss_borel_alphas, Method, MomentMatrixSet};
    use crate::scalar::{binomial, frac, int};
    use proptest::prelude::*;

    fn seq(v: Vec<Scalar>) -> AlphaSequence {
        AlphaSequence::new(v, Method::GaussBorel).unwrap()
    }

    fn legendre(count: usize) -> AlphaSequence {
        seq((0..count)
            .map(|t| {
                let m = (t / 2) as i64;
                if t % 2 == 0 {
                    frac(m + 1, 2 * (2 * m + 1))
                } else {
                    frac(m + 1, 2 * (2 * m + 3))
                }
            })
            .collect())
    }

    fn laguerre0(count: usize) -> AlphaSequence {
        seq((0..count).map(|t| int((t / 2 + 1) as i64)).collect())
    }

    fn hilbert() -> SystemSpec {
        SystemSpec::custom(vec![(0..40).map(|n| frac(1, n + 1)).collect()]).unwrap()
    }

    fn jp_example() -> SystemSpec {
        SystemSpec::jacobi_pineiro(vec![frac(1, 2), frac(1, 3)], frac(1, 4)).unwrap()
    }

    fn det_at(h: &Matrix, n: usize, x: &Scalar) -> Scalar {
        Matrix::from_fn(n, n, |i, j| {
            let d = if i == j { x.clone() } else { int(0) };
            d - &h[(i, j)]
        })
        .determinant()
    }

    #[test]
    fn placement() {
        let f = assemble(&seq(vec![frac(1, 2), frac(1, 6), frac(1, 3)]), 1, 2).unwrap();
        assert_eq!(f.lower(1)[(1, 0)], frac(1, 6));
        assert_eq!(f.upper()[(0, 0)], frac(1, 2));
        assert_eq!(f.upper()[(1, 1)], frac(1, 3));
        assert_eq!(f.upper()[(0, 1)], int(1));
        assert_eq!(
            assemble(&seq(vec![frac(1, 2), frac(1, 6)]), 1, 2).err(),
            Some(crate::Error::AlphaIndexOutOfRange {
                index: 2,
                available: 2
            })
        );
    }

    #[test]
    fn product_matches_bands() {
        let alphas = seq((1..=40).map(|n| frac(n, n * n + 3)).collect());
        for r in 1..=3 {
            let m = factor_size(r, 39).unwrap();
            let f = assemble(&alphas, r, m).unwrap();
            let h = f.product();
            let bands = gamma_expand(&alphas, r, m).unwrap();
            assert_eq!(h, bands.to_matrix());
            for i in 0..m - 1 {
                assert!(h[(i, i + 1)].is_one());
            }
            if r == 2 {
                assert_eq!(h[(2, 0)], *bands.gamma(2, 0).unwrap());
                let a = alphas.values();
                assert_eq!(h[(2, 0)], &a[0] * &a[2] * &a[4]);
            }
        }
    }

    #[test]
    fn summand_counts() {
        for r in 1..=5 {
            for k in 0..=r {
                let s = summands(r, k);
                assert_eq!(
                    num_bigint::BigInt::from(s.len()),
                    binomial(r as u64 + 1, k as u64 + 1)
                );
                assert!(s
                    .iter()
                    .all(|ls| ls.len() == k + 1 && ls.windows(2).all(|w| w[0] > w[1])));
            }
        }
    }

    #[test]
    fn legendre_bands() {
        let bands = gamma_expand(&legendre(20), 1, 5).unwrap();
        assert_eq!(bands.gamma(0, 0), Some(&frac(1, 2)));
        assert_eq!(bands.gamma(0, 1), Some(&frac(1, 2)));
        assert_eq!(bands.gamma(1, 0), Some(&frac(1, 12)));
        assert_eq!(bands.gamma(1, 1), Some(&frac(1, 15)));
        assert!(bands.band(0).iter().all(|g| *g == frac(1, 2)));
        let polys = polynomials(&bands, 3);
        assert_eq!(polys.get(1), &Poly::linear(frac(1, 2)));
        assert_eq!(polys.get(2), &Poly::new(vec![frac(1, 6), int(-1), int(1)]));
    }

    #[test]
    fn laguerre_bands() {
        let bands = gamma_expand(&laguerre0(40), 1, 10).unwrap();
        for n in 0..10 {
            assert_eq!(bands.gamma(0, n), Some(&int(2 * n as i64 + 1)));
        }
        for n in 1..10 {
            assert_eq!(bands.gamma(1, n - 1), Some(&int((n * n) as i64)));
        }
    }

    #[test]
    fn first_band_entry() {
        let bands = gamma_expand(&legendre(10), 3, 2).unwrap();
        assert_eq!(bands.gamma(0, 0), Some(&frac(1, 2)));
        assert_eq!(bands.band(1).len(), 1);
        assert_eq!(bands.gamma(2, 0), None);
    }

    #[test]
    fn orthogonality_legendre_and_jp() {
        let bands = gamma_expand(&legendre(20), 1, 6).unwrap();
        let polys = polynomials(&bands, 6);
        let report = verify_orthogonality(&polys, &hilbert()).unwrap();
        assert!(
            report.passed(),
            "{:?}",
            report.failures().collect::<Vec<_>>()
        );
        assert!(pair(&hilbert(), 1, 0, polys.get(2)).unwrap().is_zero());
        assert!(pair(&hilbert(), 1, 1, polys.get(2)).unwrap().is_zero());
        assert!(!pair(&hilbert(), 1, 2, polys.get(2)).unwrap().is_zero());

        let spec = jp_example();
        let alphas = gauss_borel_alphas(&spec, 30).unwrap();
        let bands = gamma_expand(&alphas, 2, 7).unwrap();
        let polys = polynomials(&bands, 7);
        let report = verify_orthogonality(&polys, &spec).unwrap();
        assert!(report.passed());
        assert!(pair(&spec, 2, 0, polys.get(2)).unwrap().is_zero());
        assert!(!pair(&spec, 1, 1, polys.get(2)).unwrap().is_zero());
        assert!(pair(&spec, 1, 0, polys.get(1)).unwrap().is_zero());
    }

    #[test]
    fn perturbed_polynomial_fails_orthogonality() {
        let bands = gamma_expand(&legendre(20), 1, 4).unwrap();
        let mut polys = polynomials(&bands, 4);
        polys.polys[3] = &polys.polys[3] + &Poly::constant(frac(1, 1000));
        assert!(!verify_orthogonality(&polys, &hilbert()).unwrap().passed());
    }

    #[test]
    fn characteristic_polynomials() {
        let spec = jp_example();
        let alphas = gauss_borel_alphas(&spec, 30).unwrap();
        for (alphas, r) in [(legendre(30), 1), (alphas, 2)] {
            let m = 7;
            let f = assemble(&alphas, r, m).unwrap();
            let polys = polynomials(&gamma_expand(&alphas, r, m).unwrap(), m);
            let h = f.product();
            for n in 0..=m {
                assert!(char_poly_check(&f, &polys, n));
                let p = char_poly(&h, n);
                assert!(p.is_monic() && p.degree() == Some(n));
                for x in 0..=n as i64 {
                    let x = frac(2 * x - 3, 3);
                    assert_eq!(p.eval(&x), det_at(&h, n, &x));
                }
            }
            assert_eq!(char_poly(&h, 1), Poly::linear(alphas.values()[0].clone()));
        }
    }

    #[test]
    fn cyclic_products_match_shifted_lu() {
        let spec = SystemSpec::jacobi_pineiro(vec![frac(2, 3), frac(-1, 5)], frac(3, 2)).unwrap();
        let set = MomentMatrixSet::build(&spec, 7).unwrap();
        let alphas = alphas_from_lu(&set).unwrap();
        let m = factor_size(2, set.max_index()).unwrap();
        assert_eq!(m, 6);
        let f = assemble(&alphas, 2, m).unwrap();
        for j in 0..=2 {
            let h = set.hessenberg(j).unwrap();
            let c = f.cyclic_product(j);
            let rows = if j == 0 { m } else { m - 1 };
            for i in 0..rows {
                for k in 0..m {
                    assert_eq!(h[(i, k)], c[(i, k)], "j={j} ({i},{k})");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn char_poly_matches_point_determinants(
            entries in prop::collection::vec((-5i64..6, 1i64..4), 25),
            x in (-4i64..5, 1i64..3),
        ) {
            let n = 5;
            let h = Matrix::from_fn(n, n, |i, j| {
                if j > i + 1 { int(0) } else { let (p, q) = entries[i * n + j]; frac(p, q) }
            });
            let x = frac(x.0, x.1);
            for k in 0..=n {
                prop_assert_eq!(char_poly(&h, k).eval(&x), det_at(&h, k, &x));
            }
        }

        #[test]
        fn product_equals_band_expansion(
            r in 1usize..4,
            vals in prop::collection::vec((1i64..9, 1i64..9), 24),
        ) {
            let alphas = seq(vals.iter().map(|&(p, q)| frac(p, q)).collect());
            let m = factor_size(r, 23).unwrap();
            let f = assemble(&alphas, r, m).unwrap();
            prop_assert_eq!(f.product(), gamma_expand(&alphas, r, m).unwrap().to_matrix());
        }
    }
}

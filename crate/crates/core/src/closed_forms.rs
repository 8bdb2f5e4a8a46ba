//! Explicit `alpha_n` for Jacobi-Pineiro and multiple Laguerre (first kind)
//! systems, and their asymptotics.
//!
//! Indices are split as `n = (r+1)(rm + k) + i` with `0 <= k < r` and
//! `0 <= i <= r`. The parameter lists are extended by `a_0 = -1` and by
//! `a*_0 = -1`, `a*_{rn+j} = a_j + n` for `1 <= j <= r`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gauss_borel::{AlphaSequence, Method};
use crate::moments::{SystemKind, SystemSpec};
use crate::scalar::{int, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormParams {
    r: usize,
    a: Vec<Scalar>,
    b: Option<Scalar>,
}

impl ClosedFormParams {
    pub fn jacobi_pineiro(a: Vec<Scalar>, b: Scalar) -> Self {
        assert!(!a.is_empty());
        ClosedFormParams {
            r: a.len(),
            a,
            b: Some(b),
        }
    }

    pub fn laguerre(a: Vec<Scalar>) -> Self {
        assert!(!a.is_empty());
        ClosedFormParams {
            r: a.len(),
            a,
            b: None,
        }
    }

    pub fn from_spec(spec: &SystemSpec) -> Result<Self> {
        match spec.kind() {
            SystemKind::JacobiPineiro { a, b } => Ok(Self::jacobi_pineiro(a.clone(), b.clone())),
            SystemKind::LaguerreFirstKind { a } => Ok(Self::laguerre(a.clone())),
            SystemKind::Custom { .. } => Err(Error::InvalidSystem(
                "closed forms exist only for built-in systems".into(),
            )),
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn is_laguerre(&self) -> bool {
        self.b.is_none()
    }

    /// `(m, k, i)` with `n = (r+1)(rm + k) + i`.
    pub fn decompose(&self, n: usize) -> (usize, usize, usize) {
        let r = self.r;
        let (q, i) = (n / (r + 1), n % (r + 1));
        (q / r, q % r, i)
    }

    /// `a_j` for `0 <= j <= r`, with `a_0 = -1`.
    pub fn a(&self, j: usize) -> Scalar {
        if j == 0 {
            int(-1)
        } else {
            self.a[j - 1].clone()
        }
    }

    /// `a'_{(r+1)n+j} = a_j + n`, `0 <= j <= r`.
    pub fn a_prime(&self, p: usize) -> Scalar {
        let r1 = self.r + 1;
        self.a(p % r1) + int((p / r1) as i64)
    }

    /// `a*_0 = -1`, `a*_{rn+j} = a_j + n` for `1 <= j <= r`.
    pub fn a_star(&self, p: usize) -> Scalar {
        if p == 0 {
            return int(-1);
        }
        let q = p - 1;
        self.a[q % self.r].clone() + int((q / self.r) as i64)
    }

    fn b(&self) -> Result<&Scalar> {
        self.b
            .as_ref()
            .ok_or_else(|| Error::DegenerateParameters("the Jacobi-Pineiro formulas need b".into()))
    }
}

fn ratio(num: Scalar, den: Scalar, n: usize) -> Result<Scalar> {
    if den.is_zero() {
        return Err(Error::DegenerateParameters(format!(
            "vanishing denominator in the closed form for alpha_{n}"
        )));
    }
    Ok(num / den)
}

fn product(range: impl Iterator<Item = usize>, f: impl Fn(usize) -> Scalar) -> Scalar {
    range.fold(Scalar::one(), |acc, j| acc * f(j))
}

/// Jacobi-Pineiro alpha from the branched-continued-fraction coefficients.
pub fn jp_alpha_bcf(params: &ClosedFormParams, n: usize) -> Result<Scalar> {
    let b = params.b()?;
    let r = params.r;
    let (m, k, i) = params.decompose(n);
    let rm = int((r * m + k) as i64) + b;
    let full = int(((r + 1) * m + k) as i64) + b;
    let a = |j| params.a(j);

    let num_tail =
        product(0..i, |j| a(j) + &rm + int(2)) * product(i + 1..=r, |j| a(j) + &rm + int(1));
    let (num, den) = if k + i < r {
        (
            (a(k + i + 1) - a(i) + int(m as i64)) * num_tail,
            product(1..=k + i + 1, |j| a(j) + &full + int(2))
                * product(k + i + 1..=r, |j| a(j) + &full + int(1)),
        )
    } else {
        let s = k + i + 1 - r;
        (
            (a(s) - a(i) + int(m as i64 + 1)) * num_tail,
            product(1..=s, |j| a(j) + &full + int(3)) * product(s..=r, |j| a(j) + &full + int(2)),
        )
    };
    ratio(num, den, n)
}

/// Jacobi-Pineiro alpha from the leading coefficients of type I polynomials.
pub fn jp_alpha_type1(params: &ClosedFormParams, n: usize) -> Result<Scalar> {
    let b = params.b()?;
    let r = params.r;
    let (m, k, i) = params.decompose(n);
    let s = |p: usize| params.a_star(p);
    let low = int((r * m + k + 1) as i64) + b;
    let high = int(((r + 1) * m + k + 1) as i64) + b;
    let mm = int(m as i64);

    let den = product(1..=r + 1, |j| s(k + i + j) + &high);
    let num = if i == 0 {
        (s(k + 1) + &mm + int(1)) * product(1..=r, |j| s(j) + &low)
    } else {
        (s(k + i + 1) - s(i) + &mm) * &low * product(1..r, |j| s(i + j) + &low)
    };
    ratio(num, den, n)
}

/// Multiple Laguerre (first kind) alpha, `a*_{k+i+1} - a*_i + m`.
pub fn laguerre_alpha(params: &ClosedFormParams, n: usize) -> Result<Scalar> {
    let (m, k, i) = params.decompose(n);
    Ok(params.a_star(k + i + 1) - params.a_star(i) + int(m as i64))
}

/// `alpha_0..alpha_{count-1}` of a built-in system; Jacobi-Pineiro uses the
/// continued-fraction family.
pub fn closed_form_alphas(spec: &SystemSpec, count: usize) -> Result<AlphaSequence> {
    let params = ClosedFormParams::from_spec(spec)?;
    let values = (0..count)
        .map(|n| {
            if params.is_laguerre() {
                laguerre_alpha(&params, n)
            } else {
                jp_alpha_bcf(&params, n)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    AlphaSequence::new(values, Method::ClosedForm)
}

/// `r^r / (r+1)^{r+1}`.
pub fn jp_limit(r: usize) -> Scalar {
    let r = r as u32;
    Scalar::new(
        num_bigint::BigInt::from(r).pow(r),
        num_bigint::BigInt::from(r + 1).pow(r + 1),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticRow {
    pub n: usize,
    pub alpha: Scalar,
    /// `|alpha_n - r^r/(r+1)^{r+1}|` for Jacobi-Pineiro, `alpha_n r(r+1)/n`
    /// for Laguerre (absent at `n = 0`).
    pub statistic: Option<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticReport {
    pub r: usize,
    /// Limit of alpha (Jacobi-Pineiro) or of the Laguerre ratio (one).
    pub limit: Scalar,
    pub rows: Vec<AsymptoticRow>,
    /// Whether the statistic approaches its limit monotonically along every
    /// residue class of `n` modulo `r + 1`.
    pub monotone: bool,
}

pub fn asymptotic_report(params: &ClosedFormParams, n_max: usize) -> Result<AsymptoticReport> {
    let r = params.r;
    let limit = if params.is_laguerre() {
        Scalar::one()
    } else {
        jp_limit(r)
    };
    let rows = (0..=n_max)
        .map(|n| {
            let (alpha, statistic) = if params.is_laguerre() {
                let alpha = laguerre_alpha(params, n)?;
                let stat = (n > 0).then(|| &alpha * int((r * (r + 1)) as i64) / int(n as i64));
                (alpha, stat)
            } else {
                let alpha = jp_alpha_bcf(params, n)?;
                let stat = (&alpha - &limit).abs();
                (alpha, Some(stat))
            };
            Ok(AsymptoticRow {
                n,
                alpha,
                statistic,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let distance = |row: &AsymptoticRow| {
        row.statistic.as_ref().map(|s| {
            if params.is_laguerre() {
                (s - &limit).abs()
            } else {
                s.clone()
            }
        })
    };
    let monotone = (0..=r).all(|res| {
        let d: Vec<Scalar> = rows
            .iter()
            .filter(|row| row.n % (r + 1) == res)
            .filter_map(distance)
            .collect();
        d.windows(2).all(|w| w[1] <= w[0])
    });
    Ok(AsymptoticReport {
        r,
        limit,
        rows,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, to_f64};
    use proptest::prelude::*;

    fn jp(a: &[(i64, i64)], b: (i64, i64)) -> ClosedFormParams {
        ClosedFormParams::jacobi_pineiro(
            a.iter().map(|&(p, q)| frac(p, q)).collect(),
            frac(b.0, b.1),
        )
    }

    #[test]
    fn decomposition() {
        let p = jp(&[(1, 2), (1, 3)], (1, 4));
        assert_eq!(p.decompose(0), (0, 0, 0));
        assert_eq!(p.decompose(2), (0, 0, 2));
        assert_eq!(p.decompose(3), (0, 1, 0));
        assert_eq!(p.decompose(6), (1, 0, 0));
        assert_eq!(p.decompose(17), (2, 1, 2));
        for n in 0..200 {
            let (m, k, i) = p.decompose(n);
            assert_eq!(3 * (2 * m + k) + i, n);
            assert!(k < 2 && i <= 2);
        }
    }

    #[test]
    fn extended_parameters() {
        let p = jp(&[(1, 2), (1, 3)], (1, 4));
        assert_eq!(p.a_star(0), int(-1));
        assert_eq!(p.a_star(1), frac(1, 2));
        assert_eq!(p.a_star(2), frac(1, 3));
        assert_eq!(p.a_star(3), frac(3, 2));
        assert_eq!(p.a_star(4), frac(4, 3));
        assert_eq!(p.a_prime(0), int(-1));
        assert_eq!(p.a_prime(2), frac(1, 3));
        assert_eq!(p.a_prime(3), int(0));
        assert_eq!(p.a_prime(4), frac(3, 2));
    }

    #[test]
    fn legendre_values() {
        let p = jp(&[(0, 1)], (0, 1));
        for m in 0..20i64 {
            assert_eq!(
                jp_alpha_bcf(&p, 2 * m as usize).unwrap(),
                frac(m + 1, 2 * (2 * m + 1))
            );
            assert_eq!(
                jp_alpha_bcf(&p, 2 * m as usize + 1).unwrap(),
                frac(m + 1, 2 * (2 * m + 3))
            );
        }
        assert_eq!(jp_alpha_type1(&p, 0).unwrap(), frac(1, 2));
        assert_eq!(jp_alpha_type1(&p, 1).unwrap(), frac(1, 6));
    }

    #[test]
    fn first_alpha() {
        let p = jp(&[(1, 2), (1, 3)], (1, 4));
        assert_eq!(jp_alpha_bcf(&p, 0).unwrap(), frac(6, 11));
        assert_eq!(jp_alpha_type1(&p, 0).unwrap(), frac(6, 11));
    }

    #[test]
    fn laguerre_values() {
        let p = ClosedFormParams::laguerre(vec![int(0)]);
        let v: Vec<Scalar> = (0..6).map(|n| laguerre_alpha(&p, n).unwrap()).collect();
        assert_eq!(v, [1, 1, 2, 2, 3, 3].map(int));
        let p = ClosedFormParams::laguerre(vec![frac(1, 2), frac(1, 3)]);
        let v: Vec<Scalar> = (0..4).map(|n| laguerre_alpha(&p, n).unwrap()).collect();
        assert_eq!(v, vec![frac(3, 2), frac(-1, 6), frac(7, 6), frac(4, 3)]);
        for r in 1..=4 {
            let a: Vec<Scalar> = (1..=r as i64).map(|j| frac(j, 5)).collect();
            let p = ClosedFormParams::laguerre(a.clone());
            assert_eq!(laguerre_alpha(&p, 0).unwrap(), &a[0] + int(1));
        }
    }

    #[test]
    fn degenerate_denominator() {
        // a_1 + b + 1 = 0 makes the first denominator factor vanish.
        let p = jp(&[(-1, 2)], (-1, 2));
        assert!(matches!(
            jp_alpha_bcf(&p, 0),
            Err(Error::DegenerateParameters(_))
        ));
        let l = ClosedFormParams::laguerre(vec![int(0)]);
        assert!(matches!(
            jp_alpha_bcf(&l, 0),
            Err(Error::DegenerateParameters(_))
        ));
    }

    #[test]
    fn closed_forms_need_builtin() {
        let spec = SystemSpec::custom(vec![vec![int(1), frac(1, 2)]]).unwrap();
        assert!(closed_form_alphas(&spec, 1).is_err());
    }

    #[test]
    fn asymptotic_limits() {
        assert_eq!(jp_limit(2), frac(4, 27));
        assert_eq!(jp_limit(1), frac(1, 4));
        let rep = asymptotic_report(&jp(&[(0, 1)], (0, 1)), 101).unwrap();
        let a100 = &rep.rows[100].alpha;
        let a101 = &rep.rows[101].alpha;
        assert!(*a100 > frac(1, 4) && *a101 < frac(1, 4));
        assert!(rep.monotone);
        let lag = asymptotic_report(&ClosedFormParams::laguerre(vec![int(0)]), 100).unwrap();
        assert!(lag.rows[0].statistic.is_none());
        assert!((to_f64(lag.rows[100].statistic.as_ref().unwrap()) - 1.0).abs() < 0.05);
    }

    // values in (-1, 6)
    fn arb_param() -> impl Strategy<Value = Scalar> {
        (1i64..70, 1i64..11).prop_map(|(p, q)| frac(p, q) - int(1))
    }

    proptest! {
        #[test]
        fn families_agree(
            r in 1usize..4,
            a in prop::collection::vec(arb_param(), 3),
            b in arb_param(),
            n in 0usize..60,
        ) {
            let p = ClosedFormParams::jacobi_pineiro(a[..r].to_vec(), b);
            match (jp_alpha_bcf(&p, n), jp_alpha_type1(&p, n)) {
                (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
                (Err(_), Err(_)) => {}
                (x, y) => prop_assert!(false, "one family degenerate: {:?} vs {:?}", x, y),
            }
        }

        #[test]
        fn ordered_parameters_give_positive_alphas(
            r in 1usize..4,
            a1 in arb_param(),
            gaps in prop::collection::vec(1i64..100, 3),
            b in arb_param(),
            n in 0usize..60,
        ) {
            // a_1 < a_2 < ... < a_r < a_1 + 1
            let a: Vec<Scalar> = (0..r)
                .map(|j| &a1 + frac(gaps[..j].iter().sum::<i64>(), 301))
                .collect();
            let p = ClosedFormParams::jacobi_pineiro(a, b);
            prop_assert!(jp_alpha_bcf(&p, n).unwrap().is_positive());
        }
    }
}

//! LLL reduction and Fincke–Pohst enumeration for small lattices under an arbitrary
//! positive definite quadratic form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{hnf_with_transform, IntMatrix, RatMatrix};
use crate::error::{Error, Result};

pub const LLL_DELTA: f64 = 0.75;

/// Positive definite form on the ambient coordinate space.
#[derive(Clone, Debug, PartialEq)]
pub enum QuadraticForm {
    Euclidean,
    Gram(Vec<Vec<f64>>),
}

impl QuadraticForm {
    fn eval(&self, u: &[f64], v: &[f64]) -> f64 {
        match self {
            QuadraticForm::Euclidean => u.iter().zip(v).map(|(a, b)| a * b).sum(),
            QuadraticForm::Gram(g) => {
                let mut s = 0.0;
                for (i, ui) in u.iter().enumerate() {
                    for (j, vj) in v.iter().enumerate() {
                        s += ui * g[i][j] * vj;
                    }
                }
                s
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReducedLattice {
    /// Reduced basis rows, `basis = transform · input`.
    pub basis: RatMatrix,
    pub transform: IntMatrix,
    /// Gram matrix of the reduced basis under the form.
    pub gram: Vec<Vec<f64>>,
}

/// Gram matrix of the rows of `basis` under `form`.
pub fn gram_matrix(basis: &RatMatrix, form: &QuadraticForm) -> Vec<Vec<f64>> {
    let rows = basis.to_f64_rows();
    let k = rows.len();
    let mut g = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let v = form.eval(&rows[i], &rows[j]);
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    g
}

fn transformed_gram(t: &[Vec<i128>], g0: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = t.len();
    let tf: Vec<Vec<f64>> = t.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    let mut tg = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..k {
            tg[i][j] = (0..k).map(|l| tf[i][l] * g0[l][j]).sum();
        }
    }
    let mut g = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..k {
            g[i][j] = (0..k).map(|l| tg[i][l] * tf[j][l]).sum();
        }
    }
    g
}

/// Gram–Schmidt coefficients and squared lengths from a Gram matrix.
fn gso(g: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let k = g.len();
    let mut mu = vec![vec![0.0; k]; k];
    let mut bstar = vec![0.0; k];
    let mut r = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..=i {
            let mut s = g[i][j];
            for l in 0..j {
                s -= mu[j][l] * r[i][l];
            }
            r[i][j] = s;
            if j < i {
                mu[i][j] = s / bstar[j];
            }
        }
        bstar[i] = r[i][i];
        mu[i][i] = 1.0;
    }
    (mu, bstar)
}

fn lll_transform(g0: &[Vec<f64>]) -> Vec<Vec<i128>> {
    let k = g0.len();
    let mut t: Vec<Vec<i128>> = (0..k).map(|i| (0..k).map(|j| i128::from(i == j)).collect()).collect();
    if k < 2 {
        return t;
    }
    let mut idx = 1;
    let mut guard = 0usize;
    while idx < k && guard < 100_000 {
        guard += 1;
        let (mut mu, _) = gso(&transformed_gram(&t, g0));
        for j in (0..idx).rev() {
            let q = mu[idx][j].round();
            if q != 0.0 {
                let qi = q as i128;
                for c in 0..k {
                    t[idx][c] -= qi * t[j][c];
                }
                for l in 0..j {
                    mu[idx][l] -= q * mu[j][l];
                }
                mu[idx][j] -= q;
            }
        }
        let (mu, bstar) = gso(&transformed_gram(&t, g0));
        let m = mu[idx][idx - 1];
        if bstar[idx] >= (LLL_DELTA - m * m) * bstar[idx - 1] {
            idx += 1;
        } else {
            t.swap(idx, idx - 1);
            idx = (idx - 1).max(1);
        }
    }
    t
}

/// LLL-reduces the rows of `basis` (δ = 0.75). For rank ≤ 4 the first row is
/// additionally replaced by an exhaustively certified shortest vector.
pub fn lattice_reduce(basis: &RatMatrix, form: &QuadraticForm) -> Result<ReducedLattice> {
    let k = basis.rows();
    if basis.rank() != k {
        return Err(Error::Rank(format!("{k} basis rows are linearly dependent")));
    }
    let g0 = gram_matrix(basis, form);
    let t = lll_transform(&g0);
    let mut tm = IntMatrix::new(k, k, t.iter().flatten().map(|&x| BigInt::from(x)).collect())?;
    if (1..=4).contains(&k) {
        let g = transformed_gram(&t, &g0);
        let best = short_vectors(&g, g[0][0], 100_000)?.into_iter().min_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((x, norm)) = best {
            if norm < g[0][0] * (1.0 - 1e-12) {
                let xb: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
                let w = complete_to_unimodular(&xb)?;
                tm = &w * &tm;
            }
        }
    }
    let reduced = &RatMatrix::from(&tm) * basis;
    let gram = gram_matrix(&reduced, form);
    Ok(ReducedLattice { basis: reduced, transform: tm, gram })
}

/// Unimodular matrix whose first row is the primitive vector `x`.
pub fn complete_to_unimodular(x: &[BigInt]) -> Result<IntMatrix> {
    let col = IntMatrix::new(x.len(), 1, x.to_vec())?;
    let (h, u) = hnf_with_transform(&col);
    if h.get(0, 0) != &BigInt::from(1) {
        return Err(Error::Domain("vector is not primitive".into()));
    }
    Ok(u.inverse_unimodular()?.transpose())
}

/// All nonzero integer vectors `x` with `x·G·xᵀ ≤ bound`, one per ± pair (first nonzero
/// coordinate positive), with their norms. Fails once more than `limit` vectors are found.
pub fn short_vectors(gram: &[Vec<f64>], bound: f64, limit: usize) -> Result<Vec<(Vec<i64>, f64)>> {
    let n = gram.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    // q[i][i] diagonal, q[i][j] (j > i) the completed-square coefficients
    let mut q: Vec<Vec<f64>> = gram.to_vec();
    for i in 0..n {
        if q[i][i] <= 0.0 {
            return Err(Error::Numeric("quadratic form is not positive definite".into()));
        }
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let slack = bound.abs() * 1e-9 + 1e-9;
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    enumerate(&q, n - 1, bound + slack, &mut x, &mut out, limit)?;
    out.retain(|(v, _)| v.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0));
    for (v, norm) in out.iter_mut() {
        *norm = quad(gram, v);
    }
    Ok(out)
}

fn quad(g: &[Vec<f64>], v: &[i64]) -> f64 {
    let mut s = 0.0;
    for i in 0..v.len() {
        for j in 0..v.len() {
            s += v[i] as f64 * g[i][j] * v[j] as f64;
        }
    }
    s
}

fn enumerate(
    q: &[Vec<f64>],
    i: usize,
    remaining: f64,
    x: &mut Vec<i64>,
    out: &mut Vec<(Vec<i64>, f64)>,
    limit: usize,
) -> Result<()> {
    let n = q.len();
    let c: f64 = (i + 1..n).map(|j| q[i][j] * x[j] as f64).sum();
    let r = (remaining.max(0.0) / q[i][i]).sqrt();
    let lo = (-c - r).ceil() as i64;
    let hi = (-c + r).floor() as i64;
    for xi in lo..=hi {
        x[i] = xi;
        let t = xi as f64 + c;
        let rest = remaining - q[i][i] * t * t;
        if rest < 0.0 {
            continue;
        }
        if i == 0 {
            if x.iter().any(|&v| v != 0) {
                out.push((x.clone(), 0.0));
                if out.len() > 2 * limit {
                    return Err(Error::Numeric(format!("more than {limit} short vectors")));
                }
            }
        } else {
            enumerate(q, i - 1, rest, x, out, limit)?;
        }
    }
    x[i] = 0;
    Ok(())
}

/// Squared length of a rational vector under the form.
pub fn form_norm(v: &[BigRational], form: &QuadraticForm) -> f64 {
    let f: Vec<f64> = v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
    form.eval(&f, &f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_basis_is_kept_up_to_sign() {
        let b = RatMatrix::from_fracs(&[&[(1, 1), (0, 1)], &[(0, 1), (2, 1)]]);
        let r = lattice_reduce(&b, &QuadraticForm::Euclidean).unwrap();
        for i in 0..2 {
            let row = r.basis.row(i).to_vec();
            let orig = b.row(i).to_vec();
            let neg: Vec<BigRational> = orig.iter().map(|x| -x).collect();
            assert!(row == orig || row == neg);
        }
    }

    #[test]
    fn skewed_basis_finds_unit_vector() {
        let b = RatMatrix::from_fracs(&[&[(1, 1), (0, 1)], &[(100, 1), (1, 1)]]);
        let r = lattice_reduce(&b, &QuadraticForm::Euclidean).unwrap();
        assert!((form_norm(r.basis.row(0), &QuadraticForm::Euclidean) - 1.0).abs() < 1e-12);
        assert!(r.transform.det().unwrap() == BigInt::from(1) || r.transform.det().unwrap() == BigInt::from(-1));
    }

    #[test]
    fn dependent_rows_are_rejected() {
        let b = RatMatrix::from_fracs(&[&[(1, 1), (2, 1)], &[(2, 1), (4, 1)]]);
        assert!(matches!(lattice_reduce(&b, &QuadraticForm::Euclidean), Err(Error::Rank(_))));
    }

    #[test]
    fn enumeration_counts_small_balls() {
        let g = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        // (1,0), (0,1), (1,1), (1,-1) up to sign
        assert_eq!(short_vectors(&g, 2.0, 100).unwrap().len(), 4);
        assert!(short_vectors(&g, 0.5, 100).unwrap().is_empty());
    }

    #[test]
    fn unimodular_completion() {
        let x: Vec<BigInt> = [3, 5, 7].iter().map(|&v| BigInt::from(v)).collect();
        let w = complete_to_unimodular(&x).unwrap();
        assert_eq!(w.row(0), &x[..]);
        assert!(w.det().unwrap() == BigInt::from(1) || w.det().unwrap() == BigInt::from(-1));
    }
}

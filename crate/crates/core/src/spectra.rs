//! Eigenvalues of integer matrices with exact ergodicity and hyperbolicity certificates.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::poly::{count_real_roots, cyclotomic, euler_phi, factor_q, squarefree_decomposition, IntPoly};

pub const ROOT_ITERATION_CAP: usize = 10_000;
pub const ROOT_RESIDUAL: f64 = 1e-12;
pub const HYPERBOLIC_TOLERANCE: f64 = 1e-9;

/// Roots with multiplicity, sorted by real part and then imaginary part.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    /// Largest relative backward error `|p(z)| / Σ|c_i||z|^i` over the roots.
    pub residual: f64,
}

impl Spectrum {
    pub fn log_moduli(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.norm().ln()).collect()
    }
}

fn backward_error(c: &[f64], z: Complex64) -> f64 {
    let mut p = Complex64::new(0.0, 0.0);
    let mut s = 0.0;
    let az = z.norm();
    for a in c.iter().rev() {
        p = p * z + a;
        s = s * az + a.abs();
    }
    if s == 0.0 {
        0.0
    } else {
        p.norm() / s
    }
}

fn horner_with_derivative(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Aberth–Ehrlich iteration from a deterministic start on the circle of radius
/// `1 + max|c_i / c_n|`. Intended for squarefree input; returns the roots and the
/// largest backward error.
pub fn aberth_roots(p: &IntPoly) -> Result<(Vec<Complex64>, f64)> {
    let n = p.degree();
    if p.is_zero() {
        return Err(Error::Domain("roots of the zero polynomial".into()));
    }
    if n == 0 {
        return Ok((Vec::new(), 0.0));
    }
    let lc = p.leading().to_f64().unwrap_or(f64::NAN);
    let c: Vec<f64> = p.to_f64().iter().map(|x| x / lc).collect();
    if c.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numeric(format!("coefficients of {p} overflow f64")));
    }
    if n == 1 {
        return Ok((vec![Complex64::new(-c[0], 0.0)], 0.0));
    }
    let radius = 1.0 + c[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4)).collect();
    let mut converged = false;
    for _ in 0..ROOT_ITERATION_CAP {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let (pv, dp) = horner_with_derivative(&c, z[k]);
            if pv.norm() == 0.0 {
                continue;
            }
            let w = pv / dp;
            let s: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = w / (Complex64::new(1.0, 0.0) - w * s);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }
    let residual = z.iter().map(|&r| backward_error(&c, r)).fold(0.0, f64::max);
    if !converged && residual > ROOT_RESIDUAL {
        return Err(Error::Numeric(format!(
            "root iteration for {p} did not converge after {ROOT_ITERATION_CAP} steps (residual {residual:.3e})"
        )));
    }
    // snap the exactly counted real roots onto the real axis and polish them
    let real = count_real_roots(p);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| z[a].im.abs().total_cmp(&z[b].im.abs()));
    for &k in order.iter().take(real) {
        let mut x = z[k].re;
        for _ in 0..8 {
            let (pv, dp) = horner_with_derivative(&c, Complex64::new(x, 0.0));
            if dp.re == 0.0 {
                break;
            }
            let nx = x - pv.re / dp.re;
            if !nx.is_finite() {
                break;
            }
            x = nx;
        }
        z[k] = Complex64::new(x, 0.0);
    }
    let residual = z.iter().map(|&r| backward_error(&c, r)).fold(0.0, f64::max);
    if residual > ROOT_RESIDUAL {
        return Err(Error::Numeric(format!("roots of {p} have backward error {residual:.3e}")));
    }
    sort_roots(&mut z);
    Ok((z, residual))
}

fn sort_roots(z: &mut [Complex64]) {
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// All complex roots with multiplicity.
pub fn roots(p: &IntPoly) -> Result<Spectrum> {
    if p.degree() == 0 {
        return Err(Error::Domain("roots of a constant polynomial".into()));
    }
    let mut eigenvalues = Vec::with_capacity(p.degree());
    let mut residual = 0.0f64;
    for (s, m) in squarefree_decomposition(p) {
        let (r, res) = aberth_roots(&s)?;
        residual = residual.max(res);
        for z in r {
            eigenvalues.extend(std::iter::repeat_n(z, m));
        }
    }
    sort_roots(&mut eigenvalues);
    Ok(Spectrum { eigenvalues, residual })
}

pub fn eigenvalues(m: &IntMatrix) -> Result<Spectrum> {
    roots(&m.charpoly()?)
}

/// Outcome of the exact cyclotomic screen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErgodicityCertificate {
    pub ergodic: bool,
    /// An index `k` with `Φ_k` dividing the characteristic polynomial, when not ergodic.
    pub cyclotomic_index: Option<usize>,
    /// Number of cyclotomic polynomials `Φ_k` with `φ(k) ≤ n` that were tested.
    pub tested: usize,
}

/// Indices `k` with `φ(k) ≤ n`.
pub fn cyclotomic_indices(n: usize) -> Vec<usize> {
    // φ(k) ≥ sqrt(k/2), so k ≤ 2n² covers every candidate
    (1..=2 * n * n + 2).filter(|&k| euler_phi(k as u64) as usize <= n).collect()
}

/// Exact ergodicity test for a polynomial: no cyclotomic factor.
pub fn polynomial_is_ergodic(f: &IntPoly) -> ErgodicityCertificate {
    let n = f.degree();
    let ks = cyclotomic_indices(n);
    let frat = f.to_rat();
    for &k in &ks {
        let phi = cyclotomic(k);
        if frat.rem(&phi.to_rat()).expect("nonzero").is_zero() {
            return ErgodicityCertificate { ergodic: false, cyclotomic_index: Some(k), tested: ks.len() };
        }
    }
    ErgodicityCertificate { ergodic: true, cyclotomic_index: None, tested: ks.len() }
}

pub fn is_ergodic(m: &IntMatrix) -> Result<ErgodicityCertificate> {
    if m.det()?.is_zero() {
        return Err(Error::Domain("ergodicity is defined for invertible matrices".into()));
    }
    Ok(polynomial_is_ergodic(&m.charpoly()?))
}

/// No eigenvalue within `τ` of the unit circle. Non-reciprocal irreducible factors are
/// cleared exactly; linear factors are decided by `p(±1)`; the rest numerically.
pub fn is_hyperbolic(m: &IntMatrix) -> bool {
    let Ok(f) = m.charpoly() else { return false };
    polynomial_is_hyperbolic(&f)
}

pub fn polynomial_is_hyperbolic(f: &IntPoly) -> bool {
    let numeric = |g: &IntPoly| match roots(g) {
        Ok(s) => s.eigenvalues.iter().all(|z| (z.norm() - 1.0).abs() > HYPERBOLIC_TOLERANCE),
        Err(_) => false,
    };
    match factor_q(f) {
        Ok(factors) => factors.iter().all(|(g, _)| {
            if g.degree() == 1 {
                // the root of a + b x lies on the unit circle iff |a| = |b|
                g.coeff(0).magnitude() != g.leading().magnitude()
            } else if !g.is_reciprocal() {
                true
            } else {
                numeric(g)
            }
        }),
        Err(_) => numeric(f),
    }
}

/// Exact test that every root is real (Sturm counts on the squarefree factors).
pub fn all_roots_real(f: &IntPoly) -> bool {
    squarefree_decomposition(f).iter().all(|(s, _)| count_real_roots(s) == s.degree())
}

/// Topological entropy `Σ_{|λ|>1} log|λ|`.
pub fn entropy(m: &IntMatrix) -> Result<f64> {
    let s = eigenvalues(m)?;
    Ok(s.log_moduli().into_iter().filter(|&l| l > 1e-12).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn root_examples() {
        let s = roots(&IntPoly::from_i64(&[-1, 0, 1])).unwrap();
        assert_eq!(s.eigenvalues, vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)]);
        let s = roots(&IntPoly::from_i64(&[-1, -1, 1])).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(close(s.eigenvalues[0].re, 1.0 - phi, 1e-12));
        assert!(close(s.eigenvalues[1].re, phi, 1e-12));
        assert!(s.residual < ROOT_RESIDUAL);
    }

    #[test]
    fn repeated_and_complex_roots() {
        let p = &IntPoly::from_i64(&[1, 0, 1]) * &IntPoly::from_i64(&[-2, 1]);
        let p = &p * &IntPoly::from_i64(&[-2, 1]);
        let s = roots(&p).unwrap();
        assert_eq!(s.eigenvalues.len(), 4);
        assert_eq!(s.eigenvalues.iter().filter(|z| z.im == 0.0 && close(z.re, 2.0, 1e-12)).count(), 2);
    }

    #[test]
    fn ergodicity_examples() {
        let rot = IntMatrix::from_i64(&[&[0, 1], &[-1, 0]]);
        let c = is_ergodic(&rot).unwrap();
        assert!(!c.ergodic);
        assert_eq!(c.cyclotomic_index, Some(4));
        assert!(is_ergodic(&IntMatrix::from_i64(&[&[2, 1], &[1, 1]])).unwrap().ergodic);
        assert!(is_ergodic(&IntMatrix::from_i64(&[&[1, 0], &[0, 0]])).is_err());
    }

    #[test]
    fn hyperbolicity_examples() {
        assert!(!is_hyperbolic(&IntMatrix::identity(3)));
        assert!(is_hyperbolic(&IntMatrix::from_i64(&[&[2, 1], &[1, 1]])));
        assert!(!is_hyperbolic(&IntMatrix::from_i64(&[&[0, 1], &[-1, 0]])));
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&IntMatrix::identity(3)).unwrap(), 0.0);
        let h = entropy(&IntMatrix::from_i64(&[&[2, 1], &[1, 1]])).unwrap();
        assert!(close(h, ((3.0 + 5f64.sqrt()) / 2.0).ln(), 1e-12));
        assert!(close(h, 0.9624236501, 1e-10));
    }
}

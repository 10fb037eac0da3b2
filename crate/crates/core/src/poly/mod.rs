//! Univariate polynomials over Z and Q with ascending coefficient order.

mod factor;
mod modp;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, RatMatrix};

pub use factor::{
    count_real_roots, factor_q, is_irreducible_q, squarefree_decomposition, Irreducibility, IrreducibilityCertificate,
};
pub use modp::irreducible_mod_p;

/// Integer polynomial, `coeffs[i]` is the coefficient of `x^i`; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

/// Rational polynomial, same conventions as [`IntPoly`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `x^k - 1`
    pub fn x_pow_minus_one(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[0] = BigInt::from(-1);
        c[k] = BigInt::one();
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |a, c| a.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    /// `x^n p(1/x)`.
    pub fn reversal(&self) -> IntPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPoly::new(c)
    }

    /// True when `p` equals `±` its reversal, the shape of polynomials whose roots are closed under inversion.
    pub fn is_reciprocal(&self) -> bool {
        let r = self.reversal();
        self.coeffs.first().is_some_and(|c| !c.is_zero()) && (r == *self || r == -self)
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Exact quotient, `None` if `d` does not divide `self` over Z.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let (q, r) = self.to_rat().divrem(&d.to_rat()).ok()?;
        if !r.is_zero() {
            return None;
        }
        q.to_int()
    }

    /// Horner evaluation at an integer matrix.
    pub fn eval_matrix(&self, m: &IntMatrix) -> Result<IntMatrix> {
        if !m.is_square() {
            return Err(Error::Shape("polynomial evaluated at non-square matrix".into()));
        }
        let n = m.rows();
        let mut acc = IntMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * m) + &IntMatrix::scalar(n, c.clone());
        }
        Ok(acc)
    }
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_fracs(c: &[(i64, i64)]) -> Self {
        Self::new(c.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect())
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RatPoly { coeffs: vec![BigRational::one()] }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn monic(&self) -> RatPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading();
        RatPoly::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn scale(&self, s: &BigRational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn divrem(&self, d: &RatPoly) -> Result<(RatPoly, RatPoly)> {
        if d.is_zero() {
            return Err(Error::Domain("division by the zero polynomial".into()));
        }
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        if self.is_zero() || self.degree() < dd {
            return Ok((RatPoly::zero(), self.clone()));
        }
        let lead = d.leading();
        let mut q = vec![BigRational::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[k + j] -= &c * dj;
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((RatPoly::new(q), RatPoly::new(r)))
    }

    pub fn rem(&self, d: &RatPoly) -> Result<RatPoly> {
        Ok(self.divrem(d)?.1)
    }

    /// Monic gcd over Q; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·other = g`, `g` the monic gcd.
    pub fn ext_gcd(&self, other: &RatPoly) -> (RatPoly, RatPoly, RatPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (RatPoly::one(), RatPoly::zero());
        let (mut t0, mut t1) = (RatPoly::zero(), RatPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.leading().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn to_int(&self) -> Option<IntPoly> {
        self.is_integral().then(|| IntPoly::new(self.coeffs.iter().map(|c| c.to_integer()).collect()))
    }

    /// Clears denominators and returns the primitive integer multiple with positive leading coefficient.
    pub fn primitive_int(&self) -> IntPoly {
        let den = self.coeffs.iter().fold(BigInt::one(), |a, c| a.lcm(c.denom()));
        let scaled = self.scale(&BigRational::from_integer(den));
        scaled.to_int().expect("denominators cleared").primitive_part()
    }
}

impl<'a> Add<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &'a IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &'a IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &'a IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPoly::new(c)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl<'a> Add<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &'a RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &'a RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &'a RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut c = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        RatPoly::new(c)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

fn write_terms<T: fmt::Display + Signed + PartialEq>(f: &mut fmt::Formatter<'_>, coeffs: &[T]) -> fmt::Result {
    if coeffs.iter().all(Zero::is_zero) {
        return write!(f, "0");
    }
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if neg { " - " } else { " + " })?;
        }
        first = false;
        let unit = a.is_one();
        match i {
            0 => write!(f, "{a}")?,
            _ => {
                if !unit {
                    write!(f, "{a}")?;
                }
                if i == 1 {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{i}")?;
                }
            }
        }
    }
    Ok(())
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs)
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs)
    }
}

/// Euler's totient.
pub fn euler_phi(mut k: u64) -> u64 {
    let mut result = k;
    let mut p = 2;
    while p * p <= k {
        if k.is_multiple_of(p) {
            while k.is_multiple_of(p) {
                k /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if k > 1 {
        result -= result / k;
    }
    result
}

/// The k-th cyclotomic polynomial, by dividing `x^k − 1` by `Φ_d` for the proper divisors `d`.
pub fn cyclotomic(k: usize) -> IntPoly {
    assert!(k >= 1, "cyclotomic index must be positive");
    let mut p = IntPoly::x_pow_minus_one(k);
    for d in 1..k {
        if k.is_multiple_of(d) {
            p = p.div_exact(&cyclotomic(d)).expect("cyclotomic factors divide x^k - 1");
        }
    }
    p
}

/// Companion matrix with the negated coefficients in the last row, so that
/// `e_i · C = e_{i+1}` under the row-vector convention.
pub fn companion(p: &IntPoly) -> Result<IntMatrix> {
    if p.degree() == 0 {
        return Err(Error::Domain("companion matrix needs degree at least 1".into()));
    }
    if !p.is_monic() {
        return Err(Error::Domain(format!("{p} is not monic")));
    }
    let n = p.degree();
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n - 1 {
        m.set(i, i + 1, BigInt::one());
    }
    for j in 0..n {
        m.set(n - 1, j, -p.coeff(j));
    }
    Ok(m)
}

/// Exact `p(m)` for a rational polynomial.
pub fn eval_poly_at_matrix(p: &RatPoly, m: &IntMatrix) -> Result<RatMatrix> {
    if !m.is_square() {
        return Err(Error::Shape("polynomial evaluated at non-square matrix".into()));
    }
    let n = m.rows();
    let mr = RatMatrix::from(m);
    let mut acc = RatMatrix::zeros(n, n);
    for c in p.coeffs().iter().rev() {
        acc = &acc * &mr;
        for i in 0..n {
            let v = acc.get(i, i) + c;
            acc.set(i, i, v);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a = IntPoly::from_i64(&[-1, 0, 1]);
        let b = IntPoly::from_i64(&[-1, 1]);
        assert_eq!(a.to_rat().gcd(&b.to_rat()), b.to_rat());
        assert_eq!(&IntPoly::from_i64(&[1, 1]) * &b, a);
        let f = IntPoly::from_i64(&[1, -6, 3, 1]);
        let r = f.to_rat().rem(&b.to_rat()).unwrap();
        // f(1) by direct evaluation
        assert_eq!(r, RatPoly::constant(BigRational::from_integer(f.eval(&BigInt::one()))));
        assert_eq!(r, RatPoly::from_fracs(&[(-1, 1)]));
        assert!(f.to_rat().divrem(&RatPoly::zero()).is_err());
    }

    #[test]
    fn ext_gcd_identity() {
        let f = IntPoly::from_i64(&[1, -6, 3, 1]).to_rat();
        let a = RatPoly::from_fracs(&[(2, 1), (-4, 1), (-1, 1)]);
        let (g, s, t) = a.ext_gcd(&f);
        assert_eq!(g, RatPoly::one());
        assert_eq!(&(&s * &a) + &(&t * &f), RatPoly::one());
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(4), IntPoly::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic(12), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
        assert_eq!(euler_phi(12), 4);
    }

    #[test]
    fn companion_examples() {
        assert_eq!(companion(&IntPoly::from_i64(&[-1, -1, 1])).unwrap(), IntMatrix::from_i64(&[&[0, 1], &[1, 1]]));
        assert_eq!(
            companion(&IntPoly::from_i64(&[1, -6, 3, 1])).unwrap(),
            IntMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[-1, 6, -3]])
        );
        assert_eq!(
            companion(&IntPoly::from_i64(&[-1, 11, -7, 1])).unwrap(),
            IntMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[1, -11, 7]])
        );
        assert!(companion(&IntPoly::from_i64(&[1, 2])).is_err());
    }

    #[test]
    fn matrix_evaluation() {
        let a = IntMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[-1, 6, -3]]);
        let p = RatPoly::from_fracs(&[(2, 1), (-4, 1), (-1, 1)]);
        let b = IntMatrix::from_i64(&[&[2, -4, -1], &[1, -4, -1], &[1, -5, -1]]);
        assert_eq!(eval_poly_at_matrix(&p, &a).unwrap(), RatMatrix::from(&b));
        assert_eq!(eval_poly_at_matrix(&RatPoly::x(), &a).unwrap(), RatMatrix::from(&a));
        let f = a.charpoly().unwrap();
        assert!(eval_poly_at_matrix(&f.to_rat(), &a).unwrap().is_zero());
    }

    #[test]
    fn display() {
        assert_eq!(IntPoly::from_i64(&[1, -6, 3, 1]).to_string(), "x^3 + 3x^2 - 6x + 1");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }
}

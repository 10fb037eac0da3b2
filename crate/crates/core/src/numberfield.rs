//! Arithmetic in `K = Q[x]/(f)`, full-rank lattices in `K`, and the actions obtained by
//! letting units act on a lattice by multiplication.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::action::ZdAction;
use crate::error::{Error, Result};
use crate::linalg::{hnf_basis, lattice_intersection, IntMatrix, RatMatrix};
use crate::numeric::numeric_rank;
use crate::poly::{count_real_roots, is_irreducible_q, IntPoly, RatPoly};
use crate::spectra::aberth_roots;

pub const INDEPENDENCE_TOLERANCE: f64 = 1e-8;
const RELATION_SEARCH_BOUND: i64 = 20;

/// `K = Q(λ)` with `λ` a root of the monic irreducible `f`.
#[derive(Debug, PartialEq)]
pub struct NumberField {
    f: IntPoly,
    /// Numeric embeddings `φ_k(λ)`, sorted by real part and then imaginary part.
    roots: Vec<Complex64>,
    signature: (usize, usize),
}

pub type Field = Arc<NumberField>;

impl NumberField {
    pub fn new(f: IntPoly) -> Result<Field> {
        if f.degree() == 0 {
            return Err(Error::Domain("field polynomial must have positive degree".into()));
        }
        if !f.is_monic() {
            return Err(Error::Domain(format!("field polynomial {f} is not monic")));
        }
        if !is_irreducible_q(&f)?.is_irreducible() {
            return Err(Error::Domain(format!("{f} is reducible over Q")));
        }
        let (roots, _) = aberth_roots(&f)?;
        let r1 = count_real_roots(&f);
        let signature = (r1, (f.degree() - r1) / 2);
        Ok(Arc::new(NumberField { f, roots, signature }))
    }

    pub fn degree(&self) -> usize {
        self.f.degree()
    }

    pub fn polynomial(&self) -> &IntPoly {
        &self.f
    }

    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn unit_rank(&self) -> usize {
        self.signature.0 + self.signature.1 - 1
    }

    pub fn embeddings(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn is_totally_real(&self) -> bool {
        self.signature.1 == 0
    }

    /// Indices of one embedding per archimedean place: the real ones, then one of each
    /// complex-conjugate pair (the one with positive imaginary part).
    pub fn places(&self) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.roots.len()).filter(|&k| self.roots[k].im == 0.0).collect();
        out.extend((0..self.roots.len()).filter(|&k| self.roots[k].im > 0.0));
        out
    }

    /// Gram matrix of the form `Σ_k w_k |φ_k(x)|²` on power-basis coordinates.
    pub fn weighted_t2_gram(&self, weights: &[f64]) -> Vec<Vec<f64>> {
        let n = self.degree();
        let powers: Vec<Vec<Complex64>> =
            self.roots.iter().map(|r| (0..n).map(|i| r.powu(i as u32)).collect()).collect();
        let mut g = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                g[i][j] = powers.iter().zip(weights).map(|(p, w)| w * (p[i] * p[j].conj()).re).sum();
            }
        }
        g
    }

    /// Minkowski form `T2(x) = Σ_k |φ_k(x)|²` on power-basis coordinates.
    pub fn t2_gram(&self) -> Vec<Vec<f64>> {
        self.weighted_t2_gram(&vec![1.0; self.degree()])
    }
}

/// Element of `K` in the power basis `1, λ, …, λ^{n−1}`.
#[derive(Clone, Debug)]
pub struct NFElement {
    field: Field,
    coeffs: Vec<BigRational>,
}

impl PartialEq for NFElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field.f == other.field.f
    }
}

impl Eq for NFElement {}

impl NFElement {
    /// Reduces an arbitrary rational polynomial in `λ` modulo `f`.
    pub fn from_poly(field: &Field, p: &RatPoly) -> Self {
        let r = p.rem(&field.f.to_rat()).expect("field polynomial is nonzero");
        let n = field.degree();
        NFElement { field: field.clone(), coeffs: (0..n).map(|i| r.coeff(i)).collect() }
    }

    pub fn from_coeffs(field: &Field, coeffs: Vec<BigRational>) -> Self {
        Self::from_poly(field, &RatPoly::new(coeffs))
    }

    pub fn from_fracs(field: &Field, c: &[(i64, i64)]) -> Self {
        Self::from_poly(field, &RatPoly::from_fracs(c))
    }

    pub fn from_ints(field: &Field, c: &[i64]) -> Self {
        Self::from_poly(field, &IntPoly::from_i64(c).to_rat())
    }

    pub fn from_integer(field: &Field, c: BigInt) -> Self {
        Self::from_poly(field, &RatPoly::constant(BigRational::from_integer(c)))
    }

    pub fn zero(field: &Field) -> Self {
        Self::from_poly(field, &RatPoly::zero())
    }

    pub fn one(field: &Field) -> Self {
        Self::from_poly(field, &RatPoly::one())
    }

    /// The generator `λ`.
    pub fn generator(field: &Field) -> Self {
        Self::from_poly(field, &RatPoly::x())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn to_poly(&self) -> RatPoly {
        RatPoly::new(self.coeffs.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        *self == NFElement::one(&self.field)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        NFElement { field: self.field.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        let (g, s, _) = self.to_poly().ext_gcd(&self.field.f.to_rat());
        debug_assert!(g.degree() == 0);
        Ok(Self::from_poly(&self.field, &s))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = NFElement::one(&self.field);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Multiplication by `self` in the power basis, row `i` = coordinates of `self·λ^i`.
    pub fn power_basis_matrix(&self) -> RatMatrix {
        let n = self.field.degree();
        let mut rows = Vec::with_capacity(n);
        let mut cur = self.clone();
        let lam = NFElement::generator(&self.field);
        for _ in 0..n {
            rows.push(cur.coeffs.clone());
            cur = &cur * &lam;
        }
        RatMatrix::from_rows(&rows).expect("square")
    }

    pub fn norm(&self) -> BigRational {
        self.power_basis_matrix().det().expect("square")
    }

    pub fn trace(&self) -> BigRational {
        let m = self.power_basis_matrix();
        (0..m.rows()).fold(BigRational::zero(), |acc, i| acc + m.get(i, i))
    }

    /// Characteristic polynomial of multiplication by `self`, ascending, monic.
    pub fn charpoly(&self) -> RatPoly {
        let m = self.power_basis_matrix();
        let d = m.common_denominator();
        let scaled = m.scale(&BigRational::from_integer(d.clone())).to_int().expect("cleared");
        // det(xI − M) = det(x·dI − dM) / d^n
        let p = scaled.charpoly().expect("square");
        let n = m.rows();
        let coeffs: Vec<BigRational> =
            (0..=n).map(|i| BigRational::new(p.coeff(i) * d.pow(i as u32), d.pow(n as u32))).collect();
        RatPoly::new(coeffs)
    }

    pub fn is_algebraic_integer(&self) -> bool {
        self.charpoly().is_integral()
    }

    /// `φ_k(self)` for every embedding.
    pub fn embeddings(&self) -> Vec<Complex64> {
        self.field.roots.iter().map(|&r| self.to_poly().eval_complex(r)).collect()
    }

    /// `log|φ_k(x)|` over the archimedean places, doubled at complex places.
    pub fn log_embedding(&self) -> Vec<f64> {
        let e = self.embeddings();
        self.field
            .places()
            .into_iter()
            .map(|k| {
                let w = if self.field.roots[k].im == 0.0 { 1.0 } else { 2.0 };
                w * e[k].norm().ln()
            })
            .collect()
    }

    /// Image under a permutation of the roots: `x(φ_π(k)(λ))` for each `k`.
    pub fn permuted_embeddings(&self, perm: &[usize]) -> Vec<Complex64> {
        let e = self.embeddings();
        perm.iter().map(|&k| e[k]).collect()
    }
}

impl<'a> Add<&'a NFElement> for &'a NFElement {
    type Output = NFElement;
    fn add(self, rhs: &'a NFElement) -> NFElement {
        NFElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a NFElement> for &'a NFElement {
    type Output = NFElement;
    fn sub(self, rhs: &'a NFElement) -> NFElement {
        NFElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a NFElement> for &'a NFElement {
    type Output = NFElement;
    fn mul(self, rhs: &'a NFElement) -> NFElement {
        NFElement::from_poly(&self.field, &(&self.to_poly() * &rhs.to_poly()))
    }
}

impl Neg for &NFElement {
    type Output = NFElement;
    fn neg(self) -> NFElement {
        NFElement { field: self.field.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl fmt::Display for NFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.to_poly().to_string();
        write!(f, "{}", s.replace('x', "λ"))
    }
}

fn scale_to_integer(m: &RatMatrix) -> (BigInt, IntMatrix) {
    let d = m.common_denominator();
    let im = m.scale(&BigRational::from_integer(d.clone())).to_int().expect("denominators cleared");
    (d, im)
}

fn unscale(m: &IntMatrix, d: &BigInt) -> RatMatrix {
    RatMatrix::from(m).scale(&BigRational::new(BigInt::one(), d.clone()))
}

/// Canonical (HNF) basis of the Z-span of rational row vectors.
pub fn rational_lattice_hnf(rows: &RatMatrix) -> RatMatrix {
    let (d, im) = scale_to_integer(rows);
    unscale(&hnf_basis(&im), &d)
}

/// Z-basis of `{x ∈ K : x·L ⊆ J}`-style intersections of rational lattices.
pub fn rational_lattice_intersection(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let d = a.common_denominator().lcm(&b.common_denominator());
    let s = BigRational::from_integer(d.clone());
    let ia = a.scale(&s).to_int().expect("cleared");
    let ib = b.scale(&s).to_int().expect("cleared");
    unscale(&lattice_intersection(&ia, &ib), &d)
}

/// Full-rank lattice in `K`; rows of `coords` are power-basis coordinates of the basis elements.
#[derive(Clone, Debug)]
pub struct LatticeBasis {
    field: Field,
    coords: RatMatrix,
    inverse: RatMatrix,
}

impl PartialEq for LatticeBasis {
    /// Same lattice, not necessarily the same basis.
    fn eq(&self, other: &Self) -> bool {
        self.field.f == other.field.f && self.canonical() == other.canonical()
    }
}

impl LatticeBasis {
    pub fn new(field: &Field, coords: RatMatrix) -> Result<Self> {
        let n = field.degree();
        if coords.rows() != n || coords.cols() != n {
            return Err(Error::Shape(format!("a lattice basis in a degree-{n} field needs {n} elements")));
        }
        let inverse =
            coords.inverse().map_err(|_| Error::Domain("lattice basis elements are linearly dependent".into()))?;
        Ok(LatticeBasis { field: field.clone(), coords, inverse })
    }

    pub fn from_elements(field: &Field, elements: &[NFElement]) -> Result<Self> {
        let rows: Vec<Vec<BigRational>> = elements.iter().map(|e| e.coeffs.clone()).collect();
        Self::new(field, RatMatrix::from_rows(&rows)?)
    }

    /// Lattice spanned by arbitrary generators (at least `n` of them, full rank).
    pub fn from_generators(field: &Field, gens: &[NFElement]) -> Result<Self> {
        let rows: Vec<Vec<BigRational>> = gens.iter().map(|e| e.coeffs.clone()).collect();
        Self::new(field, rational_lattice_hnf(&RatMatrix::from_rows(&rows)?))
    }

    /// `Z[λ]` with basis `1, λ, …, λ^{n−1}`.
    pub fn power_basis(field: &Field) -> Self {
        Self::new(field, RatMatrix::identity(field.degree())).expect("identity is invertible")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coords(&self) -> &RatMatrix {
        &self.coords
    }

    pub fn elements(&self) -> Vec<NFElement> {
        (0..self.coords.rows())
            .map(|i| NFElement { field: self.field.clone(), coeffs: self.coords.row(i).to_vec() })
            .collect()
    }

    /// Coordinates of `x` in this basis.
    pub fn coordinates_of(&self, x: &NFElement) -> Vec<BigRational> {
        self.inverse.left_mul_vec(&x.coeffs)
    }

    pub fn contains(&self, x: &NFElement) -> bool {
        self.coordinates_of(x).iter().all(|c| c.is_integer())
    }

    pub fn contains_lattice(&self, other: &LatticeBasis) -> bool {
        other.elements().iter().all(|e| self.contains(e))
    }

    /// Canonical HNF basis of the same lattice.
    pub fn canonical(&self) -> RatMatrix {
        rational_lattice_hnf(&self.coords)
    }

    /// `|det|` of the coordinate matrix: the covolume relative to `Z[λ]`.
    pub fn covolume(&self) -> BigRational {
        self.coords.det().expect("square").abs()
    }

    pub fn is_ring(&self) -> bool {
        let e = self.elements();
        self.contains(&NFElement::one(&self.field)) && e.iter().all(|a| e.iter().all(|b| self.contains(&(a * b))))
    }

    /// `x·L`.
    pub fn scaled_by(&self, x: &NFElement) -> Result<Self> {
        let gens: Vec<NFElement> = self.elements().iter().map(|e| x * e).collect();
        Self::from_elements(&self.field, &gens)
    }

    /// Z-span of all products.
    pub fn product(&self, other: &LatticeBasis) -> Result<Self> {
        let mut gens = Vec::new();
        for a in self.elements() {
            for b in other.elements() {
                gens.push(&a * &b);
            }
        }
        Self::from_generators(&self.field, &gens)
    }

    /// `(J : I) = {x ∈ K : x·I ⊆ J}` with `I = self`.
    pub fn colon_into(&self, j: &LatticeBasis) -> Result<Self> {
        let mut acc: Option<RatMatrix> = None;
        for b in self.elements() {
            let binv = b.inv()?;
            let part = j.scaled_by(&binv)?.coords;
            acc = Some(match acc {
                None => rational_lattice_hnf(&part),
                Some(a) => rational_lattice_intersection(&a, &part),
            });
        }
        Self::new(&self.field, acc.expect("nonempty basis"))
    }

    /// Multiplier ring `(L : L)`.
    pub fn multiplier_ring(&self) -> Result<Self> {
        self.colon_into(self)
    }

    pub fn is_module_for(&self, x: &NFElement) -> bool {
        self.elements().iter().all(|b| self.contains(&(x * b)))
    }
}

/// Matrix of multiplication by `x` in `basis`: row `i` holds the coordinates of `x·b_i`.
pub fn mult_matrix(x: &NFElement, basis: &LatticeBasis) -> Result<IntMatrix> {
    let n = basis.field.degree();
    let mut rows = Vec::with_capacity(n);
    for (i, b) in basis.elements().iter().enumerate() {
        let c = basis.coordinates_of(&(x * b));
        if c.iter().any(|v| !v.is_integer()) {
            return Err(Error::NotAModule { element: x.to_string(), index: i });
        }
        rows.push(c.into_iter().map(|v| v.to_integer()).collect::<Vec<BigInt>>());
    }
    IntMatrix::from_rows(&rows)
}

/// True iff `x` and `x⁻¹` lie in `order`.
pub fn is_unit_in_order(x: &NFElement, order: &LatticeBasis) -> Result<bool> {
    if !order.is_ring() {
        return Err(Error::Domain("lattice is not a ring".into()));
    }
    if x.is_zero() || !order.contains(x) {
        return Ok(false);
    }
    Ok(order.contains(&x.inv()?))
}

/// Searches small exponent vectors `e` with `∏ u_i^{e_i} = ±1`, checked exactly.
pub fn multiplicative_relation(units: &[NFElement]) -> Option<Vec<i64>> {
    let d = units.len();
    let total = crate::exec::box_size(d, RELATION_SEARCH_BOUND);
    let field = units.first()?.field.clone();
    let minus_one = NFElement::from_integer(&field, BigInt::from(-1));
    let logs: Vec<Vec<f64>> = units.iter().map(|u| u.log_embedding()).collect();
    (0..total).map(|i| crate::exec::box_point(i, d, RELATION_SEARCH_BOUND)).find(|e| {
        if e.iter().all(|&x| x == 0) || e.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            return false;
        }
        // cheap numeric screen before the exact product
        let scale: f64 = logs.iter().zip(e).map(|(l, &k)| l.iter().map(|x| (k as f64 * x).abs()).sum::<f64>()).sum();
        let off = (0..logs[0].len()).any(|p| {
            let c: f64 = logs.iter().zip(e).map(|(l, &k)| k as f64 * l[p]).sum();
            c.abs() > 1e-6 * (1.0 + scale)
        });
        if off {
            return false;
        }
        let prod = units.iter().zip(e).try_fold(NFElement::one(&field), |acc, (u, &k)| u.pow(k).map(|p| &acc * &p));
        prod.is_ok_and(|p| p.is_one() || p == minus_one)
    })
}

/// Action of `Z^d` on the lattice by multiplication with the given units.
pub fn construct_action(field: &Field, units: &[NFElement], basis: &LatticeBasis) -> Result<ZdAction> {
    if units.is_empty() {
        return Err(Error::Validation("at least one unit is required".into()));
    }
    for u in units {
        let n = u.norm();
        if !n.abs().is_one() || !u.is_algebraic_integer() {
            return Err(Error::Validation(format!("{u} is not a unit (norm {n})")));
        }
    }
    let logs: Vec<Vec<f64>> = units.iter().map(|u| u.log_embedding()).collect();
    if numeric_rank(&logs, INDEPENDENCE_TOLERANCE) < units.len() {
        let relation = multiplicative_relation(units)
            .map(|e| format!("relation with exponents {e:?}"))
            .unwrap_or_else(|| "log-embedding matrix is rank deficient".into());
        return Err(Error::DependentUnits(relation));
    }
    if !field.is_totally_real() && units.len() > field.unit_rank() {
        return Err(Error::DependentUnits("more units than the Dirichlet rank".into()));
    }
    let gens = units.iter().map(|u| mult_matrix(u, basis)).collect::<Result<Vec<_>>>()?;
    ZdAction::new(gens)
}

/// `log|det|`-ratio of two unit systems of equal size `r`, using the first `r` places.
#[derive(Clone, Debug, PartialEq)]
pub struct LogIndex {
    pub index: i64,
    pub residual: f64,
}

pub fn log_lattice_index(sub: &[NFElement], sup: &[NFElement]) -> Result<LogIndex> {
    if sub.len() != sup.len() || sub.is_empty() {
        return Err(Error::Domain("unit systems must have the same positive size".into()));
    }
    let r = sub.len();
    let det = |units: &[NFElement]| -> Result<f64> {
        let rows: Vec<Vec<f64>> = units.iter().map(|u| u.log_embedding()[..r].to_vec()).collect();
        if rows[0].len() < r {
            return Err(Error::Domain("more units than archimedean places".into()));
        }
        Ok(det_f64(rows))
    };
    let (a, b) = (det(sub)?, det(sup)?);
    if a.abs() < INDEPENDENCE_TOLERANCE || b.abs() < INDEPENDENCE_TOLERANCE {
        return Err(Error::Domain("unit systems are multiplicatively dependent".into()));
    }
    let ratio = (a / b).abs();
    let index = ratio.round();
    let residual = (ratio - index).abs();
    if residual > 1e-6 {
        return Err(Error::Numeric(format!("regulator ratio {ratio} is not an integer")));
    }
    Ok(LogIndex { index: index as i64, residual })
}

pub(crate) fn det_f64(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).expect("nonempty");
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            for j in c..n {
                a[i][j] -= f * a[c][j];
            }
        }
    }
    det
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2a() -> Field {
        NumberField::new(IntPoly::from_i64(&[1, -6, 3, 1])).unwrap()
    }

    fn ok_basis_2a(k: &Field) -> LatticeBasis {
        LatticeBasis::from_elements(
            k,
            &[
                NFElement::from_fracs(k, &[(-2, 3), (5, 3), (1, 3)]),
                NFElement::from_fracs(k, &[(-1, 3), (7, 3), (2, 3)]),
                NFElement::from_ints(k, &[-1, 5, 1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn arithmetic() {
        let k = f2a();
        let lam = NFElement::generator(&k);
        assert_eq!(lam.norm(), BigRational::from_integer((-1).into()));
        assert!((&lam * &lam.inv().unwrap()).is_one());
        assert_eq!(k.signature(), (3, 0));
        let k3 = NumberField::new(IntPoly::from_i64(&[-1, -8, -2, 1])).unwrap();
        let u = NFElement::from_ints(&k3, &[2, 1]);
        assert!(u.norm().abs().is_one());
        assert!(NumberField::new(IntPoly::from_i64(&[-1, 0, 1])).is_err());
    }

    #[test]
    fn units_and_orders() {
        let k = f2a();
        let eps = NFElement::from_fracs(&k, &[(1, 3), (5, 3), (1, 3)]);
        let zl = LatticeBasis::power_basis(&k);
        let ok = ok_basis_2a(&k);
        assert!(is_unit_in_order(&NFElement::one(&k), &zl).unwrap());
        assert!(!is_unit_in_order(&eps, &zl).unwrap());
        assert!(is_unit_in_order(&eps, &ok).unwrap());
        assert_eq!(ok.covolume(), BigRational::new(1.into(), 3.into()));
    }

    #[test]
    fn multiplication_matrices() {
        let k = f2a();
        let lam = NFElement::generator(&k);
        let l2 = NFElement::from_ints(&k, &[2, -4, -1]);
        let zl = LatticeBasis::power_basis(&k);
        assert_eq!(mult_matrix(&lam, &zl).unwrap(), IntMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[-1, 6, -3]]));
        assert_eq!(mult_matrix(&l2, &zl).unwrap(), IntMatrix::from_i64(&[&[2, -4, -1], &[1, -4, -1], &[1, -5, -1]]));
        let ok = ok_basis_2a(&k);
        assert_eq!(mult_matrix(&lam, &ok).unwrap(), IntMatrix::from_i64(&[&[1, 2, -1], &[-1, -2, 2], &[2, 5, -2]]));
        let half = NFElement::from_fracs(&k, &[(1, 2)]);
        assert!(matches!(mult_matrix(&half, &zl), Err(Error::NotAModule { index: 0, .. })));
    }

    #[test]
    fn log_embeddings() {
        let k = NumberField::new(IntPoly::from_i64(&[-2, 0, 1])).unwrap();
        let u = NFElement::from_ints(&k, &[1, 1]);
        let l = u.log_embedding();
        let c = (1.0 + 2f64.sqrt()).ln();
        // roots sorted ascending: −√2 first
        assert!((l[0] + c).abs() < 1e-12 && (l[1] - c).abs() < 1e-12);
        assert!(l.iter().sum::<f64>().abs() < 1e-9);
    }

    #[test]
    fn dependent_units_are_rejected() {
        let k = f2a();
        let lam = NFElement::generator(&k);
        let sq = &lam * &lam;
        let err = construct_action(&k, &[lam, sq], &LatticeBasis::power_basis(&k)).unwrap_err();
        assert!(matches!(err, Error::DependentUnits(_)));
    }

    #[test]
    fn regulator_ratios() {
        let k = f2a();
        let l1 = NFElement::generator(&k);
        let l2 = NFElement::from_ints(&k, &[2, -4, -1]);
        let same = log_lattice_index(&[l1.clone(), l2.clone()], &[l1.clone(), l2.clone()]).unwrap();
        assert_eq!(same.index, 1);
        let sq = &l1 * &l1;
        assert_eq!(log_lattice_index(&[sq, l2.clone()], &[l1, l2]).unwrap().index, 2);
    }

    #[test]
    fn colon_and_multiplier_ring() {
        let k = f2a();
        let zl = LatticeBasis::power_basis(&k);
        assert_eq!(zl.multiplier_ring().unwrap(), zl);
        let ok = ok_basis_2a(&k);
        assert_eq!(ok.multiplier_ring().unwrap(), ok);
        assert!(ok.contains_lattice(&zl));
    }
}

//! Z^d-actions by toral automorphisms: validation, evaluation, Lyapunov data, condition (R),
//! irreducibility, Cartan detection and fixed points.

use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{find_first, Execution};
use crate::linalg::{snf, IntMatrix, RatMatrix};
use crate::numeric::{complex_null_vector, numeric_rank, rational_reconstruct};
use crate::poly::{factor_q, is_irreducible_q, IntPoly};
use crate::spectra::{aberth_roots, all_roots_real, entropy, is_ergodic};

pub const DEFAULT_SEARCH_BOX: i64 = 3;
pub const RANK_TOLERANCE: f64 = 1e-8;
pub const MAX_RECONSTRUCTION_DENOMINATOR: i64 = 1000;
const MAX_FIXED_POINT_LISTING: u64 = 100_000;

/// `d` commuting unimodular `n × n` integer matrices acting on row vectors from the right.
#[derive(Clone)]
pub struct ZdAction {
    generators: Vec<IntMatrix>,
    inverses: Vec<IntMatrix>,
    lyapunov: OnceLock<Result<LyapunovData>>,
}

impl fmt::Debug for ZdAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ZdAction").field("generators", &self.generators).finish()
    }
}

impl PartialEq for ZdAction {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
    }
}

/// Joint eigenvalues `μ_{k,i}` of the generators on common eigenspaces.
#[derive(Clone, Debug, PartialEq)]
pub struct LyapunovData {
    /// `exponents[k][i] = log|μ_{k,i}|`.
    pub exponents: Vec<Vec<f64>>,
    pub eigenvalues: Vec<Vec<Complex64>>,
    /// Left eigenvector of the separating element for each row.
    pub eigenvectors: Vec<Vec<Complex64>>,
    pub multiplicities: Vec<usize>,
    /// Rows grouped by the irreducible factor of the separating element's characteristic polynomial.
    pub galois_blocks: Vec<Vec<usize>>,
    /// Integer combination `Σ c_i A_i` whose eigenspaces separate the joint spectrum.
    pub separating_combination: Vec<i64>,
}

impl LyapunovData {
    /// `χ_k(n)`.
    pub fn functional(&self, k: usize, nvec: &[i64]) -> f64 {
        self.exponents[k].iter().zip(nvec).map(|(l, &c)| l * c as f64).sum()
    }

    pub fn entropy(&self, nvec: &[i64]) -> f64 {
        (0..self.exponents.len()).map(|k| self.multiplicities[k] as f64 * self.functional(k, nvec).max(0.0)).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeylChamber {
    /// Angular sector `(start, end)` in radians, `0 ≤ start < 2π`.
    pub start_angle: f64,
    pub end_angle: f64,
    /// Rows of the Lyapunov data that are positive inside the chamber.
    pub positive_rows: Vec<usize>,
    /// `h(n) = c · n` inside the chamber.
    pub entropy_coefficients: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeylChamberSet {
    pub chambers: Vec<WeylChamber>,
    /// Number of distinct Lyapunov hyperplanes.
    pub walls: usize,
    /// Set when distinct exponents share a hyperplane or an exponent vanishes identically.
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ConditionR {
    Verified { m1: Vec<i64>, m2: Vec<i64> },
    False { reason: String },
    NotVerified { reason: String },
}

impl ConditionR {
    pub fn is_verified(&self) -> bool {
        matches!(self, ConditionR::Verified { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum IrreducibilityVerdict {
    Irreducible {
        witness: Vec<i64>,
    },
    /// Rows span a proper rational subspace invariant under every generator.
    Reducible {
        subspace: RatMatrix,
    },
    Inconclusive,
}

impl IrreducibilityVerdict {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, IrreducibilityVerdict::Irreducible { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPoints {
    pub order: BigInt,
    /// Representatives in `[0, 1)^n`, sorted; empty when the group is too large to list.
    pub points: Vec<Vec<BigRational>>,
    /// Invariant factors of the fixed-point group.
    pub invariant_factors: Vec<BigInt>,
}

/// Builds and validates an action.
pub fn new_action(generators: Vec<IntMatrix>) -> Result<ZdAction> {
    ZdAction::new(generators)
}

/// Nonzero integer vectors of the box `‖v‖∞ ≤ bound`: standard basis first, then by
/// sup-norm and lexicographic order.
pub fn search_vectors(dim: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = (0..dim)
        .map(|i| {
            let mut e = vec![0; dim];
            e[i] = 1;
            e
        })
        .collect();
    if bound < 1 {
        return Vec::new();
    }
    let mut rest: Vec<Vec<i64>> = (0..crate::exec::box_size(dim, bound))
        .map(|i| crate::exec::box_point(i, dim, bound))
        .filter(|v| v.iter().any(|&x| x != 0) && !out.contains(v))
        .collect();
    rest.sort_by_key(|v| (v.iter().map(|x| x.abs()).max().unwrap_or(0), v.clone()));
    out.extend(rest);
    out
}

impl ZdAction {
    pub fn new(generators: Vec<IntMatrix>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::Validation("an action needs at least one generator".into()));
        };
        let n = first.rows();
        if n == 0 {
            return Err(Error::Validation("torus dimension must be positive".into()));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.rows() != n || g.cols() != n {
                return Err(Error::Validation(format!("generator {i} is {}x{}, expected {n}x{n}", g.rows(), g.cols())));
            }
            let det = g.det()?;
            if !det.abs().is_one() {
                return Err(Error::Validation(format!("generator {i} has determinant {det}, not ±1")));
            }
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if !generators[i].commutes_with(&generators[j]) {
                    return Err(Error::Validation(format!("generators {i} and {j} do not commute")));
                }
            }
        }
        let inverses = generators.iter().map(|g| g.inverse_unimodular()).collect::<Result<Vec<_>>>()?;
        Ok(ZdAction { generators, inverses, lyapunov: OnceLock::new() })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn dim(&self) -> usize {
        self.generators[0].rows()
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &IntMatrix {
        &self.generators[i]
    }

    /// `A_1^{n_1} ⋯ A_d^{n_d}`.
    pub fn rho(&self, nvec: &[i64]) -> IntMatrix {
        assert_eq!(nvec.len(), self.rank(), "group element has the wrong length");
        let mut out = IntMatrix::identity(self.dim());
        for (i, &e) in nvec.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let base = if e > 0 { &self.generators[i] } else { &self.inverses[i] };
            out = &out * &base.pow(e.unsigned_abs() as u32);
        }
        out
    }

    pub fn lyapunov_data(&self) -> Result<LyapunovData> {
        self.lyapunov.get_or_init(|| compute_lyapunov(&self.generators)).clone()
    }

    /// `h(n) = Σ_{χ_k(n) > 0} m_k χ_k(n)`; falls back to the spectral entropy of `ρ(n)`
    /// when the joint spectrum cannot be separated.
    pub fn entropy_function(&self, nvec: &[i64]) -> Result<f64> {
        match self.lyapunov_data() {
            Ok(l) => Ok(l.entropy(nvec)),
            Err(_) => entropy(&self.rho(nvec)),
        }
    }

    pub fn weyl_chambers(&self) -> Result<WeylChamberSet> {
        weyl_chambers(self)
    }

    pub fn satisfies_r(&self, bound: i64, exec: Execution) -> ConditionR {
        satisfies_r(self, bound, exec)
    }

    pub fn is_irreducible(&self, bound: i64) -> IrreducibilityVerdict {
        is_irreducible(self, bound)
    }

    pub fn is_cartan(&self) -> bool {
        is_cartan(self)
    }

    pub fn fixed_points(&self) -> Result<FixedPoints> {
        fixed_points(self)
    }

    /// Generators replaced by `ρ(c_i)` for the rows `c_i` of `c ∈ GL(d, Z)`.
    pub fn time_change(&self, c: &[Vec<i64>]) -> Result<ZdAction> {
        if c.len() != self.rank() || c.iter().any(|r| r.len() != self.rank()) {
            return Err(Error::Shape("time change must be a d x d matrix".into()));
        }
        let m = IntMatrix::from_rows(c)?;
        if !m.det()?.abs().is_one() {
            return Err(Error::Validation("time change is not in GL(d, Z)".into()));
        }
        ZdAction::new(c.iter().map(|r| self.rho(r)).collect())
    }

    /// `W A_i W⁻¹` for unimodular `W`.
    pub fn conjugate_by(&self, w: &IntMatrix) -> Result<ZdAction> {
        let wi = w.inverse_unimodular()?;
        ZdAction::new(self.generators.iter().map(|g| &(w * g) * &wi).collect())
    }

    /// Block-diagonal product action `α × β` on `T^{n+m}`.
    pub fn product(&self, other: &ZdAction) -> Result<ZdAction> {
        if self.rank() != other.rank() {
            return Err(Error::Shape("product actions need equal rank".into()));
        }
        ZdAction::new(self.generators.iter().zip(&other.generators).map(|(a, b)| IntMatrix::block_diag(a, b)).collect())
    }

    /// `α_k` with `α_k^n = α^{kn}`.
    pub fn power(&self, k: u32) -> Result<ZdAction> {
        ZdAction::new(self.generators.iter().map(|g| g.pow(k)).collect())
    }
}

fn combination(gens: &[IntMatrix], c: &[i64]) -> IntMatrix {
    let n = gens[0].rows();
    gens.iter().zip(c).fold(IntMatrix::zeros(n, n), |acc, (g, &ci)| &acc + &g.scale(&BigInt::from(ci)))
}

pub(crate) fn to_complex(m: &IntMatrix) -> Vec<Vec<Complex64>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| Complex64::new(x.to_f64().unwrap_or(f64::NAN), 0.0)).collect())
        .collect()
}

pub(crate) fn left_apply(v: &[Complex64], m: &[Vec<Complex64>]) -> Vec<Complex64> {
    (0..v.len()).map(|j| v.iter().enumerate().map(|(i, x)| x * m[i][j]).sum()).collect()
}

/// Separates the joint spectrum with the first combination `M = Σ c_i A_i` (in search order)
/// whose eigenspaces are common eigenspaces of every generator.
fn compute_lyapunov(gens: &[IntMatrix]) -> Result<LyapunovData> {
    let d = gens.len();
    let n = gens[0].rows();
    let cgens: Vec<Vec<Vec<Complex64>>> = gens.iter().map(to_complex).collect();
    'candidates: for c in search_vectors(d, 3) {
        let m = combination(gens, &c);
        let factors = factor_q(&m.charpoly()?)?;
        let cm = to_complex(&m);
        let mut eigenvalues = Vec::new();
        let mut eigenvectors = Vec::new();
        let mut multiplicities = Vec::new();
        let mut galois_blocks = Vec::new();
        for (g, mult) in &factors {
            let (roots, _) = aberth_roots(g)?;
            let mut block = Vec::new();
            for nu in roots {
                let shifted: Vec<Vec<Complex64>> = (0..n)
                    .map(|j| (0..n).map(|i| cm[i][j] - if i == j { nu } else { Complex64::zero() }).collect())
                    .collect();
                // left eigenvector of M: right null vector of (M − ν)ᵀ
                let v = complex_null_vector(&shifted, *mult);
                let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                let mut mu = Vec::with_capacity(d);
                for cg in &cgens {
                    let w = left_apply(&v, cg);
                    let lam: Complex64 = w.iter().zip(&v).map(|(a, b)| a * b.conj()).sum::<Complex64>() / vnorm2;
                    let resid: f64 = w.iter().zip(&v).map(|(a, b)| (a - lam * b).norm_sqr()).sum::<f64>().sqrt();
                    let scale: f64 = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(vnorm2.sqrt());
                    if !(resid <= 1e-7 * scale) {
                        continue 'candidates;
                    }
                    mu.push(lam);
                }
                block.push(eigenvalues.len());
                eigenvalues.push(mu);
                eigenvectors.push(v);
                multiplicities.push(*mult);
            }
            galois_blocks.push(block);
        }
        if multiplicities.iter().sum::<usize>() != n {
            continue;
        }
        let exponents = eigenvalues.iter().map(|row| row.iter().map(|z| z.norm().ln()).collect()).collect();
        return Ok(LyapunovData {
            exponents,
            eigenvalues,
            eigenvectors,
            multiplicities,
            galois_blocks,
            separating_combination: c,
        });
    }
    Err(Error::Numeric("derogatory spectrum: no combination in the box separates the joint eigenspaces".into()))
}

fn normalize_angle(t: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let r = t.rem_euclid(two_pi);
    if r >= two_pi - 1e-12 {
        0.0
    } else {
        r
    }
}

pub fn weyl_chambers(a: &ZdAction) -> Result<WeylChamberSet> {
    if a.rank() != 2 {
        return Err(Error::Unsupported(format!("Weyl chambers are computed for d = 2, got d = {}", a.rank())));
    }
    let l = a.lyapunov_data()?;
    let mut angles: Vec<f64> = Vec::new();
    let mut directions: Vec<f64> = Vec::new();
    let mut degenerate = false;
    for row in &l.exponents {
        let (x, y) = (row[0], row[1]);
        let norm = x.hypot(y);
        if norm < 1e-12 {
            degenerate = true;
            continue;
        }
        // wall direction perpendicular to the exponent vector, taken modulo π
        let t = normalize_angle((-x).atan2(y)).rem_euclid(PI);
        if directions.iter().any(|&s| (s - t).abs() < 1e-9 || (s - t).abs() > PI - 1e-9) {
            degenerate = true;
        } else {
            directions.push(t);
        }
    }
    for &t in &directions {
        angles.push(normalize_angle(t));
        angles.push(normalize_angle(t + PI));
    }
    angles.sort_by(f64::total_cmp);
    let walls = directions.len();
    let mut chambers = Vec::new();
    if angles.is_empty() {
        angles.push(0.0);
    }
    for i in 0..angles.len() {
        let start = angles[i];
        let mut end = if i + 1 < angles.len() { angles[i + 1] } else { angles[0] + 2.0 * PI };
        if angles.len() == 1 {
            end = start + 2.0 * PI;
        }
        let mid = 0.5 * (start + end);
        let u = [mid.cos(), mid.sin()];
        let positive_rows: Vec<usize> =
            (0..l.exponents.len()).filter(|&k| l.exponents[k][0] * u[0] + l.exponents[k][1] * u[1] > 0.0).collect();
        let mut coeffs = [0.0; 2];
        for &k in &positive_rows {
            coeffs[0] += l.multiplicities[k] as f64 * l.exponents[k][0];
            coeffs[1] += l.multiplicities[k] as f64 * l.exponents[k][1];
        }
        chambers.push(WeylChamber { start_angle: start, end_angle: end, positive_rows, entropy_coefficients: coeffs });
    }
    Ok(WeylChamberSet { chambers, walls, degenerate })
}

/// Checks one candidate pair; `None` when the pair cannot be certified.
fn certify_pair(a: &ZdAction, l: &LyapunovData, m1: &[i64], m2: &[i64]) -> Option<()> {
    for block in &l.galois_blocks {
        let r1: Vec<f64> = block.iter().map(|&k| l.functional(k, m1)).collect();
        let r2: Vec<f64> = block.iter().map(|&k| l.functional(k, m2)).collect();
        let rank = numeric_rank(&[r1.clone(), r2.clone()], RANK_TOLERANCE);
        let scale = r1.iter().chain(&r2).fold(0.0f64, |s, x| s.max(x.abs()));
        if rank == 2 {
            continue;
        }
        if rank == 0 || scale < RANK_TOLERANCE {
            return None;
        }
        // one-dimensional kernel: p·r1 + q·r2 = 0
        let k = (0..r1.len()).max_by(|&i, &j| r1[i].hypot(r2[i]).total_cmp(&r1[j].hypot(r2[j])))?;
        let (p, q) = if r1[k].abs() >= r2[k].abs() {
            let (num, den) = rational_reconstruct(-r2[k] / r1[k], MAX_RECONSTRUCTION_DENOMINATOR, 1e-9)?;
            (num, den)
        } else {
            let (num, den) = rational_reconstruct(-r1[k] / r2[k], MAX_RECONSTRUCTION_DENOMINATOR, 1e-9)?;
            (den, num)
        };
        let g = p.gcd(&q);
        let (p, q) = (p / g, q / g);
        if r1.iter().zip(&r2).any(|(x, y)| (p as f64 * x + q as f64 * y).abs() > 1e-6 * (1.0 + scale)) {
            return None;
        }
        let n: Vec<i64> = m1.iter().zip(m2).map(|(x, y)| p * x + q * y).collect();
        if !is_ergodic(&a.rho(&n)).ok()?.ergodic {
            return None;
        }
    }
    Some(())
}

/// Searches for a pair `m1, m2` in the box spanning a Z² of ergodic elements.
pub fn satisfies_r(a: &ZdAction, bound: i64, exec: Execution) -> ConditionR {
    if a.rank() < 2 {
        return ConditionR::False { reason: "a Z^1-action contains no copy of Z^2".into() };
    }
    let l = match a.lyapunov_data() {
        Ok(l) => l,
        Err(e) => return ConditionR::NotVerified { reason: e.to_string() },
    };
    let vs = search_vectors(a.rank(), bound);
    let pairs: Vec<(usize, usize)> = (0..vs.len()).flat_map(|i| (i + 1..vs.len()).map(move |j| (i, j))).collect();
    let found = find_first(exec, pairs.len(), |idx| {
        let (i, j) = pairs[idx];
        certify_pair(a, &l, &vs[i], &vs[j])
    });
    match found {
        Some((idx, ())) => {
            let (i, j) = pairs[idx];
            ConditionR::Verified { m1: vs[i].clone(), m2: vs[j].clone() }
        }
        None => ConditionR::NotVerified { reason: format!("no certified pair in the box of radius {bound}") },
    }
}

/// Proper invariant subspace from the kernel of `g(X)` for an irreducible factor `g` of the
/// characteristic polynomial of a matrix `X` commuting with the action.
fn invariant_kernel(x: &IntMatrix) -> Option<RatMatrix> {
    let n = x.rows();
    let factors = factor_q(&x.charpoly().ok()?).ok()?;
    for (g, _) in factors {
        let gx = g.eval_matrix(x).ok()?;
        let ker = RatMatrix::from(&gx).left_kernel();
        if !ker.is_empty() && ker.len() < n {
            return RatMatrix::from_rows(&ker).ok();
        }
    }
    None
}

pub fn is_irreducible(a: &ZdAction, bound: i64) -> IrreducibilityVerdict {
    for v in search_vectors(a.rank(), bound) {
        if let Ok(f) = a.rho(&v).charpoly() {
            if f.degree() >= 1 && is_irreducible_q(&f).is_ok_and(|r| r.is_irreducible()) {
                return IrreducibilityVerdict::Irreducible { witness: v };
            }
        }
    }
    for g in a.generators() {
        if let Some(subspace) = invariant_kernel(g) {
            return IrreducibilityVerdict::Reducible { subspace };
        }
    }
    if let Ok(basis) = crate::centralizer::rational_commutant(a) {
        for x in basis {
            if let Some(subspace) = invariant_kernel(&x) {
                return IrreducibilityVerdict::Reducible { subspace };
            }
        }
    }
    IrreducibilityVerdict::Inconclusive
}

pub fn is_cartan(a: &ZdAction) -> bool {
    let n = a.dim();
    let d = a.rank();
    if n < 3 || d != n - 1 {
        return false;
    }
    for v in search_vectors(d, 2) {
        let m = a.rho(&v);
        if !is_ergodic(&m).is_ok_and(|c| c.ergodic) {
            return false;
        }
        if !m.charpoly().is_ok_and(|f| all_roots_real(&f)) {
            return false;
        }
    }
    let Ok(l) = a.lyapunov_data() else { return false };
    l.galois_blocks.iter().all(|block| {
        let rows: Vec<Vec<f64>> = block.iter().map(|&k| l.exponents[k].clone()).collect();
        numeric_rank(&rows, RANK_TOLERANCE) == d
    })
}

/// `Fix(α) = {x ∈ T^n : x(A_i − I) ∈ Z^n for all i}` via the Smith form of
/// `[(A_1 − I) | … | (A_d − I)]`.
pub fn fixed_points(a: &ZdAction) -> Result<FixedPoints> {
    let n = a.dim();
    let id = IntMatrix::identity(n);
    let blocks: Vec<IntMatrix> = a.generators().iter().map(|g| g - &id).collect();
    let refs: Vec<&IntMatrix> = blocks.iter().collect();
    let h = IntMatrix::hstack(&refs)?;
    let s = snf(&h);
    if s.d.len() < n || s.d.iter().any(Zero::is_zero) {
        return Err(Error::Domain("the fixed-point set is infinite".into()));
    }
    let order = s.d.iter().fold(BigInt::one(), |acc, x| acc * x);
    let invariant_factors: Vec<BigInt> = s.d.iter().filter(|x| !x.is_one()).cloned().collect();
    let mut points = Vec::new();
    if order.to_u64().is_some_and(|o| o <= MAX_FIXED_POINT_LISTING) {
        // x = y·U with y_i ∈ (1/d_i) Z / Z
        let dims: Vec<u64> = s.d.iter().map(|x| x.to_u64().expect("bounded by the order")).collect();
        let total: u64 = dims.iter().product();
        for mut idx in 0..total {
            let mut y = vec![BigRational::zero(); n];
            for (i, &di) in dims.iter().enumerate().rev() {
                y[i] = BigRational::new(BigInt::from(idx % di), BigInt::from(di));
                idx /= di;
            }
            let x: Vec<BigRational> = (0..n)
                .map(|j| {
                    let v = (0..n).fold(BigRational::zero(), |acc, i| {
                        acc + &y[i] * BigRational::from_integer(s.u.get(i, j).clone())
                    });
                    &v - BigRational::from_integer(v.floor().to_integer())
                })
                .collect();
            points.push(x);
        }
        points.sort();
        points.dedup();
    }
    Ok(FixedPoints { order, points, invariant_factors })
}

/// Ascending coefficient list of the characteristic polynomial of `ρ(n)`.
pub fn element_charpoly(a: &ZdAction, nvec: &[i64]) -> Result<IntPoly> {
    a.rho(nvec).charpoly()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex2a() -> ZdAction {
        new_action(vec![
            IntMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[-1, 6, -3]]),
            IntMatrix::from_i64(&[&[2, -4, -1], &[1, -4, -1], &[1, -5, -1]]),
        ])
        .unwrap()
    }

    #[test]
    fn validation() {
        assert!(new_action(vec![IntMatrix::identity(3)]).is_ok());
        let a = ex2a();
        assert_eq!((a.rank(), a.dim()), (2, 3));
        let swap = IntMatrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        let g = a.generator(0).clone();
        let err = new_action(vec![g.clone(), &g * &swap]).unwrap_err();
        assert!(matches!(err, Error::Validation(ref m) if m.contains("0 and 1")));
        assert!(new_action(vec![IntMatrix::scalar(2, 2)]).is_err());
    }

    #[test]
    fn rho_values() {
        let a = ex2a();
        assert!(a.rho(&[0, 0]).is_identity());
        assert_eq!(a.rho(&[1, 0]), *a.generator(0));
        let inv = a.generator(0).adjugate().unwrap().scale(&a.generator(0).det().unwrap());
        assert_eq!(a.rho(&[-1, 1]), &inv * a.generator(1));
    }

    #[test]
    fn lyapunov_rows_balance() {
        let l = ex2a().lyapunov_data().unwrap();
        assert_eq!(l.exponents.len(), 3);
        for i in 0..2 {
            let s: f64 = l.exponents.iter().map(|r| r[i]).sum();
            assert!(s.abs() < 1e-9);
        }
        let single = new_action(vec![IntMatrix::from_i64(&[&[2, 1], &[1, 1]])]).unwrap();
        let l = single.lyapunov_data().unwrap();
        let phi = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((l.exponents[0][0] + phi).abs() < 1e-12);
        assert!((l.exponents[1][0] - phi).abs() < 1e-12);
    }

    #[test]
    fn chambers() {
        let w = ex2a().weyl_chambers().unwrap();
        assert_eq!(w.chambers.len(), 6);
        assert!(!w.degenerate);
        let a = ex2a();
        let same = new_action(vec![a.generator(0).clone(), a.generator(0).clone()]).unwrap();
        let w = same.weyl_chambers().unwrap();
        assert!(w.degenerate);
        assert!(w.chambers.len() < 6);
        let one = new_action(vec![a.generator(0).clone()]).unwrap();
        assert!(matches!(one.weyl_chambers(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn condition_r() {
        let r = ex2a().satisfies_r(3, Execution::Sequential);
        assert_eq!(r, ConditionR::Verified { m1: vec![1, 0], m2: vec![0, 1] });
        let trivial = new_action(vec![IntMatrix::identity(3), IntMatrix::identity(3)]).unwrap();
        assert!(matches!(trivial.satisfies_r(3, Execution::Sequential), ConditionR::NotVerified { .. }));
    }

    #[test]
    fn irreducibility_and_cartan() {
        let a = ex2a();
        assert_eq!(a.is_irreducible(3), IrreducibilityVerdict::Irreducible { witness: vec![1, 0] });
        assert!(a.is_cartan());
        let sq = a.product(&a).unwrap();
        assert!(matches!(sq.is_irreducible(3), IrreducibilityVerdict::Reducible { .. }));
        assert!(!sq.is_cartan());
        let id = new_action(vec![IntMatrix::identity(3)]).unwrap();
        assert!(matches!(id.is_irreducible(3), IrreducibilityVerdict::Reducible { .. }));
    }

    #[test]
    fn fixed_points_of_2b() {
        let a = new_action(vec![
            IntMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[1, -11, 7]]),
            IntMatrix::from_i64(&[&[-2, 1, 0], &[0, -2, 1], &[1, -11, 5]]),
        ])
        .unwrap();
        let f = a.fixed_points().unwrap();
        assert_eq!(f.order, BigInt::from(2));
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f.points, vec![vec![BigRational::zero(); 3], vec![half.clone(), BigRational::zero(), half]]);
        let id = new_action(vec![IntMatrix::identity(2)]).unwrap();
        assert!(id.fixed_points().is_err());
    }
}

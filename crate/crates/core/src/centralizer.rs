//! Integer commutants `C(α)`, unit groups `Z(α)`, the γ-map into `K`, torsion, affine
//! centralizers and Cartan maximality.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::action::{left_apply, to_complex, FixedPoints, LyapunovData, ZdAction};
use crate::error::{Error, Result};
use crate::exec::{box_point, box_size, filter_map_range, Execution};
use crate::linalg::{hnf_basis, integer_left_kernel, lattice_reduce, IntMatrix, QuadraticForm, RatMatrix};
use crate::numberfield::{LatticeBasis, NFElement};
use crate::numeric::{numeric_rank, rational_reconstruct};
use crate::poly::{cyclotomic, euler_phi, factor_q, is_irreducible_q};

pub const TORSION_BOX: i64 = 4;
pub const DEFAULT_UNIT_BOX: i64 = 50;
/// Largest number of candidates a single box search will visit.
pub const MAX_SEARCH_CANDIDATES: usize = 50_000_000;
const TORSION_CANDIDATE_LIMIT: usize = 5_000_000;
const LOG_COORDINATE_TOLERANCE: f64 = 1e-6;

/// Z-basis of `{X ∈ M(n, Z) : X A_i = A_i X}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutantBasis {
    pub basis: Vec<IntMatrix>,
}

impl CommutantBasis {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.first().map_or(0, IntMatrix::rows)
    }

    pub fn element(&self, coeffs: &[i64]) -> IntMatrix {
        let n = self.dim();
        self.basis.iter().zip(coeffs).fold(IntMatrix::zeros(n, n), |acc, (b, &c)| &acc + &b.scale(&BigInt::from(c)))
    }

    fn flat(&self) -> RatMatrix {
        let rows: Vec<Vec<BigRational>> = self
            .basis
            .iter()
            .map(|b| b.entries().iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect();
        RatMatrix::from_rows(&rows).expect("rectangular")
    }

    /// Integer coordinates of `x` in the basis, if `x` lies in the lattice.
    pub fn coordinates_of(&self, x: &IntMatrix) -> Option<Vec<BigInt>> {
        let a = self.flat().transpose();
        let b = RatMatrix::new(
            x.entries().len(),
            1,
            x.entries().iter().map(|v| BigRational::from_integer(v.clone())).collect(),
        )
        .ok()?;
        let sol = a.solve(&b).ok()?;
        (0..self.rank())
            .map(|i| {
                let v = sol.particular.get(i, 0);
                v.is_integer().then(|| v.to_integer())
            })
            .collect()
    }

    /// True iff every product of basis elements re-expands with integer coordinates.
    pub fn is_ring(&self) -> bool {
        let id = IntMatrix::identity(self.dim());
        self.coordinates_of(&id).is_some()
            && self.basis.iter().all(|a| self.basis.iter().all(|b| self.coordinates_of(&(a * b)).is_some()))
    }

    /// Same lattice with an LLL-reduced basis under the Frobenius norm.
    pub fn reduced(&self) -> Result<CommutantBasis> {
        if self.basis.is_empty() {
            return Ok(self.clone());
        }
        let n = self.dim();
        let r = lattice_reduce(&self.flat(), &QuadraticForm::Euclidean)?;
        let basis = (0..r.basis.rows())
            .map(|i| {
                let row: Vec<BigInt> = r.basis.row(i).iter().map(|v| v.to_integer()).collect();
                IntMatrix::new(n, n, row)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CommutantBasis { basis })
    }
}

/// Coefficient matrix of `X ↦ (X A_i − B_i X)_i` acting on row-major `vec(X)` from the right.
fn intertwiner_system(a: &[IntMatrix], b: &[IntMatrix]) -> IntMatrix {
    let n = a[0].rows();
    let mut l = IntMatrix::zeros(n * n, a.len() * n * n);
    for (i, (ga, gb)) in a.iter().zip(b).enumerate() {
        for p in 0..n {
            for q in 0..n {
                let col = i * n * n + p * n + q;
                for r in 0..n {
                    // X_{p r} A_{r q}
                    let v = l.get(p * n + r, col) + ga.get(r, q);
                    l.set(p * n + r, col, v);
                    // − B_{p r} X_{r q}
                    let v = l.get(r * n + q, col) - gb.get(p, r);
                    l.set(r * n + q, col, v);
                }
            }
        }
    }
    l
}

/// Saturated Z-basis (HNF on the flattened entries) of `{X : X A_i = B_i X}`.
pub fn intertwiner_basis(a: &[IntMatrix], b: &[IntMatrix]) -> CommutantBasis {
    let n = a[0].rows();
    let k = integer_left_kernel(&intertwiner_system(a, b));
    let h = hnf_basis(&k);
    let basis = (0..h.rows()).map(|i| IntMatrix::new(n, n, h.row(i).to_vec()).expect("n² entries")).collect();
    CommutantBasis { basis }
}

pub fn commutant_z_basis(a: &ZdAction) -> CommutantBasis {
    intertwiner_basis(a.generators(), a.generators())
}

/// Two basis elements that do not commute, if the commutant is not abelian.
pub fn noncommuting_pair(c: &CommutantBasis) -> Option<(IntMatrix, IntMatrix)> {
    for (i, x) in c.basis.iter().enumerate() {
        for y in &c.basis[i + 1..] {
            if !x.commutes_with(y) {
                return Some((x.clone(), y.clone()));
            }
        }
    }
    None
}

/// Integer matrices spanning the rational commutant.
pub fn rational_commutant(a: &ZdAction) -> Result<Vec<IntMatrix>> {
    Ok(commutant_z_basis(a).basis)
}

/// Image of the commutant under `γ: p(W) ↦ p(w)`, where `W` has irreducible characteristic
/// polynomial and corresponds to `w ∈ K`.
#[derive(Clone, Debug)]
pub struct GammaImage {
    pub order: LatticeBasis,
    pub images: Vec<NFElement>,
}

impl GammaImage {
    /// Ring axioms, `Z[w] ⊆ γ(C)` and, when a maximal order is given, `γ(C) ⊆ O_K`.
    pub fn verify_sandwich(&self, witness_value: &NFElement, maximal_order: Option<&LatticeBasis>) -> bool {
        let n = self.order.field().degree();
        let powers_ok = (0..n as i64).all(|k| witness_value.pow(k).is_ok_and(|p| self.order.contains(&p)));
        self.order.is_ring() && powers_ok && maximal_order.is_none_or(|ok| ok.contains_lattice(&self.order))
    }
}

/// `γ(X)` for `X` in the commutant of the witness `W`.
pub fn gamma(x: &IntMatrix, witness: &IntMatrix, witness_value: &NFElement) -> Result<NFElement> {
    let n = witness.rows();
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut p = IntMatrix::identity(n);
    for _ in 0..n {
        rows.push(p.entries().iter().map(|v| BigRational::from_integer(v.clone())).collect());
        p = &p * witness;
    }
    let a = RatMatrix::from_rows(&rows)?.transpose();
    let b = RatMatrix::new(n * n, 1, x.entries().iter().map(|v| BigRational::from_integer(v.clone())).collect())?;
    let sol = a.solve(&b).map_err(|_| Error::Domain("matrix is not a polynomial in the witness".into()))?;
    let field = witness_value.field();
    let mut acc = NFElement::zero(field);
    let mut pw = NFElement::one(field);
    for k in 0..n {
        acc = &acc + &pw.scale(sol.particular.get(k, 0));
        pw = &pw * witness_value;
    }
    Ok(acc)
}

pub fn gamma_map(c: &CommutantBasis, witness: &IntMatrix, witness_value: &NFElement) -> Result<GammaImage> {
    let f = witness.charpoly()?;
    if f.degree() != witness_value.field().degree() || !is_irreducible_q(&f)?.is_irreducible() {
        return Err(Error::Domain("witness must have irreducible characteristic polynomial of full degree".into()));
    }
    let wpoly = witness_value.charpoly();
    if wpoly != f.to_rat() {
        return Err(Error::Domain("witness value is not a root of the witness characteristic polynomial".into()));
    }
    let images = c.basis.iter().map(|x| gamma(x, witness, witness_value)).collect::<Result<Vec<_>>>()?;
    let order = LatticeBasis::from_generators(witness_value.field(), &images)?;
    Ok(GammaImage { order, images })
}

/// Exact determinant in `i128` by fraction-free elimination; `None` on overflow.
fn det_i128(m: &[i64], n: usize) -> Option<i128> {
    let mut a: Vec<i128> = m.iter().map(|&x| x as i128).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k * n + k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i * n + k] != 0) else { return Some(0) };
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i * n + j].checked_mul(a[k * n + k])?.checked_sub(a[i * n + k].checked_mul(a[k * n + j])?)?;
                a[i * n + j] = t / prev;
            }
        }
        prev = a[k * n + k];
    }
    Some(sign * a[n * n - 1])
}

/// Flattened basis as `i64`, with the combination evaluated in `i64` when it provably fits.
struct FastBasis {
    n: usize,
    rows: Vec<Vec<i64>>,
}

impl FastBasis {
    fn new(c: &CommutantBasis, bound: i64) -> Option<Self> {
        let rows: Vec<Vec<i64>> = c.basis.iter().map(|b| b.to_i64_vec()).collect::<Option<_>>()?;
        let worst: i128 = rows.iter().map(|r| r.iter().map(|x| x.unsigned_abs() as i128).max().unwrap_or(0)).sum();
        (worst * bound as i128 <= 1 << 40).then_some(FastBasis { n: c.dim(), rows })
    }

    fn combine(&self, coeffs: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.n * self.n];
        for (r, &c) in self.rows.iter().zip(coeffs) {
            if c != 0 {
                for (o, x) in out.iter_mut().zip(r) {
                    *o += c * x;
                }
            }
        }
        out
    }
}

fn is_unimodular(c: &CommutantBasis, fast: Option<&FastBasis>, coeffs: &[i64]) -> Option<IntMatrix> {
    let n = c.dim();
    if let Some(fb) = fast {
        let flat = fb.combine(coeffs);
        let det = det_i128(&flat, n);
        match det {
            Some(d) if d.abs() != 1 => return None,
            Some(_) => return Some(IntMatrix::new(n, n, flat.into_iter().map(BigInt::from).collect()).expect("n²")),
            None => {}
        }
    }
    let x = c.element(coeffs);
    x.det().ok().filter(|d| d.abs().is_one()).map(|_| x)
}

fn leading_sign_positive(coeffs: &[i64]) -> bool {
    coeffs.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// All unimodular `X = Σ c_k B_k` over the reduced basis with `|c_k| ≤ bound`, one of `±X`,
/// sorted by entries.
pub fn unit_search(c: &CommutantBasis, bound: i64, exec: Execution) -> Result<Vec<IntMatrix>> {
    let reduced = c.reduced()?;
    let r = reduced.rank();
    let total = (2 * bound as u128 + 1).checked_pow(r as u32).unwrap_or(u128::MAX);
    if total > MAX_SEARCH_CANDIDATES as u128 {
        return Err(Error::Unsupported(format!("unit search over {total} candidates exceeds the budget")));
    }
    let fast = FastBasis::new(&reduced, bound);
    let mut out = filter_map_range(exec, total as usize, |i| {
        let coeffs = box_point(i, r, bound);
        if !leading_sign_positive(&coeffs) {
            return None;
        }
        is_unimodular(&reduced, fast.as_ref(), &coeffs)
    });
    out.sort();
    Ok(out)
}

/// Multiplicative order of `x`, if finite.
pub fn finite_order(x: &IntMatrix) -> Option<u64> {
    let n = x.rows();
    let p = x.charpoly().ok()?;
    // every root on the unit circle bounds the coefficients by binomials
    let mut binom = BigInt::one();
    for k in 0..=n {
        if p.coeff(k).abs() > binom {
            return None;
        }
        binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    let mut l = 1u64;
    for (g, _) in factor_q(&p).ok()? {
        let deg = g.degree() as u64;
        let k = (1..=(2 * deg * deg + 2).max(6)).find(|&k| euler_phi(k) == deg && cyclotomic(k as usize) == g)?;
        l = l.lcm(&k);
    }
    let id = IntMatrix::identity(n);
    let mut divisors: Vec<u64> = (1..=l).filter(|e| l.is_multiple_of(*e)).collect();
    divisors.sort_unstable();
    divisors.into_iter().find(|&e| x.pow(e as u32) == id)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorsionReport {
    /// Finite-order elements with their orders, sorted by entries.
    pub elements: Vec<(IntMatrix, u64)>,
    pub search_box: i64,
    /// False when the box had to be shrunk below the default to fit the budget.
    pub complete: bool,
}

impl TorsionReport {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_plus_minus_identity(&self) -> bool {
        self.elements.len() == 2
            && self.elements.iter().all(|(x, _)| {
                let n = x.rows();
                *x == IntMatrix::identity(n) || *x == IntMatrix::scalar(n, -1)
            })
    }
}

/// Exhausts the commutant box `|c| ≤ 4` (over the reduced basis) for elements of finite order.
pub fn torsion_elements(c: &CommutantBasis, exec: Execution) -> Result<TorsionReport> {
    let reduced = c.reduced()?;
    let r = reduced.rank();
    let mut search_box = TORSION_BOX;
    while search_box > 1 && box_size(r, search_box) > TORSION_CANDIDATE_LIMIT {
        search_box -= 1;
    }
    let fast = FastBasis::new(&reduced, search_box);
    let mut elements = filter_map_range(exec, box_size(r, search_box), |i| {
        let coeffs = box_point(i, r, search_box);
        let x = is_unimodular(&reduced, fast.as_ref(), &coeffs)?;
        finite_order(&x).map(|o| (x, o))
    });
    elements.sort();
    Ok(TorsionReport { elements, search_box, complete: search_box == TORSION_BOX })
}

/// Joint eigenvalues of a commutant element on the separating eigenvectors.
pub fn joint_eigenvalues(l: &LyapunovData, x: &IntMatrix) -> Vec<Complex64> {
    let cx = to_complex(x);
    l.eigenvectors
        .iter()
        .map(|v| {
            let w = left_apply(v, &cx);
            let vn: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            w.iter().zip(v).map(|(a, b)| a * b.conj()).sum::<Complex64>() / vn
        })
        .collect()
}

/// Least-squares coordinates of `log|μ_k(X)|` in the span of the generator exponents.
fn log_coordinates(l: &LyapunovData, x: &IntMatrix) -> Option<Vec<f64>> {
    let logs: Vec<f64> = joint_eigenvalues(l, x).iter().map(|z| z.norm().ln()).collect();
    let e = &l.exponents;
    let d = e[0].len();
    let mut g = vec![vec![0.0; d + 1]; d];
    for i in 0..d {
        for j in 0..d {
            g[i][j] = e.iter().zip(&l.multiplicities).map(|(row, &m)| m as f64 * row[i] * row[j]).sum();
        }
        g[i][d] = e.iter().zip(&logs).zip(&l.multiplicities).map(|((row, y), &m)| m as f64 * row[i] * y).sum();
    }
    for c in 0..d {
        let p = (c..d).max_by(|&a, &b| g[a][c].abs().total_cmp(&g[b][c].abs()))?;
        if g[p][c].abs() < 1e-12 {
            return None;
        }
        g.swap(p, c);
        for i in 0..d {
            if i != c {
                let f = g[i][c] / g[c][c];
                for j in c..=d {
                    g[i][j] -= f * g[c][j];
                }
            }
        }
    }
    let t: Vec<f64> = (0..d).map(|i| g[i][d] / g[i][i]).collect();
    // residual outside the span means X is not in the log-span of the action
    let fit = e.iter().zip(&logs).all(|(row, y)| {
        let pred: f64 = row.iter().zip(&t).map(|(a, b)| a * b).sum();
        (pred - y).abs() < LOG_COORDINATE_TOLERANCE * (1.0 + y.abs())
    });
    fit.then_some(t)
}

fn irreducible_lyapunov(a: &ZdAction) -> Option<LyapunovData> {
    let l = a.lyapunov_data().ok()?;
    l.multiplicities.iter().all(|&m| m == 1).then_some(l)
}

/// True iff `x = ±ρ(k)` for an integer vector `k` read off the log coordinates.
pub fn in_action_up_to_sign(a: &ZdAction, l: &LyapunovData, x: &IntMatrix) -> bool {
    let Some(t) = log_coordinates(l, x) else { return false };
    if t.iter().any(|v| (v - v.round()).abs() > LOG_COORDINATE_TOLERANCE) {
        return false;
    }
    let k: Vec<i64> = t.iter().map(|v| v.round() as i64).collect();
    let y = a.rho(&k);
    *x == y || *x == -&y
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum MaximalityVerdict {
    Maximal { search_box: i64 },
    NotMaximal { witness: Vec<Vec<i64>>, search_box: i64 },
    NotVerified { reason: String },
}

pub fn is_maximal_cartan(a: &ZdAction, search_box: i64, exec: Execution) -> MaximalityVerdict {
    if !a.is_cartan() {
        return MaximalityVerdict::NotVerified { reason: "not a Cartan action".into() };
    }
    let Some(l) = irreducible_lyapunov(a) else {
        return MaximalityVerdict::NotVerified { reason: "joint spectrum is not simple".into() };
    };
    let c = commutant_z_basis(a);
    let torsion = match torsion_elements(&c, exec) {
        Ok(t) => t,
        Err(e) => return MaximalityVerdict::NotVerified { reason: e.to_string() },
    };
    if !torsion.is_plus_minus_identity() {
        let n = a.dim();
        let extra =
            torsion.elements.iter().find(|(x, _)| *x != IntMatrix::identity(n) && *x != IntMatrix::scalar(n, -1));
        return match extra {
            Some((x, _)) => MaximalityVerdict::NotMaximal {
                witness: x.to_i64_rows().unwrap_or_default(),
                search_box: torsion.search_box,
            },
            None => MaximalityVerdict::NotVerified { reason: "torsion search did not find ±I".into() },
        };
    }
    let units = match unit_search(&c, search_box, exec) {
        Ok(u) => u,
        Err(e) => return MaximalityVerdict::NotVerified { reason: e.to_string() },
    };
    match units.iter().find(|x| !in_action_up_to_sign(a, &l, x)) {
        Some(x) => MaximalityVerdict::NotMaximal { witness: x.to_i64_rows().unwrap_or_default(), search_box },
        None => MaximalityVerdict::Maximal { search_box },
    }
}

/// `[⟨units⟩·α : α]` from rationally reconstructed log coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FreeIndex {
    pub index: BigInt,
    /// Rank of the log lattice of the discovered units together with the generators.
    pub free_rank: usize,
    /// Log coordinates (in generator units) of a basis of the discovered free part.
    pub basis: Vec<Vec<String>>,
}

pub fn free_index(a: &ZdAction, units: &[IntMatrix]) -> Result<FreeIndex> {
    let l = irreducible_lyapunov(a).ok_or_else(|| Error::Unsupported("joint spectrum is not simple".into()))?;
    let d = a.rank();
    let mut rows: Vec<Vec<BigRational>> =
        (0..d).map(|i| (0..d).map(|j| BigRational::from_integer(BigInt::from((i == j) as i64))).collect()).collect();
    let mut all_logs: Vec<Vec<f64>> = l.exponents.to_vec();
    all_logs = (0..d).map(|i| all_logs.iter().map(|r| r[i]).collect()).collect();
    for x in units {
        let logs: Vec<f64> = joint_eigenvalues(&l, x).iter().map(|z| z.norm().ln()).collect();
        all_logs.push(logs);
        let Some(t) = log_coordinates(&l, x) else { continue };
        let mut row = Vec::with_capacity(d);
        for v in t {
            let (p, q) =
                rational_reconstruct(v, crate::action::MAX_RECONSTRUCTION_DENOMINATOR, LOG_COORDINATE_TOLERANCE)
                    .ok_or_else(|| Error::Numeric(format!("log coordinate {v} has no small rational form")))?;
            row.push(BigRational::new(BigInt::from(p), BigInt::from(q)));
        }
        rows.push(row);
    }
    let m = RatMatrix::from_rows(&rows)?;
    let den = m.common_denominator();
    let scaled = m.scale(&BigRational::from_integer(den.clone())).to_int().expect("cleared");
    let h = hnf_basis(&scaled);
    let covol = h.det()?.abs();
    let index = den.pow(d as u32) / covol;
    let hb = RatMatrix::from(&h).scale(&BigRational::new(BigInt::one(), den));
    let basis = (0..hb.rows()).map(|i| hb.row(i).iter().map(|v| v.to_string()).collect()).collect();
    Ok(FreeIndex { index, free_rank: numeric_rank(&all_logs, 1e-8), basis })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AffineReport {
    pub commutant_rank: usize,
    pub fix_order: String,
    pub fix_invariant_factors: Vec<String>,
    pub torsion: Vec<Vec<Vec<i64>>>,
    pub torsion_complete: bool,
    pub unit_search_box: i64,
    pub units_found: usize,
    pub free: Option<FreeIndex>,
    /// `|torsion(Z(α))| · |Fix(α)|`.
    pub affine_torsion_order: String,
    /// `[Z(α) : α] = |torsion| · free index`.
    pub centralizer_index: Option<String>,
    /// `[Z_Aff(α) : α] = [Z(α) : α] · |Fix(α)|`.
    pub affine_index: Option<String>,
    /// Every discovered unit and torsion element fixes each point of `Fix(α)`.
    pub direct_product_verified: bool,
    pub structure: String,
}

fn fixes_all(points: &FixedPoints, x: &IntMatrix) -> bool {
    points.points.iter().all(|p| {
        let n = p.len();
        (0..n).all(|j| {
            let v =
                (0..n).fold(BigRational::zero(), |acc, i| acc + &p[i] * BigRational::from_integer(x.get(i, j).clone()));
            (v - &p[j]).is_integer()
        })
    })
}

pub fn affine_report(a: &ZdAction, search_box: i64, exec: Execution) -> Result<AffineReport> {
    let fix = a.fixed_points()?;
    let c = commutant_z_basis(a);
    let torsion = torsion_elements(&c, exec)?;
    let units = unit_search(&c, search_box, exec)?;
    let free = irreducible_lyapunov(a).map(|_| free_index(a, &units)).transpose()?;
    let t = BigInt::from(torsion.order());
    let affine_torsion_order = &t * &fix.order;
    let centralizer_index = free.as_ref().map(|f| &f.index * &t);
    let affine_index = centralizer_index.as_ref().map(|ci| ci * &fix.order);
    let listed = !fix.points.is_empty();
    let direct_product_verified =
        listed && units.iter().all(|x| fixes_all(&fix, x)) && torsion.elements.iter().all(|(x, _)| fixes_all(&fix, x));
    let mut structure = match &free {
        Some(f) => format!("Z^{}", f.free_rank),
        None => "Z^?".to_string(),
    };
    if torsion.order() > 1 {
        structure.push_str(&format!(" x Z/{}", torsion.order()));
    }
    for q in &fix.invariant_factors {
        structure.push_str(&format!(" x Z/{q}"));
    }
    if !direct_product_verified {
        structure.push_str(" (semidirect with Fix)");
    }
    Ok(AffineReport {
        commutant_rank: c.rank(),
        fix_order: fix.order.to_string(),
        fix_invariant_factors: fix.invariant_factors.iter().map(|x| x.to_string()).collect(),
        torsion: torsion.elements.iter().map(|(x, _)| x.to_i64_rows().unwrap_or_default()).collect(),
        torsion_complete: torsion.complete,
        unit_search_box: search_box,
        units_found: units.len(),
        free,
        affine_torsion_order: affine_torsion_order.to_string(),
        centralizer_index: centralizer_index.map(|x| x.to_string()),
        affine_index: affine_index.map(|x| x.to_string()),
        direct_product_verified,
        structure,
    })
}

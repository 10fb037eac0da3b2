//! Conjugacy over Q and Z, cyclicity, centralizer transitivity, Latimer–MacDuffee ideal
//! classes, time changes and pairwise comparison.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::action::{search_vectors, ConditionR, IrreducibilityVerdict, ZdAction};
use crate::centralizer::{
    commutant_z_basis, intertwiner_basis, is_maximal_cartan, noncommuting_pair, unit_search, CommutantBasis,
    MaximalityVerdict, DEFAULT_UNIT_BOX, MAX_SEARCH_CANDIDATES,
};
use crate::error::{Error, Result};
use crate::exec::{box_point, box_size, find_first, Execution};
use crate::linalg::{hnf_basis, lattice_reduce, short_vectors, IntMatrix, QuadraticForm};
use crate::numberfield::{Field, LatticeBasis, NFElement, NumberField};
use crate::numeric::numeric_rank;
use crate::poly::is_irreducible_q;

pub const DEFAULT_Z_CONJUGACY_BOX: i64 = 5;
pub const INTERTWINER_SEARCH_BOX: i64 = 10;
pub const CYCLIC_VECTOR_BOX: i64 = 5;
pub const TRANSITIVITY_BOX: i64 = 3;
pub const OBSTRUCTION_PRIMES: [u64; 4] = [2, 3, 5, 7];
const SHORT_VECTOR_LIMIT: usize = 2_000_000;
const CYCLIC_VECTOR_CANDIDATES: usize = 20_000;
const MOD_P_VECTOR_LIMIT: u64 = 200_000;
// modular spans this small are cheaper than the integer vector search, so they run first
const QUICK_MOD_P_VECTORS: u64 = 5_000;
const TIME_CHANGE_TOLERANCE: f64 = 1e-6;
const ENTROPY_GRID: i64 = 3;
pub const ENTROPY_TOLERANCE: f64 = 1e-8;

fn matrix_rows(x: &IntMatrix) -> Vec<Vec<String>> {
    x.to_rows().iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect()
}

fn largest_box(rank: usize, wanted: i64) -> i64 {
    let mut b = wanted;
    while b > 0 && box_size(rank, b) > MAX_SEARCH_CANDIDATES {
        b -= 1;
    }
    b
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum QConjugacy {
    /// `V A_i V⁻¹ = B_i`.
    Conjugate {
        v: Vec<Vec<String>>,
    },
    NotConjugate {
        reason: String,
    },
    NotVerified {
        reason: String,
    },
}

impl QConjugacy {
    pub fn is_conjugate(&self) -> bool {
        matches!(self, QConjugacy::Conjugate { .. })
    }

    pub fn conjugator(&self) -> Option<IntMatrix> {
        match self {
            QConjugacy::Conjugate { v } => {
                let rows: Vec<Vec<BigInt>> =
                    v.iter().map(|r| r.iter().map(|x| x.parse().expect("integer")).collect()).collect();
                IntMatrix::from_rows(&rows).ok()
            }
            _ => None,
        }
    }
}

fn same_shape(a: &ZdAction, b: &ZdAction) -> Option<String> {
    if a.dim() != b.dim() {
        return Some(format!("tori of different dimension ({} vs {})", a.dim(), b.dim()));
    }
    if a.rank() != b.rank() {
        return Some(format!("groups of different rank ({} vs {})", a.rank(), b.rank()));
    }
    None
}

/// Integer intertwiner `V` with `V A_i = B_i V` and `det V ≠ 0`.
pub fn conjugate_over_q(a: &ZdAction, b: &ZdAction) -> QConjugacy {
    if let Some(reason) = same_shape(a, b) {
        return QConjugacy::NotConjugate { reason };
    }
    for (i, (ga, gb)) in a.generators().iter().zip(b.generators()).enumerate() {
        if let (Ok(fa), Ok(fb)) = (ga.charpoly(), gb.charpoly()) {
            if fa != fb {
                return QConjugacy::NotConjugate {
                    reason: format!("generator {i} has characteristic polynomials {fa} and {fb}"),
                };
            }
        }
    }
    let lattice = intertwiner_basis(a.generators(), b.generators());
    if lattice.rank() == 0 {
        return QConjugacy::NotConjugate { reason: "no nonzero intertwiner".into() };
    }
    let nonsingular = |x: &IntMatrix| x.det().is_ok_and(|d| !d.is_zero());
    if a.is_irreducible(crate::action::DEFAULT_SEARCH_BOX).is_irreducible() {
        // the kernel of an intertwiner is an invariant rational subspace
        let v = lattice.basis[0].clone();
        debug_assert!(nonsingular(&v));
        return QConjugacy::Conjugate { v: matrix_rows(&v) };
    }
    let reduced = lattice.reduced().unwrap_or(lattice);
    let r = reduced.rank();
    let bound = largest_box(r, INTERTWINER_SEARCH_BOX);
    let hit = (0..box_size(r, bound)).map(|i| box_point(i, r, bound)).find_map(|c| {
        let x = reduced.element(&c);
        nonsingular(&x).then_some(x)
    });
    match hit {
        Some(v) => QConjugacy::Conjugate { v: matrix_rows(&v) },
        None => {
            QConjugacy::NotVerified { reason: format!("no invertible intertwiner with coefficients up to {bound}") }
        }
    }
}

/// `X` over `F_2` with `X² ≡ m (mod 2)`, by exhausting all `2^{n²}` matrices.
pub fn square_root_mod2(m: &IntMatrix) -> Result<Option<IntMatrix>> {
    let n = m.rows();
    if n > 4 {
        return Err(Error::Unsupported("square test mod 2 needs n ≤ 4".into()));
    }
    let bits = |x: &[u8]| -> u16 { x.iter().enumerate().fold(0, |acc, (i, &b)| acc | ((b as u16) << i)) };
    let target: Vec<u8> = m.entries().iter().map(|v| num_integer::Integer::is_odd(v) as u8).collect();
    let target = bits(&target);
    let nn = n * n;
    for code in 0u32..(1u32 << nn) {
        let x = |i: usize, j: usize| (code >> (i * n + j)) & 1;
        let mut sq = 0u16;
        for i in 0..n {
            for j in 0..n {
                let v = (0..n).fold(0, |acc, k| acc ^ (x(i, k) & x(k, j)));
                sq |= (v as u16) << (i * n + j);
            }
        }
        if sq == target {
            let entries = (0..nn).map(|k| BigInt::from((code >> k) & 1)).collect();
            return Ok(Some(IntMatrix::new(n, n, entries)?));
        }
    }
    Ok(None)
}

pub fn is_square_mod2(m: &IntMatrix) -> Result<bool> {
    Ok(square_root_mod2(m)?.is_some())
}

/// HNF basis of the smallest lattice containing `start` and stable under every generator
/// and inverse.
pub fn orbit_lattice(a: &ZdAction, start: &IntMatrix) -> IntMatrix {
    let mats: Vec<IntMatrix> =
        a.generators().iter().flat_map(|g| [g.clone(), g.inverse_unimodular().expect("validated action")]).collect();
    let mut l = hnf_basis(start);
    loop {
        let mut parts = vec![l.clone()];
        parts.extend(mats.iter().map(|m| &l * m));
        let refs: Vec<&IntMatrix> = parts.iter().collect();
        let next = hnf_basis(&IntMatrix::vstack(&refs).expect("same width"));
        if next == l {
            return l;
        }
        l = next;
    }
}

fn lattice_index_of(l: &IntMatrix, n: usize) -> Option<BigInt> {
    (l.rows() == n).then(|| l.det().expect("square").abs())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum CyclicityCertificate {
    /// `det(v, vW, vW²)` vanishes identically mod `prime`; coefficients in graded-lex order
    /// `m1³, m1²m2, m1²m3, m1m2², m1m2m3, m1m3², m2³, m2²m3, m2m3², m3³`.
    CubicForm { prime: u64, coefficients: Vec<String>, witness: Vec<i64> },
    /// No vector of `F_p^n` generates `F_p^n` under the action.
    ModP { prime: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Cyclicity {
    Cyclic { witness: Vec<i64> },
    NonCyclic { certificate: CyclicityCertificate },
    NotVerified { reason: String },
}

impl Cyclicity {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Cyclicity::Cyclic { .. } => Some(true),
            Cyclicity::NonCyclic { .. } => Some(false),
            Cyclicity::NotVerified { .. } => None,
        }
    }
}

/// Coefficients of `F(m) = det(m, mW, mW²)` in graded-lex order.
pub fn cubic_form(w: &IntMatrix) -> Result<Vec<BigInt>> {
    if w.rows() != 3 {
        return Err(Error::Shape("the cubic form needs a 3 x 3 matrix".into()));
    }
    let w2 = w * w;
    let e = IntMatrix::identity(3);
    let monomials: Vec<[usize; 3]> = {
        let mut v = Vec::new();
        for i in 0..3 {
            for j in i..3 {
                for k in j..3 {
                    v.push([i, j, k]);
                }
            }
        }
        v
    };
    let mut coeffs = vec![BigInt::zero(); monomials.len()];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let rows = vec![e.row(i).to_vec(), w.row(j).to_vec(), w2.row(k).to_vec()];
                let d = IntMatrix::from_rows(&rows)?.det()?;
                let mut key = [i, j, k];
                key.sort_unstable();
                let pos = monomials.iter().position(|m| *m == key).expect("all monomials listed");
                coeffs[pos] += d;
            }
        }
    }
    Ok(coeffs)
}

/// True iff every generator is an integer polynomial in `w`.
fn ring_generated_by(a: &ZdAction, w: &IntMatrix) -> bool {
    let c = CommutantBasis { basis: (0..a.dim()).map(|k| w.pow(k as u32)).collect() };
    a.generators().iter().all(|g| c.coordinates_of(g).is_some())
}

fn rank_mod_p(rows: &mut [Vec<u64>], p: u64) -> usize {
    let n = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..rows.len()).find(|&i| !rows[i][col].is_multiple_of(p)) else { continue };
        rows.swap(rank, piv);
        let inv = mod_pow(rows[rank][col], p - 2, p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != 0 {
                let f = rows[i][col];
                for j in 0..n {
                    rows[i][j] = (rows[i][j] + p * p - f * rows[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// True iff some `v ∈ F_p^n` spans `F_p^n` under the generators reduced mod `p`.
fn has_cyclic_vector_mod_p(a: &ZdAction, p: u64, exec: Execution) -> bool {
    let n = a.dim();
    let pb = BigInt::from(p);
    let gens: Vec<Vec<Vec<u64>>> = a
        .generators()
        .iter()
        .map(|g| {
            g.to_rows()
                .iter()
                .map(|r| r.iter().map(|x| ((x % &pb + &pb) % &pb).to_u64().expect("reduced")).collect())
                .collect()
        })
        .collect();
    let apply = |v: &[u64], m: &[Vec<u64>]| -> Vec<u64> {
        (0..n).map(|j| (0..n).fold(0, |acc, i| (acc + v[i] * m[i][j]) % p)).collect()
    };
    let total = p.pow(n as u32) as usize;
    find_first(exec, total, |code| {
        let mut c = code;
        let v: Vec<u64> = (0..n)
            .map(|_| {
                let d = (c as u64) % p;
                c /= p as usize;
                d
            })
            .collect();
        if v.iter().all(|&x| x == 0) {
            return None;
        }
        // Krylov closure over F_p
        let mut span: Vec<Vec<u64>> = vec![v];
        let mut frontier = span.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for u in &frontier {
                for g in &gens {
                    let w = apply(u, g);
                    let mut trial = span.clone();
                    trial.push(w.clone());
                    if rank_mod_p(&mut trial.clone(), p) > span.len() {
                        span.push(w.clone());
                        next.push(w);
                    }
                }
            }
            if span.len() == n {
                return Some(());
            }
            frontier = next;
        }
        None
    })
    .is_some()
}

/// Three stages: orbit-lattice witness search, modular obstruction of the cubic form (or an
/// exhaustive mod-p span test when the form does not apply), otherwise not verified.
/// For n > 3 the small mod-p span tests run before the witness search.
pub fn cyclicity(a: &ZdAction, exec: Execution) -> Cyclicity {
    let n = a.dim();
    let mut bound = CYCLIC_VECTOR_BOX;
    while bound > 1 && box_size(n, bound) > CYCLIC_VECTOR_CANDIDATES {
        bound -= 1;
    }
    let mod_p_certificate = |limit: u64, skip: u64| {
        OBSTRUCTION_PRIMES.into_iter().find(|&p| {
            let size = p.pow(n as u32);
            size <= limit && size > skip && !has_cyclic_vector_mod_p(a, p, exec)
        })
    };
    // n = 3 keeps the cubic-form certificate, which names the form that vanishes
    let quick = if n > 3 { QUICK_MOD_P_VECTORS } else { 0 };
    if let Some(prime) = mod_p_certificate(quick, 0) {
        return Cyclicity::NonCyclic { certificate: CyclicityCertificate::ModP { prime } };
    }
    let candidates = search_vectors(n, bound);
    let hit = find_first(exec, candidates.len(), |i| {
        let v = &candidates[i];
        let start = IntMatrix::from_rows(std::slice::from_ref(v)).ok()?;
        let l = orbit_lattice(a, &start);
        lattice_index_of(&l, n).filter(|d| d.is_one()).map(|_| ())
    });
    if let Some((i, ())) = hit {
        return Cyclicity::Cyclic { witness: candidates[i].clone() };
    }
    if n == 3 {
        if let IrreducibilityVerdict::Irreducible { witness } = a.is_irreducible(crate::action::DEFAULT_SEARCH_BOX) {
            let w = a.rho(&witness);
            if ring_generated_by(a, &w) {
                if let Ok(form) = cubic_form(&w) {
                    for p in OBSTRUCTION_PRIMES {
                        let pb = BigInt::from(p);
                        if form.iter().all(|c| (c % &pb).is_zero()) {
                            return Cyclicity::NonCyclic {
                                certificate: CyclicityCertificate::CubicForm {
                                    prime: p,
                                    coefficients: form.iter().map(|c| c.to_string()).collect(),
                                    witness,
                                },
                            };
                        }
                    }
                }
                return Cyclicity::NotVerified {
                    reason: format!("no cyclic vector with entries up to {bound} and no modular obstruction"),
                };
            }
        }
    }
    if let Some(prime) = mod_p_certificate(MOD_P_VECTOR_LIMIT, quick) {
        return Cyclicity::NonCyclic { certificate: CyclicityCertificate::ModP { prime } };
    }
    Cyclicity::NotVerified { reason: format!("no cyclic vector with entries up to {bound} and no modular obstruction") }
}

/// Full lattice in `K` together with its norm relative to `Z[λ]`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealLattice {
    pub lattice: LatticeBasis,
}

impl IdealLattice {
    pub fn new(lattice: LatticeBasis) -> Result<Self> {
        if !lattice.is_module_for(&NFElement::generator(lattice.field())) {
            return Err(Error::Domain("lattice is not a Z[λ]-module".into()));
        }
        Ok(IdealLattice { lattice })
    }

    pub fn norm(&self) -> BigRational {
        self.lattice.covolume()
    }

    pub fn field(&self) -> &Field {
        self.lattice.field()
    }
}

/// A nonzero vector in the kernel of a square matrix over `K`.
fn kernel_vector(mut rows: Vec<Vec<NFElement>>) -> Result<Vec<NFElement>> {
    let n = rows.len();
    let field = rows[0][0].field().clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inv()?;
        rows[r] = rows[r].iter().map(|x| x * &inv).collect();
        for i in 0..n {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                rows[i] = rows[i].iter().zip(&rows[r]).map(|(x, y)| x - &(&f * y)).collect();
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..n).find(|c| !pivots.contains(c)).ok_or_else(|| Error::Domain("matrix is nonsingular".into()))?;
    let mut v = vec![NFElement::zero(&field); n];
    v[free] = NFElement::one(&field);
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = -&rows[row][free];
    }
    Ok(v)
}

/// Column eigenvector `m v = λ v` over `K`, scaled into `Z[λ]^n`.
pub fn eigenvector_in_field(m: &IntMatrix, field: &Field) -> Result<Vec<NFElement>> {
    let charpoly = m.charpoly()?;
    if &charpoly != field.polynomial() {
        return Err(Error::Domain(format!("characteristic polynomial {charpoly} differs from {}", field.polynomial())));
    }
    let n = m.rows();
    let lam = NFElement::generator(field);
    let rows: Vec<Vec<NFElement>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = NFElement::from_integer(field, m.get(i, j).clone());
                    if i == j {
                        &e - &lam
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    let v = kernel_vector(rows)?;
    let den = v
        .iter()
        .flat_map(|x| x.coeffs().iter())
        .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let s = BigRational::from_integer(den);
    Ok(v.iter().map(|x| x.scale(&s)).collect())
}

/// Latimer–MacDuffee ideal: the Z-span of the entries of an eigenvector of `m`.
pub fn lm_ideal_of_matrix(m: &IntMatrix, field: &Field) -> Result<IdealLattice> {
    let v = eigenvector_in_field(m, field)?;
    IdealLattice::new(LatticeBasis::from_generators(field, &v)?)
}

/// `u ∈ K` with `x v = u v` for a commuting matrix `x` and eigenvector `v`.
pub fn eigenvalue_on(x: &IntMatrix, v: &[NFElement]) -> Result<NFElement> {
    let field = v[0].field().clone();
    let k = v.iter().position(|e| !e.is_zero()).ok_or_else(|| Error::Domain("zero eigenvector".into()))?;
    let xv: Vec<NFElement> = (0..v.len())
        .map(|i| {
            (0..v.len()).fold(NFElement::zero(&field), |acc, j| {
                &acc + &v[j].scale(&BigRational::from_integer(x.get(i, j).clone()))
            })
        })
        .collect();
    let u = &xv[k] * &v[k].inv()?;
    if xv.iter().zip(v).any(|(a, b)| *a != &u * b) {
        return Err(Error::Domain("matrix does not preserve the eigenline".into()));
    }
    Ok(u)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum IdealEquivalence {
    /// `x·I = J`.
    Equivalent {
        multiplier: String,
    },
    Inequivalent {
        certificate: String,
    },
    NotVerified {
        reason: String,
    },
}

impl IdealEquivalence {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            IdealEquivalence::Equivalent { .. } => Some(true),
            IdealEquivalence::Inequivalent { .. } => Some(false),
            IdealEquivalence::NotVerified { .. } => None,
        }
    }
}

/// Decides `J = x·I` for some `x ∈ K^×`.
///
/// Any such `x` can be moved by the given units into the box where
/// `|φ_k(x)| ≤ ν^{1/n} e^{c_k}`, `ν = N(J)/N(I)`, `c_k = ½ Σ_i |log|φ_k(u_i)||`. Enumerating
/// `H = (J : I)` under the matching weighted Minkowski form therefore either finds `x` or
/// certifies that none exists.
pub fn ideal_equivalent(i: &IdealLattice, j: &IdealLattice, units: &[NFElement]) -> IdealEquivalence {
    let field = i.field().clone();
    let n = field.degree();
    let (ri, rj) = match (i.lattice.multiplier_ring(), j.lattice.multiplier_ring()) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return IdealEquivalence::NotVerified { reason: e.to_string() },
    };
    if ri != rj {
        return IdealEquivalence::Inequivalent { certificate: "multiplier rings differ".into() };
    }
    let logs: Vec<Vec<f64>> = units.iter().map(|u| u.embeddings().iter().map(|z| z.norm().ln()).collect()).collect();
    if numeric_rank(&logs, 1e-8) < field.unit_rank() {
        return IdealEquivalence::NotVerified { reason: "units do not have full Dirichlet rank".into() };
    }
    let h = match i.lattice.colon_into(&j.lattice) {
        Ok(h) => h,
        Err(e) => return IdealEquivalence::NotVerified { reason: e.to_string() },
    };
    let nu = j.norm() / i.norm();
    let nu_f = nu.to_f64().unwrap_or(f64::NAN);
    let weights: Vec<f64> = (0..n)
        .map(|k| {
            let c: f64 = 0.5 * logs.iter().map(|l| l[k].abs()).sum::<f64>();
            (-2.0 * c).exp()
        })
        .collect();
    let bound = n as f64 * nu_f.powf(2.0 / n as f64);
    let form = QuadraticForm::Gram(field.weighted_t2_gram(&weights));
    let reduced = match lattice_reduce(h.coords(), &form) {
        Ok(r) => r,
        Err(e) => return IdealEquivalence::NotVerified { reason: e.to_string() },
    };
    let vectors = match short_vectors(&reduced.gram, bound, SHORT_VECTOR_LIMIT) {
        Ok(v) => v,
        Err(e) => return IdealEquivalence::NotVerified { reason: e.to_string() },
    };
    let basis = LatticeBasis::new(&field, reduced.basis.clone()).expect("reduced basis of a full lattice");
    let elems = basis.elements();
    for (coeffs, _) in &vectors {
        let x = coeffs
            .iter()
            .zip(&elems)
            .fold(NFElement::zero(&field), |acc, (&c, e)| &acc + &e.scale(&BigRational::from_integer(BigInt::from(c))));
        if x.norm().abs() == nu && i.lattice.scaled_by(&x).is_ok_and(|xi| xi == j.lattice) {
            return IdealEquivalence::Equivalent { multiplier: x.to_string() };
        }
    }
    IdealEquivalence::Inequivalent {
        certificate: format!(
            "exhaustive enumeration of {} vectors of (J : I) with weighted norm ≤ {bound:.6} has no element of norm {nu}",
            vectors.len()
        ),
    }
}

/// Field, LM ideal and generator eigenvalues for an irreducible action via a witness element.
#[derive(Clone, Debug)]
pub struct IdealData {
    pub witness: Vec<i64>,
    pub field: Field,
    pub ideal: IdealLattice,
    pub units: Vec<NFElement>,
}

pub fn ideal_data(a: &ZdAction, witness: &[i64]) -> Result<IdealData> {
    let w = a.rho(witness);
    let f = w.charpoly()?;
    let field = NumberField::new(f)?;
    let v = eigenvector_in_field(&w, &field)?;
    let ideal = IdealLattice::new(LatticeBasis::from_generators(&field, &v)?)?;
    let units = a.generators().iter().map(|g| eigenvalue_on(g, &v)).collect::<Result<Vec<_>>>()?;
    Ok(IdealData { witness: witness.to_vec(), field, ideal, units })
}

fn irreducible_witness(a: &ZdAction) -> Option<Vec<i64>> {
    match a.is_irreducible(crate::action::DEFAULT_SEARCH_BOX) {
        IrreducibilityVerdict::Irreducible { witness } => Some(witness),
        _ => None,
    }
}

/// Compares LM ideals of `ρ_a(w)` and `ρ_b(w)` for a common witness `w`.
pub fn ideal_class_comparison(a: &ZdAction, b: &ZdAction) -> Option<IdealEquivalence> {
    let w = irreducible_witness(a)?;
    let da = ideal_data(a, &w).ok()?;
    let fb = b.rho(&w).charpoly().ok()?;
    if &fb != da.field.polynomial() {
        return None;
    }
    let v = eigenvector_in_field(&b.rho(&w), &da.field).ok()?;
    let ib = IdealLattice::new(LatticeBasis::from_generators(&da.field, &v).ok()?).ok()?;
    Some(ideal_equivalent(&da.ideal, &ib, &da.units))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Transitivity {
    Transitive { witness: Vec<i64> },
    NotTransitive { certificate: String },
    NotVerified { reason: String },
    Inapplicable { reason: String },
}

impl Transitivity {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Transitivity::Transitive { .. } => Some(true),
            Transitivity::NotTransitive { .. } | Transitivity::Inapplicable { .. } => Some(false),
            Transitivity::NotVerified { .. } => None,
        }
    }
}

/// Whether `Z^n = v·C(α)` for some `v`: searched directly, refuted by an ideal-class
/// certificate (`Z^n ≅ I` is cyclic over `C(α) ≅ (I : I)` iff `I` is principal for it).
pub fn centralizer_transitive(a: &ZdAction) -> Transitivity {
    let Some(w) = irreducible_witness(a) else {
        return Transitivity::Inapplicable { reason: "action is not irreducible".into() };
    };
    let n = a.dim();
    let c = commutant_z_basis(a);
    for v in search_vectors(n, TRANSITIVITY_BOX) {
        let rows: Vec<Vec<BigInt>> = c
            .basis
            .iter()
            .map(|x| {
                let vb: Vec<BigInt> = v.iter().map(|&t| BigInt::from(t)).collect();
                x.left_mul_vec(&vb)
            })
            .collect();
        let l = hnf_basis(&IntMatrix::from_rows(&rows).expect("rectangular"));
        if lattice_index_of(&l, n).is_some_and(|d| d.is_one()) {
            return Transitivity::Transitive { witness: v };
        }
    }
    let data = match ideal_data(a, &w) {
        Ok(d) => d,
        Err(e) => return Transitivity::NotVerified { reason: e.to_string() },
    };
    let order = match data.ideal.lattice.multiplier_ring() {
        Ok(o) => o,
        Err(e) => return Transitivity::NotVerified { reason: e.to_string() },
    };
    let order = IdealLattice { lattice: order };
    match ideal_equivalent(&order, &data.ideal, &data.units) {
        IdealEquivalence::Inequivalent { certificate } => Transitivity::NotTransitive {
            certificate: format!("module is not principal over its multiplier ring: {certificate}"),
        },
        IdealEquivalence::Equivalent { multiplier } => Transitivity::NotVerified {
            reason: format!("module is principal (generator {multiplier}) but no generator in the search box"),
        },
        IdealEquivalence::NotVerified { reason } => Transitivity::NotVerified { reason },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ZConjugacy {
    Conjugate { v: Vec<Vec<String>> },
    NotConjugate { obstruction: String },
    NotVerified { reason: String },
}

impl ZConjugacy {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            ZConjugacy::Conjugate { .. } => Some(true),
            ZConjugacy::NotConjugate { .. } => Some(false),
            ZConjugacy::NotVerified { .. } => None,
        }
    }
}

/// Conjugacy-invariant obstructions, in order: rational conjugacy, fixed-point order,
/// squares mod 2, cyclicity, LM ideal class.
pub fn z_obstruction(a: &ZdAction, b: &ZdAction, exec: Execution) -> Option<String> {
    if let Some(reason) = same_shape(a, b) {
        return Some(reason);
    }
    if let QConjugacy::NotConjugate { reason } = conjugate_over_q(a, b) {
        return Some(format!("not conjugate over Q: {reason}"));
    }
    if let (Ok(fa), Ok(fb)) = (a.fixed_points(), b.fixed_points()) {
        if fa.order != fb.order {
            return Some(format!("fixed-point orders differ ({} vs {})", fa.order, fb.order));
        }
    }
    if a.dim() <= 4 {
        for (i, (ga, gb)) in a.generators().iter().zip(b.generators()).enumerate() {
            if let (Ok(sa), Ok(sb)) = (is_square_mod2(ga), is_square_mod2(gb)) {
                if sa != sb {
                    let (sq, non) = if sa { ("first", "second") } else { ("second", "first") };
                    return Some(format!(
                        "generator {i} of the {sq} action is a square mod 2, of the {non} action it is not"
                    ));
                }
            }
        }
    }
    if let (Some(ca), Some(cb)) = (cyclicity(a, exec).as_bool(), cyclicity(b, exec).as_bool()) {
        if ca != cb {
            return Some("one action is cyclic and the other is not".into());
        }
    }
    if let Some(IdealEquivalence::Inequivalent { certificate }) = ideal_class_comparison(a, b) {
        return Some(format!("ideal classes differ: {certificate}"));
    }
    None
}

/// Bounded search for a unimodular intertwiner, then conjugacy-invariant obstructions.
pub fn conjugate_over_z(a: &ZdAction, b: &ZdAction, bound: i64, exec: Execution) -> ZConjugacy {
    if same_shape(a, b).is_none() {
        let lattice = intertwiner_basis(a.generators(), b.generators());
        if lattice.rank() > 0 {
            let r = lattice.rank();
            let used = largest_box(r, bound);
            if let Ok(units) = unit_search(&lattice, used, exec) {
                if let Some(v) = units.first() {
                    return ZConjugacy::Conjugate { v: matrix_rows(v) };
                }
            }
        }
    }
    match z_obstruction(a, b, exec) {
        Some(obstruction) => ZConjugacy::NotConjugate { obstruction },
        None => ZConjugacy::NotVerified {
            reason: format!("no unimodular intertwiner with coefficients up to {bound} and no obstruction"),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum TimeChange {
    /// `b ≅_Q a∘C` with rows of `b`'s spectrum matched to `a`'s by `permutation`.
    Equivalent {
        permutation: Vec<usize>,
        c: Vec<Vec<i64>>,
    },
    NotEquivalent {
        permutations_checked: usize,
    },
    NotVerified {
        reason: String,
    },
}

impl TimeChange {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            TimeChange::Equivalent { .. } => Some(true),
            TimeChange::NotEquivalent { .. } => Some(false),
            TimeChange::NotVerified { .. } => None,
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Least-squares solution `X` of `M X = Y` (`M` is `n × d`, `Y` is `n × d`).
fn least_squares(m: &[Vec<f64>], y: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let d = m[0].len();
    let mut g = vec![vec![0.0; 2 * d]; d];
    for i in 0..d {
        for j in 0..d {
            g[i][j] = m.iter().map(|r| r[i] * r[j]).sum();
            g[i][d + j] = m.iter().zip(y).map(|(r, s)| r[i] * s[j]).sum();
        }
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
                for j in c..2 * d {
                    g[i][j] -= f * g[c][j];
                }
            }
        }
    }
    Some((0..d).map(|i| (0..d).map(|j| g[i][d + j] / g[i][i]).collect()).collect())
}

/// Exponent rows matched under every permutation of the joint spectrum; numerics propose `C`,
/// exact rational conjugacy of `a∘C` and `b` confirms it.
pub fn time_change_equivalent_q(a: &ZdAction, b: &ZdAction) -> TimeChange {
    if let Some(reason) = same_shape(a, b) {
        return TimeChange::NotVerified { reason };
    }
    let (la, lb) = match (a.lyapunov_data(), b.lyapunov_data()) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return TimeChange::NotVerified { reason: e.to_string() },
    };
    if la.exponents.len() != lb.exponents.len() {
        return TimeChange::NotEquivalent { permutations_checked: 0 };
    }
    let d = a.rank();
    if numeric_rank(&la.exponents, 1e-8) < d {
        return TimeChange::NotVerified { reason: "Lyapunov exponents do not span R^d".into() };
    }
    let perms = permutations(la.exponents.len());
    for perm in &perms {
        if perm.iter().enumerate().any(|(k, &p)| la.multiplicities[p] != lb.multiplicities[k]) {
            continue;
        }
        let m: Vec<Vec<f64>> = perm.iter().map(|&p| la.exponents[p].clone()).collect();
        let Some(x) = least_squares(&m, &lb.exponents) else { continue };
        // X[i][j] = C_{j i}
        let c: Vec<Vec<i64>> = (0..d).map(|j| (0..d).map(|i| x[i][j].round() as i64).collect()).collect();
        let close = (0..d).all(|i| (0..d).all(|j| (x[i][j] - c[j][i] as f64).abs() < TIME_CHANGE_TOLERANCE));
        let fits = m.iter().zip(&lb.exponents).all(|(row, target)| {
            (0..d).all(|j| {
                let pred: f64 = (0..d).map(|i| row[i] * c[j][i] as f64).sum();
                (pred - target[j]).abs() < TIME_CHANGE_TOLERANCE * (1.0 + target[j].abs())
            })
        });
        if !close || !fits {
            continue;
        }
        let Ok(changed) = a.time_change(&c) else { continue };
        if conjugate_over_q(&changed, b).is_conjugate() {
            return TimeChange::Equivalent { permutation: perm.clone(), c };
        }
    }
    TimeChange::NotEquivalent { permutations_checked: perms.len() }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyComparison {
    pub equal: bool,
    pub max_deviation: f64,
}

pub fn compare_entropy(a: &ZdAction, b: &ZdAction) -> Result<EntropyComparison> {
    if a.rank() != b.rank() {
        return Ok(EntropyComparison { equal: false, max_deviation: f64::INFINITY });
    }
    let mut max_deviation = 0.0f64;
    for v in search_vectors(a.rank(), ENTROPY_GRID) {
        max_deviation = max_deviation.max((a.entropy_function(&v)? - b.entropy_function(&v)?).abs());
    }
    Ok(EntropyComparison { equal: max_deviation <= ENTROPY_TOLERANCE, max_deviation })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ActionSummary {
    pub dim: usize,
    pub rank: usize,
    pub commutant_rank: usize,
    pub commutant_abelian: bool,
    pub fixed_points: Option<String>,
    pub cyclicity: Cyclicity,
    pub maximality: MaximalityVerdict,
    pub condition_r: ConditionR,
}

pub fn summarize(a: &ZdAction, unit_box: i64, exec: Execution) -> ActionSummary {
    let c = commutant_z_basis(a);
    ActionSummary {
        dim: a.dim(),
        rank: a.rank(),
        commutant_rank: c.rank(),
        commutant_abelian: noncommuting_pair(&c).is_none(),
        fixed_points: a.fixed_points().ok().map(|f| f.order.to_string()),
        cyclicity: cyclicity(a, exec),
        maximality: is_maximal_cartan(a, unit_box, exec),
        condition_r: a.satisfies_r(crate::action::DEFAULT_SEARCH_BOX, exec),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub first: ActionSummary,
    pub second: ActionSummary,
    pub entropy: EntropyComparison,
    pub rationally_conjugate: QConjugacy,
    pub z_conjugate: ZConjugacy,
    pub time_change_q: TimeChange,
    pub ideal_classes: Option<IdealEquivalence>,
    /// First invariant in the preferred order that separates the actions.
    pub distinguishing_invariant: Option<String>,
    /// Z-conjugate ⇒ Q-conjugate ⇒ entropy-equal.
    pub verdict_chain_holds: bool,
}

impl ComparisonReport {
    pub fn weakly_isomorphic(&self) -> bool {
        self.rationally_conjugate.is_conjugate()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CompareOptions {
    pub unit_box: i64,
    pub z_box: i64,
    pub exec: Execution,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions { unit_box: DEFAULT_UNIT_BOX, z_box: DEFAULT_Z_CONJUGACY_BOX, exec: Execution::default() }
    }
}

fn differs<T: PartialEq>(a: Option<T>, b: Option<T>) -> bool {
    matches!((a, b), (Some(x), Some(y)) if x != y)
}

fn maximal_flag(m: &MaximalityVerdict) -> Option<bool> {
    match m {
        MaximalityVerdict::Maximal { .. } => Some(true),
        MaximalityVerdict::NotMaximal { .. } => Some(false),
        MaximalityVerdict::NotVerified { .. } => None,
    }
}

pub fn compare(a: &ZdAction, b: &ZdAction, opts: CompareOptions) -> Result<ComparisonReport> {
    let first = summarize(a, opts.unit_box, opts.exec);
    let second = summarize(b, opts.unit_box, opts.exec);
    let entropy = compare_entropy(a, b)?;
    let rationally_conjugate = conjugate_over_q(a, b);
    let z_conjugate = conjugate_over_z(a, b, opts.z_box, opts.exec);
    let time_change_q = time_change_equivalent_q(a, b);
    let ideal_classes = if same_shape(a, b).is_none() { ideal_class_comparison(a, b) } else { None };

    let distinguishing_invariant = if z_conjugate.as_bool() == Some(true) {
        None
    } else if !entropy.equal {
        Some(format!("entropy function (max deviation {:.3e})", entropy.max_deviation))
    } else if !rationally_conjugate.is_conjugate() {
        let detail = if first.commutant_rank != second.commutant_rank {
            format!("commutant ranks {} vs {}", first.commutant_rank, second.commutant_rank)
        } else if first.dim != second.dim {
            format!("dimensions {} vs {}", first.dim, second.dim)
        } else {
            "no rational intertwiner".to_string()
        };
        Some(format!("rational conjugacy ({detail})"))
    } else if differs(first.fixed_points.clone(), second.fixed_points.clone()) {
        Some(format!(
            "fixed-point order ({} vs {})",
            first.fixed_points.clone().unwrap_or_default(),
            second.fixed_points.clone().unwrap_or_default()
        ))
    } else if differs(first.cyclicity.as_bool(), second.cyclicity.as_bool()) {
        Some("cyclicity".to_string())
    } else if differs(maximal_flag(&first.maximality), maximal_flag(&second.maximality)) {
        Some("maximality".to_string())
    } else if ideal_classes.as_ref().and_then(IdealEquivalence::as_bool) == Some(false) {
        Some("ideal class".to_string())
    } else {
        None
    };
    let z = z_conjugate.as_bool() == Some(true);
    let verdict_chain_holds =
        (!z || rationally_conjugate.is_conjugate()) && (!rationally_conjugate.is_conjugate() || entropy.equal);
    Ok(ComparisonReport {
        first,
        second,
        entropy,
        rationally_conjugate,
        z_conjugate,
        time_change_q,
        ideal_classes,
        distinguishing_invariant,
        verdict_chain_holds,
    })
}

/// Irreducibility of the characteristic polynomial of `m`.
pub fn has_irreducible_charpoly(m: &IntMatrix) -> bool {
    m.charpoly().ok().and_then(|f| is_irreducible_q(&f).ok()).is_some_and(|r| r.is_irreducible())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::new_action;
    use crate::poly::IntPoly;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    fn ex2a() -> (ZdAction, ZdAction) {
        (
            new_action(vec![
                m(&[&[0, 1, 0], &[0, 0, 1], &[-1, 6, -3]]),
                m(&[&[2, -4, -1], &[1, -4, -1], &[1, -5, -1]]),
            ])
            .unwrap(),
            new_action(vec![
                m(&[&[1, 2, -1], &[-1, -2, 2], &[2, 5, -2]]),
                m(&[&[1, -1, -1], &[-1, -2, -1], &[-1, -4, -2]]),
            ])
            .unwrap(),
        )
    }

    fn ex3a() -> (ZdAction, ZdAction) {
        (
            new_action(vec![m(&[&[0, 1, 0], &[0, 0, 1], &[1, 8, 2]]), m(&[&[2, 1, 0], &[0, 2, 1], &[1, 8, 4]])])
                .unwrap(),
            new_action(vec![m(&[&[-1, 2, 0], &[-1, 1, 1], &[-5, 9, 2]]), m(&[&[1, 2, 0], &[-1, 3, 1], &[-5, 9, 4]])])
                .unwrap(),
        )
    }

    #[test]
    fn rational_conjugacy_2a() {
        let (a, b) = ex2a();
        let q = conjugate_over_q(&a, &b);
        let v = q.conjugator().unwrap();
        for (ga, gb) in a.generators().iter().zip(b.generators()) {
            assert_eq!(&v * ga, gb * &v);
        }
        let paper_v = m(&[&[2, -2, -1], &[0, -3, 0], &[1, -4, -2]]);
        let lattice = intertwiner_basis(a.generators(), b.generators());
        assert!(lattice.coordinates_of(&paper_v).is_some());
        let own = conjugate_over_q(&a, &a).conjugator().unwrap();
        assert!(a.generators().iter().all(|g| own.commutes_with(g)));
    }

    #[test]
    fn squares_mod_two() {
        assert!(is_square_mod2(&IntMatrix::identity(3)).unwrap());
        assert!(!is_square_mod2(&m(&[&[0, 1, 0], &[0, 0, 1], &[1, -11, 7]])).unwrap());
        let mm = m(&[&[0, -2, 1], &[-1, -5, 3], &[-2, -9, 6]]);
        assert_eq!(&mm * &mm, m(&[&[0, 1, 0], &[-1, 0, 2], &[-3, -5, 7]]));
        assert!(is_square_mod2(&(&mm * &mm)).unwrap());
        assert!(is_square_mod2(&IntMatrix::identity(5)).is_err());
    }

    #[test]
    fn cyclicity_2a() {
        let (a, b) = ex2a();
        assert_eq!(cyclicity(&a, Execution::Sequential), Cyclicity::Cyclic { witness: vec![1, 0, 0] });
        match cyclicity(&b, Execution::Parallel) {
            Cyclicity::NonCyclic { certificate: CyclicityCertificate::CubicForm { prime, coefficients, .. } } => {
                assert_eq!(prime, 3);
                let want = ["3", "0", "18", "-9", "-9", "27", "3", "0", "-9", "3"];
                let neg: Vec<String> = want.iter().map(|s| (-s.parse::<i64>().unwrap()).to_string()).collect();
                assert!(coefficients == want || coefficients == neg, "{coefficients:?}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lm_ideals_3a() {
        let (a, b) = ex3a();
        let k = NumberField::new(IntPoly::from_i64(&[-1, -8, -2, 1])).unwrap();
        let ia = lm_ideal_of_matrix(a.generator(0), &k).unwrap();
        assert_eq!(ia.lattice, LatticeBasis::power_basis(&k));
        let ib = lm_ideal_of_matrix(b.generator(0), &k).unwrap();
        let l = LatticeBasis::from_elements(
            &k,
            &[NFElement::from_ints(&k, &[2]), NFElement::from_ints(&k, &[1, 1]), NFElement::from_ints(&k, &[1, 0, 1])],
        )
        .unwrap();
        let il = IdealLattice::new(l).unwrap();
        let units = vec![NFElement::generator(&k), NFElement::from_ints(&k, &[2, 1])];
        assert!(matches!(ideal_equivalent(&ib, &il, &units), IdealEquivalence::Equivalent { .. }));
        assert!(matches!(ideal_equivalent(&ia, &ib, &units), IdealEquivalence::Inequivalent { .. }));
        assert!(matches!(ideal_equivalent(&ia, &ia, &units), IdealEquivalence::Equivalent { .. }));
    }

    #[test]
    fn transitivity() {
        let (_, b) = ex2a();
        assert!(matches!(centralizer_transitive(&b), Transitivity::Transitive { .. }));
        let (_, b3) = ex3a();
        assert!(matches!(centralizer_transitive(&b3), Transitivity::NotTransitive { .. }));
        let id = new_action(vec![IntMatrix::identity(2)]).unwrap();
        assert_eq!(centralizer_transitive(&id).as_bool(), Some(false));
    }

    #[test]
    fn time_changes() {
        let (a, b) = ex3a();
        assert_eq!(
            time_change_equivalent_q(&a, &b),
            TimeChange::Equivalent { permutation: vec![0, 1, 2], c: vec![vec![1, 0], vec![0, 1]] }
        );
        let sq = a.time_change(&[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(matches!(time_change_equivalent_q(&a, &sq), TimeChange::Equivalent { .. }));
        let squared = new_action(vec![a.rho(&[2, 0]), a.rho(&[0, 1])]).unwrap();
        assert!(matches!(time_change_equivalent_q(&a, &squared), TimeChange::NotEquivalent { .. }));
    }

    #[test]
    fn comparison_of_2a() {
        let (a, b) = ex2a();
        let r = compare(&a, &b, CompareOptions { unit_box: 10, ..Default::default() }).unwrap();
        assert!(r.weakly_isomorphic());
        assert!(r.verdict_chain_holds);
        assert_eq!(r.distinguishing_invariant.as_deref(), Some("cyclicity"));
        let same = compare(&a, &a, CompareOptions { unit_box: 10, ..Default::default() }).unwrap();
        assert_eq!(same.z_conjugate.as_bool(), Some(true));
        assert_eq!(same.distinguishing_invariant, None);
    }
}

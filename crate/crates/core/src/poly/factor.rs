//! Squarefree decomposition, Sturm counts, irreducibility certificates and factorisation over Q.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modp::irreducible_mod_p;
use super::{IntPoly, RatPoly};
use crate::error::{Error, Result};
use crate::spectra::aberth_roots;

const MOD_P_PRIMES: [u64; 30] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109,
    113,
];

const BRUTE_FORCE_LIMIT: u128 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IrreducibilityCertificate {
    /// Degree one.
    Linear,
    /// The reduction modulo `prime` is irreducible of full degree.
    ModP { prime: u64 },
    /// No integer factor of degree `1..=n/2` with coefficients within the Mignotte bound exists.
    NoFactor { mignotte_bound: BigInt },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible(IrreducibilityCertificate),
    Reducible { factor: IntPoly },
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Irreducible(_))
    }
}

/// Yun's algorithm over Q. Returns primitive squarefree factors with their multiplicities.
pub fn squarefree_decomposition(p: &IntPoly) -> Vec<(IntPoly, usize)> {
    if p.degree() == 0 {
        return Vec::new();
    }
    let f = p.to_rat();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.divrem(&a0).expect("gcd is nonzero").0;
    let c = df.divrem(&a0).expect("gcd is nonzero").0;
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree() > 0 {
        let a = b.gcd(&d);
        let nb = b.divrem(&a).expect("nonzero").0;
        let nc = d.divrem(&a).expect("nonzero").0;
        if a.degree() > 0 {
            out.push((a.primitive_int(), i));
        }
        d = &nc - &nb.derivative();
        b = nb;
        i += 1;
    }
    out
}

fn sign_at_infinity(p: &RatPoly, positive: bool) -> i32 {
    if p.is_zero() {
        return 0;
    }
    let s = if p.leading().is_positive() { 1 } else { -1 };
    if positive || p.degree().is_multiple_of(2) {
        s
    } else {
        -s
    }
}

/// Number of distinct real roots, by a Sturm sequence.
pub fn count_real_roots(p: &IntPoly) -> usize {
    if p.degree() == 0 {
        return 0;
    }
    let mut seq = vec![p.to_rat(), p.to_rat().derivative()];
    loop {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]).expect("nonzero");
        if r.is_zero() {
            break;
        }
        seq.push(-&r);
    }
    let changes = |pos: bool| {
        let signs: Vec<i32> = seq.iter().map(|q| sign_at_infinity(q, pos)).filter(|&s| s != 0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    changes(false) - changes(true)
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Bound on the coefficients of `lc(f)·g` for any monic factor `g` of degree `k`.
fn mignotte(f: &IntPoly, k: usize) -> BigInt {
    let norm2: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let norm = norm2.sqrt() + BigInt::one();
    let binom = (0..=k).map(|j| binomial(k, j)).max().unwrap_or_else(BigInt::one);
    binom * norm
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Looks for an integer factor of degree exactly `k` among products of `k` numerical roots.
fn factor_from_roots(f: &IntPoly, roots: &[Complex64], k: usize) -> Option<IntPoly> {
    let lc = f.leading().to_f64()?;
    let bound = mignotte(f, k);
    let bound_f = bound.to_f64().unwrap_or(f64::INFINITY);
    for subset in combinations(roots.len(), k) {
        let mut c = vec![Complex64::new(lc, 0.0)];
        for &i in &subset {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (j, cj) in c.iter().enumerate() {
                next[j + 1] += cj;
                next[j] -= cj * roots[i];
            }
            c = next;
        }
        let scale = 1.0 + c.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if c.iter().any(|z| z.im.abs() > 1e-6 * scale || z.re.abs() > bound_f + 1.0) {
            continue;
        }
        let g = IntPoly::new(c.iter().map(|z| BigInt::from(z.re.round() as i128)).collect()).primitive_part();
        if g.degree() == k && f.div_exact(&g).is_some() {
            return Some(g);
        }
    }
    None
}

/// Exhaustive search over integer polynomials of degree `k` within the Mignotte box.
fn factor_brute_force(f: &IntPoly, k: usize) -> Result<Option<IntPoly>> {
    let b = mignotte(f, k).to_i64().ok_or_else(|| Error::Numeric("Mignotte bound overflow".into()))?;
    let lc = f.leading().abs().to_i64().ok_or_else(|| Error::Numeric("leading coefficient overflow".into()))?;
    let side = (2 * b + 1) as u128;
    let count = side.checked_pow(k as u32).unwrap_or(u128::MAX);
    if count > BRUTE_FORCE_LIMIT {
        return Err(Error::Numeric(format!("bounded factor search too large ({count} candidates)")));
    }
    let leads: Vec<i64> = (1..=lc).filter(|d| lc % d == 0).collect();
    for &l in &leads {
        for idx in 0..count {
            let mut rest = idx;
            let mut coeffs = Vec::with_capacity(k + 1);
            for _ in 0..k {
                coeffs.push(BigInt::from((rest % side) as i64 - b));
                rest /= side;
            }
            coeffs.push(BigInt::from(l));
            let g = IntPoly::new(coeffs);
            if f.div_exact(&g).is_some() {
                return Ok(Some(g.primitive_part()));
            }
        }
    }
    Ok(None)
}

/// Smallest-degree proper factor of a primitive squarefree polynomial, if any.
fn smallest_factor(f: &IntPoly) -> Result<Option<IntPoly>> {
    let n = f.degree();
    if n <= 1 {
        return Ok(None);
    }
    if f.coeff(0).is_zero() {
        return Ok(Some(IntPoly::x()));
    }
    match aberth_roots(f) {
        Ok((roots, _)) => Ok((1..=n / 2).find_map(|k| factor_from_roots(f, &roots, k))),
        Err(_) => {
            for k in 1..=n / 2 {
                if let Some(g) = factor_brute_force(f, k)? {
                    return Ok(Some(g));
                }
            }
            Ok(None)
        }
    }
}

/// Irreducibility over Q with a certificate or an explicit factor.
pub fn is_irreducible_q(p: &IntPoly) -> Result<Irreducibility> {
    if p.degree() == 0 {
        return Err(Error::Domain("irreducibility of a constant polynomial".into()));
    }
    let f = p.primitive_part();
    let n = f.degree();
    if n == 1 {
        return Ok(Irreducibility::Irreducible(IrreducibilityCertificate::Linear));
    }
    if f.coeff(0).is_zero() {
        return Ok(Irreducibility::Reducible { factor: IntPoly::x() });
    }
    let g = f.to_rat().gcd(&f.to_rat().derivative());
    if g.degree() > 0 {
        return Ok(Irreducibility::Reducible { factor: g.primitive_int() });
    }
    for &prime in &MOD_P_PRIMES {
        if !f.leading().is_multiple_of(&BigInt::from(prime)) && irreducible_mod_p(&f, prime) {
            return Ok(Irreducibility::Irreducible(IrreducibilityCertificate::ModP { prime }));
        }
    }
    match smallest_factor(&f)? {
        Some(factor) => Ok(Irreducibility::Reducible { factor }),
        None => {
            Ok(Irreducibility::Irreducible(IrreducibilityCertificate::NoFactor { mignotte_bound: mignotte(&f, n / 2) }))
        }
    }
}

fn split_squarefree(f: &IntPoly, out: &mut Vec<IntPoly>) -> Result<()> {
    if f.degree() == 0 {
        return Ok(());
    }
    if f.degree() > 1 && irreducible_mod_some_prime(f) {
        out.push(f.clone());
        return Ok(());
    }
    match smallest_factor(f)? {
        None => out.push(f.clone()),
        Some(g) => {
            let q = f.div_exact(&g).expect("verified factor").primitive_part();
            out.push(g);
            split_squarefree(&q, out)?;
        }
    }
    Ok(())
}

fn irreducible_mod_some_prime(f: &IntPoly) -> bool {
    MOD_P_PRIMES.iter().take(10).any(|&p| !f.leading().is_multiple_of(&BigInt::from(p)) && irreducible_mod_p(f, p))
}

/// Factorisation over Q into primitive irreducible integer polynomials with multiplicities,
/// sorted by degree and then coefficients. The content is dropped.
pub fn factor_q(p: &IntPoly) -> Result<Vec<(IntPoly, usize)>> {
    let mut out = Vec::new();
    for (s, m) in squarefree_decomposition(p) {
        let mut parts = Vec::new();
        split_squarefree(&s, &mut parts)?;
        out.extend(parts.into_iter().map(|g| (g, m)));
    }
    out.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

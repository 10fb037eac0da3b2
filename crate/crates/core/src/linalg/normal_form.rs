use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{primitive_integer_vector, IntMatrix, RatMatrix};

/// Smith decomposition `U · M · V = diag(d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SNFResult {
    pub d: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SNFResult {
    /// Product of the nonzero elementary divisors, `None` if one of them vanishes.
    pub fn finite_order(&self) -> Option<BigInt> {
        if self.d.iter().any(Zero::is_zero) {
            return None;
        }
        Some(self.d.iter().fold(BigInt::one(), |a, x| a * x))
    }

    pub fn rank(&self) -> usize {
        self.d.iter().filter(|x| !x.is_zero()).count()
    }
}

/// Row-style Hermite normal form of `m`.
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    hnf_with_transform(m).0
}

/// Returns `(H, U)` with `U` unimodular and `U · m = H`.
///
/// `H` is in row echelon form with positive pivots, entries above each pivot in
/// `[0, pivot)` and zero rows at the bottom.
pub fn hnf_with_transform(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut pr = 0;
    for c in 0..m.cols() {
        if pr == m.rows() {
            break;
        }
        loop {
            // smallest nonzero entry on or below the pivot row
            let best = (pr..m.rows())
                .filter(|&i| !h.get(i, c).is_zero())
                .min_by(|&a, &b| h.get(a, c).abs().cmp(&h.get(b, c).abs()));
            let Some(best) = best else { break };
            if best != pr {
                h.swap_rows(best, pr);
                u.swap_rows(best, pr);
            }
            let mut done = true;
            for i in pr + 1..m.rows() {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = -h.get(i, c).div_floor(h.get(pr, c));
                h.add_row_multiple(i, pr, &q);
                u.add_row_multiple(i, pr, &q);
                if !h.get(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(pr, c).is_zero() {
            continue;
        }
        if h.get(pr, c).is_negative() {
            h.negate_row(pr);
            u.negate_row(pr);
        }
        let p = h.get(pr, c).clone();
        for i in 0..pr {
            let q = -h.get(i, c).div_floor(&p);
            if !q.is_zero() {
                h.add_row_multiple(i, pr, &q);
                u.add_row_multiple(i, pr, &q);
            }
        }
        pr += 1;
    }
    (h, u)
}

/// HNF with the zero rows removed: a canonical basis of the row lattice.
pub fn hnf_basis(m: &IntMatrix) -> IntMatrix {
    let h = hnf(m);
    let keep: Vec<Vec<BigInt>> = h.to_rows().into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    if keep.is_empty() {
        return IntMatrix::zeros(0, m.cols());
    }
    IntMatrix::from_rows(&keep).expect("rows share a width")
}

/// Z-basis (as rows) of `{x ∈ Z^rows : x · m = 0}`.
pub fn integer_left_kernel(m: &IntMatrix) -> IntMatrix {
    // rational kernel first: a full transform of a wide system blows up its entries
    let q = RatMatrix::from(m).left_kernel();
    if q.is_empty() {
        return IntMatrix::zeros(0, m.rows());
    }
    let rows: Vec<Vec<BigInt>> = q.iter().map(|v| primitive_integer_vector(v)).collect();
    saturate(&IntMatrix::from_rows(&rows).expect("rows share a width"))
}

/// Z-basis (as rows) of `{x ∈ Z^cols : m · x = 0}`.
pub fn integer_right_kernel(m: &IntMatrix) -> IntMatrix {
    integer_left_kernel(&m.transpose())
}

/// Saturation `(span_Q L) ∩ Z^n` of the row lattice `L`, in HNF.
pub fn saturate(l: &IntMatrix) -> IntMatrix {
    if l.rows() == 0 || l.is_zero() {
        return IntMatrix::zeros(0, l.cols());
    }
    // U·L·V = D, so span_Q L is spanned by the first r rows of the unimodular V⁻¹
    let s = snf(l);
    let r = s.d.iter().filter(|d| !d.is_zero()).count();
    let vinv = RatMatrix::from(&s.v).inverse().ok().and_then(|x| x.to_int()).expect("unimodular transform");
    let rows: Vec<Vec<BigInt>> = (0..r).map(|i| vinv.row(i).to_vec()).collect();
    hnf_basis(&IntMatrix::from_rows(&rows).expect("rows share a width"))
}

/// Intersection of two integer row lattices in `Z^n`, as an HNF basis.
pub fn lattice_intersection(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.cols(), b.cols());
    let stacked = IntMatrix::vstack(&[a, b]).expect("same width");
    let ker = integer_left_kernel(&stacked);
    if ker.rows() == 0 {
        return IntMatrix::zeros(0, a.cols());
    }
    let mut rows = Vec::with_capacity(ker.rows());
    for i in 0..ker.rows() {
        rows.push(a.left_mul_vec(&ker.row(i)[..a.rows()]));
    }
    hnf_basis(&IntMatrix::from_rows(&rows).expect("same width"))
}

/// Index `[Z^n : L]` for a full-rank row lattice; `None` when `L` is not of full rank.
pub fn lattice_index(l: &IntMatrix) -> Option<BigInt> {
    let h = hnf_basis(l);
    if h.rows() != l.cols() {
        return None;
    }
    Some((0..h.rows()).fold(BigInt::one(), |acc, i| acc * h.get(i, i)))
}

/// Smith normal form with unimodular transforms.
pub fn snf(m: &IntMatrix) -> SNFResult {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let k = r.min(c);
    for t in 0..k {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = a.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish(a, u, v, k);
            };
            a.swap_rows(t, bi);
            u.swap_rows(t, bi);
            a.swap_cols(t, bj);
            v.swap_cols(t, bj);
            let mut clean = true;
            for i in t + 1..r {
                let q = -a.get(i, t).div_floor(a.get(t, t));
                if !q.is_zero() {
                    a.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                }
                clean &= a.get(i, t).is_zero();
            }
            for j in t + 1..c {
                let q = -a.get(t, j).div_floor(a.get(t, t));
                if !q.is_zero() {
                    a.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                }
                clean &= a.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row t and retry
            let p = a.get(t, t).clone();
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    a.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(a, u, v, k)
}

fn finish(a: IntMatrix, u: IntMatrix, v: IntMatrix, k: usize) -> SNFResult {
    let d = (0..k).map(|i| a.get(i, i).abs()).collect();
    SNFResult { d, u, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntMatrix) -> SNFResult {
        let s = snf(m);
        let prod = &(&s.u * m) * &s.v;
        let mut expect = IntMatrix::zeros(m.rows(), m.cols());
        for (i, x) in s.d.iter().enumerate() {
            expect.set(i, i, x.clone());
        }
        assert_eq!(prod, expect);
        assert!(s.u.det().unwrap().abs().is_one());
        assert!(s.v.det().unwrap().abs().is_one());
        for w in s.d.windows(2) {
            assert!(w[0].is_zero() && w[1].is_zero() || !w[0].is_zero() && w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn hnf_examples() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(hnf(&a), a);
        assert_eq!(hnf(&IntMatrix::from_i64(&[&[0, 1], &[1, 0]])), IntMatrix::identity(2));
        assert_eq!(hnf(&IntMatrix::from_i64(&[&[2, 4], &[1, 3]])), IntMatrix::from_i64(&[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn hnf_transform_is_unimodular() {
        let m = IntMatrix::from_i64(&[&[3, 5, 7], &[2, 4, 6], &[9, 1, 0], &[4, 4, 4]]);
        let (h, u) = hnf_with_transform(&m);
        assert_eq!(&u * &m, h);
        assert!(u.det().unwrap().abs().is_one());
        assert!(h.row(3).iter().all(Zero::is_zero));
    }

    #[test]
    fn snf_examples() {
        let s = check_snf(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.d, vec![BigInt::from(1), BigInt::from(6)]);
        let z = check_snf(&IntMatrix::zeros(2, 2));
        assert_eq!(z.d, vec![BigInt::zero(), BigInt::zero()]);
        let a = IntMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[1, -11, 7]]);
        let s = check_snf(&(&a - &IntMatrix::identity(3)));
        // |det(A − I)| = |f(1)| = |1 − 7 + 11 − 1|
        assert_eq!(s.finite_order(), Some(BigInt::from(4)));
        check_snf(&IntMatrix::from_i64(&[&[6, 4, 2], &[10, 8, 4]]));
    }

    #[test]
    fn kernels_and_saturation() {
        let m = IntMatrix::from_i64(&[&[2, 4], &[1, 2]]);
        let k = integer_left_kernel(&m);
        assert_eq!(k, IntMatrix::from_i64(&[&[1, -2]]));
        let l = IntMatrix::from_i64(&[&[2, 4, 6]]);
        assert_eq!(saturate(&l), IntMatrix::from_i64(&[&[1, 2, 3]]));
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 1]]);
        let b = IntMatrix::from_i64(&[&[1, 0], &[0, 3]]);
        assert_eq!(lattice_intersection(&a, &b), IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(lattice_index(&a), Some(BigInt::from(2)));
    }
}

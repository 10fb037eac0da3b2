//! Small floating-point helpers: numeric rank, complex null vectors, rational reconstruction.

use num_complex::Complex64;

/// Rank of a real matrix by Gaussian elimination with full pivoting; entries below
/// `tol · max|a_ij|` count as zero.
pub fn numeric_rank(rows: &[Vec<f64>], tol: f64) -> usize {
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let m = a.len();
    if m == 0 {
        return 0;
    }
    let n = a[0].len();
    let scale = a.iter().flatten().fold(0.0f64, |s, x| s.max(x.abs()));
    if scale == 0.0 {
        return 0;
    }
    let mut rank = 0;
    for _ in 0..m.min(n) {
        let mut best = (0, 0, 0.0f64);
        for (i, row) in a.iter().enumerate().skip(rank) {
            for (j, x) in row.iter().enumerate() {
                if x.abs() > best.2 {
                    best = (i, j, x.abs());
                }
            }
        }
        if best.2 <= tol * scale {
            break;
        }
        a.swap(rank, best.0);
        for row in a.iter_mut() {
            row.swap(rank, best.1);
        }
        for i in rank + 1..m {
            let f = a[i][rank] / a[rank][rank];
            for j in rank..n {
                a[i][j] -= f * a[rank][j];
            }
        }
        rank += 1;
    }
    rank
}

/// A vector in the right null space of the square matrix `a`, assuming the null space
/// has dimension `nullity`.
pub fn complex_null_vector(a: &[Vec<Complex64>], nullity: usize) -> Vec<Complex64> {
    let n = a.len();
    let mut m: Vec<Vec<Complex64>> = a.to_vec();
    let mut cols: Vec<usize> = (0..n).collect();
    let r = n.saturating_sub(nullity.max(1));
    for k in 0..r {
        let mut best = (k, k, -1.0f64);
        for (i, row) in m.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().skip(k) {
                if x.norm() > best.2 {
                    best = (i, j, x.norm());
                }
            }
        }
        m.swap(k, best.0);
        for row in m.iter_mut() {
            row.swap(k, best.1);
        }
        cols.swap(k, best.1);
        let piv = m[k][k];
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = m[i][k] / piv;
            if f.norm() == 0.0 {
                continue;
            }
            for j in k..n {
                let t = m[k][j];
                m[i][j] -= f * t;
            }
        }
    }
    // free variable at position r set to 1, the others to 0
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    y[r] = Complex64::new(1.0, 0.0);
    for k in 0..r {
        y[k] = -m[k][r] / m[k][k];
    }
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for (k, &c) in cols.iter().enumerate() {
        v[c] = y[k];
    }
    v
}

/// Continued-fraction reconstruction of `x` as `p/q` with `0 < q ≤ max_den` and `|x − p/q| ≤ tol`.
pub fn rational_reconstruct(x: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            return None;
        }
        if (x - h2 as f64 / k2 as f64).abs() <= tol {
            return Some((h2 as i64, k2 as i64));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-300 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstruction() {
        assert_eq!(rational_reconstruct(0.75, 1000, 1e-12), Some((3, 4)));
        assert_eq!(rational_reconstruct(-2.0 / 7.0, 1000, 1e-12), Some((-2, 7)));
        assert_eq!(rational_reconstruct(std::f64::consts::PI, 1000, 1e-12), None);
    }

    #[test]
    fn ranks_and_null_vectors() {
        assert_eq!(numeric_rank(&[vec![1.0, 2.0], vec![2.0, 4.0]], 1e-10), 1);
        assert_eq!(numeric_rank(&[vec![1.0, 0.0], vec![0.0, 1.0]], 1e-10), 2);
        let c = |x: f64| Complex64::new(x, 0.0);
        let a = vec![vec![c(1.0), c(2.0)], vec![c(2.0), c(4.0)]];
        let v = complex_null_vector(&a, 1);
        assert!((a[0][0] * v[0] + a[0][1] * v[1]).norm() < 1e-12);
        assert!(v.iter().any(|z| z.norm() > 0.5));
    }
}

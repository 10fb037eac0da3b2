//! Polynomial arithmetic over F_p for small primes and Rabin's irreducibility test.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::IntPoly;

type Fp = Vec<u64>;

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
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

fn rem(a: &Fp, f: &Fp, p: u64) -> Fp {
    let mut r = a.clone();
    let df = f.len() - 1;
    let li = inv_mod(f[df], p);
    while r.len() > df {
        let top = r.len() - 1;
        let c = r[top] * li % p;
        if c != 0 {
            for (j, fj) in f.iter().enumerate() {
                let idx = top - df + j;
                r[idx] = (r[idx] + p - c * fj % p) % p;
            }
        }
        r.pop();
        r = trim(r);
    }
    trim(r)
}

fn mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + x * y) % p;
        }
    }
    trim(c)
}

fn mulmod(a: &Fp, b: &Fp, f: &Fp, p: u64) -> Fp {
    rem(&mul(a, b, p), f, p)
}

fn powmod(base: &Fp, mut e: u64, f: &Fp, p: u64) -> Fp {
    let mut r: Fp = vec![1];
    let mut b = rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(&r, &b, f, p);
        }
        b = mulmod(&b, &b, f, p);
        e >>= 1;
    }
    r
}

fn sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect())
}

fn gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^k) mod f`.
fn frobenius_power(k: usize, f: &Fp, p: u64) -> Fp {
    let mut h: Fp = rem(&vec![0, 1], f, p);
    for _ in 0..k {
        h = powmod(&h, p, f, p);
    }
    h
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn reduce(f: &IntPoly, p: u64) -> Fp {
    let pb = BigInt::from(p);
    trim(f.coeffs().iter().map(|c| c.mod_floor(&pb).to_u64().expect("reduced below p")).collect())
}

/// Rabin's test: true iff `f mod p` is irreducible of the same degree as `f`.
pub fn irreducible_mod_p(f: &IntPoly, p: u64) -> bool {
    let n = f.degree();
    if n == 0 || !(2..=(1 << 31)).contains(&p) {
        return false;
    }
    let fp = reduce(f, p);
    if fp.len() != n + 1 {
        return false;
    }
    let x: Fp = vec![0, 1];
    let xr = rem(&x, &fp, p);
    if sub(&frobenius_power(n, &fp, p), &xr, p).iter().any(|&c| c != 0) {
        return false;
    }
    prime_factors(n).into_iter().all(|q| {
        let h = sub(&frobenius_power(n / q, &fp, p), &xr, p);
        gcd(&fp, &h, p).len() == 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        // x^2 + 1 is irreducible mod 3 but not mod 5
        let f = IntPoly::from_i64(&[1, 0, 1]);
        assert!(irreducible_mod_p(&f, 3));
        assert!(!irreducible_mod_p(&f, 5));
        // x^4 + 1 splits modulo every prime
        let g = IntPoly::from_i64(&[1, 0, 0, 0, 1]);
        assert!((2..60).filter(|&p| (2..p).all(|d| p % d != 0)).all(|p| !irreducible_mod_p(&g, p)));
    }
}

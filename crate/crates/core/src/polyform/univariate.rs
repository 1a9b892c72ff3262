//! Dense univariate polynomials over an [`Arith`] field, coefficients
//! stored from the constant term up.

use crate::linalg::Arith;

pub fn trim<A: Arith>(ar: &A, mut p: Vec<A::E>) -> Vec<A::E> {
    while p.last().is_some_and(|c| ar.is_zero(c)) {
        p.pop();
    }
    p
}

/// Degree, `None` for the zero polynomial.
pub fn degree<A: Arith>(ar: &A, p: &[A::E]) -> Option<usize> {
    p.iter().rposition(|c| !ar.is_zero(c))
}

pub fn eval<A: Arith>(ar: &A, p: &[A::E], x: &A::E) -> A::E {
    p.iter().rev().fold(ar.zero(), |acc, c| ar.add(&ar.mul(&acc, x), c))
}

pub fn derivative<A: Arith>(ar: &A, p: &[A::E]) -> Vec<A::E> {
    let mut out = Vec::with_capacity(p.len().saturating_sub(1));
    let mut k = ar.zero();
    for c in p.iter() {
        if !out.is_empty() || !ar.is_zero(&k) {
            out.push(ar.mul(&k, c));
        }
        k = ar.add(&k, &ar.one());
    }
    trim(ar, out)
}

/// Remainder of `a` modulo nonzero `b`.
pub fn rem<A: Arith>(ar: &A, a: &[A::E], b: &[A::E]) -> Vec<A::E> {
    let db = degree(ar, b).expect("nonzero divisor");
    let inv = ar.inv(&b[db]);
    let mut r = trim(ar, a.to_vec());
    while let Some(dr) = degree(ar, &r) {
        if dr < db {
            break;
        }
        let f = ar.mul(&r[dr], &inv);
        let shift = dr - db;
        for (i, c) in b[..=db].iter().enumerate() {
            r[i + shift] = ar.sub(&r[i + shift], &ar.mul(&f, c));
        }
        r = trim(ar, r);
    }
    r
}

/// Monic greatest common divisor.
pub fn gcd<A: Arith>(ar: &A, a: &[A::E], b: &[A::E]) -> Vec<A::E> {
    let mut x = trim(ar, a.to_vec());
    let mut y = trim(ar, b.to_vec());
    while !y.is_empty() {
        let r = rem(ar, &x, &y);
        x = y;
        y = r;
    }
    monic(ar, x)
}

pub fn monic<A: Arith>(ar: &A, p: Vec<A::E>) -> Vec<A::E> {
    match degree(ar, &p) {
        None => p,
        Some(d) => {
            let inv = ar.inv(&p[d]);
            p.iter().map(|c| ar.mul(c, &inv)).collect()
        }
    }
}

/// Lagrange interpolation through `(xs[i], ys[i])` with distinct `xs`.
pub fn interpolate<A: Arith>(ar: &A, xs: &[A::E], ys: &[A::E]) -> Vec<A::E> {
    let n = xs.len();
    let mut out = vec![ar.zero(); n];
    for i in 0..n {
        if ar.is_zero(&ys[i]) {
            continue;
        }
        // numerator Π_{j≠i} (x − xⱼ), denominator Π (xᵢ − xⱼ)
        let mut num = vec![ar.one()];
        let mut den = ar.one();
        for j in (0..n).filter(|&j| j != i) {
            let mut next = vec![ar.zero(); num.len() + 1];
            for (k, c) in num.iter().enumerate() {
                next[k + 1] = ar.add(&next[k + 1], c);
                next[k] = ar.sub(&next[k], &ar.mul(c, &xs[j]));
            }
            num = next;
            den = ar.mul(&den, &ar.sub(&xs[i], &xs[j]));
        }
        let f = ar.mul(&ys[i], &ar.inv(&den));
        for (o, c) in out.iter_mut().zip(&num) {
            *o = ar.add(o, &ar.mul(&f, c));
        }
    }
    trim(ar, out)
}

/// Roots in F_p by exhaustive evaluation.
pub fn roots_mod(p: u64, poly: &[u64]) -> Vec<u64> {
    let ar = crate::linalg::ModP(p);
    (0..p).filter(|x| eval(&ar, poly, x) == 0).collect()
}

//! Dense linear algebra over the supported fields.
//!
//! Exact algorithms are written once against [`Arith`]; the prime-field
//! instance works on raw `u64` residues, the generic instance on [`Scalar`].

pub mod bareiss;
pub mod numeric;

use crate::scalar::{prime, FieldSpec, Scalar};

/// Field operations on a plain element type, parametrized by a context.
pub trait Arith: Sync {
    type E: Clone + Send + Sync + std::fmt::Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, x: &Self::E) -> bool;
    fn add(&self, x: &Self::E, y: &Self::E) -> Self::E;
    fn sub(&self, x: &Self::E, y: &Self::E) -> Self::E;
    fn mul(&self, x: &Self::E, y: &Self::E) -> Self::E;
    /// Inverse of a nonzero element.
    fn inv(&self, x: &Self::E) -> Self::E;
}

#[derive(Debug, Clone, Copy)]
pub struct ModP(pub u64);

impl Arith for ModP {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }
    fn add(&self, x: &u64, y: &u64) -> u64 {
        prime::add_mod(*x, *y, self.0)
    }
    fn sub(&self, x: &u64, y: &u64) -> u64 {
        prime::sub_mod(*x, *y, self.0)
    }
    fn mul(&self, x: &u64, y: &u64) -> u64 {
        prime::mul_mod(*x, *y, self.0)
    }
    fn inv(&self, x: &u64) -> u64 {
        prime::inv_mod(*x, self.0).expect("nonzero residue")
    }
}

/// Exact arithmetic on [`Scalar`] values of one field.
#[derive(Debug, Clone, Copy)]
pub struct ScalarArith(pub FieldSpec);

impl Arith for ScalarArith {
    type E = Scalar;
    fn zero(&self) -> Scalar {
        Scalar::zero(self.0)
    }
    fn one(&self) -> Scalar {
        Scalar::one(self.0)
    }
    fn is_zero(&self, x: &Scalar) -> bool {
        x.is_zero()
    }
    fn add(&self, x: &Scalar, y: &Scalar) -> Scalar {
        x.add(y).expect("entries share one field")
    }
    fn sub(&self, x: &Scalar, y: &Scalar) -> Scalar {
        x.sub(y).expect("entries share one field")
    }
    fn mul(&self, x: &Scalar, y: &Scalar) -> Scalar {
        x.mul(y).expect("entries share one field")
    }
    fn inv(&self, x: &Scalar) -> Scalar {
        x.inv().expect("nonzero pivot")
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<A: Arith>(ar: &A, rows: &mut [Vec<A::E>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !ar.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = ar.inv(&rows[r][c]);
        for x in rows[r][c..].iter_mut() {
            *x = ar.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || ar.is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x = ar.sub(x, &ar.mul(&f, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<A: Arith>(ar: &A, rows: &[Vec<A::E>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(ar, &mut m, ncols).len()
}

/// Basis of the right null space `{x : M x = 0}`.
pub fn kernel<A: Arith>(ar: &A, rows: &[Vec<A::E>], ncols: usize) -> Vec<Vec<A::E>> {
    let mut m = rows.to_vec();
    let pivots = rref(ar, &mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![ar.zero(); ncols];
        v[free] = ar.one();
        for (i, &pc) in pivots.iter().enumerate() {
            let e = &m[i][free];
            if !ar.is_zero(e) {
                v[pc] = ar.sub(&ar.zero(), e);
            }
        }
        basis.push(v);
    }
    basis
}

/// Basis of the left null space `{y : yᵀ M = 0}`.
pub fn left_kernel<A: Arith>(ar: &A, rows: &[Vec<A::E>], ncols: usize) -> Vec<Vec<A::E>> {
    let t = transpose(rows, ncols);
    kernel(ar, &t, rows.len())
}

pub fn transpose<E: Clone>(rows: &[Vec<E>], ncols: usize) -> Vec<Vec<E>> {
    (0..ncols).map(|c| rows.iter().map(|r| r[c].clone()).collect()).collect()
}

/// Incrementally maintained column space of an `m`-row matrix.
///
/// Columns are fed one at a time; each accepted column becomes a basis
/// vector kept in reduced form (pivot entry 1, zero in the other pivots'
/// rows), together with its expression in the accepted original columns.
#[derive(Debug, Clone)]
pub struct ColumnSpan<A: Arith> {
    ar: A,
    m: usize,
    basis: Vec<Vec<A::E>>,
    pivot_rows: Vec<usize>,
    combos: Vec<Vec<A::E>>,
    accepted: Vec<usize>,
}

impl<A: Arith + Clone> ColumnSpan<A> {
    pub fn new(ar: A, m: usize) -> Self {
        ColumnSpan { ar, m, basis: Vec::new(), pivot_rows: Vec::new(), combos: Vec::new(), accepted: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.m
    }

    /// Indices of the original columns that were accepted as independent.
    pub fn accepted(&self) -> &[usize] {
        &self.accepted
    }

    /// Row of each basis vector's pivot, parallel to [`Self::accepted`].
    pub fn pivot_rows(&self) -> &[usize] {
        &self.pivot_rows
    }

    fn reduce(&self, v: &mut [A::E]) -> Vec<A::E> {
        let ar = &self.ar;
        let mut coeffs = vec![ar.zero(); self.basis.len()];
        for (i, (b, &pr)) in self.basis.iter().zip(&self.pivot_rows).enumerate() {
            if ar.is_zero(&v[pr]) {
                continue;
            }
            let f = v[pr].clone();
            for (x, y) in v.iter_mut().zip(b) {
                if !ar.is_zero(y) {
                    *x = ar.sub(x, &ar.mul(&f, y));
                }
            }
            coeffs[i] = f;
        }
        coeffs
    }

    /// Feeds original column `index`; returns whether it enlarged the span.
    pub fn insert(&mut self, index: usize, mut col: Vec<A::E>) -> bool {
        if self.is_full() {
            return false;
        }
        let coeffs = self.reduce(&mut col);
        let Some(pr) = col.iter().position(|x| !self.ar.is_zero(x)) else {
            return false;
        };
        let ar = self.ar.clone();
        let k = self.accepted.len();
        // combination of accepted columns equal to the reduced vector
        let mut combo = vec![ar.zero(); k + 1];
        combo[k] = ar.one();
        for (c, bc) in coeffs.iter().zip(&self.combos) {
            if ar.is_zero(c) {
                continue;
            }
            for (x, y) in combo.iter_mut().zip(bc) {
                *x = ar.sub(x, &ar.mul(c, y));
            }
        }
        let inv = ar.inv(&col[pr]);
        for x in col.iter_mut() {
            *x = ar.mul(x, &inv);
        }
        for x in combo.iter_mut() {
            *x = ar.mul(x, &inv);
        }
        for (b, bc) in self.basis.iter_mut().zip(self.combos.iter_mut()) {
            bc.push(ar.zero());
            if ar.is_zero(&b[pr]) {
                continue;
            }
            let f = b[pr].clone();
            for (x, y) in b.iter_mut().zip(&col) {
                *x = ar.sub(x, &ar.mul(&f, y));
            }
            for (x, y) in bc.iter_mut().zip(&combo) {
                *x = ar.sub(x, &ar.mul(&f, y));
            }
        }
        self.basis.push(col);
        self.pivot_rows.push(pr);
        self.combos.push(combo);
        self.accepted.push(index);
        true
    }

    /// Expresses `target` in the span: returns `(original column, coefficient)`
    /// pairs whose combination equals `target`, or `None` if it is outside.
    pub fn solve(&self, target: &[A::E]) -> Option<Vec<(usize, A::E)>> {
        let mut v = target.to_vec();
        let coeffs = self.reduce(&mut v);
        if v.iter().any(|x| !self.ar.is_zero(x)) {
            return None;
        }
        let ar = &self.ar;
        let mut total = vec![ar.zero(); self.accepted.len()];
        for (c, bc) in coeffs.iter().zip(&self.combos) {
            if ar.is_zero(c) {
                continue;
            }
            for (x, y) in total.iter_mut().zip(bc) {
                *x = ar.add(x, &ar.mul(c, y));
            }
        }
        Some(self.accepted.iter().copied().zip(total).filter(|(_, c)| !ar.is_zero(c)).collect())
    }

    /// Whether the standard basis vector `e_row` lies in the span.
    pub fn contains_unit(&self, row: usize) -> bool {
        let mut e = vec![self.ar.zero(); self.m];
        e[row] = self.ar.one();
        self.solve(&e).is_some()
    }
}

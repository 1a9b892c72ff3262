//! Sylvester resultants of binary and ternary forms.

use crate::error::{Error, Result};
use crate::linalg::{Arith, ScalarArith};
use crate::scalar::{FieldSpec, Scalar};

use super::univariate::interpolate;
use super::HomogeneousForm;

/// Determinant by Gaussian elimination.
pub fn determinant<A: Arith>(ar: &A, mut m: Vec<Vec<A::E>>) -> A::E {
    let n = m.len();
    let mut det = ar.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !ar.is_zero(&m[i][c])) else {
            return ar.zero();
        };
        if pr != c {
            m.swap(pr, c);
            det = ar.sub(&ar.zero(), &det);
        }
        det = ar.mul(&det, &m[c][c]);
        let inv = ar.inv(&m[c][c]);
        for i in c + 1..n {
            if ar.is_zero(&m[i][c]) {
                continue;
            }
            let f = ar.mul(&m[i][c], &inv);
            for j in c..n {
                let v = ar.mul(&f, &m[c][j]);
                m[i][j] = ar.sub(&m[i][j], &v);
            }
        }
    }
    det
}

/// Sylvester matrix of two univariate coefficient lists (constant term first)
/// with formal degrees `len − 1`.
pub fn sylvester_matrix<A: Arith>(ar: &A, f: &[A::E], g: &[A::E]) -> Vec<Vec<A::E>> {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut r = vec![ar.zero(); size];
        for (k, c) in f.iter().rev().enumerate() {
            r[i + k] = c.clone();
        }
        rows.push(r);
    }
    for i in 0..m {
        let mut r = vec![ar.zero(); size];
        for (k, c) in g.iter().rev().enumerate() {
            r[i + k] = c.clone();
        }
        rows.push(r);
    }
    rows
}

/// Coefficient of `x_var^i` in `f`, evaluated at the remaining coordinates.
fn coefficients_at(f: &HomogeneousForm, var: usize, rest: &[Scalar]) -> Result<Vec<Scalar>> {
    let field = f.field();
    let mut out = vec![Scalar::zero(field); f.degree() as usize + 1];
    for (e, c) in f.terms() {
        let mut t = c.clone();
        let mut k = 0;
        for (i, &ei) in e.iter().enumerate() {
            if i == var {
                continue;
            }
            if ei > 0 {
                t = t.mul(&rest[k].pow(ei))?;
            }
            k += 1;
        }
        let slot = &mut out[e[var] as usize];
        *slot = slot.add(&t)?;
    }
    Ok(out)
}

/// Resultant of `f` and `g` with respect to variable `var`, using the total
/// degrees as formal degrees in `var`. Inputs are binary or ternary forms
/// over an exact field; the output is a form of degree `deg f · deg g` in
/// the same variables, free of `var`.
pub fn sylvester_resultant(f: &HomogeneousForm, g: &HomogeneousForm, var: usize) -> Result<HomogeneousForm> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroInput);
    }
    let field = f.field();
    if field != g.field() {
        return Err(Error::FieldMismatch(field, g.field()));
    }
    if field.is_approx() {
        return Err(Error::InvalidInput("resultants need an exact field".into()));
    }
    let nv = f.num_vars();
    if nv != g.num_vars() || !(2..=3).contains(&nv) || var >= nv {
        return Err(Error::InvalidInput("resultants are supported for binary and ternary forms".into()));
    }
    let ar = ScalarArith(field);
    let total = f.degree() * g.degree();
    let res_at = |rest: &[Scalar]| -> Result<Scalar> {
        let a = coefficients_at(f, var, rest)?;
        let b = coefficients_at(g, var, rest)?;
        Ok(determinant(&ar, sylvester_matrix(&ar, &a, &b)))
    };
    let others: Vec<usize> = (0..nv).filter(|&i| i != var).collect();
    let mut out = HomogeneousForm::zero(nv, total, field);
    if nv == 2 {
        let c = res_at(&[Scalar::one(field)])?;
        let mut e = vec![0; 2];
        e[others[0]] = total;
        out.add_term(e, c)?;
        return Ok(out);
    }
    if let FieldSpec::Prime { p } = field {
        if p <= total as u64 {
            return Err(Error::InvalidInput(format!("prime {p} too small to interpolate a degree {total} resultant")));
        }
    }
    let xs: Vec<Scalar> = (0..=total as i64).map(|k| Scalar::from_i64(field, k)).collect();
    let ys = xs.iter().map(|t| res_at(&[t.clone(), Scalar::one(field)])).collect::<Result<Vec<_>>>()?;
    let poly = interpolate(&ar, &xs, &ys);
    for (j, c) in poly.into_iter().enumerate() {
        let mut e = vec![0; 3];
        e[others[0]] = j as u32;
        e[others[1]] = total - j as u32;
        out.add_term(e, c)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ModP;
    use crate::polyform::univariate;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: FieldSpec = FieldSpec::Rational;

    fn f2(terms: &[(&[u32], i64)], d: u32) -> HomogeneousForm {
        HomogeneousForm::from_terms(terms[0].0.len(), d, Q, terms.iter().map(|(e, c)| (e.to_vec(), Scalar::from_i64(Q, *c))).collect()).unwrap()
    }

    #[test]
    fn linear_resultant() {
        let a = f2(&[(&[1, 0], 1), (&[0, 1], -1)], 1);
        let b = f2(&[(&[1, 0], 1), (&[0, 1], 1)], 1);
        let r = sylvester_resultant(&a, &b, 0).unwrap();
        assert_eq!(r, f2(&[(&[0, 1], 2)], 1));
    }

    #[test]
    fn common_factor_gives_zero() {
        let a = f2(&[(&[2, 0], 1), (&[0, 2], -1)], 2);
        let b = f2(&[(&[1, 0], 1), (&[0, 1], -1)], 1);
        assert!(sylvester_resultant(&a, &b, 0).unwrap().is_zero());
        let z = HomogeneousForm::zero(2, 1, Q);
        assert!(matches!(sylvester_resultant(&a, &z, 0), Err(Error::ZeroInput)));
    }

    /// Two conics restricted to a line: the degree-4 resultant has as many
    /// roots (with multiplicity) over F_p as there are common points, which
    /// brute force counts directly.
    #[test]
    fn conic_pairs_match_brute_force() {
        let p = 101u64;
        let fp = FieldSpec::Prime { p };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let basis = crate::polyform::monomial_basis(2, 2);
        for _ in 0..20 {
            let mk = |rng: &mut ChaCha8Rng| {
                let c: Vec<Scalar> = basis.iter().map(|_| Scalar::from_i64(fp, rng.gen_range(0..p as i64))).collect();
                HomogeneousForm::from_coefficients(2, 2, fp, &c).unwrap()
            };
            let (f, g) = (mk(&mut rng), mk(&mut rng));
            let r = sylvester_resultant(&f, &g, 0).unwrap();
            assert_eq!(r.degree(), 4);
            // resultant roots (y:z) with z = 1, versus common affine zeros
            let uni: Vec<u64> = (0..=4).map(|j| r.coefficient(&[0, j, 4 - j]).as_fp().unwrap().residue()).collect();
            let ar = ModP(p);
            for y in 0..p {
                let vanishes = univariate::eval(&ar, &uni, &y) == 0;
                let common = (0..p).any(|x| {
                    let pt = [Scalar::from_i64(fp, x as i64), Scalar::from_i64(fp, y as i64), Scalar::one(fp)];
                    f.evaluate(&pt).unwrap().is_zero() && g.evaluate(&pt).unwrap().is_zero()
                });
                // a common zero over F_p forces a root; a root may come from a conjugate pair
                if common {
                    assert!(vanishes);
                }
                let lead_f = f.coefficient(&[2, 0, 0]);
                let lead_g = g.coefficient(&[2, 0, 0]);
                if vanishes && !lead_f.is_zero() && !lead_g.is_zero() {
                    // common root exists over the algebraic closure; check via gcd in x
                    let fx: Vec<u64> = (0..=2u32).map(|i| f.coefficients_in(0, i, y, p)).collect();
                    let gx: Vec<u64> = (0..=2u32).map(|i| g.coefficients_in(0, i, y, p)).collect();
                    assert!(univariate::degree(&ar, &univariate::gcd(&ar, &fx, &gx)).unwrap() >= 1);
                }
            }
        }
    }

    impl HomogeneousForm {
        /// Coefficient of x₀ⁱ at (·, y, 1) over F_p, for tests.
        fn coefficients_in(&self, var: usize, i: u32, y: u64, p: u64) -> u64 {
            let fp = FieldSpec::Prime { p };
            let rest = [Scalar::from_i64(fp, y as i64), Scalar::one(fp)];
            super::coefficients_at(self, var, &rest).unwrap()[i as usize].as_fp().unwrap().residue()
        }
    }
}

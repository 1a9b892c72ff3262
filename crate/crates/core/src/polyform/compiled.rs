//! Forms reduced to `u64` residues for fast evaluation over F_p.

use crate::error::{Error, Result};
use crate::scalar::prime::{add_mod, mul_mod};
use crate::scalar::{FieldSpec, RootChoice};

use super::HomogeneousForm;

#[derive(Debug, Clone)]
pub struct CompiledFp {
    p: u64,
    num_vars: usize,
    degree: u32,
    terms: Vec<(Vec<u32>, u64)>,
}

impl CompiledFp {
    /// Reduces the coefficients of `f` mod p (quadratic values via `choice`).
    pub fn new(f: &HomogeneousForm, p: u64, choice: RootChoice) -> Result<Self> {
        let g = f.convert(FieldSpec::Prime { p }, choice)?;
        let terms = g
            .terms()
            .map(|(e, c)| Ok((e.clone(), c.as_fp().ok_or(Error::BadPrime(p))?.residue())))
            .collect::<Result<Vec<_>>>()?;
        Ok(CompiledFp { p, num_vars: f.num_vars(), degree: f.degree(), terms })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at a residue vector, with powers precomputed into `scratch`.
    pub fn eval_with(&self, pt: &[u64], scratch: &mut Vec<u64>) -> u64 {
        let d = self.degree as usize + 1;
        scratch.clear();
        scratch.resize(self.num_vars * d, 1);
        for (i, &x) in pt.iter().enumerate() {
            for e in 1..d {
                scratch[i * d + e] = mul_mod(scratch[i * d + e - 1], x, self.p);
            }
        }
        let mut acc = 0;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = mul_mod(t, scratch[i * d + k as usize], self.p);
                }
            }
            acc = add_mod(acc, t, self.p);
        }
        acc
    }

    pub fn eval(&self, pt: &[u64]) -> u64 {
        let mut scratch = Vec::new();
        self.eval_with(pt, &mut scratch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn agrees_with_scalar_evaluation() {
        let p = 31;
        let fp = FieldSpec::Prime { p };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let basis = crate::polyform::monomial_basis(3, 3);
        let coeffs: Vec<Scalar> = basis.iter().map(|_| Scalar::from_i64(FieldSpec::Rational, rng.gen_range(-9..9))).collect();
        let f = HomogeneousForm::from_coefficients(3, 3, FieldSpec::Rational, &coeffs).unwrap();
        let c = CompiledFp::new(&f, p, RootChoice::Smaller).unwrap();
        let fpf = f.convert(fp, RootChoice::Smaller).unwrap();
        for _ in 0..50 {
            let pt: Vec<u64> = (0..4).map(|_| rng.gen_range(0..p)).collect();
            let sp: Vec<Scalar> = pt.iter().map(|&x| Scalar::from_i64(fp, x as i64)).collect();
            assert_eq!(c.eval(&pt), fpf.evaluate(&sp).unwrap().as_fp().unwrap().residue());
        }
    }
}

//! Sparse homogeneous forms.

pub mod compiled;
pub mod resultant;
pub mod univariate;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rank, ScalarArith};
use crate::scalar::{FieldSpec, RootChoice, Scalar};

pub use compiled::CompiledFp;
pub use resultant::sylvester_resultant;

/// Exponent vectors of all degree-`d` monomials in `n_ambient + 1`
/// variables, graded lexicographic (`x₀ᵈ` first).
pub fn monomial_basis(n_ambient: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n_ambient + 1];
    fill_monomials(&mut cur, 0, d, &mut out);
    out
}

fn fill_monomials(cur: &mut Vec<u32>, var: usize, left: u32, out: &mut Vec<Vec<u32>>) {
    if var + 1 == cur.len() {
        cur[var] = left;
        out.push(cur.clone());
        return;
    }
    for e in (0..=left).rev() {
        cur[var] = e;
        fill_monomials(cur, var + 1, left - e, out);
    }
    cur[var] = 0;
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `C(N+d, N)`, the dimension of degree-`d` forms on `Pᴺ`.
pub fn monomial_count(n_ambient: usize, d: u32) -> usize {
    binomial(n_ambient as u64 + d as u64, n_ambient as u64) as usize
}

/// Value of a monomial at a coordinate vector.
pub fn eval_monomial(exp: &[u32], pt: &[Scalar]) -> Result<Scalar> {
    let field = pt.first().map(|s| s.field()).ok_or_else(|| Error::InvalidInput("empty point".into()))?;
    let mut acc = Scalar::one(field);
    for (e, x) in exp.iter().zip(pt) {
        if *e > 0 {
            acc = acc.mul(&x.pow(*e))?;
        }
    }
    Ok(acc)
}

/// A homogeneous polynomial with nonzero coefficients in one field.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousForm {
    num_vars: usize,
    degree: u32,
    field: FieldSpec,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl HomogeneousForm {
    pub fn zero(num_vars: usize, degree: u32, field: FieldSpec) -> Self {
        HomogeneousForm { num_vars, degree, field, terms: BTreeMap::new() }
    }

    pub fn constant(num_vars: usize, c: Scalar) -> Self {
        let mut f = HomogeneousForm::zero(num_vars, 0, c.field());
        f.add_term(vec![0; num_vars], c).expect("degree 0 monomial");
        f
    }

    pub fn variable(num_vars: usize, i: usize, field: FieldSpec) -> Self {
        let mut e = vec![0; num_vars];
        e[i] = 1;
        let mut f = HomogeneousForm::zero(num_vars, 1, field);
        f.add_term(e, Scalar::one(field)).expect("degree 1 monomial");
        f
    }

    /// `Σ cᵢ xᵢ`.
    pub fn linear(coeffs: &[Scalar]) -> Result<Self> {
        let field = coeffs.first().map(|c| c.field()).ok_or_else(|| Error::InvalidInput("no coefficients".into()))?;
        let n = coeffs.len();
        let mut f = HomogeneousForm::zero(n, 1, field);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            f.add_term(e, c.clone())?;
        }
        Ok(f)
    }

    /// Builds from (exponent, coefficient) pairs; repeated monomials add up.
    pub fn from_terms(num_vars: usize, degree: u32, field: FieldSpec, terms: Vec<(Vec<u32>, Scalar)>) -> Result<Self> {
        let mut f = HomogeneousForm::zero(num_vars, degree, field);
        for (e, c) in terms {
            f.add_term(e, c)?;
        }
        Ok(f)
    }

    /// Form with coefficient vector `coeffs` against `monomial_basis(N, d)`.
    pub fn from_coefficients(n_ambient: usize, d: u32, field: FieldSpec, coeffs: &[Scalar]) -> Result<Self> {
        let basis = monomial_basis(n_ambient, d);
        if basis.len() != coeffs.len() {
            return Err(Error::InvalidInput(format!("{} coefficients for {} monomials", coeffs.len(), basis.len())));
        }
        Self::from_terms(n_ambient + 1, d, field, basis.into_iter().zip(coeffs.iter().cloned()).collect())
    }

    pub fn add_term(&mut self, exp: Vec<u32>, c: Scalar) -> Result<()> {
        if exp.len() != self.num_vars || exp.iter().sum::<u32>() != self.degree {
            return Err(Error::InvalidInput(format!("monomial {exp:?} does not fit degree {} in {} variables", self.degree, self.num_vars)));
        }
        if c.field() != self.field {
            return Err(Error::FieldMismatch(self.field, c.field()));
        }
        let sum = match self.terms.remove(&exp) {
            Some(old) => old.add(&c)?,
            None => c,
        };
        if !sum.is_exact_zero() {
            self.terms.insert(exp, sum);
        }
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, exp: &[u32]) -> Scalar {
        self.terms.get(exp).cloned().unwrap_or_else(|| Scalar::zero(self.field))
    }

    /// Coefficients against `monomial_basis(num_vars − 1, degree)`.
    pub fn coefficient_vector(&self) -> Vec<Scalar> {
        monomial_basis(self.num_vars - 1, self.degree).iter().map(|e| self.coefficient(e)).collect()
    }

    pub fn evaluate(&self, pt: &[Scalar]) -> Result<Scalar> {
        if pt.len() != self.num_vars {
            return Err(Error::InvalidInput(format!("point has {} coordinates, form has {} variables", pt.len(), self.num_vars)));
        }
        if let Some(x) = pt.iter().find(|x| x.field() != self.field) {
            return Err(Error::FieldMismatch(self.field, x.field()));
        }
        // power table per variable
        let powers: Vec<Vec<Scalar>> = pt
            .iter()
            .map(|x| {
                let mut v = vec![Scalar::one(self.field)];
                for _ in 0..self.degree {
                    let next = v.last().expect("nonempty").mul(x)?;
                    v.push(next);
                }
                Ok(v)
            })
            .collect::<Result<_>>()?;
        let mut acc = Scalar::zero(self.field);
        for (exp, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in exp.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[i][e as usize])?;
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    fn check_compat(&self, o: &HomogeneousForm) -> Result<()> {
        if self.field != o.field {
            return Err(Error::FieldMismatch(self.field, o.field));
        }
        if self.num_vars != o.num_vars {
            return Err(Error::InvalidInput(format!("{} vs {} variables", self.num_vars, o.num_vars)));
        }
        Ok(())
    }

    pub fn add(&self, o: &HomogeneousForm) -> Result<HomogeneousForm> {
        self.check_compat(o)?;
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(o.clone());
        }
        if self.degree != o.degree {
            return Err(Error::InvalidInput(format!("adding forms of degrees {} and {}", self.degree, o.degree)));
        }
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, o: &HomogeneousForm) -> Result<HomogeneousForm> {
        self.add(&o.scale(&Scalar::from_i64(o.field, -1))?)
    }

    pub fn scale(&self, c: &Scalar) -> Result<HomogeneousForm> {
        let mut out = HomogeneousForm::zero(self.num_vars, self.degree, self.field);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x.mul(c)?)?;
        }
        Ok(out)
    }

    /// Product of forms; the zero set is the union.
    pub fn product(&self, o: &HomogeneousForm) -> Result<HomogeneousForm> {
        self.check_compat(o)?;
        let mut acc: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let c = c1.mul(c2)?;
                match acc.get_mut(&e) {
                    Some(v) => *v = v.add(&c)?,
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_exact_zero());
        Ok(HomogeneousForm { num_vars: self.num_vars, degree: self.degree + o.degree, field: self.field, terms: acc })
    }

    pub fn pow(&self, e: u32) -> Result<HomogeneousForm> {
        let mut acc = HomogeneousForm::constant(self.num_vars, Scalar::one(self.field));
        for _ in 0..e {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    /// Formal partial derivative in variable `i`.
    pub fn partial(&self, i: usize) -> HomogeneousForm {
        let d = self.degree.saturating_sub(1);
        let mut out = HomogeneousForm::zero(self.num_vars, d, self.field);
        if self.degree == 0 {
            return out;
        }
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            let c2 = c.mul(&Scalar::from_i64(self.field, e[i] as i64)).expect("same field");
            out.add_term(e2, c2).expect("degree drops by one");
        }
        out
    }

    pub fn partials(&self) -> Vec<HomogeneousForm> {
        (0..self.num_vars).map(|i| self.partial(i)).collect()
    }

    /// Substitutes `xᵢ ↦ forms[i]` for linear forms in a common ring.
    pub fn substitute(&self, forms: &[HomogeneousForm]) -> Result<HomogeneousForm> {
        if forms.len() != self.num_vars {
            return Err(Error::InvalidInput(format!("{} substitutions for {} variables", forms.len(), self.num_vars)));
        }
        let target_vars = forms.first().map(|f| f.num_vars).ok_or_else(|| Error::InvalidInput("no substitutions".into()))?;
        for f in forms {
            if f.degree != 1 && !f.is_zero() {
                return Err(Error::InvalidInput("substitutions must be linear".into()));
            }
            if f.num_vars != target_vars {
                return Err(Error::InvalidInput("substitutions live in different rings".into()));
            }
            if f.field != self.field {
                return Err(Error::FieldMismatch(self.field, f.field));
            }
        }
        let one = HomogeneousForm::constant(target_vars, Scalar::one(self.field));
        let mut powers: Vec<Vec<HomogeneousForm>> = Vec::with_capacity(forms.len());
        for f in forms {
            let f = if f.is_zero() { HomogeneousForm::zero(target_vars, 1, self.field) } else { f.clone() };
            let mut v = vec![one.clone()];
            for _ in 0..self.degree {
                let next = v.last().expect("nonempty").product(&f)?;
                v.push(next);
            }
            powers.push(v);
        }
        let mut out = HomogeneousForm::zero(target_vars, self.degree, self.field);
        for (e, c) in &self.terms {
            let mut t = HomogeneousForm::constant(target_vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.product(&powers[i][k as usize])?;
                }
            }
            for (te, tc) in t.terms {
                out.add_term(te, tc)?;
            }
        }
        Ok(out)
    }

    /// Maps coefficients into another field (reduction mod p, float image).
    pub fn convert(&self, target: FieldSpec, choice: RootChoice) -> Result<HomogeneousForm> {
        let mut out = HomogeneousForm::zero(self.num_vars, self.degree, target);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.convert(target, choice)?)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> FormJson {
        FormJson {
            degree: self.degree,
            vars: self.num_vars,
            terms: self.terms().map(|(e, c)| TermJson { exp: e.clone(), coef: serde_json::Value::String(c.to_string()) }).collect(),
        }
    }

    pub fn from_json(j: &FormJson, field: FieldSpec) -> Result<HomogeneousForm> {
        let mut f = HomogeneousForm::zero(j.vars, j.degree, field);
        for t in &j.terms {
            f.add_term(t.exp.clone(), Scalar::from_json(field, &t.coef)?)?;
        }
        Ok(f)
    }
}

/// `substitute_linear`: pulls a ternary form back along three linear forms.
/// The result vanishes on the cone over `{c = 0}` with vertex `{L = 0}`.
pub fn substitute_linear(c: &HomogeneousForm, l: &[HomogeneousForm; 3]) -> Result<HomogeneousForm> {
    if c.num_vars() != 3 {
        return Err(Error::InvalidInput("cone construction needs a ternary form".into()));
    }
    check_independent(l)?;
    c.substitute(l)
}

/// Errors with `DegenerateProjection` unless the linear forms are independent.
pub fn check_independent(l: &[HomogeneousForm]) -> Result<()> {
    let Some(first) = l.first() else { return Ok(()) };
    let field = first.field();
    let rows: Vec<Vec<Scalar>> = l.iter().map(|f| if f.degree() == 1 { f.coefficient_vector() } else { vec![Scalar::zero(field); first.num_vars()] }).collect();
    let r = if field.is_approx() {
        let fl: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect()).collect();
        crate::linalg::numeric::rank(&fl, first.num_vars(), 1e-12)
    } else {
        rank(&ScalarArith(field), &rows, first.num_vars())
    };
    if r < l.len() {
        return Err(Error::DegenerateProjection);
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coef: serde_json::Value,
}

/// Wire format of a form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormJson {
    pub degree: u32,
    pub vars: usize,
    pub terms: Vec<TermJson>,
}

impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: FieldSpec = FieldSpec::Rational;

    fn int(v: i64) -> Scalar {
        Scalar::from_i64(Q, v)
    }

    fn random_form(rng: &mut ChaCha8Rng, vars: usize, d: u32, field: FieldSpec) -> HomogeneousForm {
        let basis = monomial_basis(vars - 1, d);
        let coeffs: Vec<Scalar> = basis.iter().map(|_| Scalar::from_i64(field, rng.gen_range(-5..=5))).collect();
        HomogeneousForm::from_coefficients(vars - 1, d, field, &coeffs).unwrap()
    }

    fn random_point(rng: &mut ChaCha8Rng, vars: usize, field: FieldSpec) -> Vec<Scalar> {
        (0..vars).map(|_| Scalar::from_i64(field, rng.gen_range(-7..=7))).collect()
    }

    #[test]
    fn basis_sizes_and_order() {
        assert_eq!(monomial_basis(4, 3).len(), 35);
        assert_eq!(monomial_basis(3, 5).len(), 56);
        assert_eq!(monomial_basis(2, 1), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let b = monomial_basis(2, 2);
        assert_eq!(b[0], vec![2, 0, 0]);
        assert_eq!(b[1], vec![1, 1, 0]);
        assert_eq!(b[5], vec![0, 0, 2]);
        for n in 1..=6 {
            for d in 0..=12 {
                assert_eq!(monomial_basis(n, d).len(), monomial_count(n, d));
            }
        }
    }

    #[test]
    fn evaluation_examples() {
        let f = HomogeneousForm::from_terms(3, 2, Q, vec![(vec![2, 0, 0], int(1)), (vec![0, 1, 1], int(1))]).unwrap();
        assert_eq!(f.evaluate(&[int(1), int(1), int(1)]).unwrap(), int(2));
        // w⁴ − w(x³+y³+z³+t³) + 3xyzt in (x,y,z,t,w)
        let mut b = vec![(vec![0, 0, 0, 0, 4], int(1)), (vec![1, 1, 1, 1, 0], int(3))];
        for i in 0..4 {
            let mut e = vec![0, 0, 0, 0, 1];
            e[i] = 3;
            b.push((e, int(-1)));
        }
        let bk = HomogeneousForm::from_terms(5, 4, Q, b).unwrap();
        assert!(bk.evaluate(&[int(0), int(0), int(0), int(1), int(0)]).unwrap().is_zero());
    }

    #[test]
    fn partial_and_product() {
        let x2y = HomogeneousForm::from_terms(2, 3, Q, vec![(vec![2, 1], int(1))]).unwrap();
        let d = x2y.partial(0);
        assert_eq!(d, HomogeneousForm::from_terms(2, 2, Q, vec![(vec![1, 1], int(2))]).unwrap());
        let x = HomogeneousForm::variable(2, 0, Q);
        let y = HomogeneousForm::variable(2, 1, Q);
        let xy = x.product(&y).unwrap();
        assert_eq!(xy.degree(), 2);
        assert_eq!(xy.coefficient(&[1, 1]), int(1));
        let one = HomogeneousForm::constant(2, int(1));
        assert_eq!(x2y.product(&one).unwrap(), x2y);
    }

    #[test]
    fn cone_over_line_is_hyperplane() {
        let c = HomogeneousForm::variable(3, 0, Q);
        let l = [HomogeneousForm::variable(6, 0, Q), HomogeneousForm::variable(6, 1, Q), HomogeneousForm::variable(6, 2, Q)];
        assert_eq!(substitute_linear(&c, &l).unwrap(), HomogeneousForm::variable(6, 0, Q));
        let bad = [l[0].clone(), l[0].clone(), l[1].clone()];
        assert!(matches!(substitute_linear(&c, &bad), Err(Error::DegenerateProjection)));
    }

    #[test]
    fn json_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_form(&mut rng, 4, 3, Q);
        let j = serde_json::to_string(&f.to_json()).unwrap();
        let back: FormJson = serde_json::from_str(&j).unwrap();
        assert_eq!(HomogeneousForm::from_json(&back, Q).unwrap(), f);
    }

    proptest! {
        #[test]
        fn euler_identity(seed in any::<u64>(), vars in 2usize..5, d in 1u32..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_form(&mut rng, vars, d, Q);
            let mut acc = HomogeneousForm::zero(vars, d, Q);
            for i in 0..vars {
                let xi = HomogeneousForm::variable(vars, i, Q);
                acc = acc.add(&xi.product(&f.partial(i)).unwrap()).unwrap();
            }
            prop_assert_eq!(acc, f.scale(&int(d as i64)).unwrap());
        }

        #[test]
        fn product_evaluates_multiplicatively(seed in any::<u64>(), d1 in 0u32..4, d2 in 0u32..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_form(&mut rng, 3, d1, Q);
            let g = random_form(&mut rng, 3, d2, Q);
            let p = random_point(&mut rng, 3, Q);
            let lhs = f.product(&g).unwrap().evaluate(&p).unwrap();
            prop_assert_eq!(lhs, f.evaluate(&p).unwrap().mul(&g.evaluate(&p).unwrap()).unwrap());
        }

        #[test]
        fn pullback_commutes_with_evaluation(seed in any::<u64>(), t in 0u32..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_form(&mut rng, 3, t, Q);
            let l = [random_form(&mut rng, 6, 1, Q), random_form(&mut rng, 6, 1, Q), random_form(&mut rng, 6, 1, Q)];
            let Ok(pb) = substitute_linear(&c, &l) else { return Ok(()) };
            prop_assert!(pb.degree() == t);
            let p = random_point(&mut rng, 6, Q);
            let image: Vec<Scalar> = l.iter().map(|li| li.evaluate(&p).unwrap()).collect();
            prop_assert_eq!(pb.evaluate(&p).unwrap(), c.evaluate(&image).unwrap());
        }
    }
}

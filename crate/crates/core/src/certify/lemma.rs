//! Base loci of linear systems: the non-vanishing check and the
//! zero-dimensional base-locus route for hypersurfaces.

use serde::{Deserialize, Serialize};

use crate::conditions;
use crate::error::{Error, Result};
use crate::linalg::{rank, ScalarArith};
use crate::pointgeom::{find_nodes_enumerate, PointSet};
use crate::polyform::HomogeneousForm;
use crate::scalar::{FieldSpec, RootChoice, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonvanishingReport {
    /// Dimension of the ambient projective space.
    pub n: usize,
    /// Degree of the forms.
    pub k: u32,
    /// Interpolation degree `n(k − 1)`.
    pub degree: u32,
    pub base_points: usize,
    pub rank: usize,
    pub independent: bool,
    /// False flags a counterexample: a bug or a non-reduced base locus.
    pub theorem_consistent: bool,
    pub prime: u64,
    pub points: Vec<Vec<String>>,
}

fn common_shape(system: &[HomogeneousForm]) -> Result<(usize, u32, FieldSpec)> {
    let first = system.first().ok_or_else(|| Error::InvalidInput("empty linear system".into()))?;
    let (nv, k, field) = (first.num_vars(), first.degree(), first.field());
    if system.iter().any(|f| f.num_vars() != nv || f.degree() != k || f.field() != field) {
        return Err(Error::InvalidInput("forms of a linear system share variables, degree and field".into()));
    }
    Ok((nv - 1, k, field))
}

/// Dimension of the span of the forms.
fn system_rank(system: &[HomogeneousForm]) -> usize {
    let field = system[0].field();
    let rows: Vec<Vec<Scalar>> = system.iter().map(|f| f.coefficient_vector()).collect();
    let ncols = rows.first().map_or(0, |r| r.len());
    rank(&ScalarArith(field), &rows, ncols)
}

/// Base locus of a linear system of degree-`k` forms on Pⁿ over F_p, and
/// whether its points impose independent conditions in degree `n(k − 1)`.
///
/// Only F_p-rational base points are seen; a subset of an independent set
/// is independent, so a failure is still a genuine counterexample to the
/// enumerated part.
pub fn nonvanishing_check(system: &[HomogeneousForm], budget: u128) -> Result<NonvanishingReport> {
    let (n, k, field) = common_shape(system)?;
    let FieldSpec::Prime { p } = field else {
        return Err(Error::InvalidInput("base loci are enumerated over a prime field".into()));
    };
    if system_rank(system) < n {
        return Err(Error::PositiveDimensionalBaseLocus(system_rank(system)));
    }
    let base = find_nodes_enumerate(system, budget).map_err(|e| match e {
        Error::TooLarge { size, budget } => Error::BudgetExhausted(format!("{size} points of Pⁿ(F_p) exceed the budget {budget}")),
        e => e,
    })?;
    let bezout = (k as u128).pow(n as u32);
    if base.len() as u128 > bezout {
        return Err(Error::PositiveDimensionalBaseLocus(base.len()));
    }
    let degree = n as u32 * k.saturating_sub(1);
    let rep = conditions::defect(&base, degree)?;
    Ok(NonvanishingReport {
        n,
        k,
        degree,
        base_points: base.len(),
        rank: rep.rank,
        independent: rep.independent,
        theorem_consistent: rep.independent,
        prime: p,
        points: base.points().iter().map(|q| q.to_strings()).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseLocusReport {
    /// Degree of the hypersurface.
    pub n: u32,
    /// Degree of the linear system.
    pub degree: u32,
    pub forms: usize,
    pub base_points: usize,
    /// `n·k³`: at most this many isolated points on a threefold of degree n.
    pub bezout_bound: u64,
    pub prime: u64,
}

/// Zero-dimensional base locus on `{f = 0} ⊂ P⁴` of forms of degree `k`
/// with `2k < n` passing through every node; checked over F_p.
pub fn base_locus_route(f: &HomogeneousForm, system: &[HomogeneousForm], nodes: &PointSet, budget: u128) -> Result<BaseLocusReport> {
    let (amb, k, field) = common_shape(system)?;
    let n = f.degree();
    if amb != 4 || f.num_vars() != 5 {
        return Err(Error::InvalidInput("the base-locus route works on P⁴".into()));
    }
    if 2 * k >= n {
        return Err(Error::HypothesisViolated(format!("linear system degree {k} needs 2k < n = {n}")));
    }
    for (i, q) in nodes.points().iter().enumerate() {
        for h in system {
            let h = if h.field() == q.field() { h.clone() } else { h.convert(q.field(), RootChoice::Smaller)? };
            if !conditions::on_form(&h, q)? {
                return Err(Error::HypothesisViolated(format!("linear system does not pass through node {i}")));
            }
        }
    }
    let p = match field {
        FieldSpec::Prime { p } => p,
        FieldSpec::Approx { .. } => return Err(Error::InvalidInput("the base-locus route needs exact data".into())),
        _ => nodes.field().prime().unwrap_or(31),
    };
    let target = FieldSpec::Prime { p };
    let mut forms = vec![f.convert(target, RootChoice::Smaller)?];
    for h in system {
        forms.push(h.convert(target, RootChoice::Smaller)?);
    }
    if system_rank(&forms[1..]) < 3 {
        return Err(Error::PositiveDimensionalBaseLocus(system_rank(&forms[1..])));
    }
    let base = find_nodes_enumerate(&forms, budget).map_err(|e| match e {
        Error::TooLarge { size, budget } => Error::BudgetExhausted(format!("{size} points of P⁴(F_{p}) exceed the budget {budget}")),
        e => e,
    })?;
    let bezout = n as u64 * (k as u64).pow(3);
    if base.len() as u64 > bezout {
        return Err(Error::PositiveDimensionalBaseLocus(base.len()));
    }
    Ok(BaseLocusReport { n, degree: k, forms: system.len(), base_points: base.len(), bezout_bound: bezout, prime: p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointgeom::random_scalar;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const FP: FieldSpec = FieldSpec::Prime { p: 101 };

    fn product_of_lines(rng: &mut impl Rng, nv: usize, k: u32) -> HomogeneousForm {
        let mut acc = HomogeneousForm::constant(nv, Scalar::one(FP));
        for _ in 0..k {
            let c: Vec<Scalar> = (0..nv).map(|_| random_scalar(FP, rng)).collect();
            acc = acc.product(&HomogeneousForm::linear(&c).unwrap()).unwrap();
        }
        acc
    }

    #[test]
    fn split_conics_meet_in_four_independent_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let sys = [product_of_lines(&mut rng, 3, 2), product_of_lines(&mut rng, 3, 2)];
        let r = nonvanishing_check(&sys, 1 << 20).unwrap();
        assert_eq!((r.base_points, r.degree, r.rank), (4, 2, 4));
        assert!(r.theorem_consistent);
    }

    #[test]
    fn split_cubic_pencil_has_nine_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let sys = [product_of_lines(&mut rng, 3, 3), product_of_lines(&mut rng, 3, 3)];
        let r = nonvanishing_check(&sys, 1 << 20).unwrap();
        assert_eq!((r.base_points, r.degree), (9, 4));
        assert!(r.independent);
    }

    #[test]
    fn common_component_is_positive_dimensional() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let l = product_of_lines(&mut rng, 3, 1);
        let a = l.product(&product_of_lines(&mut rng, 3, 1)).unwrap();
        let b = l.product(&product_of_lines(&mut rng, 3, 1)).unwrap();
        assert!(matches!(nonvanishing_check(&[a.clone(), b], 1 << 20), Err(Error::PositiveDimensionalBaseLocus(_))));
        assert!(matches!(nonvanishing_check(&[a], 1 << 20), Err(Error::PositiveDimensionalBaseLocus(_))));
    }

    #[test]
    fn budget_is_enforced() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let sys = [product_of_lines(&mut rng, 3, 2), product_of_lines(&mut rng, 3, 2)];
        assert!(matches!(nonvanishing_check(&sys, 100), Err(Error::BudgetExhausted(_))));
    }
}

//! Exhaustive search for F_p-rational common zeros.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polyform::{CompiledFp, HomogeneousForm};
use crate::scalar::{FieldSpec, RootChoice};

use super::{PointSet, ProjectivePoint};

/// Default cap on the number of projective points visited.
pub const DEFAULT_ENUM_BUDGET: u128 = 400_000_000;

/// Number of F_p-points of Pᴺ.
pub fn projective_size(p: u64, n: usize) -> u128 {
    (0..=n as u32).map(|k| (p as u128).pow(k)).sum()
}

/// Common zeros of compiled forms on Pᴺ(F_p), in canonical order (leading
/// coordinate position first, then lexicographic residues).
pub fn find_zeros_enumerate(forms: &[CompiledFp], n: usize, p: u64, budget: u128) -> Result<Vec<Vec<u64>>> {
    let size = projective_size(p, n);
    if size > budget {
        return Err(Error::TooLarge { size, budget });
    }
    let mut out = Vec::new();
    for lead in 0..=n {
        let free = n - lead;
        let count = (p as u128).pow(free as u32) as u64;
        let mut chunk: Vec<Vec<u64>> = (0..count)
            .into_par_iter()
            .map_init(
                || (vec![0u64; n + 1], Vec::new()),
                |(pt, scratch), idx| {
                    pt.iter_mut().for_each(|x| *x = 0);
                    pt[lead] = 1;
                    let mut r = idx;
                    for k in (lead + 1..=n).rev() {
                        pt[k] = r % p;
                        r /= p;
                    }
                    forms.iter().all(|f| f.eval_with(pt, scratch) == 0).then(|| pt.clone())
                },
            )
            .flatten()
            .collect();
        out.append(&mut chunk);
    }
    Ok(out)
}

/// `find_nodes_enumerate`: every F_p-point where all `forms` vanish.
/// Pass a form together with its partial derivatives to get singular points.
pub fn find_nodes_enumerate(forms: &[HomogeneousForm], budget: u128) -> Result<PointSet> {
    let first = forms.first().ok_or_else(|| Error::InvalidInput("no forms to enumerate".into()))?;
    let FieldSpec::Prime { p } = first.field() else {
        return Err(Error::InvalidInput("enumeration needs a prime field".into()));
    };
    let n = first.num_vars() - 1;
    if n > 4 {
        return Err(Error::InvalidInput(format!("enumeration supports N <= 4, got {n}")));
    }
    let mut compiled = forms
        .iter()
        .filter(|f| !f.is_zero())
        .map(|f| CompiledFp::new(f, p, RootChoice::Smaller))
        .collect::<Result<Vec<_>>>()?;
    // low-degree, sparse forms reject most points first
    compiled.sort_by_key(|f| f.degree());
    let zeros = find_zeros_enumerate(&compiled, n, p, budget)?;
    let pts = zeros.iter().map(|z| ProjectivePoint::from_residues(z, p)).collect::<Result<Vec<_>>>()?;
    PointSet::new(n, first.field(), pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn sizes() {
        assert_eq!(projective_size(2, 2), 7);
        assert_eq!(projective_size(31, 4), 954_305);
    }

    #[test]
    fn conic_has_p_plus_one_points() {
        let fp = FieldSpec::Prime { p: 13 };
        let one = Scalar::one(fp);
        let c = HomogeneousForm::from_terms(3, 2, fp, vec![(vec![2, 0, 0], one.clone()), (vec![0, 1, 1], one.neg())]).unwrap();
        let s = find_nodes_enumerate(&[c], DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(s.len(), 14);
    }

    #[test]
    fn budget_is_enforced() {
        let fp = FieldSpec::Prime { p: 101 };
        let x = HomogeneousForm::variable(5, 0, fp);
        assert!(matches!(find_nodes_enumerate(&[x], 1000), Err(Error::TooLarge { .. })));
    }
}

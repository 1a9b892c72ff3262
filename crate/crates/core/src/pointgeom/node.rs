//! Ordinary double point test.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kernel, left_kernel, rank, ScalarArith};
use crate::polyform::HomogeneousForm;
use crate::scalar::Scalar;

use super::ProjectivePoint;

/// Relative tolerance for float node checks (points come out of Newton
/// refinement accurate to roughly 1e−13).
pub const NUMERIC_NODE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeReport {
    pub point: Vec<String>,
    /// `c − rank J`, where `J` is the Jacobian of the `c` defining forms.
    pub gradient_rank_defect: usize,
    /// Rank of the quadratic part of the local equation on the tangent space
    /// of the smooth ambient cut out by the other equations.
    pub hessian_rank: usize,
    /// Dimension of that tangent space; equality means a nondegenerate cone.
    pub expected_hessian_rank: usize,
    pub ordinary: bool,
}

/// Checks that `p` is an ordinary double point of `{F₁ = … = F_c = 0}`.
///
/// The Jacobian must have rank exactly `c − 1`; the left-kernel combination
/// `h` of the equations then has vanishing gradient at `p`, and the node is
/// ordinary iff the affine Hessian of `h` restricted to the kernel of the
/// remaining gradients has full rank.
pub fn verify_node(p: &ProjectivePoint, equations: &[HomogeneousForm]) -> Result<NodeReport> {
    if equations.is_empty() {
        return Err(Error::InvalidInput("no defining equations".into()));
    }
    if p.field().is_approx() {
        return verify_node_numeric(p, equations);
    }
    let field = p.field();
    let ar = ScalarArith(field);
    for f in equations {
        if !f.evaluate(p.coords())?.is_zero() {
            return Err(Error::PointNotOnVariety(0));
        }
    }
    let nv = p.coords().len();
    let c = equations.len();
    let chart = p.coords().iter().position(|x| !x.is_zero()).expect("nonzero point");
    let jac: Vec<Vec<Scalar>> = equations
        .iter()
        .map(|f| f.partials().iter().map(|d| d.evaluate(p.coords())).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let rj = rank(&ar, &jac, nv);
    let defect = c - rj;
    let dim_t = nv - 1 - rj;
    let mut report = NodeReport {
        point: p.to_strings(),
        gradient_rank_defect: defect,
        hessian_rank: 0,
        expected_hessian_rank: dim_t,
        ordinary: false,
    };
    if defect != 1 {
        return Ok(report);
    }
    let lambda = left_kernel(&ar, &jac, nv).pop().expect("one-dimensional left kernel");
    let mut hess = vec![vec![Scalar::zero(field); nv - 1]; nv - 1];
    for (f, l) in equations.iter().zip(&lambda) {
        if l.is_zero() {
            continue;
        }
        let parts = f.partials();
        for (a, ia) in (0..nv).filter(|&i| i != chart).enumerate() {
            let row = parts[ia].partials();
            for (b, ib) in (0..nv).filter(|&i| i != chart).enumerate() {
                let v = row[ib].evaluate(p.coords())?.mul(l)?;
                hess[a][b] = hess[a][b].add(&v)?;
            }
        }
    }
    let jac_aff: Vec<Vec<Scalar>> =
        jac.iter().map(|r| r.iter().enumerate().filter(|(i, _)| *i != chart).map(|(_, x)| x.clone()).collect()).collect();
    let tangent = kernel(&ar, &jac_aff, nv - 1);
    // Bᵀ H B
    let hb: Vec<Vec<Scalar>> = hess
        .iter()
        .map(|row| tangent.iter().map(|v| dot(row, v)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let q: Vec<Vec<Scalar>> = tangent
        .iter()
        .map(|u| {
            (0..tangent.len())
                .map(|j| {
                    let col: Vec<Scalar> = hb.iter().map(|r| r[j].clone()).collect();
                    dot(u, &col)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    report.hessian_rank = rank(&ar, &q, tangent.len());
    report.expected_hessian_rank = tangent.len();
    report.ordinary = report.hessian_rank == tangent.len();
    Ok(report)
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Result<Scalar> {
    let mut acc = Scalar::zero(a[0].field());
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(&x.mul(y)?)?;
    }
    Ok(acc)
}

fn coefficient_scale(f: &HomogeneousForm) -> f64 {
    f.terms().map(|(_, c)| c.to_f64().unwrap_or(0.0).abs()).sum::<f64>().max(1e-300)
}

fn eval_f64(f: &HomogeneousForm, x: &[f64]) -> f64 {
    f.terms()
        .map(|(e, c)| c.to_f64().unwrap_or(0.0) * e.iter().zip(x).map(|(&k, v)| v.powi(k as i32)).product::<f64>())
        .sum()
}

fn numeric_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax).count()
}

fn verify_node_numeric(p: &ProjectivePoint, equations: &[HomogeneousForm]) -> Result<NodeReport> {
    let x = p.to_f64()?;
    let nv = x.len();
    let c = equations.len();
    for f in equations {
        if eval_f64(f, &x).abs() > NUMERIC_NODE_TOL * coefficient_scale(f) {
            return Err(Error::PointNotOnVariety(0));
        }
    }
    let chart = (0..nv).max_by(|&a, &b| x[a].abs().total_cmp(&x[b].abs())).expect("nonempty");
    let jac = DMatrix::from_fn(c, nv, |j, i| eval_f64(&equations[j].partial(i), &x) / coefficient_scale(&equations[j]));
    // absolute threshold: a vanishing gradient must be tiny relative to the coefficients
    let sv = jac.singular_values();
    let rj = sv.iter().filter(|&&s| s > NUMERIC_NODE_TOL).count();
    let defect = c - rj;
    let mut report = NodeReport {
        point: p.to_strings(),
        gradient_rank_defect: defect,
        hessian_rank: 0,
        expected_hessian_rank: nv - 1 - rj,
        ordinary: false,
    };
    if defect != 1 {
        return Ok(report);
    }
    let svd = jac.transpose().svd(false, true);
    // left-kernel vector of J = right singular vector of Jᵀ for the smallest value
    let vt = svd.v_t.expect("requested");
    let k = (0..svd.singular_values.len()).min_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b])).expect("nonempty");
    let lambda: Vec<f64> = (0..c).map(|j| vt[(k, j)] / coefficient_scale(&equations[j])).collect();
    let idx: Vec<usize> = (0..nv).filter(|&i| i != chart).collect();
    let mut hess = DMatrix::<f64>::zeros(nv - 1, nv - 1);
    for (f, l) in equations.iter().zip(&lambda) {
        let parts = f.partials();
        for (a, &ia) in idx.iter().enumerate() {
            let row = parts[ia].partials();
            for (b, &ib) in idx.iter().enumerate() {
                hess[(a, b)] += l * eval_f64(&row[ib], &x);
            }
        }
    }
    let jac_aff = DMatrix::from_fn(c, nv - 1, |j, a| jac[(j, idx[a])]);
    // tangent space: right singular vectors of the affine Jacobian beyond its rank
    let padded = DMatrix::from_fn(nv - 1, nv - 1, |i, j| if i < c { jac_aff[(i, j)] } else { 0.0 });
    let svd_t = padded.svd(false, true);
    let vt_t = svd_t.v_t.expect("requested");
    let mut order: Vec<usize> = (0..nv - 1).collect();
    order.sort_by(|&a, &b| svd_t.singular_values[b].total_cmp(&svd_t.singular_values[a]));
    let basis: Vec<usize> = order[rj..].to_vec();
    let b = DMatrix::from_fn(nv - 1, basis.len(), |i, j| vt_t[(basis[j], i)]);
    let q = b.transpose() * hess * &b;
    report.hessian_rank = numeric_rank(&q, 1e-6);
    report.expected_hessian_rank = basis.len();
    report.ordinary = report.hessian_rank == basis.len();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldSpec;

    const Q: FieldSpec = FieldSpec::Rational;

    fn form(terms: &[(&[u32], i64)], field: FieldSpec) -> HomogeneousForm {
        let d = terms[0].0.iter().sum();
        HomogeneousForm::from_terms(terms[0].0.len(), d, field, terms.iter().map(|(e, c)| (e.to_vec(), Scalar::from_i64(field, *c))).collect()).unwrap()
    }

    fn pt(v: &[i64], field: FieldSpec) -> ProjectivePoint {
        ProjectivePoint::new(v.iter().map(|&x| Scalar::from_i64(field, x)).collect()).unwrap()
    }

    #[test]
    fn standard_node() {
        let f = form(&[(&[1, 1, 0, 0, 0], 1), (&[0, 0, 1, 1, 0], 1)], Q);
        let r = verify_node(&pt(&[0, 0, 0, 0, 1], Q), &[f.clone()]).unwrap();
        assert!(r.ordinary);
        assert_eq!((r.gradient_rank_defect, r.hessian_rank), (1, 4));
        let off = pt(&[1, 1, 0, 0, 1], Q);
        assert!(matches!(verify_node(&off, &[f]), Err(Error::PointNotOnVariety(_))));
    }

    #[test]
    fn rank_two_cone_is_not_ordinary() {
        let f = form(&[(&[2, 0, 0, 0, 0], 1), (&[0, 2, 0, 0, 0], 1)], Q);
        let r = verify_node(&pt(&[0, 0, 1, 0, 0], Q), &[f]).unwrap();
        assert!(!r.ordinary);
        assert_eq!(r.hessian_rank, 2);
    }

    #[test]
    fn smooth_point_has_no_defect() {
        let f = form(&[(&[1, 1, 0, 0, 0], 1), (&[0, 0, 1, 1, 0], 1)], Q);
        let r = verify_node(&pt(&[1, 0, 0, 0, 0], Q), &[f]).unwrap();
        assert_eq!(r.gradient_rank_defect, 0);
        assert!(!r.ordinary);
    }

    /// `x₀x₁ + x₂x₃ + x₄x₅·0` style complete intersection: a hyperplane
    /// section `x₅ = 0` of a quadric node cone.
    #[test]
    fn complete_intersection_node() {
        let q = form(&[(&[1, 1, 0, 0, 0, 0], 1), (&[0, 0, 1, 1, 0, 0], 1), (&[0, 0, 0, 0, 0, 2], 1)], Q);
        let h = form(&[(&[0, 0, 0, 0, 0, 1], 1)], Q);
        let r = verify_node(&pt(&[0, 0, 0, 0, 1, 0], Q), &[q, h]).unwrap();
        assert!(r.ordinary, "{r:?}");
        assert_eq!(r.expected_hessian_rank, 4);
    }

    #[test]
    fn numeric_node() {
        let fa = FieldSpec::Approx { eps: 1e-8 };
        let f = form(&[(&[1, 1, 0, 0, 0], 1), (&[0, 0, 1, 1, 0], 1)], fa);
        let p = ProjectivePoint::from_f64(&[0.0, 0.0, 0.0, 0.0, 1.0], 1e-8).unwrap();
        assert!(verify_node(&p, &[f]).unwrap().ordinary);
        let g = form(&[(&[2, 0, 0, 0, 0], 1), (&[0, 2, 0, 0, 0], 1)], fa);
        let apex = ProjectivePoint::from_f64(&[0.0, 0.0, 1.0, 0.0, 0.0], 1e-8).unwrap();
        assert!(!verify_node(&apex, &[g]).unwrap().ordinary);
    }
}

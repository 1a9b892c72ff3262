//! Multistart Newton search for real singular points of a hypersurface.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polyform::HomogeneousForm;
use crate::scalar::FieldSpec;

use super::node::{verify_node, NodeReport};
use super::{PointSet, ProjectivePoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericOptions {
    pub num_starts: usize,
    pub cluster_radius: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions { num_starts: 20_000, cluster_radius: 1e-6, max_iterations: 80, seed: 0xB4 }
    }
}

/// Float copy of a form with its gradient and Hessian.
struct Compiled {
    f: Vec<(Vec<u32>, f64)>,
    grad: Vec<Vec<(Vec<u32>, f64)>>,
    hess: Vec<Vec<Vec<(Vec<u32>, f64)>>>,
    scale: f64,
}

fn terms_f64(f: &HomogeneousForm) -> Result<Vec<(Vec<u32>, f64)>> {
    f.terms().map(|(e, c)| Ok((e.clone(), c.to_f64()?))).collect()
}

fn eval(terms: &[(Vec<u32>, f64)], x: &[f64]) -> f64 {
    terms.iter().map(|(e, c)| c * e.iter().zip(x).map(|(&k, v)| v.powi(k as i32)).product::<f64>()).sum()
}

impl Compiled {
    fn new(f: &HomogeneousForm) -> Result<Self> {
        let parts = f.partials();
        let grad = parts.iter().map(terms_f64).collect::<Result<Vec<_>>>()?;
        let hess = parts.iter().map(|d| d.partials().iter().map(terms_f64).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        let f64_terms = terms_f64(f)?;
        let scale = f64_terms.iter().map(|(_, c)| c.abs()).sum::<f64>().max(1e-300);
        Ok(Compiled { f: f64_terms, grad, hess, scale })
    }

    /// Gauss–Newton on `∇f = 0` restricted to the unit sphere.
    fn refine(&self, mut x: Vec<f64>, max_iter: usize) -> Option<Vec<f64>> {
        let n = x.len();
        for _ in 0..max_iter {
            let g: Vec<f64> = self.grad.iter().map(|t| eval(t, &x)).collect();
            let a = DMatrix::from_fn(n + 1, n, |i, j| if i < n { eval(&self.hess[i][j], &x) } else { x[j] });
            let b = DVector::from_fn(n + 1, |i, _| if i < n { -g[i] } else { 0.0 });
            let delta = a.svd(true, true).solve(&b, 1e-14).ok()?;
            for (xi, di) in x.iter_mut().zip(delta.iter()) {
                *xi += di;
            }
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !norm.is_finite() || norm == 0.0 {
                return None;
            }
            x.iter_mut().for_each(|v| *v /= norm);
            if delta.norm() < 1e-15 {
                break;
            }
        }
        let gnorm = self.grad.iter().map(|t| eval(t, &x).powi(2)).sum::<f64>().sqrt();
        (gnorm <= 1e-10 * self.scale && eval(&self.f, &x).abs() <= 1e-10 * self.scale).then_some(x)
    }
}

fn distance_pm(a: &[f64], b: &[f64]) -> f64 {
    let d1 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let d2 = a.iter().zip(b).map(|(x, y)| (x + y).powi(2)).sum::<f64>().sqrt();
    d1.min(d2)
}

/// Result of the numeric node search.
#[derive(Debug, Clone)]
pub struct NumericNodes {
    pub points: PointSet,
    pub reports: Vec<NodeReport>,
    pub converged_starts: usize,
}

/// `find_nodes_numeric`: real singular points of `{f = 0}` found from
/// `num_starts` random starts, clustered within `cluster_radius`, each
/// cluster checked with [`verify_node`].
pub fn find_nodes_numeric(f: &HomogeneousForm, opts: &NumericOptions) -> Result<NumericNodes> {
    let FieldSpec::Approx { eps } = f.field() else {
        return Err(Error::InvalidInput("numeric node search needs an approximate field".into()));
    };
    if opts.num_starts == 0 {
        return Err(Error::BudgetExhausted("no Newton starts".into()));
    }
    let comp = Compiled::new(f)?;
    let n = f.num_vars();
    let sols: Vec<Vec<f64>> = (0..opts.num_starts)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(i as u64);
            let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = x0.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-3 {
                return None;
            }
            comp.refine(x0.iter().map(|v| v / norm).collect(), opts.max_iterations)
        })
        .collect();
    let converged = sols.len();
    let mut centers: Vec<Vec<f64>> = Vec::new();
    for s in sols {
        let p = ProjectivePoint::from_f64(&s, eps)?.to_f64()?;
        if !centers.iter().any(|c| distance_pm(c, &p) < opts.cluster_radius) {
            centers.push(p);
        }
    }
    for i in 0..centers.len() {
        for j in 0..i {
            if distance_pm(&centers[i], &centers[j]) < 10.0 * opts.cluster_radius {
                return Err(Error::ClusterAmbiguous);
            }
        }
    }
    centers.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    let pts = centers.iter().map(|c| ProjectivePoint::from_f64(c, eps)).collect::<Result<Vec<_>>>()?;
    let reports = pts.iter().map(|p| verify_node(p, std::slice::from_ref(f))).collect::<Result<Vec<_>>>()?;
    Ok(NumericNodes { points: PointSet::new(n - 1, f.field(), pts)?, reports, converged_starts: converged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn smooth_quadric_has_no_nodes() {
        let fa = FieldSpec::Approx { eps: 1e-8 };
        let terms = (0..4).map(|i| {
            let mut e = vec![0; 4];
            e[i] = 2;
            (e, Scalar::one(fa))
        });
        let f = HomogeneousForm::from_terms(4, 2, fa, terms.collect()).unwrap();
        let r = find_nodes_numeric(&f, &NumericOptions { num_starts: 200, ..Default::default() }).unwrap();
        assert!(r.points.is_empty());
    }

    #[test]
    fn cayley_cubic_has_four_nodes() {
        // x₁x₂x₃ + x₀x₂x₃ + x₀x₁x₃ + x₀x₁x₂, nodes at the coordinate points
        let fa = FieldSpec::Approx { eps: 1e-8 };
        let terms = (0..4).map(|skip| {
            let e: Vec<u32> = (0..4).map(|i| u32::from(i != skip)).collect();
            (e, Scalar::one(fa))
        });
        let f = HomogeneousForm::from_terms(4, 3, fa, terms.collect()).unwrap();
        let r = find_nodes_numeric(&f, &NumericOptions { num_starts: 2000, ..Default::default() }).unwrap();
        assert_eq!(r.points.len(), 4);
        assert!(r.reports.iter().all(|x| x.ordinary));
    }
}

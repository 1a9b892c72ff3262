//! Constructive separators: for every node a product of cones over plane
//! curves and low-degree forms that vanishes on the other nodes only.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conditions;
use crate::error::{Error, Result};
use crate::linalg::{rank, ScalarArith};
use crate::planar::{self, ClusterPartition, StarParams};
use crate::pointgeom::{random_linear_form, PointSet, ProjectionMap, ProjectivePoint};
use crate::polyform::{FormJson, HomogeneousForm};
use crate::scalar::{FieldSpec, Scalar};

/// Numbers driving the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstructiveParams {
    /// Multiplier `m` of property ★.
    pub m: usize,
    /// A cluster of degree `j` costs `s·(j − 1)` degrees.
    pub s: u32,
    /// Degree `D` of the separators.
    pub target: u32,
    /// Smallest residual degree the plane-curve step accepts.
    pub gate_min: u32,
    pub budget_subsets: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    /// Separates the node inside its own cluster.
    ClusterSeparator,
    /// Cone over another cluster's curve.
    ClusterCone,
    /// Cone over a plane curve through the projected residual set.
    ResidualCone,
    /// Linear forms nonzero at the node, filling up the degree.
    Padding,
    /// Cone over a plane curve when all nodes span a plane.
    CoplanarCone,
}

/// A factor of a separator: the product of `forms`. Plane curves are kept
/// unexpanded and stand for their cones along the bundle's projection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub kind: FactorKind,
    pub degree: u32,
    pub forms: Vec<FormJson>,
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub on_projection: bool,
}

impl Factor {
    fn new(kind: FactorKind, forms: &[HomogeneousForm], on_projection: bool) -> Self {
        Factor { kind, degree: forms.iter().map(|f| f.degree()).sum(), forms: forms.iter().map(|f| f.to_json()).collect(), on_projection }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparatorEntry {
    pub node: usize,
    pub factors: Vec<Factor>,
    pub bookkeeping: String,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparatorFailure {
    pub node: usize,
    pub kind: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparatorBundle {
    #[serde(flatten)]
    pub field: FieldSpec,
    pub target_degree: u32,
    pub coplanar: bool,
    pub projection: Vec<FormJson>,
    pub partition: serde_json::Value,
    pub entries: Vec<SeparatorEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub failures: Vec<SeparatorFailure>,
}

impl SeparatorBundle {
    pub fn projection_map(&self) -> Result<ProjectionMap> {
        let forms = self.projection.iter().map(|j| HomogeneousForm::from_json(j, self.field)).collect::<Result<Vec<_>>>()?;
        let forms: [HomogeneousForm; 3] = forms.try_into().map_err(|_| Error::InvalidInput("a projection has three forms".into()))?;
        ProjectionMap::new(forms)
    }

    /// Re-evaluates every entry on `set`.
    pub fn verify(&self, set: &PointSet) -> Result<()> {
        let proj = self.projection_map()?;
        self.entries.iter().try_for_each(|e| e.verify(set, &proj, self.target_degree))
    }
}

impl SeparatorEntry {
    /// Degrees add up to `target`, every other node kills some factor and
    /// no factor vanishes at the node itself.
    pub fn verify(&self, set: &PointSet, projection: &ProjectionMap, target: u32) -> Result<()> {
        let bad = |m: String| Err(Error::InternalContradiction(format!("separator for node {}: {m}", self.node)));
        if self.node >= set.len() {
            return bad("node index out of range".into());
        }
        let field = set.field();
        let mut parts = Vec::new();
        let mut total = 0;
        for f in &self.factors {
            let forms = f.forms.iter().map(|j| HomogeneousForm::from_json(j, field)).collect::<Result<Vec<_>>>()?;
            let nv = if f.on_projection { 3 } else { set.ambient() + 1 };
            let deg: u32 = forms.iter().map(|g| g.degree()).sum();
            if deg != f.degree || forms.iter().any(|g| g.num_vars() != nv) {
                return bad(format!("malformed {:?} factor", f.kind));
            }
            total += deg;
            parts.push((forms, f.on_projection));
        }
        if total != target {
            return bad(format!("degrees add up to {total}, expected {target}"));
        }
        for (q, pt) in set.points().iter().enumerate() {
            let image = projection.apply(pt)?;
            let mut vanishes = false;
            for (forms, on_projection) in &parts {
                for g in forms {
                    let v = if *on_projection { g.evaluate(&image)? } else { g.evaluate(pt.coords())? };
                    vanishes |= v.is_zero();
                }
            }
            if q == self.node && vanishes {
                return bad("vanishes at the node".into());
            }
            if q != self.node && !vanishes {
                return bad(format!("nonzero at node {q}"));
            }
        }
        Ok(())
    }
}

/// Projection, cluster partition and degree budget shared by all nodes.
#[derive(Debug, Clone)]
pub struct ConstructivePlan {
    sigma: PointSet,
    params: ConstructiveParams,
    projection: ProjectionMap,
    projected: PointSet,
    coplanar: bool,
    partition: ClusterPartition,
}

fn gate(lemma: &str, detail: String) -> Error {
    Error::GateFailed { lemma: lemma.into(), detail }
}

/// Dimension of the linear span of the points, as a projective dimension.
fn span_dim(s: &PointSet) -> usize {
    let rows: Vec<Vec<Scalar>> = s.points().iter().map(|p| p.coords().to_vec()).collect();
    rank(&ScalarArith(s.field()), &rows, s.ambient() + 1).saturating_sub(1)
}

/// Whether the cone over `curve` along `proj` misses `p`.
fn cone_misses(curve: &HomogeneousForm, proj: &ProjectionMap, p: &ProjectivePoint) -> Result<bool> {
    Ok(!curve.evaluate(&proj.apply(p)?)?.is_zero())
}

/// `deg` random linear forms that do not vanish at `p`.
fn padding(p: &ProjectivePoint, deg: u32, rng: &mut impl Rng) -> Result<Vec<HomogeneousForm>> {
    let nv = p.ambient() + 1;
    let field = p.field();
    let mut out = Vec::with_capacity(deg as usize);
    for _ in 0..deg {
        let l = loop {
            let l = random_linear_form(nv, field, rng);
            if !l.is_zero() && !conditions::on_form(&l, p)? {
                break l;
            }
        };
        out.push(l);
    }
    Ok(out)
}

impl ConstructivePlan {
    /// Projects `sigma` to the plane (through `projection` when given) and
    /// extracts clusters against property ★ with multiplier `m`.
    pub fn new(sigma: &PointSet, params: ConstructiveParams, projection: Option<ProjectionMap>, rng: &mut impl Rng) -> Result<Self> {
        if sigma.field().is_approx() {
            return Err(Error::InvalidInput("constructive separators need exact arithmetic".into()));
        }
        if sigma.is_empty() {
            return Err(Error::InvalidInput("no nodes".into()));
        }
        let coplanar = span_dim(sigma) <= 2;
        let (projection, projected) = match projection {
            Some(m) => {
                let img = m.project(sigma)?;
                (m, img)
            }
            None => ProjectionMap::generic_for(sigma, rng)?,
        };
        let t_max = ((sigma.len() - 1) / params.m.max(1)).max(1) as u32;
        let partition = if coplanar {
            // all nodes in a plane: the projection is an isomorphism on it, no clusters
            let all: Vec<usize> = (0..sigma.len()).collect();
            ClusterPartition {
                clusters: Vec::new(),
                residual: all.clone(),
                residual_preimages: all,
                multiplicities: Default::default(),
                r_min: None,
            }
        } else {
            let pre: Vec<usize> = (0..sigma.len()).collect();
            planar::cluster_partition(&projected, &pre, StarParams::new(params.m, t_max)?, params.budget_subsets)?
        };
        Ok(ConstructivePlan { sigma: sigma.clone(), params, projection, projected, coplanar, partition })
    }

    pub fn partition(&self) -> &ClusterPartition {
        &self.partition
    }

    pub fn projection(&self) -> &ProjectionMap {
        &self.projection
    }

    /// Residual degree after paying for every cluster.
    pub fn residual_degree(&self) -> i64 {
        let paid: i64 = self.partition.clusters.iter().map(|c| self.params.s as i64 * (c.degree as i64 - 1)).sum();
        self.params.target as i64 - paid
    }

    /// Separator for node `i`.
    pub fn separator(&self, i: usize, rng: &mut impl Rng) -> Result<SeparatorEntry> {
        let p = self.sigma.get(i);
        let d_target = self.params.target;
        let budget = self.params.budget_subsets;
        let mut factors: Vec<Factor> = Vec::new();
        let bookkeeping;
        if self.coplanar {
            let c = planar::separating_curve(&self.projected, i, d_target, budget).map_err(|e| match e {
                Error::HypothesisViolated(m) => gate("coplanar corollary", m),
                e => e,
            })?;
            factors.push(Factor::new(FactorKind::CoplanarCone, &[c], true));
            bookkeeping = format!("coplanar: one plane curve of degree {d_target} through {} points", self.sigma.len() - 1);
        } else {
            let s = self.params.s;
            let mut parts = Vec::new();
            for c in &self.partition.clusters {
                if c.degree == 1 {
                    return Err(gate("r ≥ 2", format!("{} nodes project onto a line, more than m = {}", c.members.len(), self.params.m)));
                }
                let deg = s * (c.degree - 1);
                parts.push(format!("{s}·({}−1)", c.degree));
                if let Some(pos) = c.preimages.iter().position(|&q| q == i) {
                    let sub = self.sigma.subset(&c.preimages);
                    let f = conditions::separating_form(&sub, pos, deg)?.ok_or_else(|| {
                        Error::SeparationFailed(format!("node {i} is not separated inside its degree-{} cluster in degree {deg}", c.degree))
                    })?;
                    factors.push(Factor::new(FactorKind::ClusterSeparator, &[f], false));
                    continue;
                }
                if cone_misses(&c.curve, &self.projection, p)? {
                    factors.push(Factor::new(FactorKind::ClusterCone, std::slice::from_ref(&c.curve), true));
                    if deg > c.degree {
                        factors.push(Factor::new(FactorKind::Padding, &padding(p, deg - c.degree, rng)?, false));
                    }
                } else {
                    let mut idx = c.preimages.clone();
                    idx.push(i);
                    let sub = self.sigma.subset(&idx);
                    let f = conditions::separating_form(&sub, idx.len() - 1, deg)?
                        .ok_or_else(|| Error::SeparationFailed(format!("node {i} lies on the cone over a degree-{} cluster and is not separated", c.degree)))?;
                    factors.push(Factor::new(FactorKind::ClusterSeparator, &[f], false));
                }
            }
            let d = self.residual_degree();
            if d < self.params.gate_min as i64 {
                return Err(gate(
                    "residual degree",
                    format!("d = {d_target} − {} = {d} < {}", if parts.is_empty() { "0".into() } else { parts.join(" − ") }, self.params.gate_min),
                ));
            }
            let d = d as u32;
            let mut residual: Vec<usize> = self.partition.residual_preimages.iter().copied().filter(|&q| q != i).collect();
            if residual.is_empty() {
                factors.push(Factor::new(FactorKind::Padding, &padding(p, d, rng)?, false));
            } else {
                residual.push(i);
                let bound = planar::bese_size_bound(d);
                if residual.len() as u64 > bound {
                    return Err(gate("residual size", format!("{} points exceed {bound} in degree {d}", residual.len())));
                }
                let img = self.projected.subset(&residual);
                let c = planar::separating_curve(&img, residual.len() - 1, d, budget).map_err(|e| match e {
                    Error::HypothesisViolated(m) => gate("at most t(d+3−t)−2 points on a curve of degree t", m),
                    e => e,
                })?;
                factors.push(Factor::new(FactorKind::ResidualCone, &[c], true));
            }
            bookkeeping = format!(
                "D = {d_target} = {}{d}; residual {} points",
                parts.iter().map(|x| format!("{x} + ")).collect::<String>(),
                self.partition.residual_preimages.len()
            );
        }
        let entry = SeparatorEntry { node: i, factors, bookkeeping, verified: false };
        entry.verify(&self.sigma, &self.projection, d_target)?;
        Ok(SeparatorEntry { verified: true, ..entry })
    }

    /// Separators for every node, each with its own random stream.
    pub fn bundle(&self, seed: u64) -> SeparatorBundle {
        let results: Vec<Result<SeparatorEntry>> = (0..self.sigma.len())
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64 + 1);
                self.separator(i, &mut rng)
            })
            .collect();
        let mut entries = Vec::new();
        let mut failures = Vec::new();
        for (i, r) in results.into_iter().enumerate() {
            match r {
                Ok(e) => entries.push(e),
                Err(e) => failures.push(SeparatorFailure { node: i, kind: e.kind().into(), detail: e.to_string() }),
            }
        }
        SeparatorBundle {
            field: self.sigma.field(),
            target_degree: self.params.target,
            coplanar: self.coplanar,
            projection: self.projection.forms().iter().map(|f| f.to_json()).collect(),
            partition: self.partition.to_json(),
            entries,
            failures,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointgeom::random_scalar;

    const FP: FieldSpec = FieldSpec::Prime { p: 10_007 };

    fn random_set(rng: &mut ChaCha8Rng, n: usize, ambient: usize, mut pts: Vec<ProjectivePoint>) -> PointSet {
        let target = pts.len() + n;
        while pts.len() < target {
            let c: Vec<Scalar> = (0..=ambient).map(|_| random_scalar(FP, rng)).collect();
            if let Ok(q) = ProjectivePoint::new(c) {
                if !pts.contains(&q) {
                    pts.push(q);
                }
            }
        }
        PointSet::new(ambient, FP, pts).unwrap()
    }

    fn params(m: usize, target: u32) -> ConstructiveParams {
        ConstructiveParams { m, s: 5, target, gate_min: 5, budget_subsets: planar::DEFAULT_SUBSET_BUDGET }
    }

    #[test]
    fn general_points_get_residual_cones() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = random_set(&mut rng, 20, 5, Vec::new());
        let plan = ConstructivePlan::new(&s, params(12, 8), None, &mut rng).unwrap();
        assert!(plan.partition().clusters.is_empty());
        let b = plan.bundle(7);
        assert!(b.failures.is_empty(), "{:?}", b.failures);
        assert_eq!(b.entries.len(), 20);
        for e in &b.entries {
            e.verify(&s, plan.projection(), 8).unwrap();
        }
        // deterministic in the seed
        assert_eq!(plan.bundle(7), b);
    }

    #[test]
    fn cone_cluster_is_separated() {
        // 30 points on the quadric cone x0x2 = x1² project onto one conic under (x0, x1, x2)
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut pts = Vec::new();
        while pts.len() < 30 {
            let u = random_scalar(FP, &mut rng);
            let mut c = vec![Scalar::one(FP), u.clone(), u.mul(&u).unwrap()];
            c.extend((0..3).map(|_| random_scalar(FP, &mut rng)));
            let q = ProjectivePoint::new(c).unwrap();
            if !pts.contains(&q) {
                pts.push(q);
            }
        }
        let s = random_set(&mut rng, 6, 5, pts);
        let proj = ProjectionMap::standard(5, FP);
        let plan = ConstructivePlan::new(&s, params(12, 16), Some(proj), &mut rng).unwrap();
        assert_eq!(plan.partition().clusters.len(), 1);
        assert_eq!(plan.partition().clusters[0].degree, 2);
        assert_eq!(plan.residual_degree(), 11);
        let b = plan.bundle(3);
        assert!(b.failures.is_empty(), "{:?}", b.failures);
        for e in &b.entries {
            e.verify(&s, plan.projection(), 16).unwrap();
        }
    }

    #[test]
    fn line_cluster_fails_the_gate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // x2 = 0 on 8 nodes: their standard projection lies on a line
        let mut pts = Vec::new();
        while pts.len() < 8 {
            let mut c: Vec<Scalar> = (0..6).map(|_| random_scalar(FP, &mut rng)).collect();
            c[2] = Scalar::zero(FP);
            pts.push(ProjectivePoint::new(c).unwrap());
        }
        let s = random_set(&mut rng, 3, 5, pts);
        let plan = ConstructivePlan::new(&s, params(3, 8), Some(ProjectionMap::standard(5, FP)), &mut rng).unwrap();
        assert_eq!(plan.partition().clusters[0].degree, 1);
        let b = plan.bundle(0);
        assert!(b.entries.is_empty());
        assert!(b.failures.iter().all(|f| f.kind == "GateFailed" && f.detail.contains("r ≥ 2")));
    }

    #[test]
    fn tampered_entry_fails_verification() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = random_set(&mut rng, 10, 4, Vec::new());
        let p = ConstructiveParams { m: 8, s: 4, target: 5, gate_min: 3, budget_subsets: planar::DEFAULT_SUBSET_BUDGET };
        let plan = ConstructivePlan::new(&s, p, None, &mut rng).unwrap();
        let b = plan.bundle(1);
        assert!(b.failures.is_empty(), "{:?}", b.failures);
        let mut e = b.entries[0].clone();
        e.node = 1;
        assert!(e.verify(&s, plan.projection(), 5).is_err());
        assert!(b.entries[0].verify(&s, plan.projection(), 6).is_err());
        b.verify(&s).unwrap();
    }
}

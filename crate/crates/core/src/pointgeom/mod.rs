//! Projective points, node finders and linear projections to the plane.

pub mod enumerate;
pub mod node;
pub mod numeric;
pub mod plane_family;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyform::{check_independent, HomogeneousForm};
use crate::scalar::{FieldSpec, Scalar};

pub use enumerate::{find_nodes_enumerate, find_zeros_enumerate, DEFAULT_ENUM_BUDGET};
pub use node::{verify_node, NodeReport};
pub use numeric::{find_nodes_numeric, NumericOptions};
pub use plane_family::find_nodes_structured_plane_family;

/// Coordinates below this magnitude count as zero when choosing the sign
/// of an approximate point.
const APPROX_SIGN_FLOOR: f64 = 1e-9;

/// A point of Pᴺ in canonical form: first nonzero coordinate 1 (exact
/// fields) or unit Euclidean norm with positive leading coordinate (floats).
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePoint {
    coords: Vec<Scalar>,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        let field = coords.first().map(|c| c.field()).ok_or_else(|| Error::InvalidInput("point without coordinates".into()))?;
        if let Some(c) = coords.iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch(field, c.field()));
        }
        if field.is_approx() {
            let v: Vec<f64> = coords.iter().map(|c| c.to_f64().expect("float")).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(Error::InvalidInput("zero vector is not a projective point".into()));
            }
            let lead = v.iter().find(|x| x.abs() > APPROX_SIGN_FLOOR * norm).copied().unwrap_or(1.0);
            let s = if lead < 0.0 { -norm } else { norm };
            let FieldSpec::Approx { eps } = field else { unreachable!() };
            return Ok(ProjectivePoint { coords: v.iter().map(|x| Scalar::from_f64(eps, x / s)).collect() });
        }
        let Some(lead) = coords.iter().find(|c| !c.is_zero()) else {
            return Err(Error::InvalidInput("zero vector is not a projective point".into()));
        };
        let inv = lead.inv()?;
        let coords = coords.iter().map(|c| c.mul(&inv)).collect::<Result<Vec<_>>>()?;
        Ok(ProjectivePoint { coords })
    }

    pub fn from_residues(v: &[u64], p: u64) -> Result<Self> {
        Self::new(v.iter().map(|&x| Scalar::Prime(crate::scalar::Fp::new(x % p, p))).collect())
    }

    pub fn from_f64(v: &[f64], eps: f64) -> Result<Self> {
        Self::new(v.iter().map(|&x| Scalar::from_f64(eps, x)).collect())
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn ambient(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn field(&self) -> FieldSpec {
        self.coords[0].field()
    }

    /// Residues, when the point lives over a prime field.
    pub fn residues(&self) -> Option<Vec<u64>> {
        self.coords.iter().map(|c| c.as_fp().map(|x| x.residue())).collect()
    }

    pub fn to_f64(&self) -> Result<Vec<f64>> {
        self.coords.iter().map(|c| c.to_f64()).collect()
    }

    /// Same projective point. Float points compare up to sign within `tol`.
    pub fn same_as(&self, o: &ProjectivePoint, tol: f64) -> bool {
        if self.field().is_approx() {
            let (Ok(a), Ok(b)) = (self.to_f64(), o.to_f64()) else { return false };
            if a.len() != b.len() {
                return false;
            }
            let d1 = a.iter().zip(&b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
            let d2 = a.iter().zip(&b).map(|(x, y)| (x + y).powi(2)).sum::<f64>().sqrt();
            return d1.min(d2) < tol;
        }
        self == o
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_string()).collect()
    }
}

/// Tolerance used when comparing float points for distinctness.
pub const APPROX_POINT_TOL: f64 = 1e-6;

/// Pairwise distinct points of one projective space over one field.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    ambient: usize,
    field: FieldSpec,
    points: Vec<ProjectivePoint>,
}

impl PointSet {
    pub fn new(ambient: usize, field: FieldSpec, points: Vec<ProjectivePoint>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if p.ambient() != ambient {
                return Err(Error::InvalidInput(format!("point {i} lives in P^{} not P^{ambient}", p.ambient())));
            }
            if p.field() != field {
                return Err(Error::FieldMismatch(field, p.field()));
            }
        }
        for i in 0..points.len() {
            for j in 0..i {
                if points[i].same_as(&points[j], APPROX_POINT_TOL) {
                    return Err(Error::InvalidInput(format!("points {j} and {i} coincide")));
                }
            }
        }
        Ok(PointSet { ambient, field, points })
    }

    pub fn empty(ambient: usize, field: FieldSpec) -> Self {
        PointSet { ambient, field, points: Vec::new() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, i: usize) -> &ProjectivePoint {
        &self.points[i]
    }

    /// Subset by index, in the given order.
    pub fn subset(&self, idx: &[usize]) -> PointSet {
        PointSet { ambient: self.ambient, field: self.field, points: idx.iter().map(|&i| self.points[i].clone()).collect() }
    }

    /// All points except index `skip`.
    pub fn without(&self, skip: usize) -> PointSet {
        let idx: Vec<usize> = (0..self.len()).filter(|&i| i != skip).collect();
        self.subset(&idx)
    }

    pub fn position(&self, p: &ProjectivePoint) -> Option<usize> {
        self.points.iter().position(|q| q.same_as(p, APPROX_POINT_TOL))
    }

    /// Maps every coordinate into `target` (reduction mod p, float image).
    pub fn convert(&self, target: FieldSpec, choice: crate::scalar::RootChoice) -> Result<PointSet> {
        let pts = self
            .points
            .iter()
            .map(|p| ProjectivePoint::new(p.coords.iter().map(|c| c.convert(target, choice)).collect::<Result<Vec<_>>>()?))
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(self.ambient, target, pts)
    }

    /// Residue matrix of a prime-field set.
    pub fn residue_rows(&self) -> Option<Vec<Vec<u64>>> {
        self.points.iter().map(|p| p.residues()).collect()
    }

    pub fn to_json(&self) -> PointSetJson {
        PointSetJson {
            field: self.field,
            ambient: self.ambient,
            nodes: self.points.iter().map(|p| p.to_strings().into_iter().map(serde_json::Value::String).collect()).collect(),
        }
    }

    pub fn from_json(j: &PointSetJson) -> Result<PointSet> {
        let field = j.field;
        field.validate()?;
        PointSet::new(j.ambient, field, parse_points(field, &j.nodes)?)
    }
}

pub fn parse_points(field: FieldSpec, rows: &[Vec<serde_json::Value>]) -> Result<Vec<ProjectivePoint>> {
    rows.iter()
        .map(|row| ProjectivePoint::new(row.iter().map(|v| Scalar::from_json(field, v)).collect::<Result<Vec<_>>>()?))
        .collect()
}

/// Point-set file: `{"field": ..., "ambient": N, "nodes": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSetJson {
    #[serde(flatten)]
    pub field: FieldSpec,
    pub ambient: usize,
    pub nodes: Vec<Vec<serde_json::Value>>,
}

/// Random field element from the seeded generator: small integers for
/// characteristic zero, uniform residues mod p, uniform reals in [−1, 1].
pub fn random_scalar<R: Rng>(field: FieldSpec, rng: &mut R) -> Scalar {
    match field {
        FieldSpec::Rational | FieldSpec::Quadratic { .. } => Scalar::from_i64(field, rng.gen_range(-50..=50)),
        FieldSpec::Prime { p } => Scalar::Prime(crate::scalar::Fp::new(rng.gen_range(0..p), p)),
        FieldSpec::Approx { eps } => Scalar::from_f64(eps, rng.gen_range(-1.0..=1.0)),
    }
}

pub fn random_linear_form<R: Rng>(num_vars: usize, field: FieldSpec, rng: &mut R) -> HomogeneousForm {
    let c: Vec<Scalar> = (0..num_vars).map(|_| random_scalar(field, rng)).collect();
    HomogeneousForm::linear(&c).expect("nonempty")
}

/// Linear projection ψ: Pᴺ ⇢ P² given by three independent linear forms.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionMap {
    forms: [HomogeneousForm; 3],
}

/// Attempts at drawing a projection that is injective on a given set.
pub const PROJECTION_ATTEMPTS: usize = 32;

impl ProjectionMap {
    pub fn new(forms: [HomogeneousForm; 3]) -> Result<Self> {
        for f in &forms {
            if f.degree() != 1 {
                return Err(Error::InvalidInput("projection needs linear forms".into()));
            }
        }
        check_independent(&forms)?;
        Ok(ProjectionMap { forms })
    }

    /// Coordinate projection onto the first three coordinates.
    pub fn standard(n_ambient: usize, field: FieldSpec) -> Self {
        let forms = [0, 1, 2].map(|i| HomogeneousForm::variable(n_ambient + 1, i, field));
        ProjectionMap { forms }
    }

    pub fn random<R: Rng>(n_ambient: usize, field: FieldSpec, rng: &mut R) -> Self {
        loop {
            let forms = [0, 1, 2].map(|_| random_linear_form(n_ambient + 1, field, rng));
            if let Ok(m) = ProjectionMap::new(forms) {
                return m;
            }
        }
    }

    pub fn forms(&self) -> &[HomogeneousForm; 3] {
        &self.forms
    }

    pub fn apply(&self, p: &ProjectivePoint) -> Result<Vec<Scalar>> {
        self.forms.iter().map(|f| f.evaluate(p.coords())).collect()
    }

    /// `ψ(S)`, failing if a point lies on the center or two points collide.
    pub fn project(&self, s: &PointSet) -> Result<PointSet> {
        let mut out = Vec::with_capacity(s.len());
        for (i, p) in s.points().iter().enumerate() {
            let img = self.apply(p)?;
            if img.iter().all(|c| c.is_zero()) {
                return Err(Error::CenterHitsPoint(i));
            }
            let q = ProjectivePoint::new(img)?;
            if let Some(j) = out.iter().position(|o: &ProjectivePoint| o.same_as(&q, APPROX_POINT_TOL)) {
                return Err(Error::NotInjectiveOnSet(j, i));
            }
            out.push(q);
        }
        PointSet::new(2, s.field(), out)
    }

    /// Draws random projections until one is injective on `s`.
    pub fn generic_for<R: Rng>(s: &PointSet, rng: &mut R) -> Result<(ProjectionMap, PointSet)> {
        let mut last = Error::DegenerateProjection;
        for _ in 0..PROJECTION_ATTEMPTS {
            let m = ProjectionMap::random(s.ambient(), s.field(), rng);
            match m.project(s) {
                Ok(img) => return Ok((m, img)),
                Err(e @ (Error::CenterHitsPoint(_) | Error::NotInjectiveOnSet(..))) => last = e,
                Err(e) => return Err(e),
            }
        }
        Err(last)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rank, ScalarArith};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const Q: FieldSpec = FieldSpec::Rational;

    fn pt(v: &[i64]) -> ProjectivePoint {
        ProjectivePoint::new(v.iter().map(|&x| Scalar::from_i64(Q, x)).collect()).unwrap()
    }

    fn random_set<R: Rng>(n: usize, ambient: usize, field: FieldSpec, rng: &mut R) -> PointSet {
        let mut pts: Vec<ProjectivePoint> = Vec::new();
        while pts.len() < n {
            let c: Vec<Scalar> = (0..=ambient).map(|_| random_scalar(field, rng)).collect();
            if let Ok(p) = ProjectivePoint::new(c) {
                if !pts.contains(&p) {
                    pts.push(p);
                }
            }
        }
        PointSet::new(ambient, field, pts).unwrap()
    }

    #[test]
    fn normalization() {
        let a = pt(&[0, 2, 4]);
        let b = pt(&[0, -1, -2]);
        assert_eq!(a, b);
        assert_eq!(a.to_strings(), vec!["0", "1", "2"]);
        let f = ProjectivePoint::from_f64(&[-3.0, 4.0], 1e-8).unwrap();
        assert_eq!(f.to_f64().unwrap(), vec![0.6, -0.8]);
        let again = ProjectivePoint::new(f.coords().to_vec()).unwrap();
        assert_eq!(again, f);
        assert!(ProjectivePoint::new(vec![Scalar::zero(Q); 3]).is_err());
    }

    #[test]
    fn standard_projection() {
        let m = ProjectionMap::standard(4, Q);
        let s = PointSet::new(4, Q, vec![pt(&[1, 2, 3, 4, 5])]).unwrap();
        assert_eq!(m.project(&s).unwrap().get(0), &pt(&[1, 2, 3]));
        let on_center = PointSet::new(4, Q, vec![pt(&[0, 0, 0, 1, 0])]).unwrap();
        assert!(matches!(m.project(&on_center), Err(Error::CenterHitsPoint(0))));
    }

    #[test]
    fn random_projections_are_injective() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let s = random_set(20, 4, Q, &mut rng);
            let (_, img) = ProjectionMap::generic_for(&s, &mut rng).unwrap();
            assert_eq!(img.len(), 20);
        }
    }

    /// Statistical check: projection does not create collinear triples.
    #[test]
    fn random_projections_avoid_new_collinearity() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let ar = ScalarArith(Q);
        for _ in 0..100 {
            let s = random_set(10, 4, Q, &mut rng);
            let (_, img) = ProjectionMap::generic_for(&s, &mut rng).unwrap();
            for i in 0..10 {
                for j in 0..i {
                    for k in 0..j {
                        let rows: Vec<Vec<Scalar>> = [i, j, k].iter().map(|&t| img.get(t).coords().to_vec()).collect();
                        assert_eq!(rank(&ar, &rows, 3), 3);
                    }
                }
            }
        }
    }

    #[test]
    fn point_set_json() {
        let text = r#"{"field":"prime","p":31,"ambient":2,"nodes":[[1,2,3],["0","1","-1"]]}"#;
        let j: PointSetJson = serde_json::from_str(text).unwrap();
        let s = PointSet::from_json(&j).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.get(1).residues().unwrap(), vec![0, 1, 30]);
        let back = PointSet::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        let dup = r#"{"field":"rational","ambient":1,"nodes":[[1,2],[2,4]]}"#;
        assert!(PointSet::from_json(&serde_json::from_str(dup).unwrap()).is_err());
    }
}

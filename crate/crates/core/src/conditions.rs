//! Conditions imposed by a point set on forms of a given degree: the
//! evaluation matrix, its rank, the defect, and separating forms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, bareiss, numeric, ColumnSpan, ModP, ScalarArith};
use crate::pointgeom::{PointSet, ProjectivePoint};
use crate::polyform::{monomial_basis, HomogeneousForm};
use crate::scalar::{prime, FieldSpec, RootChoice, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum Entries {
    Prime { p: u64, rows: Vec<Vec<u64>> },
    Exact { field: FieldSpec, rows: Vec<Vec<Scalar>> },
    Approx { eps: f64, rows: Vec<Vec<f64>> },
}

/// Rows indexed by points, columns by `monomial_basis(N, d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationMatrix {
    pub n_ambient: usize,
    pub degree: u32,
    pub monomials: Vec<Vec<u32>>,
    pub entries: Entries,
}

fn power_table_mod(pt: &[u64], d: u32, p: u64) -> Vec<Vec<u64>> {
    pt.iter()
        .map(|&x| {
            let mut v = Vec::with_capacity(d as usize + 1);
            v.push(1 % p);
            for _ in 0..d {
                let last = *v.last().expect("nonempty");
                v.push(prime::mul_mod(last, x, p));
            }
            v
        })
        .collect()
}

fn monomial_mod(table: &[Vec<u64>], exp: &[u32], p: u64) -> u64 {
    exp.iter().enumerate().fold(1 % p, |acc, (i, &e)| if e == 0 { acc } else { prime::mul_mod(acc, table[i][e as usize], p) })
}

fn monomial_f64(x: &[f64], exp: &[u32]) -> f64 {
    exp.iter().zip(x).map(|(&e, v)| v.powi(e as i32)).product()
}

impl EvaluationMatrix {
    pub fn nrows(&self) -> usize {
        match &self.entries {
            Entries::Prime { rows, .. } => rows.len(),
            Entries::Exact { rows, .. } => rows.len(),
            Entries::Approx { rows, .. } => rows.len(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.monomials.len()
    }

    /// Exact rank, or numerical rank with the singular-value profile.
    pub fn rank(&self) -> (usize, Option<Vec<f64>>) {
        let n = self.ncols();
        match &self.entries {
            Entries::Prime { p, rows } => (linalg::rank(&ModP(*p), rows, n), None),
            Entries::Exact { field: FieldSpec::Rational, rows } => {
                let q: Vec<Vec<_>> = rows.iter().map(|r| r.iter().map(|x| x.as_rational().expect("rational").clone()).collect()).collect();
                (bareiss::rank_rational(&q, n), None)
            }
            Entries::Exact { field, rows } => (linalg::rank(&ScalarArith(*field), rows, n), None),
            Entries::Approx { eps, rows } => {
                let sv = numeric::singular_values(rows, n);
                (numeric::rank_from_profile(&sv, *eps), Some(sv))
            }
        }
    }
}

/// `evaluation_matrix(S, d)`.
pub fn evaluation_matrix(s: &PointSet, d: u32) -> Result<EvaluationMatrix> {
    let monomials = monomial_basis(s.ambient(), d);
    let entries = match s.field() {
        FieldSpec::Prime { p } => {
            let pts = s.residue_rows().ok_or(Error::FieldMismatch(s.field(), FieldSpec::Prime { p }))?;
            let rows = pts
                .par_iter()
                .map(|pt| {
                    let t = power_table_mod(pt, d, p);
                    monomials.iter().map(|e| monomial_mod(&t, e, p)).collect()
                })
                .collect();
            Entries::Prime { p, rows }
        }
        FieldSpec::Approx { eps } => {
            let rows = s
                .points()
                .par_iter()
                .map(|q| {
                    let x = q.to_f64()?;
                    Ok(monomials.iter().map(|e| monomial_f64(&x, e)).collect())
                })
                .collect::<Result<Vec<_>>>()?;
            Entries::Approx { eps, rows }
        }
        field => {
            let rows = s
                .points()
                .par_iter()
                .map(|q| monomials.iter().map(|e| crate::polyform::eval_monomial(e, q.coords())).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Entries::Exact { field, rows }
        }
    };
    Ok(EvaluationMatrix { n_ambient: s.ambient(), degree: d, monomials, entries })
}

/// How much a rank computation proves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofGrade {
    /// Exact elimination in the characteristic-zero field of the data.
    Exact,
    /// Characteristic-zero data reduced mod p. Full rank is a proof of
    /// independence; a positive defect is only an upper bound.
    ModularReduction,
    /// Data given over F_p; the rank is exact for that field.
    FiniteField,
    /// Singular-value threshold on floating point data.
    Numeric,
}

/// Certificate that `rank = r`: a nonsingular `r × r` minor (rows, columns)
/// and a basis of the left kernel (`|S| − r` vectors `y` with `yᵀM = 0`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankWitness {
    pub pivot_rows: Vec<usize>,
    pub pivot_cols: Vec<usize>,
    pub left_kernel: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub degree: u32,
    pub points: usize,
    pub rank: usize,
    pub defect: usize,
    pub independent: bool,
    pub backend: FieldSpec,
    pub grade: ProofGrade,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sv_profile: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub primes: Vec<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restricted_to: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<RankWitness>,
}

impl DefectReport {
    fn new(degree: u32, points: usize, rank: usize, backend: FieldSpec, grade: ProofGrade) -> Self {
        DefectReport {
            degree,
            points,
            rank,
            defect: points - rank,
            independent: rank == points,
            backend,
            grade,
            sv_profile: None,
            primes: Vec::new(),
            warnings: Vec::new(),
            restricted_to: None,
            witness: None,
        }
    }
}

fn grade_for(field: FieldSpec) -> ProofGrade {
    match field {
        FieldSpec::Rational | FieldSpec::Quadratic { .. } => ProofGrade::Exact,
        FieldSpec::Prime { .. } => ProofGrade::FiniteField,
        FieldSpec::Approx { .. } => ProofGrade::Numeric,
    }
}

/// Column space of the evaluation matrix, built by streaming monomial
/// columns and stopping once the rank reaches `|S|`. Serves rank,
/// separability of each point, and separating forms.
pub struct ConditionSpace {
    set: PointSet,
    degree: u32,
    monomials: Vec<Vec<u32>>,
    inner: SpaceInner,
}

enum SpaceInner {
    Prime(ColumnSpan<ModP>),
    Exact(ColumnSpan<ScalarArith>),
    Approx { eps: f64, rows: Vec<Vec<f64>>, sv: Vec<f64>, rank: usize },
}

impl ConditionSpace {
    pub fn build(s: &PointSet, d: u32) -> Result<Self> {
        let monomials = monomial_basis(s.ambient(), d);
        let m = s.len();
        let inner = match s.field() {
            FieldSpec::Prime { p } => {
                let pts = s.residue_rows().expect("prime field points");
                let tables: Vec<Vec<Vec<u64>>> = pts.iter().map(|pt| power_table_mod(pt, d, p)).collect();
                let mut span = ColumnSpan::new(ModP(p), m);
                for (j, e) in monomials.iter().enumerate() {
                    if span.is_full() {
                        break;
                    }
                    let col = tables.iter().map(|t| monomial_mod(t, e, p)).collect();
                    span.insert(j, col);
                }
                SpaceInner::Prime(span)
            }
            FieldSpec::Approx { eps } => {
                let em = evaluation_matrix(s, d)?;
                let Entries::Approx { rows, .. } = em.entries else { unreachable!() };
                let sv = numeric::singular_values(&rows, monomials.len());
                let rank = numeric::rank_from_profile(&sv, eps);
                SpaceInner::Approx { eps, rows, sv, rank }
            }
            field => {
                let mut span = ColumnSpan::new(ScalarArith(field), m);
                for (j, e) in monomials.iter().enumerate() {
                    if span.is_full() {
                        break;
                    }
                    let col = s.points().iter().map(|q| crate::polyform::eval_monomial(e, q.coords())).collect::<Result<Vec<_>>>()?;
                    span.insert(j, col);
                }
                SpaceInner::Exact(span)
            }
        };
        Ok(ConditionSpace { set: s.clone(), degree: d, monomials, inner })
    }

    pub fn rank(&self) -> usize {
        match &self.inner {
            SpaceInner::Prime(s) => s.rank(),
            SpaceInner::Exact(s) => s.rank(),
            SpaceInner::Approx { rank, .. } => *rank,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn set(&self) -> &PointSet {
        &self.set
    }

    /// Whether some degree-d form vanishes on `S ∖ {P_i}` but not at `P_i`.
    pub fn separable(&self, i: usize) -> bool {
        match &self.inner {
            SpaceInner::Prime(s) => s.contains_unit(i),
            SpaceInner::Exact(s) => s.contains_unit(i),
            SpaceInner::Approx { .. } => self.separating_form(i).is_some(),
        }
    }

    /// A degree-d form with value 1 at `P_i` and 0 on the other points.
    pub fn separating_form(&self, i: usize) -> Option<HomogeneousForm> {
        let m = self.set.len();
        let nv = self.set.ambient() + 1;
        let field = self.set.field();
        let terms: Vec<(Vec<u32>, Scalar)> = match &self.inner {
            SpaceInner::Prime(s) => {
                let p = field.prime().expect("prime");
                let mut e = vec![0u64; m];
                e[i] = 1;
                s.solve(&e)?.into_iter().map(|(j, c)| (self.monomials[j].clone(), Scalar::Prime(crate::scalar::Fp::new(c, p)))).collect()
            }
            SpaceInner::Exact(s) => {
                let mut e = vec![Scalar::zero(field); m];
                e[i] = Scalar::one(field);
                s.solve(&e)?.into_iter().map(|(j, c)| (self.monomials[j].clone(), c)).collect()
            }
            SpaceInner::Approx { eps, rows, .. } => {
                let c = approx_unit_solution(rows, self.monomials.len(), i, *eps)?;
                c.into_iter().enumerate().filter(|(_, v)| *v != 0.0).map(|(j, v)| (self.monomials[j].clone(), Scalar::from_f64(*eps, v))).collect()
            }
        };
        HomogeneousForm::from_terms(nv, self.degree, field, terms).ok()
    }

    /// Rank certificate for exact backends.
    pub fn witness(&self) -> Option<RankWitness> {
        fn build<A: linalg::Arith + Clone>(span: &ColumnSpan<A>, cols: Vec<Vec<A::E>>, m: usize, fmt: impl Fn(&A::E) -> String, ar: &A) -> RankWitness {
            // left kernel of the accepted columns equals that of the full matrix
            let rows = linalg::transpose(&cols, m);
            let lk = linalg::left_kernel(ar, &rows, cols.len());
            RankWitness {
                pivot_rows: span.pivot_rows().to_vec(),
                pivot_cols: span.accepted().to_vec(),
                left_kernel: lk.iter().map(|y| y.iter().map(&fmt).collect()).collect(),
            }
        }
        let m = self.set.len();
        match &self.inner {
            SpaceInner::Prime(s) => {
                let p = self.set.field().prime().expect("prime");
                let pts = self.set.residue_rows().expect("prime");
                let cols: Vec<Vec<u64>> = s
                    .accepted()
                    .iter()
                    .map(|&j| pts.iter().map(|pt| monomial_mod(&power_table_mod(pt, self.degree, p), &self.monomials[j], p)).collect())
                    .collect();
                Some(build(s, cols, m, |x| x.to_string(), &ModP(p)))
            }
            SpaceInner::Exact(s) => {
                let cols: Vec<Vec<Scalar>> = s
                    .accepted()
                    .iter()
                    .map(|&j| self.set.points().iter().map(|q| crate::polyform::eval_monomial(&self.monomials[j], q.coords()).expect("same field")).collect())
                    .collect();
                Some(build(s, cols, m, |x| x.to_string(), &ScalarArith(self.set.field())))
            }
            SpaceInner::Approx { .. } => None,
        }
    }

    pub fn sv_profile(&self) -> Option<Vec<f64>> {
        match &self.inner {
            SpaceInner::Approx { sv, .. } => Some(sv.clone()),
            _ => None,
        }
    }
}

/// Minimum-norm solution of `M c = e_i`, if the residual is negligible.
fn approx_unit_solution(rows: &[Vec<f64>], ncols: usize, i: usize, eps: f64) -> Option<Vec<f64>> {
    use nalgebra::{DMatrix, DVector};
    let m = DMatrix::from_fn(rows.len(), ncols, |a, b| rows[a][b]);
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let e = DVector::from_fn(rows.len(), |a, _| if a == i { 1.0 } else { 0.0 });
    let c = svd.solve(&e, eps * smax).ok()?;
    let resid = (&m * &c - &e).norm();
    (resid < eps.sqrt()).then(|| c.iter().copied().collect())
}

/// `defect(S, d)` with the rank computed in the field of `S`.
pub fn defect(s: &PointSet, d: u32) -> Result<DefectReport> {
    let field = s.field();
    let mut report = match field {
        FieldSpec::Prime { .. } | FieldSpec::Quadratic { .. } => {
            let space = ConditionSpace::build(s, d)?;
            let mut r = DefectReport::new(d, s.len(), space.rank(), field, grade_for(field));
            r.witness = space.witness();
            r
        }
        FieldSpec::Rational => {
            let (rank, _) = evaluation_matrix(s, d)?.rank();
            let mut r = DefectReport::new(d, s.len(), rank, field, ProofGrade::Exact);
            r.witness = ConditionSpace::build(s, d)?.witness();
            r
        }
        FieldSpec::Approx { .. } => {
            let (rank, sv) = evaluation_matrix(s, d)?.rank();
            let mut r = DefectReport::new(d, s.len(), rank, field, ProofGrade::Numeric);
            r.sv_profile = sv;
            r
        }
    };
    if let FieldSpec::Prime { p } = field {
        report.primes = vec![p];
    }
    Ok(report)
}

pub fn imposes_independent(s: &PointSet, d: u32) -> Result<bool> {
    Ok(defect(s, d)?.independent)
}

/// `separating_form(S, P, d)`: `None` when `P` cannot be separated.
pub fn separating_form(s: &PointSet, i: usize, d: u32) -> Result<Option<HomogeneousForm>> {
    if i >= s.len() {
        return Err(Error::InvalidInput(format!("point index {i} out of range")));
    }
    Ok(ConditionSpace::build(s, d)?.separating_form(i))
}

/// `restricted_conditions`: asserts that `S` lies on the divisor cut out by
/// `divisor`; the rank on restricted sections equals the ambient rank.
pub fn restricted_conditions(s: &PointSet, d: u32, divisor: &[HomogeneousForm], label: &str) -> Result<DefectReport> {
    for (i, q) in s.points().iter().enumerate() {
        for g in divisor {
            if !on_form(g, q)? {
                return Err(Error::PointNotOnDivisor(i));
            }
        }
    }
    let mut r = defect(s, d)?;
    r.restricted_to = Some(label.to_string());
    Ok(r)
}

/// Zero test tolerant of float points.
pub fn on_form(g: &HomogeneousForm, q: &ProjectivePoint) -> Result<bool> {
    let v = g.evaluate(q.coords())?;
    if g.field().is_approx() {
        let scale: f64 = g.terms().map(|(_, c)| c.to_f64().unwrap_or(0.0).abs()).sum();
        return Ok(v.to_f64()?.abs() <= crate::pointgeom::node::NUMERIC_NODE_TOL * scale.max(1.0));
    }
    Ok(v.is_zero())
}

/// Rank of characteristic-zero data reduced modulo several primes; the
/// maximum is kept (ranks can only drop mod p) and disagreements are
/// reported as likely bad primes.
pub fn defect_multi_prime(s: &PointSet, d: u32, primes: &[u64], choice: RootChoice) -> Result<DefectReport> {
    let field = s.field();
    if !field.is_char_zero_exact() {
        return Err(Error::InvalidInput("multi-prime mode reduces characteristic-zero data".into()));
    }
    let mut ranks = Vec::new();
    for &p in primes {
        let red = s.convert(FieldSpec::Prime { p }, choice)?;
        ranks.push((p, ConditionSpace::build(&red, d)?.rank()));
    }
    let best = ranks.iter().map(|r| r.1).max().unwrap_or(0);
    let mut report = DefectReport::new(d, s.len(), best, field, ProofGrade::ModularReduction);
    report.primes = primes.to_vec();
    for (p, r) in &ranks {
        if *r != best {
            report.warnings.push(format!("rank {r} mod {p} below {best}: bad prime"));
        }
    }
    Ok(report)
}

/// Three primes above 2²⁰ usable for reducing data over `field`.
pub fn default_primes(field: FieldSpec, choice_seed: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = prime::next_prime((1 << 20) + (choice_seed % 1000) * 1000);
    while out.len() < 3 {
        let ok = match field {
            FieldSpec::Quadratic { d } => crate::scalar::sqrt_root_mod(d, p, RootChoice::Smaller).is_ok(),
            _ => true,
        };
        if ok {
            out.push(p);
        }
        p = prime::next_prime(p + 1);
    }
    out
}

/// Recomputes a witness: the minor is nonsingular and every kernel vector
/// annihilates every column. Only for prime-field data.
pub fn check_witness_mod(s: &PointSet, d: u32, w: &RankWitness) -> Result<bool> {
    let FieldSpec::Prime { p } = s.field() else {
        return Err(Error::InvalidInput("witness replay is implemented for prime fields".into()));
    };
    let em = evaluation_matrix(s, d)?;
    let Entries::Prime { rows, .. } = &em.entries else { unreachable!() };
    let minor: Vec<Vec<u64>> = w.pivot_rows.iter().map(|&i| w.pivot_cols.iter().map(|&j| rows[i][j]).collect()).collect();
    if linalg::rank(&ModP(p), &minor, w.pivot_cols.len()) != w.pivot_cols.len() {
        return Ok(false);
    }
    let ar = ModP(p);
    for y in &w.left_kernel {
        let y: Vec<u64> = y.iter().map(|t| t.parse::<u64>().map_err(|_| Error::Parse(t.clone()))).collect::<Result<_>>()?;
        if y.iter().all(|&v| v == 0) {
            return Ok(false);
        }
        for j in 0..em.ncols() {
            let v = rows.iter().zip(&y).fold(0, |acc, (r, yy)| linalg::Arith::add(&ar, &acc, &prime::mul_mod(r[j], *yy, p)));
            if v != 0 {
                return Ok(false);
            }
        }
    }
    let lk = w.left_kernel.len();
    Ok(w.pivot_cols.len() + lk == s.len())
}

/// Witness replay for any exact field of `S`.
pub fn check_witness(s: &PointSet, d: u32, w: &RankWitness) -> Result<bool> {
    let field = s.field();
    match field {
        FieldSpec::Prime { .. } => check_witness_mod(s, d, w),
        FieldSpec::Approx { .. } => Err(Error::InvalidInput("numerical ranks carry no witness".into())),
        _ => {
            let em = evaluation_matrix(s, d)?;
            let Entries::Exact { rows, .. } = &em.entries else { unreachable!() };
            let ar = ScalarArith(field);
            if w.pivot_rows.iter().any(|&i| i >= rows.len()) || w.pivot_cols.iter().any(|&j| j >= em.ncols()) || w.pivot_rows.len() != w.pivot_cols.len() {
                return Ok(false);
            }
            let minor: Vec<Vec<Scalar>> = w.pivot_rows.iter().map(|&i| w.pivot_cols.iter().map(|&j| rows[i][j].clone()).collect()).collect();
            if linalg::rank(&ar, &minor, w.pivot_cols.len()) != w.pivot_cols.len() {
                return Ok(false);
            }
            for y in &w.left_kernel {
                let y: Vec<Scalar> = y.iter().map(|t| Scalar::parse(field, t)).collect::<Result<_>>()?;
                if y.len() != rows.len() || y.iter().all(|v| v.is_zero()) {
                    return Ok(false);
                }
                for j in 0..em.ncols() {
                    let mut acc = Scalar::zero(field);
                    for (r, yy) in rows.iter().zip(&y) {
                        acc = acc.add(&r[j].mul(yy)?)?;
                    }
                    if !acc.is_zero() {
                        return Ok(false);
                    }
                }
            }
            Ok(w.pivot_cols.len() + w.left_kernel.len() == s.len())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointgeom::random_scalar;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: FieldSpec = FieldSpec::Rational;

    fn set(field: FieldSpec, rows: &[&[i64]]) -> PointSet {
        let pts = rows.iter().map(|r| ProjectivePoint::new(r.iter().map(|&x| Scalar::from_i64(field, x)).collect()).unwrap()).collect();
        PointSet::new(rows[0].len() - 1, field, pts).unwrap()
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
    fn small_matrices() {
        let one = set(Q, &[&[1, 2, 3, 4, 5]]);
        let em = evaluation_matrix(&one, 1).unwrap();
        assert_eq!((em.nrows(), em.ncols()), (1, 5));
        let two = set(Q, &[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(evaluation_matrix(&two, 1).unwrap().rank().0, 2);
        let zero = EvaluationMatrix { n_ambient: 1, degree: 1, monomials: vec![vec![1, 0], vec![0, 1]], entries: Entries::Prime { p: 7, rows: vec![vec![0, 0]] } };
        assert_eq!(zero.rank().0, 0);
    }

    #[test]
    fn coplanar_points_in_p4() {
        // four points of the plane x = y = 0: linear forms restrict to a 3-dimensional space
        let s = set(Q, &[&[0, 0, 1, 0, 0], &[0, 0, 0, 1, 0], &[0, 0, 0, 0, 1], &[0, 0, 1, 1, 1]]);
        let r = defect(&s, 1).unwrap();
        assert_eq!((r.rank, r.defect, r.independent), (3, 1, false));
        for i in 0..4 {
            assert!(separating_form(&s, i, 1).unwrap().is_none());
        }
        assert!(imposes_independent(&s, 2).unwrap());
    }

    #[test]
    fn hyperplane_separation() {
        let s = set(Q, &[&[1, 0, 0], &[0, 1, 0]]);
        let f = separating_form(&s, 0, 1).unwrap().unwrap();
        assert!(!f.evaluate(s.get(0).coords()).unwrap().is_zero());
        assert!(f.evaluate(s.get(1).coords()).unwrap().is_zero());
    }

    #[test]
    fn general_points_are_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let fp = FieldSpec::Prime { p: 1_000_003 };
        for d in 1..4u32 {
            let dim = crate::polyform::monomial_count(4, d);
            for k in [1, dim / 2, dim] {
                let s = random_set(k, 4, fp, &mut rng);
                assert_eq!(defect(&s, d).unwrap().rank, k);
            }
        }
        let s = random_set(4, 4, Q, &mut rng);
        assert!(imposes_independent(&s, 1).unwrap());
    }

    #[test]
    fn restricted_requires_membership() {
        let s = set(Q, &[&[1, 0, 0], &[0, 1, 0]]);
        let x2 = HomogeneousForm::variable(3, 2, Q);
        assert_eq!(restricted_conditions(&s, 1, &[x2.clone()], "x2").unwrap().rank, defect(&s, 1).unwrap().rank);
        let x0 = HomogeneousForm::variable(3, 0, Q);
        assert!(matches!(restricted_conditions(&s, 1, &[x0], "x0"), Err(Error::PointNotOnDivisor(0))));
    }

    #[test]
    fn witnesses_replay() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let fp = FieldSpec::Prime { p: 10_007 };
        let mut s = random_set(6, 2, fp, &mut rng);
        // add three collinear points with the first two: rank drops at d = 1
        let q = s.points().to_vec();
        let mut pts = q.clone();
        for t in 2..5 {
            let c: Vec<Scalar> = q[0].coords().iter().zip(q[1].coords()).map(|(a, b)| a.add(&b.mul(&Scalar::from_i64(fp, t)).unwrap()).unwrap()).collect();
            pts.push(ProjectivePoint::new(c).unwrap());
        }
        s = PointSet::new(2, fp, pts).unwrap();
        let r = defect(&s, 2).unwrap();
        let w = r.witness.clone().unwrap();
        assert!(check_witness_mod(&s, 2, &w).unwrap());
        let mut bad = w.clone();
        bad.pivot_cols.reverse();
        bad.pivot_cols.truncate(1);
        assert!(!check_witness_mod(&s, 2, &bad).unwrap());
    }

    #[test]
    fn rational_witness_replays() {
        // four collinear points plus one off the line: rank 4 at d = 2
        let s = set(Q, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0], &[1, 2, 0], &[0, 0, 1]]);
        let r = defect(&s, 2).unwrap();
        assert_eq!((r.rank, r.defect), (4, 1));
        let w = r.witness.clone().unwrap();
        assert!(check_witness(&s, 2, &w).unwrap());
        let mut bad = w.clone();
        bad.left_kernel[0][0] = "7".into();
        assert!(!check_witness(&s, 2, &bad).unwrap());
    }

    #[test]
    fn multi_prime_matches_rational_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let s = random_set(12, 3, Q, &mut rng);
        let exact = defect(&s, 2).unwrap();
        let primes = default_primes(Q, 0);
        let mp = defect_multi_prime(&s, 2, &primes, RootChoice::Smaller).unwrap();
        assert_eq!(exact.rank, mp.rank);
        assert!(mp.warnings.is_empty());
        assert_eq!(default_primes(FieldSpec::Quadratic { d: 5 }, 0).len(), 3);
    }

    #[test]
    fn numeric_rank_profile() {
        let eps = 1e-8;
        let fa = FieldSpec::Approx { eps };
        let pts: Vec<ProjectivePoint> = [[0.0, 0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 1.0, 1.0, 1.0]]
            .iter()
            .map(|c| ProjectivePoint::from_f64(c, eps).unwrap())
            .collect();
        let s = PointSet::new(4, fa, pts).unwrap();
        let r = defect(&s, 1).unwrap();
        assert_eq!(r.rank, 3);
        assert_eq!(r.sv_profile.as_ref().unwrap().len(), 4);
        let space = ConditionSpace::build(&s, 2).unwrap();
        let f = space.separating_form(0).unwrap();
        assert!((f.evaluate(s.get(0).coords()).unwrap().to_f64().unwrap() - 1.0).abs() < 1e-8);
        assert!(!space.separable(0) || ConditionSpace::build(&s, 1).unwrap().separating_form(0).is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Every point separable ⇔ full rank, on small random configurations
        /// with planted collinearity.
        #[test]
        fn separability_iff_independence(seed in any::<u64>(), n in 2usize..9, d in 1u32..4, plant in 0usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let fp = FieldSpec::Prime { p: 10_007 };
            let mut pts = random_set(n, 2, fp, &mut rng).points().to_vec();
            for t in 0..plant {
                let c: Vec<Scalar> = pts[0].coords().iter().zip(pts[1].coords()).map(|(a, b)| a.add(&b.mul(&Scalar::from_i64(fp, t as i64 + 2)).unwrap()).unwrap()).collect();
                let q = ProjectivePoint::new(c).unwrap();
                if !pts.contains(&q) { pts.push(q); }
            }
            let s = PointSet::new(2, fp, pts).unwrap();
            let space = ConditionSpace::build(&s, d).unwrap();
            let all = (0..s.len()).all(|i| space.separable(i));
            prop_assert_eq!(all, space.rank() == s.len());
            prop_assert_eq!(space.rank(), evaluation_matrix(&s, d).unwrap().rank().0);
            for i in 0..s.len() {
                if let Some(f) = space.separating_form(i) {
                    for (j, q) in s.points().iter().enumerate() {
                        let v = f.evaluate(q.coords()).unwrap();
                        prop_assert_eq!(v.is_zero(), j != i);
                    }
                }
            }
        }

        #[test]
        fn bareiss_matches_streaming(seed in any::<u64>(), n in 1usize..12, d in 1u32..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_set(n, 2, Q, &mut rng);
            let a = evaluation_matrix(&s, d).unwrap().rank().0;
            let b = ConditionSpace::build(&s, d).unwrap().rank();
            prop_assert_eq!(a, b);
        }
    }
}

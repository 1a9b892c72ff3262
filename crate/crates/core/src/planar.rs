//! Point sets in P²: incidence with curves, property ★, the Bese and
//! Davis–Geramita hypotheses, separating curves and cluster partitions.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conditions;
use crate::error::{Error, Result};
use crate::linalg::{self, Arith, ModP, ScalarArith};
use crate::pointgeom::PointSet;
use crate::polyform::{monomial_basis, monomial_count, HomogeneousForm};
use crate::scalar::{FieldSpec, Fp, Scalar};

/// Default cap on 4-point subsets (conic search) or search nodes (t ≥ 3).
pub const DEFAULT_SUBSET_BUDGET: u64 = 20_000_000;

/// Field operations plus what the curve searches need on top: a sortable
/// key for grouping equal elements and a lift back to [`Scalar`].
trait PlaneField: Arith + Clone + Send {
    type K: Ord + Clone + Send;
    fn key(&self, x: &Self::E) -> Self::K;
    fn lift(&self, x: &Self::E) -> Scalar;
}

impl PlaneField for ModP {
    type K = u64;
    fn key(&self, x: &u64) -> u64 {
        *x
    }
    fn lift(&self, x: &u64) -> Scalar {
        Scalar::Prime(Fp::new(*x, self.0))
    }
}

impl PlaneField for ScalarArith {
    type K = String;
    fn key(&self, x: &Scalar) -> String {
        x.to_string()
    }
    fn lift(&self, x: &Scalar) -> Scalar {
        x.clone()
    }
}

enum Plane {
    Prime(ModP, Vec<Vec<u64>>),
    Exact(ScalarArith, Vec<Vec<Scalar>>),
}

fn plane(s: &PointSet) -> Result<Plane> {
    if s.ambient() != 2 {
        return Err(Error::InvalidInput(format!("planar search needs points of P², got P^{}", s.ambient())));
    }
    match s.field() {
        FieldSpec::Prime { p } => {
            if p == 2 {
                return Err(Error::InvalidInput("planar searches need characteristic other than 2".into()));
            }
            Ok(Plane::Prime(ModP(p), s.residue_rows().expect("prime field")))
        }
        FieldSpec::Approx { .. } => Err(Error::InvalidInput("planar searches need an exact field".into())),
        field => Ok(Plane::Exact(ScalarArith(field), s.points().iter().map(|q| q.coords().to_vec()).collect())),
    }
}

macro_rules! on_plane {
    ($s:expr, |$ar:ident, $pts:ident| $body:expr) => {
        match plane($s)? {
            Plane::Prime($ar, $pts) => $body,
            Plane::Exact($ar, $pts) => $body,
        }
    };
}

/// A curve and the sorted indices of the points on it.
#[derive(Clone)]
struct Found<E> {
    members: Vec<usize>,
    coeffs: Vec<E>,
}

/// Most points first, then lexicographically smallest member list.
fn better<E>(a: &Found<E>, b: &Found<E>) -> bool {
    a.members.len() > b.members.len() || (a.members.len() == b.members.len() && a.members < b.members)
}

fn pick<E>(a: Option<Found<E>>, b: Option<Found<E>>) -> Option<Found<E>> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if better(&b, &a) { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

fn monomial_values<A: Arith>(ar: &A, pts: &[Vec<A::E>], t: u32) -> Vec<Vec<A::E>> {
    let mono = monomial_basis(2, t);
    pts.iter()
        .map(|p| {
            mono.iter()
                .map(|e| {
                    let mut acc = ar.one();
                    for (v, &k) in e.iter().enumerate() {
                        for _ in 0..k {
                            acc = ar.mul(&acc, &p[v]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn dot<A: Arith>(ar: &A, a: &[A::E], b: &[A::E]) -> A::E {
    a.iter().zip(b).fold(ar.zero(), |acc, (x, y)| ar.add(&acc, &ar.mul(x, y)))
}

fn incident<A: Arith>(ar: &A, coeffs: &[A::E], vals: &[Vec<A::E>]) -> Vec<usize> {
    (0..vals.len()).filter(|&i| ar.is_zero(&dot(ar, coeffs, &vals[i]))).collect()
}

/// Lines through at least two points, each reported once (from its two
/// smallest members).
fn all_lines<A: PlaneField>(ar: &A, pts: &[Vec<A::E>]) -> Vec<Found<A::E>> {
    let n = pts.len();
    let vals = monomial_values(ar, pts, 1);
    // basis order of degree-1 monomials
    let order: Vec<usize> = monomial_basis(2, 1).iter().map(|e| e.iter().position(|&k| k == 1).expect("linear")).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let (a, b) = (&pts[i], &pts[j]);
            let cross = [
                ar.sub(&ar.mul(&a[1], &b[2]), &ar.mul(&a[2], &b[1])),
                ar.sub(&ar.mul(&a[2], &b[0]), &ar.mul(&a[0], &b[2])),
                ar.sub(&ar.mul(&a[0], &b[1]), &ar.mul(&a[1], &b[0])),
            ];
            let coeffs: Vec<A::E> = order.iter().map(|&v| cross[v].clone()).collect();
            let members = incident(ar, &coeffs, &vals);
            (members[0] == i && members[1] == j).then_some(Found { members, coeffs })
        })
        .collect()
}

fn best_of<E: Clone>(v: &[Found<E>]) -> Option<Found<E>> {
    v.iter().fold(None, |acc, f| pick(acc, Some(f.clone())))
}

fn conic_index(u: usize, v: usize) -> usize {
    let mut e = vec![0u32; 3];
    e[u] += 1;
    e[v] += 1;
    monomial_basis(2, 2).iter().position(|m| *m == e).expect("quadratic monomial")
}

fn line_product<A: Arith>(ar: &A, a: &[A::E], b: &[A::E]) -> Vec<A::E> {
    let order: Vec<usize> = monomial_basis(2, 1).iter().map(|e| e.iter().position(|&k| k == 1).expect("linear")).collect();
    let mut la = vec![ar.zero(); 3];
    let mut lb = vec![ar.zero(); 3];
    for (idx, &v) in order.iter().enumerate() {
        la[v] = a[idx].clone();
        lb[v] = b[idx].clone();
    }
    let mut out = vec![ar.zero(); 6];
    for u in 0..3 {
        for v in 0..3 {
            let k = conic_index(u, v);
            out[k] = ar.add(&out[k], &ar.mul(&la[u], &lb[v]));
        }
    }
    out
}

/// Best union of two lines (a single line included as `A = B`).
fn best_line_pair<A: PlaneField>(ar: &A, n: usize, lines: &[Found<A::E>]) -> Option<Found<A::E>> {
    let words = n.div_ceil(64);
    let bits: Vec<Vec<u64>> = lines
        .iter()
        .map(|l| {
            let mut b = vec![0u64; words];
            for &i in &l.members {
                b[i / 64] |= 1 << (i % 64);
            }
            b
        })
        .collect();
    let best = (0..lines.len())
        .into_par_iter()
        .map(|a| {
            let mut local: Option<(usize, Vec<usize>, usize)> = None;
            for b in a..lines.len() {
                let count: usize = bits[a].iter().zip(&bits[b]).map(|(x, y)| (x | y).count_ones() as usize).sum();
                if local.as_ref().is_some_and(|(c, _, _)| count < *c) {
                    continue;
                }
                let members: Vec<usize> = (0..n).filter(|&i| (bits[a][i / 64] | bits[b][i / 64]) >> (i % 64) & 1 == 1).collect();
                if local.as_ref().is_none_or(|(c, m, _)| count > *c || members < *m) {
                    local = Some((count, members, b));
                }
            }
            local.map(|(_, members, b)| (a, b, members))
        })
        .collect::<Vec<_>>();
    best.into_iter().flatten().fold(None, |acc, (a, b, members)| {
        let f = Found { members, coeffs: line_product(ar, &lines[a].coeffs, &lines[b].coeffs) };
        pick(acc, Some(f))
    })
}

/// Symmetric matrix of a conic (scaled by 2), whose rank detects
/// irreducibility in characteristic other than 2.
fn conic_rank<A: Arith>(ar: &A, coeffs: &[A::E]) -> usize {
    let mut m = vec![vec![ar.zero(); 3]; 3];
    for (e, c) in monomial_basis(2, 2).iter().zip(coeffs) {
        let vars: Vec<usize> = (0..3).flat_map(|v| std::iter::repeat_n(v, e[v] as usize)).collect();
        let (u, v) = (vars[0], vars[1]);
        if u == v {
            m[u][u] = ar.add(&m[u][u], &ar.add(c, c));
        } else {
            m[u][v] = ar.add(&m[u][v], c);
            m[v][u] = ar.add(&m[v][u], c);
        }
    }
    linalg::rank(ar, &m, 3)
}

/// Exact conic search through pencils: every conic with at least five of
/// the points contains four of them with no three collinear, and the
/// pencil through those four sorts the remaining points by the unique
/// member through each.
fn best_conic_pencils<A: PlaneField>(ar: &A, pts: &[Vec<A::E>], irreducible_only: bool) -> Option<Found<A::E>> {
    let n = pts.len();
    let vals = monomial_values(ar, pts, 2);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let results: Vec<Option<Found<A::E>>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut local: Option<Found<A::E>> = None;
            for k in j + 1..n {
                for l in k + 1..n {
                    let quad = [i, j, k, l];
                    let rows: Vec<Vec<A::E>> = quad.iter().map(|&q| vals[q].clone()).collect();
                    let ker = linalg::kernel(ar, &rows, 6);
                    if ker.len() != 2 {
                        continue;
                    }
                    let (a, b) = (&ker[0], &ker[1]);
                    let mut base = Vec::new();
                    let mut keyed: Vec<(Option<A::K>, usize, A::E, A::E)> = Vec::new();
                    for q in 0..n {
                        if quad.contains(&q) {
                            continue;
                        }
                        let va = dot(ar, a, &vals[q]);
                        let vb = dot(ar, b, &vals[q]);
                        if ar.is_zero(&va) && ar.is_zero(&vb) {
                            base.push(q);
                        } else if ar.is_zero(&vb) {
                            keyed.push((None, q, va, vb));
                        } else {
                            keyed.push((Some(ar.key(&ar.mul(&va, &ar.inv(&vb)))), q, va, vb));
                        }
                    }
                    if irreducible_only && !base.is_empty() {
                        // base points beyond the four force a line into every member
                        continue;
                    }
                    keyed.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));
                    let mut start = 0;
                    while start < keyed.len() {
                        let mut end = start;
                        while end < keyed.len() && keyed[end].0 == keyed[start].0 {
                            end += 1;
                        }
                        let count = 4 + base.len() + (end - start);
                        if local.as_ref().is_none_or(|f| count >= f.members.len()) {
                            let (va, vb) = (&keyed[start].2, &keyed[start].3);
                            // vb·A − va·B vanishes at the group's points
                            let coeffs: Vec<A::E> = a.iter().zip(b).map(|(x, y)| ar.sub(&ar.mul(vb, x), &ar.mul(va, y))).collect();
                            if !irreducible_only || conic_rank(ar, &coeffs) == 3 {
                                let f = Found { members: incident(ar, &coeffs, &vals), coeffs };
                                local = pick(local, Some(f));
                            }
                        }
                        start = end;
                    }
                    if keyed.is_empty() && !irreducible_only {
                        let f = Found { members: incident(ar, a, &vals), coeffs: a.clone() };
                        local = pick(local, Some(f));
                    }
                }
            }
            local
        })
        .collect();
    results.into_iter().fold(None, pick)
}

/// Largest subset lying on a degree-t curve by branch and bound over the
/// null space of the evaluation matrix. Returns the best curve and whether
/// the search finished within `budget` nodes.
fn branch_and_bound<A: PlaneField>(ar: &A, pts: &[Vec<A::E>], t: u32, budget: u64) -> (Option<Found<A::E>>, bool) {
    struct Search<'a, A: PlaneField> {
        ar: &'a A,
        vals: Vec<Vec<A::E>>,
        nodes: u64,
        budget: u64,
        best: Option<(usize, Vec<A::E>)>,
    }
    impl<A: PlaneField> Search<'_, A> {
        fn dfs(&mut self, i: usize, chosen: usize, ker: &[Vec<A::E>]) {
            self.nodes += 1;
            if self.nodes > self.budget {
                return;
            }
            let n = self.vals.len();
            if let Some((b, _)) = &self.best {
                if chosen + (n - i) <= *b {
                    return;
                }
            }
            if i == n {
                self.best = Some((chosen, ker[0].clone()));
                return;
            }
            let ar = self.ar;
            let v: Vec<A::E> = ker.iter().map(|k| dot(ar, k, &self.vals[i])).collect();
            let Some(piv) = v.iter().position(|x| !ar.is_zero(x)) else {
                // on every curve still possible: including it dominates
                self.dfs(i + 1, chosen + 1, ker);
                return;
            };
            if ker.len() > 1 {
                let inv = ar.inv(&v[piv]);
                let next: Vec<Vec<A::E>> = ker
                    .iter()
                    .enumerate()
                    .filter(|(c, _)| *c != piv)
                    .map(|(c, k)| {
                        let f = ar.mul(&v[c], &inv);
                        k.iter().zip(&ker[piv]).map(|(x, y)| ar.sub(x, &ar.mul(&f, y))).collect()
                    })
                    .collect();
                self.dfs(i + 1, chosen + 1, &next);
            }
            self.dfs(i + 1, chosen, ker);
        }
    }
    let dim = monomial_count(2, t);
    let ident: Vec<Vec<A::E>> = (0..dim).map(|r| (0..dim).map(|c| if r == c { ar.one() } else { ar.zero() }).collect()).collect();
    let mut s = Search { ar, vals: monomial_values(ar, pts, t), nodes: 0, budget, best: None };
    s.dfs(0, 0, &ident);
    let exact = s.nodes <= budget;
    let found = s.best.map(|(_, coeffs)| Found { members: incident(ar, &coeffs, &s.vals), coeffs });
    (found, exact)
}

/// Outcome of a maximum-incidence search.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSearch {
    pub degree: u32,
    pub count: usize,
    /// Indices of the points on `curve`, sorted.
    pub members: Vec<usize>,
    pub curve: Option<HomogeneousForm>,
    /// `false` means `count` is only a lower bound.
    pub exact: bool,
}

fn to_search<A: PlaneField>(ar: &A, field: FieldSpec, t: u32, found: Option<Found<A::E>>, exact: bool) -> Result<CurveSearch> {
    Ok(match found {
        Some(f) => {
            let coeffs: Vec<Scalar> = f.coeffs.iter().map(|c| ar.lift(c)).collect();
            CurveSearch { degree: t, count: f.members.len(), curve: Some(HomogeneousForm::from_coefficients(2, t, field, &coeffs)?), members: f.members, exact }
        }
        None => CurveSearch { degree: t, count: 0, members: Vec::new(), curve: None, exact },
    })
}

fn trivial_curve<A: PlaneField>(ar: &A, pts: &[Vec<A::E>], t: u32) -> Found<A::E> {
    let vals = monomial_values(ar, pts, t);
    let ker = linalg::kernel(ar, &vals, monomial_count(2, t));
    Found { members: (0..pts.len()).collect(), coeffs: ker.into_iter().next().expect("fewer points than monomials") }
}

/// `max_points_on_curve(S, t, budget)`: the largest number of points of
/// `S` on one (possibly reducible) curve of degree `t`, with a witness.
pub fn max_points_on_curve(s: &PointSet, t: u32, budget: u64) -> Result<CurveSearch> {
    if t == 0 {
        return Err(Error::InvalidInput("curve degree must be at least 1".into()));
    }
    let field = s.field();
    on_plane!(s, |ar, pts| {
        let n = pts.len();
        if n < monomial_count(2, t) {
            if n == 0 {
                return Ok(CurveSearch { degree: t, count: 0, members: Vec::new(), curve: None, exact: true });
            }
            let f = trivial_curve(&ar, &pts, t);
            return to_search(&ar, field, t, Some(f), true);
        }
        match t {
            1 => to_search(&ar, field, 1, best_of(&all_lines(&ar, &pts)), true),
            2 => {
                let lines = all_lines(&ar, &pts);
                let pair = best_line_pair(&ar, n, &lines);
                if crate::polyform::binomial(n as u64, 4) > budget as u128 {
                    return to_search(&ar, field, 2, pair, false);
                }
                to_search(&ar, field, 2, pick(pair, best_conic_pencils(&ar, &pts, false)), true)
            }
            _ => {
                let (f, exact) = branch_and_bound(&ar, &pts, t, budget);
                to_search(&ar, field, t, f, exact)
            }
        }
    })
}

/// The best irreducible curve of degree `j ∈ {1, 2}` through at least
/// two (lines) or five (conics) points, with the same tie-breaking.
pub fn best_irreducible_curve(s: &PointSet, j: u32, budget: u64) -> Result<Option<CurveSearch>> {
    let field = s.field();
    on_plane!(s, |ar, pts| {
        let n = pts.len();
        let found = match j {
            1 if n >= 2 => best_of(&all_lines(&ar, &pts)),
            1 => None,
            2 if n >= 5 => {
                if crate::polyform::binomial(n as u64, 4) > budget as u128 {
                    return Err(Error::UnverifiableDegree(2));
                }
                best_conic_pencils(&ar, &pts, true)
            }
            2 => None,
            _ => return Err(Error::UnverifiableDegree(j)),
        };
        Ok(match found {
            Some(f) => Some(to_search(&ar, field, j, Some(f), true)?),
            None => None,
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarParams {
    pub m: usize,
    pub t_max: u32,
}

impl StarParams {
    pub fn new(m: usize, t_max: u32) -> Result<Self> {
        if m == 0 || t_max == 0 {
            return Err(Error::InvalidInput("property ★ needs m ≥ 1 and t_max ≥ 1".into()));
        }
        Ok(StarParams { m, t_max })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeStatus {
    Vacuous,
    Holds,
    Violated,
    Unverified,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarDegree {
    pub t: u32,
    pub bound: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    pub status: DegreeStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarReport {
    pub m: usize,
    pub t_max: u32,
    /// True only when every binding degree was verified.
    pub holds: bool,
    pub degrees: Vec<StarDegree>,
}

/// `star_property(S, params)`: at most `t·m` points on any degree-t curve.
pub fn star_property(s: &PointSet, params: StarParams, budget: u64) -> Result<StarReport> {
    let mut degrees = Vec::new();
    for t in 1..=params.t_max {
        let bound = t as usize * params.m;
        if bound >= s.len() {
            degrees.push(StarDegree { t, bound, count: None, status: DegreeStatus::Vacuous });
            continue;
        }
        let r = max_points_on_curve(s, t, budget)?;
        let status = if r.count > bound {
            DegreeStatus::Violated
        } else if r.exact {
            DegreeStatus::Holds
        } else {
            DegreeStatus::Unverified
        };
        degrees.push(StarDegree { t, bound, count: Some(r.count), status });
    }
    let holds = degrees.iter().all(|d| matches!(d.status, DegreeStatus::Vacuous | DegreeStatus::Holds));
    Ok(StarReport { m: params.m, t_max: params.t_max, holds, degrees })
}

/// `⌊(d²+9d+10)/6⌋`.
pub fn bese_size_bound(d: u32) -> u64 {
    let d = d as u64;
    (d * d + 9 * d + 10) / 6
}

/// `⌊(d²+9d+16)/6⌋`, one more point than [`bese_size_bound`].
pub fn corollary_size_bound(d: u32) -> u64 {
    let d = d as u64;
    (d * d + 9 * d + 16) / 6
}

/// `max{h(d+3−h)−1, h²}` with `h = ⌊(d+3)/2⌋`.
pub fn davis_geramita_size_bound(d: u32) -> u64 {
    let d = d as u64;
    let h = (d + 3) / 2;
    (h * (d + 3 - h) - 1).max(h * h)
}

/// `k(d+3−k)−2`, the incidence bound for curves of degree `k ≤ (d+3)/2`.
pub fn curve_bound(d: u32, k: u32) -> i64 {
    k as i64 * (d as i64 + 3 - k as i64) - 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisKind {
    Bese,
    Corollary,
    DavisGeramita,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveCheck {
    pub k: u32,
    pub bound: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    pub binding: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub kind: HypothesisKind,
    pub d: u32,
    pub size: usize,
    pub size_bound: u64,
    pub hypothesis: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing: Option<String>,
    pub checks: Vec<CurveCheck>,
}

/// Size bound plus incidence bounds for every binding `k ≤ (d+3)/2`.
pub fn planar_hypothesis(s: &PointSet, d: u32, kind: HypothesisKind, budget: u64) -> Result<HypothesisReport> {
    if d < 3 {
        return Err(Error::InvalidInput(format!("planar hypotheses need d ≥ 3, got {d}")));
    }
    let size_bound = match kind {
        HypothesisKind::Bese => bese_size_bound(d),
        HypothesisKind::Corollary => corollary_size_bound(d),
        HypothesisKind::DavisGeramita => davis_geramita_size_bound(d),
    };
    let mut report = HypothesisReport { kind, d, size: s.len(), size_bound, hypothesis: true, failing: None, checks: Vec::new() };
    if s.len() as u64 > size_bound {
        report.hypothesis = false;
        report.failing = Some(format!("size {} > {size_bound}", s.len()));
        return Ok(report);
    }
    for k in 1..=(d + 3) / 2 {
        let bound = curve_bound(d, k);
        if bound >= s.len() as i64 {
            report.checks.push(CurveCheck { k, bound, count: None, binding: false });
            continue;
        }
        let r = max_points_on_curve(s, k, budget)?;
        report.checks.push(CurveCheck { k, bound, count: Some(r.count), binding: true });
        if r.count as i64 > bound {
            report.hypothesis = false;
            report.failing = Some(format!("{} points on a curve of degree {k} > {bound}", r.count));
            return Ok(report);
        }
        if !r.exact {
            return Err(Error::UnverifiableDegree(k));
        }
    }
    Ok(report)
}

pub fn bese_hypothesis(s: &PointSet, d: u32, budget: u64) -> Result<HypothesisReport> {
    planar_hypothesis(s, d, HypothesisKind::Bese, budget)
}

pub fn corollary_hypothesis(s: &PointSet, d: u32, budget: u64) -> Result<HypothesisReport> {
    planar_hypothesis(s, d, HypothesisKind::Corollary, budget)
}

pub fn davis_geramita_hypothesis(s: &PointSet, d: u32, budget: u64) -> Result<HypothesisReport> {
    planar_hypothesis(s, d, HypothesisKind::DavisGeramita, budget)
}

/// `separating_curve(S, P_i, d)`: a degree-d form through `S ∖ P_i`, nonzero
/// at `P_i`.
///
/// For `d ≥ 3` the guarantee comes from the corollary hypotheses on `S`,
/// or from the Bese hypotheses on `S ∖ P_i` (base-point freeness at `P_i`).
/// Below degree 3 no theorem applies and the rank computation decides.
pub fn separating_curve(s: &PointSet, i: usize, d: u32, budget: u64) -> Result<HomogeneousForm> {
    if i >= s.len() {
        return Err(Error::InvalidInput(format!("point index {i} out of range")));
    }
    if d >= 3 {
        let cor = corollary_hypothesis(s, d, budget)?;
        if !cor.hypothesis {
            let rest = bese_hypothesis(&s.without(i), d, budget)?;
            if !rest.hypothesis {
                return Err(Error::HypothesisViolated(cor.failing.unwrap_or_default()));
            }
        }
        return conditions::separating_form(s, i, d)?
            .ok_or_else(|| Error::InternalContradiction(format!("no degree-{d} separator for point {i} although the hypotheses hold")));
    }
    conditions::separating_form(s, i, d)?.ok_or_else(|| Error::HypothesisViolated(format!("no curve of degree {d} separates point {i}")))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub degree: u32,
    /// Irreducible plane curve carrying the projected members.
    pub curve: HomogeneousForm,
    /// Indices into the projected set.
    pub members: Vec<usize>,
    /// The same points as indices into the original set.
    pub preimages: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterPartition {
    pub clusters: Vec<Cluster>,
    pub residual: Vec<usize>,
    pub residual_preimages: Vec<usize>,
    /// `c_j`: number of clusters of each degree.
    pub multiplicities: BTreeMap<u32, usize>,
    pub r_min: Option<u32>,
}

impl ClusterPartition {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "clusters": self.clusters.iter().map(|c| serde_json::json!({
                "degree": c.degree,
                "curve": c.curve.to_json(),
                "members": c.members,
                "preimages": c.preimages,
            })).collect::<Vec<_>>(),
            "residual": self.residual,
            "residual_preimages": self.residual_preimages,
            "multiplicities": self.multiplicities,
            "r_min": self.r_min,
        })
    }
}

/// `cluster_partition`: greedily extracts irreducible curves of the
/// smallest degree `j` carrying more than `j·m` of the remaining points.
/// The residual satisfies property ★ for every degree up to `t_max`.
pub fn cluster_partition(s_proj: &PointSet, preimages: &[usize], params: StarParams, budget: u64) -> Result<ClusterPartition> {
    if preimages.len() != s_proj.len() {
        return Err(Error::InvalidInput("preimage map must cover the projected set".into()));
    }
    let mut remaining: Vec<usize> = (0..s_proj.len()).collect();
    let mut clusters = Vec::new();
    'outer: loop {
        let sub = s_proj.subset(&remaining);
        for j in 1..=params.t_max {
            let threshold = j as usize * params.m;
            if remaining.len() <= threshold {
                break;
            }
            let found = if j <= 2 {
                best_irreducible_curve(&sub, j, budget)?
            } else {
                let r = max_points_on_curve(&sub, j, budget)?;
                if r.count > threshold || !r.exact {
                    // irreducible extraction is only implemented for lines and conics
                    return Err(Error::UnverifiableDegree(j));
                }
                None
            };
            if let Some(c) = found.filter(|c| c.count > threshold) {
                let members: Vec<usize> = c.members.iter().map(|&k| remaining[k]).collect();
                let pre = members.iter().map(|&k| preimages[k]).collect();
                remaining.retain(|k| !members.contains(k));
                clusters.push(Cluster { degree: j, curve: c.curve.expect("witness"), members, preimages: pre });
                continue 'outer;
            }
        }
        break;
    }
    let mut multiplicities = BTreeMap::new();
    for c in &clusters {
        *multiplicities.entry(c.degree).or_insert(0) += 1;
    }
    let r_min = clusters.iter().map(|c| c.degree).min();
    let residual_preimages = remaining.iter().map(|&k| preimages[k]).collect();
    Ok(ClusterPartition { clusters, residual: remaining, residual_preimages, multiplicities, r_min })
}

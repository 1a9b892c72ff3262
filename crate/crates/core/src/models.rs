//! Worked examples: classical nodal threefolds and seeded families with
//! known node counts, plus synthetic node sets for the constructive route.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certify::{NodeBackend, ThreefoldSpec, VariantKind};
use crate::error::{Error, Result};
use crate::linalg::{kernel, ModP};
use crate::pointgeom::{find_nodes_enumerate, random_scalar, verify_node, DEFAULT_ENUM_BUDGET, NumericOptions, PointSet, ProjectionMap, ProjectivePoint};
use crate::polyform::{monomial_basis, univariate, HomogeneousForm};
use crate::scalar::{FieldSpec, Fp, Scalar};

/// Redraws attempted by the seeded constructors.
const DRAW_ATTEMPTS: u64 = 64;
/// Prime used when an example needs one and none is given.
pub const DEFAULT_EXAMPLE_PRIME: u64 = 101;
/// Prime of the degenerate-cone examples.
pub const CONE_PRIME: u64 = 10_007;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// Value stated in the literature for this example.
    Literature,
    /// Value obtained by an independent computation.
    Computed,
    /// Value that follows from arithmetic on the parameters.
    Arithmetic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedValue {
    pub quantity: String,
    pub value: i64,
    pub source: Source,
}

fn expect(quantity: &str, value: i64, source: Source) -> ExpectedValue {
    ExpectedValue { quantity: quantity.into(), value, source }
}

#[derive(Debug, Clone)]
pub struct NamedExample {
    pub name: String,
    pub summary: String,
    pub spec: ThreefoldSpec,
    pub expected: Vec<ExpectedValue>,
    /// Nodes known by construction, for cross-checks against the solvers.
    pub reference_nodes: Option<PointSet>,
}

impl NamedExample {
    pub fn expected(&self, quantity: &str) -> Option<i64> {
        self.expected.iter().find(|e| e.quantity == quantity).map(|e| e.value)
    }
}

fn bare_spec(field: FieldSpec, variant: VariantKind) -> ThreefoldSpec {
    ThreefoldSpec {
        field,
        variant,
        f: None,
        g: None,
        nodes: None,
        node_backend: NodeBackend::Enumerate,
        primes: Vec::new(),
        plane_family: None,
        smooth_attested: false,
        linear_system: Vec::new(),
        numeric: NumericOptions::default(),
    }
}

fn term(nv: usize, exp: &[(usize, u32)]) -> Vec<u32> {
    let mut e = vec![0; nv];
    for &(i, k) in exp {
        e[i] += k;
    }
    e
}

fn linear_i64(field: FieldSpec, c: &[i64]) -> HomogeneousForm {
    HomogeneousForm::linear(&c.iter().map(|&x| Scalar::from_i64(field, x)).collect::<Vec<_>>()).expect("nonempty")
}

fn product(forms: &[HomogeneousForm]) -> Result<HomogeneousForm> {
    let mut acc = HomogeneousForm::constant(forms[0].num_vars(), Scalar::one(forms[0].field()));
    for f in forms {
        acc = acc.product(f)?;
    }
    Ok(acc)
}

/// Form with small random integer coefficients.
fn small_form(nv: usize, d: u32, field: FieldSpec, rng: &mut impl Rng) -> Result<HomogeneousForm> {
    let c: Vec<Scalar> = monomial_basis(nv - 1, d).iter().map(|_| Scalar::from_i64(field, rng.gen_range(-3..=3))).collect();
    HomogeneousForm::from_coefficients(nv - 1, d, field, &c)
}

fn small_vec(len: usize, rng: &mut impl Rng) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..len).map(|_| rng.gen_range(-9..=9)).collect();
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

fn seeded(seed: u64, attempt: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt);
    rng
}

/// Quartic `w⁴ − w(x³ + y³ + z³ + t³) + 3xyzt` in P⁴ with `w = x₀`.
pub fn burkhardt() -> NamedExample {
    let q = FieldSpec::Rational;
    let nv = 5;
    let mut terms = vec![(term(nv, &[(0, 4)]), Scalar::one(q)), (term(nv, &[(1, 1), (2, 1), (3, 1), (4, 1)]), Scalar::from_i64(q, 3))];
    for i in 1..5 {
        terms.push((term(nv, &[(0, 1), (i, 3)]), Scalar::from_i64(q, -1)));
    }
    let f = HomogeneousForm::from_terms(nv, 4, q, terms).expect("valid terms");
    let mut spec = bare_spec(q, VariantKind::Hypersurface);
    spec.f = Some(f);
    // nodes are rational over F_p exactly when p ≡ 1 (mod 3)
    spec.primes = vec![31, 37, 43];
    NamedExample {
        name: "burkhardt".into(),
        summary: "Burkhardt quartic threefold in P⁴".into(),
        spec,
        expected: vec![
            expect("nodes", 45, Source::Literature),
            expect("rank", 30, Source::Computed),
            expect("defect", 15, Source::Literature),
            expect("target_degree", 3, Source::Arithmetic),
        ],
        reference_nodes: None,
    }
}

/// Barth sextic `4(τ²x² − y²)(τ²y² − z²)(τ²z² − x²) − (1 + 2τ)w²(x² + y² + z² − w²)²`
/// over Q(√5), τ the golden ratio, as the branch surface of a double solid.
pub fn barth() -> NamedExample {
    let k = FieldSpec::Quadratic { d: 5 };
    let nv = 4;
    let tau2 = Scalar::parse(k, "3/2+1/2*sqrt5").expect("literal");
    let one_plus_2tau = Scalar::parse(k, "2+1*sqrt5").expect("literal");
    let sq = |i: usize| HomogeneousForm::from_terms(nv, 2, k, vec![(term(nv, &[(i, 2)]), Scalar::one(k))]).expect("valid");
    let factor = |i: usize, j: usize| sq(i).scale(&tau2).and_then(|a| a.sub(&sq(j)));
    let build = || -> Result<HomogeneousForm> {
        let left = product(&[factor(0, 1)?, factor(1, 2)?, factor(2, 0)?])?.scale(&Scalar::from_i64(k, 4))?;
        let s = sq(0).add(&sq(1))?.add(&sq(2))?.sub(&sq(3))?;
        let right = sq(3).product(&s.pow(2)?)?.scale(&one_plus_2tau)?;
        left.sub(&right)
    };
    let g = build().expect("fixed coefficients");
    let mut spec = bare_spec(k, VariantKind::DoubleSolid);
    spec.g = Some(g);
    spec.node_backend = NodeBackend::Numeric;
    NamedExample {
        name: "barth".into(),
        summary: "double solid branched along the Barth sextic".into(),
        spec,
        expected: vec![
            expect("nodes", 65, Source::Literature),
            expect("rank", 52, Source::Computed),
            expect("defect", 13, Source::Literature),
            expect("target_degree", 5, Source::Arithmetic),
        ],
        reference_nodes: None,
    }
}

/// Lines `a·(z, t, w) = 0` meet pairwise once; checks that the
/// `|A|·|B|` intersection points of `A × B` are distinct and each lies on
/// exactly one line of each family.
fn grid_is_transversal(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    let cross = |u: &[i64], v: &[i64]| [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
    let dot = |u: &[i64], p: &[i64; 3]| u.iter().zip(p).map(|(x, y)| x * y).sum::<i64>();
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            let p = cross(ai, bj);
            if p == [0, 0, 0] {
                return false;
            }
            if a.iter().enumerate().any(|(k, ak)| k != i && dot(ak, &p) == 0) || b.iter().enumerate().any(|(l, bl)| l != j && dot(bl, &p) == 0) {
                return false;
            }
        }
    }
    true
}

/// `x·G + y·F = 0` in P⁴ with `G`, `F` of degree `n − 1` restricting to
/// products of lines on the plane `x = y = 0`; nodes at their
/// `(n − 1)²` common zeros there.
pub fn plane_family(n: u32, seed: u64) -> Result<NamedExample> {
    if n < 2 {
        return Err(Error::InvalidInput("plane family needs n ≥ 2".into()));
    }
    let q = FieldSpec::Rational;
    for attempt in 0..DRAW_ATTEMPTS {
        let mut rng = seeded(seed, attempt);
        let a: Vec<Vec<i64>> = (0..n - 1).map(|_| small_vec(3, &mut rng)).collect();
        let b: Vec<Vec<i64>> = (0..n - 1).map(|_| small_vec(3, &mut rng)).collect();
        if !grid_is_transversal(&a, &b) {
            continue;
        }
        let f3 = product(&a.iter().map(|c| linear_i64(q, c)).collect::<Vec<_>>())?;
        let g3 = product(&b.iter().map(|c| linear_i64(q, c)).collect::<Vec<_>>())?;
        // lift to P⁴ with coordinates (x, y, z, t, w) and add terms in x, y
        let embed: Vec<HomogeneousForm> = (2..5).map(|i| HomogeneousForm::variable(5, i, q)).collect();
        let lift = |h: &HomogeneousForm, rng: &mut ChaCha8Rng| -> Result<HomogeneousForm> {
            let mut out = h.substitute(&embed)?;
            for v in 0..2 {
                let extra = small_form(5, n - 2, q, rng)?.product(&HomogeneousForm::variable(5, v, q))?;
                out = out.add(&extra)?;
            }
            Ok(out)
        };
        let f5 = lift(&f3, &mut rng)?;
        let g5 = lift(&g3, &mut rng)?;
        let v = HomogeneousForm::variable(5, 0, q).product(&g5)?.add(&HomogeneousForm::variable(5, 1, q).product(&f5)?)?;
        let mut spec = bare_spec(q, VariantKind::Hypersurface);
        spec.f = Some(v);
        spec.node_backend = NodeBackend::PlaneFamily;
        spec.plane_family = Some((f3, g3));
        let nodes = ((n - 1) * (n - 1)) as i64;
        let mut expected = vec![expect("nodes", nodes, Source::Literature), expect("target_degree", 2 * n as i64 - 5, Source::Arithmetic)];
        if n == 3 {
            expected.push(expect("defect", 1, Source::Computed));
        }
        return Ok(NamedExample {
            name: format!("plane_family_{n}"),
            summary: format!("degree-{n} hypersurface xG + yF containing the plane x = y = 0"),
            spec,
            expected,
            reference_nodes: None,
        });
    }
    Err(Error::DegenerateDraw(format!("no transversal line grid for n = {n} from seed {seed}")))
}

/// Point of P³(F_p) cut out by three planes, if they are independent.
fn planes_meet(rows: [&[i64]; 3], p: u64) -> Option<ProjectivePoint> {
    let m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| crate::scalar::prime::reduce_i64(x, p)).collect()).collect();
    let k = kernel(&ModP(p), &m, 4);
    (k.len() == 1).then(|| ProjectivePoint::from_residues(&k[0], p).ok()).flatten()
}

/// Ordinary double points of `{g = 0}` at `pts`, all distinct, and no
/// other singular point over F_p (a reduction can acquire extra ones).
fn planted_nodes_only(g: &HomogeneousForm, pts: &[ProjectivePoint]) -> Result<bool> {
    for (i, q) in pts.iter().enumerate() {
        if pts[..i].contains(q) {
            return Ok(false);
        }
        match verify_node(q, std::slice::from_ref(g)) {
            Ok(r) if r.ordinary => {}
            Ok(_) | Err(Error::PointNotOnVariety(_)) => return Ok(false),
            Err(e) => return Err(e),
        }
    }
    let mut forms = vec![g.clone()];
    forms.extend(g.partials());
    Ok(find_nodes_enumerate(&forms, DEFAULT_ENUM_BUDGET)?.len() == pts.len())
}

fn double_solid_example(name: String, summary: String, g: HomogeneousForm, nodes: Vec<ProjectivePoint>, expected: i64, bezout: &str, draws: u64) -> Result<NamedExample> {
    let field = g.field();
    let mut spec = bare_spec(field, VariantKind::DoubleSolid);
    spec.g = Some(g);
    Ok(NamedExample {
        name,
        summary: format!("{summary} (draw {draws})"),
        spec,
        expected: vec![expect("nodes", expected, Source::Literature), expect(bezout, expected, Source::Arithmetic), expect("target_degree", 5, Source::Arithmetic)],
        reference_nodes: Some(PointSet::new(3, field, nodes)?),
    })
}

/// Branch sextic `g² − 4fh` over F_p for cubics `f, g, h` spanning a net
/// with 27 rational base points; the sextic has its nodes there.
pub fn branch_sextic_27(seed: u64, p: u64) -> Result<NamedExample> {
    let field = FieldSpec::Prime { p };
    for attempt in 0..DRAW_ATTEMPTS {
        let mut rng = seeded(seed, attempt);
        let planes: Vec<Vec<Vec<i64>>> = (0..3).map(|_| (0..3).map(|_| small_vec(4, &mut rng)).collect()).collect();
        let mut pts = Vec::new();
        for a in &planes[0] {
            for b in &planes[1] {
                for c in &planes[2] {
                    if let Some(q) = planes_meet([a, b, c], p) {
                        pts.push(q);
                    }
                }
            }
        }
        if pts.len() != 27 {
            continue;
        }
        let cubic = |i: usize| product(&planes[i].iter().map(|c| linear_i64(field, c)).collect::<Vec<_>>());
        let (a, b, c) = (cubic(0)?, cubic(1)?, cubic(2)?);
        let coef: Vec<i64> = (0..6).map(|_| rng.gen_range(-5..=5)).collect();
        // rows (A, B, C) coefficients of f, g, h
        let m = [[1, coef[0], coef[1]], [coef[2], coef[3], 1], [coef[4], 1, coef[5]]];
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if crate::scalar::prime::reduce_i64(det, p) == 0 {
            continue;
        }
        let comb = |r: [i64; 3]| -> Result<HomogeneousForm> {
            a.scale(&Scalar::from_i64(field, r[0]))?.add(&b.scale(&Scalar::from_i64(field, r[1]))?)?.add(&c.scale(&Scalar::from_i64(field, r[2]))?)
        };
        let (f, g, h) = (comb(m[0])?, comb(m[1])?, comb(m[2])?);
        let sextic = g.pow(2)?.sub(&f.product(&h)?.scale(&Scalar::from_i64(field, 4))?)?;
        if !planted_nodes_only(&sextic, &pts)? {
            continue;
        }
        return double_solid_example(
            "branch_sextic_27".into(),
            format!("branch sextic g² − 4fh over F_{p} with cubics f, g, h"),
            sextic,
            pts,
            27,
            "bezout_3_3_3",
            attempt + 1,
        );
    }
    Err(Error::DegenerateDraw(format!("no admissible cubic net over F_{p} from seed {seed}")))
}

/// Branch sextic `f₃² − 4f₂f₄` over F_p: `f₂` the smooth quadric
/// `x₀x₁ − x₂x₃`, `f₃` and `f₄` products of tangent planes plus multiples
/// of `f₂`, so that all 24 points of `f₂ = f₃ = f₄ = 0` are rational.
pub fn branch_sextic_24(seed: u64, p: u64) -> Result<NamedExample> {
    let field = FieldSpec::Prime { p };
    let nv = 4;
    let f2 = HomogeneousForm::from_terms(nv, 2, field, vec![(term(nv, &[(0, 1), (1, 1)]), Scalar::one(field)), (term(nv, &[(2, 1), (3, 1)]), Scalar::from_i64(field, -1))])?;
    // (s, t) ∈ P¹ × P¹ ↦ (s₀t₀ : s₁t₁ : s₀t₁ : s₁t₀) on f₂ = 0
    let segre = |s: [i64; 2], t: [i64; 2]| [s[0] * t[0], s[1] * t[1], s[0] * t[1], s[1] * t[0]];
    let red = |v: &[i64]| -> Vec<u64> { v.iter().map(|&x| crate::scalar::prime::reduce_i64(x, p)).collect() };
    for attempt in 0..DRAW_ATTEMPTS {
        let mut rng = seeded(seed, attempt);
        let params: Vec<([i64; 2], [i64; 2])> = (0..7)
            .map(|_| {
                let mut pair = || [rng.gen_range(0..p as i64), rng.gen_range(0..p as i64)];
                (pair(), pair())
            })
            .collect();
        // the 7 s-values and the 7 t-values must be pairwise distinct in P¹(F_p)
        let distinct = |v: Vec<[i64; 2]>| {
            v.iter().enumerate().all(|(i, a)| v[..i].iter().all(|b| crate::scalar::prime::reduce_i64(a[0] * b[1] - a[1] * b[0], p) != 0))
                && v.iter().all(|a| red(a).iter().any(|&x| x != 0))
        };
        if !distinct(params.iter().map(|x| x.0).collect()) || !distinct(params.iter().map(|x| x.1).collect()) {
            continue;
        }
        let tangent = |(s, t): ([i64; 2], [i64; 2])| {
            let x = segre(s, t);
            linear_i64(field, &[x[1], x[0], -x[3], -x[2]])
        };
        let quad_multiple = |d: u32, rng: &mut ChaCha8Rng| small_form(nv, d, field, rng).and_then(|r| r.product(&f2));
        let f3 = product(&params[..3].iter().map(|&x| tangent(x)).collect::<Vec<_>>())?.add(&quad_multiple(1, &mut rng)?)?;
        let f4 = product(&params[3..].iter().map(|&x| tangent(x)).collect::<Vec<_>>())?.add(&quad_multiple(2, &mut rng)?)?;
        let sextic = f3.pow(2)?.sub(&f2.product(&f4)?.scale(&Scalar::from_i64(field, 4))?)?;
        let mut pts = Vec::new();
        for j in 0..3 {
            for k in 3..7 {
                for (s, t) in [(params[j].0, params[k].1), (params[k].0, params[j].1)] {
                    pts.push(ProjectivePoint::from_residues(&red(&segre(s, t)), p)?);
                }
            }
        }
        if !planted_nodes_only(&sextic, &pts)? {
            continue;
        }
        return double_solid_example(
            "branch_sextic_24".into(),
            format!("branch sextic f₃² − 4f₂f₄ over F_{p} with f₂ a smooth quadric"),
            sextic,
            pts,
            24,
            "bezout_2_3_4",
            attempt + 1,
        );
    }
    Err(Error::DegenerateDraw(format!("no admissible tangent-plane configuration over F_{p} from seed {seed}")))
}

/// Complete intersection of a degree-`n` form `F` with the rank-4 quadric
/// `G = x₀x₁ − x₂x₃` in P⁵, a cone with vertex the line `x₀ = … = x₃ = 0`.
/// Its nodes are the `n` zeros of `F` on that line, found by univariate
/// root finding over F_p.
pub fn degenerate_cone_ci(n: u32, seed: u64) -> Result<NamedExample> {
    if n < 2 {
        return Err(Error::InvalidInput("degenerate cone example needs n ≥ 2".into()));
    }
    let p = CONE_PRIME;
    let field = FieldSpec::Prime { p };
    let nv = 6;
    let g = HomogeneousForm::from_terms(nv, 2, field, vec![(term(nv, &[(0, 1), (1, 1)]), Scalar::one(field)), (term(nv, &[(2, 1), (3, 1)]), Scalar::from_i64(field, -1))])?;
    for attempt in 0..DRAW_ATTEMPTS {
        let mut rng = seeded(seed, attempt);
        let roots: Vec<Scalar> = (0..n).map(|_| random_scalar(field, &mut rng)).collect();
        let x4 = HomogeneousForm::variable(nv, 4, field);
        let x5 = HomogeneousForm::variable(nv, 5, field);
        let mut f = product(&roots.iter().map(|r| x4.sub(&x5.scale(r)?)).collect::<Result<Vec<_>>>()?)?;
        for v in 0..4 {
            let extra = small_form(nv, n - 1, field, &mut rng)?.product(&HomogeneousForm::variable(nv, v, field))?;
            f = f.add(&extra)?;
        }
        // F(0, 0, 0, 0, s, 1) and the point at s = ∞
        let uni: Vec<u64> = (0..=n).map(|j| f.coefficient(&term(nv, &[(4, j), (5, n - j)])).as_fp().expect("prime").residue()).collect();
        if uni[n as usize] == 0 {
            continue;
        }
        let found = univariate::roots_mod(p, &uni);
        if found.len() != n as usize {
            continue;
        }
        let pts: Vec<ProjectivePoint> = found
            .iter()
            .map(|&s| ProjectivePoint::new([0, 0, 0, 0, s, 1].iter().map(|&x| Scalar::Prime(Fp::new(x, p))).collect()))
            .collect::<Result<_>>()?;
        let ordinary = pts.iter().map(|q| verify_node(q, &[f.clone(), g.clone()]).map(|r| r.ordinary)).collect::<Result<Vec<_>>>()?;
        if ordinary.iter().any(|o| !o) {
            continue;
        }
        let mut spec = bare_spec(field, VariantKind::CompleteIntersection);
        spec.f = Some(f);
        spec.g = Some(g);
        spec.nodes = Some(PointSet::new(5, field, pts.clone())?);
        spec.node_backend = NodeBackend::Given;
        return Ok(NamedExample {
            name: format!("degenerate_cone_ci_{n}"),
            summary: format!("degree-{n} form meeting a rank-4 quadric cone in P⁵ over F_{p}"),
            spec,
            expected: vec![expect("nodes", n as i64, Source::Literature), expect("quadric_rank", 4, Source::Arithmetic)],
            reference_nodes: Some(PointSet::new(5, field, pts)?),
        });
    }
    Err(Error::DegenerateDraw(format!("no split binary form of degree {n} from seed {seed}")))
}

/// Names accepted by [`by_name`], with their parameters fixed.
pub const NAMES: &[&str] = &[
    "burkhardt",
    "barth",
    "plane_family_3",
    "plane_family_4",
    "plane_family_5",
    "branch_sextic_27",
    "branch_sextic_24",
    "degenerate_cone_ci_3",
    "degenerate_cone_ci_4",
    "degenerate_cone_ci_5",
];

/// Builds a named example; seeded families use `seed`.
pub fn by_name(name: &str, seed: u64) -> Result<NamedExample> {
    let suffix = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse::<u32>().ok());
    match name {
        "burkhardt" => Ok(burkhardt()),
        "barth" => Ok(barth()),
        "branch_sextic_27" => branch_sextic_27(seed, DEFAULT_EXAMPLE_PRIME),
        "branch_sextic_24" => branch_sextic_24(seed, DEFAULT_EXAMPLE_PRIME),
        _ => {
            if let Some(n) = suffix("plane_family_") {
                plane_family(n, seed)
            } else if let Some(n) = suffix("degenerate_cone_ci_") {
                degenerate_cone_ci(n, seed)
            } else {
                Err(Error::InvalidInput(format!("unknown example {name:?}; known: {}", NAMES.join(", "))))
            }
        }
    }
}

/// Synthetic nodes in P⁵ over F_p for the constructive route.
#[derive(Debug, Clone)]
pub struct SyntheticNodes {
    pub nodes: PointSet,
    /// Projection under which the cone cluster becomes a plane conic.
    pub projection: Option<ProjectionMap>,
    /// Indices of the nodes on the quadric cone.
    pub cone_cluster: Vec<usize>,
    /// Indices of the nodes on a plane conic.
    pub conic_cluster: Vec<usize>,
}

/// `general` random points, `cone` points on the rank-3 quadric cone
/// `x₀x₂ = x₁²` (which the projection `(x₀ : x₁ : x₂)` maps onto a conic)
/// and `conic` points on a conic in a random plane.
pub fn synthetic_nodes(seed: u64, p: u64, general: usize, cone: usize, conic: usize) -> Result<SyntheticNodes> {
    let field = FieldSpec::Prime { p };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<ProjectivePoint> = Vec::new();
    let mut us: Vec<Scalar> = Vec::new();
    let push = |q: ProjectivePoint, pts: &mut Vec<ProjectivePoint>| {
        if pts.contains(&q) {
            false
        } else {
            pts.push(q);
            true
        }
    };
    let mut cone_idx = Vec::new();
    while cone_idx.len() < cone {
        let u = random_scalar(field, &mut rng);
        if us.contains(&u) {
            continue;
        }
        let mut c = vec![Scalar::one(field), u.clone(), u.mul(&u)?];
        c.extend((0..3).map(|_| random_scalar(field, &mut rng)));
        if push(ProjectivePoint::new(c)?, &mut pts) {
            us.push(u);
            cone_idx.push(pts.len() - 1);
        }
    }
    let mut conic_idx = Vec::new();
    if conic > 0 {
        let basis: Vec<Vec<Scalar>> = (0..3).map(|_| (0..6).map(|_| random_scalar(field, &mut rng)).collect()).collect();
        while conic_idx.len() < conic {
            let v = random_scalar(field, &mut rng);
            let w = [Scalar::one(field), v.clone(), v.mul(&v)?];
            let c = (0..6)
                .map(|i| {
                    let mut acc = Scalar::zero(field);
                    for (b, wk) in basis.iter().zip(&w) {
                        acc = acc.add(&b[i].mul(wk)?)?;
                    }
                    Ok(acc)
                })
                .collect::<Result<Vec<_>>>()?;
            let Ok(q) = ProjectivePoint::new(c) else { continue };
            if push(q, &mut pts) {
                conic_idx.push(pts.len() - 1);
            }
        }
    }
    let target = pts.len() + general;
    while pts.len() < target {
        let c: Vec<Scalar> = (0..6).map(|_| random_scalar(field, &mut rng)).collect();
        if let Ok(q) = ProjectivePoint::new(c) {
            push(q, &mut pts);
        }
    }
    let projection = (cone > 0).then(|| ProjectionMap::standard(5, field));
    Ok(SyntheticNodes { nodes: PointSet::new(5, field, pts)?, projection, cone_cluster: cone_idx, conic_cluster: conic_idx })
}

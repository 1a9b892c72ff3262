//! Node acquisition, node verification and smoothness checks for the
//! certifiers.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{rank, ScalarArith};
use crate::pointgeom::{enumerate::projective_size, find_nodes_enumerate, find_nodes_numeric, find_nodes_structured_plane_family, verify_node, NodeReport, PointSet};
use crate::polyform::HomogeneousForm;
use crate::scalar::{prime, sqrt_root_mod, FieldSpec, RootChoice, Scalar};

use super::{NodeBackend, RunOptions, ThreefoldSpec, VariantKind};

/// Smallest prime tried when enumerating reductions of characteristic-zero data.
pub const ENUM_PRIME_START: u64 = 31;
/// Smallest prime tried by the plane-family solver.
pub const PLANE_PRIME_START: u64 = 10_007;
/// Float tolerance used when exact data is sent to the numeric backend.
pub const NUMERIC_EPS: f64 = 1e-8;

/// Nodes ready for a rank computation: one set per field used.
#[derive(Debug, Clone)]
pub struct NodeData {
    /// Node sets with the same count, one per prime (or a single set).
    pub sets: Vec<PointSet>,
    pub primes: Vec<u64>,
    pub backend: NodeBackend,
    /// Every node passed the ordinary-double-point test.
    pub checked: bool,
    pub reports: Vec<NodeReport>,
    pub warnings: Vec<String>,
}

/// `count` primes from `start` on that admit a square root of `D` when
/// the data lives in a quadratic field.
pub fn compatible_primes(field: FieldSpec, start: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = prime::next_prime(start);
    while out.len() < count {
        let ok = match field {
            FieldSpec::Quadratic { d } => sqrt_root_mod(d, p, RootChoice::Smaller).is_ok(),
            _ => true,
        };
        if ok {
            out.push(p);
        }
        p = prime::next_prime(p + 1);
    }
    out
}

fn primes_for(spec: &ThreefoldSpec, start: u64) -> Vec<u64> {
    if spec.primes.is_empty() {
        compatible_primes(spec.field, start, 3)
    } else {
        spec.primes.clone()
    }
}

fn convert_all(forms: &[HomogeneousForm], field: FieldSpec) -> Result<Vec<HomogeneousForm>> {
    forms.iter().map(|f| if f.field() == field { Ok(f.clone()) } else { f.convert(field, RootChoice::Smaller) }).collect()
}

/// Singular points of `{F₁ = … = F_c = 0}` over a prime field.
fn enumerate_singular(equations: &[HomogeneousForm], budget: u128) -> Result<PointSet> {
    if equations.len() == 1 {
        let f = &equations[0];
        let mut forms = vec![f.clone()];
        forms.extend(f.partials());
        return find_nodes_enumerate(&forms, budget);
    }
    // zeros of all equations, then the Jacobian rank drop
    let zeros = find_nodes_enumerate(equations, budget)?;
    let mut keep = Vec::new();
    for (i, q) in zeros.points().iter().enumerate() {
        if verify_node(q, equations)?.gradient_rank_defect > 0 {
            keep.push(i);
        }
    }
    Ok(zeros.subset(&keep))
}

/// Ordinary-double-point test of every node.
pub fn check_nodes(set: &PointSet, equations: &[HomogeneousForm]) -> Result<Vec<NodeReport>> {
    let eqs = convert_all(equations, set.field())?;
    let mut out = Vec::with_capacity(set.len());
    for (i, q) in set.points().iter().enumerate() {
        let rep = verify_node(q, &eqs).map_err(|e| match e {
            Error::PointNotOnVariety(_) => Error::PointNotOnVariety(i),
            e => e,
        })?;
        if !rep.ordinary {
            return Err(Error::UnverifiedNodes(i));
        }
        out.push(rep);
    }
    Ok(out)
}

/// Finds (or reads) the nodes for `spec` and checks them unless
/// `trust_nodes` is set.
pub fn acquire_nodes(spec: &ThreefoldSpec, opts: &RunOptions, rng: &mut impl Rng) -> Result<NodeData> {
    let equations = spec.equations();
    let mut warnings = Vec::new();
    let mut primes = Vec::new();
    let mut sets = match spec.node_backend {
        NodeBackend::Given => {
            let set = spec.nodes.clone().ok_or(Error::NodesMissing)?;
            if spec.field.is_char_zero_exact() && !spec.primes.is_empty() {
                primes = spec.primes.clone();
                primes.iter().map(|&p| set.convert(FieldSpec::Prime { p }, RootChoice::Smaller)).collect::<Result<Vec<_>>>()?
            } else {
                vec![set]
            }
        }
        NodeBackend::Enumerate => {
            if spec.ambient() > 4 {
                return Err(Error::InvalidInput("enumeration covers P⁴ and below; give the nodes of a complete intersection explicitly".into()));
            }
            match spec.field {
                FieldSpec::Prime { p } => {
                    primes.push(p);
                    vec![enumerate_singular(&equations, opts.budget_enum)?]
                }
                FieldSpec::Approx { .. } => return Err(Error::InvalidInput("enumeration needs exact data".into())),
                _ => {
                    let mut out = Vec::new();
                    for p in primes_for(spec, ENUM_PRIME_START) {
                        let eqs = convert_all(&equations, FieldSpec::Prime { p })?;
                        out.push(enumerate_singular(&eqs, opts.budget_enum)?);
                        primes.push(p);
                    }
                    out
                }
            }
        }
        NodeBackend::Numeric => {
            if equations.len() != 1 {
                return Err(Error::InvalidInput("the numeric backend handles hypersurfaces and double solids".into()));
            }
            let field = match spec.field {
                FieldSpec::Approx { eps } => FieldSpec::Approx { eps },
                FieldSpec::Prime { .. } => return Err(Error::InvalidInput("the numeric backend needs real data".into())),
                _ => FieldSpec::Approx { eps: NUMERIC_EPS },
            };
            let f = equations[0].convert(field, RootChoice::Smaller)?;
            let mut nopts = spec.numeric;
            nopts.seed = opts.seed;
            if let Some(s) = opts.newton_starts {
                nopts.num_starts = s;
            }
            let found = find_nodes_numeric(&f, &nopts)?;
            warnings.push(format!("numeric node search: {} of {} starts converged", found.converged_starts, nopts.num_starts));
            vec![found.points]
        }
        NodeBackend::PlaneFamily => {
            if spec.variant != VariantKind::Hypersurface {
                return Err(Error::InvalidInput("the plane-family solver applies to hypersurfaces".into()));
            }
            let (a, b) = spec.plane_family.as_ref().expect("validated");
            let fields: Vec<FieldSpec> = match spec.field {
                FieldSpec::Prime { p } => vec![FieldSpec::Prime { p }],
                FieldSpec::Approx { .. } => return Err(Error::InvalidInput("the plane-family solver needs exact data".into())),
                _ => primes_for(spec, PLANE_PRIME_START).into_iter().map(|p| FieldSpec::Prime { p }).collect(),
            };
            let mut out = Vec::new();
            for fld in fields {
                let ab = convert_all(&[a.clone(), b.clone()], fld)?;
                match find_nodes_structured_plane_family(&ab[0], &ab[1], rng) {
                    Ok(s) => {
                        out.push(s);
                        primes.push(fld.prime().expect("prime"));
                    }
                    Err(e @ (Error::InvalidInput(_) | Error::SchemeNotReduced)) => warnings.push(format!("{}: {e}", fld.label())),
                    Err(e) => return Err(e),
                }
            }
            if out.is_empty() {
                return Err(Error::SchemeNotReduced);
            }
            out
        }
    };
    // reductions with fewer nodes point at non-split or bad primes
    if sets.len() > 1 {
        let best = sets.iter().map(|s| s.len()).max().expect("nonempty");
        let mut kept_sets = Vec::new();
        let mut kept_primes = Vec::new();
        for (s, p) in sets.into_iter().zip(primes.iter()) {
            if s.len() == best {
                kept_sets.push(s);
                kept_primes.push(*p);
            } else {
                warnings.push(format!("{} nodes mod {p}, fewer than {best}: prime dropped", s.len()));
            }
        }
        sets = kept_sets;
        primes = kept_primes;
    }
    let mut reports = Vec::new();
    if !opts.trust_nodes {
        for s in &sets {
            reports = check_nodes(s, &equations)?;
        }
    }
    Ok(NodeData { sets, primes, backend: spec.node_backend, checked: !opts.trust_nodes, reports, warnings })
}

/// Rank of the symmetric matrix of a quadratic form, scaled by 2.
pub fn quadric_rank(q: &HomogeneousForm) -> Result<usize> {
    if q.degree() != 2 {
        return Err(Error::InvalidInput("not a quadratic form".into()));
    }
    let field = q.field();
    if field.prime() == Some(2) {
        return Err(Error::InvalidInput("quadric rank in characteristic 2".into()));
    }
    let nv = q.num_vars();
    let mut m = vec![vec![Scalar::zero(field); nv]; nv];
    for (e, c) in q.terms() {
        let idx: Vec<usize> = e.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat(i).take(k as usize)).collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            m[i][i] = c.add(c)?;
        } else {
            m[i][j] = c.clone();
            m[j][i] = c.clone();
        }
    }
    Ok(rank(&ScalarArith(field), &m, nv))
}

/// Smoothness of the hypersurface `{h = 0}`: exact for quadrics, by
/// enumeration of F_p-points for small ambient spaces, otherwise only by
/// attestation. Each outcome is logged.
pub fn require_smooth(
    h: &HomogeneousForm,
    label: &str,
    spec: &ThreefoldSpec,
    opts: &RunOptions,
    log: &mut dyn FnMut(String, String, bool) -> bool,
) -> Result<()> {
    let check = format!("{label} smooth");
    let nv = h.num_vars();
    if h.degree() == 1 {
        log(check, "hyperplane".into(), true);
        return Ok(());
    }
    if h.degree() == 2 && !h.field().is_approx() && h.field().prime() != Some(2) {
        let r = quadric_rank(h)?;
        if !log(check.clone(), format!("quadric of rank {r} in {nv} variables"), r == nv) {
            return Err(Error::HypothesisViolated(format!("{label} is a singular quadric (rank {r} < {nv})")));
        }
        return Ok(());
    }
    if spec.smooth_attested {
        log(check, "attested by the caller".into(), true);
        return Ok(());
    }
    if let FieldSpec::Prime { p } = h.field() {
        if nv <= 5 && projective_size(p, nv - 1) <= opts.budget_enum {
            let sing = enumerate_singular(std::slice::from_ref(h), opts.budget_enum)?;
            let ok = sing.is_empty();
            if !log(check, format!("{} singular points over F_{p} (checked mod p)", sing.len()), ok) {
                return Err(Error::HypothesisViolated(format!("{label} has {} singular points over F_{p}", sing.len())));
            }
            return Ok(());
        }
    }
    log(check, "not checkable; set smooth_attested".into(), false);
    Err(Error::HypothesisViolated(format!("smoothness of {label} is neither checked nor attested")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadric_ranks() {
        let q = FieldSpec::Rational;
        let one = Scalar::one(q);
        // x0x1 + x2² : rank 3 in four variables
        let f = HomogeneousForm::from_terms(4, 2, q, vec![(vec![1, 1, 0, 0], one.clone()), (vec![0, 0, 2, 0], one)]).unwrap();
        assert_eq!(quadric_rank(&f).unwrap(), 3);
    }

    #[test]
    fn compatible_primes_split_the_discriminant() {
        let ps = compatible_primes(FieldSpec::Quadratic { d: 5 }, 31, 3);
        assert_eq!(ps.len(), 3);
        for p in ps {
            assert!(sqrt_root_mod(5, p, RootChoice::Smaller).is_ok());
        }
        assert_eq!(compatible_primes(FieldSpec::Rational, 31, 2), vec![31, 37]);
    }

    #[test]
    fn cayley_cubic_nodes_by_enumeration() {
        let fp = FieldSpec::Prime { p: 31 };
        let terms = (0..4).map(|skip| ((0..4).map(|i| u32::from(i != skip)).collect(), Scalar::one(fp))).collect();
        let f = HomogeneousForm::from_terms(4, 3, fp, terms).unwrap();
        let s = enumerate_singular(&[f.clone()], 1 << 20).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(check_nodes(&s, &[f]).unwrap().len(), 4);
    }
}

//! Common zeros of two plane curves by resultant elimination over F_p,
//! embedded in the plane `{x = y = 0}` of P⁴.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{rank, ModP, ScalarArith};
use crate::polyform::univariate::{self, degree};
use crate::polyform::{sylvester_resultant, HomogeneousForm};
use crate::scalar::{FieldSpec, Fp, Scalar};

use super::{random_linear_form, PointSet, ProjectivePoint};

/// Random coordinate changes tried before declaring the scheme non-reduced.
const CHART_ATTEMPTS: usize = 8;

/// Common zeros of two ternary forms over F_p, as points of P².
///
/// A random linear change of coordinates puts the curves in general
/// position; the resultant in the first variable is then a binary form of
/// degree `deg f · deg g` whose roots are the projections of the common
/// zeros. A repeated root that persists through every chart means the
/// intersection scheme is not reduced.
pub fn common_zeros_plane(f: &HomogeneousForm, g: &HomogeneousForm, rng: &mut impl Rng) -> Result<Vec<ProjectivePoint>> {
    let FieldSpec::Prime { p } = f.field() else {
        return Err(Error::InvalidInput("plane-curve solver works over a prime field".into()));
    };
    if f.num_vars() != 3 || g.num_vars() != 3 {
        return Err(Error::InvalidInput("plane-curve solver needs ternary forms".into()));
    }
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroInput);
    }
    let field = f.field();
    let ar = ModP(p);
    let total = (f.degree() * g.degree()) as usize;
    for _ in 0..CHART_ATTEMPTS {
        let change: [HomogeneousForm; 3] = [0, 1, 2].map(|_| random_linear_form(3, field, rng));
        let rows: Vec<Vec<Scalar>> = change.iter().map(|l| l.coefficient_vector()).collect();
        if rank(&ScalarArith(field), &rows, 3) < 3 {
            continue;
        }
        let fc = f.substitute(&change)?;
        let gc = g.substitute(&change)?;
        // (1:0:0) must lie on neither curve so the formal degrees are attained
        if fc.coefficient(&[fc.degree(), 0, 0]).is_zero() || gc.coefficient(&[gc.degree(), 0, 0]).is_zero() {
            continue;
        }
        let res = sylvester_resultant(&fc, &gc, 0)?;
        if res.is_zero() {
            return Err(Error::PositiveDimensionalIntersection);
        }
        // dehomogenize at the last variable; a root at infinity shows up as a degree drop
        let uni: Vec<u64> = (0..=total as u32).map(|j| residue(&res.coefficient(&[0, j, total as u32 - j]))).collect();
        if degree(&ar, &uni) != Some(total) {
            continue;
        }
        let g0 = univariate::gcd(&ar, &uni, &univariate::derivative(&ar, &uni));
        if degree(&ar, &g0) != Some(0) {
            continue;
        }
        let roots = univariate::roots_mod(p, &uni);
        if roots.len() < total {
            return Err(Error::InvalidInput(format!(
                "only {} of {total} intersection points are rational over F_{p}",
                roots.len()
            )));
        }
        let mut pts = Vec::with_capacity(total);
        for y in roots {
            let fx = coefficients_in_first(&fc, y, p);
            let gx = coefficients_in_first(&gc, y, p);
            let h = univariate::gcd(&ar, &fx, &gx);
            if degree(&ar, &h) != Some(1) {
                return Err(Error::SchemeNotReduced);
            }
            // monic linear gcd x + h₀
            let x = ar.0 - h[0] % p;
            let local = [x % p, y, 1];
            let coords = change
                .iter()
                .map(|l| l.evaluate(&local.map(|v| Scalar::Prime(Fp::new(v, p)))))
                .collect::<Result<Vec<_>>>()?;
            pts.push(ProjectivePoint::new(coords)?);
        }
        return Ok(pts);
    }
    Err(Error::SchemeNotReduced)
}

fn residue(s: &Scalar) -> u64 {
    s.as_fp().expect("prime field").residue()
}

/// Coefficients of `f(x, y, 1)` as a polynomial in `x`.
fn coefficients_in_first(f: &HomogeneousForm, y: u64, p: u64) -> Vec<u64> {
    let ar = ModP(p);
    let mut out = vec![0u64; f.degree() as usize + 1];
    for (e, c) in f.terms() {
        let t = crate::scalar::prime::mul_mod(residue(c), crate::scalar::prime::pow_mod(y, e[1] as u64, p), p);
        out[e[0] as usize] = crate::linalg::Arith::add(&ar, &out[e[0] as usize], &t);
    }
    univariate::trim(&ar, out)
}

/// Nodes of `x·g + y·f = 0` in P⁴ with coordinates `(x, y, z, t, w)`: the
/// common zeros of `f` and `g` (ternary forms in `z, t, w`) on the plane
/// `x = y = 0`.
pub fn find_nodes_structured_plane_family(f: &HomogeneousForm, g: &HomogeneousForm, rng: &mut impl Rng) -> Result<PointSet> {
    let plane = common_zeros_plane(f, g, rng)?;
    let field = f.field();
    let zero = Scalar::zero(field);
    let mut pts: Vec<ProjectivePoint> = plane
        .iter()
        .map(|q| {
            let mut c = vec![zero.clone(), zero.clone()];
            c.extend(q.coords().iter().cloned());
            ProjectivePoint::new(c)
        })
        .collect::<Result<Vec<_>>>()?;
    pts.sort_by_key(|q| q.residues());
    PointSet::new(4, field, pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointgeom::enumerate::find_nodes_enumerate;
    use crate::pointgeom::random_scalar;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn product_of_lines(lines: &[[i64; 3]], field: FieldSpec) -> HomogeneousForm {
        let mut acc = HomogeneousForm::constant(3, Scalar::one(field));
        for l in lines {
            let lf = HomogeneousForm::linear(&l.map(|c| Scalar::from_i64(field, c))).unwrap();
            acc = acc.product(&lf).unwrap();
        }
        acc
    }

    #[test]
    fn two_lines_meet_once() {
        let fp = FieldSpec::Prime { p: 101 };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = product_of_lines(&[[1, 2, 3]], fp);
        let g = product_of_lines(&[[3, -1, 4]], fp);
        let s = find_nodes_structured_plane_family(&f, &g, &mut rng).unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn split_conics_agree_with_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for p in [101u64, 103, 107] {
            let fp = FieldSpec::Prime { p };
            for _ in 0..3 {
                let line = |rng: &mut ChaCha8Rng| [0, 1, 2].map(|_| rng.gen_range(-9..=9));
                let f = product_of_lines(&[line(&mut rng), line(&mut rng)], fp);
                let g = product_of_lines(&[line(&mut rng), line(&mut rng)], fp);
                let Ok(plane) = common_zeros_plane(&f, &g, &mut rng) else { continue };
                assert_eq!(plane.len(), 4);
                let brute = find_nodes_enumerate(&[f.clone(), g.clone()], 1 << 30).unwrap();
                assert_eq!(brute.len(), 4);
                for q in &plane {
                    assert!(brute.position(q).is_some());
                }
            }
        }
    }

    #[test]
    fn random_conics_report_missing_rational_points_or_four() {
        let fp = FieldSpec::Prime { p: 101 };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let basis = crate::polyform::monomial_basis(2, 2);
        for _ in 0..10 {
            let mk = |rng: &mut ChaCha8Rng| {
                let c: Vec<Scalar> = basis.iter().map(|_| random_scalar(fp, rng)).collect();
                HomogeneousForm::from_coefficients(2, 2, fp, &c).unwrap()
            };
            let (f, g) = (mk(&mut rng), mk(&mut rng));
            let brute = find_nodes_enumerate(&[f.clone(), g.clone()], 1 << 30).unwrap().len();
            match common_zeros_plane(&f, &g, &mut rng) {
                Ok(pts) => assert_eq!((pts.len(), brute), (4, 4)),
                // tangency or non-rational intersection points
                Err(Error::InvalidInput(_) | Error::SchemeNotReduced) => assert!(brute < 4),
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn double_lines_are_not_reduced() {
        let fp = FieldSpec::Prime { p: 101 };
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = product_of_lines(&[[1, 0, 0], [1, 0, 0]], fp);
        let g = product_of_lines(&[[0, 1, 0], [0, 1, 0]], fp);
        assert!(matches!(common_zeros_plane(&f, &g, &mut rng), Err(Error::SchemeNotReduced)));
        let h = product_of_lines(&[[1, 0, 0], [0, 1, 1]], fp);
        assert!(matches!(common_zeros_plane(&f, &h, &mut rng), Err(Error::PositiveDimensionalIntersection)));
    }
}

use std::time::Instant;

use qfact::certify::{self, certify, NodeBackend, RunOptions, Verdict};
use qfact::models;
use qfact::Error;

#[test]
fn burkhardt_is_not_q_factorial() {
    let t = Instant::now();
    let ex = models::burkhardt();
    let cert = certify(&ex.spec, &RunOptions::default()).unwrap();
    assert_eq!(cert.nodes as i64, ex.expected("nodes").unwrap());
    let d = cert.defect.as_ref().unwrap();
    assert_eq!(d.rank as i64, ex.expected("rank").unwrap());
    assert_eq!(d.defect as i64, ex.expected("defect").unwrap());
    assert_eq!(cert.verdict, Verdict::NotQFactorial);
    assert!(cert.primes.len() >= 2);
    certify::reverify(&cert).unwrap();
    eprintln!("burkhardt {:?}", t.elapsed());
}

#[test]
fn plane_family_counts() {
    for n in 3..=5 {
        let ex = models::plane_family(n, 7).unwrap();
        let cert = certify(&ex.spec, &RunOptions::default()).unwrap();
        assert_eq!(cert.nodes as i64, ex.expected("nodes").unwrap(), "n = {n}");
        let d = cert.defect.as_ref().unwrap();
        assert!(d.defect >= 1);
        if let Some(e) = ex.expected("defect") {
            assert_eq!(d.defect as i64, e);
        }
        assert_eq!(cert.verdict, Verdict::NotQFactorial);
        assert_eq!(cert.primes.len(), 3);
        certify::reverify(&cert).unwrap();
    }
}

#[test]
fn branch_sextics_by_enumeration() {
    for p in [101u64, 103] {
        for seed in 0..3 {
            for ex in [models::branch_sextic_27(seed, p).unwrap(), models::branch_sextic_24(seed, p).unwrap()] {
                let t = Instant::now();
                let cert = certify(&ex.spec, &RunOptions::default()).unwrap();
                assert_eq!(cert.nodes as i64, ex.expected("nodes").unwrap(), "{} seed {seed} p {p}", ex.name);
                assert_eq!(cert.node_backend, NodeBackend::Enumerate);
                eprintln!("{} {p} {seed} [{}]: defect {:?} {:?}", ex.name, ex.summary, cert.defect.as_ref().map(|d| d.defect), t.elapsed());
            }
        }
    }
}

#[test]
fn degenerate_cone_is_refused() {
    for n in 3..=5 {
        let ex = models::degenerate_cone_ci(n, 1).unwrap();
        assert_eq!(ex.spec.nodes.as_ref().unwrap().len(), n as usize);
        match certify(&ex.spec, &RunOptions::default()) {
            Err(Error::HypothesisViolated(m)) => assert!(m.contains("G")),
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn barth_double_solid_numeric() {
    let t = Instant::now();
    let ex = models::barth();
    let cert = certify(&ex.spec, &RunOptions::default()).unwrap();
    assert_eq!(cert.nodes as i64, ex.expected("nodes").unwrap());
    let d = cert.defect.as_ref().unwrap();
    assert_eq!(d.rank as i64, ex.expected("rank").unwrap());
    assert_eq!(d.defect as i64, ex.expected("defect").unwrap());
    let sv = d.sv_profile.as_ref().unwrap();
    assert!(sv[51] / sv[52].max(f64::MIN_POSITIVE) > 1e4, "{sv:?}");
    assert_eq!(cert.verdict, Verdict::NotQFactorial);
    let doubled = RunOptions { newton_starts: Some(2 * ex.spec.numeric.num_starts), ..RunOptions::default() };
    assert_eq!(certify(&ex.spec, &doubled).unwrap().nodes, cert.nodes);
    eprintln!("barth {:?} sv51 {} sv52 {}", t.elapsed(), sv[51], sv[52]);
}

//! The symbolic calculus against sampled representations.

mod common;

use common::{describe, dv, grid_quivers, grid_vectors};
use quiver_lss::homext::GenericCalculus;
use quiver_lss::oracle::{
    oracle_ext, oracle_hom, oracle_is_schur, verify_decomposition, DecompositionKind, OracleConfig,
};

#[test]
fn generic_hom_and_ext_match_the_oracle() {
    let cfg = OracleConfig::default();
    let mut pairs = 0;
    for q in grid_quivers(false) {
        let calc = GenericCalculus::new(q.clone()).unwrap();
        let max = if q.vertex_count() == 3 { 2 } else { 3 };
        let vectors = grid_vectors(q.vertex_count(), max);
        for a in &vectors {
            for b in &vectors {
                let hom = calc.generic_hom(a, b).unwrap();
                let ext = calc.generic_ext(a, b).unwrap();
                assert_eq!(
                    hom,
                    oracle_hom(&q, a, b, &cfg).unwrap(),
                    "hom {} {a} {b}",
                    describe(&q)
                );
                assert_eq!(
                    ext,
                    oracle_ext(&q, a, b, &cfg).unwrap(),
                    "ext {} {a} {b}",
                    describe(&q)
                );
                pairs += 1;
            }
        }
    }
    assert!(pairs > 10_000);
}

#[test]
fn schur_roots_match_the_oracle() {
    let cfg = OracleConfig::default();
    for q in grid_quivers(false) {
        let calc = GenericCalculus::new(q.clone()).unwrap();
        for a in grid_vectors(q.vertex_count(), 3) {
            assert_eq!(
                calc.is_schur_root(&a).unwrap(),
                oracle_is_schur(&q, &a, &cfg).unwrap(),
                "{} {a}",
                describe(&q)
            );
        }
    }
}

#[test]
fn larger_kronecker_decompositions_verify() {
    let cfg = OracleConfig::default();
    for r in 1..=3 {
        let q = common::kronecker(r);
        let calc = GenericCalculus::new(q.clone()).unwrap();
        for a in grid_vectors(2, 6) {
            let d = calc.generic_decomposition(&a).unwrap();
            let report = verify_decomposition(&q, &d, DecompositionKind::Generic, &cfg);
            assert!(
                report.passed,
                "K{r} {a}: {:?}",
                report.failures().collect::<Vec<_>>()
            );
        }
    }
}

#[test]
fn a_wrong_decomposition_is_rejected() {
    let q = common::kronecker(2);
    let calc = GenericCalculus::new(q.clone()).unwrap();
    // (2,1) is real Schur; splitting it as (1,0) + (1,0) + (0,1) leaves ext.
    let mut d = calc.generic_decomposition(&dv(&[1, 0])).unwrap();
    d.terms[0].mult = 2;
    d.terms
        .push(calc.generic_decomposition(&dv(&[0, 1])).unwrap().terms[0].clone());
    d.total = dv(&[2, 1]);
    let report = verify_decomposition(&q, &d, DecompositionKind::Generic, &OracleConfig::default());
    assert!(!report.passed);
}

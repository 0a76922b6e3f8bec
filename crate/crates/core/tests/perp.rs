mod common;

use common::{a3, describe, dv, grid_quivers, grid_vectors, kronecker, sorted};
use quiver_lss::homext::GenericCalculus;
use quiver_lss::perp::{
    is_quiver_schur_sequence, left_perp_schur, left_perp_sequence, local_quiver, right_perp_schur,
    right_perp_sequence, RootSequence,
};
use quiver_lss::{Error, RootClass};

#[test]
fn perp_of_single_roots() {
    for q in grid_quivers(false) {
        let calc = GenericCalculus::new(q.clone()).unwrap();
        let n = q.vertex_count();
        for g in grid_vectors(n, 3) {
            if q.root_class(g.as_slice()).unwrap() != RootClass::Real
                || !calc.is_schur_root(&g).unwrap()
            {
                continue;
            }
            let right = right_perp_schur(&calc, &g).unwrap();
            let left = left_perp_schur(&calc, &g).unwrap();
            assert_eq!(right.len(), n - 1, "{} {g}", describe(&q));
            assert_eq!(left.len(), n - 1, "{} {g}", describe(&q));
            for r in &right {
                assert_eq!(q.euler(g.as_slice(), r.as_slice()).unwrap(), 0);
            }
            for r in &left {
                assert_eq!(q.euler(r.as_slice(), g.as_slice()).unwrap(), 0);
            }
            assert_eq!(
                sorted(right_perp_sequence(&calc, std::slice::from_ref(&g)).unwrap()),
                sorted(right.clone()),
                "{} {g}",
                describe(&q)
            );
            let local = local_quiver(&calc, &RootSequence::new(right.clone())).unwrap();
            for (i, r) in right.iter().enumerate() {
                let (tits, _) = q.tits(r.as_slice()).unwrap();
                assert_eq!(local.quiver.arrow_count(i, i), 1 - tits);
            }
            assert!(local.quiver.without_loops().is_acyclic());
        }
    }
}

#[test]
fn perp_goldens() {
    let calc = GenericCalculus::new(a3()).unwrap();
    assert_eq!(
        sorted(right_perp_schur(&calc, &dv(&[1, 1, 0])).unwrap()),
        vec![dv(&[0, 1, 0]), dv(&[1, 1, 1])]
    );
    let calc = GenericCalculus::new(kronecker(2)).unwrap();
    assert_eq!(
        right_perp_schur(&calc, &dv(&[2, 1])).unwrap(),
        vec![dv(&[3, 2])]
    );
    assert_eq!(
        left_perp_schur(&calc, &dv(&[3, 2])).unwrap(),
        vec![dv(&[2, 1])]
    );
}

#[test]
fn perp_sequence_of_two_roots() {
    let calc = GenericCalculus::new(a3()).unwrap();
    let g = dv(&[1, 1, 0]);
    let seq = right_perp_schur(&calc, &g).unwrap();
    let report = is_quiver_schur_sequence(&calc, &seq).unwrap();
    assert!(report.is_quiver_schur(), "{report:?}");
    assert_eq!(left_perp_sequence(&calc, &seq).unwrap(), vec![g.clone()]);
    assert_eq!(
        sorted(right_perp_sequence(&calc, &[g]).unwrap()),
        sorted(seq)
    );
}

#[test]
fn rejects_non_schur_input() {
    let calc = GenericCalculus::new(kronecker(2)).unwrap();
    assert!(matches!(
        right_perp_schur(&calc, &dv(&[1, 1])),
        Err(Error::NotRealSchurRoot(_))
    ));
    assert!(matches!(
        right_perp_schur(&calc, &dv(&[2, 2])),
        Err(Error::NotRealSchurRoot(_))
    ));
}

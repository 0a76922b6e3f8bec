mod common;

use common::{dv, grid_quivers};
use proptest::prelude::*;
use quiver_lss::homext::{GenericCalculus, SearchOrder};
use quiver_lss::lss::{push_left, push_right};
use quiver_lss::{DimVector, Quiver};

fn quiver_and_vectors(count: usize, max: i64) -> impl Strategy<Value = (Quiver, Vec<DimVector>)> {
    let quivers = grid_quivers(true);
    (0..quivers.len()).prop_flat_map(move |i| {
        let q = quivers[i].clone();
        let n = q.vertex_count();
        proptest::collection::vec(proptest::collection::vec(0..=max, n), count).prop_map(
            move |vs| {
                (
                    q.clone(),
                    vs.into_iter().map(|v| DimVector::new(v).unwrap()).collect(),
                )
            },
        )
    })
}

fn nonzero(v: &DimVector) -> bool {
    !v.is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn euler_is_bilinear((q, vs) in quiver_and_vectors(3, 6)) {
        let (a, b, c) = (vs[0].as_slice(), vs[1].as_slice(), vs[2].as_slice());
        let ab = vs[0].checked_add(&vs[1]).unwrap();
        let bc = vs[1].checked_add(&vs[2]).unwrap();
        prop_assert_eq!(
            q.euler(ab.as_slice(), c).unwrap(),
            q.euler(a, c).unwrap() + q.euler(b, c).unwrap()
        );
        prop_assert_eq!(
            q.euler(a, bc.as_slice()).unwrap(),
            q.euler(a, b).unwrap() + q.euler(a, c).unwrap()
        );
    }

    #[test]
    fn tits_is_the_diagonal((q, vs) in quiver_and_vectors(1, 8)) {
        let a = vs[0].as_slice();
        let (value, class) = q.tits(a).unwrap();
        prop_assert_eq!(value, q.euler(a, a).unwrap());
        prop_assert_eq!(class, q.root_class(a).unwrap());
    }

    #[test]
    fn ringel_identity_and_signs((q, vs) in quiver_and_vectors(2, 3)) {
        prop_assume!(nonzero(&vs[0]) && nonzero(&vs[1]));
        let calc = GenericCalculus::new(q.clone()).unwrap();
        let hom = calc.generic_hom(&vs[0], &vs[1]).unwrap();
        let ext = calc.generic_ext(&vs[0], &vs[1]).unwrap();
        prop_assert!(hom >= 0 && ext >= 0);
        prop_assert_eq!(hom - ext, calc.euler(&vs[0], &vs[1]).unwrap());
    }

    #[test]
    fn decomposition_sums_to_input((q, vs) in quiver_and_vectors(1, 4)) {
        prop_assume!(nonzero(&vs[0]));
        let calc = GenericCalculus::new(q).unwrap();
        let d = calc.generic_decomposition(&vs[0]).unwrap();
        prop_assert_eq!(d.sum().unwrap(), vs[0].clone());
        for t in &d.terms {
            prop_assert!(calc.is_schur_root(&t.root).unwrap());
        }
    }

    #[test]
    fn search_order_and_reflections_do_not_matter((q, vs) in quiver_and_vectors(1, 3)) {
        prop_assume!(nonzero(&vs[0]));
        let forward = GenericCalculus::with_order(q.clone(), SearchOrder::Forward).unwrap();
        let backward = GenericCalculus::with_order(q.clone(), SearchOrder::Backward)
            .unwrap()
            .without_reflections();
        let plain = GenericCalculus::new(q).unwrap().without_reflections();
        let d = forward.generic_decomposition(&vs[0]).unwrap();
        prop_assert_eq!(&d, &backward.generic_decomposition(&vs[0]).unwrap());
        prop_assert_eq!(&d, &plain.generic_decomposition(&vs[0]).unwrap());
    }

    #[test]
    fn pushing_preserves_the_total(
        (q, vs) in quiver_and_vectors(2, 4),
        ma in 1u64..4,
        mb in 1u64..4,
    ) {
        let total = |members: &[(DimVector, u64)]| {
            members.iter().fold(DimVector::zero(q.vertex_count()), |acc, (r, m)| {
                acc.checked_add(&r.checked_scale(*m as i64).unwrap()).unwrap()
            })
        };
        let input = [(vs[0].clone(), ma), (vs[1].clone(), mb)];
        for out in [push_right(&q, &input[0], &input[1]), push_left(&q, &input[0], &input[1])].into_iter().flatten() {
            prop_assert_eq!(total(&out), total(&input));
        }
    }
}

#[test]
fn euler_on_unit_vectors_counts_arrows() {
    for q in grid_quivers(true) {
        let n = q.vertex_count();
        for i in 0..n {
            for j in 0..n {
                let expected = i64::from(i == j) - q.arrow_count(i, j);
                let value = q
                    .euler(
                        DimVector::unit(n, i).as_slice(),
                        DimVector::unit(n, j).as_slice(),
                    )
                    .unwrap();
                assert_eq!(
                    value,
                    expected,
                    "{} e{} e{}",
                    common::describe(&q),
                    i + 1,
                    j + 1
                );
            }
        }
    }
}

#[test]
fn known_multiples() {
    // Kronecker: (k, k) is k copies of the isotropic root, (2, 4) is real.
    let calc = GenericCalculus::new(common::kronecker(2)).unwrap();
    let d = calc.generic_decomposition(&dv(&[3, 3])).unwrap();
    assert_eq!(d.multiset(), vec![(dv(&[1, 1]), 3)]);
    let d = calc.generic_decomposition(&dv(&[2, 4])).unwrap();
    assert_eq!(d.multiset(), vec![(dv(&[1, 2]), 2)]);
    // Three arrows: (2, 2) is Schur.
    let calc = GenericCalculus::new(common::kronecker(3)).unwrap();
    let d = calc.generic_decomposition(&dv(&[2, 2])).unwrap();
    assert_eq!(d.multiset(), vec![(dv(&[2, 2]), 1)]);
}

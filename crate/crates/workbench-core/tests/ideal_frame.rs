use workbench_core::algebra::{way_below, RegionAlgebra};
use workbench_core::axioms::{check_axioms, QuantifierStrategy, Suite};
use workbench_core::bits::Bits;
use workbench_core::duality::dualize;
use workbench_core::finite::{Element, FiniteLca};
use workbench_core::ideals::{
    all_delta_ideals, frame_ops, iota, iota_inverse, is_delta_ideal, is_filter_in_ib, is_prime_element,
    prime_cluster_bijection, v_set, verify_frame,
};

fn lca_structures(max_atoms: usize) -> Vec<FiniteLca> {
    (0..=max_atoms)
        .flat_map(FiniteLca::sweep)
        .filter(|s| check_axioms(s, Suite::Lca, &QuantifierStrategy::exhaustive()).unwrap().all_hold())
        .collect()
}

/// Straight from the definition: nonempty, downward closed, closed under
/// joins, inside IB, and every member is way below another member.
fn brute_delta(s: &FiniteLca, ideal: Bits) -> bool {
    let members: Vec<Element> = ideal.iter().map(|a| a as Element).collect();
    !members.is_empty()
        && members.iter().all(|&a| (0..s.element_count() as Element).all(|b| b & !a != 0 || ideal.contains(b as usize)))
        && members.iter().all(|&a| members.iter().all(|&b| ideal.contains((a | b) as usize)))
        && members.iter().all(|a| s.bounded(a))
        && members.iter().all(|a| members.iter().any(|c| way_below(s, a, c)))
}

#[test]
fn delta_ideals_match_a_subset_search() {
    for n in 0..=3 {
        for s in FiniteLca::sweep(n) {
            let m = s.element_count();
            let brute: Vec<Bits> = (1u64..1 << m).map(Bits).filter(|&i| brute_delta(&s, i)).collect();
            let mut listed = all_delta_ideals(&s);
            listed.sort_by_key(|b| b.0);
            assert_eq!(listed, brute, "{:?} bound {:#b}", s.adjacency(), s.bound_atoms());
            for &i in &brute {
                assert!(is_delta_ideal(&s, i));
            }
        }
    }
}

#[test]
fn the_frame_is_distributive() {
    for s in lca_structures(3) {
        let ideals = all_delta_ideals(&s);
        for &a in &ideals {
            for &b in &ideals {
                for &c in &ideals {
                    let bc = frame_ops(&s, b, c).unwrap().join;
                    let left = frame_ops(&s, a, bc).unwrap().meet;
                    let ab = frame_ops(&s, a, b).unwrap().meet;
                    let ac = frame_ops(&s, a, c).unwrap().meet;
                    assert_eq!(left, frame_ops(&s, ab, ac).unwrap().join);
                }
            }
        }
    }
}

#[test]
fn iota_is_an_order_isomorphism_onto_the_opens() {
    for s in lca_structures(4) {
        let d = dualize(&s).unwrap();
        let report = verify_frame(&s, &d).unwrap();
        assert!(report.verified(), "{:?}", report.failures);
        for &u in d.space.opens() {
            assert_eq!(iota(&s, &d, iota_inverse(&s, &d, u).unwrap()).unwrap(), u);
        }
    }
}

#[test]
fn primes_match_bounded_clusters_and_give_filters() {
    for s in lca_structures(3) {
        let d = dualize(&s).unwrap();
        let b = prime_cluster_bijection(&s, &d).unwrap();
        assert!(b.verified(), "{:?}", b.failures);
        assert_eq!(b.pairs.len(), d.len());
        for i in all_delta_ideals(&s) {
            if is_prime_element(&s, i).unwrap() {
                assert!(is_filter_in_ib(&s, v_set(&s, i)));
            }
        }
    }
}

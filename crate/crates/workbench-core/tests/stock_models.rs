use proptest::prelude::*;

use workbench_core::algebra::{way_below, Alexandroff, RegionAlgebra};
use workbench_core::axioms::{check_axioms, Axiom, QuantifierStrategy, Suite, Verdict};
use workbench_core::morphism::{Family, MapMorphism, Morphism};
use workbench_core::regions::{
    q, q_frac, Bound, IntervalModel, IntervalRegion, NatMap, NatModel, NatRegion, PlMap, StockMap, StockModel,
    SymbolicCluster, Tail,
};

fn r(s: &str) -> IntervalRegion {
    s.parse().unwrap()
}

fn grid() -> impl Iterator<Item = workbench_core::regions::Q> {
    (-48i64..=48).map(|k| q_frac(k, 4))
}

fn region() -> impl Strategy<Value = IntervalRegion> {
    (prop::collection::vec((-12i64..=12, 1i64..=6), 0..=3), any::<bool>(), any::<bool>()).prop_map(
        |(raw, left, right)| {
            let mut pieces: Vec<(Bound, Bound)> = raw
                .into_iter()
                .map(|(lo, len)| (Bound::Finite(q_frac(lo, 2)), Bound::Finite(q_frac(lo + len, 2))))
                .collect();
            if let Some(first) = pieces.first_mut() {
                if left {
                    first.0 = Bound::NegInf;
                }
            }
            if let Some(last) = pieces.last_mut() {
                if right {
                    last.1 = Bound::PosInf;
                }
            }
            IntervalRegion::normalize(pieces).unwrap()
        },
    )
}

proptest! {
    /// Endpoints are halves inside [-6, 9], so a quarter grid on [-12, 12]
    /// sees every point where inclusion in the interior can fail.
    #[test]
    fn way_below_is_inclusion_in_the_interior(a in region(), b in region()) {
        let oracle = grid().all(|x| !a.contains(&x) || b.interior_contains(&x));
        prop_assert_eq!(way_below(&IntervalModel, &a, &b), oracle);
        let meets = grid().any(|x| a.contains(&x) && b.contains(&x));
        prop_assert_eq!(IntervalModel.contact(&a, &b), meets);
    }

    #[test]
    fn identity_map_fixes_regions(a in region()) {
        prop_assert_eq!(PlMap::identity().phi(&a), a);
    }

    #[test]
    fn regions_are_regular_closed(a in region()) {
        let m = IntervalModel;
        prop_assert_eq!(m.complement(&m.complement(&a)), a.clone());
        prop_assert_eq!(m.join(&a, &m.complement(&a)), IntervalRegion::full());
    }
}

#[test]
fn both_models_pass_the_sampled_lca_suite() {
    let s = QuantifierStrategy::sampled(1000, 2024);
    let ir = check_axioms(&IntervalModel, Suite::Lca, &s).unwrap();
    assert!(ir.all_hold(), "{:?}", ir.verdicts);
    let nr = check_axioms(&NatModel, Suite::Lca, &s).unwrap();
    assert!(nr.all_hold(), "{:?}", nr.verdicts);
}

#[test]
fn connectedness_separates_the_models() {
    let s = QuantifierStrategy::sampled(1000, 2024);
    assert!(check_axioms(&IntervalModel, Suite::Con, &s).unwrap().all_hold());
    let nr = check_axioms(&NatModel, Suite::Con, &s).unwrap();
    assert_eq!(nr.verdict(Axiom::Con), Some(&Verdict::Fails(vec![NatRegion::finite([0])])));
}

#[test]
fn alexandroff_extension_of_the_interval_model_is_normal() {
    let ext = Alexandroff { inner: &IntervalModel };
    let report = check_axioms(&ext, Suite::Nca, &QuantifierStrategy::sampled(200, 9)).unwrap();
    assert!(report.all_hold(), "{:?}", report.verdicts);
}

fn dlc_families() -> Vec<Family> {
    vec![Family::Dlc1, Family::Dlc2, Family::Dlc3S, Family::Lc3S, Family::Dlc4]
}

#[test]
fn every_stock_map_induces_a_dlc_morphism() {
    let s = QuantifierStrategy::sampled(200, 31);
    let interval = [
        PlMap::identity(),
        PlMap::linear(q(2)),
        PlMap::abs(),
        PlMap::hat(),
        PlMap::constant(q(0)),
        PlMap::new(vec![(q(0), q(0)), (q(1), q(3))], q(1), q_frac(1, 2)).unwrap(),
    ];
    for f in interval {
        let report = Morphism::Interval(MapMorphism::new(f.clone())).check(&dlc_families(), &s).unwrap();
        assert!(report.all_hold(), "{}: {:?}", f.describe(), report.verdicts);
    }
    let nat = [NatMap::shift(0), NatMap::shift(3), NatMap::constant(2), NatMap::new(vec![4, 0, 4], Tail::Shift(1))];
    for f in nat {
        let report = Morphism::Nat(MapMorphism::new(f.clone())).check(&dlc_families(), &s).unwrap();
        assert!(report.all_hold(), "{}: {:?}", f.describe(), report.verdicts);
    }
}

#[test]
fn trace_at_one_is_not_a_filter() {
    let m = IntervalModel;
    let at_one = SymbolicCluster::Point(q(1));
    let (left, right) = (r("[0,1]"), r("[1,2]"));
    assert!(m.cluster_membership(&at_one, &left));
    assert!(m.cluster_membership(&at_one, &right));
    assert!(m.bounded(&left) && m.bounded(&right));
    assert_eq!(m.meet(&left, &right), m.zero());
    assert!(!m.cluster_membership(&at_one, &m.zero()));
}

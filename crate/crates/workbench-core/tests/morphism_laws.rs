use std::sync::Arc;

use rand::Rng;

use workbench_core::algebra::{rng_from_seed, RegionAlgebra};
use workbench_core::duality::dualize;
use workbench_core::finite::{Element, FiniteLca};
use workbench_core::ideals::{is_delta_ideal, is_filter_in_ib, is_prime_element};
use workbench_core::morphism::{d_phi, dual_map, s_set, s_set_conjugate, Family, TableMorphism};

fn alg(n: usize) -> Arc<FiniteLca> {
    Arc::new(FiniteLca::discrete(n))
}

fn every_table(s: &Arc<FiniteLca>, t: &Arc<FiniteLca>) -> Vec<TableMorphism> {
    let (ns, nt) = (s.element_count(), t.element_count());
    let total = nt.pow(ns as u32);
    (0..total)
        .map(|mut code| {
            let table = (0..ns)
                .map(|_| {
                    let v = code % nt;
                    code /= nt;
                    v as Element
                })
                .collect();
            TableMorphism::new(s.clone(), t.clone(), table).unwrap()
        })
        .collect()
}

/// `a ↦ {j : R(j) ⊆ a}` or, with `any`, `a ↦ {j : R(j) ∩ a ≠ 0}`; atoms with
/// no `R(j)` never appear.
fn relational(s: &Arc<FiniteLca>, t: &Arc<FiniteLca>, rel: &[Option<Element>], any: bool) -> TableMorphism {
    let table = (0..s.element_count() as Element)
        .map(|a| {
            rel.iter().enumerate().fold(0, |acc, (j, r)| match r {
                Some(r) if (any && r & a != 0) || (!any && r & !a == 0) => acc | 1 << j,
                _ => acc,
            })
        })
        .collect();
    TableMorphism::new(s.clone(), t.clone(), table).unwrap()
}

fn random_tables(s: &Arc<FiniteLca>, t: &Arc<FiniteLca>, seed: u64, count: usize) -> Vec<TableMorphism> {
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::new();
    for k in 0..count {
        let m = match k % 4 {
            0 => TableMorphism::random(s.clone(), t.clone(), &mut rng),
            1 | 2 => {
                let rel: Vec<Option<Element>> = (0..t.atom_count())
                    .map(|_| rng.gen_bool(0.85).then(|| rng.gen_range(0..s.element_count() as Element)))
                    .collect();
                relational(s, t, &rel, k % 4 == 2)
            }
            _ if s.atom_count() > 0 => {
                let g: Vec<usize> = (0..t.atom_count()).map(|_| rng.gen_range(0..s.atom_count())).collect();
                TableMorphism::from_atom_map(s.clone(), t.clone(), &g).unwrap()
            }
            _ => TableMorphism::random(s.clone(), t.clone(), &mut rng),
        };
        out.push(m);
    }
    out
}

/// Every table between algebras on at most two atoms, then seeded samples
/// whenever a side has three atoms.
fn corpus() -> Vec<TableMorphism> {
    let mut out = Vec::new();
    for n in 0..=3 {
        for m in 0..=3 {
            let (s, t) = (alg(n), alg(m));
            if n <= 2 && m <= 2 {
                out.extend(every_table(&s, &t));
            } else {
                out.extend(random_tables(&s, &t, (n * 4 + m) as u64, 400));
            }
        }
    }
    out
}

fn holds(m: &TableMorphism, families: &[Family]) -> bool {
    m.holds_all(families)
}

fn leq(a: Element, b: Element) -> bool {
    a & !b == 0
}

fn elements(s: &FiniteLca) -> impl Iterator<Item = Element> {
    0..s.element_count() as Element
}

#[test]
fn basic_consequences_of_the_axioms() {
    let mut meet_preserving = 0;
    for m in corpus() {
        let (s, t) = (m.source().clone(), m.target().clone());
        let monotone = m.is_monotone();
        let check = m.check_op();
        if holds(&m, &[Family::Dlc2]) {
            meet_preserving += 1;
            assert!(monotone, "{:?}", m.table());
            assert!(holds(&check, &[Family::Dlc2, Family::Dlc5]), "{:?}", m.table());
            assert_eq!(check.check_op(), check);
            if holds(&m, &[Family::Dlc1]) {
                for a in elements(&s) {
                    assert!(leq(m.apply(s.complement(&a)), t.complement(&m.apply(a))));
                }
            }
            if holds(&m, &[Family::Dlc4]) {
                assert_eq!(m.apply(s.top()), t.top());
            }
        }
        if holds(&m, &[Family::Dlc1, Family::Dlc3]) {
            assert_eq!(m.apply(s.top()), t.top());
        }
        if holds(&m, &[Family::Dlc5]) {
            assert_eq!(check, m);
        }
        if monotone {
            for a in elements(&s) {
                assert!(leq(check.apply(a), m.apply(a)));
            }
        }
    }
    assert!(meet_preserving > 100);
}

#[test]
fn dlc1_to_dlc3_imply_lc3() {
    for m in corpus().into_iter().filter(|m| holds(m, &[Family::Dlc1, Family::Dlc2, Family::Dlc3])) {
        assert!(m.verdict(Family::Lc3).holds(), "{:?}", m.table());
    }
}

#[test]
fn third_axiom_variants_coincide_on_lower_continuous_maps() {
    let mut seen = [0usize; 2];
    for m in corpus().into_iter().filter(|m| holds(m, &[Family::Dlc1, Family::Dlc2, Family::Dlc4, Family::Dlc5])) {
        let v: Vec<bool> =
            [Family::Dlc3, Family::Dlc3S, Family::Lc3, Family::Lc3S].iter().map(|&f| m.verdict(f).holds()).collect();
        assert!(v.iter().all(|&x| x == v[0]), "{:?}: {v:?}", m.table());
        seen[v[0] as usize] += 1;
    }
    assert!(seen[1] > 0);
}

#[test]
fn traces_give_delta_ideals_primes_and_filters() {
    let mut checked = 0;
    for m in corpus() {
        let dlc3 = holds(&m, &[Family::Dlc1, Family::Dlc2, Family::Dlc3]);
        let lc3 = holds(&m, &[Family::Dlc1, Family::Dlc2, Family::Lc3]);
        if !dlc3 && !lc3 {
            continue;
        }
        let dlc4 = holds(&m, &[Family::Dlc4]);
        let s = m.source();
        let ib = s.bounded_set();
        let td = dualize(m.target()).unwrap();
        for p in 0..td.len() {
            let sigma = td.cluster(p);
            let trace = s_set(&m, sigma);
            if dlc3 {
                assert_eq!(trace, s_set_conjugate(&m, sigma), "{:?}", m.table());
            }
            let j = ib.difference(trace);
            assert!(is_delta_ideal(s, j), "{:?} at {}", m.table(), td.point_name(p));
            if dlc4 {
                assert!(is_prime_element(s, j).unwrap(), "{:?}", m.table());
                let v = elements(s)
                    .filter(|a| s.bounded(a) && trace.iter().any(|b| leq(b as Element, *a)))
                    .map(|a| a as usize)
                    .collect();
                assert!(is_filter_in_ib(s, v), "{:?}", m.table());
            }
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn d_phi_is_a_delta_ideal_and_dual_maps_are_continuous() {
    for m in corpus() {
        if m.is_monotone() {
            for a in elements(m.source()) {
                assert!(is_delta_ideal(m.target(), d_phi(&m, a)), "{:?} at {a}", m.table());
            }
        }
        if holds(&m, &[Family::Dlc1, Family::Dlc2, Family::Dlc3, Family::Dlc4]) {
            let (sd, td) = (dualize(m.source()).unwrap(), dualize(m.target()).unwrap());
            let f = dual_map(&m, &sd, &td).unwrap();
            assert!(f.verified(), "{:?}: {:?}", m.table(), f.confun_failures);
            let fc = dual_map(&m.check_op(), &sd, &td).unwrap();
            assert_eq!(f.table, fc.table, "{:?}", m.table());
        }
    }
}

#[test]
fn check_and_tilde_agree_under_dlc2_and_dlc4() {
    for m in corpus().into_iter().filter(|m| holds(m, &[Family::Dlc2, Family::Dlc4])) {
        assert_eq!(m.check_op(), m.tilde_op(), "{:?}", m.table());
    }
}

fn composable_pairs() -> Vec<(TableMorphism, TableMorphism)> {
    let mut rng = rng_from_seed(77);
    let mut out = Vec::new();
    for _ in 0..2000 {
        let sizes: Vec<usize> = (0..3).map(|_| rng.gen_range(0..=3)).collect();
        let (a, b, c) = (alg(sizes[0]), alg(sizes[1]), alg(sizes[2]));
        let seed = rng.gen();
        let first = random_tables(&a, &b, seed, 4).swap_remove(rng.gen_range(0..4));
        let second = random_tables(&b, &c, seed ^ 1, 4).swap_remove(rng.gen_range(0..4));
        out.push((first, second));
    }
    out
}

#[test]
fn check_absorbs_inner_and_outer_operations() {
    for (p1, p2) in composable_pairs() {
        let direct = p1.then(&p2).unwrap().check_op();
        if p2.is_monotone() {
            assert_eq!(p1.then(&p2.check_op()).unwrap().check_op(), direct);
        }
        if p1.is_monotone() && p2.is_monotone() {
            assert_eq!(p1.check_op().then(&p2).unwrap().check_op(), direct);
        }
    }
}

/// Without monotonicity of the outer map the first identity can fail:
/// `φ₁` constant at the top and `φ₂` nonzero only below the top.
#[test]
fn outer_check_needs_a_monotone_map() {
    let (a, b) = (alg(1), alg(1));
    let p1 = TableMorphism::new(a.clone(), b.clone(), vec![1, 1]).unwrap();
    let p2 = TableMorphism::new(b.clone(), a.clone(), vec![1, 0]).unwrap();
    assert!(!p2.is_monotone());
    let left = p1.then(&p2.check_op()).unwrap().check_op();
    let right = p1.then(&p2).unwrap().check_op();
    assert_eq!(left.table(), &[1, 1]);
    assert_eq!(right.table(), &[0, 0]);
}

fn dlc_morphisms(s: &Arc<FiniteLca>, t: &Arc<FiniteLca>, rng: &mut impl Rng) -> TableMorphism {
    let g: Vec<usize> = (0..t.atom_count()).map(|_| rng.gen_range(0..s.atom_count())).collect();
    TableMorphism::from_atom_map(s.clone(), t.clone(), &g).unwrap()
}

#[test]
fn dlc_morphisms_form_a_category() {
    let mut rng = rng_from_seed(2025);
    for _ in 0..200 {
        let sizes: Vec<usize> = (0..4).map(|_| rng.gen_range(1..=3)).collect();
        let algs: Vec<_> = sizes.iter().map(|&n| alg(n)).collect();
        let p1 = dlc_morphisms(&algs[0], &algs[1], &mut rng);
        let p2 = dlc_morphisms(&algs[1], &algs[2], &mut rng);
        let p3 = dlc_morphisms(&algs[2], &algs[3], &mut rng);
        for p in [&p1, &p2, &p3] {
            assert!(p.holds_all(&Family::DLC));
        }
        let left = p3.diamond(&p2).unwrap().diamond(&p1).unwrap();
        let right = p3.diamond(&p2.diamond(&p1).unwrap()).unwrap();
        assert_eq!(left, right);
        assert_eq!(p1.diamond(&TableMorphism::identity(algs[0].clone())).unwrap(), p1);
        assert_eq!(TableMorphism::identity(algs[1].clone()).diamond(&p1).unwrap(), p1);
        let c = p2.diamond(&p1).unwrap();
        assert!(c.holds_all(&Family::DLC), "{:?}", c.table());
        assert!(c.verdict(Family::Dlc3S).holds());
    }
}

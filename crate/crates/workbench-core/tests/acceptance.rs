//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;

use workbench_core::algebra::{rng_from_seed, RegionAlgebra};
use workbench_core::axioms::{check_axioms, Axiom, QuantifierStrategy, Suite, Verdict};
use workbench_core::bits::Bits;
use workbench_core::duality::{dualize, roundtrip_algebra, t_map};
use workbench_core::finite::{ClusterMode, ContactChoice, FiniteLca};
use workbench_core::ideals::{prime_cluster_bijection, verify_frame};
use workbench_core::morphism::{
    algebra_square, dual_map, sample_points, space_square, stock_functor_law, stock_square, Family, MapMorphism,
    Morphism, TableMorphism,
};
use workbench_core::regions::{
    q, IntervalModel, NatMap, NatModel, NatRegion, PlMap, StockMap, StockModel, SymbolicCluster,
};
use workbench_core::spaces::{rc_algebra, FiniteSpace, SpaceMap};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn passes(s: &FiniteLca, suite: Suite) -> bool {
    check_axioms(s, suite, &QuantifierStrategy::exhaustive()).unwrap().all_hold()
}

fn lca_structures(max_atoms: usize) -> Vec<FiniteLca> {
    (0..=max_atoms).flat_map(FiniteLca::sweep).filter(|s| passes(s, Suite::Lca)).collect()
}

fn rigidity() -> Outcome {
    let mut total = 0;
    for n in 0..=3 {
        for s in FiniteLca::sweep(n) {
            total += 1;
            let lca = passes(&s, Suite::Lca);
            ensure(!lca || s.is_full_bound(), || format!("proper bound {:#b} passes LCA", s.bound_atoms()))?;
            let diagonal = s.adjacency().unwrap().iter().enumerate().all(|(i, row)| *row == Bits::singleton(i));
            if !s.is_full_bound() {
                continue;
            }
            let nca = passes(&s, Suite::Nca);
            ensure(nca == diagonal, || format!("NCA verdict off at {:?}", s.adjacency()))?;
        }
    }
    Ok(format!("{total} structures"))
}

fn roundtrip() -> Outcome {
    let structures = lca_structures(4);
    for s in &structures {
        let rt = roundtrip_algebra(s).map_err(|e| e.to_string())?;
        ensure(rt.report.verified(), || format!("{:?}", rt.report.failures))?;
    }
    for n in 0..=4 {
        let t = t_map(&FiniteSpace::discrete_n(n)).map_err(|e| e.to_string())?;
        ensure(t.homeomorphism, || format!("t_X is not a homeomorphism on {n} points"))?;
    }
    Ok(format!("{} algebras, 5 spaces", structures.len()))
}

fn clusters() -> Outcome {
    let mut count = 0;
    for s in (0..=3).flat_map(FiniteLca::sweep).filter(|s| passes(s, Suite::Nca)) {
        let brute = s.enumerate_clusters(ClusterMode::Brute, ContactChoice::Rho).map_err(|e| e.to_string())?;
        let uf = s.enumerate_clusters(ClusterMode::Ultrafilter, ContactChoice::Rho).map_err(|e| e.to_string())?;
        ensure(brute.clusters == uf.clusters, || format!("enumerations differ on {} atoms", s.atom_count()))?;
        count += 1;
    }
    Ok(format!("{count} algebras"))
}

fn frame() -> Outcome {
    let structures = lca_structures(3);
    for s in &structures {
        let d = dualize(s).map_err(|e| e.to_string())?;
        let f = verify_frame(s, &d).map_err(|e| e.to_string())?;
        ensure(f.verified(), || format!("{:?}", f.failures))?;
        let b = prime_cluster_bijection(s, &d).map_err(|e| e.to_string())?;
        ensure(b.verified(), || format!("{:?}", b.failures))?;
    }
    Ok(format!("{} algebras", structures.len()))
}

fn infinite_suites() -> Outcome {
    let s = QuantifierStrategy::sampled(1000, 2024);
    let axioms = [Axiom::C1, Axiom::C2, Axiom::C3, Axiom::C4, Axiom::BC1, Axiom::BC2, Axiom::BC3];
    let ir = check_axioms(&IntervalModel, Suite::Lca, &s).map_err(|e| e.to_string())?;
    let nr = check_axioms(&NatModel, Suite::Lca, &s).map_err(|e| e.to_string())?;
    for a in axioms {
        ensure(ir.verdict(a).is_some_and(Verdict::holds), || format!("interval {a}: {:?}", ir.verdict(a)))?;
        ensure(nr.verdict(a).is_some_and(Verdict::holds), || format!("cofinite {a}: {:?}", nr.verdict(a)))?;
    }
    let ic = check_axioms(&IntervalModel, Suite::Con, &s).map_err(|e| e.to_string())?;
    ensure(ic.all_hold(), || "interval model fails CON".into())?;
    let nc = check_axioms(&NatModel, Suite::Con, &s).map_err(|e| e.to_string())?;
    let expected = Verdict::Fails(vec![NatRegion::finite([0])]);
    ensure(nc.verdict(Axiom::Con) == Some(&expected), || format!("cofinite CON: {:?}", nc.verdict(Axiom::Con)))?;
    Ok("cofinite CON witness {0}".into())
}

fn morphism_suite() -> Outcome {
    let families = [
        Family::Dlc1,
        Family::Dlc2,
        Family::Dlc3,
        Family::Dlc4,
        Family::Dlc5,
        Family::Dlc3S,
        Family::Lc3S,
        Family::Pal5,
    ];
    let maps = [PlMap::identity(), PlMap::linear(q(2)), PlMap::abs(), PlMap::hat(), PlMap::constant(q(0))];
    let strategy = QuantifierStrategy::sampled(500, 11);
    let mut constant_witness = String::new();
    for f in maps {
        let mm = MapMorphism::new(f.clone());
        let proper = mm.is_proper();
        let report = Morphism::Interval(mm).check(&families, &strategy).map_err(|e| e.to_string())?;
        for (fam, v) in &report.verdicts {
            if *fam == Family::Pal5 {
                ensure(v.holds() == proper, || format!("{}: PAL5 {v:?} but proper = {proper}", f.describe()))?;
                if let Verdict::Fails(w) = v {
                    if f == PlMap::constant(q(0)) {
                        constant_witness = w.join(", ");
                    }
                }
            } else {
                ensure(v.holds(), || format!("{}: {fam} {v:?}", f.describe()))?;
            }
        }
    }
    ensure(!constant_witness.is_empty(), || "constant map has no PAL5 witness".into())?;
    Ok(format!("constant PAL5 witness {constant_witness}"))
}

fn atom_hom(s: &Arc<FiniteLca>, t: &Arc<FiniteLca>, rng: &mut impl Rng) -> TableMorphism {
    let g: Vec<usize> = (0..t.atom_count()).map(|_| rng.gen_range(0..s.atom_count())).collect();
    TableMorphism::from_atom_map(s.clone(), t.clone(), &g).unwrap()
}

fn category_laws() -> Outcome {
    let mut rng = rng_from_seed(7);
    for k in 0..50 {
        let algs: Vec<Arc<FiniteLca>> = (0..4).map(|_| Arc::new(FiniteLca::discrete(rng.gen_range(1..=3)))).collect();
        let p1 = atom_hom(&algs[0], &algs[1], &mut rng);
        let p2 = atom_hom(&algs[1], &algs[2], &mut rng);
        let p3 = atom_hom(&algs[2], &algs[3], &mut rng);
        let d = |a: &TableMorphism, b: &TableMorphism| a.diamond(b).map_err(|e| e.to_string());
        ensure(d(&d(&p3, &p2)?, &p1)? == d(&p3, &d(&p2, &p1)?)?, || format!("triple {k}: ⋄ not associative"))?;
        ensure(d(&p1, &TableMorphism::identity(algs[0].clone()))? == p1, || format!("triple {k}: right identity"))?;
        ensure(d(&TableMorphism::identity(algs[1].clone()), &p1)? == p1, || format!("triple {k}: left identity"))?;
        let lhs = p1.then(&p2.check_op()).map_err(|e| e.to_string())?.check_op();
        let rhs = p1.then(&p2).map_err(|e| e.to_string())?.check_op();
        ensure(lhs == rhs, || format!("triple {k}: (φ₂ˇ∘φ₁)ˇ ≠ (φ₂∘φ₁)ˇ"))?;
        for c in [d(&p2, &p1)?, d(&p3, &p2)?] {
            ensure(c.holds_all(&Family::DLC), || format!("triple {k}: composite {:?} leaves DLC", c.table()))?;
        }
    }
    Ok("50 triples".into())
}

fn naturality() -> Outcome {
    let mut tables = 0;
    for n in 0..=3 {
        for m in 0..=3 {
            let (s, t) = (Arc::new(FiniteLca::discrete(n)), Arc::new(FiniteLca::discrete(m)));
            if n == 0 && m > 0 {
                continue;
            }
            let (sd, td) = (dualize(&s).map_err(|e| e.to_string())?, dualize(&t).map_err(|e| e.to_string())?);
            let maps = (0..n.pow(m as u32)).map(|mut code| {
                let g: Vec<usize> = (0..m)
                    .map(|_| {
                        let v = code % n.max(1);
                        code /= n.max(1);
                        v
                    })
                    .collect();
                TableMorphism::from_atom_map(s.clone(), t.clone(), &g).unwrap()
            });
            for phi in maps {
                let f = dual_map(&phi, &sd, &td).map_err(|e| e.to_string())?;
                let r = algebra_square(&phi, &sd, &td, &f);
                ensure(r.holds(), || format!("{:?}", r.failures))?;
                tables += 1;
            }
        }
    }
    let mut space_maps = 0;
    for n in 0..=3 {
        for m in 0..=3 {
            for f in SpaceMap::all_between(&FiniteSpace::discrete_n(n), &FiniteSpace::discrete_n(m)) {
                let r = space_square(&f).map_err(|e| e.to_string())?;
                ensure(r.holds() && r.notes.is_empty(), || format!("{:?} {:?}", r.failures, r.notes))?;
                space_maps += 1;
            }
        }
    }
    let s = QuantifierStrategy::sampled(20, 3);
    for f in [PlMap::identity(), PlMap::linear(q(2)), PlMap::abs(), PlMap::hat()] {
        let mm = MapMorphism::new(f.clone());
        let r = stock_square(&mm, &sample_points(&mm.model, 5, 200), &s);
        ensure(r.holds(), || format!("{}: {:?}", f.describe(), r.failures))?;
    }
    for f in [NatMap::shift(0), NatMap::shift(3)] {
        let mm = MapMorphism::new(f.clone());
        let r = stock_square(&mm, &sample_points(&mm.model, 5, 200), &s);
        ensure(r.holds(), || format!("{}: {:?}", f.describe(), r.failures))?;
    }
    Ok(format!("{tables} tables, {space_maps} space maps, 6 stock maps"))
}

fn connectedness() -> Outcome {
    let mut count = 0;
    for n in 0..=3 {
        for x in FiniteSpace::all_topologies(n) {
            let rc = rc_algebra(&x).map_err(|e| e.to_string())?;
            ensure(x.is_connected() == passes(rc.lca(), Suite::Con), || format!("mismatch on {:?}", x.opens()))?;
            count += 1;
        }
    }
    Ok(format!("{count} topologies"))
}

fn trace_regression() -> Outcome {
    let m = IntervalModel;
    let at_one = SymbolicCluster::Point(q(1));
    let (left, right) = ("[0,1]".parse().unwrap(), "[1,2]".parse().unwrap());
    ensure(m.cluster_membership(&at_one, &left) && m.cluster_membership(&at_one, &right), || {
        "trace at 1 misses [0,1] or [1,2]".into()
    })?;
    ensure(m.meet(&left, &right) == m.zero(), || "[0,1] ∧ [1,2] ≠ 0".into())?;
    ensure(!m.cluster_membership(&at_one, &m.zero()), || "trace at 1 contains 0".into())?;
    Ok("trace at 1 is not a filter".into())
}

fn functoriality() -> Outcome {
    let s = QuantifierStrategy::sampled(100, 13).with_depth(20);
    let r = stock_functor_law(&PlMap::abs(), &PlMap::linear(q(2)), &s);
    ensure(r.holds(), || r.failures.join("; "))?;
    Ok(format!("{} regions", r.checks))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 11] = [
        ("finite rigidity sweep", rigidity, Some(Duration::from_secs(1))),
        ("round trip on small algebras and spaces", roundtrip, Some(Duration::from_secs(5))),
        ("cluster enumerations agree", clusters, None),
        ("delta-ideal frame and prime bijection", frame, None),
        ("infinite model axiom suites", infinite_suites, Some(Duration::from_secs(5))),
        ("stock map morphism suite", morphism_suite, None),
        ("category laws", category_laws, None),
        ("naturality squares", naturality, None),
        ("connectedness correspondence", connectedness, None),
        ("non-filter trace regression", trace_regression, None),
        ("functoriality on the interval model", functoriality, Some(Duration::from_secs(10))),
    ];
    let mut failed = 0;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(l)) if elapsed > *l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({elapsed:.2?})", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({elapsed:.2?})", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Family checks: exhaustive on tables, sampled on map-induced morphisms.

use rand::Rng;

use super::{render_instance, universal_instance, Family, FamilyVerdict, MapMorphism, MorphismReport, TableMorphism};
use crate::algebra::{alexandroff_way_below, rng_from_seed, sample_stream, way_below, RegionAlgebra, SampleRng};
use crate::axioms::{Mode, Outcome, QuantifierStrategy, Verdict};
use crate::error::{Error, Result};
use crate::finite::{Element, FiniteLca};
use crate::regions::{StockMap, StockModel};

fn family_seed(seed: u64, k: usize) -> u64 {
    seed ^ 0x9e37_79b9_7f4a_7c15u64.wrapping_mul(k as u64 + 1)
}

/// Exhaustive verdict of one family on a finite table.
pub fn check_table_family(m: &TableMorphism, family: Family) -> FamilyVerdict {
    let (s, t) = (&**m.source(), &**m.target());
    let phi = |a: &Element| m.apply(*a);
    let all: Vec<Element> = (0..s.element_count() as Element).collect();
    let show = |a: Element| s.render(&a);
    match family.universal_arity() {
        Some(0) => {
            return if universal_instance(s, t, &phi, family, &[]) {
                Verdict::Holds
            } else {
                Verdict::Fails(render_instance(s, t, &phi, family, &[]))
            }
        }
        Some(1) => {
            for &a in &all {
                if !universal_instance(s, t, &phi, family, &[a]) {
                    return Verdict::Fails(render_instance(s, t, &phi, family, &[a]));
                }
            }
            return Verdict::Holds;
        }
        Some(2) => {
            for &a in &all {
                for &b in &all {
                    if !universal_instance(s, t, &phi, family, &[a, b]) {
                        return Verdict::Fails(render_instance(s, t, &phi, family, &[a, b]));
                    }
                }
            }
            return Verdict::Holds;
        }
        Some(_) => {
            // LC3 and LC3S: only pairs meeting the premise matter.
            let need_bounded = family == Family::Lc3;
            let pairs: Vec<(Element, Element)> = all
                .iter()
                .flat_map(|&a| all.iter().map(move |&b| (a, b)))
                .filter(|(a, b)| (!need_bounded || s.bounded(a)) && way_below(s, a, b))
                .collect();
            for &(a1, b1) in &pairs {
                for &(a2, b2) in &pairs {
                    let tup = [a1, b1, a2, b2];
                    if !universal_instance(s, t, &phi, family, &tup) {
                        return Verdict::Fails(render_instance(s, t, &phi, family, &tup));
                    }
                }
            }
            return Verdict::Holds;
        }
        None => {}
    }
    match family {
        Family::Dlc4 | Family::Pal4 => {
            for b in 0..t.element_count() as Element {
                if t.bounded(&b) && !all.iter().any(|a| s.bounded(a) && b & !m.apply(*a) == 0) {
                    return Verdict::Fails(vec![format!("b = {}", t.render(&b)), "no bounded a with b ≤ φ(a)".into()]);
                }
            }
            Verdict::Holds
        }
        Family::Dlc5 | Family::Pal6 | Family::Dval4 => {
            let below = |b: &Element, a: &Element| match family {
                Family::Dlc5 => s.bounded(b) && way_below(s, b, a),
                Family::Pal6 => alexandroff_way_below(s, b, a),
                _ => way_below(s, b, a),
            };
            for &a in &all {
                let join = all.iter().filter(|b| below(b, &a)).fold(0, |acc, b| acc | m.apply(*b));
                if join != m.apply(a) {
                    return Verdict::Fails(vec![
                        format!("a = {}", show(a)),
                        format!("φ(a) = {}", t.render(&m.apply(a))),
                        format!("join = {}", t.render(&join)),
                    ]);
                }
            }
            Verdict::Holds
        }
        Family::Cbh => {
            if m.apply(s.top()) != t.top() {
                return Verdict::Fails(vec![format!("φ(1) = {}", t.render(&m.apply(s.top())))]);
            }
            for &a in &all {
                if m.apply(s.top() & !a) != t.top() & !m.apply(a) {
                    return Verdict::Fails(vec![format!("a = {}", show(a)), "φ(a*) ≠ φ(a)*".into()]);
                }
                for &b in &all {
                    if m.apply(a | b) != m.apply(a) | m.apply(b) || m.apply(a & b) != m.apply(a) & m.apply(b) {
                        return Verdict::Fails(vec![
                            format!("a = {}", show(a)),
                            format!("b = {}", show(b)),
                            "joins or meets not preserved".into(),
                        ]);
                    }
                }
            }
            Verdict::Holds
        }
        Family::L2 => match m.left_adjoint() {
            Err(e) => Verdict::Fails(vec![e.to_string()]),
            Ok(adj) => {
                for b in 0..t.element_count() as Element {
                    if t.bounded(&b) && !s.bounded(&adj[b as usize]) {
                        return Verdict::Fails(vec![
                            format!("b = {}", t.render(&b)),
                            format!("φ_Λ(b) = {}", s.render(&adj[b as usize])),
                        ]);
                    }
                }
                Verdict::Holds
            }
        },
        _ => unreachable!(),
    }
}

/// Nudges half the sampled tuples so the premise of the family tends to
/// hold.
fn bias_tuple<A: RegionAlgebra + ?Sized>(alg: &A, family: Family, t: &mut [A::Elem], rng: &mut SampleRng) {
    let make_bounded = |alg: &A, e: &A::Elem, n: usize| {
        if alg.bounded(e) {
            e.clone()
        } else {
            alg.truncate(e, n).unwrap_or_else(|| e.clone())
        }
    };
    let below_pair = |alg: &A, t: &mut [A::Elem], i: usize, rng: &mut SampleRng, both_bounded: bool| {
        t[i] = make_bounded(alg, &t[i], 4);
        if let Some(b) = alg.way_above(&t[i], rng) {
            t[i + 1] = if both_bounded { make_bounded(alg, &b, 8) } else { b };
        }
    };
    match family {
        Family::Dval3 | Family::Pal3 | Family::Dlc3 | Family::Dlc3S => below_pair(alg, t, 0, rng, false),
        Family::Dlc3Prime => below_pair(alg, t, 0, rng, true),
        Family::Lc3 | Family::Lc3S => {
            below_pair(alg, t, 0, rng, false);
            below_pair(alg, t, 2, rng, false);
        }
        Family::Pal5 => t[0] = make_bounded(alg, &t[0], 4),
        _ => {}
    }
}

/// One step of the dyadic-shrink scheme: `target` must equal the join of
/// `parts(G)` over the lower approximants `G` of `f`. Lower bound on a few
/// approximants, upper bound by locating dense points of `target`.
pub(crate) fn shrink_join<M: StockModel>(
    model: &M,
    f: &M::Elem,
    target: &M::Elem,
    parts: &dyn Fn(&M::Elem) -> M::Elem,
    dense: &[M::Point],
    depth: usize,
) -> Option<Vec<String>> {
    let approx = model.lower_approximants(f, depth);
    let mut probe: Vec<usize> = [1, 2, 3, depth].into_iter().filter(|&j| j >= 1 && j <= approx.len()).collect();
    probe.dedup();
    for j in probe {
        let p = parts(&approx[j - 1]);
        if !model.leq(&p, target) {
            return Some(vec![
                format!("F = {}", model.render(f)),
                format!("G = {}", model.render(&approx[j - 1])),
                format!("part {} exceeds {}", model.render(&p), model.render(target)),
            ]);
        }
    }
    let mut cache: Vec<Option<M::Elem>> = vec![None; approx.len()];
    for x in dense {
        let found = (0..approx.len()).any(|j| {
            let p = cache[j].get_or_insert_with(|| parts(&approx[j]));
            model.contains_point(p, x)
        });
        if !found {
            return Some(vec![
                format!("F = {}", model.render(f)),
                format!("point {} of {} not reached by depth {depth}", model.render_point(x), model.render(target)),
            ]);
        }
    }
    None
}

/// Sampled verdict of one family on a map-induced morphism.
pub fn check_map_family<F: StockMap>(
    m: &MapMorphism<F>,
    family: Family,
    pool: &[<F::Model as RegionAlgebra>::Elem],
    count: usize,
    depth: usize,
    rng: &mut SampleRng,
) -> Result<(FamilyVerdict, usize)> {
    let model = &m.model;
    let phi = |a: &<F::Model as RegionAlgebra>::Elem| m.map.phi(a);
    if let Some(arity) = family.universal_arity() {
        let tuples: Vec<Vec<_>> = match arity {
            0 => vec![Vec::new()],
            1 => {
                // The pool as drawn, then a biased copy of every other entry.
                let mut v: Vec<Vec<_>> = pool.iter().take(count).map(|a| vec![a.clone()]).collect();
                let biased: Vec<Vec<_>> = v
                    .iter()
                    .skip(1)
                    .step_by(2)
                    .map(|t| {
                        let mut t = t.clone();
                        bias_tuple(model, family, &mut t, rng);
                        t
                    })
                    .collect();
                v.extend(biased);
                v
            }
            _ => (0..count)
                .map(|i| {
                    let mut t: Vec<_> = (0..arity).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
                    if i % 2 == 1 {
                        bias_tuple(model, family, &mut t, rng);
                    }
                    t
                })
                .collect(),
        };
        let used = tuples.len();
        for t in &tuples {
            if !universal_instance(model, model, &phi, family, t) {
                return Ok((Verdict::Fails(render_instance(model, model, &phi, family, t)), used));
            }
        }
        return Ok((Verdict::Holds, used));
    }
    match family {
        Family::Dlc4 | Family::Pal4 => {
            let mut verdict = Verdict::Holds;
            let mut used = 0;
            for b in pool.iter().take(count) {
                let b = if model.bounded(b) {
                    b.clone()
                } else {
                    match model.truncate(b, 4) {
                        Some(t) => t,
                        None => continue,
                    }
                };
                used += 1;
                match m.map.cover(&b) {
                    Some(a) if model.bounded(&a) && model.leq(&b, &phi(&a)) => {}
                    _ => {
                        if verdict.holds() {
                            verdict = Verdict::Inconclusive(vec![
                                format!("b = {}", model.render(&b)),
                                "no bounded cover found".into(),
                            ]);
                        }
                    }
                }
            }
            Ok((verdict, used))
        }
        Family::Dlc5 | Family::Pal6 | Family::Dval4 => {
            let mut used = 0;
            for f in pool.iter().take(count) {
                used += 1;
                let target = phi(f);
                let dense = m.map.dense_points(f, rng, 4);
                if let Some(w) = shrink_join(model, f, &target, &phi, &dense, depth) {
                    return Ok((Verdict::Fails(w), used));
                }
            }
            Ok((Verdict::Holds, used))
        }
        Family::L2 | Family::Cbh => Err(Error::UnsupportedFamilyForModel(format!(
            "{family} needs exact joins or an adjoint, which map-induced morphisms do not provide"
        ))),
        _ => unreachable!(),
    }
}

pub(crate) fn check_map<F: StockMap>(
    m: &MapMorphism<F>,
    families: &[Family],
    strategy: &QuantifierStrategy,
) -> Result<MorphismReport> {
    if strategy.mode == Mode::Exhaustive {
        return Err(Error::ExhaustiveUnavailable);
    }
    let count = strategy.sample_count.max(1);
    let pool = sample_stream(&m.model, strategy.seed, count);
    let mut verdicts = Vec::new();
    let mut samples_used = 0;
    for (k, &family) in families.iter().enumerate() {
        let mut rng = rng_from_seed(family_seed(strategy.seed, k));
        let (v, used) = check_map_family(m, family, &pool, count, strategy.witness_depth, &mut rng)?;
        samples_used += used;
        verdicts.push((family, v));
    }
    let mut notes = Vec::new();
    if families.iter().any(|f| matches!(f, Family::Dlc5 | Family::Pal6 | Family::Dval4)) {
        notes.push(format!("joins checked by dyadic shrinking to depth {}", strategy.witness_depth));
    }
    Ok(MorphismReport { verdicts, samples_used, seed: strategy.seed, notes })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub is_dlc: Outcome,
    pub is_pal: Outcome,
    /// Only meaningful when every element is bounded on both sides.
    pub is_dval: Option<Outcome>,
    /// Only decidable on finite tables.
    pub is_skeletal: Option<Outcome>,
    pub notes: Vec<String>,
    pub cross_check_failures: Vec<String>,
}

fn group_outcome(m: &TableMorphism, families: &[Family]) -> Outcome {
    families.iter().map(|&f| m.verdict(f).outcome()).fold(Outcome::Holds, Outcome::combine)
}

fn full_bound(s: &FiniteLca) -> bool {
    s.is_full_bound()
}

pub fn classify_table(m: &TableMorphism) -> Classification {
    let is_dlc = group_outcome(m, &Family::DLC);
    let is_pal = group_outcome(m, &Family::PAL);
    let is_dval = (full_bound(m.source()) && full_bound(m.target())).then(|| group_outcome(m, &Family::DVAL));
    let is_skeletal = Some(group_outcome(m, &Family::SKELETAL));
    let mut notes = Vec::new();
    let mut cross = Vec::new();
    if m.verdict(Family::Pal5).holds() {
        notes.push("PAL5 holds; every map between finite spaces is perfect, so this is degenerate evidence".into());
    }
    if is_skeletal == Some(Outcome::Holds) && is_dlc != Outcome::Holds {
        cross.push("skeletal morphism fails a DLC family".into());
    }
    if is_dval.is_none() {
        notes.push("DVAL skipped: some element is unbounded".into());
    }
    Classification { is_dlc, is_pal, is_dval, is_skeletal, notes, cross_check_failures: cross }
}

pub fn classify_map<F: StockMap>(m: &MapMorphism<F>, strategy: &QuantifierStrategy) -> Result<Classification> {
    let dlc = check_map(m, &Family::DLC, strategy)?;
    let pal = check_map(m, &Family::PAL, strategy)?;
    let proper = m.is_proper();
    let sampled_pal5 = pal.verdict(Family::Pal5).map(|v| v.outcome()).unwrap_or(Outcome::Inconclusive);
    let mut notes = vec![format!("{} is {}proper", m.map.describe(), if proper { "" } else { "not " })];
    let mut cross = Vec::new();
    if proper && sampled_pal5 == Outcome::Fails {
        cross.push("map is proper but a sampled PAL5 instance fails".into());
    }
    if !proper && sampled_pal5 == Outcome::Holds {
        notes.push("sampling found no PAL5 counterexample; properness decides".into());
    }
    let rest = pal
        .verdicts
        .iter()
        .filter(|(f, _)| *f != Family::Pal5)
        .map(|(_, v)| v.outcome())
        .fold(Outcome::Holds, Outcome::combine);
    let is_pal = rest.combine(if proper { Outcome::Holds } else { Outcome::Fails });
    let is_dlc = dlc.outcome();
    notes.extend(dlc.notes);
    Ok(Classification { is_dlc, is_pal, is_dval: None, is_skeletal: None, notes, cross_check_failures: cross })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::morphism::{Morphism, TableMorphism};
    use crate::regions::{q, IntervalRegion, NatMap, NatRegion, PlMap};

    #[test]
    fn identity_interval_map_is_dlc() {
        let m = Morphism::Interval(MapMorphism::new(PlMap::identity()));
        let fams = [Family::Dlc1, Family::Dlc2, Family::Dlc3, Family::Dlc4, Family::Dlc5, Family::Dlc3S, Family::Lc3S];
        let report = m.check(&fams, &QuantifierStrategy::sampled(500, 7)).unwrap();
        for (f, v) in &report.verdicts {
            assert!(v.holds(), "{f}: {v:?}");
        }
    }

    #[test]
    fn constant_nat_map_fails_pal5() {
        let m = MapMorphism::new(NatMap::constant(0));
        let report = check_map(&m, &[Family::Pal5], &QuantifierStrategy::sampled(50, 1)).unwrap();
        let w = report.verdict(Family::Pal5).unwrap().witness().unwrap().clone();
        assert_eq!(w[0], format!("a = {}", NatRegion::finite([0])));
        assert_eq!(w[1], format!("φ(a) = {}", NatRegion::all()));
    }

    #[test]
    fn constant_interval_map_fails_pal5_only() {
        let m = MapMorphism::new(PlMap::constant(q(0)));
        let c = classify_map(&m, &QuantifierStrategy::sampled(100, 2)).unwrap();
        assert_eq!(c.is_pal, Outcome::Fails);
        assert_eq!(c.is_dlc, Outcome::Holds);
        assert!(c.cross_check_failures.is_empty());
        let p = MapMorphism::new(PlMap::linear(q(2)));
        let c = classify_map(&p, &QuantifierStrategy::sampled(100, 2)).unwrap();
        assert_eq!(c.is_pal, Outcome::Holds);
    }

    #[test]
    fn unsupported_families_on_maps() {
        let m = Morphism::Nat(MapMorphism::new(NatMap::shift(1)));
        assert!(matches!(
            m.check(&[Family::L2], &QuantifierStrategy::sampled(10, 0)),
            Err(Error::UnsupportedFamilyForModel(_))
        ));
        assert_eq!(m.check(&[Family::Dlc1], &QuantifierStrategy::exhaustive()), Err(Error::ExhaustiveUnavailable));
    }

    #[test]
    fn abs_passes_joins() {
        let m = MapMorphism::new(PlMap::abs());
        let r = check_map(&m, &[Family::Dlc5, Family::Pal6], &QuantifierStrategy::sampled(60, 4)).unwrap();
        assert!(r.all_hold(), "{r:?}");
        let _ = IntervalRegion::full();
    }

    #[test]
    fn complete_boolean_iso_is_skeletal() {
        let s = Arc::new(FiniteLca::discrete(2));
        let swap = TableMorphism::from_atom_map(s.clone(), s, &[1, 0]).unwrap();
        let c = classify_table(&swap);
        assert_eq!(c.is_skeletal, Some(Outcome::Holds));
        assert_eq!(c.is_dlc, Outcome::Holds);
        assert!(c.cross_check_failures.is_empty());
    }

    #[test]
    fn non_monotone_table_fails_dlc2() {
        let s = Arc::new(FiniteLca::discrete(1));
        let flip = TableMorphism::new(s.clone(), s, vec![1, 0]).unwrap();
        assert!(flip.verdict(Family::Dlc1).fails());
        assert!(flip.verdict(Family::Dlc2).fails());
        assert!(flip.verdict(Family::L2).fails());
    }
}

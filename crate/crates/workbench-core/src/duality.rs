//! Dual spaces of finite structures: bounded clusters with the topology
//! generated by the closed base `λ(a) = {σ : a ∈ σ}`, the point map
//! `t_X`, and the round trip back through regular closed sets.

use std::collections::BTreeSet;

use crate::algebra::{way_below, RegionAlgebra};
use crate::axioms::{check_axioms, QuantifierStrategy, Suite};
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::finite::{ClusterMode, ClusterSet, ContactChoice, Element, FiniteLca};
use crate::spaces::{check_boolean_iso, rc_algebra, FiniteSpace, RegularClosedAlgebra};

/// Which suites the input passed; the realization results are only
/// promised when `lca` holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guarantees {
    pub ca: bool,
    pub lca: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualSpace {
    /// All clusters of `(B, C_ρ)`.
    pub clusters: ClusterSet,
    /// Indices into `clusters` of the bounded ones, in order.
    pub carrier: Vec<usize>,
    /// The topology on all clusters.
    pub full_space: FiniteSpace,
    /// The subspace on the bounded clusters; point `i` is `carrier[i]`.
    pub space: FiniteSpace,
    pub guarantees: Guarantees,
}

pub fn dualize(s: &FiniteLca) -> Result<DualSpace> {
    let clusters = s.enumerate_clusters(ClusterMode::Brute, ContactChoice::Alexandroff)?;
    if clusters.len() > 64 {
        return Err(Error::PreconditionViolated(format!("{} clusters exceed the 64-point limit", clusters.len())));
    }
    let names = point_names(s, &clusters);
    let n = clusters.len();
    let base: Vec<Bits> =
        (0..s.element_count()).map(|a| (0..n).filter(|&i| clusters.clusters[i].contains(a)).collect()).collect();
    let closed = generate_closed(&base, Bits::full(n));
    let opens = closed.iter().map(|c| Bits::full(n).difference(*c)).collect();
    let full_space = FiniteSpace::validate(names, opens)?;
    let carrier: Vec<usize> = (0..n).filter(|&i| clusters.bounded[i]).collect();
    let space = full_space.subspace(carrier.iter().copied().collect());
    let exhaustive = QuantifierStrategy::exhaustive();
    let guarantees = Guarantees {
        ca: check_axioms(s, Suite::Ca, &exhaustive)?.all_hold(),
        lca: check_axioms(s, Suite::Lca, &exhaustive)?.all_hold(),
    };
    Ok(DualSpace { clusters, carrier, full_space, space, guarantees })
}

/// `σ_p` when the cluster is the ultrafilter trace at atom `p`, else `σi`.
fn point_names(s: &FiniteLca, clusters: &ClusterSet) -> Vec<String> {
    let traces: Vec<Option<Bits>> =
        (0..s.atom_count()).map(|i| s.cluster_from_ultrafilter(s.atom(i), ContactChoice::Alexandroff).ok()).collect();
    let mut names: Vec<String> = clusters
        .clusters
        .iter()
        .enumerate()
        .map(|(k, c)| match traces.iter().position(|t| *t == Some(*c)) {
            Some(i) => format!("σ_{}", s.atom_names()[i]),
            None => format!("σ{k}"),
        })
        .collect();
    // Two atoms may share a trace; keep names unique.
    let mut seen = BTreeSet::new();
    for (k, name) in names.iter_mut().enumerate() {
        if !seen.insert(name.clone()) {
            *name = format!("σ{k}");
        }
    }
    names
}

/// All intersections of finite unions of base sets.
fn generate_closed(base: &[Bits], full: Bits) -> Vec<Bits> {
    let mut unions = BTreeSet::from([Bits::EMPTY]);
    for &b in base {
        let more: Vec<Bits> = unions.iter().map(|u| u.union(b)).collect();
        unions.extend(more);
    }
    let mut closed = BTreeSet::from([full]);
    for &u in &unions {
        let more: Vec<Bits> = closed.iter().map(|c| c.intersection(u)).collect();
        closed.extend(more);
    }
    closed.into_iter().collect()
}

impl DualSpace {
    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    /// The cluster at carrier point `i`.
    pub fn cluster(&self, i: usize) -> Bits {
        self.clusters.clusters[self.carrier[i]]
    }

    pub fn point_of_cluster(&self, sigma: Bits) -> Option<usize> {
        (0..self.len()).find(|&i| self.cluster(i) == sigma)
    }

    /// `λ(a)` over all clusters, as indices into `clusters`.
    pub fn lambda(&self, a: Element) -> Bits {
        self.clusters.clusters.iter().enumerate().filter(|(_, c)| c.contains(a as usize)).map(|(i, _)| i).collect()
    }

    /// `λᵍ(a) = λ(a) ∩ carrier`, as carrier points.
    pub fn lambda_g(&self, a: Element) -> Bits {
        (0..self.len()).filter(|&i| self.cluster(i).contains(a as usize)).collect()
    }

    pub fn point_name(&self, i: usize) -> &str {
        &self.space.points()[i]
    }
}

pub fn lambda_g(s: &FiniteLca, a: Element) -> Result<Bits> {
    Ok(dualize(s)?.lambda_g(a))
}

/// `x ↦ σ_x = {F ∈ RC(X) : x ∈ F}` into the dual of `RC(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMap {
    pub rc: RegularClosedAlgebra,
    pub dual: DualSpace,
    /// Carrier point of `σ_x`, or `None` when `σ_x` is not a bounded cluster.
    pub table: Vec<Option<usize>>,
    /// The input is Hausdorff, so the realization theorem applies.
    pub guaranteed: bool,
    pub bijective: bool,
    pub homeomorphism: bool,
}

pub fn t_map(x: &FiniteSpace) -> Result<PointMap> {
    let rc = rc_algebra(x)?;
    let dual = dualize(rc.lca())?;
    let sets = rc.point_sets();
    let table: Vec<Option<usize>> = (0..x.len())
        .map(|p| {
            let sigma: Bits = (0..sets.len()).filter(|&e| sets[e].contains(p)).collect();
            dual.point_of_cluster(sigma)
        })
        .collect();
    let mut hit: Vec<usize> = table.iter().flatten().copied().collect();
    hit.sort();
    hit.dedup();
    let bijective = table.iter().all(Option::is_some) && hit.len() == x.len() && dual.len() == x.len();
    let homeomorphism = bijective && {
        let t: Vec<usize> = table.iter().map(|o| o.unwrap()).collect();
        let image = |u: Bits| -> Bits { u.iter().map(|p| t[p]).collect() };
        let preimage = |v: Bits| -> Bits { (0..x.len()).filter(|&p| v.contains(t[p])).collect() };
        x.opens().iter().all(|&u| dual.space.is_open(image(u)))
            && dual.space.opens().iter().all(|&v| x.is_open(preimage(v)))
    };
    Ok(PointMap { rc, dual, table, guaranteed: x.is_hausdorff(), bijective, homeomorphism })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityReport {
    /// Set when the input fails the precondition.
    pub declined: Option<String>,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl DualityReport {
    pub fn verified(&self) -> bool {
        self.declined.is_none() && self.failures.is_empty()
    }

    fn declined(reason: String) -> Self {
        DualityReport { declined: Some(reason), checks: 0, failures: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTrip {
    pub report: DualityReport,
    pub dual: Option<DualSpace>,
    pub rc: Option<RegularClosedAlgebra>,
    /// `λᵍ` as a table from elements of `S` to elements of `RC(Ψᵃ(S))`.
    pub table: Vec<Element>,
}

fn lca_precondition(s: &FiniteLca) -> Result<Option<String>> {
    let report = check_axioms(s, Suite::Lca, &QuantifierStrategy::exhaustive())?;
    let reason = report.failing().next().map(|(ax, v)| {
        let w: Vec<String> = v.witness().into_iter().flatten().map(|e| s.render(e)).collect();
        format!("LCA suite fails at {} with ({})", ax.name(), w.join(", "))
    });
    Ok(reason)
}

pub fn roundtrip_algebra(s: &FiniteLca) -> Result<RoundTrip> {
    if let Some(reason) = lca_precondition(s)? {
        return Ok(RoundTrip { report: DualityReport::declined(reason), dual: None, rc: None, table: Vec::new() });
    }
    let dual = dualize(s)?;
    let rc = rc_algebra(&dual.space)?;
    let mut failures = Vec::new();
    let mut table = Vec::new();
    for a in 0..s.element_count() as Element {
        match rc.from_points(dual.lambda_g(a)) {
            Some(e) => table.push(e),
            None => {
                failures.push(format!("λᵍ({}) is not regular closed", s.render(&a)));
                table.push(0);
            }
        }
    }
    let mut checks = s.element_count();
    if failures.is_empty() {
        check_boolean_iso(s, rc.lca(), &table, "λᵍ", &mut failures);
        let t = rc.lca();
        for a in 0..s.element_count() as Element {
            let ha = table[a as usize];
            if s.bounded(&a) != t.bounded(&ha) {
                failures.push(format!("λᵍ does not preserve boundedness at {}", s.render(&a)));
            }
            for b in 0..s.element_count() as Element {
                checks += 1;
                if s.contact(&a, &b) != t.contact(&ha, &table[b as usize]) {
                    failures.push(format!("λᵍ does not preserve contact at {}, {}", s.render(&a), s.render(&b)));
                }
            }
        }
    }
    Ok(RoundTrip { report: DualityReport { declined: None, checks, failures }, dual: Some(dual), rc: Some(rc), table })
}

/// Exhaustively checks that contact is realized by common bounded clusters,
/// that `{int λᵍ(a) : a ∈ IB}` is an open base, and that
/// `X ∖ λᵍ(a) = int λᵍ(a*)`.
pub fn verify_realization(s: &FiniteLca) -> Result<DualityReport> {
    if let Some(reason) = lca_precondition(s)? {
        return Ok(DualityReport::declined(reason));
    }
    let dual = dualize(s)?;
    let x = &dual.space;
    let n = s.element_count() as Element;
    let mut checks = 0;
    let mut failures = Vec::new();
    for a in 0..n {
        for b in 0..n {
            checks += 1;
            let common =
                (0..dual.len()).any(|i| dual.cluster(i).contains(a as usize) && dual.cluster(i).contains(b as usize));
            if s.contact(&a, &b) != common {
                failures.push(format!(
                    "contact of {}, {} is {} but a common bounded cluster {}",
                    s.render(&a),
                    s.render(&b),
                    s.contact(&a, &b),
                    if common { "exists" } else { "does not exist" }
                ));
            }
        }
    }
    let base: Vec<Bits> = (0..n).filter(|a| s.bounded(a)).map(|a| x.interior(dual.lambda_g(a))).collect();
    for &u in x.opens() {
        checks += 1;
        let covered = base.iter().filter(|b| b.is_subset(u)).fold(Bits::EMPTY, |acc, b| acc.union(*b));
        if covered != u {
            failures.push(format!("open set {:?} is not a union of basic opens", x.names(u)));
        }
    }
    for a in 0..n {
        checks += 1;
        let lhs = x.full().difference(dual.lambda_g(a));
        let rhs = x.interior(dual.lambda_g(s.complement(&a)));
        if lhs != rhs {
            failures.push(format!("complement identity fails at {}", s.render(&a)));
        }
    }
    Ok(DualityReport { declined: None, checks, failures })
}

/// `{a : a ρ d for every d ∈ trace}`: the cluster rebuilt from its bounded part.
pub fn cluster_from_trace(s: &FiniteLca, trace: Bits) -> Bits {
    (0..s.element_count()).filter(|&a| trace.iter().all(|d| s.contact(&(a as Element), &(d as Element)))).collect()
}

/// Whether `a ≪ b` for every pair drawn from two element sets.
pub fn all_way_below(s: &FiniteLca, a: Bits, b: Bits) -> bool {
    a.iter().all(|x| b.iter().all(|y| way_below(s, &(x as Element), &(y as Element))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_duals() {
        let d = dualize(&FiniteLca::discrete(2)).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.space.opens().len(), 4);
        assert_eq!(d.space.points(), ["σ_p", "σ_q"]);
        assert_eq!(dualize(&FiniteLca::discrete(1)).unwrap().len(), 1);
        assert!(dualize(&FiniteLca::discrete(0)).unwrap().is_empty());
        assert!(d.guarantees.lca);
    }

    #[test]
    fn lambda_g_values() {
        let s = FiniteLca::discrete(2);
        let d = dualize(&s).unwrap();
        assert_eq!(d.lambda_g(0), Bits::EMPTY);
        assert_eq!(d.lambda_g(s.top()), Bits::full(2));
        assert_eq!(d.lambda_g(0b01), Bits::singleton(0));
    }

    #[test]
    fn point_map_on_discrete_spaces() {
        let x = FiniteSpace::discrete(vec!["x".into(), "y".into()]);
        let t = t_map(&x).unwrap();
        assert!(t.guaranteed && t.bijective && t.homeomorphism);
        let sigma_x = t.dual.cluster(t.table[0].unwrap());
        let sets: Vec<Vec<String>> = sigma_x.iter().map(|e| x.names(t.rc.to_points(e as Element))).collect();
        assert_eq!(sets, vec![vec!["x".to_string()], vec!["x".to_string(), "y".to_string()]]);
        assert!(t_map(&FiniteSpace::discrete_n(1)).unwrap().homeomorphism);
        assert!(t_map(&FiniteSpace::discrete_n(3)).unwrap().homeomorphism);
    }

    #[test]
    fn non_hausdorff_is_flagged() {
        let t = t_map(&FiniteSpace::sierpinski()).unwrap();
        assert!(!t.guaranteed);
        assert!(!t.bijective);
    }

    #[test]
    fn roundtrips() {
        for n in 1..=3 {
            let r = roundtrip_algebra(&FiniteLca::discrete(n)).unwrap();
            assert!(r.report.verified(), "{:?}", r.report);
        }
        let r = roundtrip_algebra(&FiniteLca::complete_graph(2)).unwrap();
        assert!(r.report.declined.is_some());
    }

    #[test]
    fn realization() {
        let r = verify_realization(&FiniteLca::discrete(2)).unwrap();
        assert!(r.verified(), "{r:?}");
        assert!(verify_realization(&FiniteLca::discrete(3)).unwrap().verified());
    }
}

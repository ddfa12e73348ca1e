//! Dual maps `f_φ` between dual spaces, built pointwise from the traces
//! `S_σ′`, and the pointwise trace test for map-induced morphisms.

use super::{Family, MapMorphism, TableMorphism};
use crate::algebra::{way_below, RegionAlgebra};
use crate::bits::Bits;
use crate::duality::{cluster_from_trace, DualSpace};
use crate::error::{Error, Result};
use crate::finite::{Element, FiniteLca};
use crate::ideals::{iota, principal_delta_ideal};
use crate::regions::{StockMap, StockModel};
use crate::spaces::SpaceMap;

/// How one target point was sent back to the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualMapTrace {
    pub target_point: usize,
    pub s: Bits,
    pub v: Bits,
    pub j: Bits,
    pub sigma: Bits,
    pub source_point: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualMap {
    /// Indexed by points of the target's dual; values are points of the
    /// source's dual.
    pub table: Vec<usize>,
    pub traces: Vec<DualMapTrace>,
    /// Which hypothesis set admitted the construction.
    pub hypotheses: &'static str,
    pub continuous: bool,
    pub confun_failures: Vec<String>,
}

impl DualMap {
    pub fn verified(&self) -> bool {
        self.continuous && self.confun_failures.is_empty()
    }
}

const BUNDLES: [(&str, [Family; 4]); 2] = [
    ("DLC1-DLC4", [Family::Dlc1, Family::Dlc2, Family::Dlc3, Family::Dlc4]),
    ("DLC1, DLC2, LC3, DLC4", [Family::Dlc1, Family::Dlc2, Family::Lc3, Family::Dlc4]),
];

fn hypotheses(m: &TableMorphism) -> Result<&'static str> {
    if let Some((name, _)) = BUNDLES.iter().find(|(_, fams)| m.holds_all(fams)) {
        return Ok(name);
    }
    let (f, v) = BUNDLES[0]
        .1
        .iter()
        .map(|&f| (f, m.verdict(f)))
        .find(|(_, v)| !v.holds())
        .expect("some family of the first bundle fails");
    Err(Error::AxiomPreconditionFailed(format!(
        "{f} fails at {}",
        v.witness().map(|w| w.join(", ")).unwrap_or_default()
    )))
}

/// `S_σ′ = {a ∈ IB : ∀b (a ≪ b ⇒ φ(b) ∈ σ′)}`.
pub fn s_set(m: &TableMorphism, sigma_t: Bits) -> Bits {
    let s = &**m.source();
    let n = s.element_count() as Element;
    (0..n)
        .filter(|a| s.bounded(a) && (0..n).all(|b| !way_below(s, a, &b) || sigma_t.contains(m.apply(b) as usize)))
        .map(|a| a as usize)
        .collect()
}

/// The same set with `φ(b)` replaced by `(φ(b*))*`.
pub fn s_set_conjugate(m: &TableMorphism, sigma_t: Bits) -> Bits {
    let (s, t) = (&**m.source(), &**m.target());
    let n = s.element_count() as Element;
    let conj = |b: Element| t.complement(&m.apply(s.complement(&b)));
    (0..n)
        .filter(|a| s.bounded(a) && (0..n).all(|b| !way_below(s, a, &b) || sigma_t.contains(conj(b) as usize)))
        .map(|a| a as usize)
        .collect()
}

/// `D_φ(a) = ⋃{I_φ(b) : b ∈ IB, b ≪ a}`, a set of target elements.
pub fn d_phi(m: &TableMorphism, a: Element) -> Bits {
    let s = &**m.source();
    (0..s.element_count() as Element)
        .filter(|b| s.bounded(b) && way_below(s, b, &a))
        .fold(Bits::EMPTY, |acc, b| acc.union(principal_delta_ideal(m.target(), m.apply(b))))
}

fn v_of(s: &FiniteLca, trace: Bits) -> Bits {
    (0..s.element_count() as Element)
        .filter(|a| s.bounded(a) && trace.iter().any(|b| way_below(s, &(b as Element), a)))
        .map(|a| a as usize)
        .collect()
}

/// `f_φ`, from the dual of the target to the dual of the source. The
/// duals are passed in so callers can reuse them.
pub fn dual_map(m: &TableMorphism, src_dual: &DualSpace, tgt_dual: &DualSpace) -> Result<DualMap> {
    let hyp = hypotheses(m)?;
    let s = &**m.source();
    let ib = s.bounded_set();
    let mut table = Vec::with_capacity(tgt_dual.len());
    let mut traces = Vec::with_capacity(tgt_dual.len());
    for p in 0..tgt_dual.len() {
        let trace = s_set(m, tgt_dual.cluster(p));
        let sigma = cluster_from_trace(s, trace);
        let source_point = src_dual.point_of_cluster(sigma).ok_or_else(|| {
            Error::CarrierEscape(format!(
                "{} gives {} which is not a bounded cluster",
                tgt_dual.point_name(p),
                s.render_set(sigma)
            ))
        })?;
        if sigma.intersection(ib) != trace {
            return Err(Error::CarrierEscape(format!(
                "{}: cluster trace {} differs from S = {}",
                tgt_dual.point_name(p),
                s.render_set(sigma.intersection(ib)),
                s.render_set(trace)
            )));
        }
        table.push(source_point);
        traces.push(DualMapTrace {
            target_point: p,
            s: trace,
            v: v_of(s, trace),
            j: ib.difference(trace),
            sigma,
            source_point,
        });
    }
    let continuous = SpaceMap::new(tgt_dual.space.clone(), src_dual.space.clone(), table.clone()).is_ok();
    let mut confun_failures = Vec::new();
    let preimage = |u: Bits| -> Bits { (0..table.len()).filter(|&p| u.contains(table[p])).collect() };
    for a in ib.iter() {
        let a = a as Element;
        let left = preimage(src_dual.space.interior(src_dual.lambda_g(a)));
        match iota(m.target(), tgt_dual, d_phi(m, a)) {
            Ok(right) if right == left => {}
            Ok(right) => confun_failures.push(format!(
                "a = {}: preimage {:?} but ι(D_φ(a)) = {:?}",
                s.render(&a),
                tgt_dual.space.names(left),
                tgt_dual.space.names(right)
            )),
            Err(e) => confun_failures.push(format!("a = {}: {e}", s.render(&a))),
        }
    }
    Ok(DualMap { table, traces, hypotheses: hyp, continuous, confun_failures })
}

/// Whether the bounded region `r` lies in the trace `S_σ` at `σ = σ_x`
/// for the dual of `φ_f`: every region way above `r` must pull back to a
/// region containing `x`. Coinitial upper approximants stand in for all of
/// them.
pub fn stock_trace_contains<F: StockMap>(
    m: &MapMorphism<F>,
    x: &<F::Model as StockModel>::Point,
    r: &<F::Model as RegionAlgebra>::Elem,
    depth: usize,
) -> bool {
    m.model.bounded(r) && m.model.upper_approximants(r, depth).iter().all(|h| m.model.contains_point(&m.map.phi(h), x))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::duality::dualize;
    use crate::regions::{q, IntervalRegion, PlMap};

    #[test]
    fn identity_dual_map_is_identity() {
        let s = Arc::new(FiniteLca::discrete(3));
        let d = dualize(&s).unwrap();
        let id = TableMorphism::identity(s.clone());
        let f = dual_map(&id, &d, &d).unwrap();
        assert_eq!(f.table, (0..d.len()).collect::<Vec<_>>());
        assert!(f.verified(), "{f:?}");
        for t in &f.traces {
            assert_eq!(t.j, s.bounded_set().difference(t.s));
            assert_eq!(t.sigma.intersection(s.bounded_set()), t.s);
        }
    }

    #[test]
    fn precondition_is_checked() {
        let s = Arc::new(FiniteLca::discrete(1));
        let d = dualize(&s).unwrap();
        let flip = TableMorphism::new(s.clone(), s, vec![1, 0]).unwrap();
        assert!(matches!(dual_map(&flip, &d, &d), Err(Error::AxiomPreconditionFailed(_))));
    }

    #[test]
    fn abs_trace_at_two() {
        let m = MapMorphism::new(PlMap::abs());
        let r = IntervalRegion::closed(q(1), q(3)).unwrap();
        assert!(stock_trace_contains(&m, &q(2), &r, 20));
        assert!(!stock_trace_contains(&m, &q(5), &r, 20));
        assert!(stock_trace_contains(&m, &q(-2), &r, 20));
        assert!(!stock_trace_contains(&m, &q(2), &IntervalRegion::full(), 20));
    }
}

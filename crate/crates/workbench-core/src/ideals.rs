//! δ-ideals of finite structures, the frame they form, its isomorphism with
//! the open sets of the dual space, and prime elements versus bounded
//! clusters.

use crate::algebra::{way_below, RegionAlgebra};
use crate::bits::Bits;
use crate::duality::{cluster_from_trace, DualSpace};
use crate::error::{Error, Result};
use crate::finite::{Element, FiniteLca};

/// The first clause a candidate δ-ideal violates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeltaViolation {
    Empty,
    NotLower { member: Element, below: Element },
    NotJoinClosed { left: Element, right: Element },
    Unbounded(Element),
    NotInterpolative(Element),
}

impl DeltaViolation {
    pub fn describe(&self, s: &FiniteLca) -> String {
        match self {
            DeltaViolation::Empty => "empty".into(),
            DeltaViolation::NotLower { member, below } => {
                format!("not a lower set: {} ≤ {} is missing", s.render(below), s.render(member))
            }
            DeltaViolation::NotJoinClosed { left, right } => {
                format!("not join-closed at {}, {}", s.render(left), s.render(right))
            }
            DeltaViolation::Unbounded(a) => format!("{} is not bounded", s.render(a)),
            DeltaViolation::NotInterpolative(a) => format!("no member is way above {}", s.render(a)),
        }
    }
}

pub fn delta_violation(s: &FiniteLca, ideal: Bits) -> Option<DeltaViolation> {
    if ideal.is_empty() {
        return Some(DeltaViolation::Empty);
    }
    for a in ideal.iter().map(|a| a as Element) {
        if let Some(below) = (0..s.element_count() as Element).find(|&b| b & !a == 0 && !ideal.contains(b as usize)) {
            return Some(DeltaViolation::NotLower { member: a, below });
        }
    }
    for a in ideal.iter() {
        for b in ideal.iter() {
            if !ideal.contains(a | b) {
                return Some(DeltaViolation::NotJoinClosed { left: a as Element, right: b as Element });
            }
        }
    }
    if let Some(a) = ideal.iter().find(|&a| !s.bounded_set().contains(a)) {
        return Some(DeltaViolation::Unbounded(a as Element));
    }
    if let Some(a) = ideal.iter().find(|&a| !ideal.iter().any(|b| way_below(s, &(a as Element), &(b as Element)))) {
        return Some(DeltaViolation::NotInterpolative(a as Element));
    }
    None
}

pub fn is_delta_ideal(s: &FiniteLca, ideal: Bits) -> bool {
    delta_violation(s, ideal).is_none()
}

fn require_delta(s: &FiniteLca, ideal: Bits) -> Result<()> {
    match delta_violation(s, ideal) {
        None => Ok(()),
        Some(v) => Err(Error::NotDeltaIdeal(format!("{}: {}", s.render_set(ideal), v.describe(s)))),
    }
}

/// `I_a = {b ∈ IB : b ≪ a}`.
pub fn principal_delta_ideal(s: &FiniteLca, a: Element) -> Bits {
    let ideal =
        (0..s.element_count()).filter(|&b| s.bounded_set().contains(b) && way_below(s, &(b as Element), &a)).collect();
    debug_assert!(is_delta_ideal(s, ideal));
    ideal
}

/// Membership in `I_a` for any model: `b ∈ IB` and `b ≪ a`.
pub fn in_principal_delta_ideal<A: RegionAlgebra + ?Sized>(alg: &A, a: &A::Elem, b: &A::Elem) -> bool {
    alg.bounded(b) && way_below(alg, b, a)
}

/// Every ideal of a finite algebra is `↓c`; it is a δ-ideal exactly when
/// `c ∈ IB` and `c ≪ c`. Returned in increasing order of `c`.
pub fn all_delta_ideals(s: &FiniteLca) -> Vec<Bits> {
    (0..s.element_count() as Element).filter(|c| s.bounded(c) && way_below(s, c, c)).map(|c| down_set(s, c)).collect()
}

pub fn down_set(s: &FiniteLca, c: Element) -> Bits {
    (0..s.element_count()).filter(|&b| b as Element & !c == 0).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrameOps {
    pub join: Bits,
    pub meet: Bits,
}

/// Join as the ideal generated by `I ∪ J`, then checked to be δ; meet as
/// `I ∩ J`, likewise checked.
pub fn frame_ops(s: &FiniteLca, i: Bits, j: Bits) -> Result<FrameOps> {
    require_delta(s, i)?;
    require_delta(s, j)?;
    let top = i.union(j).iter().fold(0 as Element, |acc, a| acc | a as Element);
    let join = down_set(s, top);
    let meet = i.intersection(j);
    require_delta(s, join)?;
    require_delta(s, meet)?;
    Ok(FrameOps { join, meet })
}

/// `ι(I) = ⋃{λᵍ(a) : a ∈ I}`.
pub fn iota(s: &FiniteLca, dual: &DualSpace, ideal: Bits) -> Result<Bits> {
    require_delta(s, ideal)?;
    Ok(ideal.iter().fold(Bits::EMPTY, |acc, a| acc.union(dual.lambda_g(a as Element))))
}

/// `IB_U = {b ∈ IB : λᵍ(b) ⊆ U}`.
pub fn iota_inverse(s: &FiniteLca, dual: &DualSpace, open: Bits) -> Result<Bits> {
    if !dual.space.is_open(open) {
        return Err(Error::NotOpen);
    }
    let ideal = (0..s.element_count())
        .filter(|&b| s.bounded_set().contains(b) && dual.lambda_g(b as Element).is_subset(open))
        .collect();
    require_delta(s, ideal)?;
    Ok(ideal)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeCheck {
    Prime,
    /// The whole of `IB` is excluded by definition.
    Top,
    /// `J₁ ∩ J₂ ⊆ I` but neither `J₁ ⊆ I` nor `J₂ ⊆ I`.
    Split(Bits, Bits),
}

pub fn prime_check(s: &FiniteLca, ideal: Bits) -> Result<PrimeCheck> {
    require_delta(s, ideal)?;
    if ideal == s.bounded_set() {
        return Ok(PrimeCheck::Top);
    }
    let frame = all_delta_ideals(s);
    for &j1 in &frame {
        for &j2 in &frame {
            if j1.intersection(j2).is_subset(ideal) && !j1.is_subset(ideal) && !j2.is_subset(ideal) {
                return Ok(PrimeCheck::Split(j1, j2));
            }
        }
    }
    Ok(PrimeCheck::Prime)
}

pub fn is_prime_element(s: &FiniteLca, ideal: Bits) -> Result<bool> {
    Ok(prime_check(s, ideal)? == PrimeCheck::Prime)
}

/// `V = {a ∈ IB : b ≪ a for some b ∈ IB ∖ I}`.
pub fn v_set(s: &FiniteLca, ideal: Bits) -> Bits {
    let outside = s.bounded_set().difference(ideal);
    (0..s.element_count())
        .filter(|&a| {
            s.bounded_set().contains(a) && outside.iter().any(|b| way_below(s, &(b as Element), &(a as Element)))
        })
        .collect()
}

/// Nonempty, upward closed inside `IB`, and closed under meets.
pub fn is_filter_in_ib(s: &FiniteLca, f: Bits) -> bool {
    let ib = s.bounded_set();
    !f.is_empty()
        && f.is_subset(ib)
        && f.iter().all(|a| ib.iter().all(|b| a & !b != 0 || f.contains(b)))
        && f.iter().all(|a| f.iter().all(|b| f.contains(a & b)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameReport {
    pub ideals: Vec<Bits>,
    /// `ι(I)` for each ideal, in the same order.
    pub opens: Vec<Bits>,
    pub failures: Vec<String>,
}

impl FrameReport {
    pub fn verified(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that `ι` is an order isomorphism from the δ-ideals onto the
/// open sets of the dual, inverse to `IB_U`, and that principal δ-ideals
/// go onto the regular open sets.
pub fn verify_frame(s: &FiniteLca, dual: &DualSpace) -> Result<FrameReport> {
    let ideals = all_delta_ideals(s);
    let opens: Vec<Bits> = ideals.iter().map(|&i| iota(s, dual, i)).collect::<Result<_>>()?;
    let mut failures = Vec::new();
    let mut sorted = opens.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != opens.len() {
        failures.push("ι is not injective".into());
    }
    if sorted != dual.space.opens() {
        failures.push("ι does not reach every open set".into());
    }
    for (k, &i) in ideals.iter().enumerate() {
        if iota_inverse(s, dual, opens[k])? != i {
            failures.push(format!("IB_ι(I) ≠ I for I = {}", s.render_set(i)));
        }
        for (m, &j) in ideals.iter().enumerate() {
            if i.is_subset(j) != opens[k].is_subset(opens[m]) {
                failures.push(format!("order not reflected at {}, {}", s.render_set(i), s.render_set(j)));
            }
        }
    }
    for &u in dual.space.opens() {
        let i = iota_inverse(s, dual, u)?;
        if iota(s, dual, i)? != u {
            failures.push(format!("ι(IB_U) ≠ U for U = {:?}", dual.space.names(u)));
        }
    }
    let mut principal: Vec<Bits> =
        (0..s.element_count() as Element).map(|a| iota(s, dual, principal_delta_ideal(s, a))).collect::<Result<_>>()?;
    principal.sort();
    principal.dedup();
    if principal != dual.space.regular_open_sets() {
        failures.push("principal δ-ideals do not go onto the regular open sets".into());
    }
    Ok(FrameReport { ideals, opens, failures })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeBijection {
    /// `(carrier point, IB ∖ σ)` for each bounded cluster.
    pub pairs: Vec<(usize, Bits)>,
    pub primes: Vec<Bits>,
    pub failures: Vec<String>,
}

impl PrimeBijection {
    pub fn verified(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `σ ↦ IB ∖ σ` and `I ↦ {a : a ρ d for every d ∈ IB ∖ I}`, checked to be
/// mutually inverse between bounded clusters and prime elements.
pub fn prime_cluster_bijection(s: &FiniteLca, dual: &DualSpace) -> Result<PrimeBijection> {
    let ib = s.bounded_set();
    let mut primes = Vec::new();
    for i in all_delta_ideals(s) {
        if is_prime_element(s, i)? {
            primes.push(i);
        }
    }
    let mut failures = Vec::new();
    let mut pairs = Vec::new();
    for p in 0..dual.len() {
        let sigma = dual.cluster(p);
        let ideal = ib.difference(sigma);
        if !primes.contains(&ideal) {
            failures.push(format!("IB ∖ {} is not a prime element", dual.point_name(p)));
        }
        if cluster_from_trace(s, ideal_complement_trace(s, ideal)) != sigma {
            failures.push(format!("{} is not recovered from IB ∖ σ", dual.point_name(p)));
        }
        pairs.push((p, ideal));
    }
    for &i in &primes {
        let sigma = cluster_from_trace(s, ideal_complement_trace(s, i));
        match dual.point_of_cluster(sigma) {
            Some(_) if ib.difference(sigma) == i => {}
            Some(p) => failures.push(format!("{} does not map back to {}", dual.point_name(p), s.render_set(i))),
            None => failures.push(format!("prime element {} gives no bounded cluster", s.render_set(i))),
        }
    }
    if primes.len() != dual.len() {
        failures.push(format!("{} prime elements against {} bounded clusters", primes.len(), dual.len()));
    }
    Ok(PrimeBijection { pairs, primes, failures })
}

fn ideal_complement_trace(s: &FiniteLca, ideal: Bits) -> Bits {
    s.bounded_set().difference(ideal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::dualize;

    #[test]
    fn delta_ideal_examples() {
        let s = FiniteLca::discrete(2);
        assert!(is_delta_ideal(&s, Bits::singleton(0)));
        assert!(is_delta_ideal(&s, s.bounded_set()));
        assert!(is_delta_ideal(&s, Bits::from_indices([0, 1])));
        assert_eq!(delta_violation(&s, Bits::singleton(1)), Some(DeltaViolation::NotLower { member: 1, below: 0 }));
        assert_eq!(delta_violation(&s, Bits::EMPTY), Some(DeltaViolation::Empty));
        assert!(matches!(
            delta_violation(&s, Bits::from_indices([0, 1, 2])),
            Some(DeltaViolation::NotJoinClosed { .. })
        ));
    }

    #[test]
    fn principal_ideals() {
        let s = FiniteLca::discrete(2);
        assert_eq!(principal_delta_ideal(&s, 0), Bits::singleton(0));
        assert_eq!(principal_delta_ideal(&s, s.top()), s.bounded_set());
        assert_eq!(principal_delta_ideal(&s, 1), down_set(&s, 1));
    }

    #[test]
    fn frame_operations() {
        let s = FiniteLca::discrete(2);
        let (ip, iq) = (down_set(&s, 1), down_set(&s, 2));
        let bottom = Bits::singleton(0);
        assert_eq!(frame_ops(&s, ip, bottom).unwrap(), FrameOps { join: ip, meet: bottom });
        assert_eq!(frame_ops(&s, ip, iq).unwrap().join, s.bounded_set());
        assert!(matches!(frame_ops(&s, Bits::singleton(1), bottom), Err(Error::NotDeltaIdeal(_))));
    }

    #[test]
    fn iota_examples() {
        let s = FiniteLca::discrete(2);
        let d = dualize(&s).unwrap();
        assert_eq!(iota(&s, &d, Bits::singleton(0)).unwrap(), Bits::EMPTY);
        assert_eq!(iota(&s, &d, s.bounded_set()).unwrap(), d.space.full());
        assert_eq!(iota(&s, &d, down_set(&s, 1)).unwrap(), Bits::singleton(0));
        assert!(verify_frame(&s, &d).unwrap().verified());
    }

    #[test]
    fn iota_inverse_rejects_non_open_sets() {
        let s = FiniteLca::discrete(1);
        let d = dualize(&s).unwrap();
        assert_eq!(iota_inverse(&s, &d, Bits(0b10)), Err(Error::NotOpen));
    }

    #[test]
    fn prime_elements() {
        let s = FiniteLca::discrete(2);
        assert!(is_prime_element(&s, down_set(&s, 2)).unwrap());
        assert_eq!(prime_check(&s, s.bounded_set()).unwrap(), PrimeCheck::Top);
        assert_eq!(prime_check(&s, Bits::singleton(0)).unwrap(), PrimeCheck::Split(down_set(&s, 1), down_set(&s, 2)));
    }

    #[test]
    fn prime_bijection() {
        let s = FiniteLca::discrete(2);
        let d = dualize(&s).unwrap();
        let b = prime_cluster_bijection(&s, &d).unwrap();
        assert!(b.verified(), "{:?}", b.failures);
        let p = d.point_of_cluster(d.cluster(0)).unwrap();
        assert_eq!(d.point_name(p), "σ_p");
        assert_eq!(b.pairs[p].1, down_set(&s, 2));
        let one = FiniteLca::discrete(1);
        let b1 = prime_cluster_bijection(&one, &dualize(&one).unwrap()).unwrap();
        assert_eq!(b1.pairs, vec![(0, Bits::singleton(0))]);
    }

    #[test]
    fn v_is_a_filter() {
        let s = FiniteLca::discrete(2);
        let v = v_set(&s, down_set(&s, 2));
        assert_eq!(v, Bits::from_indices([1, 3]));
        assert!(is_filter_in_ib(&s, v));
    }
}

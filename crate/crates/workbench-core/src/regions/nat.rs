//! Finite and cofinite subsets of ℕ: regular closed sets of the discrete
//! space ℕ that admit a finite description. Bounded means finite.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::StockModel;
use crate::algebra::{CarrierKind, RegionAlgebra, SampleRng};
use crate::error::{literal_error, Error, Result};

/// `Finite(s)` is the set `s`; `Cofinite(s)` is `ℕ ∖ s`. Supports are
/// sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NatRegion {
    Finite(Vec<u64>),
    Cofinite(Vec<u64>),
}

fn canon(it: impl IntoIterator<Item = u64>) -> Vec<u64> {
    it.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

fn union(a: &[u64], b: &[u64]) -> Vec<u64> {
    canon(a.iter().chain(b).copied())
}

fn inter(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

fn minus(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().copied().filter(|x| b.binary_search(x).is_err()).collect()
}

impl NatRegion {
    pub fn empty() -> Self {
        NatRegion::Finite(Vec::new())
    }

    pub fn all() -> Self {
        NatRegion::Cofinite(Vec::new())
    }

    pub fn finite(it: impl IntoIterator<Item = u64>) -> Self {
        NatRegion::Finite(canon(it))
    }

    pub fn cofinite(it: impl IntoIterator<Item = u64>) -> Self {
        NatRegion::Cofinite(canon(it))
    }

    /// `{0, .., n-1}`.
    pub fn below(n: u64) -> Self {
        NatRegion::Finite((0..n).collect())
    }

    pub fn complement(&self) -> Self {
        match self {
            NatRegion::Finite(s) => NatRegion::Cofinite(s.clone()),
            NatRegion::Cofinite(s) => NatRegion::Finite(s.clone()),
        }
    }

    pub fn join(&self, other: &Self) -> Self {
        use NatRegion::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(union(a, b)),
            (Finite(a), Cofinite(b)) | (Cofinite(b), Finite(a)) => Cofinite(minus(b, a)),
            (Cofinite(a), Cofinite(b)) => Cofinite(inter(a, b)),
        }
    }

    pub fn meet(&self, other: &Self) -> Self {
        use NatRegion::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(inter(a, b)),
            (Finite(a), Cofinite(b)) | (Cofinite(b), Finite(a)) => Finite(minus(a, b)),
            (Cofinite(a), Cofinite(b)) => Cofinite(union(a, b)),
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            NatRegion::Finite(s) => s.binary_search(&n).is_ok(),
            NatRegion::Cofinite(s) => s.binary_search(&n).is_err(),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, NatRegion::Finite(s) if s.is_empty())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.meet(&other.complement()).is_empty()
    }

    pub fn intersects(&self, other: &Self) -> bool {
        !self.meet(other).is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, NatRegion::Finite(_))
    }

    /// The least member, if any.
    pub fn min(&self) -> Option<u64> {
        match self {
            NatRegion::Finite(s) => s.first().copied(),
            NatRegion::Cofinite(s) => (0..).find(|n| s.binary_search(n).is_err()),
        }
    }
}

impl fmt::Display for NatRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (tag, s) = match self {
            NatRegion::Finite(s) => ("finite", s),
            NatRegion::Cofinite(s) => ("cofinite", s),
        };
        let items: Vec<String> = s.iter().map(u64::to_string).collect();
        write!(f, "{{{tag}: [{}]}}", items.join(", "))
    }
}

impl FromStr for NatRegion {
    type Err = Error;

    /// Accepts `{finite: [..]}` and `{cofinite: [..]}`.
    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let body = t
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| literal_error(text, "expected {finite: [..]} or {cofinite: [..]}"))?;
        let (tag, list) = body.split_once(':').ok_or_else(|| literal_error(text, "missing ':'"))?;
        let list = list
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| literal_error(text, "expected a [..] list"))?;
        let items = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<u64>().map_err(|_| literal_error(text, format!("bad natural {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        match tag.trim().trim_matches('"') {
            "finite" => Ok(NatRegion::finite(items)),
            "cofinite" => Ok(NatRegion::cofinite(items)),
            other => Err(literal_error(text, format!("unknown tag {other:?}"))),
        }
    }
}

/// The finite/cofinite model as a region algebra.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NatModel;

impl NatModel {
    /// One random region: finite or cofinite with equal odds, support of at
    /// most `size_hint` elements drawn from `0..12`.
    pub fn random_region(&self, rng: &mut SampleRng, size_hint: usize) -> NatRegion {
        let k = rng.gen_range(0..=size_hint);
        let support: Vec<u64> = (0..k).map(|_| rng.gen_range(0..12)).collect();
        if rng.gen_bool(0.5) {
            NatRegion::finite(support)
        } else {
            NatRegion::cofinite(support)
        }
    }

    pub fn sample_region(&self, seed: u64, size_hint: usize) -> NatRegion {
        self.random_region(&mut crate::algebra::rng_from_seed(seed), size_hint)
    }
}

impl RegionAlgebra for NatModel {
    type Elem = NatRegion;

    fn carrier_kind(&self) -> CarrierKind {
        CarrierKind::CofiniteNat
    }
    fn zero(&self) -> NatRegion {
        NatRegion::empty()
    }
    fn one(&self) -> NatRegion {
        NatRegion::all()
    }
    fn join(&self, a: &NatRegion, b: &NatRegion) -> NatRegion {
        a.join(b)
    }
    fn meet(&self, a: &NatRegion, b: &NatRegion) -> NatRegion {
        a.meet(b)
    }
    fn complement(&self, a: &NatRegion) -> NatRegion {
        a.complement()
    }
    fn leq(&self, a: &NatRegion, b: &NatRegion) -> bool {
        a.is_subset(b)
    }
    fn contact(&self, a: &NatRegion, b: &NatRegion) -> bool {
        a.intersects(b)
    }
    fn bounded(&self, a: &NatRegion) -> bool {
        a.is_bounded()
    }
    fn landmarks(&self) -> Vec<NatRegion> {
        vec![
            NatRegion::empty(),
            NatRegion::all(),
            NatRegion::finite([0]),
            NatRegion::finite([1, 2]),
            NatRegion::cofinite([0]),
            NatRegion::cofinite([1, 2]),
        ]
    }
    fn sample(&self, rng: &mut SampleRng) -> NatRegion {
        self.random_region(rng, 4)
    }
    // Discrete space: ≪ is ⊆, so a itself interpolates.
    fn interpolate(&self, a: &NatRegion, c: &NatRegion) -> Option<NatRegion> {
        a.is_subset(c).then(|| a.clone())
    }
    fn shrink_nonzero(&self, a: &NatRegion) -> Option<NatRegion> {
        a.min().map(|m| NatRegion::finite([m]))
    }
    fn truncate(&self, b: &NatRegion, n: usize) -> Option<NatRegion> {
        Some(b.meet(&NatRegion::below(n as u64)))
    }
    fn way_above(&self, a: &NatRegion, rng: &mut SampleRng) -> Option<NatRegion> {
        Some(a.join(&self.random_region(rng, 2)))
    }
    fn render(&self, a: &NatRegion) -> String {
        a.to_string()
    }
}

impl StockModel for NatModel {
    type Point = u64;

    fn contains_point(&self, r: &NatRegion, x: &u64) -> bool {
        r.contains(*x)
    }
    fn lower_approximants(&self, r: &NatRegion, depth: usize) -> Vec<NatRegion> {
        (1..=depth.min(62)).map(|j| r.meet(&NatRegion::below(1 << j))).collect()
    }
    fn upper_approximants(&self, r: &NatRegion, _depth: usize) -> Vec<NatRegion> {
        vec![r.clone()]
    }
    fn sample_point(&self, rng: &mut SampleRng) -> u64 {
        rng.gen_range(0..200)
    }
    fn render_point(&self, x: &u64) -> String {
        x.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{alexandroff_contact, sample_stream, way_below};

    fn n(s: &str) -> NatRegion {
        s.parse().unwrap()
    }

    #[test]
    fn boolean_operations() {
        assert_eq!(n("{finite: [1,2]}").join(&n("{cofinite: [2,3]}")), n("{cofinite: [3]}"));
        assert_eq!(n("{finite: [1,2]}").meet(&n("{cofinite: [2,3]}")), n("{finite: [1]}"));
        assert_eq!(n("{cofinite: [1]}").meet(&n("{cofinite: [2]}")), n("{cofinite: [1,2]}"));
        assert_eq!(NatRegion::finite([2, 1, 2]), n("{finite: [1, 2]}"));
    }

    #[test]
    fn contact_bounded_way_below() {
        let m = NatModel;
        assert!(way_below(&m, &NatRegion::finite([0, 1]), &NatRegion::cofinite([5])));
        assert!(!m.bounded(&NatRegion::all()));
        assert!(m.bounded(&NatRegion::empty()));
        assert!(!alexandroff_contact(&m, &NatRegion::cofinite([0]), &NatRegion::finite([0])));
    }

    #[test]
    fn literals() {
        let a = n("{cofinite: [0, 5]}");
        assert_eq!(a.to_string(), "{cofinite: [0, 5]}");
        assert_eq!(n(&a.to_string()), a);
        assert!("{finite: [x]}".parse::<NatRegion>().is_err());
        assert!("{other: []}".parse::<NatRegion>().is_err());
    }

    #[test]
    fn interpolation_is_reflexive() {
        let m = NatModel;
        let a = NatRegion::finite([3]);
        assert_eq!(m.interpolate(&a, &NatRegion::cofinite([0])), Some(a));
        assert_eq!(m.interpolate(&NatRegion::empty(), &NatRegion::empty()), Some(NatRegion::empty()));
    }

    #[test]
    fn stream_contains_extremes() {
        let draws = sample_stream(&NatModel, 1, 100);
        assert!(draws.contains(&NatRegion::empty()));
        assert!(draws.contains(&NatRegion::all()));
        assert_eq!(NatModel.sample_region(1, 4), NatModel.sample_region(1, 4));
    }
}

//! Finite unions of closed rational intervals and rays: a subalgebra of
//! `RC(ℝ)` with intersection contact and compact regions as bounded ones.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::{fmt_rational, parse_rational, pow2, q, q_frac, StockModel, Q};
use crate::algebra::{CarrierKind, RegionAlgebra, SampleRng};
use crate::error::{literal_error, Error, Result};

/// An endpoint. Variant order gives `-∞ < x < +∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bound {
    NegInf,
    Finite(Q),
    PosInf,
}

impl Bound {
    pub fn finite(&self) -> Option<&Q> {
        match self {
            Bound::Finite(x) => Some(x),
            _ => None,
        }
    }

    fn shifted(&self, by: &Q) -> Bound {
        match self {
            Bound::Finite(x) => Bound::Finite(x + by),
            other => other.clone(),
        }
    }
}

/// A closed interval `[lo, hi]` with `lo < hi`; infinite ends are open rays.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

impl Interval {
    pub fn contains(&self, x: &Q) -> bool {
        let b = Bound::Finite(x.clone());
        self.lo <= b && b <= self.hi
    }

    pub fn interior_contains(&self, x: &Q) -> bool {
        let b = Bound::Finite(x.clone());
        self.lo < b && b < self.hi
    }

    /// Whether this closed interval sits inside the open interval `(other.lo, other.hi)`.
    fn inside_open(&self, other: &Interval) -> bool {
        let left = other.lo < self.lo || (other.lo == Bound::NegInf && self.lo == Bound::NegInf);
        let right = self.hi < other.hi || (other.hi == Bound::PosInf && self.hi == Bound::PosInf);
        left && right
    }
}

/// Canonical region: sorted, strictly separated intervals with nonempty interior.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntervalRegion {
    parts: Vec<Interval>,
}

impl IntervalRegion {
    pub fn empty() -> Self {
        IntervalRegion { parts: Vec::new() }
    }

    pub fn full() -> Self {
        IntervalRegion { parts: vec![Interval { lo: Bound::NegInf, hi: Bound::PosInf }] }
    }

    /// Canonical form of a raw list: degenerate intervals vanish, touching
    /// or overlapping ones merge.
    pub fn normalize(raw: Vec<(Bound, Bound)>) -> Result<Self> {
        let mut parts = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            if lo > hi || lo == Bound::PosInf || hi == Bound::NegInf {
                return Err(Error::MalformedInterval(format!("{} > {}", fmt_bound(&lo), fmt_bound(&hi))));
            }
            if lo < hi {
                parts.push(Interval { lo, hi });
            }
        }
        Ok(Self::merge(parts))
    }

    fn merge(mut parts: Vec<Interval>) -> Self {
        parts.sort();
        let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
        for p in parts {
            match out.last_mut() {
                Some(last) if p.lo <= last.hi => {
                    if p.hi > last.hi {
                        last.hi = p.hi;
                    }
                }
                _ => out.push(p),
            }
        }
        IntervalRegion { parts: out }
    }

    /// `[lo, hi]` from finite rationals.
    pub fn closed(lo: Q, hi: Q) -> Result<Self> {
        Self::normalize(vec![(Bound::Finite(lo), Bound::Finite(hi))])
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_full(&self) -> bool {
        *self == Self::full()
    }

    pub fn join(&self, other: &Self) -> Self {
        Self::merge(self.parts.iter().chain(other.parts.iter()).cloned().collect())
    }

    /// `cl(int(F ∩ G))`: pairwise intersections with nonempty interior.
    pub fn meet(&self, other: &Self) -> Self {
        let mut parts = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                let lo = (&a.lo).max(&b.lo).clone();
                let hi = (&a.hi).min(&b.hi).clone();
                if lo < hi {
                    parts.push(Interval { lo, hi });
                }
            }
        }
        Self::merge(parts)
    }

    /// `cl(ℝ ∖ F)`: the closed gaps between components.
    pub fn complement(&self) -> Self {
        let mut parts = Vec::new();
        let mut start = Bound::NegInf;
        for p in &self.parts {
            if start < p.lo {
                parts.push(Interval { lo: start, hi: p.lo.clone() });
            }
            start = p.hi.clone();
        }
        if start < Bound::PosInf {
            parts.push(Interval { lo: start, hi: Bound::PosInf });
        }
        IntervalRegion { parts }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.parts.iter().all(|a| other.parts.iter().any(|b| b.lo <= a.lo && a.hi <= b.hi))
    }

    /// `F ∩ G ≠ ∅` for the closed sets, so touching endpoints count.
    pub fn intersects(&self, other: &Self) -> bool {
        self.parts.iter().any(|a| other.parts.iter().any(|b| (&a.lo).max(&b.lo) <= (&a.hi).min(&b.hi)))
    }

    pub fn is_bounded(&self) -> bool {
        self.parts.iter().all(|p| p.lo != Bound::NegInf && p.hi != Bound::PosInf)
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn interior_contains(&self, x: &Q) -> bool {
        self.parts.iter().any(|p| p.interior_contains(x))
    }

    /// `F ⊆ int(G)` by endpoint comparison. Components of `G` are strictly
    /// separated, so the open components of `int G` are their interiors.
    pub fn inside_interior_of(&self, other: &Self) -> bool {
        self.parts.iter().all(|a| other.parts.iter().any(|b| a.inside_open(b)))
    }

    /// A region `b` with `self ≪ b ≪ c`: each component of `self` grows by
    /// half its margin inside the component of `int c` that holds it.
    pub fn half_margin_interpolant(&self, c: &Self) -> Option<Self> {
        let mut parts = Vec::with_capacity(self.parts.len());
        for a in &self.parts {
            let host = c.parts.iter().find(|b| a.inside_open(b))?;
            let lo = match (&a.lo, &host.lo) {
                (Bound::Finite(l), Bound::Finite(h)) => Bound::Finite(l - (l - h) / q(2)),
                (Bound::Finite(l), _) => Bound::Finite(l - q(1)),
                (other, _) => other.clone(),
            };
            let hi = match (&a.hi, &host.hi) {
                (Bound::Finite(r), Bound::Finite(h)) => Bound::Finite(r + (h - r) / q(2)),
                (Bound::Finite(r), _) => Bound::Finite(r + q(1)),
                (other, _) => other.clone(),
            };
            parts.push(Interval { lo, hi });
        }
        Some(Self::merge(parts))
    }

    /// Every component widened by `eps` on each finite side.
    pub fn expand(&self, eps: &Q) -> Self {
        let neg = -eps.clone();
        Self::merge(self.parts.iter().map(|p| Interval { lo: p.lo.shifted(&neg), hi: p.hi.shifted(eps) }).collect())
    }

    /// Components shrunk by `eps` and clipped to `[-radius, radius]`; the
    /// result is bounded and way below `self`.
    pub fn shrink_bounded(&self, eps: &Q, radius: &Q) -> Self {
        let neg_r = Bound::Finite(-radius.clone());
        let pos_r = Bound::Finite(radius.clone());
        let neg = -eps.clone();
        let mut parts = Vec::new();
        for p in &self.parts {
            let lo = match &p.lo {
                Bound::NegInf => neg_r.clone(),
                b => b.shifted(eps).max(neg_r.clone()),
            };
            let hi = match &p.hi {
                Bound::PosInf => pos_r.clone(),
                b => b.shifted(&neg).min(pos_r.clone()),
            };
            if lo < hi {
                parts.push(Interval { lo, hi });
            }
        }
        Self::merge(parts)
    }

    /// `F ∧ [-n, n]`.
    pub fn truncate(&self, n: &Q) -> Self {
        self.meet(&Self::closed(-n.clone(), n.clone()).expect("symmetric interval"))
    }
}

pub fn fmt_bound(b: &Bound) -> String {
    match b {
        Bound::NegInf => "-inf".into(),
        Bound::PosInf => "inf".into(),
        Bound::Finite(x) => fmt_rational(x),
    }
}

impl fmt::Display for IntervalRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("0");
        }
        let pieces: Vec<String> = self
            .parts
            .iter()
            .map(|p| {
                let open = if p.lo == Bound::NegInf { '(' } else { '[' };
                let close = if p.hi == Bound::PosInf { ')' } else { ']' };
                format!("{open}{},{}{close}", fmt_bound(&p.lo), fmt_bound(&p.hi))
            })
            .collect();
        f.write_str(&pieces.join(" + "))
    }
}

impl FromStr for IntervalRegion {
    type Err = Error;

    /// Accepts `[l,r]`, `[l,inf)`, `(-inf,r]`, `(-inf,inf)`, unions joined
    /// by `+`, and `0` or `empty` for the empty region.
    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "0" || t == "empty" {
            return Ok(Self::empty());
        }
        let mut raw = Vec::new();
        for piece in t.split('+') {
            let piece = piece.trim();
            let (open, rest) = piece.split_at(piece.chars().next().map_or(0, char::len_utf8));
            let close = rest.chars().last().ok_or_else(|| literal_error(text, "empty interval"))?;
            let body = &rest[..rest.len() - close.len_utf8()];
            let (l, r) = body.split_once(',').ok_or_else(|| literal_error(text, "expected l,r"))?;
            let (l, r) = (l.trim(), r.trim());
            let lo = match (open, l) {
                ("(", "-inf") => Bound::NegInf,
                ("[", l) if l != "-inf" && l != "inf" => Bound::Finite(parse_rational(l)?),
                _ => return Err(literal_error(text, format!("bad left end in {piece:?}"))),
            };
            let hi = match (close, r) {
                (')', "inf") | (')', "+inf") => Bound::PosInf,
                (']', r) if r != "inf" && r != "-inf" => Bound::Finite(parse_rational(r)?),
                _ => return Err(literal_error(text, format!("bad right end in {piece:?}"))),
            };
            raw.push((lo, hi));
        }
        Self::normalize(raw)
    }
}

/// The interval model as a region algebra.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IntervalModel;

fn random_rational(rng: &mut SampleRng) -> Q {
    let d = rng.gen_range(1..=4i64);
    let n = rng.gen_range(-8 * d..=8 * d);
    q_frac(n, d)
}

impl IntervalModel {
    /// One random region with at most `size_hint` components. Endpoints are
    /// `p/q` with `q ≤ 4` inside `[-8, 8]`; each end becomes a ray with
    /// probability 1/4.
    pub fn random_region(&self, rng: &mut SampleRng, size_hint: usize) -> IntervalRegion {
        let k = rng.gen_range(0..=size_hint);
        let mut points: Vec<Q> = (0..2 * k).map(|_| random_rational(rng)).collect();
        points.sort();
        points.dedup();
        let mut raw: Vec<(Bound, Bound)> =
            points.chunks_exact(2).map(|w| (Bound::Finite(w[0].clone()), Bound::Finite(w[1].clone()))).collect();
        if !raw.is_empty() {
            if rng.gen_bool(0.25) {
                raw[0].0 = Bound::NegInf;
            }
            if rng.gen_bool(0.25) {
                let last = raw.len() - 1;
                raw[last].1 = Bound::PosInf;
            }
        }
        IntervalRegion::normalize(raw).expect("sorted endpoints")
    }

    /// First draw of the stream for `seed`.
    pub fn sample_region(&self, seed: u64, size_hint: usize) -> IntervalRegion {
        self.random_region(&mut crate::algebra::rng_from_seed(seed), size_hint)
    }
}

impl RegionAlgebra for IntervalModel {
    type Elem = IntervalRegion;

    fn carrier_kind(&self) -> CarrierKind {
        CarrierKind::RationalInterval
    }
    fn zero(&self) -> IntervalRegion {
        IntervalRegion::empty()
    }
    fn one(&self) -> IntervalRegion {
        IntervalRegion::full()
    }
    fn join(&self, a: &IntervalRegion, b: &IntervalRegion) -> IntervalRegion {
        a.join(b)
    }
    fn meet(&self, a: &IntervalRegion, b: &IntervalRegion) -> IntervalRegion {
        a.meet(b)
    }
    fn complement(&self, a: &IntervalRegion) -> IntervalRegion {
        a.complement()
    }
    fn leq(&self, a: &IntervalRegion, b: &IntervalRegion) -> bool {
        a.is_subset(b)
    }
    fn contact(&self, a: &IntervalRegion, b: &IntervalRegion) -> bool {
        a.intersects(b)
    }
    fn bounded(&self, a: &IntervalRegion) -> bool {
        a.is_bounded()
    }
    fn landmarks(&self) -> Vec<IntervalRegion> {
        ["0", "(-inf,inf)", "[0,1]", "[1,2]", "[-1,1]", "[0,inf)", "(-inf,0]", "[0,1] + [2,3]"]
            .iter()
            .map(|s| s.parse().expect("landmark literal"))
            .collect()
    }
    fn sample(&self, rng: &mut SampleRng) -> IntervalRegion {
        self.random_region(rng, 3)
    }
    fn interpolate(&self, a: &IntervalRegion, c: &IntervalRegion) -> Option<IntervalRegion> {
        a.half_margin_interpolant(c)
    }
    fn shrink_nonzero(&self, a: &IntervalRegion) -> Option<IntervalRegion> {
        let p = a.parts.first()?;
        let (lo, hi) = match (&p.lo, &p.hi) {
            (Bound::Finite(l), Bound::Finite(r)) => {
                let quarter = (r - l) / q(4);
                (l + &quarter, r - &quarter)
            }
            (Bound::NegInf, Bound::Finite(r)) => (r - q(2), r - q(1)),
            (Bound::Finite(l), Bound::PosInf) => (l + q(1), l + q(2)),
            _ => (q(0), q(1)),
        };
        IntervalRegion::closed(lo, hi).ok()
    }
    fn truncate(&self, b: &IntervalRegion, n: usize) -> Option<IntervalRegion> {
        Some(b.truncate(&q(n as i64)))
    }
    fn way_above(&self, a: &IntervalRegion, rng: &mut SampleRng) -> Option<IntervalRegion> {
        let base = if rng.gen_bool(0.5) { a.join(&self.random_region(rng, 1)) } else { a.clone() };
        let eps = q_frac(1, 1 << rng.gen_range(0..4));
        Some(base.expand(&eps))
    }
    fn render(&self, a: &IntervalRegion) -> String {
        a.to_string()
    }
}

impl StockModel for IntervalModel {
    type Point = Q;

    fn contains_point(&self, r: &IntervalRegion, x: &Q) -> bool {
        r.contains(x)
    }
    fn lower_approximants(&self, r: &IntervalRegion, depth: usize) -> Vec<IntervalRegion> {
        (1..=depth).map(|j| r.shrink_bounded(&(q(1) / pow2(j)), &pow2(j))).collect()
    }
    fn upper_approximants(&self, r: &IntervalRegion, depth: usize) -> Vec<IntervalRegion> {
        (1..=depth).map(|j| r.expand(&(q(1) / pow2(j)))).collect()
    }
    fn sample_point(&self, rng: &mut SampleRng) -> Q {
        random_rational(rng)
    }
    fn render_point(&self, x: &Q) -> String {
        fmt_rational(x)
    }
}

//! The region-algebra contract shared by every model, plus the relations
//! derived from contact.

use std::fmt::Debug;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random source used by every sampler. ChaCha8 keeps streams stable across
/// platforms and `rand` releases.
pub type SampleRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CarrierKind {
    Finite,
    CofiniteNat,
    RationalInterval,
}

/// A Boolean algebra with a contact relation and an ideal of bounded
/// elements, `(B, 0, 1, ∨, ∧, *, ρ, IB)`.
///
/// The witness hooks are optional oracles used by the axiom checker on
/// infinite carriers. Every candidate they return is re-checked by direct
/// evaluation, so a wrong oracle can cost completeness but never soundness.
pub trait RegionAlgebra {
    type Elem: Clone + PartialEq + Eq + Debug;

    fn carrier_kind(&self) -> CarrierKind;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn complement(&self, a: &Self::Elem) -> Self::Elem;

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.join(a, b) == *b
    }

    fn contact(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn bounded(&self, a: &Self::Elem) -> bool;

    /// Every element, when the carrier is finite.
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    /// Fixed elements placed at the head of every sample stream.
    fn landmarks(&self) -> Vec<Self::Elem> {
        vec![self.zero(), self.one()]
    }

    fn sample(&self, rng: &mut SampleRng) -> Self::Elem;

    /// Some `b` with `a ≪ b ≪ c`, bounded whenever `a` is.
    fn interpolate(&self, _a: &Self::Elem, _c: &Self::Elem) -> Option<Self::Elem> {
        None
    }

    /// Some bounded `b ≠ 0` with `b ≪ a`, for `a ≠ 0`.
    fn shrink_nonzero(&self, _a: &Self::Elem) -> Option<Self::Elem> {
        None
    }

    /// A bounded element below `b`, growing with `n`.
    fn truncate(&self, _b: &Self::Elem, _n: usize) -> Option<Self::Elem> {
        None
    }

    /// A random `b` with `a ≪ b`.
    fn way_above(&self, _a: &Self::Elem, _rng: &mut SampleRng) -> Option<Self::Elem> {
        None
    }

    fn render(&self, a: &Self::Elem) -> String {
        format!("{a:?}")
    }
}

/// `a ≪ b` iff `a` is not in contact with `b*`.
pub fn way_below<A: RegionAlgebra + ?Sized>(alg: &A, a: &A::Elem, b: &A::Elem) -> bool {
    !alg.contact(a, &alg.complement(b))
}

/// The Alexandroff extension `C_ρ`: contact, or both arguments unbounded.
pub fn alexandroff_contact<A: RegionAlgebra + ?Sized>(alg: &A, a: &A::Elem, b: &A::Elem) -> bool {
    alg.contact(a, b) || (!alg.bounded(a) && !alg.bounded(b))
}

/// `a ≪ b` with respect to `C_ρ`.
pub fn alexandroff_way_below<A: RegionAlgebra + ?Sized>(alg: &A, a: &A::Elem, b: &A::Elem) -> bool {
    !alexandroff_contact(alg, a, &alg.complement(b))
}

/// Landmarks first, then seeded random draws, `count` elements in total.
pub fn sample_stream<A: RegionAlgebra + ?Sized>(alg: &A, seed: u64, count: usize) -> Vec<A::Elem> {
    let mut rng = rng_from_seed(seed);
    let mut out: Vec<A::Elem> = alg.landmarks().into_iter().take(count).collect();
    while out.len() < count {
        out.push(alg.sample(&mut rng));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CanonicalKind {
    /// `a ρ_s b` iff `a ∧ b ≠ 0`.
    Smallest,
    /// `a ρ_l b` iff `a ≠ 0` and `b ≠ 0`.
    Largest,
}

/// The same Boolean algebra with one of the two canonical contacts.
/// Boundedness is inherited; witness oracles are dropped since they were
/// tuned for the original contact.
pub struct CanonicalContact<'a, A: ?Sized> {
    pub inner: &'a A,
    pub kind: CanonicalKind,
}

pub fn canonical_contact<A: RegionAlgebra + ?Sized>(inner: &A, kind: CanonicalKind) -> CanonicalContact<'_, A> {
    CanonicalContact { inner, kind }
}

impl<A: RegionAlgebra + ?Sized> RegionAlgebra for CanonicalContact<'_, A> {
    type Elem = A::Elem;

    fn carrier_kind(&self) -> CarrierKind {
        self.inner.carrier_kind()
    }
    fn zero(&self) -> A::Elem {
        self.inner.zero()
    }
    fn one(&self) -> A::Elem {
        self.inner.one()
    }
    fn join(&self, a: &A::Elem, b: &A::Elem) -> A::Elem {
        self.inner.join(a, b)
    }
    fn meet(&self, a: &A::Elem, b: &A::Elem) -> A::Elem {
        self.inner.meet(a, b)
    }
    fn complement(&self, a: &A::Elem) -> A::Elem {
        self.inner.complement(a)
    }
    fn leq(&self, a: &A::Elem, b: &A::Elem) -> bool {
        self.inner.leq(a, b)
    }
    fn contact(&self, a: &A::Elem, b: &A::Elem) -> bool {
        let zero = self.inner.zero();
        match self.kind {
            CanonicalKind::Smallest => self.inner.meet(a, b) != zero,
            CanonicalKind::Largest => *a != zero && *b != zero,
        }
    }
    fn bounded(&self, a: &A::Elem) -> bool {
        self.inner.bounded(a)
    }
    fn elements(&self) -> Option<Vec<A::Elem>> {
        self.inner.elements()
    }
    fn landmarks(&self) -> Vec<A::Elem> {
        self.inner.landmarks()
    }
    fn sample(&self, rng: &mut SampleRng) -> A::Elem {
        self.inner.sample(rng)
    }
    fn render(&self, a: &A::Elem) -> String {
        self.inner.render(a)
    }
}

/// The same carrier with contact replaced by `C_ρ`.
pub struct Alexandroff<'a, A: ?Sized> {
    pub inner: &'a A,
}

impl<A: RegionAlgebra + ?Sized> RegionAlgebra for Alexandroff<'_, A> {
    type Elem = A::Elem;

    fn carrier_kind(&self) -> CarrierKind {
        self.inner.carrier_kind()
    }
    fn zero(&self) -> A::Elem {
        self.inner.zero()
    }
    fn one(&self) -> A::Elem {
        self.inner.one()
    }
    fn join(&self, a: &A::Elem, b: &A::Elem) -> A::Elem {
        self.inner.join(a, b)
    }
    fn meet(&self, a: &A::Elem, b: &A::Elem) -> A::Elem {
        self.inner.meet(a, b)
    }
    fn complement(&self, a: &A::Elem) -> A::Elem {
        self.inner.complement(a)
    }
    fn leq(&self, a: &A::Elem, b: &A::Elem) -> bool {
        self.inner.leq(a, b)
    }
    fn contact(&self, a: &A::Elem, b: &A::Elem) -> bool {
        alexandroff_contact(self.inner, a, b)
    }
    fn bounded(&self, a: &A::Elem) -> bool {
        self.inner.bounded(a)
    }
    fn elements(&self) -> Option<Vec<A::Elem>> {
        self.inner.elements()
    }
    fn landmarks(&self) -> Vec<A::Elem> {
        self.inner.landmarks()
    }
    fn sample(&self, rng: &mut SampleRng) -> A::Elem {
        self.inner.sample(rng)
    }

    // For bounded a the inner interpolant works directly. Otherwise c* is
    // bounded and we interpolate on the complement side.
    fn interpolate(&self, a: &A::Elem, c: &A::Elem) -> Option<A::Elem> {
        if self.inner.bounded(a) {
            self.inner.interpolate(a, c)
        } else {
            let d = self.inner.interpolate(&self.inner.complement(c), &self.inner.complement(a))?;
            Some(self.inner.complement(&d))
        }
    }
    fn shrink_nonzero(&self, a: &A::Elem) -> Option<A::Elem> {
        self.inner.shrink_nonzero(a)
    }
    fn truncate(&self, b: &A::Elem, n: usize) -> Option<A::Elem> {
        self.inner.truncate(b, n)
    }
    fn way_above(&self, a: &A::Elem, rng: &mut SampleRng) -> Option<A::Elem> {
        self.inner.way_above(a, rng)
    }
    fn render(&self, a: &A::Elem) -> String {
        self.inner.render(a)
    }
}

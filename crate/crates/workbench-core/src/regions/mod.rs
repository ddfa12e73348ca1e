//! The two exactly representable infinite models and described maps.

pub mod interval;
pub mod maps;
pub mod nat;

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{RegionAlgebra, SampleRng};
use crate::error::{literal_error, Error, Result};

pub use interval::{Bound, Interval, IntervalModel, IntervalRegion};
pub use maps::{DescribedMap, NatMap, PlMap, StockMap, Tail};
pub use nat::{NatModel, NatRegion};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn pow2(k: usize) -> Q {
    Q::from_integer(BigInt::one() << k)
}

pub fn parse_rational(text: &str) -> Result<Q> {
    let t = text.trim();
    let parse_int = |s: &str| -> Result<BigInt> {
        s.trim().parse::<BigInt>().map_err(|_| literal_error(text, "expected an integer or p/q"))
    };
    match t.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(literal_error(text, "zero denominator"));
            }
            Ok(Q::new(parse_int(n)?, d))
        }
        None => Ok(Q::from_integer(parse_int(t)?)),
    }
}

pub fn fmt_rational(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A point of one of the stock spaces, as a symbolic cluster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymbolicCluster<P> {
    Point(P),
    Infinity,
}

/// Extra structure the stock models expose for pointwise reasoning.
pub trait StockModel: RegionAlgebra {
    type Point: Clone + Debug + PartialEq;

    fn contains_point(&self, r: &Self::Elem, x: &Self::Point) -> bool;

    /// Bounded regions `G_j ≪ r`, increasing in `j = 1..=depth`, whose join is `r`.
    fn lower_approximants(&self, r: &Self::Elem, depth: usize) -> Vec<Self::Elem>;

    /// Regions `H_j ≫ r`, decreasing in `j`, coinitial among regions way above `r`
    /// when `r` is bounded.
    fn upper_approximants(&self, r: &Self::Elem, depth: usize) -> Vec<Self::Elem>;

    fn sample_point(&self, rng: &mut SampleRng) -> Self::Point;

    fn render_point(&self, x: &Self::Point) -> String;

    fn cluster_membership(&self, sigma: &SymbolicCluster<Self::Point>, r: &Self::Elem) -> bool {
        match sigma {
            SymbolicCluster::Point(x) => self.contains_point(r, x),
            SymbolicCluster::Infinity => !self.bounded(r),
        }
    }
}

/// A region of either stock model, for callers that mix them dynamically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    Interval(IntervalRegion),
    Nat(NatRegion),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanOps {
    pub join: Region,
    pub meet: Region,
    pub complement: Region,
    pub leq: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContactFacts {
    pub contact: bool,
    pub bounded: bool,
    pub way_below: bool,
}

impl Region {
    pub fn boolean_ops(&self, other: &Region) -> Result<BooleanOps> {
        match (self, other) {
            (Region::Interval(a), Region::Interval(b)) => Ok(BooleanOps {
                join: Region::Interval(a.join(b)),
                meet: Region::Interval(a.meet(b)),
                complement: Region::Interval(a.complement()),
                leq: a.is_subset(b),
            }),
            (Region::Nat(a), Region::Nat(b)) => Ok(BooleanOps {
                join: Region::Nat(a.join(b)),
                meet: Region::Nat(a.meet(b)),
                complement: Region::Nat(a.complement()),
                leq: a.is_subset(b),
            }),
            _ => Err(Error::ModelMismatch),
        }
    }

    pub fn contact_bounded_waybelow(&self, other: &Region) -> Result<ContactFacts> {
        match (self, other) {
            (Region::Interval(a), Region::Interval(b)) => Ok(ContactFacts {
                contact: a.intersects(b),
                bounded: a.is_bounded(),
                way_below: a.inside_interior_of(b),
            }),
            (Region::Nat(a), Region::Nat(b)) => {
                Ok(ContactFacts { contact: a.intersects(b), bounded: a.is_bounded(), way_below: a.is_subset(b) })
            }
            _ => Err(Error::ModelMismatch),
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Region::Interval(r) => write!(f, "{r}"),
            Region::Nat(r) => write!(f, "{r}"),
        }
    }
}

/// Evaluates `φ_f(G) = cl(f⁻¹(int G))` for a described map and a region of
/// the matching model.
pub fn phi_from_map(f: &DescribedMap, g: &Region) -> Result<Region> {
    match (f, g) {
        (DescribedMap::Pl(m), Region::Interval(r)) => Ok(Region::Interval(m.phi(r))),
        (DescribedMap::Nat(m), Region::Nat(r)) => Ok(Region::Nat(m.phi(r))),
        _ => Err(Error::ModelMismatch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("1/3").unwrap(), q_frac(1, 3));
        assert_eq!(parse_rational("-4").unwrap(), q(-4));
        assert_eq!(parse_rational(" 6/4 ").unwrap(), q_frac(3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(fmt_rational(&q_frac(-1, 2)), "-1/2");
        assert_eq!(fmt_rational(&q(7)), "7");
    }

    #[test]
    fn mixed_models_are_rejected() {
        let a = Region::Interval(IntervalRegion::full());
        let b = Region::Nat(NatRegion::all());
        assert_eq!(a.boolean_ops(&b), Err(Error::ModelMismatch));
        assert_eq!(a.contact_bounded_waybelow(&b), Err(Error::ModelMismatch));
    }
}

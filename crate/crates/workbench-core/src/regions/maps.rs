//! Described continuous maps and the evaluator `φ_f(G) = cl(f⁻¹(int G))`.

use rand::Rng;

use super::interval::{Bound, Interval, IntervalModel, IntervalRegion};
use super::nat::{NatModel, NatRegion};
use super::{fmt_rational, q, StockModel, Q};
use crate::algebra::{RegionAlgebra, SampleRng};
use crate::error::{Error, Result};

/// A continuous self-map of one of the stock spaces with an exact
/// description.
pub trait StockMap: Clone {
    type Model: StockModel + Default;

    fn eval(&self, x: &<Self::Model as StockModel>::Point) -> <Self::Model as StockModel>::Point;

    /// `cl(f⁻¹(int G))`.
    fn phi(&self, g: &<Self::Model as RegionAlgebra>::Elem) -> <Self::Model as RegionAlgebra>::Elem;

    /// Up to `k` points `x` with `f(x) ∈ int G`; their set is dense in `φ_f(G)`.
    fn dense_points(
        &self,
        g: &<Self::Model as RegionAlgebra>::Elem,
        rng: &mut SampleRng,
        k: usize,
    ) -> Vec<<Self::Model as StockModel>::Point>;

    /// A bounded `a` with `b ≤ φ_f(a)`, for bounded `b`.
    fn cover(&self, b: &<Self::Model as RegionAlgebra>::Elem) -> Option<<Self::Model as RegionAlgebra>::Elem>;

    /// Preimages of bounded regions are bounded.
    fn is_proper(&self) -> bool;

    /// `g ∘ self`.
    fn then(&self, g: &Self) -> Self;

    fn describe(&self) -> String;
}

/// Continuous piecewise-linear `ℝ → ℝ`: values at increasing rational
/// breakpoints, linear in between, with explicit end slopes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlMap {
    xs: Vec<Q>,
    ys: Vec<Q>,
    left: Q,
    right: Q,
}

struct Piece {
    lo: Bound,
    hi: Bound,
    x0: Q,
    y0: Q,
    slope: Q,
}

impl PlMap {
    pub fn new(points: Vec<(Q, Q)>, left: Q, right: Q) -> Result<PlMap> {
        if points.is_empty() {
            return Err(Error::PreconditionViolated("a piecewise-linear map needs a breakpoint".into()));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::PreconditionViolated("breakpoints must strictly increase".into()));
        }
        let (xs, ys) = points.into_iter().unzip();
        Ok(PlMap { xs, ys, left, right })
    }

    pub fn identity() -> PlMap {
        Self::linear(q(1))
    }

    pub fn linear(slope: Q) -> PlMap {
        PlMap { xs: vec![q(0)], ys: vec![q(0)], left: slope.clone(), right: slope }
    }

    pub fn abs() -> PlMap {
        PlMap { xs: vec![q(0)], ys: vec![q(0)], left: q(-1), right: q(1) }
    }

    /// `max(0, 1 - |x|)`.
    pub fn hat() -> PlMap {
        PlMap { xs: vec![q(-1), q(0), q(1)], ys: vec![q(0), q(1), q(0)], left: q(0), right: q(0) }
    }

    pub fn constant(c: Q) -> PlMap {
        PlMap { xs: vec![q(0)], ys: vec![c], left: q(0), right: q(0) }
    }

    pub fn points(&self) -> impl Iterator<Item = (&Q, &Q)> {
        self.xs.iter().zip(&self.ys)
    }

    pub fn left_slope(&self) -> &Q {
        &self.left
    }

    pub fn right_slope(&self) -> &Q {
        &self.right
    }

    pub fn eval_q(&self, x: &Q) -> Q {
        let n = self.xs.len();
        if *x <= self.xs[0] {
            return &self.ys[0] + &self.left * (x - &self.xs[0]);
        }
        if *x >= self.xs[n - 1] {
            return &self.ys[n - 1] + &self.right * (x - &self.xs[n - 1]);
        }
        let i = self.xs.partition_point(|b| b <= x) - 1;
        let s = (&self.ys[i + 1] - &self.ys[i]) / (&self.xs[i + 1] - &self.xs[i]);
        &self.ys[i] + s * (x - &self.xs[i])
    }

    fn pieces(&self) -> Vec<Piece> {
        let n = self.xs.len();
        let mut out = Vec::with_capacity(n + 1);
        out.push(Piece {
            lo: Bound::NegInf,
            hi: Bound::Finite(self.xs[0].clone()),
            x0: self.xs[0].clone(),
            y0: self.ys[0].clone(),
            slope: self.left.clone(),
        });
        for i in 0..n - 1 {
            out.push(Piece {
                lo: Bound::Finite(self.xs[i].clone()),
                hi: Bound::Finite(self.xs[i + 1].clone()),
                x0: self.xs[i].clone(),
                y0: self.ys[i].clone(),
                slope: (&self.ys[i + 1] - &self.ys[i]) / (&self.xs[i + 1] - &self.xs[i]),
            });
        }
        out.push(Piece {
            lo: Bound::Finite(self.xs[n - 1].clone()),
            hi: Bound::PosInf,
            x0: self.xs[n - 1].clone(),
            y0: self.ys[n - 1].clone(),
            slope: self.right.clone(),
        });
        out
    }

    /// Closed intervals whose interiors lie in `f⁻¹((c, d))` and whose union
    /// has the same closure. Constant pieces contribute their whole domain
    /// exactly when their value lies in `(c, d)`.
    fn preimage_open(&self, c: &Bound, d: &Bound) -> Vec<Interval> {
        let zero = q(0);
        let mut out = Vec::new();
        for p in self.pieces() {
            let (lo, hi) = if p.slope == zero {
                let v = Bound::Finite(p.y0.clone());
                if *c < v && v < *d {
                    (p.lo.clone(), p.hi.clone())
                } else {
                    continue;
                }
            } else {
                let solve = |b: &Bound| match b {
                    Bound::Finite(y) => Bound::Finite(&p.x0 + (y - &p.y0) / &p.slope),
                    Bound::NegInf if p.slope > zero => Bound::NegInf,
                    Bound::NegInf => Bound::PosInf,
                    Bound::PosInf if p.slope > zero => Bound::PosInf,
                    Bound::PosInf => Bound::NegInf,
                };
                let (a, b) = if p.slope > zero { (solve(c), solve(d)) } else { (solve(d), solve(c)) };
                (a.max(p.lo.clone()), b.min(p.hi.clone()))
            };
            if lo < hi {
                out.push(Interval { lo, hi });
            }
        }
        out
    }

    fn preimage_parts(&self, g: &IntervalRegion) -> Vec<Interval> {
        g.parts().iter().flat_map(|p| self.preimage_open(&p.lo, &p.hi)).collect()
    }

    /// `[min f, max f]` over a bounded region; `None` for empty or unbounded input.
    pub fn image_hull(&self, b: &IntervalRegion) -> Option<(Q, Q)> {
        if b.is_empty() || !b.is_bounded() {
            return None;
        }
        let mut values = Vec::new();
        for p in b.parts() {
            let (lo, hi) = (p.lo.finite()?, p.hi.finite()?);
            values.push(self.eval_q(lo));
            values.push(self.eval_q(hi));
            values.extend(self.xs.iter().filter(|x| lo <= *x && *x <= hi).map(|x| self.eval_q(x)));
        }
        let min = values.iter().min()?.clone();
        let max = values.iter().max()?.clone();
        Some((min, max))
    }
}

fn interior_point(iv: &Interval, rng: &mut SampleRng) -> Q {
    let t = Q::new(rng.gen_range(1..8).into(), 8.into());
    match (&iv.lo, &iv.hi) {
        (Bound::Finite(l), Bound::Finite(h)) => l + (h - l) * t,
        (Bound::NegInf, Bound::Finite(h)) => h - t * q(16),
        (Bound::Finite(l), Bound::PosInf) => l + t * q(16),
        _ => (t - Q::new(1.into(), 2.into())) * q(32),
    }
}

impl StockMap for PlMap {
    type Model = IntervalModel;

    fn eval(&self, x: &Q) -> Q {
        self.eval_q(x)
    }

    fn phi(&self, g: &IntervalRegion) -> IntervalRegion {
        IntervalRegion::normalize(self.preimage_parts(g).into_iter().map(|i| (i.lo, i.hi)).collect())
            .expect("preimage pieces are well formed")
    }

    fn dense_points(&self, g: &IntervalRegion, rng: &mut SampleRng, k: usize) -> Vec<Q> {
        let parts = self.preimage_parts(g);
        if parts.is_empty() {
            return Vec::new();
        }
        (0..k).map(|_| interior_point(&parts[rng.gen_range(0..parts.len())], rng)).collect()
    }

    fn cover(&self, b: &IntervalRegion) -> Option<IntervalRegion> {
        if b.is_empty() {
            return Some(IntervalRegion::empty());
        }
        let (lo, hi) = self.image_hull(b)?;
        IntervalRegion::closed(lo - q(1), hi + q(1)).ok()
    }

    fn is_proper(&self) -> bool {
        self.left != q(0) && self.right != q(0)
    }

    fn then(&self, g: &PlMap) -> PlMap {
        let zero = q(0);
        let mut xs = self.xs.clone();
        for p in self.pieces() {
            if p.slope == zero {
                continue;
            }
            for beta in &g.xs {
                let x = &p.x0 + (beta - &p.y0) / &p.slope;
                let b = Bound::Finite(x.clone());
                if p.lo <= b && b <= p.hi {
                    xs.push(x);
                }
            }
        }
        xs.sort();
        xs.dedup();
        let ys = xs.iter().map(|x| g.eval_q(&self.eval_q(x))).collect();
        let end_slope = |s: &Q, toward_neg: bool| -> Q {
            // As x leaves the breakpoints, f(x) runs to -∞ or +∞ monotonically.
            if *s == zero {
                zero.clone()
            } else if (*s > zero) == toward_neg {
                &g.left * s
            } else {
                &g.right * s
            }
        };
        let left = end_slope(&self.left, true);
        let right = end_slope(&self.right, false);
        PlMap { xs, ys, left, right }
    }

    fn describe(&self) -> String {
        let pts: Vec<String> =
            self.points().map(|(x, y)| format!("({},{})", fmt_rational(x), fmt_rational(y))).collect();
        format!("pl[{}; left {}, right {}]", pts.join(" "), fmt_rational(&self.left), fmt_rational(&self.right))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    /// `n ↦ n + k`.
    Shift(u64),
    /// `n ↦ c`.
    Constant(u64),
}

/// `ℕ → ℕ` given by a table on `[0, N)` and a tail rule beyond it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NatMap {
    table: Vec<u64>,
    tail: Tail,
}

impl NatMap {
    pub fn new(table: Vec<u64>, tail: Tail) -> NatMap {
        NatMap { table, tail }
    }

    pub fn shift(k: u64) -> NatMap {
        NatMap::new(Vec::new(), Tail::Shift(k))
    }

    pub fn constant(c: u64) -> NatMap {
        NatMap::new(Vec::new(), Tail::Constant(c))
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn eval_n(&self, n: u64) -> u64 {
        match self.table.get(n as usize) {
            Some(&v) => v,
            None => match self.tail {
                Tail::Shift(k) => n + k,
                Tail::Constant(c) => c,
            },
        }
    }

    /// Exact preimage; the discrete topology makes `φ_f` the plain preimage.
    pub fn preimage(&self, g: &NatRegion) -> NatRegion {
        match g {
            NatRegion::Cofinite(t) => self.preimage(&NatRegion::Finite(t.clone())).complement(),
            NatRegion::Finite(s) => {
                let n = self.table.len() as u64;
                let head = (0..n).filter(|&i| g.contains(self.table[i as usize]));
                match self.tail {
                    Tail::Shift(k) => {
                        let tail = s.iter().filter(|&&v| v >= k && v - k >= n).map(|&v| v - k);
                        NatRegion::finite(head.chain(tail))
                    }
                    Tail::Constant(c) if g.contains(c) => {
                        NatRegion::cofinite((0..n).filter(|&i| !g.contains(self.table[i as usize])))
                    }
                    Tail::Constant(_) => NatRegion::finite(head),
                }
            }
        }
    }
}

impl StockMap for NatMap {
    type Model = NatModel;

    fn eval(&self, x: &u64) -> u64 {
        self.eval_n(*x)
    }

    fn phi(&self, g: &NatRegion) -> NatRegion {
        self.preimage(g)
    }

    fn dense_points(&self, g: &NatRegion, rng: &mut SampleRng, k: usize) -> Vec<u64> {
        match self.preimage(g) {
            NatRegion::Finite(s) if s.is_empty() => Vec::new(),
            NatRegion::Finite(s) => (0..k).map(|_| s[rng.gen_range(0..s.len())]).collect(),
            u => (0..k)
                .map(|_| loop {
                    let x = rng.gen_range(0..200);
                    if u.contains(x) {
                        break x;
                    }
                })
                .collect(),
        }
    }

    fn cover(&self, b: &NatRegion) -> Option<NatRegion> {
        match b {
            NatRegion::Finite(s) => Some(NatRegion::finite(s.iter().map(|&x| self.eval_n(x)))),
            NatRegion::Cofinite(_) => None,
        }
    }

    fn is_proper(&self) -> bool {
        matches!(self.tail, Tail::Shift(_))
    }

    fn then(&self, g: &NatMap) -> NatMap {
        let n = self.table.len().max(g.table.len());
        let table = (0..n as u64).map(|i| g.eval_n(self.eval_n(i))).collect();
        let tail = match (&self.tail, &g.tail) {
            (Tail::Constant(c), _) => Tail::Constant(g.eval_n(*c)),
            (Tail::Shift(_), Tail::Constant(c)) => Tail::Constant(*c),
            (Tail::Shift(k), Tail::Shift(j)) => Tail::Shift(k + j),
        };
        NatMap { table, tail }
    }

    fn describe(&self) -> String {
        let tail = match self.tail {
            Tail::Shift(k) => format!("shift {k}"),
            Tail::Constant(c) => format!("constant {c}"),
        };
        format!("nat{:?}; {tail}", self.table)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DescribedMap {
    Nat(NatMap),
    Pl(PlMap),
}

impl DescribedMap {
    pub fn is_proper(&self) -> bool {
        match self {
            DescribedMap::Nat(m) => m.is_proper(),
            DescribedMap::Pl(m) => m.is_proper(),
        }
    }
}

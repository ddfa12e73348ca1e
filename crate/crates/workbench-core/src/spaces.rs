//! Finite topological spaces given by their open sets, and their algebras
//! of regular closed sets.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::finite::{Element, FiniteLca, MAX_ATOMS};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    points: Vec<String>,
    /// Sorted, duplicate-free.
    opens: Vec<Bits>,
}

impl FiniteSpace {
    /// Checks that `opens` contains `∅` and the whole space and is closed
    /// under binary union and intersection.
    pub fn validate(points: Vec<String>, opens: Vec<Bits>) -> Result<FiniteSpace> {
        assert!(points.len() <= 64, "at most 64 points");
        let full = Bits::full(points.len());
        let mut opens = opens;
        opens.sort();
        opens.dedup();
        let space = FiniteSpace { points, opens };
        if let Some(bad) = space.opens.iter().find(|u| !u.is_subset(full)) {
            return Err(Error::NotATopology {
                law: "open sets lie in the space",
                left: space.names(*bad),
                right: vec![],
            });
        }
        if !space.is_open(Bits::EMPTY) {
            return Err(Error::NotATopology { law: "contains the empty set", left: vec![], right: vec![] });
        }
        if !space.is_open(full) {
            return Err(Error::NotATopology {
                law: "contains the whole space",
                left: space.names(full),
                right: vec![],
            });
        }
        for &u in &space.opens {
            for &v in &space.opens {
                if !space.is_open(u.union(v)) {
                    return Err(Error::NotATopology {
                        law: "closed under union",
                        left: space.names(u),
                        right: space.names(v),
                    });
                }
                if !space.is_open(u.intersection(v)) {
                    return Err(Error::NotATopology {
                        law: "closed under intersection",
                        left: space.names(u),
                        right: space.names(v),
                    });
                }
            }
        }
        Ok(space)
    }

    pub fn discrete(points: Vec<String>) -> FiniteSpace {
        let n = points.len();
        assert!(n <= 16, "discrete spaces are materialized extensionally");
        let opens = (0..1u64 << n).map(Bits).collect();
        FiniteSpace { points, opens }
    }

    /// Points `x0, x1, ..` with the discrete topology.
    pub fn discrete_n(n: usize) -> FiniteSpace {
        Self::discrete((0..n).map(|i| format!("x{i}")).collect())
    }

    pub fn sierpinski() -> FiniteSpace {
        Self::validate(vec!["a".into(), "b".into()], vec![Bits(0), Bits(1), Bits(3)]).expect("valid")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn opens(&self) -> &[Bits] {
        &self.opens
    }

    pub fn full(&self) -> Bits {
        Bits::full(self.points.len())
    }

    pub fn point_index(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    pub fn names(&self, s: Bits) -> Vec<String> {
        s.iter().map(|i| self.points[i].clone()).collect()
    }

    pub fn is_open(&self, s: Bits) -> bool {
        self.opens.binary_search(&s).is_ok()
    }

    pub fn is_closed(&self, s: Bits) -> bool {
        self.is_open(self.full().difference(s))
    }

    pub fn interior(&self, s: Bits) -> Bits {
        self.opens.iter().filter(|u| u.is_subset(s)).fold(Bits::EMPTY, |acc, u| acc.union(*u))
    }

    pub fn closure(&self, s: Bits) -> Bits {
        let full = self.full();
        full.difference(self.interior(full.difference(s)))
    }

    pub fn is_regular_closed(&self, s: Bits) -> bool {
        self.closure(self.interior(s)) == s
    }

    /// No clopen set other than `∅` and the whole space. The empty space
    /// counts as connected.
    pub fn is_connected(&self) -> bool {
        let full = self.full();
        self.opens.iter().all(|&u| u.is_empty() || u == full || !self.is_closed(u))
    }

    /// Any two distinct points have disjoint open neighbourhoods.
    pub fn is_hausdorff(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| {
            (0..n).filter(|&y| y != x).all(|y| {
                self.opens
                    .iter()
                    .filter(|u| u.contains(x))
                    .any(|u| self.opens.iter().any(|v| v.contains(y) && !u.intersects(*v)))
            })
        })
    }

    /// The subspace on `keep`, with points renumbered in increasing order.
    pub fn subspace(&self, keep: Bits) -> FiniteSpace {
        let idx: Vec<usize> = keep.to_vec();
        let points = idx.iter().map(|&i| self.points[i].clone()).collect();
        let mut opens: Vec<Bits> = self.opens.iter().map(|u| restrict(*u, &idx)).collect();
        opens.sort();
        opens.dedup();
        FiniteSpace { points, opens }
    }

    /// `{cl(U) : U open}`, which is exactly the family of regular closed sets.
    pub fn regular_closed_sets(&self) -> Vec<Bits> {
        let mut out: Vec<Bits> = self.opens.iter().map(|&u| self.closure(u)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// `{int(cl(U)) : U open}`.
    pub fn regular_open_sets(&self) -> Vec<Bits> {
        let mut out: Vec<Bits> = self.opens.iter().map(|&u| self.interior(self.closure(u))).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Every topology on `n` labelled points, by filtering all families of
    /// subsets. Practical for `n ≤ 3`.
    pub fn all_topologies(n: usize) -> Vec<FiniteSpace> {
        assert!(n <= 3, "labelled topology sweep is limited to 3 points");
        let subsets = 1usize << n;
        let points: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        (0u64..1u64 << subsets)
            .filter_map(|family| {
                let opens = Bits(family).iter().map(|s| Bits(s as u64)).collect();
                FiniteSpace::validate(points.clone(), opens).ok()
            })
            .collect()
    }
}

/// Renumbers `s ∩ idx` into positions of `idx`.
fn restrict(s: Bits, idx: &[usize]) -> Bits {
    idx.iter().enumerate().filter(|(_, &i)| s.contains(i)).map(|(k, _)| k).collect()
}

fn lift(s: Bits, idx: &[usize]) -> Bits {
    s.iter().map(|k| idx[k]).collect()
}

/// A map between finite spaces, as a point assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceMap {
    pub from: FiniteSpace,
    pub to: FiniteSpace,
    pub assign: Vec<usize>,
}

impl SpaceMap {
    /// Checks totality and that preimages of open sets are open.
    pub fn new(from: FiniteSpace, to: FiniteSpace, assign: Vec<usize>) -> Result<SpaceMap> {
        if assign.len() != from.len() || assign.iter().any(|&y| y >= to.len()) {
            return Err(Error::PreconditionViolated("map must send every point to a point of the target".into()));
        }
        let m = SpaceMap { from, to, assign };
        for &v in m.to.opens() {
            if !m.from.is_open(m.preimage(v)) {
                return Err(Error::NotContinuous(m.to.names(v)));
            }
        }
        Ok(m)
    }

    pub fn preimage(&self, s: Bits) -> Bits {
        (0..self.from.len()).filter(|&x| s.contains(self.assign[x])).collect()
    }

    pub fn image(&self, s: Bits) -> Bits {
        s.iter().map(|x| self.assign[x]).collect()
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &SpaceMap) -> Result<SpaceMap> {
        if self.to != g.from {
            return Err(Error::NotComposable);
        }
        let assign = self.assign.iter().map(|&y| g.assign[y]).collect();
        Ok(SpaceMap { from: self.from.clone(), to: g.to.clone(), assign })
    }

    pub fn identity(x: &FiniteSpace) -> SpaceMap {
        SpaceMap { from: x.clone(), to: x.clone(), assign: (0..x.len()).collect() }
    }

    /// Every map between two discrete spaces.
    pub fn all_between(from: &FiniteSpace, to: &FiniteSpace) -> Vec<SpaceMap> {
        let (n, m) = (from.len(), to.len());
        if m == 0 {
            return if n == 0 { vec![SpaceMap { from: from.clone(), to: to.clone(), assign: vec![] }] } else { vec![] };
        }
        let total = m.pow(n as u32);
        (0..total)
            .filter_map(|mut k| {
                let assign = (0..n)
                    .map(|_| {
                        let y = k % m;
                        k /= m;
                        y
                    })
                    .collect();
                SpaceMap::new(from.clone(), to.clone(), assign).ok()
            })
            .collect()
    }
}

/// `RC(X)` with intersection contact; every element is bounded since
/// finite sets are compact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularClosedAlgebra {
    space: FiniteSpace,
    /// Minimal nonzero regular closed sets; element masks index into these.
    atoms: Vec<Bits>,
    lca: FiniteLca,
}

pub fn rc_algebra(x: &FiniteSpace) -> Result<RegularClosedAlgebra> {
    let rc = x.regular_closed_sets();
    let atoms: Vec<Bits> = rc
        .iter()
        .copied()
        .filter(|a| !a.is_empty() && !rc.iter().any(|b| !b.is_empty() && b != a && b.is_subset(*a)))
        .collect();
    if atoms.len() > MAX_ATOMS {
        return Err(Error::AtomCountOutOfRange(atoms.len()));
    }
    debug_assert_eq!(rc.len(), 1 << atoms.len(), "a finite Boolean algebra has 2^atoms elements");
    let names = atoms.iter().map(|a| x.names(*a).join(".")).collect();
    let n = 1usize << atoms.len();
    let pts = |e: usize| -> Bits { Bits(e as u64).iter().fold(Bits::EMPTY, |acc, i| acc.union(atoms[i])) };
    let contact = (0..n).map(|a| (0..n).filter(|&b| pts(a).intersects(pts(b))).collect()).collect();
    let lca = FiniteLca::from_relation(names, contact, Bits::full(n))?;
    Ok(RegularClosedAlgebra { space: x.clone(), atoms, lca })
}

impl RegularClosedAlgebra {
    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn lca(&self) -> &FiniteLca {
        &self.lca
    }

    pub fn into_lca(self) -> FiniteLca {
        self.lca
    }

    pub fn atoms(&self) -> &[Bits] {
        &self.atoms
    }

    /// The regular closed set an element stands for.
    pub fn to_points(&self, e: Element) -> Bits {
        Bits(e as u64).iter().fold(Bits::EMPTY, |acc, i| acc.union(self.atoms[i]))
    }

    /// The element for a point set, when that set is regular closed.
    pub fn from_points(&self, s: Bits) -> Option<Element> {
        let e: Element =
            self.atoms.iter().enumerate().filter(|(_, a)| a.is_subset(s)).fold(0, |acc, (i, _)| acc | 1 << i);
        (self.to_points(e) == s).then_some(e)
    }

    /// All regular closed sets, indexed by element.
    pub fn point_sets(&self) -> Vec<Bits> {
        (0..self.lca.element_count() as Element).map(|e| self.to_points(e)).collect()
    }
}

/// The restriction and extension maps between `RC(Y)` and `RC(X)` for a
/// dense subspace `X ⊆ Y`, with the outcome of checking that they are
/// mutually inverse Boolean isomorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseIso {
    pub rc_y: RegularClosedAlgebra,
    pub rc_x: RegularClosedAlgebra,
    /// `r(F) = F ∩ X`, indexed by elements of `RC(Y)`.
    pub r: Vec<Element>,
    /// `e(G) = cl_Y(G)`, indexed by elements of `RC(X)`.
    pub e: Vec<Element>,
    pub failures: Vec<String>,
}

impl DenseIso {
    pub fn verified(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn dense_subspace_iso(y: &FiniteSpace, keep: Bits) -> Result<DenseIso> {
    let closure = y.closure(keep);
    if closure != y.full() {
        return Err(Error::NotDense { closure: y.names(closure) });
    }
    let idx = keep.to_vec();
    let x = y.subspace(keep);
    let rc_y = rc_algebra(y)?;
    let rc_x = rc_algebra(&x)?;
    let mut failures = Vec::new();
    let mut r = Vec::new();
    for f in 0..rc_y.lca().element_count() as Element {
        let trace = restrict(rc_y.to_points(f), &idx);
        match rc_x.from_points(trace) {
            Some(g) => r.push(g),
            None => {
                failures.push(format!("F ∩ X is not regular closed for F = {:?}", y.names(rc_y.to_points(f))));
                r.push(0);
            }
        }
    }
    let mut e = Vec::new();
    for g in 0..rc_x.lca().element_count() as Element {
        let cl = y.closure(lift(rc_x.to_points(g), &idx));
        match rc_y.from_points(cl) {
            Some(f) => e.push(f),
            None => {
                failures.push(format!("cl_Y(G) is not regular closed for G = {:?}", x.names(rc_x.to_points(g))));
                e.push(0);
            }
        }
    }
    if failures.is_empty() {
        check_boolean_iso(rc_y.lca(), rc_x.lca(), &r, "r", &mut failures);
        check_boolean_iso(rc_x.lca(), rc_y.lca(), &e, "e", &mut failures);
        for (f, &g) in r.iter().enumerate() {
            if e[g as usize] != f as Element {
                failures.push(format!("e(r(F)) ≠ F at element {f}"));
            }
        }
        for (g, &f) in e.iter().enumerate() {
            if r[f as usize] != g as Element {
                failures.push(format!("r(e(G)) ≠ G at element {g}"));
            }
        }
    }
    Ok(DenseIso { rc_y, rc_x, r, e, failures })
}

/// Records every way `h` fails to be a bijective Boolean homomorphism.
pub fn check_boolean_iso(src: &FiniteLca, tgt: &FiniteLca, h: &[Element], name: &str, failures: &mut Vec<String>) {
    use crate::algebra::RegionAlgebra;
    let mut seen: Vec<Element> = h.to_vec();
    seen.sort();
    seen.dedup();
    if seen.len() != h.len() || h.len() != tgt.element_count() {
        failures.push(format!("{name} is not a bijection"));
    }
    let n = src.element_count() as Element;
    for a in 0..n {
        if h[src.complement(&a) as usize] != tgt.complement(&h[a as usize]) {
            failures.push(format!("{name} does not preserve complement at {}", src.render(&a)));
        }
        for b in 0..n {
            if h[(a | b) as usize] != h[a as usize] | h[b as usize] {
                failures.push(format!("{name} does not preserve join at {}, {}", src.render(&a), src.render(&b)));
            }
            if h[(a & b) as usize] != h[a as usize] & h[b as usize] {
                failures.push(format!("{name} does not preserve meet at {}, {}", src.render(&a), src.render(&b)));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{canonical_contact, CanonicalKind, RegionAlgebra};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn topology_validation() {
        assert!(FiniteSpace::validate(names(&["a", "b"]), vec![Bits(0), Bits(1), Bits(3)]).is_ok());
        let err = FiniteSpace::validate(names(&["a", "b"]), vec![Bits(0), Bits(1), Bits(2)]).unwrap_err();
        assert!(matches!(err, Error::NotATopology { .. }));
        let err = FiniteSpace::validate(
            names(&["a", "b"]),
            vec![Bits(0), Bits(1), Bits(2), Bits(3)].into_iter().filter(|b| b.0 != 0).collect(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotATopology { law: "contains the empty set", .. }));
        assert!(FiniteSpace::validate(names(&["a", "b", "c"]), (0..8).map(Bits).collect()).is_ok());
    }

    #[test]
    fn regular_closed_algebras() {
        let s = rc_algebra(&FiniteSpace::sierpinski()).unwrap();
        assert_eq!(s.point_sets(), vec![Bits(0), Bits(3)]);
        let d = rc_algebra(&FiniteSpace::discrete_n(2)).unwrap();
        assert_eq!(d.lca().element_count(), 4);
        let rs = canonical_contact(d.lca(), CanonicalKind::Smallest);
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(d.lca().contact(&a, &b), rs.contact(&a, &b));
            }
        }
        let one = rc_algebra(&FiniteSpace::discrete_n(1)).unwrap();
        assert_eq!(one.lca().element_count(), 2);
        for &f in &d.point_sets() {
            assert!(d.space().is_regular_closed(f));
        }
    }

    #[test]
    fn connectedness() {
        assert!(FiniteSpace::sierpinski().is_connected());
        assert!(!FiniteSpace::discrete_n(2).is_connected());
        assert!(FiniteSpace::discrete_n(0).is_connected());
    }

    #[test]
    fn topology_counts() {
        let counts: Vec<usize> = (0..=3).map(|n| FiniteSpace::all_topologies(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29]);
    }

    #[test]
    fn dense_subspaces() {
        let y = FiniteSpace::sierpinski();
        let iso = dense_subspace_iso(&y, Bits(1)).unwrap();
        assert!(iso.verified(), "{:?}", iso.failures);
        assert_eq!(iso.rc_x.lca().element_count(), 2);
        let same = dense_subspace_iso(&y, y.full()).unwrap();
        assert!(same.verified());
        assert_eq!(same.r, vec![0, 1]);
        assert_eq!(same.e, vec![0, 1]);
        assert!(matches!(dense_subspace_iso(&y, Bits(2)), Err(Error::NotDense { .. })));
    }

    #[test]
    fn continuity_is_checked() {
        let s = FiniteSpace::sierpinski();
        let d = FiniteSpace::discrete_n(2);
        assert!(SpaceMap::new(s.clone(), s.clone(), vec![0, 1]).is_ok());
        assert!(matches!(SpaceMap::new(s.clone(), d, vec![0, 1]), Err(Error::NotContinuous(_))));
        assert!(SpaceMap::new(s.clone(), s, vec![1, 0]).is_err());
    }

    #[test]
    fn hausdorff_means_discrete_here() {
        for n in 0..=3 {
            for x in FiniteSpace::all_topologies(n) {
                assert_eq!(x.is_hausdorff(), x.opens().len() == 1 << n);
            }
        }
    }
}

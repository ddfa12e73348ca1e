//! Finite Boolean algebras `P(atoms)` with an explicit contact table and a
//! bounded ideal, plus exact cluster enumeration.
//!
//! Elements are atom bit masks; element sets are [`Bits`] over element
//! indices, so at most five atoms (32 elements) are supported.

use rand::Rng;

use crate::algebra::{Alexandroff, CarrierKind, RegionAlgebra, SampleRng};
use crate::axioms::{check_axioms, QuantifierStrategy, Suite};
use crate::bits::Bits;
use crate::error::{literal_error, Error, Result};

pub type Element = u32;

pub const MAX_ATOMS: usize = 5;
pub const BRUTE_MAX_ATOMS: usize = 4;
const DEFAULT_NAMES: [&str; MAX_ATOMS] = ["p", "q", "r", "s", "t"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLca {
    atom_names: Vec<String>,
    /// Row `a` is the set of elements in contact with `a`.
    contact: Vec<Bits>,
    bounded: Bits,
    /// Atom adjacency rows when the contact came from a graph.
    adjacency: Option<Vec<Bits>>,
}

pub fn default_atom_names(n: usize) -> Vec<String> {
    DEFAULT_NAMES.iter().take(n).map(|s| s.to_string()).collect()
}

/// Builds `P(atoms)` whose contact is the graph extension of `adjacency`
/// and whose bounded ideal is `↓b₀` with `b₀` the join of `bound_atoms`.
pub fn make_finite_lca(atom_count: usize, adjacency: &[Vec<bool>], bound_atoms: Element) -> Result<FiniteLca> {
    if atom_count > MAX_ATOMS {
        return Err(Error::AtomCountOutOfRange(atom_count));
    }
    FiniteLca::from_graph(default_atom_names(atom_count), adjacency, bound_atoms)
}

impl FiniteLca {
    pub fn from_graph(atom_names: Vec<String>, adjacency: &[Vec<bool>], bound_atoms: Element) -> Result<FiniteLca> {
        let n = atom_names.len();
        if n > MAX_ATOMS {
            return Err(Error::AtomCountOutOfRange(n));
        }
        if adjacency.len() != n {
            return Err(Error::InvalidAdjacency { row: adjacency.len(), col: 0, reason: format!("expected {n} rows") });
        }
        for (i, row) in adjacency.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidAdjacency {
                    row: i,
                    col: row.len(),
                    reason: format!("expected {n} columns"),
                });
            }
            if !row[i] {
                return Err(Error::InvalidAdjacency { row: i, col: i, reason: "not reflexive".into() });
            }
            for (j, &cell) in row.iter().enumerate() {
                if cell != adjacency[j][i] {
                    return Err(Error::InvalidAdjacency { row: i, col: j, reason: "not symmetric".into() });
                }
            }
        }
        let full = Bits::full(n).0 as Element;
        if bound_atoms & !full != 0 {
            return Err(literal_error(&format!("{bound_atoms:#b}"), "bound atoms outside the atom set"));
        }
        let adj: Vec<Bits> =
            adjacency.iter().map(|row| row.iter().enumerate().filter(|(_, &c)| c).map(|(j, _)| j).collect()).collect();
        let elements = 1usize << n;
        let neighbourhood =
            |a: Element| -> Element { Bits(a as u64).iter().fold(0, |acc, p| acc | adj[p].0 as Element) };
        let contact = (0..elements as Element)
            .map(|a| {
                let nb = neighbourhood(a);
                (0..elements as Element).filter(|&b| nb & b != 0).map(|b| b as usize).collect()
            })
            .collect();
        let bounded = (0..elements as Element).filter(|&a| a & !bound_atoms == 0).map(|a| a as usize).collect();
        Ok(FiniteLca { atom_names, contact, bounded, adjacency: Some(adj) })
    }

    /// Every reflexive symmetric adjacency on `n` atoms with every choice
    /// of bound atoms.
    pub fn sweep(n: usize) -> Vec<FiniteLca> {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let mut out = Vec::new();
        for edges in 0u32..1 << pairs.len() {
            let mut adj: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
            for (k, &(i, j)) in pairs.iter().enumerate() {
                if edges >> k & 1 == 1 {
                    adj[i][j] = true;
                    adj[j][i] = true;
                }
            }
            for bound in 0..1 << n {
                out.push(make_finite_lca(n, &adj, bound).expect("sweep adjacency is valid"));
            }
        }
        out
    }

    /// A structure with an arbitrary contact table; no axioms are assumed.
    pub fn from_relation(atom_names: Vec<String>, contact: Vec<Bits>, bounded: Bits) -> Result<FiniteLca> {
        let n = atom_names.len();
        if n > MAX_ATOMS {
            return Err(Error::AtomCountOutOfRange(n));
        }
        assert_eq!(contact.len(), 1 << n, "contact table needs one row per element");
        Ok(FiniteLca { atom_names, contact, bounded, adjacency: None })
    }

    /// `P(n)` with `ρ_s` and every element bounded.
    pub fn discrete(n: usize) -> FiniteLca {
        let adj: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
        make_finite_lca(n, &adj, Bits::full(n).0 as Element).expect("diagonal adjacency is valid")
    }

    /// `P(n)` with `ρ_l` and every element bounded.
    pub fn complete_graph(n: usize) -> FiniteLca {
        let adj = vec![vec![true; n]; n];
        make_finite_lca(n, &adj, Bits::full(n).0 as Element).expect("complete adjacency is valid")
    }

    pub fn atom_count(&self) -> usize {
        self.atom_names.len()
    }

    pub fn element_count(&self) -> usize {
        1 << self.atom_count()
    }

    pub fn atom_names(&self) -> &[String] {
        &self.atom_names
    }

    pub fn top(&self) -> Element {
        Bits::full(self.atom_count()).0 as Element
    }

    pub fn atom(&self, i: usize) -> Element {
        1 << i
    }

    pub fn all_elements(&self) -> Bits {
        Bits::full(self.element_count())
    }

    pub fn bounded_set(&self) -> Bits {
        self.bounded
    }

    pub fn contact_row(&self, a: Element) -> Bits {
        self.contact[a as usize]
    }

    pub fn adjacency(&self) -> Option<&[Bits]> {
        self.adjacency.as_deref()
    }

    /// Atoms below the largest bounded element, when IB is principal.
    pub fn bound_atoms(&self) -> Element {
        self.bounded.iter().fold(0, |acc, e| acc | e as Element)
    }

    pub fn is_full_bound(&self) -> bool {
        self.bounded.contains(self.top() as usize)
    }

    pub fn element_set_to_vec(&self, s: Bits) -> Vec<Element> {
        s.iter().map(|e| e as Element).collect()
    }

    pub fn render_set(&self, s: Bits) -> String {
        let parts: Vec<String> = s.iter().map(|e| self.render(&(e as Element))).collect();
        format!("{{{}}}", parts.join(", "))
    }

    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let t = text.trim();
        match t {
            "0" | "{}" => return Ok(0),
            "1" => return Ok(self.top()),
            _ => {}
        }
        let inner = t.strip_prefix('{').and_then(|s| s.strip_suffix('}')).unwrap_or(t);
        let mut e = 0;
        for name in inner.split(['+', ',']) {
            let name = name.trim();
            let i = self
                .atom_names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| literal_error(text, format!("unknown atom {name:?}")))?;
            e |= 1 << i;
        }
        Ok(e)
    }

    fn rows(&self, choice: ContactChoice) -> Vec<Bits> {
        match choice {
            ContactChoice::Rho => self.contact.clone(),
            ContactChoice::Alexandroff => {
                let unbounded = self.all_elements().difference(self.bounded);
                (0..self.element_count())
                    .map(|a| if self.bounded.contains(a) { self.contact[a] } else { self.contact[a].union(unbounded) })
                    .collect()
            }
        }
    }

    pub fn contact_with(&self, choice: ContactChoice, a: Element, b: Element) -> bool {
        match choice {
            ContactChoice::Rho => self.contact(&a, &b),
            ContactChoice::Alexandroff => crate::algebra::alexandroff_contact(self, &a, &b),
        }
    }

    /// The first of (K1), (K2), (K3) violated by `sigma`, if any.
    pub fn cluster_violation(&self, sigma: Bits, choice: ContactChoice) -> Result<Option<ClusterAxiom>> {
        if sigma.is_empty() {
            return Err(Error::EmptyCandidate);
        }
        Ok(cluster_violation_rows(&self.rows(choice), self.element_count(), sigma))
    }

    pub fn is_cluster(&self, sigma: Bits, choice: ContactChoice) -> Result<bool> {
        Ok(self.cluster_violation(sigma, choice)?.is_none())
    }

    /// `σ_u = {a : aCb for every b ≥ p}` for the principal ultrafilter at `p`.
    pub fn cluster_from_ultrafilter(&self, atom: Element, choice: ContactChoice) -> Result<Bits> {
        if atom.count_ones() != 1 || atom & !self.top() != 0 {
            return Err(Error::NotAnAtom(self.render(&atom)));
        }
        let rows = self.rows(choice);
        let ultrafilter: Vec<usize> = (0..self.element_count()).filter(|&b| b as Element & atom != 0).collect();
        Ok((0..self.element_count()).filter(|&a| ultrafilter.iter().all(|&b| rows[a].contains(b))).collect())
    }

    pub fn enumerate_clusters(&self, mode: ClusterMode, choice: ContactChoice) -> Result<ClusterSet> {
        let mut warning = None;
        let mut clusters = match mode {
            ClusterMode::Brute => {
                if self.atom_count() > BRUTE_MAX_ATOMS {
                    return Err(Error::TooLargeForBrute { atoms: self.atom_count(), limit: BRUTE_MAX_ATOMS });
                }
                let rows = self.rows(choice);
                let n = self.element_count();
                (1u64..1u64 << n)
                    .map(Bits)
                    .filter(|&s| cluster_violation_rows(&rows, n, s).is_none())
                    .collect::<Vec<_>>()
            }
            ClusterMode::Ultrafilter => {
                let nca = match choice {
                    ContactChoice::Rho => check_axioms(self, Suite::Nca, &QuantifierStrategy::exhaustive())?,
                    ContactChoice::Alexandroff => {
                        check_axioms(&Alexandroff { inner: self }, Suite::Nca, &QuantifierStrategy::exhaustive())?
                    }
                };
                if !nca.all_hold() {
                    warning = Some(Error::PreconditionViolated(
                        "UltrafilterModeUnsound: the NCA suite fails, so ultrafilter traces need not be clusters"
                            .into(),
                    ));
                }
                let mut out = Vec::new();
                for i in 0..self.atom_count() {
                    let s = self.cluster_from_ultrafilter(self.atom(i), choice)?;
                    if !s.is_empty() {
                        out.push(s);
                    }
                }
                out
            }
        };
        canonical_sort(&mut clusters);
        clusters.dedup();
        let bounded = clusters.iter().map(|s| s.intersects(self.bounded)).collect();
        Ok(ClusterSet { clusters, bounded, warning })
    }

    /// `B ∖ IB` together with the first (K1)–(K3) failure for `C_ρ`, if any.
    pub fn sigma_infinity(&self) -> Result<SigmaInfinity> {
        if self.is_full_bound() {
            return Err(Error::BoundedTop);
        }
        let sigma = self.all_elements().difference(self.bounded);
        let failing = self.cluster_violation(sigma, ContactChoice::Alexandroff)?;
        Ok(SigmaInfinity { sigma, failing })
    }
}

fn cluster_violation_rows(rows: &[Bits], n: usize, sigma: Bits) -> Option<ClusterAxiom> {
    // T(σ) = {a : a C b for every b ∈ σ}; (K1) is σ ⊆ T(σ), (K3) is T(σ) ⊆ σ.
    let t: Bits = (0..n).filter(|&a| sigma.is_subset(rows[a])).collect();
    if !sigma.is_subset(t) {
        return Some(ClusterAxiom::K1);
    }
    for a in 0..n {
        if sigma.contains(a) {
            continue;
        }
        for b in 0..n {
            if !sigma.contains(b) && sigma.contains(a | b) {
                return Some(ClusterAxiom::K2);
            }
        }
    }
    if !t.is_subset(sigma) {
        return Some(ClusterAxiom::K3);
    }
    None
}

/// Sorts element sets by their sorted element lists.
pub fn canonical_sort(sets: &mut [Bits]) {
    sets.sort_by_key(|s| s.to_vec());
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ContactChoice {
    Rho,
    Alexandroff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClusterMode {
    Brute,
    Ultrafilter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClusterAxiom {
    K1,
    K2,
    K3,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterSet {
    pub clusters: Vec<Bits>,
    pub bounded: Vec<bool>,
    /// Set when ultrafilter mode was used outside normal contact algebras.
    pub warning: Option<Error>,
}

impl ClusterSet {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaInfinity {
    pub sigma: Bits,
    pub failing: Option<ClusterAxiom>,
}

impl RegionAlgebra for FiniteLca {
    type Elem = Element;

    fn carrier_kind(&self) -> CarrierKind {
        CarrierKind::Finite
    }
    fn zero(&self) -> Element {
        0
    }
    fn one(&self) -> Element {
        self.top()
    }
    fn join(&self, a: &Element, b: &Element) -> Element {
        a | b
    }
    fn meet(&self, a: &Element, b: &Element) -> Element {
        a & b
    }
    fn complement(&self, a: &Element) -> Element {
        self.top() & !a
    }
    fn leq(&self, a: &Element, b: &Element) -> bool {
        a & !b == 0
    }
    fn contact(&self, a: &Element, b: &Element) -> bool {
        self.contact[*a as usize].contains(*b as usize)
    }
    fn bounded(&self, a: &Element) -> bool {
        self.bounded.contains(*a as usize)
    }
    fn elements(&self) -> Option<Vec<Element>> {
        Some((0..self.element_count() as Element).collect())
    }
    fn sample(&self, rng: &mut SampleRng) -> Element {
        rng.gen_range(0..self.element_count() as Element)
    }
    fn render(&self, a: &Element) -> String {
        if *a == 0 {
            return "0".into();
        }
        let names: Vec<&str> = Bits(*a as u64).iter().map(|i| self.atom_names[i].as_str()).collect();
        names.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{canonical_contact, CanonicalKind};
    use crate::axioms::{Axiom, Verdict};

    fn edge_pq() -> FiniteLca {
        let adj = vec![vec![true, true, false], vec![true, true, false], vec![false, false, true]];
        make_finite_lca(3, &adj, 0b111).unwrap()
    }

    fn set_of(s: &FiniteLca, pred: impl Fn(Element) -> bool) -> Bits {
        (0..s.element_count()).filter(|&a| pred(a as Element)).collect()
    }

    #[test]
    fn diagonal_adjacency_gives_smallest_contact() {
        let s = FiniteLca::discrete(2);
        let rs = canonical_contact(&s, CanonicalKind::Smallest);
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(s.contact(&a, &b), rs.contact(&a, &b));
            }
        }
    }

    #[test]
    fn graph_extension_rule() {
        let s = edge_pq();
        assert!(!s.contact(&0b001, &0b100));
        assert!(s.contact(&0b001, &0b110));
    }

    #[test]
    fn degenerate_algebra_is_vacuous() {
        let s = make_finite_lca(0, &[], 0).unwrap();
        for suite in [Suite::Bool, Suite::Ca, Suite::Ll, Suite::Nca, Suite::Lca, Suite::Con] {
            assert!(check_axioms(&s, suite, &QuantifierStrategy::exhaustive()).unwrap().all_hold());
        }
        let cl = s.enumerate_clusters(ClusterMode::Brute, ContactChoice::Rho).unwrap();
        assert!(cl.is_empty());
    }

    #[test]
    fn invalid_adjacency_is_rejected() {
        let asym = vec![vec![true, true], vec![false, true]];
        assert!(matches!(make_finite_lca(2, &asym, 0), Err(Error::InvalidAdjacency { row: 0, col: 1, .. })));
        let irreflexive = vec![vec![false]];
        assert!(matches!(make_finite_lca(1, &irreflexive, 0), Err(Error::InvalidAdjacency { .. })));
        assert_eq!(make_finite_lca(6, &[], 0), Err(Error::AtomCountOutOfRange(6)));
    }

    #[test]
    fn largest_contact_fails_c6_at_p() {
        let s = FiniteLca::complete_graph(2);
        let report = check_axioms(&s, Suite::Nca, &QuantifierStrategy::exhaustive()).unwrap();
        assert_eq!(report.verdict(Axiom::C6), Some(&Verdict::Fails(vec![0b01])));
    }

    #[test]
    fn clusters_of_smallest_contact() {
        let s = FiniteLca::discrete(2);
        let at_p = set_of(&s, |a| a & 1 != 0);
        assert!(s.is_cluster(at_p, ContactChoice::Rho).unwrap());
        let nonzero = set_of(&s, |a| a != 0);
        assert_eq!(s.cluster_violation(nonzero, ContactChoice::Rho).unwrap(), Some(ClusterAxiom::K1));
        let top_only = Bits::singleton(3);
        assert!(!s.is_cluster(top_only, ContactChoice::Rho).unwrap());
        assert_eq!(s.is_cluster(Bits::EMPTY, ContactChoice::Rho), Err(Error::EmptyCandidate));
    }

    #[test]
    fn ultrafilter_traces() {
        let s = FiniteLca::discrete(3);
        assert_eq!(s.cluster_from_ultrafilter(0b001, ContactChoice::Rho).unwrap(), set_of(&s, |a| a & 1 != 0));
        let e = edge_pq();
        let expected = set_of(&e, |a| a & 0b011 != 0);
        assert_eq!(e.cluster_from_ultrafilter(0b001, ContactChoice::Alexandroff).unwrap(), expected);
        assert_eq!(e.cluster_from_ultrafilter(0b010, ContactChoice::Alexandroff).unwrap(), expected);
        assert!(matches!(e.cluster_from_ultrafilter(0b011, ContactChoice::Rho), Err(Error::NotAnAtom(_))));
    }

    #[test]
    fn brute_clusters() {
        let s = FiniteLca::discrete(3);
        let cl = s.enumerate_clusters(ClusterMode::Brute, ContactChoice::Rho).unwrap();
        assert_eq!(cl.len(), 3);
        let e = edge_pq();
        let cl = e.enumerate_clusters(ClusterMode::Brute, ContactChoice::Rho).unwrap();
        let mut expected = vec![set_of(&e, |a| a & 0b011 != 0), set_of(&e, |a| a & 0b100 != 0)];
        canonical_sort(&mut expected);
        assert_eq!(cl.clusters, expected);
    }

    #[test]
    fn ultrafilter_mode_warns_outside_normal_algebras() {
        let e = edge_pq();
        let cl = e.enumerate_clusters(ClusterMode::Ultrafilter, ContactChoice::Rho).unwrap();
        assert!(cl.warning.is_some());
        let s = FiniteLca::discrete(3);
        assert!(s.enumerate_clusters(ClusterMode::Ultrafilter, ContactChoice::Rho).unwrap().warning.is_none());
        let big = FiniteLca::discrete(5);
        assert!(matches!(
            big.enumerate_clusters(ClusterMode::Brute, ContactChoice::Rho),
            Err(Error::TooLargeForBrute { .. })
        ));
        assert_eq!(big.enumerate_clusters(ClusterMode::Ultrafilter, ContactChoice::Rho).unwrap().len(), 5);
    }

    #[test]
    fn sigma_infinity_on_finite_models() {
        assert_eq!(FiniteLca::discrete(2).sigma_infinity(), Err(Error::BoundedTop));
        let adj = vec![vec![true, false], vec![false, true]];
        let s = make_finite_lca(2, &adj, 0b01).unwrap();
        let inf = s.sigma_infinity().unwrap();
        assert_eq!(inf.sigma, set_of(&s, |a| a & 0b10 != 0));
        assert_eq!(inf.failing, None);
    }

    #[test]
    fn sweep_sizes() {
        assert_eq!(FiniteLca::sweep(0).len(), 1);
        assert_eq!(FiniteLca::sweep(2).len(), 8);
        assert_eq!(FiniteLca::sweep(3).len(), 64);
    }

    #[test]
    fn element_literals() {
        let s = FiniteLca::discrete(3);
        assert_eq!(s.parse_element("p+r").unwrap(), 0b101);
        assert_eq!(s.parse_element("{q, r}").unwrap(), 0b110);
        assert_eq!(s.parse_element("1").unwrap(), 0b111);
        assert_eq!(s.render(&0b101), "p+r");
        assert!(s.parse_element("z").is_err());
    }
}

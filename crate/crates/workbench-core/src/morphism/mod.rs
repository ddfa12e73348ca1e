//! Morphisms between region algebras: explicit tables between finite
//! structures and the map-induced `φ_f(G) = cl(f⁻¹(int G))` on the stock
//! models, with the ˇ and ˜ operations and ⋄ composition.

pub mod check;
pub mod dual;
pub mod laws;

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::Rng;

use crate::algebra::{alexandroff_way_below, way_below, RegionAlgebra, SampleRng};
use crate::axioms::{Outcome, Verdict};
use crate::error::{Error, Result};
use crate::finite::{Element, FiniteLca};
use crate::regions::{NatMap, PlMap, StockMap, StockModel};

pub use check::{check_map_family, check_table_family, classify_map, classify_table, Classification};
pub use dual::{d_phi, dual_map, s_set, s_set_conjugate, stock_trace_contains, DualMap, DualMapTrace};
pub use laws::{
    algebra_square, dual_functor_law, space_functor_law, space_morphism, space_square, stock_functor_law, stock_square,
    stock_square_on, LawReport, SpaceMorphism,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Dval1,
    Dval2,
    Dval3,
    Dval4,
    Pal1,
    Pal2,
    Pal3,
    Pal4,
    Pal5,
    Pal6,
    Dlc1,
    Dlc2,
    Dlc3,
    Dlc4,
    Dlc5,
    Dlc3Prime,
    Dlc3S,
    Lc3,
    Lc3S,
    F1,
    L1,
    L2,
    Cbh,
}

impl Family {
    pub const ALL: [Family; 23] = [
        Family::Dval1,
        Family::Dval2,
        Family::Dval3,
        Family::Dval4,
        Family::Pal1,
        Family::Pal2,
        Family::Pal3,
        Family::Pal4,
        Family::Pal5,
        Family::Pal6,
        Family::Dlc1,
        Family::Dlc2,
        Family::Dlc3,
        Family::Dlc4,
        Family::Dlc5,
        Family::Dlc3Prime,
        Family::Dlc3S,
        Family::Lc3,
        Family::Lc3S,
        Family::F1,
        Family::L1,
        Family::L2,
        Family::Cbh,
    ];
    pub const DLC: [Family; 5] = [Family::Dlc1, Family::Dlc2, Family::Dlc3, Family::Dlc4, Family::Dlc5];
    pub const PAL: [Family; 6] = [Family::Pal1, Family::Pal2, Family::Pal3, Family::Pal4, Family::Pal5, Family::Pal6];
    pub const DVAL: [Family; 4] = [Family::Dval1, Family::Dval2, Family::Dval3, Family::Dval4];
    pub const SKELETAL: [Family; 3] = [Family::Cbh, Family::L1, Family::L2];

    pub fn name(self) -> &'static str {
        match self {
            Family::Dval1 => "DVAL1",
            Family::Dval2 => "DVAL2",
            Family::Dval3 => "DVAL3",
            Family::Dval4 => "DVAL4",
            Family::Pal1 => "PAL1",
            Family::Pal2 => "PAL2",
            Family::Pal3 => "PAL3",
            Family::Pal4 => "PAL4",
            Family::Pal5 => "PAL5",
            Family::Pal6 => "PAL6",
            Family::Dlc1 => "DLC1",
            Family::Dlc2 => "DLC2",
            Family::Dlc3 => "DLC3",
            Family::Dlc4 => "DLC4",
            Family::Dlc5 => "DLC5",
            Family::Dlc3Prime => "DLC3'",
            Family::Dlc3S => "DLC3S",
            Family::Lc3 => "LC3",
            Family::Lc3S => "LC3S",
            Family::F1 => "F1",
            Family::L1 => "L1",
            Family::L2 => "L2",
            Family::Cbh => "CBH",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        let up = s.trim().to_ascii_uppercase();
        Family::ALL.into_iter().find(|f| f.name() == up)
    }

    /// Group names such as `DLC` expand to their members.
    pub fn parse_group(s: &str) -> Option<Vec<Family>> {
        match s.trim().to_ascii_uppercase().as_str() {
            "DLC" => Some(Family::DLC.to_vec()),
            "PAL" => Some(Family::PAL.to_vec()),
            "DVAL" => Some(Family::DVAL.to_vec()),
            "SKELETAL" => Some(Family::SKELETAL.to_vec()),
            "ALL" => Some(Family::ALL.to_vec()),
            _ => Family::parse(s).map(|f| vec![f]),
        }
    }

    /// Number of universally quantified source elements, for the families
    /// checked instance by instance.
    pub(crate) fn universal_arity(self) -> Option<usize> {
        match self {
            Family::Dval1 | Family::Pal1 | Family::Dlc1 => Some(0),
            Family::Pal5 => Some(1),
            Family::Dval2
            | Family::Pal2
            | Family::Dlc2
            | Family::Dval3
            | Family::Pal3
            | Family::Dlc3
            | Family::Dlc3Prime
            | Family::Dlc3S
            | Family::F1
            | Family::L1 => Some(2),
            Family::Lc3 | Family::Lc3S => Some(4),
            _ => None,
        }
    }

    pub(crate) fn arg_names(self) -> &'static [&'static str] {
        match self.universal_arity() {
            Some(1) => &["a"],
            Some(2) => &["a", "b"],
            Some(4) => &["a1", "b1", "a2", "b2"],
            _ => &[],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Checks one instance of a universally quantified family. Instances
/// whose premise is false hold vacuously. `DVAL` families use `ρ` as the
/// contact.
pub(crate) fn universal_instance<S, T>(
    src: &S,
    tgt: &T,
    phi: &dyn Fn(&S::Elem) -> T::Elem,
    family: Family,
    t: &[S::Elem],
) -> bool
where
    S: RegionAlgebra + ?Sized,
    T: RegionAlgebra + ?Sized,
{
    let conj = |a: &S::Elem| tgt.complement(&phi(&src.complement(a)));
    match family {
        Family::Dval1 | Family::Pal1 | Family::Dlc1 => phi(&src.zero()) == tgt.zero(),
        Family::Dval2 | Family::Pal2 | Family::Dlc2 => {
            phi(&src.meet(&t[0], &t[1])) == tgt.meet(&phi(&t[0]), &phi(&t[1]))
        }
        Family::Pal3 | Family::Dlc3 => {
            !(src.bounded(&t[0]) && way_below(src, &t[0], &t[1])) || way_below(tgt, &conj(&t[0]), &phi(&t[1]))
        }
        Family::Dlc3Prime => {
            !(src.bounded(&t[0]) && src.bounded(&t[1]) && way_below(src, &t[0], &t[1]))
                || way_below(tgt, &conj(&t[0]), &phi(&t[1]))
        }
        Family::Dval3 | Family::Dlc3S => !way_below(src, &t[0], &t[1]) || way_below(tgt, &conj(&t[0]), &phi(&t[1])),
        Family::Lc3 | Family::Lc3S => {
            let need_bounded = family == Family::Lc3;
            let premise = (0..2).all(|i| {
                let (a, b) = (&t[2 * i], &t[2 * i + 1]);
                (!need_bounded || src.bounded(a)) && way_below(src, a, b)
            });
            !premise || way_below(tgt, &phi(&src.join(&t[0], &t[2])), &tgt.join(&phi(&t[1]), &phi(&t[3])))
        }
        Family::Pal5 => !src.bounded(&t[0]) || tgt.bounded(&phi(&t[0])),
        Family::F1 | Family::L1 => !tgt.contact(&phi(&t[0]), &phi(&t[1])) || src.contact(&t[0], &t[1]),
        _ => unreachable!("{family} is not checked instance by instance"),
    }
}

/// Renders an instance as `name = value` lines followed by the images.
pub(crate) fn render_instance<S, T>(
    src: &S,
    tgt: &T,
    phi: &dyn Fn(&S::Elem) -> T::Elem,
    family: Family,
    t: &[S::Elem],
) -> Vec<String>
where
    S: RegionAlgebra + ?Sized,
    T: RegionAlgebra + ?Sized,
{
    let names = family.arg_names();
    let mut out: Vec<String> = t.iter().zip(names).map(|(e, n)| format!("{n} = {}", src.render(e))).collect();
    out.extend(t.iter().zip(names).map(|(e, n)| format!("φ({n}) = {}", tgt.render(&phi(e)))));
    if family.universal_arity() == Some(0) {
        out.push(format!("φ(0) = {}", tgt.render(&phi(&src.zero()))));
    }
    out
}

pub type FamilyVerdict = Verdict<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismReport {
    pub verdicts: Vec<(Family, FamilyVerdict)>,
    pub samples_used: usize,
    pub seed: u64,
    pub notes: Vec<String>,
}

impl MorphismReport {
    pub fn outcome(&self) -> Outcome {
        self.verdicts.iter().map(|(_, v)| v.outcome()).fold(Outcome::Holds, Outcome::combine)
    }

    pub fn all_hold(&self) -> bool {
        self.outcome() == Outcome::Holds
    }

    pub fn verdict(&self, family: Family) -> Option<&FamilyVerdict> {
        self.verdicts.iter().find(|(f, _)| *f == family).map(|(_, v)| v)
    }
}

/// A total function between finite structures, stored as a table indexed
/// by source elements. Exhaustive verdicts are computed once on demand.
#[derive(Clone, Debug)]
pub struct TableMorphism {
    source: Arc<FiniteLca>,
    target: Arc<FiniteLca>,
    table: Vec<Element>,
    verdicts: OnceLock<Vec<(Family, FamilyVerdict)>>,
}

impl PartialEq for TableMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table && self.source == other.source && self.target == other.target
    }
}

impl Eq for TableMorphism {}

impl TableMorphism {
    pub fn new(source: Arc<FiniteLca>, target: Arc<FiniteLca>, table: Vec<Element>) -> Result<TableMorphism> {
        if table.len() != source.element_count() {
            return Err(Error::PreconditionViolated(format!(
                "table has {} entries, the source has {} elements",
                table.len(),
                source.element_count()
            )));
        }
        if let Some(bad) = table.iter().find(|&&e| e & !target.top() != 0) {
            return Err(Error::PreconditionViolated(format!("table value {bad:#b} is not an element of the target")));
        }
        Ok(TableMorphism { source, target, table, verdicts: OnceLock::new() })
    }

    pub fn identity(a: Arc<FiniteLca>) -> TableMorphism {
        let table = (0..a.element_count() as Element).collect();
        TableMorphism { source: a.clone(), target: a, table, verdicts: OnceLock::new() }
    }

    /// The Boolean homomorphism `a ↦ {j : g(j) ∈ a}` induced by a map `g`
    /// from target atoms to source atoms.
    pub fn from_atom_map(source: Arc<FiniteLca>, target: Arc<FiniteLca>, g: &[usize]) -> Result<TableMorphism> {
        if g.len() != target.atom_count() || g.iter().any(|&i| i >= source.atom_count()) {
            return Err(Error::PreconditionViolated("atom map must send every target atom to a source atom".into()));
        }
        let table = (0..source.element_count() as Element)
            .map(|a| g.iter().enumerate().filter(|(_, &i)| a >> i & 1 == 1).fold(0, |acc, (j, _)| acc | 1 << j))
            .collect();
        TableMorphism::new(source, target, table)
    }

    /// A uniformly random function between the carriers.
    pub fn random(source: Arc<FiniteLca>, target: Arc<FiniteLca>, rng: &mut SampleRng) -> TableMorphism {
        let n = target.element_count() as Element;
        let table = (0..source.element_count()).map(|_| rng.gen_range(0..n)).collect();
        TableMorphism { source, target, table, verdicts: OnceLock::new() }
    }

    pub fn source(&self) -> &Arc<FiniteLca> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteLca> {
        &self.target
    }

    pub fn table(&self) -> &[Element] {
        &self.table
    }

    pub fn apply(&self, a: Element) -> Element {
        self.table[a as usize]
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &TableMorphism) -> Result<TableMorphism> {
        if self.target != g.source {
            return Err(Error::NotComposable);
        }
        let table = self.table.iter().map(|&b| g.apply(b)).collect();
        Ok(TableMorphism { source: self.source.clone(), target: g.target.clone(), table, verdicts: OnceLock::new() })
    }

    fn join_over(&self, pred: impl Fn(Element) -> bool) -> Element {
        (0..self.source.element_count() as Element).filter(|&b| pred(b)).fold(0, |acc, b| acc | self.apply(b))
    }

    /// `ψˇ(a) = ⋁{ψ(b) : b ∈ IB, b ≪ a}`.
    pub fn check_op(&self) -> TableMorphism {
        let s = &*self.source;
        let table = (0..s.element_count() as Element)
            .map(|a| self.join_over(|b| s.bounded(&b) && way_below(s, &b, &a)))
            .collect();
        TableMorphism { source: self.source.clone(), target: self.target.clone(), table, verdicts: OnceLock::new() }
    }

    /// `ψ˜(a) = ⋁{ψ(b) : b ≪_{C_ρ} a}`.
    pub fn tilde_op(&self) -> TableMorphism {
        let s = &*self.source;
        let table =
            (0..s.element_count() as Element).map(|a| self.join_over(|b| alexandroff_way_below(s, &b, &a))).collect();
        TableMorphism { source: self.source.clone(), target: self.target.clone(), table, verdicts: OnceLock::new() }
    }

    /// `self ⋄ first = (self ∘ first)ˇ`.
    pub fn diamond(&self, first: &TableMorphism) -> Result<TableMorphism> {
        Ok(first.then(self)?.check_op())
    }

    pub fn is_monotone(&self) -> bool {
        let n = self.source.element_count() as Element;
        (0..n).all(|a| (0..n).all(|b| a & !b != 0 || self.apply(a) & !self.apply(b) == 0))
    }

    /// `φ_Λ(b) = ⋀{a : b ≤ φ(a)}`, with the Galois property checked on all
    /// pairs.
    pub fn left_adjoint(&self) -> Result<Vec<Element>> {
        let (s, t) = (&*self.source, &*self.target);
        if !self.is_monotone() || self.apply(s.top()) != t.top() {
            return Err(Error::PreconditionViolated("left adjoint needs a monotone φ with φ(1) = 1".into()));
        }
        let n = s.element_count() as Element;
        let adj: Vec<Element> = (0..t.element_count() as Element)
            .map(|b| (0..n).filter(|&a| b & !self.apply(a) == 0).fold(s.top(), |acc, a| acc & a))
            .collect();
        for b in 0..t.element_count() as Element {
            for a in 0..n {
                if (b & !self.apply(a) == 0) != (adj[b as usize] & !a == 0) {
                    return Err(Error::NoAdjoint { a: s.render(&a), b: t.render(&b) });
                }
            }
        }
        Ok(adj)
    }

    /// Exhaustive verdicts for every family, computed once.
    pub fn verdicts(&self) -> &[(Family, FamilyVerdict)] {
        self.verdicts.get_or_init(|| Family::ALL.iter().map(|&f| (f, check_table_family(self, f))).collect())
    }

    pub fn verdict(&self, family: Family) -> &FamilyVerdict {
        &self.verdicts().iter().find(|(f, _)| *f == family).expect("every family is checked").1
    }

    pub fn holds_all(&self, families: &[Family]) -> bool {
        families.iter().all(|&f| self.verdict(f).holds())
    }

    pub fn check(&self, families: &[Family]) -> MorphismReport {
        MorphismReport {
            verdicts: families.iter().map(|&f| (f, self.verdict(f).clone())).collect(),
            samples_used: self.source.element_count(),
            seed: 0,
            notes: vec!["exhaustive over the finite carrier".into()],
        }
    }

    pub fn render_table(&self) -> Vec<(String, String)> {
        self.table
            .iter()
            .enumerate()
            .map(|(a, b)| (self.source.render(&(a as Element)), self.target.render(b)))
            .collect()
    }
}

/// `φ_f` for a described self-map of a stock space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapMorphism<F: StockMap> {
    pub map: F,
    pub model: F::Model,
}

impl<F: StockMap> MapMorphism<F> {
    pub fn new(map: F) -> Self {
        MapMorphism { map, model: F::Model::default() }
    }

    pub fn apply(&self, g: &<F::Model as RegionAlgebra>::Elem) -> <F::Model as RegionAlgebra>::Elem {
        self.map.phi(g)
    }

    pub fn is_proper(&self) -> bool {
        self.map.is_proper()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Check,
    Tilde,
}

/// A morphism of any supported kind.
#[derive(Clone, Debug, PartialEq)]
pub enum Morphism {
    Table(TableMorphism),
    Interval(MapMorphism<PlMap>),
    Nat(MapMorphism<NatMap>),
}

impl Morphism {
    pub fn kind(&self) -> &'static str {
        match self {
            Morphism::Table(_) => "table",
            Morphism::Interval(_) | Morphism::Nat(_) => "map_induced",
        }
    }

    pub fn check(&self, families: &[Family], strategy: &crate::axioms::QuantifierStrategy) -> Result<MorphismReport> {
        match self {
            Morphism::Table(t) => Ok(t.check(families)),
            Morphism::Interval(m) => check::check_map(m, families, strategy),
            Morphism::Nat(m) => check::check_map(m, families, strategy),
        }
    }

    /// ψˇ or ψ˜; only finite tables have exact joins.
    pub fn check_operation(&self, variant: Variant) -> Result<Morphism> {
        match self {
            Morphism::Table(t) => Ok(Morphism::Table(match variant {
                Variant::Check => t.check_op(),
                Variant::Tilde => t.tilde_op(),
            })),
            _ => Err(Error::InfiniteCarrier),
        }
    }

    pub fn diamond(&self, first: &Morphism) -> Result<Morphism> {
        match (self, first) {
            (Morphism::Table(second), Morphism::Table(first)) => Ok(Morphism::Table(second.diamond(first)?)),
            (Morphism::Table(_), _) | (_, Morphism::Table(_)) => Err(Error::NotComposable),
            _ => Err(Error::InfiniteCarrier),
        }
    }
}

/// Points from the model's sampler, deterministic in the seed.
pub fn sample_points<M: StockModel>(model: &M, seed: u64, count: usize) -> Vec<M::Point> {
    let mut rng = crate::algebra::rng_from_seed(seed);
    (0..count).map(|_| model.sample_point(&mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rng_from_seed;

    fn rs(n: usize) -> Arc<FiniteLca> {
        Arc::new(FiniteLca::discrete(n))
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(Family::parse(f.name()), Some(f));
        }
        assert_eq!(Family::parse("dlc3'"), Some(Family::Dlc3Prime));
        assert_eq!(Family::parse_group("DLC").unwrap().len(), 5);
        assert_eq!(Family::parse("DLC9"), None);
    }

    #[test]
    fn identity_satisfies_everything() {
        let id = TableMorphism::identity(rs(2));
        for (f, v) in id.verdicts() {
            assert!(v.holds(), "{f}: {v:?}");
        }
    }

    #[test]
    fn totality_is_enforced() {
        assert!(TableMorphism::new(rs(1), rs(1), vec![0]).is_err());
        assert!(TableMorphism::new(rs(1), rs(1), vec![0, 2]).is_err());
    }

    #[test]
    fn check_of_monotone_on_discrete_is_itself() {
        let s = rs(2);
        let swap = TableMorphism::from_atom_map(s.clone(), s.clone(), &[1, 0]).unwrap();
        assert_eq!(swap.table(), &[0, 2, 1, 3]);
        assert_eq!(swap.check_op(), swap);
        assert_eq!(swap.tilde_op(), swap);
    }

    #[test]
    fn left_adjoints() {
        let s = rs(2);
        let swap = TableMorphism::from_atom_map(s.clone(), s.clone(), &[1, 0]).unwrap();
        assert_eq!(swap.left_adjoint().unwrap(), vec![0, 2, 1, 3]);
        let id = TableMorphism::identity(s.clone());
        assert_eq!(id.left_adjoint().unwrap(), vec![0, 1, 2, 3]);
        let top = TableMorphism::new(s.clone(), s.clone(), vec![3; 4]).unwrap();
        assert_eq!(top.left_adjoint().unwrap(), vec![0; 4]);
    }

    #[test]
    fn composition_checks_endpoints() {
        let a = TableMorphism::identity(rs(1));
        let b = TableMorphism::identity(rs(2));
        assert_eq!(a.then(&b), Err(Error::NotComposable));
        let mut rng = rng_from_seed(3);
        let r = TableMorphism::random(rs(2), rs(2), &mut rng);
        assert_eq!(TableMorphism::identity(rs(2)).diamond(&r.check_op()).unwrap(), r.check_op());
    }
}

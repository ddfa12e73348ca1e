//! Turns a parsed document into checked core values. Every name lives in
//! one namespace; literals are parsed against the algebra they belong to.

use std::collections::BTreeMap;
use std::sync::Arc;

use workbench_core::algebra::RegionAlgebra;
use workbench_core::axioms::Suite;
use workbench_core::bits::Bits;
use workbench_core::finite::{Element, FiniteLca};
use workbench_core::morphism::{space_morphism, Family, MapMorphism, Morphism, TableMorphism};
use workbench_core::regions::{parse_rational, q, IntervalRegion, NatMap, NatRegion, PlMap, Tail};
use workbench_core::spaces::{rc_algebra, FiniteSpace, RegularClosedAlgebra, SpaceMap};
use workbench_core::Error as CoreError;

use crate::document::{
    AlgebraDecl, AlgebraKind, Cell, Command, ContactPreset, Document, MapDecl, MapKind, MorphismDecl,
};
use crate::error::{CliError, Result};

#[derive(Clone, Debug)]
pub enum Algebra {
    Finite(Arc<FiniteLca>),
    Space { lca: Arc<FiniteLca>, rc: RegularClosedAlgebra },
    Interval,
    Nat,
}

impl Algebra {
    pub fn finite(&self) -> Option<&Arc<FiniteLca>> {
        match self {
            Algebra::Finite(s) | Algebra::Space { lca: s, .. } => Some(s),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub enum MapValue {
    Pl(PlMap),
    Nat(NatMap),
    Space(SpaceMap),
}

#[derive(Clone, Debug)]
pub enum RegionValue {
    Interval(IntervalRegion),
    Nat(NatRegion),
}

#[derive(Clone, Debug)]
pub enum Entity {
    Space(FiniteSpace),
    Algebra(Algebra),
    Region(RegionValue),
    Map(MapValue),
    Morphism(Morphism),
}

impl Entity {
    fn kind(&self) -> &'static str {
        match self {
            Entity::Space(_) => "space",
            Entity::Algebra(_) => "algebra",
            Entity::Region(_) => "region",
            Entity::Map(_) => "map",
            Entity::Morphism(_) => "morphism",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Workspace {
    entities: BTreeMap<String, Entity>,
}

impl Workspace {
    pub fn get(&self, name: &str) -> Result<&Entity> {
        self.entities.get(name).ok_or_else(|| CliError::Reference(name.to_string()))
    }

    pub fn algebra(&self, name: &str) -> Result<&Algebra> {
        match self.get(name)? {
            Entity::Algebra(a) => Ok(a),
            _ => Err(CliError::Reference(name.to_string())),
        }
    }

    pub fn space(&self, name: &str) -> Result<&FiniteSpace> {
        match self.get(name)? {
            Entity::Space(x) => Ok(x),
            _ => Err(CliError::Reference(name.to_string())),
        }
    }

    pub fn morphism(&self, name: &str) -> Result<&Morphism> {
        match self.get(name)? {
            Entity::Morphism(m) => Ok(m),
            _ => Err(CliError::Reference(name.to_string())),
        }
    }

    pub fn map(&self, name: &str) -> Result<&MapValue> {
        match self.get(name)? {
            Entity::Map(m) => Ok(m),
            _ => Err(CliError::Reference(name.to_string())),
        }
    }

    pub fn region(&self, name: &str) -> Result<&RegionValue> {
        match self.get(name)? {
            Entity::Region(r) => Ok(r),
            _ => Err(CliError::Reference(name.to_string())),
        }
    }
}

/// Finds the line of the `n`-th `"name": "<name>"` pair, so errors found
/// after parsing still point into the source.
pub fn locate(text: &str, name: &str, n: usize) -> usize {
    let quoted = serde_json::to_string(name).unwrap_or_default();
    let mut seen = 0;
    let mut from = 0;
    while let Some(i) = text[from..].find("\"name\"") {
        let at = from + i;
        let rest = text[at + 6..].trim_start();
        if let Some(rest) = rest.strip_prefix(':') {
            if rest.trim_start().starts_with(&quoted) {
                if seen == n {
                    return text[..at].matches('\n').count() + 1;
                }
                seen += 1;
            }
        }
        from = at + 6;
    }
    1
}

/// Line of the `n`-th `"<key>":`.
fn locate_key(text: &str, key: &str, n: usize) -> usize {
    let quoted = format!("\"{key}\"");
    let mut seen = 0;
    let mut from = 0;
    while let Some(i) = text[from..].find(&quoted) {
        let at = from + i;
        if text[at + quoted.len()..].trim_start().starts_with(':') {
            if seen == n {
                return text[..at].matches('\n').count() + 1;
            }
            seen += 1;
        }
        from = at + quoted.len();
    }
    1
}

struct Resolver<'a> {
    text: &'a str,
    ws: Workspace,
    /// How often each name has been declared so far.
    seen: BTreeMap<String, usize>,
}

impl Resolver<'_> {
    fn fail(&self, name: &str, reason: impl Into<String>) -> CliError {
        let n = self.seen.get(name).copied().unwrap_or(1).saturating_sub(1);
        CliError::Parse { line: locate(self.text, name, n), reason: format!("{name}: {}", reason.into()) }
    }

    fn core(&self, name: &str, e: CoreError) -> CliError {
        self.fail(name, e.to_string())
    }

    fn declare(&mut self, name: &str, entity: Entity) -> Result<()> {
        if self.ws.entities.contains_key(name) {
            let prior = self.ws.entities[name].kind();
            return Err(self.fail(name, format!("name already declared as a {prior}")));
        }
        self.ws.entities.insert(name.to_string(), entity);
        Ok(())
    }

    fn mark(&mut self, name: &str) {
        *self.seen.entry(name.to_string()).or_default() += 1;
    }

    fn space(&self, decl: &crate::document::SpaceDecl) -> Result<FiniteSpace> {
        let mut sorted = decl.points.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != decl.points.len() {
            return Err(self.fail(&decl.name, "point names repeat"));
        }
        let Some(opens) = &decl.opens else {
            return Ok(FiniteSpace::discrete(decl.points.clone()));
        };
        let mut sets = Vec::new();
        for open in opens {
            let mut bits = Bits::EMPTY;
            for p in open {
                let i = decl
                    .points
                    .iter()
                    .position(|x| x == p)
                    .ok_or_else(|| self.fail(&decl.name, format!("unknown point {p:?}")))?;
                bits.insert(i);
            }
            sets.push(bits);
        }
        FiniteSpace::validate(decl.points.clone(), sets).map_err(|e| self.core(&decl.name, e))
    }

    fn algebra(&self, decl: &AlgebraDecl) -> Result<Algebra> {
        let finite_only = decl.atoms.is_some()
            || decl.adjacency.is_some()
            || decl.edges.is_some()
            || decl.contact.is_some()
            || decl.bounded.is_some();
        match decl.kind {
            AlgebraKind::Finite => {
                if decl.space.is_some() {
                    return Err(self.fail(&decl.name, "`space` belongs to kind \"space\""));
                }
                self.finite(decl).map(|s| Algebra::Finite(Arc::new(s)))
            }
            AlgebraKind::Space => {
                if finite_only {
                    return Err(self.fail(&decl.name, "a space algebra takes only `space`"));
                }
                let sname = decl.space.as_deref().ok_or_else(|| self.fail(&decl.name, "missing `space`"))?;
                let x = self.ws.space(sname)?;
                let rc = rc_algebra(x).map_err(|e| self.core(&decl.name, e))?;
                Ok(Algebra::Space { lca: Arc::new(rc.lca().clone()), rc })
            }
            AlgebraKind::RationalInterval | AlgebraKind::CofiniteNat => {
                if finite_only || decl.space.is_some() {
                    return Err(self.fail(&decl.name, "stock models take no further fields"));
                }
                Ok(if decl.kind == AlgebraKind::RationalInterval { Algebra::Interval } else { Algebra::Nat })
            }
        }
    }

    fn finite(&self, decl: &AlgebraDecl) -> Result<FiniteLca> {
        let name = &decl.name;
        let atoms = decl.atoms.clone().ok_or_else(|| self.fail(name, "missing `atoms`"))?;
        let n = atoms.len();
        let index =
            |a: &str| atoms.iter().position(|x| x == a).ok_or_else(|| self.fail(name, format!("unknown atom {a:?}")));
        let given = [decl.adjacency.is_some(), decl.edges.is_some(), decl.contact.is_some()];
        if given.iter().filter(|&&g| g).count() > 1 {
            return Err(self.fail(name, "give at most one of `adjacency`, `edges`, `contact`"));
        }
        let mut adj: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
        if let Some(rows) = &decl.adjacency {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(self.fail(name, format!("adjacency must be {n}×{n}")));
            }
            for (i, row) in rows.iter().enumerate() {
                for (j, cell) in row.iter().enumerate() {
                    adj[i][j] = match cell {
                        Cell::Bool(b) => *b,
                        Cell::Bit(0) => false,
                        Cell::Bit(1) => true,
                        Cell::Bit(v) => {
                            return Err(self.fail(name, format!("adjacency cell [{}][{}] is {v}", atoms[i], atoms[j])))
                        }
                    };
                }
            }
        }
        if let Some(edges) = &decl.edges {
            for (a, b) in edges {
                let (i, j) = (index(a)?, index(b)?);
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
        if decl.contact == Some(ContactPreset::Largest) {
            adj = vec![vec![true; n]; n];
        }
        let bound = match &decl.bounded {
            None => (1 << n) - 1,
            Some(names) => {
                names.iter().map(|a| index(a)).collect::<Result<Vec<_>>>()?.into_iter().fold(0, |m, i| m | 1 << i)
            }
        };
        FiniteLca::from_graph(atoms.clone(), &adj, bound as Element).map_err(|e| match e {
            CoreError::InvalidAdjacency { row, col, reason } => {
                self.fail(name, format!("adjacency cell [{}][{}]: {reason}", atoms[row], atoms[col]))
            }
            e => self.core(name, e),
        })
    }

    fn region(&self, decl: &crate::document::RegionDecl) -> Result<RegionValue> {
        match self.ws.algebra(&decl.algebra)? {
            Algebra::Interval => decl.literal.parse().map(RegionValue::Interval).map_err(|e| self.core(&decl.name, e)),
            Algebra::Nat => decl.literal.parse().map(RegionValue::Nat).map_err(|e| self.core(&decl.name, e)),
            _ => Err(self.fail(&decl.name, "region literals need a stock model algebra")),
        }
    }

    fn map(&self, decl: &MapDecl) -> Result<MapValue> {
        let name = &decl.name;
        let pl_fields = decl.breakpoints.is_some() || decl.left_slope.is_some() || decl.right_slope.is_some();
        let nat_fields = decl.table.is_some() || decl.tail.is_some();
        let space_fields = decl.from.is_some() || decl.to.is_some() || decl.assign.is_some();
        let stray = match decl.kind {
            MapKind::Pl => nat_fields || space_fields,
            MapKind::Nat => pl_fields || space_fields,
            MapKind::Space => pl_fields || nat_fields || decl.preset.is_some(),
        };
        if stray {
            return Err(self.fail(name, "fields of another map kind"));
        }
        let rational = |s: &str| parse_rational(s).map_err(|e| self.core(name, e));
        match decl.kind {
            MapKind::Pl => {
                if let Some(p) = &decl.preset {
                    if pl_fields {
                        return Err(self.fail(name, "give either `preset` or breakpoints"));
                    }
                    let words: Vec<&str> = p.split_whitespace().collect();
                    return Ok(MapValue::Pl(match words.as_slice() {
                        ["identity"] => PlMap::identity(),
                        ["abs"] => PlMap::abs(),
                        ["hat"] => PlMap::hat(),
                        ["linear", s] => PlMap::linear(rational(s)?),
                        ["constant", c] => PlMap::constant(rational(c)?),
                        _ => return Err(self.fail(name, format!("unknown pl preset {p:?}"))),
                    }));
                }
                let points = decl
                    .breakpoints
                    .as_ref()
                    .ok_or_else(|| self.fail(name, "missing `breakpoints`"))?
                    .iter()
                    .map(|(x, y)| Ok((rational(x)?, rational(y)?)))
                    .collect::<Result<Vec<_>>>()?;
                let slope = |s: &Option<String>| s.as_deref().map(rational).unwrap_or(Ok(q(0)));
                let m = PlMap::new(points, slope(&decl.left_slope)?, slope(&decl.right_slope)?)
                    .map_err(|e| self.core(name, e))?;
                Ok(MapValue::Pl(m))
            }
            MapKind::Nat => {
                if let Some(p) = &decl.preset {
                    if nat_fields {
                        return Err(self.fail(name, "give either `preset` or table and tail"));
                    }
                    let words: Vec<&str> = p.split_whitespace().collect();
                    let num = |s: &str| s.parse::<u64>().map_err(|_| self.fail(name, format!("bad number {s:?}")));
                    return Ok(MapValue::Nat(match words.as_slice() {
                        ["shift", k] => NatMap::shift(num(k)?),
                        ["constant", c] => NatMap::constant(num(c)?),
                        _ => return Err(self.fail(name, format!("unknown nat preset {p:?}"))),
                    }));
                }
                let tail = match decl.tail.ok_or_else(|| self.fail(name, "missing `tail`"))? {
                    crate::document::TailDecl::Shift(k) => Tail::Shift(k),
                    crate::document::TailDecl::Constant(c) => Tail::Constant(c),
                };
                Ok(MapValue::Nat(NatMap::new(decl.table.clone().unwrap_or_default(), tail)))
            }
            MapKind::Space => {
                let from = self.ws.space(decl.from.as_deref().ok_or_else(|| self.fail(name, "missing `from`"))?)?;
                let to = self.ws.space(decl.to.as_deref().ok_or_else(|| self.fail(name, "missing `to`"))?)?;
                let assign = decl.assign.as_ref().ok_or_else(|| self.fail(name, "missing `assign`"))?;
                let mut table = Vec::with_capacity(from.len());
                for p in from.points() {
                    let y = assign.get(p).ok_or_else(|| self.fail(name, format!("point {p:?} is not assigned")))?;
                    table.push(to.point_index(y).ok_or_else(|| self.fail(name, format!("unknown point {y:?}")))?);
                }
                if let Some(extra) = assign.keys().find(|p| from.point_index(p).is_none()) {
                    return Err(self.fail(name, format!("unknown point {extra:?}")));
                }
                SpaceMap::new(from.clone(), to.clone(), table).map(MapValue::Space).map_err(|e| self.core(name, e))
            }
        }
    }

    fn morphism(&self, decl: &MorphismDecl) -> Result<Morphism> {
        let name = &decl.name;
        match (&decl.map, &decl.table) {
            (Some(map), None) => {
                if decl.source.is_some() || decl.target.is_some() {
                    return Err(self.fail(name, "a map-induced morphism takes its algebras from the map"));
                }
                match self.ws.get(map)? {
                    Entity::Map(MapValue::Pl(f)) => Ok(Morphism::Interval(MapMorphism::new(f.clone()))),
                    Entity::Map(MapValue::Nat(f)) => Ok(Morphism::Nat(MapMorphism::new(f.clone()))),
                    Entity::Map(MapValue::Space(f)) => {
                        Ok(Morphism::Table(space_morphism(f).map_err(|e| self.core(name, e))?.phi))
                    }
                    _ => Err(CliError::Reference(map.clone())),
                }
            }
            (None, Some(rows)) => {
                let pick = |field: &Option<String>, what: &str| -> Result<Arc<FiniteLca>> {
                    let a = field.as_deref().ok_or_else(|| self.fail(name, format!("missing `{what}`")))?;
                    self.ws
                        .algebra(a)?
                        .finite()
                        .cloned()
                        .ok_or_else(|| self.fail(name, format!("{what} {a:?} is not finite")))
                };
                let (s, t) = (pick(&decl.source, "source")?, pick(&decl.target, "target")?);
                let mut table: Vec<Option<Element>> = vec![None; s.element_count()];
                for (a, b) in rows {
                    let a = s.parse_element(a).map_err(|e| self.core(name, e))?;
                    let b = t.parse_element(b).map_err(|e| self.core(name, e))?;
                    if table[a as usize].replace(b).is_some() {
                        return Err(self.fail(name, format!("element {} appears twice", s.render(&a))));
                    }
                }
                let table = table
                    .iter()
                    .enumerate()
                    .map(|(a, b)| {
                        b.ok_or_else(|| self.fail(name, format!("no value for {}", s.render(&(a as Element)))))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Morphism::Table(TableMorphism::new(s, t, table).map_err(|e| self.core(name, e))?))
            }
            _ => Err(self.fail(name, "give exactly one of `table` and `map`")),
        }
    }

    fn command(&self, index: usize, cmd: &Command) -> Result<()> {
        let ws = &self.ws;
        let line = locate_key(self.text, "command", index);
        let bad = |reason: String| CliError::Parse { line, reason: format!("{}: {reason}", cmd.name()) };
        let families = |f: &Option<String>| match f {
            Some(g) if Family::parse_group(g).is_none() => Err(bad(format!("unknown family group {g:?}"))),
            _ => Ok(()),
        };
        match cmd {
            Command::CheckAxioms { algebra, suite, .. } => {
                ws.algebra(algebra)?;
                if Suite::parse(suite).is_none() {
                    return Err(bad(format!("unknown suite {suite:?}")));
                }
            }
            Command::Clusters { algebra, .. }
            | Command::Dualize { algebra }
            | Command::IdealFrame { algebra }
            | Command::PrimeBijection { algebra }
            | Command::EmitDot { algebra, .. } => {
                ws.algebra(algebra)?;
            }
            Command::Roundtrip { algebra, space } => match (algebra, space) {
                (Some(a), None) => {
                    ws.algebra(a)?;
                }
                (None, Some(x)) => {
                    ws.space(x)?;
                }
                _ => return Err(bad("give exactly one of `algebra` and `space`".into())),
            },
            Command::CheckMorphism { morphism, families: f, .. } => {
                ws.morphism(morphism)?;
                families(f)?;
            }
            Command::Compose { first, second, families: f, .. } => {
                ws.morphism(first)?;
                ws.morphism(second)?;
                families(f)?;
            }
            Command::DualMap { morphism } | Command::Classify { morphism, .. } => {
                ws.morphism(morphism)?;
            }
            Command::FunctorLaws { first, second, .. } => {
                for n in [first, second] {
                    match ws.get(n)? {
                        Entity::Map(_) | Entity::Morphism(_) => {}
                        _ => return Err(CliError::Reference(n.clone())),
                    }
                }
            }
            Command::Naturality { subject, regions, .. } => {
                match ws.get(subject)? {
                    Entity::Map(_) | Entity::Morphism(_) => {}
                    _ => return Err(CliError::Reference(subject.clone())),
                }
                for r in regions {
                    ws.region(r)?;
                }
            }
        }
        Ok(())
    }
}

/// `text` is the source the document was parsed from, used only to place
/// errors on a line.
pub fn resolve(doc: &Document, text: &str) -> Result<Workspace> {
    let mut r = Resolver { text, ws: Workspace::default(), seen: BTreeMap::new() };
    for d in &doc.spaces {
        r.mark(&d.name);
        let x = r.space(d)?;
        r.declare(&d.name, Entity::Space(x))?;
    }
    for d in &doc.algebras {
        r.mark(&d.name);
        let a = r.algebra(d)?;
        r.declare(&d.name, Entity::Algebra(a))?;
    }
    for d in &doc.regions {
        r.mark(&d.name);
        let v = r.region(d)?;
        r.declare(&d.name, Entity::Region(v))?;
    }
    for d in &doc.maps {
        r.mark(&d.name);
        let m = r.map(d)?;
        r.declare(&d.name, Entity::Map(m))?;
    }
    for d in &doc.morphisms {
        r.mark(&d.name);
        let m = r.morphism(d)?;
        r.declare(&d.name, Entity::Morphism(m))?;
    }
    for (i, c) in doc.commands.iter().enumerate() {
        r.command(i, c)?;
    }
    Ok(r.ws)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::document::parse;

    fn load(text: &str) -> Result<Workspace> {
        resolve(&parse(text).unwrap(), text)
    }

    #[test]
    fn asymmetric_adjacency_names_the_cell() {
        let text = r#"{
  "algebras": [
    {"name": "A", "kind": "finite", "atoms": ["p", "q"],
     "adjacency": [[1, 1], [0, 1]]}
  ]
}"#;
        match load(text) {
            Err(CliError::Parse { line, reason }) => {
                assert_eq!(line, 3);
                assert!(reason.contains("[p][q]") || reason.contains("[q][p]"), "{reason}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn interval_literal_has_two_components() {
        let text = r#"{
  "algebras": [{"name": "R", "kind": "rational-interval"}],
  "regions": [{"name": "G", "algebra": "R", "literal": "[1/3, 2/3] + [1,inf)"}]
}"#;
        let ws = load(text).unwrap();
        match ws.region("G").unwrap() {
            RegionValue::Interval(g) => assert_eq!(g.parts().len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_names_are_reference_errors() {
        let text = r#"{"commands": [{"command": "dualize", "algebra": "Nope"}]}"#;
        assert!(matches!(load(text), Err(CliError::Reference(n)) if n == "Nope"));
    }

    #[test]
    fn duplicate_names_point_at_the_second_declaration() {
        let text = "{\n\"algebras\": [\n{\"name\": \"A\", \"kind\": \"cofinite-nat\"},\n{\"name\": \"A\", \"kind\": \"cofinite-nat\"}\n]}";
        assert!(matches!(load(text), Err(CliError::Parse { line: 4, .. })));
    }

    #[test]
    fn tables_must_be_total() {
        let text = r#"{
  "algebras": [{"name": "A", "kind": "finite", "atoms": ["p"]}],
  "morphisms": [{"name": "m", "source": "A", "target": "A", "table": [["0", "0"]]}]
}"#;
        match load(text) {
            Err(CliError::Parse { line: 3, reason }) => assert!(reason.contains("no value for p"), "{reason}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn space_maps_must_be_continuous() {
        let text = r#"{
  "spaces": [
    {"name": "S", "points": ["a", "b"], "opens": [[], ["a"], ["a", "b"]]},
    {"name": "D", "points": ["x", "y"]}
  ],
  "maps": [{"name": "f", "kind": "space", "from": "S", "to": "D", "assign": {"a": "x", "b": "y"}}]
}"#;
        assert!(matches!(load(text), Err(CliError::Parse { line: 6, .. })));
    }
}

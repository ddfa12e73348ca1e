//! Executes the commands of a resolved document and collects a report.

use std::time::Instant;

use serde_json::{json, Map, Value};

use workbench_core::algebra::RegionAlgebra;
use workbench_core::axioms::{check_axioms, Outcome, QuantifierStrategy, Suite};
use workbench_core::duality::{dualize, roundtrip_algebra, t_map, DualSpace};
use workbench_core::finite::{ClusterMode, ContactChoice, FiniteLca};
use workbench_core::ideals::{prime_cluster_bijection, verify_frame};
use workbench_core::morphism::{
    algebra_square, classify_map, classify_table, dual_functor_law, dual_map, sample_points, space_functor_law,
    space_square, stock_functor_law, stock_square, stock_square_on, Classification, Family, LawReport, MapMorphism,
    Morphism, MorphismReport, TableMorphism,
};
use workbench_core::regions::{IntervalModel, NatMap, NatModel, PlMap, StockMap};
use workbench_core::Error as CoreError;

use crate::document::{ClusterModeDecl, Command, ContactDecl, Document, DotTarget, ModeDecl};
use crate::error::{CliError, Result};
use crate::report::{CommandReport, RunReport, Status, VerdictEntry};
use crate::resolve::{resolve, Algebra, Entity, MapValue, RegionValue, Workspace};

pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_POINTS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    /// From the command line or the environment; beats the document seed.
    pub seed: Option<u64>,
    pub samples: usize,
    pub depth: usize,
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: None,
            samples: DEFAULT_SAMPLES,
            depth: workbench_core::axioms::DEFAULT_WITNESS_DEPTH,
            timings: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: RunReport,
    /// Texts of the `emit-dot` commands, in command order.
    pub dots: Vec<String>,
}

/// Parses, resolves and runs a document.
pub fn run_text(text: &str, opts: &RunOptions) -> Result<RunOutput> {
    let doc = crate::document::parse(text)?;
    let ws = resolve(&doc, text)?;
    Ok(run(&doc, &ws, opts))
}

pub fn run(doc: &Document, ws: &Workspace, opts: &RunOptions) -> RunOutput {
    let base_seed = opts.seed.or(doc.seed).unwrap_or(0);
    let mut dots = Vec::new();
    let mut commands = Vec::new();
    for (index, cmd) in doc.commands.iter().enumerate() {
        let sampling = cmd.sampling();
        let strategy =
            QuantifierStrategy::sampled(sampling.samples.unwrap_or(opts.samples), sampling.seed.unwrap_or(base_seed))
                .with_depth(sampling.depth.unwrap_or(opts.depth));
        let started = Instant::now();
        let ctx = Ctx { ws, strategy };
        let mut out = Exec::default();
        let result = ctx.exec(cmd, &mut out);
        let timing_ms = opts.timings.then(|| (started.elapsed().as_secs_f64() * 1e6).round() / 1e3);
        let (status, error) = match result {
            Ok(()) => (out.status, None),
            Err(e) => (Status::Error, Some(e.to_string())),
        };
        if let Some(d) = out.dot.take() {
            dots.push(d);
        }
        commands.push(CommandReport {
            index,
            command: cmd.name(),
            inputs: serde_json::to_value(cmd).unwrap_or(Value::Null),
            outcome: status.as_str(),
            verdicts: out.verdicts,
            details: out.details,
            seed: out.sampled.then_some(strategy.seed),
            error,
            timing_ms,
            status,
        });
    }
    RunOutput { report: RunReport::new(base_seed, opts.samples, opts.depth, commands), dots }
}

struct Exec {
    status: Status,
    verdicts: Vec<VerdictEntry>,
    details: Map<String, Value>,
    sampled: bool,
    dot: Option<String>,
}

impl Default for Exec {
    fn default() -> Self {
        Exec { status: Status::Holds, verdicts: Vec::new(), details: Map::new(), sampled: false, dot: None }
    }
}

impl Exec {
    fn push(&mut self, v: VerdictEntry) {
        let o = match v.outcome {
            "holds" => Status::Holds,
            "inconclusive" => Status::Inconclusive,
            _ => Status::Fails,
        };
        self.status = self.status.max(o);
        self.verdicts.push(v);
    }

    fn detail(&mut self, key: &str, v: impl Into<Value>) {
        self.details.insert(key.to_string(), v.into());
    }

    fn law(&mut self, name: &str, r: &LawReport) {
        let key = name.replace('-', "_");
        self.detail(&format!("{key}_checks"), r.checks);
        if !r.notes.is_empty() {
            self.detail(&format!("{key}_notes"), r.notes.clone());
        }
        self.push(VerdictEntry::check(name, &r.failures));
    }

    fn morphism_report(&mut self, r: &MorphismReport) {
        for (f, v) in &r.verdicts {
            self.push(VerdictEntry::new(f.name(), v.outcome(), v.witness().cloned()));
        }
        self.detail("samples_used", r.samples_used);
        if !r.notes.is_empty() {
            self.detail("notes", r.notes.clone());
        }
    }
}

struct Ctx<'a> {
    ws: &'a Workspace,
    strategy: QuantifierStrategy,
}

fn finite(a: &Algebra) -> Result<&FiniteLca> {
    a.finite().map(|s| s.as_ref()).ok_or(CliError::Core(CoreError::NotFinite))
}

fn families(group: &Option<String>) -> Vec<Family> {
    group.as_deref().and_then(Family::parse_group).unwrap_or_else(|| Family::DLC.to_vec())
}

fn outcome_str(o: Outcome) -> &'static str {
    o.as_str()
}

fn axiom_verdicts<A: RegionAlgebra + ?Sized>(
    alg: &A,
    suite: Suite,
    strategy: &QuantifierStrategy,
    out: &mut Exec,
) -> Result<()> {
    let r = check_axioms(alg, suite, strategy)?;
    for (ax, v) in &r.verdicts {
        let w = v.witness().map(|t| t.iter().map(|e| alg.render(e)).collect());
        out.push(VerdictEntry::new(ax.name(), v.outcome(), w));
    }
    out.detail("suite", suite.name());
    out.detail("samples_used", r.samples_used);
    if !r.notes.is_empty() {
        out.detail("notes", r.notes.clone());
    }
    Ok(())
}

fn dual_json(s: &FiniteLca, d: &DualSpace) -> Value {
    let points: Vec<Value> = (0..d.len())
        .map(|i| {
            json!({
                "name": d.point_name(i),
                "cluster": s.render_set(d.cluster(i)),
                "trace": s.render_set(d.cluster(i).intersection(s.bounded_set())),
            })
        })
        .collect();
    let opens: Vec<Vec<String>> = d.space.opens().iter().map(|&u| d.space.names(u)).collect();
    json!({
        "points": points,
        "opens": opens,
        "guarantees": { "ca": d.guarantees.ca, "lca": d.guarantees.lca },
    })
}

fn classification(c: &Classification, out: &mut Exec) {
    let mut v = Map::new();
    v.insert("dlc".into(), outcome_str(c.is_dlc).into());
    v.insert("pal".into(), outcome_str(c.is_pal).into());
    v.insert("dval".into(), c.is_dval.map(outcome_str).into());
    v.insert("skeletal".into(), c.is_skeletal.map(outcome_str).into());
    out.detail("classification", Value::Object(v));
    if !c.notes.is_empty() {
        out.detail("notes", c.notes.clone());
    }
    out.push(VerdictEntry::check("cross-check", &c.cross_check_failures));
}

fn table_json(m: &TableMorphism) -> Value {
    m.render_table().into_iter().map(|(a, b)| json!([a, b])).collect()
}

impl Ctx<'_> {
    fn exec(&self, cmd: &Command, out: &mut Exec) -> Result<()> {
        let ws = self.ws;
        let st = &self.strategy;
        match cmd {
            Command::CheckAxioms { algebra, suite, mode, .. } => {
                let suite = Suite::parse(suite).ok_or_else(|| CliError::Reference(suite.clone()))?;
                let alg = ws.algebra(algebra)?;
                let exhaustive = match mode {
                    Some(ModeDecl::Exhaustive) => true,
                    Some(ModeDecl::Sampled) => false,
                    None => alg.finite().is_some(),
                };
                let strategy =
                    if exhaustive { QuantifierStrategy::exhaustive().with_depth(st.witness_depth) } else { *st };
                out.sampled = !exhaustive;
                out.detail("mode", if exhaustive { "exhaustive" } else { "sampled" });
                match alg {
                    Algebra::Finite(s) | Algebra::Space { lca: s, .. } => {
                        axiom_verdicts(s.as_ref(), suite, &strategy, out)
                    }
                    Algebra::Interval => axiom_verdicts(&IntervalModel, suite, &strategy, out),
                    Algebra::Nat => axiom_verdicts(&NatModel, suite, &strategy, out),
                }
            }
            Command::Clusters { algebra, mode, contact } => {
                let s = finite(ws.algebra(algebra)?)?;
                let mode = match mode {
                    Some(ClusterModeDecl::Ultrafilter) => ClusterMode::Ultrafilter,
                    _ => ClusterMode::Brute,
                };
                let choice = match contact {
                    Some(ContactDecl::Alexandroff) => ContactChoice::Alexandroff,
                    _ => ContactChoice::Rho,
                };
                let set = s.enumerate_clusters(mode, choice)?;
                let list: Vec<Value> = set
                    .clusters
                    .iter()
                    .zip(&set.bounded)
                    .map(|(&c, &b)| json!({ "elements": s.render_set(c), "bounded": b }))
                    .collect();
                out.detail("count", set.len());
                out.detail("clusters", list);
                if let Some(w) = &set.warning {
                    out.detail("warning", w.to_string());
                }
                Ok(())
            }
            Command::Dualize { algebra } => {
                let s = finite(ws.algebra(algebra)?)?;
                let d = dualize(s)?;
                out.detail("dual", dual_json(s, &d));
                Ok(())
            }
            Command::Roundtrip { algebra: Some(a), .. } => {
                let s = finite(ws.algebra(a)?)?;
                let rt = roundtrip_algebra(s)?;
                if let Some(reason) = &rt.report.declined {
                    out.push(VerdictEntry::check("precondition", std::slice::from_ref(reason)));
                    return Ok(());
                }
                out.detail("checks", rt.report.checks);
                if let Some(rc) = &rt.rc {
                    let pairs: Vec<Value> = rt
                        .table
                        .iter()
                        .enumerate()
                        .map(|(a, &b)| json!([s.render(&(a as u32)), rc.space().names(rc.to_points(b))]))
                        .collect();
                    out.detail("lambda", pairs);
                }
                out.push(VerdictEntry::check("isomorphism", &rt.report.failures));
                Ok(())
            }
            Command::Roundtrip { space: Some(x), .. } => {
                let x = ws.space(x)?;
                let t = t_map(x)?;
                let table: Vec<Value> = x
                    .points()
                    .iter()
                    .zip(&t.table)
                    .map(|(p, q)| json!([p, q.map(|i| t.dual.point_name(i).to_string())]))
                    .collect();
                out.detail("t", table);
                out.detail("hausdorff", t.guaranteed);
                out.detail("bijective", t.bijective);
                let failures = if t.homeomorphism {
                    Vec::new()
                } else if t.guaranteed {
                    vec!["t is not a homeomorphism".to_string()]
                } else {
                    vec!["t is not a homeomorphism; the space is not Hausdorff, so none is promised".to_string()]
                };
                out.push(VerdictEntry::check("homeomorphism", &failures));
                Ok(())
            }
            Command::Roundtrip { .. } => Err(CliError::Reference("roundtrip subject".into())),
            Command::IdealFrame { algebra } => {
                let s = finite(ws.algebra(algebra)?)?;
                let d = dualize(s)?;
                let r = verify_frame(s, &d)?;
                let pairs: Vec<Value> =
                    r.ideals.iter().zip(&r.opens).map(|(&i, &u)| json!([s.render_set(i), d.space.names(u)])).collect();
                out.detail("iota", pairs);
                out.push(VerdictEntry::check("frame-isomorphism", &r.failures));
                Ok(())
            }
            Command::PrimeBijection { algebra } => {
                let s = finite(ws.algebra(algebra)?)?;
                let d = dualize(s)?;
                let r = prime_cluster_bijection(s, &d)?;
                let pairs: Vec<Value> =
                    r.pairs.iter().map(|&(p, i)| json!([d.point_name(p), s.render_set(i)])).collect();
                out.detail("pairs", pairs);
                out.detail("primes", r.primes.iter().map(|&i| s.render_set(i)).collect::<Vec<_>>());
                out.push(VerdictEntry::check("bijection", &r.failures));
                Ok(())
            }
            Command::CheckMorphism { morphism, families: f, .. } => {
                let m = ws.morphism(morphism)?;
                out.sampled = !matches!(m, Morphism::Table(_));
                out.detail("kind", m.kind());
                let r = m.check(&families(f), st)?;
                out.morphism_report(&r);
                Ok(())
            }
            Command::Compose { first, second, families: f, .. } => {
                let (m1, m2) = (ws.morphism(first)?, ws.morphism(second)?);
                let composite = match (m1, m2) {
                    (Morphism::Table(_), Morphism::Table(_)) => m2.diamond(m1)?,
                    (Morphism::Interval(a), Morphism::Interval(b)) => {
                        out.detail("note", "composed as the morphism of the composite map");
                        Morphism::Interval(MapMorphism::new(b.map.then(&a.map)))
                    }
                    (Morphism::Nat(a), Morphism::Nat(b)) => {
                        out.detail("note", "composed as the morphism of the composite map");
                        Morphism::Nat(MapMorphism::new(b.map.then(&a.map)))
                    }
                    _ => return Err(CoreError::NotComposable.into()),
                };
                match &composite {
                    Morphism::Table(t) => out.detail("table", table_json(t)),
                    Morphism::Interval(m) => out.detail("map", m.map.describe()),
                    Morphism::Nat(m) => out.detail("map", m.map.describe()),
                }
                out.sampled = !matches!(composite, Morphism::Table(_));
                let r = composite.check(&families(f), st)?;
                out.morphism_report(&r);
                Ok(())
            }
            Command::DualMap { morphism } => {
                let Morphism::Table(t) = ws.morphism(morphism)? else {
                    return Err(CoreError::InfiniteCarrier.into());
                };
                let (sd, td) = (dualize(t.source())?, dualize(t.target())?);
                let f = dual_map(t, &sd, &td)?;
                let table: Vec<Value> =
                    f.table.iter().enumerate().map(|(y, &x)| json!([td.point_name(y), sd.point_name(x)])).collect();
                out.detail("table", table);
                out.detail("hypotheses", f.hypotheses);
                out.push(VerdictEntry::check(
                    "continuous",
                    &if f.continuous { Vec::new() } else { vec!["preimage of an open set is not open".into()] },
                ));
                out.push(VerdictEntry::check("confun", &f.confun_failures));
                Ok(())
            }
            Command::FunctorLaws { first, second, .. } => self.functor_laws(first, second, out),
            Command::Naturality { subject, points, regions, .. } => self.naturality(subject, *points, regions, out),
            Command::Classify { morphism, .. } => {
                let c = match ws.morphism(morphism)? {
                    Morphism::Table(t) => classify_table(t),
                    Morphism::Interval(m) => {
                        out.sampled = true;
                        classify_map(m, st)?
                    }
                    Morphism::Nat(m) => {
                        out.sampled = true;
                        classify_map(m, st)?
                    }
                };
                classification(&c, out);
                Ok(())
            }
            Command::EmitDot { target, algebra } => {
                let s = finite(ws.algebra(algebra)?)?;
                let text = match target {
                    DotTarget::ContactGraph => crate::dot::contact_graph(algebra, s),
                    DotTarget::DualSpace => crate::dot::dual_space(algebra, s, &dualize(s)?),
                };
                out.detail("dot", text.clone());
                out.dot = Some(text);
                Ok(())
            }
        }
    }

    fn functor_laws(&self, first: &str, second: &str, out: &mut Exec) -> Result<()> {
        let st = &self.strategy;
        let (a, b) = (self.ws.get(first)?, self.ws.get(second)?);
        let report = match (a, b) {
            (Entity::Map(MapValue::Space(f)), Entity::Map(MapValue::Space(g))) => space_functor_law(f, g)?,
            (Entity::Morphism(Morphism::Table(p)), Entity::Morphism(Morphism::Table(q))) => dual_functor_law(p, q)?,
            _ => match (pl_of(a), pl_of(b), nat_of(a), nat_of(b)) {
                (Some(f), Some(g), _, _) => {
                    out.sampled = true;
                    stock_functor_law(&f, &g, st)
                }
                (_, _, Some(f), Some(g)) => {
                    out.sampled = true;
                    stock_functor_law(&f, &g, st)
                }
                _ => return Err(CoreError::NotComposable.into()),
            },
        };
        out.law("functor-law", &report);
        Ok(())
    }

    fn naturality(&self, subject: &str, points: Option<usize>, regions: &[String], out: &mut Exec) -> Result<()> {
        let ws = self.ws;
        let st = &self.strategy;
        let count = points.unwrap_or(DEFAULT_POINTS);
        let subject = ws.get(subject)?;
        if let Entity::Morphism(Morphism::Table(t)) = subject {
            let (sd, td) = (dualize(t.source())?, dualize(t.target())?);
            let f = dual_map(t, &sd, &td)?;
            out.law("square", &algebra_square(t, &sd, &td, &f));
            return Ok(());
        }
        if let Entity::Map(MapValue::Space(f)) = subject {
            out.law("square", &space_square(f)?);
            return Ok(());
        }
        out.sampled = true;
        if let Some(f) = pl_of(subject) {
            let declared = regions
                .iter()
                .map(|r| match ws.region(r)? {
                    RegionValue::Interval(g) => Ok(g.clone()),
                    RegionValue::Nat(_) => Err(CliError::Core(CoreError::ModelMismatch)),
                })
                .collect::<Result<Vec<_>>>()?;
            stock_naturality(MapMorphism::new(f), count, &declared, st, out);
            return Ok(());
        }
        if let Some(f) = nat_of(subject) {
            let declared = regions
                .iter()
                .map(|r| match ws.region(r)? {
                    RegionValue::Nat(g) => Ok(g.clone()),
                    RegionValue::Interval(_) => Err(CliError::Core(CoreError::ModelMismatch)),
                })
                .collect::<Result<Vec<_>>>()?;
            stock_naturality(MapMorphism::new(f), count, &declared, st, out);
            return Ok(());
        }
        Err(CoreError::NotFinite.into())
    }
}

fn stock_naturality<F: StockMap>(
    m: MapMorphism<F>,
    count: usize,
    declared: &[<F::Model as RegionAlgebra>::Elem],
    st: &QuantifierStrategy,
    out: &mut Exec,
) {
    let pts = sample_points(&m.model, st.seed, count);
    out.detail("points", pts.len());
    out.law("square", &stock_square(&m, &pts, st));
    if !declared.is_empty() {
        let unbounded: Vec<String> =
            declared.iter().filter(|r| !m.model.bounded(r)).map(|r| m.model.render(r)).collect();
        if !unbounded.is_empty() {
            out.detail("unbounded_regions", unbounded);
        }
        let bounded: Vec<_> = declared.iter().filter(|r| m.model.bounded(r)).cloned().collect();
        out.law("declared-square", &stock_square_on(&m, &pts, &bounded, st.witness_depth));
    }
}

fn pl_of(e: &Entity) -> Option<PlMap> {
    match e {
        Entity::Map(MapValue::Pl(f)) => Some(f.clone()),
        Entity::Morphism(Morphism::Interval(m)) => Some(m.map.clone()),
        _ => None,
    }
}

fn nat_of(e: &Entity) -> Option<NatMap> {
    match e {
        Entity::Map(MapValue::Nat(f)) => Some(f.clone()),
        Entity::Morphism(Morphism::Nat(m)) => Some(m.map.clone()),
        _ => None,
    }
}

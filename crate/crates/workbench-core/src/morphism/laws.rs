//! Functor laws and naturality squares, exact on finite structures and
//! sampled on the stock models.

use std::sync::Arc;

use super::check::shrink_join;
use super::dual::{dual_map, stock_trace_contains, DualMap};
use super::{MapMorphism, TableMorphism};
use crate::algebra::{rng_from_seed, sample_stream, RegionAlgebra};
use crate::axioms::QuantifierStrategy;
use crate::bits::Bits;
use crate::duality::{dualize, t_map, DualSpace};
use crate::error::Result;
use crate::finite::Element;
use crate::regions::{StockMap, StockModel};
use crate::spaces::{rc_algebra, RegularClosedAlgebra, SpaceMap};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LawReport {
    pub checks: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl LawReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `φ_f : RC(Y) → RC(X)` for a continuous `f : X → Y`, with both algebras.
#[derive(Clone, Debug)]
pub struct SpaceMorphism {
    pub phi: TableMorphism,
    pub rc_y: RegularClosedAlgebra,
    pub rc_x: RegularClosedAlgebra,
}

/// `φ_f(G) = cl_X(f⁻¹(int_Y G))`.
pub fn space_morphism(f: &SpaceMap) -> Result<SpaceMorphism> {
    let rc_x = rc_algebra(&f.from)?;
    let rc_y = rc_algebra(&f.to)?;
    let table = (0..rc_y.lca().element_count() as Element)
        .map(|g| {
            let pulled = f.from.closure(f.preimage(f.to.interior(rc_y.to_points(g))));
            rc_x.from_points(pulled).expect("closures of open sets are regular closed")
        })
        .collect();
    let phi = TableMorphism::new(Arc::new(rc_y.lca().clone()), Arc::new(rc_x.lca().clone()), table)?;
    Ok(SpaceMorphism { phi, rc_y, rc_x })
}

/// `Λᵗ(g ∘ f) = Λᵗ(f) ⋄ Λᵗ(g)` for `f : X → Y`, `g : Y → Z`.
pub fn space_functor_law(f: &SpaceMap, g: &SpaceMap) -> Result<LawReport> {
    let h = f.then(g)?;
    let (pf, pg, ph) = (space_morphism(f)?, space_morphism(g)?, space_morphism(&h)?);
    let composite = pf.phi.diamond(&pg.phi)?;
    let mut report = LawReport::default();
    for (e, (&l, &r)) in ph.phi.table().iter().zip(composite.table()).enumerate() {
        report.checks += 1;
        if l != r {
            let z = pg.rc_y.to_points(e as Element);
            report.failures.push(format!(
                "G = {:?}: φ_(g∘f)(G) = {:?}, (φ_f ⋄ φ_g)(G) = {:?}",
                g.to.names(z),
                f.from.names(ph.rc_x.to_points(l)),
                f.from.names(ph.rc_x.to_points(r))
            ));
        }
    }
    Ok(report)
}

/// `Λᵃ(φ₂ ⋄ φ₁) = Λᵃ(φ₁) ∘ Λᵃ(φ₂)` for `φ₁ : A → B`, `φ₂ : B → C`.
pub fn dual_functor_law(phi1: &TableMorphism, phi2: &TableMorphism) -> Result<LawReport> {
    let (da, db, dc) = (dualize(phi1.source())?, dualize(phi1.target())?, dualize(phi2.target())?);
    let f1 = dual_map(phi1, &da, &db)?;
    let f2 = dual_map(phi2, &db, &dc)?;
    let f21 = dual_map(&phi2.diamond(phi1)?, &da, &dc)?;
    let mut report = LawReport::default();
    for p in 0..dc.len() {
        report.checks += 1;
        let (l, r) = (f21.table[p], f1.table[f2.table[p]]);
        if l != r {
            report.failures.push(format!(
                "at {}: Λᵃ(φ₂ ⋄ φ₁) gives {}, Λᵃ(φ₁) ∘ Λᵃ(φ₂) gives {}",
                dc.point_name(p),
                da.point_name(l),
                da.point_name(r)
            ));
        }
    }
    Ok(report)
}

/// `λᵍ_B ∘ φ = φ_{f_φ} ∘ λᵍ_A`, comparing point sets of the target's dual.
pub fn algebra_square(m: &TableMorphism, src_dual: &DualSpace, tgt_dual: &DualSpace, f: &DualMap) -> LawReport {
    let (s, t) = (m.source(), m.target());
    let mut report = LawReport::default();
    for a in 0..s.element_count() as Element {
        report.checks += 1;
        let left = tgt_dual.lambda_g(m.apply(a));
        let open = src_dual.space.interior(src_dual.lambda_g(a));
        let pulled: Bits = (0..f.table.len()).filter(|&p| open.contains(f.table[p])).collect();
        let right = tgt_dual.space.closure(pulled);
        if left != right {
            report.failures.push(format!(
                "a = {}: λᵍ(φ(a)) = {:?}, φ_f(λᵍ(a)) = {:?} (φ(a) = {})",
                s.render(&a),
                tgt_dual.space.names(left),
                tgt_dual.space.names(right),
                t.render(&m.apply(a))
            ));
        }
    }
    report
}

/// `t_Y ∘ f = f′ ∘ t_X` with `f′` the dual map of `φ_f`.
pub fn space_square(f: &SpaceMap) -> Result<LawReport> {
    let sm = space_morphism(f)?;
    let (tx, ty) = (t_map(&f.from)?, t_map(&f.to)?);
    let fd = dual_map(&sm.phi, &ty.dual, &tx.dual)?;
    let mut report = LawReport::default();
    for x in 0..f.from.len() {
        match (tx.table[x], ty.table[f.assign[x]]) {
            (Some(sx), Some(sy)) => {
                report.checks += 1;
                if fd.table[sx] != sy {
                    report.failures.push(format!(
                        "x = {}: t_Y(f(x)) = {}, f′(t_X(x)) = {}",
                        f.from.points()[x],
                        ty.dual.point_name(sy),
                        ty.dual.point_name(fd.table[sx])
                    ));
                }
            }
            _ => report.notes.push(format!("t is undefined at or over {}", f.from.points()[x])),
        }
    }
    Ok(report)
}

/// `t_Y(f(x)) = f_{φ_f}(t_X(x))` on the stock models, compared through
/// trace membership of bounded regions at sampled points.
pub fn stock_square<F: StockMap>(
    m: &MapMorphism<F>,
    points: &[<F::Model as StockModel>::Point],
    strategy: &QuantifierStrategy,
) -> LawReport {
    let model = &m.model;
    let regions: Vec<_> = sample_stream(model, strategy.seed, strategy.sample_count.max(1))
        .into_iter()
        .filter_map(|r| if model.bounded(&r) { Some(r) } else { model.truncate(&r, 4) })
        .collect();
    stock_square_on(m, points, &regions, strategy.witness_depth)
}

/// The same square on given regions; unbounded regions always test false
/// on the trace side, so callers should pass bounded ones.
pub fn stock_square_on<F: StockMap>(
    m: &MapMorphism<F>,
    points: &[<F::Model as StockModel>::Point],
    regions: &[<F::Model as RegionAlgebra>::Elem],
    depth: usize,
) -> LawReport {
    let model = &m.model;
    let mut report = LawReport::default();
    for x in points {
        let fx = m.map.eval(x);
        for r in regions {
            report.checks += 1;
            let direct = model.contains_point(r, &fx);
            if direct != stock_trace_contains(m, x, r, depth) {
                report.failures.push(format!(
                    "x = {}, F = {}: f(x) ∈ F is {direct}, the dual trace disagrees",
                    model.render_point(x),
                    model.render(r)
                ));
                return report;
            }
        }
    }
    report
}

/// `φ_{g∘f} = φ_f ⋄ φ_g` on a stock model, by the dyadic-shrink scheme.
pub fn stock_functor_law<F: StockMap>(f: &F, g: &F, strategy: &QuantifierStrategy) -> LawReport {
    let model = F::Model::default();
    let h = f.then(g);
    let mut rng = rng_from_seed(strategy.seed);
    let parts = |r: &<F::Model as RegionAlgebra>::Elem| f.phi(&g.phi(r));
    let mut report = LawReport::default();
    for r in sample_stream(&model, strategy.seed, strategy.sample_count.max(1)) {
        report.checks += 1;
        let target = h.phi(&r);
        let dense = h.dense_points(&r, &mut rng, 4);
        if let Some(w) = shrink_join(&model, &r, &target, &parts, &dense, strategy.witness_depth) {
            report.failures.push(w.join("; "));
            break;
        }
    }
    report.notes.push(format!("dyadic shrinking to depth {}", strategy.witness_depth));
    report
}

//! Axiom verification engine shared by every model.

use std::fmt;

use rand::Rng;

use crate::algebra::{rng_from_seed, sample_stream, way_below, RegionAlgebra, SampleRng};
use crate::error::{Error, Result};

pub const DEFAULT_WITNESS_DEPTH: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuantifierStrategy {
    pub mode: Mode,
    pub sample_count: usize,
    pub seed: u64,
    /// Bound on existential witness search: truncation radius, dyadic
    /// shrink exponent, and number of sampled fallback candidates.
    pub witness_depth: usize,
}

impl QuantifierStrategy {
    pub fn exhaustive() -> Self {
        QuantifierStrategy { mode: Mode::Exhaustive, sample_count: 0, seed: 0, witness_depth: DEFAULT_WITNESS_DEPTH }
    }

    pub fn sampled(sample_count: usize, seed: u64) -> Self {
        QuantifierStrategy { mode: Mode::Sampled, sample_count, seed, witness_depth: DEFAULT_WITNESS_DEPTH }
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.witness_depth = depth;
        self
    }
}

/// Three-valued outcome. `Inconclusive` carries the first instance whose
/// existential witness search ran out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<W> {
    Holds,
    Fails(W),
    Inconclusive(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Verdict::Inconclusive(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) | Verdict::Inconclusive(w) => Some(w),
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        match self {
            Verdict::Holds => Verdict::Holds,
            Verdict::Fails(w) => Verdict::Fails(f(w)),
            Verdict::Inconclusive(w) => Verdict::Inconclusive(f(w)),
        }
    }

    pub fn outcome(&self) -> Outcome {
        match self {
            Verdict::Holds => Outcome::Holds,
            Verdict::Fails(_) => Outcome::Fails,
            Verdict::Inconclusive(_) => Outcome::Inconclusive,
        }
    }
}

/// Summary of a set of verdicts: any failure wins over inconclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Holds,
    Inconclusive,
    Fails,
}

impl Outcome {
    pub fn combine(self, other: Outcome) -> Outcome {
        self.max(other)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Holds => "holds",
            Outcome::Fails => "fails",
            Outcome::Inconclusive => "inconclusive",
        }
    }
}

impl From<bool> for Outcome {
    fn from(ok: bool) -> Self {
        if ok {
            Outcome::Holds
        } else {
            Outcome::Fails
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    JoinCommutative,
    MeetCommutative,
    JoinAssociative,
    MeetAssociative,
    Absorption,
    Distributive,
    Complemented,
    Bounds,
    OrderFromJoin,
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    LL1,
    LL2,
    LL3,
    LL4,
    LL5,
    LL6,
    LL7,
    Con,
    BoundedZero,
    BoundedDown,
    BoundedJoin,
    BC1,
    BC2,
    BC3,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        use Axiom::*;
        match self {
            JoinCommutative => "join-commutative",
            MeetCommutative => "meet-commutative",
            JoinAssociative => "join-associative",
            MeetAssociative => "meet-associative",
            Absorption => "absorption",
            Distributive => "distributive",
            Complemented => "complemented",
            Bounds => "bounds",
            OrderFromJoin => "order-from-join",
            C1 => "C1",
            C2 => "C2",
            C3 => "C3",
            C4 => "C4",
            C5 => "C5",
            C6 => "C6",
            LL1 => "LL1",
            LL2 => "LL2",
            LL3 => "LL3",
            LL4 => "LL4",
            LL5 => "LL5",
            LL6 => "LL6",
            LL7 => "LL7",
            Con => "CON",
            BoundedZero => "IB-zero",
            BoundedDown => "IB-down",
            BoundedJoin => "IB-join",
            BC1 => "BC1",
            BC2 => "BC2",
            BC3 => "BC3",
        }
    }

    pub fn arity(self) -> usize {
        use Axiom::*;
        match self {
            LL2 | BoundedZero => 0,
            Complemented | Bounds | C1 | LL6 | Con | C6 | BC3 => 1,
            JoinCommutative | MeetCommutative | Absorption | OrderFromJoin | C2 | C3 | C5 | LL1 | LL5 | LL7
            | BoundedDown | BoundedJoin | BC1 | BC2 => 2,
            JoinAssociative | MeetAssociative | Distributive | C4 | LL4 => 3,
            LL3 => 4,
        }
    }

    pub fn is_existential(self) -> bool {
        use Axiom::*;
        matches!(self, C5 | C6 | LL5 | LL6 | BC1 | BC2 | BC3)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Bool,
    Ca,
    Ll,
    Nca,
    Lca,
    Con,
}

impl Suite {
    pub fn axioms(self) -> Vec<Axiom> {
        use Axiom::*;
        match self {
            Suite::Bool => vec![
                JoinCommutative,
                MeetCommutative,
                JoinAssociative,
                MeetAssociative,
                Absorption,
                Distributive,
                Complemented,
                Bounds,
                OrderFromJoin,
            ],
            Suite::Ca => vec![C1, C2, C3, C4],
            Suite::Ll => vec![LL1, LL2, LL3, LL4, LL5, LL6, LL7],
            Suite::Nca => vec![C1, C2, C3, C4, C5, C6],
            Suite::Lca => vec![C1, C2, C3, C4, BoundedZero, BoundedDown, BoundedJoin, BC1, BC2, BC3],
            Suite::Con => vec![Con],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Bool => "BOOL",
            Suite::Ca => "CA",
            Suite::Ll => "LL",
            Suite::Nca => "NCA",
            Suite::Lca => "LCA",
            Suite::Con => "CON",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Some(match s.to_ascii_uppercase().as_str() {
            "BOOL" => Suite::Bool,
            "CA" => Suite::Ca,
            "LL" => Suite::Ll,
            "NCA" => Suite::Nca,
            "LCA" => Suite::Lca,
            "CON" => Suite::Con,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport<E> {
    pub suite: Suite,
    pub verdicts: Vec<(Axiom, Verdict<Vec<E>>)>,
    pub samples_used: usize,
    pub seed: u64,
    pub notes: Vec<String>,
}

impl<E> AxiomReport<E> {
    pub fn outcome(&self) -> Outcome {
        self.verdicts.iter().map(|(_, v)| v.outcome()).fold(Outcome::Holds, Outcome::combine)
    }

    pub fn all_hold(&self) -> bool {
        self.outcome() == Outcome::Holds
    }

    pub fn verdict(&self, axiom: Axiom) -> Option<&Verdict<Vec<E>>> {
        self.verdicts.iter().find(|(a, _)| *a == axiom).map(|(_, v)| v)
    }

    pub fn failing(&self) -> impl Iterator<Item = &(Axiom, Verdict<Vec<E>>)> {
        self.verdicts.iter().filter(|(_, v)| v.fails())
    }
}

/// Result of one axiom instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Instance {
    Holds,
    Fails,
    NoWitness,
}

struct Search<'p, E> {
    pool: &'p [E],
    exhaustive: bool,
    depth: usize,
    max_truncation: usize,
}

impl<E: Clone> Search<'_, E> {
    fn find<A>(&self, alg: &A, oracle: Vec<E>, ok: impl Fn(&E) -> bool) -> Option<E>
    where
        A: RegionAlgebra<Elem = E> + ?Sized,
    {
        let _ = alg;
        if let Some(w) = oracle.into_iter().find(|e| ok(e)) {
            return Some(w);
        }
        let limit = if self.exhaustive { self.pool.len() } else { self.depth.min(self.pool.len()) };
        self.pool[..limit].iter().find(|e| ok(e)).cloned()
    }
}

fn exists(found: bool) -> Instance {
    if found {
        Instance::Holds
    } else {
        Instance::NoWitness
    }
}

fn check(ok: bool) -> Instance {
    if ok {
        Instance::Holds
    } else {
        Instance::Fails
    }
}

fn eval_instance<A: RegionAlgebra + ?Sized>(
    alg: &A,
    axiom: Axiom,
    t: &[A::Elem],
    search: &mut Search<'_, A::Elem>,
) -> Instance {
    use Axiom::*;
    let zero = alg.zero();
    let one = alg.one();
    let wb = |x: &A::Elem, y: &A::Elem| way_below(alg, x, y);
    match axiom {
        JoinCommutative => check(alg.join(&t[0], &t[1]) == alg.join(&t[1], &t[0])),
        MeetCommutative => check(alg.meet(&t[0], &t[1]) == alg.meet(&t[1], &t[0])),
        JoinAssociative => check(alg.join(&alg.join(&t[0], &t[1]), &t[2]) == alg.join(&t[0], &alg.join(&t[1], &t[2]))),
        MeetAssociative => check(alg.meet(&alg.meet(&t[0], &t[1]), &t[2]) == alg.meet(&t[0], &alg.meet(&t[1], &t[2]))),
        Absorption => {
            check(alg.join(&t[0], &alg.meet(&t[0], &t[1])) == t[0] && alg.meet(&t[0], &alg.join(&t[0], &t[1])) == t[0])
        }
        Distributive => {
            let (a, b, c) = (&t[0], &t[1], &t[2]);
            let d1 = alg.meet(a, &alg.join(b, c)) == alg.join(&alg.meet(a, b), &alg.meet(a, c));
            let d2 = alg.join(a, &alg.meet(b, c)) == alg.meet(&alg.join(a, b), &alg.join(a, c));
            check(d1 && d2)
        }
        Complemented => {
            let c = alg.complement(&t[0]);
            check(alg.meet(&t[0], &c) == zero && alg.join(&t[0], &c) == one)
        }
        Bounds => check(alg.join(&t[0], &zero) == t[0] && alg.meet(&t[0], &one) == t[0]),
        OrderFromJoin => check(alg.leq(&t[0], &t[1]) == (alg.join(&t[0], &t[1]) == t[1])),
        C1 => check(t[0] == zero || alg.contact(&t[0], &t[0])),
        C2 => check(!alg.contact(&t[0], &t[1]) || (t[0] != zero && t[1] != zero)),
        C3 => check(!alg.contact(&t[0], &t[1]) || alg.contact(&t[1], &t[0])),
        C4 => {
            let lhs = alg.contact(&t[0], &alg.join(&t[1], &t[2]));
            check(lhs == (alg.contact(&t[0], &t[1]) || alg.contact(&t[0], &t[2])))
        }
        C5 => {
            let (a, b) = (&t[0], &t[1]);
            if alg.contact(a, b) {
                return Instance::Holds;
            }
            // c* interpolates between a and b*.
            let oracle: Vec<_> =
                alg.interpolate(a, &alg.complement(b)).map(|d| alg.complement(&d)).into_iter().collect();
            exists(search.find(alg, oracle, |c| !alg.contact(a, c) && !alg.contact(b, &alg.complement(c))).is_some())
        }
        C6 => {
            let a = &t[0];
            if *a == one {
                return Instance::Holds;
            }
            let oracle: Vec<_> = alg.shrink_nonzero(&alg.complement(a)).into_iter().collect();
            exists(search.find(alg, oracle, |b| *b != zero && !alg.contact(b, a)).is_some())
        }
        LL1 => check(!wb(&t[0], &t[1]) || alg.leq(&t[0], &t[1])),
        LL2 => check(wb(&zero, &zero)),
        LL3 => {
            let (a, b, c, d) = (&t[0], &t[1], &t[2], &t[3]);
            check(!(alg.leq(a, b) && wb(b, c) && alg.leq(c, d)) || wb(a, d))
        }
        LL4 => check(!(wb(&t[0], &t[2]) && wb(&t[1], &t[2])) || wb(&alg.join(&t[0], &t[1]), &t[2])),
        LL5 => {
            let (a, c) = (&t[0], &t[1]);
            if !wb(a, c) {
                return Instance::Holds;
            }
            let oracle: Vec<_> = alg.interpolate(a, c).into_iter().collect();
            exists(search.find(alg, oracle, |b| wb(a, b) && wb(b, c)).is_some())
        }
        LL6 => {
            let a = &t[0];
            if *a == zero {
                return Instance::Holds;
            }
            let oracle: Vec<_> = alg.shrink_nonzero(a).into_iter().collect();
            exists(search.find(alg, oracle, |b| *b != zero && wb(b, a)).is_some())
        }
        LL7 => check(!wb(&t[0], &t[1]) || wb(&alg.complement(&t[1]), &alg.complement(&t[0]))),
        Con => {
            let a = &t[0];
            check(*a == zero || *a == one || alg.contact(a, &alg.complement(a)))
        }
        BoundedZero => check(alg.bounded(&zero)),
        BoundedDown => check(!(alg.bounded(&t[0]) && alg.leq(&t[1], &t[0])) || alg.bounded(&t[1])),
        BoundedJoin => check(!(alg.bounded(&t[0]) && alg.bounded(&t[1])) || alg.bounded(&alg.join(&t[0], &t[1]))),
        BC1 => {
            let (a, c) = (&t[0], &t[1]);
            if !(alg.bounded(a) && wb(a, c)) {
                return Instance::Holds;
            }
            let oracle: Vec<_> = alg.interpolate(a, c).into_iter().collect();
            exists(search.find(alg, oracle, |b| alg.bounded(b) && wb(a, b) && wb(b, c)).is_some())
        }
        BC2 => {
            let (a, b) = (&t[0], &t[1]);
            if !alg.contact(a, b) {
                return Instance::Holds;
            }
            let ok = |c: &A::Elem| alg.bounded(c) && alg.contact(a, &alg.meet(c, b));
            for n in 1..=search.depth {
                if let Some(c) = alg.truncate(b, n) {
                    if ok(&c) {
                        search.max_truncation = search.max_truncation.max(n);
                        return Instance::Holds;
                    }
                }
            }
            exists(search.find(alg, Vec::new(), ok).is_some())
        }
        BC3 => {
            let a = &t[0];
            if *a == zero {
                return Instance::Holds;
            }
            let oracle: Vec<_> = alg.shrink_nonzero(a).into_iter().collect();
            exists(search.find(alg, oracle, |b| *b != zero && alg.bounded(b) && wb(b, a)).is_some())
        }
    }
}

/// Tuples for one axiom in sampled mode. Half of them are nudged so the
/// axiom's premise tends to hold; otherwise premises like `a ≪ c` would
/// almost never fire on random regions.
fn sampled_tuples<A: RegionAlgebra + ?Sized>(
    alg: &A,
    axiom: Axiom,
    pool: &[A::Elem],
    count: usize,
    rng: &mut SampleRng,
) -> Vec<Vec<A::Elem>> {
    use Axiom::*;
    let arity = axiom.arity();
    if arity == 0 {
        return vec![Vec::new()];
    }
    if arity == 1 {
        return pool.iter().take(count).map(|a| vec![a.clone()]).collect();
    }
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let mut t: Vec<A::Elem> = (0..arity).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
        if i % 2 == 1 {
            match axiom {
                LL1 | LL5 | LL7 => {
                    if let Some(b) = alg.way_above(&t[0], rng) {
                        t[1] = b;
                    }
                }
                LL3 => {
                    t[0] = alg.meet(&t[0], &t[1]);
                    if let Some(c) = alg.way_above(&t[1], rng) {
                        t[3] = alg.join(&c, &t[3]);
                        t[2] = c;
                    }
                }
                LL4 => {
                    if let Some(c) = alg.way_above(&alg.join(&t[0], &t[1]), rng) {
                        t[2] = c;
                    }
                }
                BC1 => {
                    if !alg.bounded(&t[0]) {
                        if let Some(a) = alg.truncate(&t[0], 4) {
                            t[0] = a;
                        }
                    }
                    if let Some(c) = alg.way_above(&t[0], rng) {
                        t[1] = c;
                    }
                }
                C5 => {
                    if let Some(c) = alg.way_above(&t[0], rng) {
                        t[1] = alg.complement(&c);
                    }
                }
                BC2 => t[1] = alg.join(&t[0], &t[1]),
                BoundedDown => t[1] = alg.meet(&t[0], &t[1]),
                _ => {}
            }
        }
        out.push(t);
    }
    out
}

fn exhaustive_tuples<E: Clone>(elements: &[E], arity: usize) -> impl Iterator<Item = Vec<E>> + '_ {
    let n = elements.len();
    let total = if arity == 0 { 1 } else { n.checked_pow(arity as u32).unwrap_or(0) };
    (0..total).map(move |mut k| {
        let mut idx = vec![0; arity];
        for slot in idx.iter_mut().rev() {
            *slot = k % n;
            k /= n;
        }
        idx.into_iter().map(|i| elements[i].clone()).collect()
    })
}

/// Checks every axiom of `suite` on `alg`.
pub fn check_axioms<A: RegionAlgebra + ?Sized>(
    alg: &A,
    suite: Suite,
    strategy: &QuantifierStrategy,
) -> Result<AxiomReport<A::Elem>> {
    check_axiom_list(alg, suite, &suite.axioms(), strategy)
}

pub fn check_axiom_list<A: RegionAlgebra + ?Sized>(
    alg: &A,
    suite: Suite,
    axioms: &[Axiom],
    strategy: &QuantifierStrategy,
) -> Result<AxiomReport<A::Elem>> {
    let exhaustive = strategy.mode == Mode::Exhaustive;
    let pool = if exhaustive {
        alg.elements().ok_or(Error::ExhaustiveUnavailable)?
    } else {
        sample_stream(alg, strategy.seed, strategy.sample_count.max(1))
    };
    let mut verdicts = Vec::new();
    let mut samples_used = 0;
    let mut notes = Vec::new();
    for (k, &axiom) in axioms.iter().enumerate() {
        let mut search = Search { pool: &pool, exhaustive, depth: strategy.witness_depth, max_truncation: 0 };
        let tuples: Box<dyn Iterator<Item = Vec<A::Elem>>> = if exhaustive {
            Box::new(exhaustive_tuples(&pool, axiom.arity()))
        } else {
            let mut rng = rng_from_seed(strategy.seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(k as u64 + 1)));
            Box::new(sampled_tuples(alg, axiom, &pool, strategy.sample_count, &mut rng).into_iter())
        };
        let mut verdict = Verdict::Holds;
        for t in tuples {
            samples_used += 1;
            match eval_instance(alg, axiom, &t, &mut search) {
                Instance::Holds => {}
                Instance::Fails => {
                    verdict = Verdict::Fails(t);
                    break;
                }
                Instance::NoWitness if exhaustive => {
                    verdict = Verdict::Fails(t);
                    break;
                }
                Instance::NoWitness => {
                    if verdict.holds() {
                        verdict = Verdict::Inconclusive(t);
                    }
                }
            }
        }
        if axiom == Axiom::BC2 && search.max_truncation > 0 {
            notes.push(format!("BC2 witnesses found by truncation up to n={}", search.max_truncation));
        }
        verdicts.push((axiom, verdict));
    }
    Ok(AxiomReport { suite, verdicts, samples_used, seed: strategy.seed, notes })
}

/// Re-evaluates one axiom instance. `Some(false)` means the tuple is a
/// counterexample; `None` means an existential search ran out without a
/// complete enumerator.
pub fn recheck<A: RegionAlgebra + ?Sized>(alg: &A, axiom: Axiom, tuple: &[A::Elem], depth: usize) -> Option<bool> {
    let (pool, exhaustive) = match alg.elements() {
        Some(all) => (all, true),
        None => (Vec::new(), false),
    };
    let mut search = Search { pool: &pool, exhaustive, depth, max_truncation: 0 };
    match eval_instance(alg, axiom, tuple, &mut search) {
        Instance::Holds => Some(true),
        Instance::Fails => Some(false),
        Instance::NoWitness if exhaustive => Some(false),
        Instance::NoWitness => None,
    }
}

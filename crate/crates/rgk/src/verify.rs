//! The batch verification harness: ten suites, each comparing library output
//! with an independent oracle.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog;
use crate::cpm::sieve::{all_morphisms, local_axiom, maximal_axiom, pullback_axiom, Morphism, Sieve};
use crate::cpm::{cpm_hom, dualizable, structure_object, wheel_cover, Shape};
use crate::cyclic::CyclicOrder;
use crate::generate::{chordal_structures, ribbon_corpus};
use crate::grading::{chordal_grading, find_isomorphism};
use crate::graph::{EdgeAction, EdgeId, Graph, GraphMorphism, RawGraph, VertexId};
use crate::homology::GradedDims;
use crate::linalg::{rat, Matrix};
use crate::mirror::{bb_compare, bb_compare_sides, nodal_end_ring, perf_hom, BalloonShape, DescentComplex};
use crate::quiver::{
    euler_form, is_indecomposable, microlocal_stalk, quiver_from_lagrangian, reflect_dimension, thin_indecomposables,
    ConicLagrangian, Quiver, Rep,
};
use crate::ribbon::{ChordalStructure, RibbonError, RibbonGraph, SimpleContraction};

pub const DEFAULT_TRUNCATION: usize = 25;

#[derive(Debug, Clone, Serialize)]
pub struct Options {
    pub seed: u64,
    /// Number of random ribbon graphs in the genus suite.
    pub corpus: usize,
    /// Largest `a₁ + a₂` in the wheel/balloon suite.
    pub indices_max: u32,
    /// Largest index sum in the end-to-end and cover suites.
    pub hms_max: usize,
    pub truncation: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 0, corpus: 60, indices_max: 6, hms_max: 5, truncation: DEFAULT_TRUNCATION }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub oracle: &'static str,
    pub passed: bool,
    /// Instances checked.
    pub checks: usize,
    pub detail: String,
    #[serde(skip)]
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub options: Options,
    pub criteria: Vec<CriterionReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<26} {:>7} checks  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.checks,
            self.detail
        )
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.criteria {
            writeln!(f, "{c}  ({} ms)", c.millis)?;
        }
        let failed = self.criteria.iter().filter(|c| !c.passed).count();
        write!(f, "{} of {} suites passed", self.criteria.len() - failed, self.criteria.len())
    }
}

/// Tally of one suite: checks made and the first failure seen.
#[derive(Default)]
struct Tally {
    checks: usize,
    failure: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn finish(self, id: u8, name: &'static str, oracle: &'static str, summary: String, start: Instant) -> CriterionReport {
        CriterionReport {
            id,
            name,
            oracle,
            passed: self.failure.is_none(),
            checks: self.checks,
            detail: self.failure.unwrap_or(summary),
            millis: start.elapsed().as_millis(),
        }
    }
}

pub const CRITERIA: [&str; 10] = [
    "euler-genus",
    "leaf-order-join",
    "quiver-model",
    "bgp-reflection",
    "nodal-ring",
    "beilinson-bondal",
    "hms-end-to-end",
    "grothendieck-topology",
    "gradings",
    "cover-independence",
];

pub fn run(id: u8, opts: &Options) -> CriterionReport {
    match id {
        1 => euler_genus(opts),
        2 => leaf_order_join(),
        3 => quiver_model(),
        4 => bgp_reflection(),
        5 => nodal_ring(opts),
        6 => beilinson_bondal(opts),
        7 => hms_end_to_end(opts),
        8 => grothendieck_topology(opts),
        9 => gradings(),
        10 => cover_independence(opts),
        _ => panic!("criteria are numbered 1 to 10"),
    }
}

pub fn run_all(opts: &Options) -> Report {
    Report { options: opts.clone(), criteria: (1..=10).map(|id| run(id, opts)).collect() }
}

/// Faces of a compact ribbon graph as orbits of `σ ∘ α` on darts `(edge, end)`,
/// with `σ` the rotation at each vertex and `α` the end swap.
fn face_count(r: &RibbonGraph) -> usize {
    let g = r.graph();
    let darts: Vec<(EdgeId, usize)> = g.edges().keys().flat_map(|e| [(e.clone(), 0), (e.clone(), 1)]).collect();
    let next = |(e, end): &(EdgeId, usize)| -> (EdgeId, usize) {
        let other = 1 - end;
        let v = g.edges()[e].ends[other].vertex().expect("compact").clone();
        let f = r.orders()[&v].succ(e).expect("edge at vertex").clone();
        let slot = g.edges()[&f].slot_of(&v).expect("incident");
        (f, slot)
    };
    let mut seen = BTreeSet::new();
    let mut faces = 0;
    for d in &darts {
        if seen.contains(d) {
            continue;
        }
        faces += 1;
        let mut cur = d.clone();
        while seen.insert(cur.clone()) {
            cur = next(&cur);
        }
    }
    faces
}

fn euler_genus(opts: &Options) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::default();
    let corpus = ribbon_corpus(opts.seed, opts.corpus.max(50), 8);
    let mut genera = BTreeMap::new();
    for (i, r) in corpus.iter().enumerate() {
        let (v, e) = (r.graph().vertices().len() as i64, r.graph().edges().len() as i64);
        let b = r.boundary_components().len() as i64;
        let faces = face_count(r) as i64;
        t.check(b == faces, || format!("graph {i}: {b} boundary walks, oracle {faces} faces"));
        let twice = 2 - (v - e + b);
        t.check(twice >= 0 && twice % 2 == 0, || format!("graph {i}: v - e + b = {}", v - e + b));
        match r.genus() {
            Ok(g) => {
                t.check(v - e + b == 2 - 2 * g as i64, || format!("graph {i}: genus {g} against v - e + b = {}", v - e + b));
                *genera.entry(g).or_insert(0) += 1;
            }
            Err(err) => t.check(false, || format!("graph {i}: {err}")),
        }
    }
    let summary = format!("{} graphs, genus histogram {genera:?}", corpus.len());
    t.finish(1, CRITERIA[0], "dart permutation orbits", summary, start)
}

/// Every cyclic order on `labels`, each listed once from its first label.
fn all_cyclic_orders(labels: &[&str]) -> Vec<Vec<String>> {
    fn perms(items: Vec<String>) -> Vec<Vec<String>> {
        if items.len() <= 1 {
            return vec![items];
        }
        (0..items.len())
            .flat_map(|i| {
                let mut rest = items.clone();
                let x = rest.remove(i);
                perms(rest).into_iter().map(move |mut p| {
                    p.insert(0, x.clone());
                    p
                })
            })
            .collect()
    }
    let (first, rest) = labels.split_first().expect("nonempty");
    perms(rest.iter().map(|s| s.to_string()).collect())
        .into_iter()
        .map(|mut p| {
            p.insert(0, first.to_string());
            p
        })
        .collect()
}

fn leaf_order_join() -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::default();
    let legs = ["a", "b", "c", "d", "e", "f"];
    for left in 1..=3 {
        for right in 1..=3 {
            let (lu, lv) = (&legs[..left], &legs[3..3 + right]);
            let mut raw = RawGraph::new().vertices(["u", "v"]).link("m", "u", "v");
            for l in lu {
                raw = raw.leg(l, "u");
            }
            for l in lv {
                raw = raw.leg(l, "v");
            }
            let g = raw.build().expect("tree");
            let with_m = |ls: &[&'static str]| [&["m"][..], ls].concat();
            for ou in all_cyclic_orders(&with_m(lu)) {
                for ov in all_cyclic_orders(&with_m(lv)) {
                    let lists = [("u", ou.iter().map(String::as_str).collect()), ("v", ov.iter().map(String::as_str).collect())];
                    let tree = RibbonGraph::from_lists(g.clone(), lists).expect("valid orders");
                    let m = EdgeId::from("m");
                    let (at_u, at_v) = (&tree.orders()[&VertexId::from("u")], &tree.orders()[&VertexId::from("v")]);
                    let joined = at_u.join(&m, at_v, &m);
                    let leaves = tree.leaf_cyclic_order();
                    let oracle = join_oracle(at_u, at_v, &m);
                    let mut ok = matches!((&leaves, &joined, &oracle), (Ok(a), Ok(b), Some(c)) if a == c && b == c);
                    if let Some(c) = &oracle {
                        let legs: Vec<&str> = lu.iter().chain(lv).copied().collect();
                        for star in all_cyclic_orders(&legs) {
                            let accepted = contract_onto(&tree, &legs, &star);
                            let is_join = CyclicOrder::from_list(star.iter().map(|l| EdgeId::from(l.as_str())).collect()).ok().as_ref() == Some(c);
                            ok &= accepted == is_join;
                        }
                    }
                    t.check(ok, || format!("orders {ou:?} and {ov:?}: leaves {leaves:?}, join {joined:?}"));
                }
            }
        }
    }
    t.finish(2, CRITERIA[1], "noninterlacing and induced orders", "all vertex orders with at most 4 half-edges; contraction accepted onto the join only".into(), start)
}

/// Whether collapsing `m` onto a single vertex with the legs in `order` is a contraction of ribbon graphs.
fn contract_onto(tree: &RibbonGraph, legs: &[&str], order: &[String]) -> bool {
    let mut raw = RawGraph::new().vertex("w");
    for l in legs {
        raw = raw.leg(l, "w");
    }
    let Ok(g) = raw.build() else { return false };
    let Ok(star) = RibbonGraph::from_lists(g, [("w", order.iter().map(String::as_str).collect())]) else {
        return false;
    };
    let w = VertexId::from("w");
    let vertices = [(VertexId::from("u"), w.clone()), (VertexId::from("v"), w.clone())].into_iter().collect();
    let mut edges: BTreeMap<EdgeId, EdgeAction> = legs
        .iter()
        .map(|l| (EdgeId::from(*l), EdgeAction::Map { target: EdgeId::from(*l), scale: rat(1), shift: rat(0) }))
        .collect();
    edges.insert(EdgeId::from("m"), EdgeAction::Collapse(w));
    GraphMorphism::new(tree.graph().clone(), star.graph().clone(), vertices, edges)
        .map_err(RibbonError::from)
        .and_then(|map| SimpleContraction::new(tree.clone(), star, map))
        .is_ok()
}

/// The unique cyclic order on both sides minus `m` that keeps each side's
/// induced order and, seen from either side, finds the other side where `m` was.
/// Found by trying every cyclic order.
fn join_oracle(left: &CyclicOrder<EdgeId>, right: &CyclicOrder<EdgeId>, m: &EdgeId) -> Option<CyclicOrder<EdgeId>> {
    let side = |o: &CyclicOrder<EdgeId>| o.elements().into_iter().filter(|e| e != m).collect::<Vec<_>>();
    let (a, b) = (side(left), side(right));
    let labels: Vec<String> = a.iter().chain(&b).map(|e| e.0.clone()).collect();
    let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
    let seen_from = |c: &CyclicOrder<EdgeId>, here: &[EdgeId], there: &[EdgeId], original: &CyclicOrder<EdgeId>| {
        here.iter().all(|x| {
            there.iter().all(|y| there.iter().all(|z| y == z || c.holds(x, y, z) == original.holds(m, y, z)))
        })
    };
    let fits: Vec<CyclicOrder<EdgeId>> = all_cyclic_orders(&labels)
        .into_iter()
        .map(|l| CyclicOrder::from_list(l.into_iter().map(EdgeId).collect()).expect("distinct labels"))
        .filter(|c| {
            let within = |side: &[EdgeId], o: &CyclicOrder<EdgeId>| {
                side.iter().all(|x| side.iter().all(|y| side.iter().all(|z| c.holds(x, y, z) == o.holds(x, y, z))))
            };
            within(&a, left) && within(&b, right) && seen_from(c, &a, &b, right) && seen_from(c, &b, &a, left)
        })
        .collect();
    (fits.len() == 1).then(|| fits[0].clone())
}

fn quiver_model() -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::default();
    let lag = ConicLagrangian::cross();
    let lq = quiver_from_lagrangian(&lag);
    let picture = lq.quiver.picture();
    t.check(picture.as_deref() == Some("• ← • ← • → • → •"), || format!("quiver {picture:?}"));
    t.check(lq.quiver.arrows().len() == lag.spokes().len(), || "arrows are not in bijection with spokes".into());
    let constant = Rep::constant(&lq.quiver);
    for a in 0..lq.quiver.arrows().len() {
        let stalk = microlocal_stalk(&constant, a);
        t.check(stalk == (0, 0), || format!("constant sheaf has stalk {stalk:?} at spoke {a}"));
    }
    t.finish(3, CRITERIA[2], "literal picture", "• ← • ← • → • → •, constant sheaf has no microlocal stalks".into(), start)
}

/// Positive roots of a type-A quiver: nonzero `d ∈ {0,1,2}ⁿ` with Tits form 1.
fn root_count(q: &Quiver) -> usize {
    let n = q.vertex_count();
    (1..3usize.pow(n as u32))
        .filter(|&code| {
            let d: Vec<i64> = (0..n).map(|i| (code / 3usize.pow(i as u32) % 3) as i64).collect();
            let square: i64 = d.iter().map(|x| x * x).sum();
            let cross: i64 = q.arrows().iter().map(|a| d[a.source] * d[a.target]).sum();
            square - cross == 1
        })
        .count()
}

fn bgp_reflection() -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::default();
    for n in 1..=6usize {
        for mask in 0..1u32 << (n - 1) {
            let rightward: Vec<bool> = (0..n - 1).map(|i| mask >> i & 1 == 1).collect();
            let q = Quiver::linear(&rightward);
            let vectors: Vec<Vec<i64>> =
                (0..1u32 << n).map(|m| (0..n).map(|i| i64::from(m >> i & 1)).collect()).collect();
            let indecomposables = if n <= 4 { thin_indecomposables(&q).ok() } else { None };
            if n <= 4 {
                let count = indecomposables.as_ref().map_or(0, Vec::len);
                t.check(count == n * (n + 1) / 2 && count == root_count(&q), || {
                    format!("A{n} {rightward:?}: {count} indecomposables, {} roots", root_count(&q))
                });
            }
            for x in (0..n).filter(|&x| q.is_sink(x) || q.is_source(x)) {
                let r = q.reflect(x).expect("sink or source");
                for d in &vectors {
                    for e in &vectors {
                        let before = euler_form(&q, d, e).expect("sizes match");
                        let after =
                            euler_form(&r, &reflect_dimension(&q, x, d), &reflect_dimension(&q, x, e)).expect("sizes match");
                        t.check(before == after, || format!("A{n} {rightward:?} at {x}: <{d:?},{e:?}> {before} -> {after}"));
                    }
                }
                if n <= 4 {
                    let count = thin_indecomposables(&r).map_or(0, |v| v.len());
                    t.check(count == n * (n + 1) / 2, || format!("A{n} reflected at {x}: {count} indecomposables"));
                    for m in indecomposables.iter().flatten() {
                        let simple_here = m.total_dim() == 1 && m.dim(x) == 1;
                        if simple_here {
                            continue;
                        }
                        let ok = crate::quiver::bgp_reflect(m, x).map(|s| is_indecomposable(&s).unwrap_or(false));
                        t.check(ok == Ok(true), || format!("A{n} at {x}: reflection of {:?} decomposes", m.dims()));
                    }
                }
            }
        }
    }
    t.finish(4, CRITERIA[3], "Tits form root count", "type A up to 6 vertices, every orientation".into(), start)
}

fn nodal_ring(opts: &Options) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::default();
    for d in 0..=opts.truncation {
        let got = nodal_end_ring(d);
        // basis 1, x, …, x^d, y, …, y^d
        t.check(got == 2 * d + 1, || format!("degree {d}: {got}"));
    }
    t.finish(5, CRITERIA[4], "monomial basis of C[x,y]/xy", format!("degrees 0..={}", opts.truncation), start)
}

fn beilinson_bondal(opts: &Options) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::default();
    for total in 2..=opts.indices_max {
        for a1 in 1..total {
            let a2 = total - a1;
            match bb_compare(a1, a2) {
                Ok(r) => t.check(r.passed(), || format!("({a1},{a2}): {}", r.mismatch.unwrap_or_default())),
                Err(e) => t.check(false, || format!("({a1},{a2}): {e}")),
            }
        }
    }
    let kronecker = vec![vec![1, 2], vec![0, 1]];
    if let Ok(r) = bb_compare(1, 1) {
        t.check(r.balloon_hom == kronecker, || format!("balloon side of (1,1): {:?}", r.balloon_hom));
        let permuted = r.permutation.as_ref().map(|p| {
            (0..2).map(|i| (0..2).map(|j| r.quiver_hom[p[i]][p[j]]).collect::<Vec<_>>()).collect::<Vec<_>>()
        });
        t.check(permuted.as_ref() == Some(&kronecker), || format!("quiver side of (1,1): {:?}", r.quiver_hom));
    }
    let control = bb_compare_sides((1, 1), (2, 1)).map(|r| r.passed());
    t.check(control == Ok(false), || "negative control (1,1) against (2,1) passed".into());
    t.finish(6, CRITERIA[5], "quiver path counts vs monomials", format!("a1 + a2 <= {}", opts.indices_max), start)
}

/// `H⁰` and `H¹` of the structure sheaf on a chain or ring of `n` rational
/// curves, from the Čech complex: constants on curves to values at nodes.
fn cech_structure(shape: Shape, curves: usize) -> GradedDims {
    let nodes = if shape == Shape::Cycle { curves } else { curves - 1 };
    let mut d = Matrix::zeros(nodes, curves);
    for k in 0..nodes {
        d[(k, k)] += rat(1);
        d[(k, (k + 1) % curves)] -= rat(1);
    }
    let r = d.rank();
    GradedDims::new(0, vec![curves - r, nodes - r])
}

fn structure_pair(shape: Shape, values: &[usize]) -> Result<(GradedDims, GradedDims), String> {
    structure_homs(&catalog::dualizable(shape, values))
}

/// Endomorphisms of the structure object on both sides of the mirror: `(cpm, perf)`.
pub fn structure_homs(c: &ChordalStructure) -> Result<(GradedDims, GradedDims), String> {
    let d = dualizable(c).map_err(|e| e.to_string())?;
    let cover = wheel_cover(c).map_err(|e| e.to_string())?;
    let o = structure_object(c, &cover).map_err(|e| e.to_string())?;
    let a = cpm_hom(&cover, &o, &o).map_err(|e| e.to_string())?;
    let shape = BalloonShape::from_indices(&d.indices).map_err(|e| e.to_string())?;
    let s = DescentComplex::structure(&shape);
    let b = perf_hom(&s, &s).map_err(|e| e.to_string())?;
    Ok((a, b))
}

fn hms_end_to_end(opts: &Options) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::default();
    for (shape, values) in catalog::index_tuples(opts.hms_max) {
        let curves = if shape == Shape::Cycle { values.len() } else { values.len() - 1 };
        let oracle = cech_structure(shape, curves);
        match structure_pair(shape, &values) {
            Ok((a, b)) => {
                t.check(a == b && b == oracle, || format!("{shape:?} {values:?}: cpm {a}, perf {b}, oracle {oracle}"));
                let euler = if shape == Shape::Cycle { 0 } else { 1 };
                t.check(a.euler() == euler, || format!("{shape:?} {values:?}: Euler characteristic {}", a.euler()));
            }
            Err(e) => t.check(false, || format!("{shape:?} {values:?}: {e}")),
        }
    }
    let ring = structure_pair(Shape::Cycle, &[1, 1]).map(|(a, _)| (a.get(0), a.get(1), a.euler()));
    t.check(ring == Ok((1, 1, 0)), || format!("cycle (1,1): {ring:?}"));
    t.finish(7, CRITERIA[6], "Čech complex of the nodal curve", format!("paths and cycles with index sum <= {}", opts.hms_max), start)
}

/// Small graphs for the sieve suite: fixed shapes plus seeded random ones.
fn sieve_corpus(seed: u64) -> Vec<Graph> {
    let path = RawGraph::new().vertices(["a", "b", "c"]).link("ab", "a", "b").link("bc", "b", "c");
    let square = RawGraph::new()
        .vertices(["a", "b", "c", "d"])
        .link("ab", "a", "b")
        .link("bc", "b", "c")
        .link("cd", "c", "d")
        .link("da", "d", "a")
        .leg("l", "a");
    let theta = RawGraph::new().vertices(["u", "v"]).link("x", "u", "v").link("y", "u", "v").link("z", "u", "v");
    let star = RawGraph::new().vertex("v").leg("x", "v").leg("y", "v").leg("z", "v");
    let mut out: Vec<Graph> = [path, square, theta, star].into_iter().map(|r| r.build().expect("valid")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..4 {
        let n = rng.gen_range(2..=4);
        let mut raw = RawGraph::new();
        for v in 0..n {
            raw = raw.vertex(&format!("v{v}"));
        }
        for e in 0..rng.gen_range(n - 1..=n + 1) {
            let a = rng.gen_range(0..n);
            if rng.gen_bool(0.2) {
                raw = raw.leg(&format!("g{k}.{e}"), &format!("v{a}"));
            } else {
                let b = (a + rng.gen_range(1..n)) % n;
                raw = raw.link(&format!("g{k}.{e}"), &format!("v{a}"), &format!("v{b}"));
            }
        }
        out.push(raw.build().expect("no loops by construction"));
    }
    out
}

fn grothendieck_topology(opts: &Options) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(8));
    // (instances decided, failures, first failure) for each axiom
    let mut axioms: [(usize, usize, Option<String>); 3] = Default::default();
    let mut record = |i: usize, outcome: Option<bool>, what: &dyn Fn() -> String| {
        if let Some(ok) = outcome {
            axioms[i].0 += 1;
            if !ok {
                axioms[i].1 += 1;
                if axioms[i].2.is_none() {
                    axioms[i].2 = Some(what());
                }
            }
        }
    };
    for (gi, x) in sieve_corpus(opts.seed).iter().enumerate() {
        record(0, Some(maximal_axiom(x)), &|| format!("graph {gi}: maximal sieve does not cover"));
        t.check(Sieve::stars(x).is_covering(x), || format!("graph {gi}: star sieve does not cover"));
        let morphisms = all_morphisms(x);
        let mut sieves = vec![Sieve::Maximal, Sieve::empty(), Sieve::stars(x)];
        sieves.extend(x.vertices().iter().map(|v| Sieve::stars_of(x, [v])));
        for _ in 0..2 {
            let gens: Vec<Morphism> =
                (0..2).map(|_| morphisms[rng.gen_range(0..morphisms.len())].clone()).collect();
            if let Ok(s) = Sieve::generated(x, gens) {
                sieves.push(s);
            }
        }
        for u in &sieves {
            for f in &morphisms {
                let outcome = pullback_axiom(x, u, f).ok().flatten();
                record(1, outcome, &|| format!("graph {gi}: {u:?} pulled back along {f:?} stops covering"));
            }
            for v in &sieves {
                let outcome = local_axiom(x, u, v).ok().flatten();
                record(2, outcome, &|| format!("graph {gi}: {v:?} is locally covering but does not cover"));
            }
        }
    }
    for (i, (decided, failed, first)) in axioms.iter().enumerate() {
        t.checks += decided;
        if *failed > 0 && t.failure.is_none() {
            t.failure = Some(format!("axiom {} fails on {failed} of {decided} instances; first: {}", i + 1, first.clone().unwrap_or_default()));
        }
    }
    let summary = format!("axioms decided on {}, {}, {} instances", axioms[0].0, axioms[1].0, axioms[2].0);
    t.finish(8, CRITERIA[7], "literal covering definition", summary, start)
}

fn gradings() -> CriterionReport {
    let start = Instant::now();
    let corpus = chordal_structures(4);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(16);
    let chunk = corpus.len().div_ceil(workers).max(1);
    let failures: Vec<(usize, Option<String>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = corpus
            .chunks(chunk)
            .enumerate()
            .map(|(k, part)| {
                scope.spawn(move || {
                    let mut failed = 0;
                    let mut first = None;
                    for (i, c) in part.iter().enumerate() {
                        // validation includes R^n = S^2 and freeness of every unwinding
                        if let Err(e) = chordal_grading(c, &c.default_orientation()) {
                            failed += 1;
                            first.get_or_insert_with(|| format!("structure {}: {e}", k * chunk + i));
                        }
                    }
                    (failed, first)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker finished")).collect()
    });
    let mut t = Tally::default();
    for (failed, first) in failures {
        t.checks += failed;
        if let Some(f) = first {
            t.failure.get_or_insert(f);
        }
    }
    t.checks = corpus.len();
    let three = catalog::wheel(3, 3);
    t.check(three.graph().vertices().len() == 3, || "orientation instance is not on 3 vertices".into());
    let o = three.default_orientation();
    let iso = chordal_grading(&three, &o)
        .and_then(|a| chordal_grading(&three, &o.reversed()).map(|b| find_isomorphism(&a, &b).is_some()));
    t.check(iso == Ok(true), || format!("opposite orientations of the 3-vertex wheel: {iso:?}"));
    t.finish(9, CRITERIA[8], "group laws on a window of levels", format!("{} chordal structures on at most 4 vertices", corpus.len()), start)
}

fn cover_independence(opts: &Options) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::default();
    let structure = |c: &ChordalStructure| -> Result<GradedDims, String> {
        let cover = wheel_cover(c).map_err(|e| e.to_string())?;
        let o = structure_object(c, &cover).map_err(|e| e.to_string())?;
        cpm_hom(&cover, &o, &o).map_err(|e| e.to_string())
    };
    for (shape, values) in catalog::index_tuples(opts.hms_max) {
        let c = catalog::dualizable(shape, &values);
        let before = structure(&c);
        let first = EdgeId::from("z1.0");
        let once = c.subdivide_zero_edge(&first, &VertexId::from("s1"), &crate::linalg::ratio(1, 2));
        let twice = once.as_ref().ok().and_then(|c| {
            c.subdivide_zero_edge(&EdgeId::from("z1.0.0"), &VertexId::from("s2"), &crate::linalg::ratio(1, 4)).ok()
        });
        let last = c.zero_section().iter().next_back().cloned().expect("zero section");
        let elsewhere = c.subdivide_zero_edge(&last, &VertexId::from("s3"), &crate::linalg::ratio(1, 2));
        for (name, refined) in [("once", once.ok()), ("twice", twice), ("elsewhere", elsewhere.ok())] {
            let after = refined.as_ref().map(&structure);
            let ok = matches!((&before, &after), (Ok(a), Some(Ok(b))) if a == b);
            t.check(ok, || format!("{shape:?} {values:?} refined {name}: {before:?} -> {after:?}"));
        }
    }
    t.finish(10, CRITERIA[9], "unrefined cover", format!("three refinements of each instance with index sum <= {}", opts.hms_max), start)
}

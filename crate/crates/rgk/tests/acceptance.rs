//! The ten acceptance criteria, each checked against an oracle written here
//! rather than inside the library. Prints one PASS/FAIL line per criterion.

use std::collections::{BTreeMap, BTreeSet};

use rgk::catalog;
use rgk::cpm::sieve::{all_morphisms, Morphism, Sieve};
use rgk::cpm::{base_graph, cpm_hom, structure_object, wheel_cover, Shape};
use rgk::cyclic::{CyclicOrder, Lift};
use rgk::generate::{chordal_structures, ribbon_corpus};
use rgk::grading::{chordal_grading, find_isomorphism};
use rgk::graph::{EdgeId, Graph, RawGraph, VertexId};
use rgk::homology::GradedDims;
use rgk::linalg::ratio;
use rgk::mirror::{bb_compare, nodal_end_ring, Balloon};
use rgk::quiver::{
    bgp_reflect, euler_form, is_indecomposable, microlocal_stalk, quiver_from_lagrangian, reflect_dimension,
    thin_indecomposables, ConicLagrangian, Quiver, Rep,
};
use rgk::ribbon::{ChordalStructure, RibbonGraph};
use rgk::verify::structure_homs;

/// Criteria expected to fail, with the reason.
const KNOWN_FAILURES: &[(u8, &str)] =
    &[(8, "the pullback axiom fails for the star sieve pulled back along an edge contraction")];

struct Outcome {
    checks: usize,
    failure: Option<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { checks: 0, failure: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }
}

/// Faces of a compact ribbon graph: orbits of "arrive along an edge, leave
/// along the next edge in the order at the arrival vertex".
fn faces(r: &RibbonGraph) -> usize {
    let g = r.graph();
    let mut darts = BTreeSet::new();
    for (id, e) in g.edges() {
        let (a, b) = (e.ends[0].vertex().unwrap().clone(), e.ends[1].vertex().unwrap().clone());
        darts.insert((id.clone(), a.clone(), b.clone()));
        darts.insert((id.clone(), b, a));
    }
    let mut count = 0;
    while let Some(start) = darts.iter().next().cloned() {
        count += 1;
        let mut d = start;
        while darts.remove(&d) {
            let (e, _, to) = &d;
            let f = r.orders()[to].succ(e).unwrap().clone();
            let edge = &g.edges()[&f];
            let far = if edge.ends[0].vertex() == Some(to) { &edge.ends[1] } else { &edge.ends[0] };
            d = (f, to.clone(), far.vertex().unwrap().clone());
        }
    }
    count
}

fn euler_genus() -> Outcome {
    let mut o = Outcome::new();
    for (i, r) in ribbon_corpus(0, 60, 8).iter().enumerate() {
        let (v, e) = (r.graph().vertices().len() as i64, r.graph().edges().len() as i64);
        let b = faces(r) as i64;
        o.check(r.boundary_components().len() as i64 == b, || format!("graph {i}: boundary walks against {b} faces"));
        let twice = 2 - v + e - b;
        let g = r.genus().map(|g| g as i64);
        o.check(twice >= 0 && twice % 2 == 0 && g == Ok(twice / 2), || format!("graph {i}: genus {g:?}, 2g = {twice}"));
    }
    o
}

fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x.clone());
            out.push(p);
        }
    }
    out
}

/// Read `order` starting just after `from`, stopping before it.
fn after(order: &[String], from: &str) -> Vec<String> {
    let k = order.iter().position(|x| x == from).unwrap();
    (1..order.len()).map(|i| order[(k + i) % order.len()].clone()).collect()
}

fn ids(labels: &[String]) -> CyclicOrder<EdgeId> {
    CyclicOrder::from_list(labels.iter().map(|l| EdgeId::from(l.as_str())).collect()).unwrap()
}

fn leaf_order_join() -> Outcome {
    let mut o = Outcome::new();
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
            let g = raw.build().unwrap();
            let fixed = |ls: &[&str]| -> Vec<Vec<String>> {
                let rest: Vec<String> = ls.iter().map(|s| s.to_string()).collect();
                permutations(&rest).into_iter().map(|p| [vec!["m".to_string()], p].concat()).collect()
            };
            for ou in fixed(lu) {
                for ov in fixed(lv) {
                    let tree = RibbonGraph::from_lists(
                        g.clone(),
                        [("u", ou.iter().map(String::as_str).collect()), ("v", ov.iter().map(String::as_str).collect())],
                    )
                    .unwrap();
                    let spliced = ids(&[after(&ou, "m"), after(&ov, "m")].concat());
                    let m = EdgeId::from("m");
                    let join = ids(&ou).join(&m, &ids(&ov), &m);
                    let leaves = tree.leaf_cyclic_order();
                    o.check(leaves.as_ref() == Ok(&spliced) && join.as_ref() == Ok(&spliced), || {
                        format!("{ou:?} and {ov:?}: leaves {leaves:?}, join {join:?}, spliced {spliced:?}")
                    });
                }
            }
        }
    }
    o
}

fn quiver_model() -> Outcome {
    let mut o = Outcome::new();
    let lq = quiver_from_lagrangian(&ConicLagrangian::cross());
    let q = &lq.quiver;
    let arrows: BTreeSet<(usize, usize)> = q.arrows().iter().map(|a| (a.source, a.target)).collect();
    // • ← • ← • → • → • read left to right
    let expected: BTreeSet<(usize, usize)> = [(1, 0), (2, 1), (2, 3), (3, 4)].into();
    o.check(q.vertex_count() == 5 && arrows == expected && q.arrows().len() == 4, || format!("arrows {arrows:?}"));
    let constant = Rep::constant(q);
    o.check(constant.maps().iter().all(|m| m.rows() == 1 && m.cols() == 1 && m[(0, 0)] == ratio(1, 1)), || {
        "constant rep is not all identities".into()
    });
    for a in 0..q.arrows().len() {
        let s = microlocal_stalk(&constant, a);
        o.check(s == (0, 0), || format!("spoke {a}: stalk {s:?}"));
    }
    o
}

fn pairing(q: &Quiver, d: &[i64], e: &[i64]) -> i64 {
    let diagonal: i64 = d.iter().zip(e).map(|(a, b)| a * b).sum();
    diagonal - q.arrows().iter().map(|a| d[a.source] * e[a.target]).sum::<i64>()
}

fn reflected(q: &Quiver, x: usize, d: &[i64]) -> Vec<i64> {
    let mut out = d.to_vec();
    let around: i64 = q
        .arrows()
        .iter()
        .filter_map(|a| match (a.source == x, a.target == x) {
            (true, false) => Some(d[a.target]),
            (false, true) => Some(d[a.source]),
            _ => None,
        })
        .sum();
    out[x] = around - d[x];
    out
}

fn zero_one(n: usize) -> Vec<Vec<i64>> {
    (0..1u32 << n).map(|m| (0..n).map(|i| i64::from(m >> i & 1)).collect()).collect()
}

/// Nonzero 0/1 vectors whose support is a run of consecutive vertices.
fn interval_vectors(n: usize) -> BTreeSet<Vec<i64>> {
    zero_one(n)
        .into_iter()
        .filter(|d| {
            let on: Vec<usize> = (0..n).filter(|&i| d[i] == 1).collect();
            !on.is_empty() && on[on.len() - 1] - on[0] + 1 == on.len()
        })
        .collect()
}

fn bgp_reflection() -> Outcome {
    let mut o = Outcome::new();
    for n in 1..=6 {
        for bits in zero_one(n - 1) {
            let q = Quiver::linear(&bits.iter().map(|&b| b == 1).collect::<Vec<_>>());
            let ends: Vec<usize> = (0..n).filter(|&x| q.is_sink(x) || q.is_source(x)).collect();
            for &x in &ends {
                let r = q.reflect(x).unwrap();
                for d in zero_one(n) {
                    let sd = reflected(&q, x, &d);
                    o.check(reflect_dimension(&q, x, &d) == sd, || format!("{bits:?} at {x}: s{d:?}"));
                    for e in zero_one(n) {
                        let se = reflected(&q, x, &e);
                        let before = pairing(&q, &d, &e);
                        let ok = pairing(&r, &sd, &se) == before && euler_form(&q, &d, &e) == Ok(before);
                        o.check(ok, || format!("{bits:?} at {x}: <{d:?}, {e:?}> changes"));
                    }
                }
            }
            if n > 4 {
                continue;
            }
            let found = thin_indecomposables(&q).unwrap();
            let dims: BTreeSet<Vec<i64>> = found.iter().map(Rep::dimension_vector).collect();
            o.check(found.len() == n * (n + 1) / 2 && dims == interval_vectors(n), || {
                format!("{bits:?}: indecomposables {dims:?}")
            });
            o.check(found.iter().all(|m| is_indecomposable(m) == Ok(true)), || format!("{bits:?}: a decomposable"));
            for &x in &ends {
                let r = q.reflect(x).unwrap();
                o.check(thin_indecomposables(&r).unwrap().len() == found.len(), || format!("{bits:?} at {x}: count"));
                for m in found.iter().filter(|m| !(m.total_dim() == 1 && m.dim(x) == 1)) {
                    let image = bgp_reflect(m, x).unwrap();
                    let ok = is_indecomposable(&image) == Ok(true)
                        && image.dimension_vector() == reflected(&q, x, &m.dimension_vector());
                    o.check(ok, || format!("{bits:?} at {x}: image of {:?}", m.dimension_vector()));
                }
            }
        }
    }
    o
}

fn nodal_ring() -> Outcome {
    let mut o = Outcome::new();
    for d in 0..=25usize {
        // monomials x^i y^j of degree at most d surviving xy = 0
        let survivors = (0..=d).flat_map(|i| (0..=d - i).map(move |j| (i, j))).filter(|&(i, j)| i == 0 || j == 0).count();
        o.check(survivors == 2 * d + 1 && nodal_end_ring(d) == survivors, || format!("degree {d}: {}", nodal_end_ring(d)));
    }
    o
}

/// `dim Hom(P_v, P_w)`: paths from `w` to `v`, counted along a topological order.
fn path_counts(q: &Quiver) -> Vec<Vec<usize>> {
    let n = q.vertex_count();
    let mut table = vec![vec![0; n]; n];
    for w in 0..n {
        let mut ways = vec![0usize; n];
        ways[w] = 1;
        for _ in 0..n {
            let mut next = vec![0usize; n];
            next[w] = 1;
            for a in q.arrows() {
                next[a.target] += ways[a.source];
            }
            ways = next;
        }
        for v in 0..n {
            table[v][w] = ways[v];
        }
    }
    table
}

/// Sections of `O(i·x₁ + j·x₂)` on a weighted projective line.
fn sections(a1: i64, a2: i64, i: i64, j: i64) -> usize {
    (i.div_euclid(a1) + j.div_euclid(a2) + 1).max(0) as usize
}

fn matches_up_to_order(quiver: &[Vec<usize>], balloon: &[Vec<usize>]) -> bool {
    let n = quiver.len();
    balloon.len() == n
        && permutations(&(0..n).collect::<Vec<_>>())
            .iter()
            .any(|p| (0..n).all(|i| (0..n).all(|j| balloon[i][j] == quiver[p[i]][p[j]])))
}

fn beilinson_bondal() -> Outcome {
    let mut o = Outcome::new();
    for a1 in 1..=5u32 {
        for a2 in 1..=6 - a1 {
            let report = bb_compare(a1, a2).unwrap();
            o.check(report.passed(), || format!("({a1},{a2}): {:?}", report.mismatch));
            let q = quiver_from_lagrangian(&ConicLagrangian::wheel(a1 as usize, a2 as usize).normalize()).quiver;
            let paths = path_counts(&q);
            let (w1, w2) = (i64::from(a1), i64::from(a2));
            let tilting = Balloon::new(a1, a2).unwrap().tilting();
            let table = |f: &dyn Fn(i64, i64) -> usize| -> Vec<Vec<usize>> {
                tilting.iter().map(|s| tilting.iter().map(|t| f(t.x1 - s.x1, t.x2 - s.x2)).collect()).collect()
            };
            let hom = table(&|i, j| sections(w1, w2, i, j));
            // Serre duality with K = O(-x₁ - x₂)
            let ext = table(&|i, j| sections(w1, w2, -1 - i, -1 - j));
            o.check(report.quiver_hom == paths && report.balloon_hom == hom, || format!("({a1},{a2}): hom tables"));
            o.check(ext.iter().flatten().all(|&e| e == 0) && report.balloon_ext == ext, || format!("({a1},{a2}): ext {ext:?}"));
            o.check(matches_up_to_order(&paths, &hom), || format!("({a1},{a2}): {paths:?} against {hom:?}"));
        }
    }
    // the projective line: O and O(1)
    let p1: Vec<Vec<usize>> = [0i64, 1].iter().map(|s| [0i64, 1].iter().map(|t| (t - s + 1).max(0) as usize).collect()).collect();
    let kronecker = bb_compare(1, 1).unwrap();
    o.check(p1 == vec![vec![1, 2], vec![0, 1]] && kronecker.balloon_hom == p1, || format!("P1: {:?}", kronecker.balloon_hom));
    o.check(matches_up_to_order(&kronecker.quiver_hom, &p1), || format!("Kronecker: {:?}", kronecker.quiver_hom));
    o
}

/// `(h⁰, h¹)` of the structure sheaf on a connected nodal curve: one
/// constant, and one loop class per independent cycle of the dual graph.
fn dual_graph_structure(c: &ChordalStructure) -> GradedDims {
    let curves = c.zero_components().len();
    let nodes = base_graph(c).edges().iter().filter(|e| e.is_compact()).count();
    GradedDims::new(0, vec![1, nodes + 1 - curves])
}

fn hms_end_to_end() -> Outcome {
    let mut o = Outcome::new();
    for (shape, values) in catalog::index_tuples(5) {
        let c = catalog::dualizable(shape, &values);
        let oracle = dual_graph_structure(&c);
        let pair = structure_homs(&c);
        let ok = matches!(&pair, Ok((a, b)) if *a == oracle && *b == oracle);
        o.check(ok, || format!("{shape:?} {values:?}: {pair:?}, oracle {oracle}"));
    }
    let ring = structure_homs(&catalog::dualizable(Shape::Cycle, &[1, 1])).map(|(a, _)| (a.get(0), a.get(1), a.euler()));
    o.check(ring == Ok((1, 1, 0)), || format!("cycle (1,1): {ring:?}"));
    o
}

fn sieve_graphs() -> Vec<Graph> {
    [
        RawGraph::new().vertices(["a", "b", "c"]).link("ab", "a", "b").link("bc", "b", "c"),
        RawGraph::new().vertices(["a", "b"]).link("ab", "a", "b").leg("l", "a").leg("r", "b"),
        RawGraph::new().vertex("v").leg("x", "v").leg("y", "v").leg("z", "v"),
        RawGraph::new().vertices(["u", "v"]).link("x", "u", "v").link("y", "u", "v").link("z", "u", "v"),
        RawGraph::new().vertices(["o", "p", "q", "r"]).link("op", "o", "p").link("oq", "o", "q").link("or", "o", "r"),
        RawGraph::new()
            .vertices(["a", "b", "c", "d"])
            .link("ab", "a", "b")
            .link("bc", "b", "c")
            .link("cd", "c", "d")
            .link("da", "d", "a"),
    ]
    .into_iter()
    .map(|r| r.build().unwrap())
    .collect()
}

/// Every vertex of `x` lies in the open part of some member of `s`.
fn covers(x: &Graph, s: &Sieve) -> bool {
    let members: Vec<Morphism> = all_morphisms(x).into_iter().filter(|h| s.contains(x, h)).collect();
    x.vertices().iter().all(|v| members.iter().any(|h| h.vertices.contains(v)))
}

fn grothendieck_topology() -> Outcome {
    let mut o = Outcome::new();
    // decided and failed instances of each axiom, with the first failure
    let mut axioms: [(usize, usize, Option<String>); 3] = Default::default();
    let mut record = |k: usize, ok: bool, what: &dyn Fn() -> String| {
        axioms[k].0 += 1;
        if !ok {
            axioms[k].1 += 1;
            axioms[k].2.get_or_insert_with(what);
        }
    };
    for (gi, x) in sieve_graphs().iter().enumerate() {
        let morphisms = all_morphisms(x);
        record(0, covers(x, &Sieve::Maximal), &|| format!("graph {gi}: maximal sieve"));
        o.check(covers(x, &Sieve::stars(x)), || format!("graph {gi}: star sieve does not cover"));
        let mut sieves = vec![Sieve::Maximal, Sieve::empty(), Sieve::stars(x)];
        sieves.extend(x.vertices().iter().map(|v| Sieve::stars_of(x, [v])));
        for e in x.edges().iter().filter(|(_, e)| e.is_compact()).map(|(id, _)| id) {
            sieves.extend(Sieve::generated(x, vec![Morphism::contraction(x, [e.clone()].into())]).ok());
        }
        let covering: Vec<bool> = sieves.iter().map(|s| covers(x, s)).collect();
        for (s, &c) in sieves.iter().zip(&covering) {
            o.check(s.is_covering(x) == c, || format!("graph {gi}: library and oracle disagree on {s:?}"));
        }
        // pullbacks along every morphism, computed once per covering sieve
        let pulled: Vec<Vec<bool>> = sieves
            .iter()
            .map(|s| morphisms.iter().map(|f| covers(&f.source(x).unwrap(), &s.pullback(x, f))).collect())
            .collect();
        for (u, s) in sieves.iter().enumerate().filter(|(u, _)| covering[*u]) {
            for (fi, f) in morphisms.iter().enumerate() {
                record(1, pulled[u][fi], &|| format!("graph {gi}: {s:?} pulled back along {f:?}"));
            }
            let members: Vec<usize> = (0..morphisms.len()).filter(|&fi| s.contains(x, &morphisms[fi])).collect();
            for (v, t) in sieves.iter().enumerate() {
                if members.iter().all(|&fi| pulled[v][fi]) {
                    record(2, covering[v], &|| format!("graph {gi}: {t:?} is locally covering for {s:?}"));
                }
            }
        }
    }
    for (k, (decided, failed, first)) in axioms.into_iter().enumerate() {
        o.checks += decided;
        if failed > 0 && o.failure.is_none() {
            o.failure = Some(format!("axiom {} fails on {failed} of {decided} instances; first: {}", k + 1, first.unwrap()));
        }
    }
    o
}

/// `R^n = S²`, `RS = SR`, the projections, and freeness of `R^a S^b` on a window.
fn unwinding_laws(c: &ChordalStructure) -> Result<(), String> {
    let z = chordal_grading(c, &c.default_orientation()).map_err(|e| e.to_string())?;
    for (v, u) in z.unwindings() {
        let base = u.base();
        let n = base.len() as i64;
        for e in base.as_slice() {
            let x = Lift { base: e.clone(), level: 0 };
            let mut forward = vec![x.clone()];
            let mut backward = vec![x.clone()];
            for _ in 0..n {
                forward.push(u.act_r(forward.last().unwrap()));
                backward.push(u.act_r_inv(backward.last().unwrap()));
            }
            let power = |a: i64, b: i64| {
                let y = if a >= 0 { &forward[a as usize] } else { &backward[(-a) as usize] };
                Lift { base: y.base.clone(), level: y.level + b }
            };
            if power(n, 0) != power(0, 2) {
                return Err(format!("{v:?} over {e:?}: R^n differs from S^2"));
            }
            if u.act_r(&u.act_s(&x)) != u.act_s(&u.act_r(&x)) {
                return Err(format!("{v:?} over {e:?}: R and S do not commute"));
            }
            if u.rho(&forward[1]) != base.succ(e).unwrap() || u.sigma(&u.act_s(&x)) != u.sigma(&x).flip() {
                return Err(format!("{v:?} over {e:?}: projections"));
            }
            for a in -n..=n {
                for b in -2..=2 {
                    let trivial = (a, b) == (0, 0) || (a, b) == (n, -2) || (a, b) == (-n, 2);
                    if (power(a, b) == x) != trivial {
                        return Err(format!("{v:?} over {e:?}: R^{a} S^{b} breaks freeness"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn gradings() -> Outcome {
    let mut o = Outcome::new();
    let corpus = chordal_structures(4);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = corpus.len().div_ceil(workers);
    let firsts: Vec<Option<String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = corpus
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().find_map(|c| unwinding_laws(c).err())))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    o.checks += corpus.len();
    o.failure = firsts.into_iter().flatten().next();
    let vertex_counts: BTreeSet<usize> = corpus.iter().map(|c| c.graph().vertices().len()).collect();
    o.check(vertex_counts == [1, 2, 3, 4].into(), || format!("corpus sizes {vertex_counts:?}"));
    let three = catalog::wheel(3, 3);
    let orient = three.default_orientation();
    let iso = chordal_grading(&three, &orient)
        .and_then(|a| chordal_grading(&three, &orient.reversed()).map(|b| find_isomorphism(&a, &b).is_some()));
    o.check(three.graph().vertices().len() == 3 && iso == Ok(true), || format!("3-vertex wheel: {iso:?}"));
    o
}

fn structure_endomorphisms(c: &ChordalStructure) -> Result<GradedDims, String> {
    let cover = wheel_cover(c).map_err(|e| e.to_string())?;
    let o = structure_object(c, &cover).map_err(|e| e.to_string())?;
    cpm_hom(&cover, &o, &o).map_err(|e| e.to_string())
}

fn cover_independence() -> Outcome {
    let mut o = Outcome::new();
    let half = ratio(1, 2);
    for (shape, values) in catalog::index_tuples(5) {
        let c = catalog::dualizable(shape, &values);
        let oracle = dual_graph_structure(&c);
        let mut refined: BTreeMap<String, Option<ChordalStructure>> = c
            .zero_section()
            .iter()
            .map(|e| (e.as_str().to_string(), c.subdivide_zero_edge(e, &VertexId::from("mid"), &half).ok()))
            .collect();
        let first = c.zero_section().iter().next().unwrap().clone();
        let twice = c
            .subdivide_zero_edge(&first, &VertexId::from("m1"), &half)
            .and_then(|d| d.subdivide_zero_edge(&first, &VertexId::from("m2"), &half).or_else(|_| {
                let inner = d.zero_section().iter().find(|e| e.as_str().starts_with(first.as_str())).unwrap().clone();
                d.subdivide_zero_edge(&inner, &VertexId::from("m2"), &ratio(1, 4))
            }))
            .ok();
        refined.insert(format!("{} twice", first.as_str()), twice);
        let before = structure_endomorphisms(&c);
        o.check(before.as_ref() == Ok(&oracle), || format!("{shape:?} {values:?}: {before:?}"));
        for (name, r) in refined {
            let after = r.as_ref().map(structure_endomorphisms);
            o.check(matches!(&after, Some(Ok(a)) if *a == oracle), || {
                format!("{shape:?} {values:?} refined at {name}: {after:?}, oracle {oracle}")
            });
        }
    }
    o
}

fn main() {
    type Criterion = (u8, &'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        (1, "Euler/genus identity", euler_genus),
        (2, "leaf order = join", leaf_order_join),
        (3, "quiver model", quiver_model),
        (4, "BGP reflection", bgp_reflection),
        (5, "nodal ring", nodal_ring),
        (6, "Beilinson-Bondal", beilinson_bondal),
        (7, "HMS end-to-end", hms_end_to_end),
        (8, "Grothendieck topology", grothendieck_topology),
        (9, "gradings", gradings),
        (10, "cover independence", cover_independence),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let start = std::time::Instant::now();
        let outcome = run();
        let passed = outcome.failure.is_none();
        let mark = if passed { "PASS" } else { "FAIL" };
        let detail = outcome.failure.clone().unwrap_or_default();
        println!(
            "criterion {id:>2} {mark} {name:<22} {:>6} checks {:>6} ms  {detail}",
            outcome.checks,
            start.elapsed().as_millis()
        );
        let known = KNOWN_FAILURES.iter().any(|(k, _)| *k == id);
        if passed == known {
            unexpected.push(format!("criterion {id}: {}", if passed { "known failure now passes" } else { "failed" }));
        }
    }
    for (id, why) in KNOWN_FAILURES {
        println!("known failure {id}: {why}");
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcomes: {unexpected:?}");
        std::process::exit(1);
    }
}

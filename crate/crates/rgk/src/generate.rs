//! Seeded and exhaustive corpora of ribbon graphs and chordal structures.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Edge, EdgeId, End, RawGraph};
use crate::linalg::rat;
use crate::ribbon::{ChordalStructure, RibbonGraph};

/// A compact connected ribbon graph on `vertices ≥ 2` vertices, every vertex of degree at least 2.
pub fn random_ribbon(rng: &mut impl Rng, vertices: usize) -> RibbonGraph {
    assert!(vertices >= 2, "compact ribbon graphs without loops need two vertices");
    let mut pairs: Vec<(usize, usize)> = (1..vertices).map(|i| (rng.gen_range(0..i), i)).collect();
    for _ in 0..rng.gen_range(0..=vertices) {
        let a = rng.gen_range(0..vertices);
        let b = (a + rng.gen_range(1..vertices)) % vertices;
        pairs.push((a, b));
    }
    let mut degree = vec![0; vertices];
    for &(a, b) in &pairs {
        degree[a] += 1;
        degree[b] += 1;
    }
    for v in 0..vertices {
        if degree[v] < 2 {
            let w = (v + rng.gen_range(1..vertices)) % vertices;
            pairs.push((v, w));
            degree[v] += 1;
            degree[w] += 1;
        }
    }
    let name = |v: usize| format!("v{v}");
    let mut raw = RawGraph::new();
    for v in 0..vertices {
        raw = raw.vertex(&name(v));
    }
    let mut at: Vec<Vec<String>> = vec![Vec::new(); vertices];
    for (k, &(a, b)) in pairs.iter().enumerate() {
        let id = format!("e{k}");
        raw = raw.link(&id, &name(a), &name(b));
        at[a].push(id.clone());
        at[b].push(id);
    }
    for list in &mut at {
        list.shuffle(rng);
    }
    let graph = raw.build().expect("generated graph is valid");
    let names: Vec<String> = (0..vertices).map(name).collect();
    RibbonGraph::from_lists(
        graph,
        names.iter().zip(&at).map(|(v, es)| (v.as_str(), es.iter().map(String::as_str).collect())),
    )
    .expect("generated orders are valid")
}

/// `count` ribbon graphs with between 2 and `max_vertices` vertices, reproducible from `seed`.
pub fn ribbon_corpus(seed: u64, count: usize, max_vertices: usize) -> Vec<RibbonGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=max_vertices.max(2));
            random_ribbon(&mut rng, n)
        })
        .collect()
}

/// One zero-section component through the listed vertices, in order.
#[derive(Debug, Clone)]
struct Strand {
    circle: bool,
    order: Vec<usize>,
}

/// Zero sections on `0..n` with vertices numbered consecutively along each
/// strand, strands listed by decreasing `(length, circle)`.
fn zero_sections(n: usize) -> Vec<Vec<Strand>> {
    fn go(left: usize, cap: (usize, bool), acc: &mut Vec<(usize, bool)>, out: &mut Vec<Vec<(usize, bool)>>) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        for len in (1..=left.min(cap.0)).rev() {
            for circle in [true, false] {
                if (circle && len < 2) || (len, circle) > cap {
                    continue;
                }
                acc.push((len, circle));
                go(left - len, (len, circle), acc, out);
                acc.pop();
            }
        }
    }
    let mut shapes = Vec::new();
    go(n, (n, true), &mut Vec::new(), &mut shapes);
    shapes
        .into_iter()
        .map(|shape| {
            let mut next = 0;
            shape
                .into_iter()
                .map(|(len, circle)| {
                    let order = (next..next + len).collect();
                    next += len;
                    Strand { circle, order }
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Empty,
    Leg,
    Chord(usize),
}

/// Fillings of the two side slots `2v`, `2v + 1` at every vertex: nothing,
/// a leg, or a chord to a slot at another vertex.
fn slot_fillings(n: usize) -> Vec<Vec<Slot>> {
    fn go(slots: &mut Vec<Option<Slot>>, out: &mut Vec<Vec<Slot>>) {
        let Some(i) = slots.iter().position(Option::is_none) else {
            out.push(slots.iter().map(|s| s.expect("filled")).collect());
            return;
        };
        for s in [Slot::Empty, Slot::Leg] {
            slots[i] = Some(s);
            go(slots, out);
        }
        for j in i + 1..slots.len() {
            if slots[j].is_none() && j / 2 != i / 2 {
                slots[i] = Some(Slot::Chord(j));
                slots[j] = Some(Slot::Chord(i));
                go(slots, out);
                slots[j] = None;
            }
        }
        slots[i] = None;
    }
    let mut out = Vec::new();
    go(&mut vec![None; 2 * n], &mut out);
    out
}

fn connected(n: usize, zero: &[Strand], slots: &[Slot]) -> bool {
    let mut component = vec![0; n];
    for (k, s) in zero.iter().enumerate() {
        for &v in &s.order {
            component[v] = k;
        }
    }
    let mut reached = BTreeSet::from([0]);
    loop {
        let before = reached.len();
        for (i, s) in slots.iter().enumerate() {
            if let Slot::Chord(j) = *s {
                let (a, b) = (component[i / 2], component[j / 2]);
                if reached.contains(&a) || reached.contains(&b) {
                    reached.insert(a);
                    reached.insert(b);
                }
            }
        }
        if reached.len() == before {
            return reached.len() == zero.len();
        }
    }
}

fn assemble(n: usize, zero: &[Strand], slots: &[Slot]) -> ChordalStructure {
    let name = |v: usize| format!("v{v}");
    let mut raw = RawGraph::new();
    for v in 0..n {
        raw = raw.vertex(&name(v));
    }
    let mut zs: Vec<Vec<String>> = vec![Vec::new(); n];
    let mut zero_ids = BTreeSet::new();
    let mut count = 0;
    let mut add = |raw: RawGraph, a: End, b: End, zs: &mut Vec<Vec<String>>| {
        let id = format!("z{count}");
        count += 1;
        for end in [&a, &b] {
            if let End::Vertex(v) = end {
                let v: usize = v.0[1..].parse().expect("generated vertex name");
                zs[v].push(id.clone());
            }
        }
        zero_ids.insert(EdgeId(id.clone()));
        raw.edge(&id, Edge::new(a, b, rat(0), rat(1)))
    };
    let vertex = |v: usize| End::Vertex(name(v).as_str().into());
    for s in zero {
        let k = s.order.len();
        let links = if s.circle { k } else { k - 1 };
        if !s.circle {
            raw = add(raw, End::Free, vertex(s.order[0]), &mut zs);
        }
        for i in 0..links {
            raw = add(raw, vertex(s.order[i]), vertex(s.order[(i + 1) % k]), &mut zs);
        }
        if !s.circle {
            raw = add(raw, vertex(s.order[k - 1]), End::Free, &mut zs);
        }
    }
    let mut side: Vec<Option<String>> = vec![None; 2 * n];
    let mut chords = 0;
    for (i, s) in slots.iter().enumerate() {
        let (a, b) = match *s {
            Slot::Empty => continue,
            Slot::Leg => (vertex(i / 2), End::Free),
            Slot::Chord(j) if j > i => (vertex(i / 2), vertex(j / 2)),
            Slot::Chord(j) => {
                side[i] = side[j].clone();
                continue;
            }
        };
        let id = format!("c{chords}");
        chords += 1;
        raw = raw.edge(&id, Edge::new(a, b, rat(0), rat(1)));
        side[i] = Some(id);
    }
    let lists: Vec<(String, Vec<String>)> = (0..n)
        .map(|v| {
            let mut z = zs[v].clone();
            z.sort();
            let mut order = vec![z[0].clone()];
            order.extend(side[2 * v].clone());
            order.push(z[1].clone());
            order.extend(side[2 * v + 1].clone());
            (name(v), order)
        })
        .collect();
    let graph = raw.build().expect("generated graph is valid");
    let ribbon = RibbonGraph::from_lists(
        graph,
        lists.iter().map(|(v, es)| (v.as_str(), es.iter().map(String::as_str).collect())),
    )
    .expect("generated orders are valid");
    ChordalStructure::new(ribbon, zero_ids).expect("generated structure is chordal")
}

/// Connected chordal ribbon graphs on `1..=max_vertices` vertices. Every
/// isomorphism class appears at least once.
pub fn chordal_structures(max_vertices: usize) -> Vec<ChordalStructure> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let fillings = slot_fillings(n);
        for zero in zero_sections(n) {
            for slots in fillings.iter().filter(|s| connected(n, &zero, s)) {
                out.push(assemble(n, &zero, slots));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_reproducible() {
        let a = ribbon_corpus(7, 10, 8);
        let b = ribbon_corpus(7, 10, 8);
        assert_eq!(a, b);
        assert!(a.iter().all(|r| r.graph().is_connected() && r.graph().noncompact_edge_count() == 0));
    }

    #[test]
    fn zero_section_shapes() {
        // 3 = 3°, 3-, 2° 1-, 2- 1-, 1- 1- 1-
        assert_eq!(zero_sections(3).len(), 5);
        assert!(zero_sections(4).iter().all(|z| z.iter().map(|s| s.order.len()).sum::<usize>() == 4));
    }

    #[test]
    fn small_chordal_structures() {
        let one = chordal_structures(1);
        // a line through one vertex, each side empty, a leg, or both
        assert_eq!(one.len(), 4);
        let two = chordal_structures(2);
        assert!(two.iter().all(|c| c.graph().is_connected()));
        assert!(two.len() > one.len());
    }
}

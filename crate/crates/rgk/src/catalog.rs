//! Named chordal ribbon graphs used by the tests, the CLI and the
//! verification harness.

use std::collections::BTreeSet;

use crate::cpm::Shape;
use crate::graph::{Edge, EdgeId, End, RawGraph};
use crate::linalg::rat;
use crate::ribbon::{ChordalStructure, RibbonGraph};

/// A chordal graph whose zero section is a chain (`Path`) or ring (`Cycle`)
/// of circles with `indices[k]` chords over the `k`-th base edge.
///
/// Circle `k` has vertices `w{k}.{t}` joined by zero-section edges
/// `z{k}.{t}: w{k}.{t} → w{k}.{t+1}`. Base edge `k` consists of chords
/// `c{k}.{r}` from the north side of one circle to the south side of the
/// next. On a path the first and last base edges are legs.
pub fn dualizable(shape: Shape, indices: &[usize]) -> ChordalStructure {
    let n = indices.len();
    assert!(n >= 2 && indices.iter().all(|&a| a >= 1), "need at least two positive indices");
    let wheels = match shape {
        Shape::Path => n - 1,
        Shape::Cycle => n,
        Shape::Other => panic!("no graph for shape OTHER"),
    };
    // wheel k (1-based) sits between base edges k and k + 1
    let south = |k: usize| indices[k - 1];
    let north = |k: usize| indices[k % n];
    let size = |k: usize| south(k).max(north(k)).max(2);
    let vertex = |k: usize, t: usize| format!("w{k}.{t}");

    let mut raw = RawGraph::new();
    let mut lists: Vec<(String, Vec<String>)> = Vec::new();
    let mut zero = BTreeSet::new();
    for k in 1..=wheels {
        let m = size(k);
        for t in 0..m {
            raw = raw.vertex(&vertex(k, t));
            let z = format!("z{k}.{t}");
            raw = raw.link(&z, &vertex(k, t), &vertex(k, (t + 1) % m));
            zero.insert(EdgeId(z));
        }
    }
    // base edge b joins wheel b - 1 (north) to wheel b (south)
    for b in 1..=n {
        let from = match (shape, b) {
            (Shape::Path, 1) => None,
            (_, 1) => Some(wheels),
            _ => Some(b - 1),
        };
        let to = if b <= wheels { Some(b) } else { None };
        for r in 0..indices[b - 1] {
            let a = from.map_or(End::Free, |k| End::Vertex(vertex(k, r).into()));
            let c = to.map_or(End::Free, |k| End::Vertex(vertex(k, r).into()));
            raw = raw.edge(&format!("c{b}.{r}"), Edge::new(a, c, rat(0), rat(1)));
        }
    }
    for k in 1..=wheels {
        let m = size(k);
        for t in 0..m {
            let mut order = vec![format!("z{k}.{t}")];
            if t < north(k) {
                order.push(format!("c{}.{t}", k % n + 1));
            }
            order.push(format!("z{k}.{}", (t + m - 1) % m));
            if t < south(k) {
                order.push(format!("c{k}.{t}"));
            }
            lists.push((vertex(k, t), order));
        }
    }
    let graph = raw.build().expect("catalog graph is valid");
    let ribbon = RibbonGraph::from_lists(
        graph,
        lists.iter().map(|(v, es)| (v.as_str(), es.iter().map(String::as_str).collect())),
    )
    .expect("catalog orders are valid");
    ChordalStructure::new(ribbon, zero).expect("catalog graph is chordal")
}

/// One circle with `up` chords leaving on the north side and `down` on the south.
pub fn wheel(up: usize, down: usize) -> ChordalStructure {
    dualizable(Shape::Path, &[down, up])
}

/// Two circles joined by one chord, each with a leg on the far side.
pub fn curtain_rod() -> ChordalStructure {
    dualizable(Shape::Path, &[1, 1, 1])
}

/// Two circles joined by two chords on opposite sides.
pub fn torus() -> ChordalStructure {
    dualizable(Shape::Cycle, &[1, 1])
}

/// A bare circle on two vertices: the zero section of the cotangent bundle of `S^1`.
pub fn circle() -> ChordalStructure {
    let graph = RawGraph::new()
        .vertices(["a", "b"])
        .link("z0", "a", "b")
        .link("z1", "b", "a")
        .build()
        .expect("valid");
    let ribbon = RibbonGraph::from_lists(graph, [("a", vec!["z0", "z1"]), ("b", vec!["z1", "z0"])]).expect("valid");
    ChordalStructure::new(ribbon, ["z0", "z1"].into_iter().map(EdgeId::from).collect()).expect("valid")
}

/// Every path and cycle index tuple with at least two entries, each at least 1, summing to at most `max_total`.
pub fn index_tuples(max_total: usize) -> Vec<(Shape, Vec<usize>)> {
    fn compositions(total: usize) -> Vec<Vec<usize>> {
        if total == 0 {
            return vec![Vec::new()];
        }
        (1..=total)
            .flat_map(|first| {
                compositions(total - first).into_iter().map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
            })
            .collect()
    }
    let mut out = Vec::new();
    for total in 2..=max_total {
        for v in compositions(total).into_iter().filter(|v| v.len() >= 2) {
            out.push((Shape::Path, v.clone()));
            out.push((Shape::Cycle, v));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let t = torus();
        assert_eq!(t.graph().vertices().len(), 4);
        assert_eq!(t.chords().count(), 2);
        let rod = curtain_rod();
        assert_eq!(rod.graph().noncompact_edge_count(), 2);
        assert_eq!(rod.zero_components().len(), 2);
        let w = wheel(2, 3);
        assert_eq!(w.zero_components().len(), 1);
        assert_eq!(w.chords().count(), 5);
        assert_eq!(circle().chords().count(), 0);
    }

    #[test]
    fn index_tuple_counts() {
        // compositions of t into at least two parts: 2^(t-1) - 1, for each shape
        assert_eq!(index_tuples(5).len(), 2 * (1 + 3 + 7 + 15));
        assert!(index_tuples(5).iter().all(|(_, v)| v.len() >= 2 && v.iter().sum::<usize>() <= 5));
    }

    #[test]
    fn chords_sit_north_and_south() {
        use crate::ribbon::Compass;
        let t = torus();
        let o = t.default_orientation();
        let labels = t.compass_at(&"w1.0".into(), &o);
        assert_eq!(labels[&EdgeId::from("z1.0")], Compass::E);
        assert_eq!(labels[&EdgeId::from("c2.0")], Compass::N);
        assert_eq!(labels[&EdgeId::from("c1.0")], Compass::S);
    }
}

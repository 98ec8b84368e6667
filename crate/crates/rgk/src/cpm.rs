//! The base graph of a chordal ribbon graph, its wheel cover, objects of the
//! plumbing model glued from wheel representations, and their Hom spaces.

mod glue;
pub mod sieve;

pub use glue::{cpm_hom, structure_object, GluedObject, Gluing, StalkBasis};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeId, End, VertexId};
use crate::linalg::Rational;
use crate::quiver::{quiver_from_lagrangian, Base, ConicLagrangian, Direction, LagrangianQuiver, RepError, Spoke};
use crate::ribbon::{ChordalStructure, Compass, ZComponent};

/// Shape of the base graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Shape {
    Path,
    Cycle,
    Other,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Path => "PATH",
            Shape::Cycle => "CYCLE",
            Shape::Other => "OTHER",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    North,
    South,
}

/// Where a base edge ends: on one side of a zero-section component, or nowhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Anchor {
    Free,
    Component { component: usize, side: Side },
}

impl Anchor {
    pub fn component(&self) -> Option<usize> {
        match self {
            Anchor::Free => None,
            Anchor::Component { component, .. } => Some(*component),
        }
    }
}

/// The chords running between the same two anchors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseEdge {
    /// Least chord over the edge.
    pub label: EdgeId,
    pub ends: (Anchor, Anchor),
    pub chords: Vec<EdgeId>,
}

impl BaseEdge {
    pub fn is_compact(&self) -> bool {
        self.ends.0 != Anchor::Free && self.ends.1 != Anchor::Free
    }

    pub fn is_loop(&self) -> bool {
        self.is_compact() && self.ends.0.component() == self.ends.1.component()
    }
}

/// Zero-section components collapsed to points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseGraph {
    components: Vec<ZComponent>,
    edges: Vec<BaseEdge>,
    vertex_map: BTreeMap<VertexId, usize>,
    chord_map: BTreeMap<EdgeId, usize>,
}

impl BaseGraph {
    pub fn components(&self) -> &[ZComponent] {
        &self.components
    }

    /// Sorted by label.
    pub fn edges(&self) -> &[BaseEdge] {
        &self.edges
    }

    /// The component a vertex collapses to.
    pub fn component_of(&self, v: &VertexId) -> Option<usize> {
        self.vertex_map.get(v).copied()
    }

    /// The base edge a chord collapses to.
    pub fn edge_of(&self, chord: &EdgeId) -> Option<usize> {
        self.chord_map.get(chord).copied()
    }

    pub fn degree(&self, component: usize) -> usize {
        self.edges
            .iter()
            .map(|e| [e.ends.0, e.ends.1].iter().filter(|a| a.component() == Some(component)).count())
            .sum()
    }

    pub fn noncompact_count(&self) -> usize {
        self.edges.iter().filter(|e| !e.is_compact()).count()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.components.len();
        if n == 0 {
            return self.edges.len() <= 1;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for e in self.edges.iter().filter(|e| e.is_compact()) {
                let (a, b) = (e.ends.0.component(), e.ends.1.component());
                for (x, y) in [(a, b), (b, a)] {
                    if let (Some(x), Some(y)) = (x, y) {
                        if x == c && !seen[y] {
                            seen[y] = true;
                            stack.push(y);
                        }
                    }
                }
            }
        }
        let isolated_free = self.edges.iter().any(|e| e.ends == (Anchor::Free, Anchor::Free));
        seen.iter().all(|&s| s) && !isolated_free
    }

    /// `PATH` or `CYCLE` when every vertex has degree 2 and the graph is
    /// connected, with two or no noncompact edges; `OTHER` otherwise.
    pub fn shape(&self) -> Shape {
        let regular = !self.components.is_empty() && (0..self.components.len()).all(|c| self.degree(c) == 2);
        if !regular || !self.is_connected() {
            return Shape::Other;
        }
        match self.noncompact_count() {
            0 => Shape::Cycle,
            2 => Shape::Path,
            _ => Shape::Other,
        }
    }
}

/// Collapse every zero-section component to a vertex. Chords with the same
/// pair of anchors (component and side, or a free end) form one base edge.
pub fn base_graph(c: &ChordalStructure) -> BaseGraph {
    let components = c.zero_components();
    let vertex_map: BTreeMap<VertexId, usize> = components
        .iter()
        .enumerate()
        .flat_map(|(i, comp)| comp.vertices.iter().map(move |v| (v.clone(), i)))
        .collect();
    let orientation = c.default_orientation();
    let anchor = |chord: &EdgeId, end: &End| match end {
        End::Free => Anchor::Free,
        End::Vertex(v) => {
            let side = match c.compass_at(v, &orientation)[chord] {
                Compass::N => Side::North,
                _ => Side::South,
            };
            Anchor::Component { component: vertex_map[v], side }
        }
    };
    let mut groups: BTreeMap<(Anchor, Anchor), Vec<EdgeId>> = BTreeMap::new();
    for (id, edge) in c.chords() {
        let (a, b) = (anchor(id, &edge.ends[0]), anchor(id, &edge.ends[1]));
        groups.entry((a.min(b), a.max(b))).or_default().push(id.clone());
    }
    let mut edges: Vec<BaseEdge> = groups
        .into_iter()
        .map(|(ends, chords)| BaseEdge { label: chords[0].clone(), ends, chords })
        .collect();
    edges.sort_by(|a, b| a.label.cmp(&b.label));
    let chord_map = edges
        .iter()
        .enumerate()
        .flat_map(|(i, e)| e.chords.iter().map(move |ch| (ch.clone(), i)))
        .collect();
    BaseGraph { components, edges, vertex_map, chord_map }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotDualizable {
    #[error("zero-section component {component} is not a circle")]
    OpenComponent { component: usize },
    #[error("base vertex {component} has degree {degree}, expected 2")]
    Degree { component: usize, degree: usize },
    #[error("base edge {label} is a loop")]
    Loop { label: EdgeId },
    #[error("both base edges at component {component} leave on the same side")]
    OneSided { component: usize },
    #[error("base graph is disconnected")]
    Disconnected,
}

/// The chord counts over the base edges, in order along the path or cycle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Indices {
    pub shape: Shape,
    pub values: Vec<usize>,
}

impl fmt::Display for Indices {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dualization {
    pub base: BaseGraph,
    /// Base edges in path or cycle order.
    pub order: Vec<usize>,
    pub indices: Indices,
}

/// Check that the base graph is a path or a cycle, and read off the indices.
///
/// A path is read from its noncompact end with the lesser label. A cycle
/// starts at its least label and moves toward the lesser of its two neighbours.
pub fn dualizable(c: &ChordalStructure) -> Result<Dualization, NotDualizable> {
    let base = base_graph(c);
    if let Some(i) = base.components.iter().position(|z| !z.circle) {
        return Err(NotDualizable::OpenComponent { component: i });
    }
    if let Some(e) = base.edges.iter().find(|e| e.is_loop()) {
        return Err(NotDualizable::Loop { label: e.label.clone() });
    }
    for i in 0..base.components.len() {
        let degree = base.degree(i);
        if degree != 2 {
            return Err(NotDualizable::Degree { component: i, degree });
        }
        let sides: Vec<Side> = base
            .edges
            .iter()
            .flat_map(|e| [e.ends.0, e.ends.1])
            .filter_map(|a| match a {
                Anchor::Component { component, side } if component == i => Some(side),
                _ => None,
            })
            .collect();
        if sides[0] == sides[1] {
            return Err(NotDualizable::OneSided { component: i });
        }
    }
    let shape = base.shape();
    if base.components.is_empty() || shape == Shape::Other {
        return Err(NotDualizable::Disconnected);
    }
    let order = walk(&base, shape);
    let values = order.iter().map(|&e| base.edges[e].chords.len()).collect();
    Ok(Dualization { base, order, indices: Indices { shape, values } })
}

/// Traverse a 2-regular base graph; edges are sorted by label, so indices compare labels.
fn walk(base: &BaseGraph, shape: Shape) -> Vec<usize> {
    let neighbours = |e: usize, via: usize| -> Option<usize> {
        (0..base.edges.len()).find(|&f| {
            f != e && [base.edges[f].ends.0, base.edges[f].ends.1].iter().any(|a| a.component() == Some(via))
        })
    };
    let far_end = |e: usize, from: Option<usize>| -> Option<usize> {
        let (a, b) = (base.edges[e].ends.0.component(), base.edges[e].ends.1.component());
        if a == from {
            b
        } else {
            a
        }
    };
    let (start, mut at) = match shape {
        Shape::Path => {
            let start = (0..base.edges.len()).find(|&e| !base.edges[e].is_compact()).expect("path has ends");
            (start, far_end(start, None))
        }
        _ => {
            let ends = base.edges[0].ends;
            let (a, b) = (ends.0.component().expect("compact"), ends.1.component().expect("compact"));
            let via_a = neighbours(0, a).expect("2-regular");
            let via_b = neighbours(0, b).expect("2-regular");
            (0, Some(if via_a <= via_b { a } else { b }))
        }
    };
    let mut order = vec![start];
    let mut current = start;
    while let Some(v) = at {
        match neighbours(current, v) {
            Some(next) if next != start => {
                order.push(next);
                at = far_end(next, Some(v));
                current = next;
            }
            _ => break,
        }
    }
    order
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CpmError {
    #[error(transparent)]
    NotDualizable(#[from] NotDualizable),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("expected {expected} wheel representations, got {found}")]
    WheelCount { expected: usize, found: usize },
    #[error("expected {expected} overlap gluings, got {found}")]
    OverlapCount { expected: usize, found: usize },
    #[error("wheel {wheel}: representation has {found} arrows, the wheel has {expected} spokes")]
    WheelQuiver { wheel: usize, expected: usize, found: usize },
    #[error("overlap {overlap}, degree {degree}: stalk dimensions {left} and {right} differ")]
    Interface { overlap: usize, degree: i32, left: usize, right: usize },
    #[error("overlap {overlap}, degree {degree}: gluing must be an invertible {dim}x{dim} matrix")]
    Gluing { overlap: usize, degree: i32, dim: usize },
    #[error("wheel {wheel}: no arc of cells has the prescribed stalks")]
    NoArc { wheel: usize },
}

/// A zero-section circle together with the stubs of the chords at it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wheel {
    pub component: usize,
    /// Vertices in the direction of the orientation, from the least one.
    pub vertices: Vec<VertexId>,
    pub lagrangian: ConicLagrangian,
    pub quiver: LagrangianQuiver,
    /// The chord behind each spoke, indexed like the quiver's arrows.
    pub chords: Vec<EdgeId>,
}

impl Wheel {
    pub fn arrow_of(&self, chord: &EdgeId) -> Option<usize> {
        self.chords.iter().position(|c| c == chord)
    }
}

/// A compact chord seen from both of its ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlap {
    pub chord: EdgeId,
    /// `(wheel, arrow)` at the `lo` end.
    pub left: (usize, usize),
    /// `(wheel, arrow)` at the `hi` end.
    pub right: (usize, usize),
}

/// One wheel per zero-section circle; wheels meet along compact chords.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WheelCover {
    pub wheels: Vec<Wheel>,
    pub overlaps: Vec<Overlap>,
}

/// A chord at `v` on the north side is an up spoke, on the south side a down spoke.
/// Positions are `k / m` for the `k`-th of the `m` vertices of the circle.
pub fn wheel_cover(c: &ChordalStructure) -> Result<WheelCover, CpmError> {
    let orientation = c.default_orientation();
    let components = c.zero_components();
    if let Some(i) = components.iter().position(|z| !z.circle) {
        return Err(NotDualizable::OpenComponent { component: i }.into());
    }
    let mut at_end: BTreeMap<(EdgeId, VertexId), (usize, usize)> = BTreeMap::new();
    let mut wheels = Vec::new();
    for (w, comp) in components.iter().enumerate() {
        let first = comp.vertices.iter().next().expect("nonempty component").clone();
        let mut vertices = vec![first.clone()];
        loop {
            let here = vertices.last().expect("nonempty");
            let (out, _) = c.flow_at(here, &orientation);
            let next = c.graph().edges()[&out]
                .other_end(here)
                .and_then(End::vertex)
                .expect("circle edges are compact")
                .clone();
            if next == first {
                break;
            }
            vertices.push(next);
        }
        let m = vertices.len() as i64;
        let mut placed: Vec<(Spoke, EdgeId, VertexId)> = Vec::new();
        for (k, v) in vertices.iter().enumerate() {
            let at = Rational::new((k as i64).into(), m.into());
            for (e, label) in c.compass_at(v, &orientation) {
                let spoke = match label {
                    Compass::N => Spoke::up(at.clone()),
                    Compass::S => Spoke::down(at.clone()),
                    _ => continue,
                };
                placed.push((spoke, e, v.clone()));
            }
        }
        let lagrangian = ConicLagrangian::from_spokes(Base::Circle, placed.iter().map(|p| p.0.clone()).collect());
        let chords: Vec<EdgeId> = lagrangian
            .spokes()
            .iter()
            .map(|s| placed.iter().find(|p| p.0 == *s).expect("placed spoke").1.clone())
            .collect();
        for (arrow, s) in lagrangian.spokes().iter().enumerate() {
            let p = placed.iter().find(|p| p.0 == *s).expect("placed spoke");
            at_end.insert((p.1.clone(), p.2.clone()), (w, arrow));
        }
        let quiver = quiver_from_lagrangian(&lagrangian);
        wheels.push(Wheel { component: w, vertices, lagrangian, quiver, chords });
    }
    let overlaps = c
        .chords()
        .filter(|(_, e)| e.is_compact())
        .map(|(id, e)| {
            let end = |i: usize| at_end[&(id.clone(), e.ends[i].vertex().expect("compact").clone())];
            Overlap { chord: id.clone(), left: end(0), right: end(1) }
        })
        .collect();
    Ok(WheelCover { wheels, overlaps })
}

impl Direction {
    pub fn side(self) -> Side {
        match self {
            Direction::Up => Side::North,
            Direction::Down => Side::South,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::graph::RawGraph;
    use crate::ribbon::RibbonGraph;

    fn chordal(raw: RawGraph, orders: Vec<(&str, Vec<&str>)>, zero: &[&str]) -> ChordalStructure {
        let ribbon = RibbonGraph::from_lists(raw.build().unwrap(), orders).unwrap();
        ChordalStructure::new(ribbon, zero.iter().map(|&e| EdgeId::from(e)).collect()).unwrap()
    }

    #[test]
    fn curtain_rod_is_a_path() {
        let b = base_graph(&catalog::curtain_rod());
        assert_eq!(b.components().len(), 2);
        assert_eq!(b.edges().len(), 3);
        assert_eq!(b.shape(), Shape::Path);
        assert_eq!(b.component_of(&"w2.1".into()), Some(1));
        assert_eq!(b.edge_of(&"c2.0".into()), Some(1));
    }

    #[test]
    fn torus_is_a_cycle() {
        let d = dualizable(&catalog::torus()).unwrap();
        assert_eq!(d.indices, Indices { shape: Shape::Cycle, values: vec![1, 1] });
        assert_eq!(d.indices.to_string(), "(1,1)");
    }

    #[test]
    fn indices_follow_the_constructor() {
        for (shape, values) in [
            (Shape::Path, vec![1, 2, 3]),
            (Shape::Path, vec![3, 1]),
            (Shape::Cycle, vec![2, 1, 3]),
            (Shape::Cycle, vec![1, 1, 1, 2]),
        ] {
            let d = dualizable(&catalog::dualizable(shape, &values)).unwrap();
            assert_eq!(d.indices, Indices { shape, values });
        }
    }

    #[test]
    fn single_wheel_is_a_path() {
        let d = dualizable(&catalog::wheel(2, 3)).unwrap();
        assert_eq!(d.indices, Indices { shape: Shape::Path, values: vec![3, 2] });
    }

    #[test]
    fn bare_circle_is_not_dualizable() {
        let c = catalog::circle();
        assert_eq!(base_graph(&c).shape(), Shape::Other);
        assert_eq!(dualizable(&c), Err(NotDualizable::Degree { component: 0, degree: 0 }));
    }

    #[test]
    fn chord_back_to_its_circle_is_a_loop() {
        let c = chordal(
            RawGraph::new().vertices(["a", "b"]).link("z0", "a", "b").link("z1", "b", "a").link("c", "a", "b"),
            vec![("a", vec!["z0", "c", "z1"]), ("b", vec!["z1", "c", "z0"])],
            &["z0", "z1"],
        );
        assert_eq!(dualizable(&c), Err(NotDualizable::Loop { label: "c".into() }));
    }

    #[test]
    fn two_legs_on_one_side_form_one_edge() {
        let c = chordal(
            RawGraph::new()
                .vertices(["a", "b"])
                .link("z0", "a", "b")
                .link("z1", "b", "a")
                .leg("l0", "a")
                .leg("l1", "b"),
            vec![("a", vec!["z0", "l0", "z1"]), ("b", vec!["z1", "l1", "z0"])],
            &["z0", "z1"],
        );
        let b = base_graph(&c);
        assert_eq!(b.edges().len(), 1);
        assert_eq!(b.edges()[0].chords.len(), 2);
        assert_eq!(dualizable(&c), Err(NotDualizable::Degree { component: 0, degree: 1 }));
    }

    #[test]
    fn one_sided_component() {
        let c = chordal(
            RawGraph::new()
                .vertices(["a", "b", "c", "d"])
                .link("z0", "a", "b")
                .link("z1", "b", "a")
                .link("z2", "c", "d")
                .link("z3", "d", "c")
                .link("x", "a", "c")
                .leg("y", "b")
                .leg("u", "d"),
            vec![
                ("a", vec!["z0", "x", "z1"]),
                ("b", vec!["z1", "y", "z0"]),
                ("c", vec!["z2", "z3", "x"]),
                ("d", vec!["z3", "u", "z2"]),
            ],
            &["z0", "z1", "z2", "z3"],
        );
        assert_eq!(dualizable(&c), Err(NotDualizable::OneSided { component: 0 }));
    }

    #[test]
    fn wheel_covers() {
        let t = wheel_cover(&catalog::torus()).unwrap();
        assert_eq!(t.wheels.len(), 2);
        assert_eq!(t.overlaps.len(), 2);
        assert!(t.wheels.iter().all(|w| w.chords.len() == 2));
        let rod = wheel_cover(&catalog::curtain_rod()).unwrap();
        assert_eq!(rod.wheels.len(), 2);
        assert_eq!(rod.overlaps.len(), 1);
        let o = &rod.overlaps[0];
        assert_eq!(o.chord, EdgeId::from("c2.0"));
        assert_eq!(rod.wheels[o.left.0].chords[o.left.1], o.chord);
        assert_eq!(rod.wheels[o.right.0].chords[o.right.1], o.chord);
        let single = wheel_cover(&catalog::wheel(1, 2)).unwrap();
        assert_eq!(single.wheels.len(), 1);
        assert!(single.overlaps.is_empty());
        assert_eq!(single.wheels[0].lagrangian.count(Direction::Up), 1);
        assert_eq!(single.wheels[0].lagrangian.count(Direction::Down), 2);
    }

    #[test]
    fn every_vertex_lies_on_a_wheel() {
        let c = catalog::dualizable(Shape::Cycle, &[2, 1, 3]);
        let cover = wheel_cover(&c).unwrap();
        let on_wheels: usize = cover.wheels.iter().map(|w| w.vertices.len()).sum();
        assert_eq!(on_wheels, c.graph().vertices().len());
        assert_eq!(cover.overlaps.len(), 6);
    }
}

//! Graphs with affine edge coordinates, and morphisms between them.
//!
//! Each edge is an open interval `(lo, hi)` of the rationals. Its two ends
//! are stored in coordinate order, so `ends[0]` sits at `lo` and `ends[1]` at
//! `hi`. An end is either a vertex or free; an edge with a free end is
//! noncompact. Loops are rejected, so a half-edge is just an (edge, vertex)
//! pair.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub String);

macro_rules! string_id {
    ($t:ident) => {
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
        impl From<&str> for $t {
            fn from(s: &str) -> Self {
                $t(s.to_string())
            }
        }
        impl From<String> for $t {
            fn from(s: String) -> Self {
                $t(s)
            }
        }
        impl $t {
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }
    };
}

string_id!(VertexId);
string_id!(EdgeId);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Vertex(VertexId),
    Free,
}

impl End {
    pub fn vertex(&self) -> Option<&VertexId> {
        match self {
            End::Vertex(v) => Some(v),
            End::Free => None,
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, End::Free)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub ends: [End; 2],
    pub lo: Rational,
    pub hi: Rational,
}

impl Edge {
    pub fn new(a: End, b: End, lo: Rational, hi: Rational) -> Self {
        Edge {
            ends: [a, b],
            lo,
            hi,
        }
    }

    /// Compact edge on `(0, 1)`.
    pub fn unit(a: &str, b: &str) -> Self {
        Edge::new(
            End::Vertex(a.into()),
            End::Vertex(b.into()),
            rat(0),
            rat(1),
        )
    }

    pub fn is_compact(&self) -> bool {
        !self.ends.iter().any(End::is_free)
    }

    pub fn touches(&self, v: &VertexId) -> bool {
        self.ends.iter().any(|e| e.vertex() == Some(v))
    }

    /// Slot (0 for `lo`, 1 for `hi`) of `v` among the ends.
    pub fn slot_of(&self, v: &VertexId) -> Option<usize> {
        self.ends.iter().position(|e| e.vertex() == Some(v))
    }

    pub fn other_end(&self, v: &VertexId) -> Option<&End> {
        self.slot_of(v).map(|i| &self.ends[1 - i])
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> {
        self.ends.iter().filter_map(End::vertex)
    }
}

/// A germ of an edge at one of its vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfEdge {
    pub edge: EdgeId,
    pub vertex: VertexId,
}

impl HalfEdge {
    pub fn new(edge: &EdgeId, vertex: &VertexId) -> Self {
        HalfEdge {
            edge: edge.clone(),
            vertex: vertex.clone(),
        }
    }
}

impl fmt::Display for HalfEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.edge, self.vertex)
    }
}

/// An edge traversed in a direction: `forward` runs from `lo` to `hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub edge: EdgeId,
    pub forward: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {0} is a loop; graphs have no loops (subdivide it with a bivalent vertex)")]
    Loop(EdgeId),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("edge {0} has degenerate interval: lo must be below hi")]
    DegenerateInterval(EdgeId),
    #[error("edge {0} ends at unknown vertex {1}")]
    Dangling(EdgeId, VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("edge {0} is incident with {1} but missing from the open subgraph")]
    NotOpen(EdgeId, VertexId),
    #[error("edge {0} has an end at {1}, which is missing from the closed subgraph")]
    NotClosed(EdgeId, VertexId),
}

/// Every problem found while validating a raw description.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid graph: {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
pub struct Diagnostics(pub Vec<GraphError>);

impl From<GraphError> for Diagnostics {
    fn from(e: GraphError) -> Self {
        Diagnostics(vec![e])
    }
}

/// Unvalidated graph data, in insertion order.
#[derive(Debug, Clone, Default)]
pub struct RawGraph {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(EdgeId, Edge)>,
}

impl RawGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, v: &str) -> Self {
        self.vertices.push(v.into());
        self
    }

    pub fn vertices<'a>(mut self, vs: impl IntoIterator<Item = &'a str>) -> Self {
        self.vertices.extend(vs.into_iter().map(VertexId::from));
        self
    }

    pub fn edge(mut self, id: &str, edge: Edge) -> Self {
        self.edges.push((id.into(), edge));
        self
    }

    /// Compact edge on `(0, 1)` from `a` to `b`.
    pub fn link(self, id: &str, a: &str, b: &str) -> Self {
        self.edge(id, Edge::unit(a, b))
    }

    /// Noncompact edge on `(0, 1)` leaving `a`.
    pub fn leg(self, id: &str, a: &str) -> Self {
        self.edge(
            id,
            Edge::new(End::Vertex(a.into()), End::Free, rat(0), rat(1)),
        )
    }

    /// Replace every loop `e` by `e.0`, `e.1` through a new vertex `e.mid`.
    pub fn subdivide_loops(self) -> Self {
        let mut out = RawGraph {
            vertices: self.vertices,
            edges: Vec::new(),
        };
        for (id, e) in self.edges {
            let is_loop = matches!((&e.ends[0], &e.ends[1]), (End::Vertex(a), End::Vertex(b)) if a == b);
            if !is_loop {
                out.edges.push((id, e));
                continue;
            }
            let mid_v = VertexId(format!("{id}.mid"));
            let mid = (&e.lo + &e.hi) / rat(2);
            out.vertices.push(mid_v.clone());
            out.edges.push((
                EdgeId(format!("{id}.0")),
                Edge::new(e.ends[0].clone(), End::Vertex(mid_v.clone()), e.lo.clone(), mid.clone()),
            ));
            out.edges.push((
                EdgeId(format!("{id}.1")),
                Edge::new(End::Vertex(mid_v), e.ends[1].clone(), mid, e.hi.clone()),
            ));
        }
        out
    }

    pub fn build(self) -> Result<Graph, Diagnostics> {
        let mut problems = Vec::new();
        let mut vertices = BTreeSet::new();
        for v in self.vertices {
            if !vertices.insert(v.clone()) {
                problems.push(GraphError::DuplicateVertex(v));
            }
        }
        let mut edges = BTreeMap::new();
        for (id, e) in self.edges {
            if e.lo >= e.hi {
                problems.push(GraphError::DegenerateInterval(id.clone()));
            }
            if let (End::Vertex(a), End::Vertex(b)) = (&e.ends[0], &e.ends[1]) {
                if a == b {
                    problems.push(GraphError::Loop(id.clone()));
                }
            }
            for v in e.vertices() {
                if !vertices.contains(v) {
                    problems.push(GraphError::Dangling(id.clone(), v.clone()));
                }
            }
            if edges.insert(id.clone(), e).is_some() {
                problems.push(GraphError::DuplicateEdge(id));
            }
        }
        if problems.is_empty() {
            Ok(Graph { vertices, edges })
        } else {
            Err(Diagnostics(problems))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, Edge>,
}

impl Graph {
    pub fn empty() -> Self {
        Graph {
            vertices: BTreeSet::new(),
            edges: BTreeMap::new(),
        }
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeMap<EdgeId, Edge> {
        &self.edges
    }

    pub fn edge(&self, e: &EdgeId) -> Result<&Edge, GraphError> {
        self.edges
            .get(e)
            .ok_or_else(|| GraphError::UnknownEdge(e.clone()))
    }

    pub fn has_vertex(&self, v: &VertexId) -> bool {
        self.vertices.contains(v)
    }

    fn check_vertex(&self, v: &VertexId) -> Result<(), GraphError> {
        if self.has_vertex(v) {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v.clone()))
        }
    }

    pub fn incident_edges<'a>(&'a self, v: &'a VertexId) -> impl Iterator<Item = &'a EdgeId> + 'a {
        self.edges
            .iter()
            .filter(move |(_, e)| e.touches(v))
            .map(|(id, _)| id)
    }

    pub fn half_edges_at(&self, v: &VertexId) -> Vec<HalfEdge> {
        self.incident_edges(v)
            .map(|e| HalfEdge::new(e, v))
            .collect()
    }

    pub fn half_edges(&self) -> Vec<HalfEdge> {
        self.edges
            .iter()
            .flat_map(|(id, e)| e.vertices().map(move |v| HalfEdge::new(id, v)))
            .collect()
    }

    pub fn degree(&self, v: &VertexId) -> usize {
        self.incident_edges(v).count()
    }

    pub fn compact_edge_count(&self) -> usize {
        self.edges.values().filter(|e| e.is_compact()).count()
    }

    pub fn noncompact_edge_count(&self) -> usize {
        self.edges.len() - self.compact_edge_count()
    }

    /// Tail and head ends of a dart.
    pub fn dart_ends(&self, d: &Dart) -> Result<(&End, &End), GraphError> {
        let e = self.edge(&d.edge)?;
        Ok(if d.forward {
            (&e.ends[0], &e.ends[1])
        } else {
            (&e.ends[1], &e.ends[0])
        })
    }

    /// Connected components, each as (vertices, edges). An edge with two
    /// free ends forms a component without vertices.
    pub fn components(&self) -> Vec<(BTreeSet<VertexId>, BTreeSet<EdgeId>)> {
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        let mut out = Vec::new();
        for start in &self.vertices {
            if seen.contains(start) {
                continue;
            }
            let mut verts = BTreeSet::new();
            let mut edges = BTreeSet::new();
            let mut stack = vec![start.clone()];
            while let Some(v) = stack.pop() {
                if !verts.insert(v.clone()) {
                    continue;
                }
                for id in self.incident_edges(&v) {
                    edges.insert(id.clone());
                    if let Some(End::Vertex(w)) = self.edges[id].other_end(&v) {
                        if !verts.contains(w) {
                            stack.push(w.clone());
                        }
                    }
                }
            }
            seen.extend(verts.iter().cloned());
            out.push((verts, edges));
        }
        for (id, e) in &self.edges {
            if e.ends.iter().all(End::is_free) {
                out.push((BTreeSet::new(), [id.clone()].into_iter().collect()));
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Connected and acyclic.
    pub fn is_tree(&self) -> bool {
        self.is_connected()
            && !self.vertices.is_empty()
            && self.compact_edge_count() + 1 == self.vertices.len()
    }

    /// The open star of `v`: `v` and its incident edges, far ends made free.
    pub fn star(&self, v: &VertexId) -> Result<Graph, GraphError> {
        self.check_vertex(v)?;
        self.open_subgraph(
            &[v.clone()].into_iter().collect(),
            &self.incident_edges(v).cloned().collect(),
        )
    }

    /// Open subgraph on `vertices` and `edges`. Every edge at a kept vertex
    /// must be kept; ends at dropped vertices become free.
    pub fn open_subgraph(
        &self,
        vertices: &BTreeSet<VertexId>,
        edges: &BTreeSet<EdgeId>,
    ) -> Result<Graph, GraphError> {
        for v in vertices {
            self.check_vertex(v)?;
            if let Some(e) = self.incident_edges(v).find(|e| !edges.contains(*e)) {
                return Err(GraphError::NotOpen(e.clone(), v.clone()));
            }
        }
        let mut out = BTreeMap::new();
        for id in edges {
            let mut e = self.edge(id)?.clone();
            for end in e.ends.iter_mut() {
                if let End::Vertex(w) = end {
                    if !vertices.contains(w) {
                        *end = End::Free;
                    }
                }
            }
            out.insert(id.clone(), e);
        }
        Ok(Graph {
            vertices: vertices.clone(),
            edges: out,
        })
    }

    /// Smallest open subgraph containing the given vertices and edges.
    pub fn open_hull(
        &self,
        vertices: &BTreeSet<VertexId>,
        edges: &BTreeSet<EdgeId>,
    ) -> Result<Graph, GraphError> {
        let mut all = edges.clone();
        for v in vertices {
            all.extend(self.incident_edges(v).cloned());
        }
        self.open_subgraph(vertices, &all)
    }

    /// Closed subgraph: every end of a kept edge that is a vertex must be kept.
    pub fn closed_subgraph(
        &self,
        vertices: &BTreeSet<VertexId>,
        edges: &BTreeSet<EdgeId>,
    ) -> Result<Graph, GraphError> {
        for v in vertices {
            self.check_vertex(v)?;
        }
        let mut out = BTreeMap::new();
        for id in edges {
            let e = self.edge(id)?;
            if let Some(w) = e.vertices().find(|w| !vertices.contains(*w)) {
                return Err(GraphError::NotClosed(id.clone(), w.clone()));
            }
            out.insert(id.clone(), e.clone());
        }
        Ok(Graph {
            vertices: vertices.clone(),
            edges: out,
        })
    }

    /// Insert a bivalent vertex `mid` at coordinate `at` inside edge `e`,
    /// which becomes `e.0` (below `at`) and `e.1` (above).
    pub fn subdivide_edge(&self, e: &EdgeId, mid: &VertexId, at: &Rational) -> Result<Graph, GraphError> {
        let old = self.edge(e)?.clone();
        if self.has_vertex(mid) {
            return Err(GraphError::DuplicateVertex(mid.clone()));
        }
        if !(old.lo < *at && *at < old.hi) {
            return Err(GraphError::DegenerateInterval(e.clone()));
        }
        let mut g = self.clone();
        g.edges.remove(e);
        g.vertices.insert(mid.clone());
        let lower = EdgeId(format!("{e}.0"));
        let upper = EdgeId(format!("{e}.1"));
        for id in [&lower, &upper] {
            if g.edges.contains_key(id) {
                return Err(GraphError::DuplicateEdge(id.clone()));
            }
        }
        let m = End::Vertex(mid.clone());
        g.edges.insert(lower, Edge::new(old.ends[0].clone(), m.clone(), old.lo.clone(), at.clone()));
        g.edges.insert(upper, Edge::new(m, old.ends[1].clone(), at.clone(), old.hi.clone()));
        Ok(g)
    }

    /// Disjoint union; fails on shared labels.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let mut g = self.clone();
        for v in &other.vertices {
            if !g.vertices.insert(v.clone()) {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        for (id, e) in &other.edges {
            if g.edges.insert(id.clone(), e.clone()).is_some() {
                return Err(GraphError::DuplicateEdge(id.clone()));
            }
        }
        Ok(g)
    }

    pub fn to_raw(&self) -> RawGraph {
        RawGraph {
            vertices: self.vertices.iter().cloned().collect(),
            edges: self.edges.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }
}

/// A closed walk (cyclic dart sequence) or a walk between two free ends.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Walk {
    pub darts: Vec<Dart>,
    pub compact: bool,
}

impl Walk {
    pub fn edges(&self) -> impl Iterator<Item = &EdgeId> {
        self.darts.iter().map(|d| &d.edge)
    }

    /// Vertex between consecutive darts; for compact walks the last entry
    /// joins the final dart to the first.
    pub fn witnesses(&self, g: &Graph) -> Result<Vec<VertexId>, GraphError> {
        let n = self.darts.len();
        let pairs = if self.compact { n } else { n.saturating_sub(1) };
        let mut out = Vec::with_capacity(pairs);
        for i in 0..pairs {
            let (_, head) = g.dart_ends(&self.darts[i])?;
            let (tail, _) = g.dart_ends(&self.darts[(i + 1) % n])?;
            match (head, tail) {
                (End::Vertex(a), End::Vertex(b)) if a == b => out.push(a.clone()),
                _ => return Err(GraphError::UnknownEdge(self.darts[i].edge.clone())),
            }
        }
        Ok(out)
    }

    /// No vertex meets more than two edges of the walk.
    pub fn is_simple(&self, g: &Graph) -> bool {
        let mut count: BTreeMap<VertexId, BTreeSet<&EdgeId>> = BTreeMap::new();
        for d in &self.darts {
            if let Ok(e) = g.edge(&d.edge) {
                for v in e.vertices() {
                    count.entry(v.clone()).or_default().insert(&d.edge);
                }
            }
        }
        count.values().all(|s| s.len() <= 2)
    }

    /// Rotate a compact walk to start at its least edge label.
    pub fn canonical(mut self) -> Self {
        if self.compact && !self.darts.is_empty() {
            let i = (0..self.darts.len())
                .min_by(|&a, &b| self.darts[a].cmp(&self.darts[b]))
                .unwrap_or(0);
            self.darts.rotate_left(i);
        }
        self
    }
}

/// What a morphism does to one source edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeAction {
    Collapse(VertexId),
    /// `x_target = scale * x_source + shift`.
    Map {
        target: EdgeId,
        scale: Rational,
        shift: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("vertex {0} has no image")]
    UnmappedVertex(VertexId),
    #[error("edge {0} has no action")]
    UnmappedEdge(EdgeId),
    #[error("image of vertex {0} is not a target vertex")]
    BadVertexImage(VertexId),
    #[error("collapsed edge {0} does not have both ends sent to its collapse vertex")]
    BadCollapse(EdgeId),
    #[error("edge {0} is not sent affinely onto its image interval")]
    BadAffine(EdgeId),
    #[error("edge {0}: end at {1} does not land on the image of {1}")]
    EndMismatch(EdgeId, VertexId),
    #[error("morphisms do not compose: target and source differ")]
    Interface,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMorphism {
    source: Graph,
    target: Graph,
    vertex_map: BTreeMap<VertexId, VertexId>,
    edge_action: BTreeMap<EdgeId, EdgeAction>,
}

impl GraphMorphism {
    pub fn new(
        source: Graph,
        target: Graph,
        vertex_map: BTreeMap<VertexId, VertexId>,
        edge_action: BTreeMap<EdgeId, EdgeAction>,
    ) -> Result<Self, MorphismError> {
        let m = GraphMorphism {
            source,
            target,
            vertex_map,
            edge_action,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn identity(g: &Graph) -> Self {
        let vertex_map = g.vertices.iter().map(|v| (v.clone(), v.clone())).collect();
        let edge_action = g
            .edges
            .keys()
            .map(|e| {
                (
                    e.clone(),
                    EdgeAction::Map {
                        target: e.clone(),
                        scale: Rational::one(),
                        shift: Rational::zero(),
                    },
                )
            })
            .collect();
        GraphMorphism {
            source: g.clone(),
            target: g.clone(),
            vertex_map,
            edge_action,
        }
    }

    /// Inclusion of a subgraph (open or closed) with unchanged coordinates.
    pub fn inclusion(sub: &Graph, ambient: &Graph) -> Result<Self, MorphismError> {
        let mut m = Self::identity(sub);
        m.target = ambient.clone();
        m.validate()?;
        Ok(m)
    }

    pub fn source(&self) -> &Graph {
        &self.source
    }

    pub fn target(&self) -> &Graph {
        &self.target
    }

    pub fn vertex_map(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.vertex_map
    }

    pub fn edge_action(&self) -> &BTreeMap<EdgeId, EdgeAction> {
        &self.edge_action
    }

    pub fn image_of_vertex(&self, v: &VertexId) -> Option<&VertexId> {
        self.vertex_map.get(v)
    }

    /// Source edges collapsed by the morphism.
    pub fn collapsed(&self) -> BTreeSet<EdgeId> {
        self.edge_action
            .iter()
            .filter(|(_, a)| matches!(a, EdgeAction::Collapse(_)))
            .map(|(e, _)| e.clone())
            .collect()
    }

    fn validate(&self) -> Result<(), MorphismError> {
        for v in &self.source.vertices {
            let w = self
                .vertex_map
                .get(v)
                .ok_or_else(|| MorphismError::UnmappedVertex(v.clone()))?;
            if !self.target.has_vertex(w) {
                return Err(MorphismError::BadVertexImage(v.clone()));
            }
        }
        for (id, e) in &self.source.edges {
            let action = self
                .edge_action
                .get(id)
                .ok_or_else(|| MorphismError::UnmappedEdge(id.clone()))?;
            match action {
                EdgeAction::Collapse(w) => {
                    let ok = e.is_compact() && e.vertices().all(|v| &self.vertex_map[v] == w);
                    if !ok {
                        return Err(MorphismError::BadCollapse(id.clone()));
                    }
                }
                EdgeAction::Map {
                    target,
                    scale,
                    shift,
                } => {
                    let t = self.target.edge(target)?;
                    if scale.is_zero() {
                        return Err(MorphismError::BadAffine(id.clone()));
                    }
                    let a = scale * &e.lo + shift;
                    let b = scale * &e.hi + shift;
                    let flipped = scale < &Rational::zero();
                    let (lo, hi) = if flipped { (b, a) } else { (a, b) };
                    if lo != t.lo || hi != t.hi {
                        return Err(MorphismError::BadAffine(id.clone()));
                    }
                    for slot in 0..2 {
                        if let End::Vertex(v) = &e.ends[slot] {
                            let tslot = if flipped { 1 - slot } else { slot };
                            if t.ends[tslot] != End::Vertex(self.vertex_map[v].clone()) {
                                return Err(MorphismError::EndMismatch(id.clone(), v.clone()));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `next ∘ self`: first `self`, then `next`.
    pub fn then(&self, next: &GraphMorphism) -> Result<GraphMorphism, MorphismError> {
        if self.target != next.source {
            return Err(MorphismError::Interface);
        }
        let vertex_map = self
            .vertex_map
            .iter()
            .map(|(v, w)| (v.clone(), next.vertex_map[w].clone()))
            .collect();
        let edge_action = self
            .edge_action
            .iter()
            .map(|(e, a)| {
                let composed = match a {
                    EdgeAction::Collapse(w) => EdgeAction::Collapse(next.vertex_map[w].clone()),
                    EdgeAction::Map {
                        target,
                        scale,
                        shift,
                    } => match &next.edge_action[target] {
                        EdgeAction::Collapse(w) => EdgeAction::Collapse(w.clone()),
                        EdgeAction::Map {
                            target: t2,
                            scale: a2,
                            shift: b2,
                        } => EdgeAction::Map {
                            target: t2.clone(),
                            scale: a2 * scale,
                            shift: a2 * shift + b2,
                        },
                    },
                };
                (e.clone(), composed)
            })
            .collect();
        GraphMorphism::new(self.source.clone(), next.target.clone(), vertex_map, edge_action)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ratio;

    fn circle3() -> Graph {
        RawGraph::new()
            .vertices(["a", "b", "c"])
            .link("e1", "a", "b")
            .link("e2", "b", "c")
            .link("e3", "c", "a")
            .build()
            .unwrap()
    }

    #[test]
    fn parallel_edges_are_fine() {
        let g = RawGraph::new()
            .vertices(["u", "v"])
            .link("e", "u", "v")
            .link("f", "u", "v")
            .build()
            .unwrap();
        assert_eq!(g.degree(&"u".into()), 2);
        assert!(!g.is_tree());
    }

    #[test]
    fn loops_rejected_then_subdivided() {
        let raw = RawGraph::new().vertex("v").link("e", "v", "v");
        let err = raw.clone().build().unwrap_err();
        assert_eq!(err.0, vec![GraphError::Loop("e".into())]);
        assert!(err.to_string().contains("no loops"));
        let g = raw.subdivide_loops().build().unwrap();
        assert_eq!(g.vertices().len(), 2);
        assert_eq!(g.degree(&"v".into()), 2);
        assert_eq!(g.degree(&"e.mid".into()), 2);
    }

    #[test]
    fn diagnostics_collect_every_problem() {
        let err = RawGraph::new()
            .vertex("a")
            .vertex("a")
            .edge("e", Edge::new(End::Vertex("a".into()), End::Vertex("z".into()), rat(1), rat(1)))
            .build()
            .unwrap_err();
        assert_eq!(err.0.len(), 3);
    }

    #[test]
    fn circle_degrees() {
        let g = circle3();
        for v in g.vertices() {
            assert_eq!(g.degree(v), 2);
        }
        assert!(g.is_connected());
        assert!(!g.is_tree());
    }

    #[test]
    fn star_is_a_tree() {
        let g = circle3();
        let s = g.star(&"a".into()).unwrap();
        assert_eq!(s.vertices().len(), 1);
        assert_eq!(s.noncompact_edge_count(), 2);
        assert!(s.is_tree());
        assert!(g.star(&"zz".into()).is_err());
    }

    #[test]
    fn two_trivalent_vertices_form_a_tree() {
        let g = RawGraph::new()
            .vertices(["u", "v"])
            .link("m", "u", "v")
            .leg("a", "u")
            .leg("b", "u")
            .leg("c", "v")
            .leg("d", "v")
            .build()
            .unwrap();
        assert!(g.is_tree());
    }

    #[test]
    fn open_subgraph_forces_incident_edges() {
        let g = circle3();
        let verts = ["a".into()].into_iter().collect();
        let edges = ["e1".into()].into_iter().collect();
        assert_eq!(
            g.open_subgraph(&verts, &edges),
            Err(GraphError::NotOpen("e3".into(), "a".into()))
        );
        assert!(g.closed_subgraph(&verts, &edges).is_err());
    }

    #[test]
    fn affine_composition() {
        let one = |lo, hi| {
            RawGraph::new()
                .edge("e", Edge::new(End::Free, End::Free, rat(lo), rat(hi)))
                .build()
                .unwrap()
        };
        let map = |src: &Graph, dst: &Graph, a: i64, b: i64| {
            GraphMorphism::new(
                src.clone(),
                dst.clone(),
                BTreeMap::new(),
                [(
                    "e".into(),
                    EdgeAction::Map {
                        target: "e".into(),
                        scale: rat(a),
                        shift: rat(b),
                    },
                )]
                .into_iter()
                .collect(),
            )
            .unwrap()
        };
        let (g0, g1, g2) = (one(0, 1), one(1, 3), one(2, 8));
        let f = map(&g0, &g1, 2, 1);
        let g = map(&g1, &g2, 3, -1);
        let fg = f.then(&g).unwrap();
        assert_eq!(
            fg.edge_action()[&EdgeId::from("e")],
            EdgeAction::Map {
                target: "e".into(),
                scale: rat(6),
                shift: rat(2)
            }
        );
        assert_eq!(GraphMorphism::identity(&g0).then(&f).unwrap(), f);
        assert_eq!(f.then(&GraphMorphism::identity(&g1)).unwrap(), f);
        assert!(g.then(&f).is_err());
    }

    #[test]
    fn collapse_and_subdivide() {
        let g = circle3();
        let h = g.subdivide_edge(&"e1".into(), &"m".into(), &ratio(1, 2)).unwrap();
        assert_eq!(h.edges().len(), 4);
        let mut vm: BTreeMap<VertexId, VertexId> =
            g.vertices().iter().map(|v| (v.clone(), v.clone())).collect();
        vm.insert("m".into(), "a".into());
        let mut ea = BTreeMap::new();
        ea.insert("e1.0".into(), EdgeAction::Collapse("a".into()));
        ea.insert(
            "e1.1".into(),
            EdgeAction::Map {
                target: "e1".into(),
                scale: rat(2),
                shift: rat(-1),
            },
        );
        for e in ["e2", "e3"] {
            ea.insert(
                e.into(),
                EdgeAction::Map {
                    target: e.into(),
                    scale: rat(1),
                    shift: rat(0),
                },
            );
        }
        let m = GraphMorphism::new(h.clone(), g.clone(), vm.clone(), ea.clone()).unwrap();
        assert_eq!(m.collapsed().len(), 1);
        vm.insert("m".into(), "b".into());
        assert_eq!(
            GraphMorphism::new(h, g, vm, ea),
            Err(MorphismError::BadCollapse("e1.0".into()))
        );
    }

    #[test]
    fn walk_witnesses() {
        let g = circle3();
        let w = Walk {
            darts: ["e1", "e2", "e3"]
                .iter()
                .map(|e| Dart {
                    edge: (*e).into(),
                    forward: true,
                })
                .collect(),
            compact: true,
        };
        let vs: Vec<String> = w.witnesses(&g).unwrap().into_iter().map(|v| v.0).collect();
        assert_eq!(vs, ["b", "c", "a"]);
        assert!(w.is_simple(&g));
    }
}

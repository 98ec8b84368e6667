//! Ribbon graphs: a cyclic order on the half-edges at every vertex.
//!
//! Half-edges at `v` are named by their edge, so the order at `v` is a
//! `CyclicOrder<EdgeId>`. Boundary walks are traced on darts: a dart arriving
//! at `v` along `e` is followed by the dart leaving `v` along `succ_v(e)`.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::cyclic::{CyclicError, CyclicOrder};
use crate::graph::{
    Dart, Diagnostics, EdgeAction, EdgeId, End, Graph, GraphError, GraphMorphism, MorphismError,
    VertexId, Walk,
};
use crate::linalg::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RibbonError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Diagnostics(#[from] Diagnostics),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Cyclic(#[from] CyclicError),
    #[error("vertex {0} has degree {1}; ribbon vertices need degree at least 2")]
    LowDegree(VertexId, usize),
    #[error("cyclic order at {0} does not list exactly the half-edges at {0}")]
    OrderMismatch(VertexId),
    #[error("genus needs a compact graph; edge {0} is noncompact")]
    NotCompact(EdgeId),
    #[error("genus needs a connected graph")]
    Disconnected,
    #[error("not a tree")]
    NotTree,
    #[error("vertex {0} is missing from the zero section")]
    MissingFromZero(VertexId),
    #[error("zero section meets vertex {0} in {1} half-edges; it must be bivalent")]
    NotBivalent(VertexId, usize),
    #[error("vertex {0} has degree {1}; chordal vertices have degree at most 4")]
    TooManyEdges(VertexId, usize),
    #[error("vertex {0} has two half-edges on one side of the zero section ({1}, {2})")]
    Crowded(VertexId, EdgeId, EdgeId),
    #[error("preimage of the star of {0} is not a ribbon tree")]
    PreimageNotTree(VertexId),
    #[error("leaves over {0} do not match its half-edges bijectively")]
    LeafBijection(VertexId),
    #[error("leaf order over {0} breaks at the minimal pair ({1}, {2})")]
    LeafOrder(VertexId, EdgeId, EdgeId),
    #[error("partial contractions do not compose")]
    Interface,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RibbonGraph {
    graph: Graph,
    orders: BTreeMap<VertexId, CyclicOrder<EdgeId>>,
}

impl RibbonGraph {
    pub fn new(
        graph: Graph,
        orders: BTreeMap<VertexId, CyclicOrder<EdgeId>>,
    ) -> Result<Self, RibbonError> {
        for v in graph.vertices() {
            let deg = graph.degree(v);
            if deg < 2 {
                return Err(RibbonError::LowDegree(v.clone(), deg));
            }
            let here: BTreeSet<EdgeId> = graph.incident_edges(v).cloned().collect();
            match orders.get(v) {
                Some(o) if o.elements() == here => {}
                _ => return Err(RibbonError::OrderMismatch(v.clone())),
            }
        }
        if orders.len() != graph.vertices().len() {
            let extra = orders
                .keys()
                .find(|v| !graph.has_vertex(v))
                .cloned()
                .unwrap_or_else(|| VertexId::from("?"));
            return Err(RibbonError::OrderMismatch(extra));
        }
        Ok(RibbonGraph { graph, orders })
    }

    /// Build from a graph and, per vertex, its edges listed in cyclic order.
    pub fn from_lists<'a>(
        graph: Graph,
        lists: impl IntoIterator<Item = (&'a str, Vec<&'a str>)>,
    ) -> Result<Self, RibbonError> {
        let mut orders = BTreeMap::new();
        for (v, es) in lists {
            let o = CyclicOrder::from_list(es.into_iter().map(EdgeId::from).collect())?;
            orders.insert(VertexId::from(v), o);
        }
        Self::new(graph, orders)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn orders(&self) -> &BTreeMap<VertexId, CyclicOrder<EdgeId>> {
        &self.orders
    }

    pub fn order(&self, v: &VertexId) -> Result<&CyclicOrder<EdgeId>, RibbonError> {
        self.orders
            .get(v)
            .ok_or_else(|| GraphError::UnknownVertex(v.clone()).into())
    }

    pub fn all_darts(&self) -> Vec<Dart> {
        self.graph
            .edges()
            .keys()
            .flat_map(|e| {
                [true, false].map(|forward| Dart {
                    edge: e.clone(),
                    forward,
                })
            })
            .collect()
    }

    /// The dart following `d` on its boundary walk, if `d` ends at a vertex.
    pub fn next_dart(&self, d: &Dart) -> Option<Dart> {
        let (_, head) = self.graph.dart_ends(d).ok()?;
        let v = head.vertex()?;
        let f = self.orders[v].succ(&d.edge).ok()?.clone();
        let fe = &self.graph.edges()[&f];
        let forward = fe.slot_of(v) == Some(0);
        Some(Dart { edge: f, forward })
    }

    /// Every boundary walk, compact ones rotated to their least dart.
    /// An edge with two free ends yields two one-dart walks.
    pub fn boundary_components(&self) -> Vec<Walk> {
        let mut used = BTreeSet::new();
        let mut walks = Vec::new();
        for d in self.all_darts() {
            let (tail, _) = self.graph.dart_ends(&d).expect("own dart");
            if !tail.is_free() {
                continue;
            }
            let mut darts = vec![d.clone()];
            used.insert(d.clone());
            let mut cur = d;
            while let Some(n) = self.next_dart(&cur) {
                used.insert(n.clone());
                darts.push(n.clone());
                cur = n;
            }
            walks.push(Walk {
                darts,
                compact: false,
            });
        }
        for d in self.all_darts() {
            if used.contains(&d) {
                continue;
            }
            let mut darts = Vec::new();
            let mut cur = d;
            while used.insert(cur.clone()) {
                darts.push(cur.clone());
                cur = self.next_dart(&cur).expect("compact walks close up");
            }
            walks.push(Walk {
                darts,
                compact: true,
            }.canonical());
        }
        walks.sort();
        walks
    }

    pub fn genus(&self) -> Result<usize, RibbonError> {
        if let Some((e, _)) = self.graph.edges().iter().find(|(_, e)| !e.is_compact()) {
            return Err(RibbonError::NotCompact(e.clone()));
        }
        if !self.graph.is_connected() {
            return Err(RibbonError::Disconnected);
        }
        let v = self.graph.vertices().len() as i64;
        let e = self.graph.edges().len() as i64;
        let b = self.boundary_components().len() as i64;
        let twice = 2 - v + e - b;
        debug_assert!(twice >= 0 && twice % 2 == 0);
        Ok((twice / 2) as usize)
    }

    /// Cyclic order on the noncompact edges of a ribbon tree: `succ(e) = f`
    /// when a boundary walk enters along `e` and leaves along `f`.
    pub fn leaf_cyclic_order(&self) -> Result<CyclicOrder<EdgeId>, RibbonError> {
        if !self.graph.is_tree() {
            return Err(RibbonError::NotTree);
        }
        let mut succ = BTreeMap::new();
        for w in self.boundary_components() {
            if w.compact {
                return Err(RibbonError::NotTree);
            }
            let first = w.darts.first().expect("nonempty").edge.clone();
            let last = w.darts.last().expect("nonempty").edge.clone();
            succ.insert(first, last);
        }
        let start = succ.keys().next().cloned().ok_or(RibbonError::NotTree)?;
        let mut list = vec![start.clone()];
        let mut cur = succ[&start].clone();
        while cur != start {
            list.push(cur.clone());
            cur = succ.get(&cur).cloned().ok_or(RibbonError::NotTree)?;
            if list.len() > succ.len() {
                return Err(RibbonError::NotTree);
            }
        }
        if list.len() != succ.len() {
            return Err(RibbonError::NotTree);
        }
        Ok(CyclicOrder::from_list(list)?)
    }

    /// Open subgraph with the inherited orders.
    pub fn open_subgraph(
        &self,
        vertices: &BTreeSet<VertexId>,
        edges: &BTreeSet<EdgeId>,
    ) -> Result<RibbonGraph, RibbonError> {
        let g = self.graph.open_subgraph(vertices, edges)?;
        let orders = vertices
            .iter()
            .map(|v| (v.clone(), self.orders[v].clone()))
            .collect();
        RibbonGraph::new(g, orders)
    }

    pub fn star(&self, v: &VertexId) -> Result<RibbonGraph, RibbonError> {
        let g = self.graph.star(v)?;
        RibbonGraph::new(g, [(v.clone(), self.orders[v].clone())].into_iter().collect())
    }

    /// Insert a bivalent vertex inside `e`; the orders at the old ends see
    /// `e.0` or `e.1` in place of `e`.
    pub fn subdivide_edge(
        &self,
        e: &EdgeId,
        mid: &VertexId,
        at: &Rational,
    ) -> Result<RibbonGraph, RibbonError> {
        let old = self.graph.edge(e)?.clone();
        let g = self.graph.subdivide_edge(e, mid, at)?;
        let lower = EdgeId(format!("{e}.0"));
        let upper = EdgeId(format!("{e}.1"));
        let mut orders = self.orders.clone();
        for (slot, piece) in [(0, &lower), (1, &upper)] {
            if let End::Vertex(v) = &old.ends[slot] {
                let o = orders[v].map(|x| if x == e { piece.clone() } else { x.clone() })?;
                orders.insert(v.clone(), o);
            }
        }
        orders.insert(mid.clone(), CyclicOrder::from_list(vec![lower, upper])?);
        RibbonGraph::new(g, orders)
    }

    pub fn disjoint_union(&self, other: &RibbonGraph) -> Result<RibbonGraph, RibbonError> {
        let g = self.graph.disjoint_union(&other.graph)?;
        let mut orders = self.orders.clone();
        orders.extend(other.orders.iter().map(|(k, v)| (k.clone(), v.clone())));
        RibbonGraph::new(g, orders)
    }
}

/// A combinatorial isomorphism of ribbon graphs; coordinates are ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RibbonIso {
    pub vertices: BTreeMap<VertexId, VertexId>,
    pub edges: BTreeMap<EdgeId, EdgeId>,
}

impl RibbonGraph {
    /// Every isomorphism onto `other` preserving incidence and cyclic orders.
    pub fn isomorphisms_to(&self, other: &RibbonGraph) -> Vec<RibbonIso> {
        let (g, h) = (self.graph(), other.graph());
        if g.vertices().len() != h.vertices().len() || g.edges().len() != h.edges().len() {
            return Vec::new();
        }
        let src: Vec<VertexId> = g.vertices().iter().cloned().collect();
        let dst: Vec<VertexId> = h.vertices().iter().cloned().collect();
        let mut out = Vec::new();
        for perm in permutations(dst.len()) {
            let vm: BTreeMap<VertexId, VertexId> =
                src.iter().cloned().zip(perm.iter().map(|&i| dst[i].clone())).collect();
            if src.iter().any(|v| g.degree(v) != h.degree(&vm[v])) {
                continue;
            }
            let edges: Vec<&EdgeId> = g.edges().keys().collect();
            let mut em = BTreeMap::new();
            let mut used = BTreeSet::new();
            self.extend_edge_maps(other, &vm, &edges, &mut em, &mut used, &mut out);
        }
        out
    }

    fn extend_edge_maps(
        &self,
        other: &RibbonGraph,
        vm: &BTreeMap<VertexId, VertexId>,
        edges: &[&EdgeId],
        em: &mut BTreeMap<EdgeId, EdgeId>,
        used: &mut BTreeSet<EdgeId>,
        out: &mut Vec<RibbonIso>,
    ) {
        let Some((e, rest)) = edges.split_first() else {
            let orders_ok = self.orders.iter().all(|(v, o)| {
                o.map(|x| em[x].clone()).ok().as_ref() == other.orders.get(&vm[v])
            });
            if orders_ok {
                out.push(RibbonIso {
                    vertices: vm.clone(),
                    edges: em.clone(),
                });
            }
            return;
        };
        let image_ends = |edge: &crate::graph::Edge| {
            let mut ends: Vec<Option<VertexId>> = edge.ends.iter().map(|x| x.vertex().cloned()).collect();
            ends.sort();
            ends
        };
        let want = {
            let mut ends: Vec<Option<VertexId>> = self.graph.edges()[*e]
                .ends
                .iter()
                .map(|x| x.vertex().map(|v| vm[v].clone()))
                .collect();
            ends.sort();
            ends
        };
        for (f, fe) in other.graph.edges() {
            if used.contains(f) || image_ends(fe) != want {
                continue;
            }
            used.insert(f.clone());
            em.insert((*e).clone(), f.clone());
            self.extend_edge_maps(other, vm, rest, em, used, out);
            em.remove(*e);
            used.remove(f);
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Direction labels of half-edges at a chordal vertex, relative to an
/// orientation of the zero section: `E` leaves along it, `W` arrives along
/// it, `N` and `S` are the chords on the left and right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Compass {
    E,
    N,
    W,
    S,
}

impl Compass {
    pub const ALL: [Compass; 4] = [Compass::E, Compass::N, Compass::W, Compass::S];

    /// Position in the cycle `E N W S`.
    pub fn index(self) -> usize {
        self as usize
    }
}

/// For each zero-section edge, whether the chosen direction runs from `lo`
/// to `hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Orientation(pub BTreeMap<EdgeId, bool>);

impl Orientation {
    pub fn reversed(&self) -> Orientation {
        Orientation(self.0.iter().map(|(e, f)| (e.clone(), !f)).collect())
    }
}

/// A connected component of the zero section.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZComponent {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
    /// No free ends: the component is a circle.
    pub circle: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChordalStructure {
    ribbon: RibbonGraph,
    zero: BTreeSet<EdgeId>,
}

impl ChordalStructure {
    pub fn new(ribbon: RibbonGraph, zero: BTreeSet<EdgeId>) -> Result<Self, RibbonError> {
        let g = ribbon.graph();
        for e in &zero {
            g.edge(e)?;
        }
        g.closed_subgraph(g.vertices(), &zero)?;
        for v in g.vertices() {
            let deg = g.degree(v);
            let zs: Vec<EdgeId> = g.incident_edges(v).filter(|e| zero.contains(*e)).cloned().collect();
            if zs.is_empty() {
                return Err(RibbonError::MissingFromZero(v.clone()));
            }
            if zs.len() != 2 {
                return Err(RibbonError::NotBivalent(v.clone(), zs.len()));
            }
            if deg > 4 {
                return Err(RibbonError::TooManyEdges(v.clone(), deg));
            }
            let order = ribbon.order(v)?;
            for (a, b) in [(&zs[0], &zs[1]), (&zs[1], &zs[0])] {
                let between = between(order, a, b);
                if between.len() > 1 {
                    return Err(RibbonError::Crowded(v.clone(), between[0].clone(), between[1].clone()));
                }
            }
        }
        Ok(ChordalStructure { ribbon, zero })
    }

    pub fn ribbon(&self) -> &RibbonGraph {
        &self.ribbon
    }

    pub fn graph(&self) -> &Graph {
        self.ribbon.graph()
    }

    pub fn zero_section(&self) -> &BTreeSet<EdgeId> {
        &self.zero
    }

    pub fn is_zero(&self, e: &EdgeId) -> bool {
        self.zero.contains(e)
    }

    /// Edges off the zero section.
    pub fn chords(&self) -> impl Iterator<Item = (&EdgeId, &crate::graph::Edge)> {
        self.graph().edges().iter().filter(|(e, _)| !self.zero.contains(*e))
    }

    pub fn zero_edges_at(&self, v: &VertexId) -> Vec<EdgeId> {
        self.graph()
            .incident_edges(v)
            .filter(|e| self.zero.contains(*e))
            .cloned()
            .collect()
    }

    pub fn zero_components(&self) -> Vec<ZComponent> {
        let g = self.graph();
        let z = g
            .closed_subgraph(g.vertices(), &self.zero)
            .expect("validated");
        let mut out: Vec<ZComponent> = z
            .components()
            .into_iter()
            .map(|(vertices, edges)| {
                let circle = edges.iter().all(|e| z.edges()[e].is_compact());
                ZComponent {
                    vertices,
                    edges,
                    circle,
                }
            })
            .collect();
        out.sort_by(|a, b| a.vertices.cmp(&b.vertices).then(a.edges.cmp(&b.edges)));
        out
    }

    /// Default orientation: in each component, the least vertex leaves along
    /// its least zero-section half-edge.
    pub fn default_orientation(&self) -> Orientation {
        let mut dirs = BTreeMap::new();
        for comp in self.zero_components() {
            let Some(v0) = comp.vertices.iter().next() else {
                continue;
            };
            let zs = self.zero_edges_at(v0);
            self.propagate(v0, &zs[0], true, &mut dirs);
            self.propagate(v0, &zs[1], false, &mut dirs);
        }
        Orientation(dirs)
    }

    /// Orient `e` leaving (`outward`) or entering `v`, then continue away from `v`.
    fn propagate(&self, v: &VertexId, e: &EdgeId, outward: bool, dirs: &mut BTreeMap<EdgeId, bool>) {
        let mut v = v.clone();
        let mut e = e.clone();
        loop {
            if dirs.contains_key(&e) {
                return;
            }
            let edge = &self.graph().edges()[&e];
            let at_lo = edge.slot_of(&v) == Some(0);
            dirs.insert(e.clone(), at_lo == outward);
            let Some(End::Vertex(w)) = edge.other_end(&v).cloned() else {
                return;
            };
            let next = self
                .zero_edges_at(&w)
                .into_iter()
                .find(|f| *f != e)
                .expect("bivalent");
            v = w;
            e = next;
        }
    }

    /// `(outgoing, incoming)` zero-section edges at `v`.
    pub fn flow_at(&self, v: &VertexId, o: &Orientation) -> (EdgeId, EdgeId) {
        let zs = self.zero_edges_at(v);
        let leaves = |e: &EdgeId| {
            let edge = &self.graph().edges()[e];
            (edge.slot_of(v) == Some(0)) == o.0[e]
        };
        if leaves(&zs[0]) {
            (zs[0].clone(), zs[1].clone())
        } else {
            (zs[1].clone(), zs[0].clone())
        }
    }

    /// Each orientation must have one outgoing and one incoming edge per vertex.
    pub fn check_orientation(&self, o: &Orientation) -> bool {
        self.zero.iter().all(|e| o.0.contains_key(e))
            && self.graph().vertices().iter().all(|v| {
                let zs = self.zero_edges_at(v);
                let out = zs
                    .iter()
                    .filter(|e| (self.graph().edges()[*e].slot_of(v) == Some(0)) == o.0[*e])
                    .count();
                out == 1
            })
    }

    /// Compass label of every half-edge at `v`.
    pub fn compass_at(&self, v: &VertexId, o: &Orientation) -> BTreeMap<EdgeId, Compass> {
        let (out, inc) = self.flow_at(v, o);
        let order = &self.ribbon.orders[v];
        let mut labels = BTreeMap::new();
        labels.insert(out.clone(), Compass::E);
        labels.insert(inc.clone(), Compass::W);
        for e in between(order, &out, &inc) {
            labels.insert(e, Compass::N);
        }
        for e in between(order, &inc, &out) {
            labels.insert(e, Compass::S);
        }
        labels
    }

    pub fn subdivide_zero_edge(
        &self,
        e: &EdgeId,
        mid: &VertexId,
        at: &Rational,
    ) -> Result<ChordalStructure, RibbonError> {
        let ribbon = self.ribbon.subdivide_edge(e, mid, at)?;
        let mut zero = self.zero.clone();
        if zero.remove(e) {
            zero.insert(EdgeId(format!("{e}.0")));
            zero.insert(EdgeId(format!("{e}.1")));
        }
        ChordalStructure::new(ribbon, zero)
    }
}

/// Elements strictly after `a` and before `b` in the cyclic order.
fn between(order: &CyclicOrder<EdgeId>, a: &EdgeId, b: &EdgeId) -> Vec<EdgeId> {
    let mut out = Vec::new();
    let mut cur = order.succ(a).expect("in order").clone();
    while cur != *b && cur != *a {
        out.push(cur.clone());
        cur = order.succ(&cur).expect("in order").clone();
    }
    out
}

/// A morphism of underlying graphs checked to be a contraction of ribbon graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleContraction {
    source: RibbonGraph,
    target: RibbonGraph,
    map: GraphMorphism,
}

impl SimpleContraction {
    /// Accepts `map` when, over every target vertex `v`, the preimage of
    /// `star(v)` is a ribbon tree whose leaf order matches the order at `v`.
    pub fn new(source: RibbonGraph, target: RibbonGraph, map: GraphMorphism) -> Result<Self, RibbonError> {
        if map.source() != source.graph() || map.target() != target.graph() {
            return Err(RibbonError::Morphism(MorphismError::Interface));
        }
        for v in target.graph().vertices() {
            let (tree, leaf_image) = star_preimage(&source, &map, target.graph(), v)?;
            if !tree.graph().is_tree() {
                return Err(RibbonError::PreimageNotTree(v.clone()));
            }
            let leaves = tree.leaf_cyclic_order().map_err(|_| RibbonError::PreimageNotTree(v.clone()))?;
            let at_v = target.order(v)?;
            let images: BTreeSet<EdgeId> = leaf_image.values().cloned().collect();
            if leaf_image.len() != leaves.len() || images != at_v.elements() || images.len() != leaves.len() {
                return Err(RibbonError::LeafBijection(v.clone()));
            }
            let moved = leaves.map(|e| leaf_image[e].clone())?;
            if moved != *at_v {
                let (a, b) = moved
                    .minimal_pairs()
                    .into_iter()
                    .find(|(a, b)| !at_v.is_minimal_pair(a, b))
                    .expect("different orders differ on a minimal pair");
                return Err(RibbonError::LeafOrder(v.clone(), a, b));
            }
        }
        Ok(SimpleContraction { source, target, map })
    }

    pub fn identity(r: &RibbonGraph) -> Self {
        SimpleContraction {
            source: r.clone(),
            target: r.clone(),
            map: GraphMorphism::identity(r.graph()),
        }
    }

    pub fn source(&self) -> &RibbonGraph {
        &self.source
    }

    pub fn target(&self) -> &RibbonGraph {
        &self.target
    }

    pub fn map(&self) -> &GraphMorphism {
        &self.map
    }

    pub fn then(&self, next: &SimpleContraction) -> Result<SimpleContraction, RibbonError> {
        let map = self.map.then(&next.map)?;
        SimpleContraction::new(self.source.clone(), next.target.clone(), map)
    }
}

/// The open subgraph of `source` lying over `star(v)`, and the image edge
/// at `v` of each of its leaves.
pub fn star_preimage(
    source: &RibbonGraph,
    map: &GraphMorphism,
    target: &Graph,
    v: &VertexId,
) -> Result<(RibbonGraph, BTreeMap<EdgeId, EdgeId>), RibbonError> {
    let at_v: BTreeSet<EdgeId> = target.incident_edges(v).cloned().collect();
    let vertices: BTreeSet<VertexId> = map
        .vertex_map()
        .iter()
        .filter(|(_, w)| *w == v)
        .map(|(u, _)| u.clone())
        .collect();
    let mut edges = BTreeSet::new();
    let mut leaf_image = BTreeMap::new();
    for (e, action) in map.edge_action() {
        match action {
            EdgeAction::Collapse(w) if w == v => {
                edges.insert(e.clone());
            }
            EdgeAction::Map { target: f, .. } if at_v.contains(f) => {
                edges.insert(e.clone());
                leaf_image.insert(e.clone(), f.clone());
            }
            _ => {}
        }
    }
    let tree = source.open_subgraph(&vertices, &edges)?;
    Ok((tree, leaf_image))
}

/// `X ⊇ U → Y`: restriction to an open subgraph followed by a contraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialContraction {
    source: RibbonGraph,
    open: RibbonGraph,
    contraction: SimpleContraction,
}

impl PartialContraction {
    pub fn new(source: RibbonGraph, contraction: SimpleContraction) -> Result<Self, RibbonError> {
        let open = contraction.source().clone();
        let g = open.graph();
        let recomputed = source.open_subgraph(g.vertices(), &g.edges().keys().cloned().collect())?;
        if recomputed != open {
            return Err(RibbonError::Interface);
        }
        Ok(PartialContraction {
            source,
            open,
            contraction,
        })
    }

    /// Pure restriction to an open subgraph.
    pub fn restriction(
        source: &RibbonGraph,
        vertices: &BTreeSet<VertexId>,
        edges: &BTreeSet<EdgeId>,
    ) -> Result<Self, RibbonError> {
        let open = source.open_subgraph(vertices, edges)?;
        Self::new(source.clone(), SimpleContraction::identity(&open))
    }

    pub fn source(&self) -> &RibbonGraph {
        &self.source
    }

    pub fn open(&self) -> &RibbonGraph {
        &self.open
    }

    pub fn target(&self) -> &RibbonGraph {
        self.contraction.target()
    }

    pub fn contraction(&self) -> &SimpleContraction {
        &self.contraction
    }

    /// `self` then `next`: the middle restriction is pulled back to its
    /// preimage `W ⊆ U`.
    pub fn then(&self, next: &PartialContraction) -> Result<PartialContraction, RibbonError> {
        if self.target() != next.source() {
            return Err(RibbonError::Interface);
        }
        let p = self.contraction.map();
        let v_graph = next.open.graph();
        let w_vertices: BTreeSet<VertexId> = p
            .vertex_map()
            .iter()
            .filter(|(_, y)| v_graph.has_vertex(y))
            .map(|(u, _)| u.clone())
            .collect();
        let w_edges: BTreeSet<EdgeId> = p
            .edge_action()
            .iter()
            .filter(|(_, a)| match a {
                EdgeAction::Collapse(y) => v_graph.has_vertex(y),
                EdgeAction::Map { target, .. } => v_graph.edges().contains_key(target),
            })
            .map(|(e, _)| e.clone())
            .collect();
        let w = self.source.open_subgraph(&w_vertices, &w_edges)?;
        let restricted = GraphMorphism::new(
            w.graph().clone(),
            v_graph.clone(),
            p.vertex_map()
                .iter()
                .filter(|(u, _)| w_vertices.contains(*u))
                .map(|(u, y)| (u.clone(), y.clone()))
                .collect(),
            p.edge_action()
                .iter()
                .filter(|(e, _)| w_edges.contains(*e))
                .map(|(e, a)| (e.clone(), a.clone()))
                .collect(),
        )?;
        let first = SimpleContraction::new(w, next.open.clone(), restricted)?;
        let composite = first.then(&next.contraction)?;
        PartialContraction::new(self.source.clone(), composite)
    }
}

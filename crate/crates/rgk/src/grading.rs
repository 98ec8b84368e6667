//! ℤ/2- and ℤ-gradings of ribbon graphs.
//!
//! Every torsor is a labelled copy of ℤ or ℤ/2, so torsor maps are offsets:
//! - the ℤ/2-torsor at a vertex maps to the one on an incident edge by adding
//!   the half-edge's `flip`;
//! - `k ∈ τ̃_e` lies over `k + label_e ∈ τ_e`;
//! - `θ_ε` sends level `k` of the unwinding fibre over `ε` to `k + θ_ε ∈ τ̃_e`.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::cyclic::{CyclicOrder, Parity, Unwinding, UnwindingError};
use crate::graph::{EdgeId, End, GraphError, HalfEdge, VertexId, Walk};
use crate::ribbon::{ChordalStructure, Compass, Orientation, RibbonError, RibbonGraph, SimpleContraction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradingError {
    #[error(transparent)]
    Ribbon(#[from] RibbonError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Unwinding(#[from] UnwindingError),
    #[error("grading data missing for {0}")]
    Missing(String),
    #[error("unwinding at {0} is not over the half-edges at {0}")]
    BaseMismatch(VertexId),
    #[error("parities disagree at half-edge {0}")]
    ParityMismatch(HalfEdge),
    #[error("walk is not a noncompact boundary component")]
    NotBoundaryWalk,
    #[error("closed subgraph has a vertex {0} of degree below 2")]
    LowDegree(VertexId),
    #[error("graded contraction fails over {vertex} at leaf {leaf}")]
    Contraction { vertex: VertexId, leaf: EdgeId },
    #[error("orientation does not orient the zero section consistently")]
    BadOrientation,
}

/// A ℤ/2-torsor on the graph: one per vertex and edge, glued along half-edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Z2Grading {
    flips: BTreeMap<HalfEdge, Parity>,
}

impl Z2Grading {
    pub fn trivial(r: &RibbonGraph) -> Self {
        Z2Grading {
            flips: r.graph().half_edges().into_iter().map(|h| (h, Parity::EVEN)).collect(),
        }
    }

    pub fn new(flips: BTreeMap<HalfEdge, Parity>) -> Self {
        Z2Grading { flips }
    }

    pub fn flip(&self, h: &HalfEdge) -> Parity {
        self.flips.get(h).copied().unwrap_or_default()
    }

    pub fn flips(&self) -> &BTreeMap<HalfEdge, Parity> {
        &self.flips
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZGrading {
    ribbon: RibbonGraph,
    tau: Z2Grading,
    labels: BTreeMap<EdgeId, Parity>,
    unwindings: BTreeMap<VertexId, Unwinding<EdgeId>>,
    theta: BTreeMap<HalfEdge, i64>,
}

impl ZGrading {
    pub fn new(
        ribbon: RibbonGraph,
        tau: Z2Grading,
        labels: BTreeMap<EdgeId, Parity>,
        unwindings: BTreeMap<VertexId, Unwinding<EdgeId>>,
        theta: BTreeMap<HalfEdge, i64>,
    ) -> Result<Self, GradingError> {
        let g = ZGrading {
            ribbon,
            tau,
            labels,
            unwindings,
            theta,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), GradingError> {
        let graph = self.ribbon.graph();
        for e in graph.edges().keys() {
            if !self.labels.contains_key(e) {
                return Err(GradingError::Missing(format!("edge {e}")));
            }
        }
        for v in graph.vertices() {
            let u = self
                .unwindings
                .get(v)
                .ok_or_else(|| GradingError::Missing(format!("vertex {v}")))?;
            if u.base() != self.ribbon.order(v)? {
                return Err(GradingError::BaseMismatch(v.clone()));
            }
            for h in graph.half_edges_at(v) {
                let theta = *self
                    .theta
                    .get(&h)
                    .ok_or_else(|| GradingError::Missing(format!("theta {h}")))?;
                let lhs = u.parities()[&h.edge] + self.tau.flip(&h);
                let rhs = Parity::of(theta) + self.labels[&h.edge];
                if lhs != rhs {
                    return Err(GradingError::ParityMismatch(h));
                }
            }
            u.check_group_laws(2)?;
        }
        Ok(())
    }

    pub fn ribbon(&self) -> &RibbonGraph {
        &self.ribbon
    }

    pub fn tau(&self) -> &Z2Grading {
        &self.tau
    }

    pub fn labels(&self) -> &BTreeMap<EdgeId, Parity> {
        &self.labels
    }

    pub fn unwindings(&self) -> &BTreeMap<VertexId, Unwinding<EdgeId>> {
        &self.unwindings
    }

    pub fn unwinding(&self, v: &VertexId) -> &Unwinding<EdgeId> {
        &self.unwindings[v]
    }

    pub fn theta(&self) -> &BTreeMap<HalfEdge, i64> {
        &self.theta
    }

    pub fn theta_at(&self, e: &EdgeId, v: &VertexId) -> i64 {
        self.theta[&HalfEdge::new(e, v)]
    }

    /// Level shift of `τ̃_e → τ̃_f` for one `R` at `v`, where `f = succ_v(e)`.
    pub fn corner_shift(&self, v: &VertexId, e: &EdgeId) -> i64 {
        let u = &self.unwindings[v];
        let f = u.base().succ(e).expect("half-edge at v");
        -self.theta_at(e, v) + u.step(e) + self.theta_at(f, v)
    }

    /// Total level shift along a walk: one `R` at each vertex passed.
    /// For a compact walk this includes the corner closing it up.
    pub fn walk_shift(&self, walk: &Walk) -> Result<i64, GradingError> {
        let corners = walk.witnesses(self.ribbon.graph())?;
        Ok(corners
            .iter()
            .zip(&walk.darts)
            .map(|(v, d)| self.corner_shift(v, &d.edge))
            .sum())
    }

    /// Monodromy `τ̃_{e_1} → τ̃_{e_r}` along a noncompact boundary walk, as
    /// a level offset.
    pub fn boundary_monodromy(&self, walk: &Walk) -> Result<i64, GradingError> {
        if walk.compact || !self.ribbon.boundary_components().contains(walk) {
            return Err(GradingError::NotBoundaryWalk);
        }
        self.walk_shift(walk)
    }

    /// The ℤ/2 class of level `k` of `τ̃_e`, carried into the torsor at `v`.
    fn parity_at_vertex(&self, e: &EdgeId, v: &VertexId, k: i64) -> Parity {
        Parity::of(k) + self.labels[e] + self.tau.flip(&HalfEdge::new(e, v))
    }

    /// Unwinding of the leaves of a graded ribbon tree. `S` is the ℤ-torsor
    /// structure of each `τ̃_e`; `R` is boundary monodromy corrected by `S^-2`
    /// for every internal edge crossed from its `lo` end to its `hi` end.
    /// Parities are read in the ℤ/2-torsor at the least vertex.
    pub fn leaf_unwinding(&self) -> Result<Unwinding<EdgeId>, GradingError> {
        let order = self.ribbon.leaf_cyclic_order()?;
        let graph = self.ribbon.graph();
        let mut steps = BTreeMap::new();
        for w in self.ribbon.boundary_components() {
            let mut shift = self.walk_shift(&w)?;
            for d in &w.darts[1..w.darts.len().saturating_sub(1)] {
                if d.forward {
                    shift -= 2;
                }
            }
            let first = &w.darts[0].edge;
            steps.insert(first.clone(), shift);
        }
        let root = graph.vertices().iter().next().ok_or(RibbonError::NotTree)?.clone();
        let to_root = self.tau_transport(&root)?;
        let mut parity = BTreeMap::new();
        for leaf in order.as_slice() {
            let v = graph.edges()[leaf].vertices().next().expect("leaf at a vertex").clone();
            parity.insert(leaf.clone(), self.parity_at_vertex(leaf, &v, 0) + to_root[&v]);
        }
        Ok(Unwinding::new(order, steps, parity)?)
    }

    /// Offsets identifying the ℤ/2-torsor at each vertex with the one at
    /// `root`, along paths in a tree.
    fn tau_transport(&self, root: &VertexId) -> Result<BTreeMap<VertexId, Parity>, GradingError> {
        let graph = self.ribbon.graph();
        let mut out = BTreeMap::new();
        out.insert(root.clone(), Parity::EVEN);
        let mut stack = vec![root.clone()];
        while let Some(v) = stack.pop() {
            for e in graph.incident_edges(&v) {
                if let Some(End::Vertex(w)) = graph.edges()[e].other_end(&v) {
                    if out.contains_key(w) {
                        continue;
                    }
                    let step = self.tau.flip(&HalfEdge::new(e, w)) + self.tau.flip(&HalfEdge::new(e, &v));
                    out.insert(w.clone(), out[&v] + step);
                    stack.push(w.clone());
                }
            }
        }
        Ok(out)
    }
}

/// The compass unwinding over `E N W S` with `E` under the identity.
pub fn compass_unwinding() -> Unwinding<Compass> {
    let base = CyclicOrder::from_list(Compass::ALL.to_vec()).expect("four labels");
    Unwinding::standard(base, &Compass::E).expect("standard unwinding")
}

/// Grading of a chordal ribbon graph from an orientation of its zero section:
/// trivial torsors, the compass unwinding induced at every vertex, and
/// `θ = 0`, so level `n` over label `X` is `R^{idx X} S^n`.
pub fn chordal_grading(c: &ChordalStructure, o: &Orientation) -> Result<ZGrading, GradingError> {
    if !c.check_orientation(o) {
        return Err(GradingError::BadOrientation);
    }
    let ribbon = c.ribbon().clone();
    let graph = ribbon.graph();
    let compass = compass_unwinding();
    let mut unwindings = BTreeMap::new();
    for v in graph.vertices() {
        let labels = c.compass_at(v, o);
        let present: BTreeSet<Compass> = labels.values().copied().collect();
        let back: BTreeMap<Compass, EdgeId> = labels.iter().map(|(e, l)| (*l, e.clone())).collect();
        let induced = compass.induced(&present)?;
        unwindings.insert(v.clone(), induced.relabel(|l| back[l].clone())?);
    }
    let labels = graph.edges().keys().map(|e| (e.clone(), Parity::EVEN)).collect();
    let theta = graph.half_edges().into_iter().map(|h| (h, 0)).collect();
    ZGrading::new(ribbon.clone(), Z2Grading::trivial(&ribbon), labels, unwindings, theta)
}

impl ZGrading {
    /// Restriction to an open subgraph.
    pub fn restrict_open(
        &self,
        vertices: &BTreeSet<VertexId>,
        edges: &BTreeSet<EdgeId>,
    ) -> Result<ZGrading, GradingError> {
        let ribbon = self.ribbon.open_subgraph(vertices, edges)?;
        self.restrict_to(ribbon, |_, u| Ok(u.clone()))
    }

    /// Restriction to a closed subgraph; unwindings are induced on the
    /// surviving half-edges.
    pub fn restrict_closed(
        &self,
        vertices: &BTreeSet<VertexId>,
        edges: &BTreeSet<EdgeId>,
    ) -> Result<ZGrading, GradingError> {
        let graph = self.ribbon.graph().closed_subgraph(vertices, edges)?;
        if let Some(v) = graph.vertices().iter().find(|v| graph.degree(v) < 2) {
            return Err(GradingError::LowDegree(v.clone()));
        }
        let orders = vertices
            .iter()
            .map(|v| {
                let here: BTreeSet<EdgeId> = graph.incident_edges(v).cloned().collect();
                Ok((v.clone(), self.ribbon.order(v)?.induced(&here).map_err(RibbonError::from)?))
            })
            .collect::<Result<_, GradingError>>()?;
        let ribbon = RibbonGraph::new(graph, orders)?;
        let r2 = ribbon.clone();
        self.restrict_to(ribbon, move |v, u| {
            let here: BTreeSet<EdgeId> = r2.graph().incident_edges(v).cloned().collect();
            Ok(u.induced(&here)?)
        })
    }

    fn restrict_to(
        &self,
        ribbon: RibbonGraph,
        unwind: impl Fn(&VertexId, &Unwinding<EdgeId>) -> Result<Unwinding<EdgeId>, GradingError>,
    ) -> Result<ZGrading, GradingError> {
        let graph = ribbon.graph();
        let halves: BTreeSet<HalfEdge> = graph.half_edges().into_iter().collect();
        let tau = Z2Grading::new(
            self.tau
                .flips
                .iter()
                .filter(|(h, _)| halves.contains(*h))
                .map(|(h, p)| (h.clone(), *p))
                .collect(),
        );
        let labels = graph.edges().keys().map(|e| (e.clone(), self.labels[e])).collect();
        let unwindings = graph
            .vertices()
            .iter()
            .map(|v| Ok((v.clone(), unwind(v, &self.unwindings[v])?)))
            .collect::<Result<_, GradingError>>()?;
        let theta = halves.iter().map(|h| (h.clone(), self.theta[h])).collect();
        ZGrading::new(ribbon, tau, labels, unwindings, theta)
    }
}

/// Torsor data for a graded contraction: `τ_X,u → τ_Y,f(u)` adds
/// `vertex_flips[u]`; `τ̃_e → τ̃_{f(e)}` adds `edge_shifts[e]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ContractionData {
    pub vertex_flips: BTreeMap<VertexId, Parity>,
    pub edge_shifts: BTreeMap<EdgeId, i64>,
}

/// A simple contraction of graded ribbon graphs, checked over every target
/// vertex against the leaf unwindings on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedContraction {
    pub contraction: SimpleContraction,
    pub data: ContractionData,
}

fn image_edge(c: &SimpleContraction, e: &EdgeId) -> Option<EdgeId> {
    match c.map().edge_action().get(e)? {
        crate::graph::EdgeAction::Map { target, .. } => Some(target.clone()),
        crate::graph::EdgeAction::Collapse(_) => None,
    }
}

/// Preimage tree of `star(v)` with the restricted grading, and `star(v)` graded.
fn graded_pieces(
    c: &SimpleContraction,
    x: &ZGrading,
    y: &ZGrading,
    v: &VertexId,
) -> Result<(ZGrading, ZGrading), GradingError> {
    let (tree, _) = crate::ribbon::star_preimage(c.source(), c.map(), c.target().graph(), v)?;
    let tg = tree.graph();
    let tree_grading = x.restrict_open(tg.vertices(), &tg.edges().keys().cloned().collect())?;
    let star = y.ribbon.star(v)?;
    let sg = star.graph();
    let star_grading = y.restrict_open(sg.vertices(), &sg.edges().keys().cloned().collect())?;
    Ok((tree_grading, star_grading))
}

pub fn graded_simple_contraction(
    contraction: SimpleContraction,
    x: &ZGrading,
    y: &ZGrading,
    data: ContractionData,
) -> Result<GradedContraction, GradingError> {
    if contraction.source() != x.ribbon() || contraction.target() != y.ribbon() {
        return Err(GradingError::Ribbon(RibbonError::Interface));
    }
    for v in y.ribbon.graph().vertices() {
        let (tree, star) = graded_pieces(&contraction, x, y, v)?;
        let lt = tree.leaf_unwinding()?;
        let ls = star.leaf_unwinding()?;
        let root = tree.ribbon.graph().vertices().iter().next().expect("nonempty").clone();
        let t_root = *data
            .vertex_flips
            .get(&root)
            .ok_or_else(|| GradingError::Missing(format!("flip at {root}")))?;
        for u in tree.ribbon.graph().vertices() {
            let collapsed = tree.ribbon.graph().incident_edges(u).filter(|e| image_edge(&contraction, e).is_none());
            for e in collapsed {
                let edge = &tree.ribbon.graph().edges()[e];
                let ends: Vec<&VertexId> = edge.vertices().collect();
                let side = |w: &VertexId| data.vertex_flips.get(w).copied().unwrap_or_default() + x.tau.flip(&HalfEdge::new(e, w));
                if side(ends[0]) != side(ends[1]) {
                    return Err(GradingError::Contraction {
                        vertex: v.clone(),
                        leaf: e.clone(),
                    });
                }
            }
        }
        for leaf in lt.base().as_slice() {
            let fail = || GradingError::Contraction {
                vertex: v.clone(),
                leaf: leaf.clone(),
            };
            let f = image_edge(&contraction, leaf).ok_or_else(fail)?;
            let next = lt.base().succ(leaf).expect("leaf");
            let fnext = image_edge(&contraction, next).ok_or_else(fail)?;
            let s = |e: &EdgeId| data.edge_shifts.get(e).copied().ok_or_else(fail);
            if ls.base().succ(&f).ok() != Some(&fnext) {
                return Err(fail());
            }
            if lt.step(leaf) + s(next)? != s(leaf)? + ls.step(&f) {
                return Err(fail());
            }
            if lt.parities()[leaf] + t_root != ls.parities()[&f] + Parity::of(s(leaf)?) {
                return Err(fail());
            }
        }
    }
    Ok(GradedContraction { contraction, data })
}

/// Search for torsor data making `contraction` graded: per target vertex
/// the root flip and the first leaf shift's parity are free; everything else
/// is forced.
pub fn solve_contraction_data(
    contraction: &SimpleContraction,
    x: &ZGrading,
    y: &ZGrading,
) -> Option<ContractionData> {
    let mut data = ContractionData::default();
    for v in y.ribbon.graph().vertices() {
        let (tree, star) = graded_pieces(contraction, x, y, v).ok()?;
        let lt = tree.leaf_unwinding().ok()?;
        let ls = star.leaf_unwinding().ok()?;
        let tg = tree.ribbon.graph();
        let root = tg.vertices().iter().next()?.clone();
        let to_root = tree.tau_transport(&root).ok()?;
        let leaves = lt.base().as_slice();
        let mut found = None;
        'search: for t_root in [Parity::EVEN, Parity::ODD] {
            for s0 in [0, 1] {
                let mut shifts = BTreeMap::new();
                let mut s = s0;
                for leaf in leaves {
                    shifts.insert(leaf.clone(), s);
                    let f = image_edge(contraction, leaf)?;
                    s = s + ls.step(&f) - lt.step(leaf);
                }
                let ok = leaves.iter().all(|leaf| {
                    let f = image_edge(contraction, leaf).expect("checked");
                    lt.parities()[leaf] + t_root == ls.parities()[&f] + Parity::of(shifts[leaf])
                });
                if ok {
                    found = Some((t_root, shifts));
                    break 'search;
                }
            }
        }
        let (t_root, shifts) = found?;
        for u in tg.vertices() {
            data.vertex_flips.insert(u.clone(), t_root + to_root[u]);
        }
        data.edge_shifts.extend(shifts);
    }
    Some(data)
}

/// Isomorphism of ℤ-graded ribbon graphs: a ribbon isomorphism together
/// with torsor offsets on vertices and edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingIso {
    pub ribbon: crate::ribbon::RibbonIso,
    pub edge_shifts: BTreeMap<EdgeId, i64>,
    pub vertex_flips: BTreeMap<VertexId, Parity>,
}

/// First isomorphism `a → b` found, searching over ribbon isomorphisms and
/// the free level offset of each connected component.
pub fn find_isomorphism(a: &ZGrading, b: &ZGrading) -> Option<GradingIso> {
    a.ribbon
        .isomorphisms_to(&b.ribbon)
        .into_iter()
        .find_map(|iso| isomorphism_over(a, b, &iso))
}

/// Torsor data completing a given ribbon isomorphism, if any.
pub fn isomorphism_over(a: &ZGrading, b: &ZGrading, iso: &crate::ribbon::RibbonIso) -> Option<GradingIso> {
    let graph = a.ribbon.graph();
    let comps = graph.components();
    if comps.len() > 12 {
        return None;
    }
    let image_half = |h: &HalfEdge| HalfEdge::new(&iso.edges[&h.edge], &iso.vertices[&h.vertex]);
    for mask in 0u32..(1 << comps.len()) {
        let mut shifts: BTreeMap<EdgeId, i64> = BTreeMap::new();
        let mut consistent = true;
        for (ci, (verts, edges)) in comps.iter().enumerate() {
            let Some(seed) = edges.iter().next() else { continue };
            shifts.insert(seed.clone(), i64::from((mask >> ci) & 1));
            let mut pending: Vec<VertexId> = verts.iter().cloned().collect();
            while consistent {
                let Some(pos) = pending
                    .iter()
                    .position(|v| graph.incident_edges(v).any(|e| shifts.contains_key(e)))
                else {
                    break;
                };
                let v = pending.remove(pos);
                let u = &a.unwindings[&v];
                let start = graph.incident_edges(&v).find(|e| shifts.contains_key(*e)).expect("found").clone();
                let mut e = start.clone();
                loop {
                    let f = u.base().succ(&e).expect("at v").clone();
                    let he = HalfEdge::new(&e, &v);
                    let hf = HalfEdge::new(&f, &v);
                    let bv = &b.unwindings[&iso.vertices[&v]];
                    let s_f = shifts[&e] + bv.step(&iso.edges[&e]) - u.step(&e) - a.theta[&hf]
                        + b.theta[&image_half(&hf)]
                        + a.theta[&he]
                        - b.theta[&image_half(&he)];
                    match shifts.get(&f) {
                        Some(&old) if old != s_f => {
                            consistent = false;
                            break;
                        }
                        _ => {
                            shifts.insert(f.clone(), s_f);
                        }
                    }
                    e = f;
                    if e == start {
                        break;
                    }
                }
            }
        }
        if !consistent {
            continue;
        }
        if let Some(flips) = check_parities(a, b, iso, &shifts) {
            return Some(GradingIso {
                ribbon: iso.clone(),
                edge_shifts: shifts,
                vertex_flips: flips,
            });
        }
    }
    None
}

fn check_parities(
    a: &ZGrading,
    b: &ZGrading,
    iso: &crate::ribbon::RibbonIso,
    shifts: &BTreeMap<EdgeId, i64>,
) -> Option<BTreeMap<VertexId, Parity>> {
    let graph = a.ribbon.graph();
    let mut flips = BTreeMap::new();
    for v in graph.vertices() {
        let bv = &iso.vertices[v];
        let mut t = None;
        for h in graph.half_edges_at(v) {
            let fe = &iso.edges[&h.edge];
            let hb = HalfEdge::new(fe, bv);
            let level = a.theta[&h] + shifts[&h.edge] - b.theta[&hb];
            let here = b.unwindings[bv].parities()[fe] + Parity::of(level) + a.unwindings[v].parities()[&h.edge];
            if *t.get_or_insert(here) != here {
                return None;
            }
            let across = a.tau.flip(&h) + here + b.tau.flip(&hb);
            if a.labels[&h.edge] + across != Parity::of(shifts[&h.edge]) + b.labels[fe] {
                return None;
            }
        }
        flips.insert(v.clone(), t.unwrap_or_default());
    }
    Some(flips)
}

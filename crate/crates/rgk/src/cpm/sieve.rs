//! Sieves of partial contractions and the covering condition.
//!
//! A morphism `U → X` in the opposite of the category of partial
//! contractions is a diagram `X ⊃ U' → U`: an open subgraph `U'` of `X`
//! followed by a simple contraction. Contractions are recorded by the forest
//! of compact edges they collapse, and `U` is the quotient with each tree
//! named after its least vertex. Cyclic orders play no role in membership
//! and are not tracked. Collapses that would turn an edge into a loop are not
//! morphisms, since graphs have no loops.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{EdgeId, End, Graph, GraphError, RawGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SieveError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{0} is not an open subgraph with a collapsible forest")]
    Invalid(String),
}

/// `X ⊃ U' → U`, given by the vertices and edges of `U'` and the collapsed forest.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Morphism {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
    pub forest: BTreeSet<EdgeId>,
}

impl Morphism {
    pub fn identity(x: &Graph) -> Self {
        Morphism { vertices: x.vertices().clone(), edges: x.edges().keys().cloned().collect(), forest: BTreeSet::new() }
    }

    /// The open star of `v`, nothing collapsed.
    pub fn star(x: &Graph, v: &VertexId) -> Self {
        Morphism {
            vertices: [v.clone()].into(),
            edges: x.incident_edges(v).cloned().collect(),
            forest: BTreeSet::new(),
        }
    }

    /// The open neighbourhood of a tree, with the tree collapsed to a point.
    pub fn tree(x: &Graph, vertices: &BTreeSet<VertexId>, edges: &BTreeSet<EdgeId>) -> Self {
        let around = vertices.iter().flat_map(|v| x.incident_edges(v).cloned()).collect();
        Morphism { vertices: vertices.clone(), edges: around, forest: edges.clone() }
    }

    /// Collapse `forest` inside all of `x`.
    pub fn contraction(x: &Graph, forest: BTreeSet<EdgeId>) -> Self {
        Morphism { forest, ..Morphism::identity(x) }
    }

    pub fn check(&self, x: &Graph) -> Result<(), SieveError> {
        let invalid = |why: &str| Err(SieveError::Invalid(why.to_string()));
        for v in &self.vertices {
            if !x.has_vertex(v) {
                return invalid(&format!("vertex {v}"));
            }
            if let Some(e) = x.incident_edges(v).find(|e| !self.edges.contains(*e)) {
                return invalid(&format!("edge {e} at {v}"));
            }
        }
        for e in &self.edges {
            x.edge(e)?;
        }
        for e in &self.forest {
            let edge = x.edge(e)?;
            let inside = edge.ends.iter().all(|end| end.vertex().is_some_and(|v| self.vertices.contains(v)));
            if !self.edges.contains(e) || !inside {
                return invalid(&format!("forest edge {e}"));
            }
        }
        let classes = self.classes(x).ok_or_else(|| SieveError::Invalid("forest has a cycle".into()))?;
        for e in self.edges.iter().filter(|e| !self.forest.contains(*e)) {
            let ends: Vec<&VertexId> = x.edges()[e].ends.iter().filter_map(End::vertex).collect();
            let kept = ends.len() == 2 && ends.iter().all(|v| self.vertices.contains(*v));
            if kept && classes[ends[0]] == classes[ends[1]] {
                return invalid(&format!("edge {e} would become a loop"));
            }
        }
        Ok(())
    }

    /// The tree of each kept vertex, named by its least vertex, or `None` if
    /// the forest has a cycle.
    fn classes(&self, x: &Graph) -> Option<BTreeMap<VertexId, VertexId>> {
        let mut parent: BTreeMap<VertexId, VertexId> = self.vertices.iter().map(|v| (v.clone(), v.clone())).collect();
        fn find(parent: &BTreeMap<VertexId, VertexId>, v: &VertexId) -> VertexId {
            let mut r = v.clone();
            while parent[&r] != r {
                r = parent[&r].clone();
            }
            r
        }
        for e in &self.forest {
            let ends: Vec<&VertexId> = x.edges()[e].ends.iter().filter_map(End::vertex).collect();
            let (a, b) = (find(&parent, ends[0]), find(&parent, ends[1]));
            if a == b {
                return None;
            }
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            parent.insert(hi, lo);
        }
        Some(self.vertices.iter().map(|v| (v.clone(), find(&parent, v))).collect())
    }

    /// The vertex of the quotient that `v` lands on.
    pub fn image(&self, x: &Graph, v: &VertexId) -> Option<VertexId> {
        self.classes(x)?.get(v).cloned()
    }

    /// The collapsed trees, each as its vertex and edge sets.
    pub fn trees(&self, x: &Graph) -> Vec<(BTreeSet<VertexId>, BTreeSet<EdgeId>)> {
        let classes = self.classes(x).expect("valid forest");
        let mut out: BTreeMap<VertexId, (BTreeSet<VertexId>, BTreeSet<EdgeId>)> = BTreeMap::new();
        for (v, r) in &classes {
            out.entry(r.clone()).or_default().0.insert(v.clone());
        }
        for e in &self.forest {
            let v = x.edges()[e].ends[0].vertex().expect("compact");
            out.get_mut(&classes[v]).expect("class").1.insert(e.clone());
        }
        out.into_values().collect()
    }

    /// The graph `U`.
    pub fn source(&self, x: &Graph) -> Result<Graph, SieveError> {
        self.check(x)?;
        let classes = self.classes(x).expect("checked");
        let open = x.open_subgraph(&self.vertices, &self.edges)?;
        let mut raw = RawGraph::new();
        for r in classes.values().collect::<BTreeSet<_>>() {
            raw = raw.vertex(r.as_str());
        }
        for (id, edge) in open.edges() {
            if self.forest.contains(id) {
                continue;
            }
            let mut edge = edge.clone();
            for end in edge.ends.iter_mut() {
                if let End::Vertex(v) = end {
                    *v = classes[v].clone();
                }
            }
            raw = raw.edge(id.as_str(), edge);
        }
        raw.build().map_err(|d| SieveError::Invalid(format!("{d:?}")))
    }

    /// `self ∘ inner` where `inner` maps into `self.source(x)`: pull the open
    /// part of `inner` back to `x` and collapse both forests.
    pub fn compose(&self, x: &Graph, inner: &Morphism) -> Morphism {
        let classes = self.classes(x).expect("valid forest");
        let vertices: BTreeSet<VertexId> =
            classes.iter().filter(|(_, r)| inner.vertices.contains(*r)).map(|(v, _)| v.clone()).collect();
        let mut edges = BTreeSet::new();
        let mut forest = BTreeSet::new();
        for e in &self.edges {
            if self.forest.contains(e) {
                let v = x.edges()[e].ends[0].vertex().expect("compact");
                if inner.vertices.contains(&classes[v]) {
                    edges.insert(e.clone());
                    forest.insert(e.clone());
                }
            } else if inner.edges.contains(e) {
                edges.insert(e.clone());
                if inner.forest.contains(e) {
                    forest.insert(e.clone());
                }
            }
        }
        Morphism { vertices, edges, forest }
    }

    /// Whether `self` factors as `through ∘ k` for some morphism `k`.
    pub fn factors_through(&self, x: &Graph, through: &Morphism) -> bool {
        if !self.vertices.is_subset(&through.vertices) || !self.edges.is_subset(&through.edges) {
            return false;
        }
        let saturated = through.trees(x).iter().all(|(vs, es)| {
            let touched = vs.iter().any(|v| self.vertices.contains(v)) || es.iter().any(|e| self.edges.contains(e));
            !touched || (vs.is_subset(&self.vertices) && es.is_subset(&self.edges))
        });
        saturated && through.forest.intersection(&self.edges).all(|e| self.forest.contains(e))
    }
}

/// A sieve on a fixed graph, given by generators or built from other sieves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sieve {
    /// Every morphism.
    Maximal,
    /// Everything that factors through one of the generators.
    Generated(Vec<Morphism>),
    /// `f^* inner`: `g` belongs when `f ∘ g` belongs to `inner`, a sieve on `base`.
    Pullback { along: Morphism, base: Graph, inner: Box<Sieve> },
}

impl Sieve {
    pub fn empty() -> Self {
        Sieve::Generated(Vec::new())
    }

    /// Generated by morphisms that are checked against `x`.
    pub fn generated(x: &Graph, gens: Vec<Morphism>) -> Result<Self, SieveError> {
        for g in &gens {
            g.check(x)?;
        }
        Ok(Sieve::Generated(gens))
    }

    /// Generated by the star of every vertex.
    pub fn stars(x: &Graph) -> Self {
        Sieve::Generated(x.vertices().iter().map(|v| Morphism::star(x, v)).collect())
    }

    /// Generated by the stars of some vertices.
    pub fn stars_of<'a>(x: &Graph, vs: impl IntoIterator<Item = &'a VertexId>) -> Self {
        Sieve::Generated(vs.into_iter().map(|v| Morphism::star(x, v)).collect())
    }

    /// Membership of a morphism into `x`, the graph the sieve lives on.
    pub fn contains(&self, x: &Graph, h: &Morphism) -> bool {
        match self {
            Sieve::Maximal => true,
            Sieve::Generated(gens) => gens.iter().any(|g| h.factors_through(x, g)),
            Sieve::Pullback { along, base, inner } => inner.contains(base, &along.compose(base, h)),
        }
    }

    pub fn pullback(&self, x: &Graph, along: &Morphism) -> Sieve {
        Sieve::Pullback { along: along.clone(), base: x.clone(), inner: Box::new(self.clone()) }
    }

    /// Every vertex of `x` lies in the open part of some member. Returns the
    /// first vertex that does not.
    ///
    /// A vertex `y` lies in the open part of a member exactly when the
    /// neighbourhood of some tree through `y`, with that tree collapsed, is a
    /// member: restrict the member to the tree collapsed onto `y`'s image.
    pub fn uncovered(&self, x: &Graph) -> Option<VertexId> {
        let trees = subtrees(x);
        x.vertices()
            .iter()
            .find(|y| {
                !trees
                    .iter()
                    .filter(|(vs, _)| vs.contains(*y))
                    .any(|(vs, es)| self.contains(x, &Morphism::tree(x, vs, es)))
            })
            .cloned()
    }

    pub fn is_covering(&self, x: &Graph) -> bool {
        self.uncovered(x).is_none()
    }

    /// All members, by enumeration.
    pub fn members(&self, x: &Graph) -> Vec<Morphism> {
        all_morphisms(x).into_iter().filter(|h| self.contains(x, h)).collect()
    }
}

/// Every tree of compact edges, including single vertices.
pub fn subtrees(x: &Graph) -> Vec<(BTreeSet<VertexId>, BTreeSet<EdgeId>)> {
    let mut seen: BTreeSet<(BTreeSet<VertexId>, BTreeSet<EdgeId>)> =
        x.vertices().iter().map(|v| ([v.clone()].into(), BTreeSet::new())).collect();
    let mut frontier: Vec<_> = seen.iter().cloned().collect();
    while let Some((vs, es)) = frontier.pop() {
        for v in &vs {
            for e in x.incident_edges(v) {
                let Some(End::Vertex(w)) = x.edges()[e].other_end(v) else {
                    continue;
                };
                if vs.contains(w) {
                    continue;
                }
                let mut grown = (vs.clone(), es.clone());
                grown.0.insert(w.clone());
                grown.1.insert(e.clone());
                if seen.insert(grown.clone()) {
                    frontier.push(grown);
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// Every morphism into `x`: open subgraphs with every collapsible forest.
pub fn all_morphisms(x: &Graph) -> Vec<Morphism> {
    let vertices: Vec<&VertexId> = x.vertices().iter().collect();
    let edges: Vec<&EdgeId> = x.edges().keys().collect();
    assert!(vertices.len() + edges.len() <= 20, "graph too large to enumerate");
    let mut out = Vec::new();
    for vmask in 0u32..1 << vertices.len() {
        let vs: BTreeSet<VertexId> = (0..vertices.len()).filter(|i| vmask >> i & 1 == 1).map(|i| vertices[i].clone()).collect();
        let forced: BTreeSet<EdgeId> = vs.iter().flat_map(|v| x.incident_edges(v).cloned()).collect();
        let optional: Vec<&EdgeId> = edges.iter().copied().filter(|e| !forced.contains(*e)).collect();
        for emask in 0u32..1 << optional.len() {
            let mut es = forced.clone();
            es.extend((0..optional.len()).filter(|i| emask >> i & 1 == 1).map(|i| optional[i].clone()));
            let collapsible: Vec<&EdgeId> = forced
                .iter()
                .filter(|e| x.edges()[*e].ends.iter().all(|end| end.vertex().is_some_and(|v| vs.contains(v))))
                .collect();
            for fmask in 0u32..1 << collapsible.len() {
                let forest = (0..collapsible.len()).filter(|i| fmask >> i & 1 == 1).map(|i| collapsible[i].clone()).collect();
                let m = Morphism { vertices: vs.clone(), edges: es.clone(), forest };
                if m.check(x).is_ok() {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// Outcome of one axiom instance: `None` when the hypothesis fails.
pub type AxiomOutcome = Option<bool>;

/// The maximal sieve covers.
pub fn maximal_axiom(x: &Graph) -> bool {
    Sieve::Maximal.is_covering(x)
}

/// If `u` covers `x`, then its pullback along `f` covers the source of `f`.
pub fn pullback_axiom(x: &Graph, u: &Sieve, f: &Morphism) -> Result<AxiomOutcome, SieveError> {
    if !u.is_covering(x) {
        return Ok(None);
    }
    let y = f.source(x)?;
    Ok(Some(u.pullback(x, f).is_covering(&y)))
}

/// If `u` covers `x` and every member `f` of `u` pulls `v` back to a covering
/// sieve, then `v` covers `x`.
pub fn local_axiom(x: &Graph, u: &Sieve, v: &Sieve) -> Result<AxiomOutcome, SieveError> {
    if !u.is_covering(x) {
        return Ok(None);
    }
    for f in u.members(x) {
        let y = f.source(x)?;
        if !v.pullback(x, &f).is_covering(&y) {
            return Ok(None);
        }
    }
    Ok(Some(v.is_covering(x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        RawGraph::new().vertices(["a", "b", "c"]).link("ab", "a", "b").link("bc", "b", "c").build().unwrap()
    }

    fn square() -> Graph {
        RawGraph::new()
            .vertices(["a", "b", "c", "d"])
            .link("ab", "a", "b")
            .link("bc", "b", "c")
            .link("cd", "c", "d")
            .link("da", "d", "a")
            .leg("l", "a")
            .build()
            .unwrap()
    }

    fn theta() -> Graph {
        RawGraph::new().vertices(["u", "v"]).link("x", "u", "v").link("y", "u", "v").link("z", "u", "v").build().unwrap()
    }

    fn corpus() -> Vec<Graph> {
        vec![path3(), square(), theta()]
    }

    fn literal_uncovered(s: &Sieve, x: &Graph) -> Option<VertexId> {
        let members = s.members(x);
        x.vertices().iter().find(|y| !members.iter().any(|m| m.vertices.contains(*y))).cloned()
    }

    #[test]
    fn enumeration_counts() {
        // path a - b - c: opens on vertex sets {}, {a}, {b}, {c}, {a,b}, ...
        let x = path3();
        let all = all_morphisms(&x);
        let opens: BTreeSet<_> = all.iter().map(|m| (m.vertices.clone(), m.edges.clone())).collect();
        // vertex sets and free choice of the edges they do not force
        let expected_opens = 4 + 2 + 1 + 2 + 1 + 1 + 1 + 1;
        assert_eq!(opens.len(), expected_opens);
        // the forest is any subset of the edges with both ends kept
        assert_eq!(all.len(), expected_opens + 1 + 1 + 3);
    }

    #[test]
    fn theta_collapses_one_edge_at_most() {
        let x = theta();
        let full = all_morphisms(&x).into_iter().filter(|m| m.vertices.len() == 2).collect::<Vec<_>>();
        assert!(full.iter().all(|m| m.forest.is_empty()));
    }

    #[test]
    fn covering_matches_the_literal_definition() {
        for x in corpus() {
            let contractions = x
                .edges()
                .keys()
                .map(|e| Morphism::contraction(&x, [e.clone()].into()))
                .filter(|m| m.check(&x).is_ok())
                .take(2)
                .collect();
            let sieves = [
                Sieve::Maximal,
                Sieve::empty(),
                Sieve::stars(&x),
                Sieve::stars_of(&x, x.vertices().iter().take(1)),
                Sieve::Generated(contractions),
            ];
            for s in &sieves {
                assert_eq!(s.uncovered(&x), literal_uncovered(s, &x), "{s:?}");
            }
        }
    }

    #[test]
    fn star_sieves() {
        for x in corpus() {
            assert!(Sieve::stars(&x).is_covering(&x));
            assert!(!Sieve::empty().is_covering(&x));
            assert!(maximal_axiom(&x));
        }
        let x = path3();
        let partial = Sieve::stars_of(&x, [&VertexId::from("a"), &VertexId::from("c")]);
        assert_eq!(partial.uncovered(&x), Some("b".into()));
    }

    #[test]
    fn generated_sieves_are_closed_under_precomposition() {
        let x = square();
        let u = Sieve::Generated(vec![Morphism::contraction(&x, ["ab".into()].into()), Morphism::star(&x, &"c".into())]);
        for h in u.members(&x) {
            let y = h.source(&x).unwrap();
            for k in all_morphisms(&y) {
                assert!(u.contains(&x, &h.compose(&x, &k)), "{h:?} then {k:?}");
            }
        }
    }

    #[test]
    fn composition_is_associative() {
        let x = square();
        let f = Morphism::contraction(&x, ["ab".into()].into());
        let y = f.source(&x).unwrap();
        for g in all_morphisms(&y).into_iter().step_by(7) {
            let w = g.source(&y).unwrap();
            for h in all_morphisms(&w).into_iter().step_by(5) {
                let left = f.compose(&x, &g.compose(&y, &h));
                let right = f.compose(&x, &g).compose(&x, &h);
                assert_eq!(left, right);
            }
        }
    }

    #[test]
    fn trivial_pullbacks() {
        let x = square();
        let u = Sieve::stars_of(&x, [&VertexId::from("a"), &VertexId::from("c")]);
        let id = Morphism::identity(&x);
        assert_eq!(u.pullback(&x, &id).members(&x), u.members(&x));
        let f = Morphism::contraction(&x, ["bc".into()].into());
        let y = f.source(&x).unwrap();
        assert_eq!(Sieve::Maximal.pullback(&x, &f).members(&y), all_morphisms(&y));
    }

    #[test]
    fn star_sieve_restricts_to_an_open_subgraph() {
        let x = square();
        let f = Morphism {
            vertices: ["a".into(), "b".into()].into(),
            edges: ["ab", "bc", "da", "l"].into_iter().map(EdgeId::from).collect(),
            forest: BTreeSet::new(),
        };
        let y = f.source(&x).unwrap();
        let pulled = Sieve::stars(&x).pullback(&x, &f).members(&y);
        assert_eq!(pulled, Sieve::stars(&y).members(&y));
    }

    #[test]
    fn pulling_stars_back_along_a_contraction_loses_the_merged_vertex() {
        let x = path3();
        let f = Morphism::contraction(&x, ["ab".into()].into());
        assert_eq!(pullback_axiom(&x, &Sieve::stars(&x), &f).unwrap(), Some(false));
        let y = f.source(&x).unwrap();
        assert_eq!(Sieve::stars(&x).pullback(&x, &f).uncovered(&y), Some("a".into()));
    }

    #[test]
    fn pullbacks_along_opens_of_star_sieves_cover() {
        for x in corpus() {
            for f in all_morphisms(&x).into_iter().filter(|f| f.forest.is_empty()) {
                assert_ne!(pullback_axiom(&x, &Sieve::stars(&x), &f).unwrap(), Some(false), "{f:?}");
            }
        }
    }

    #[test]
    fn local_character() {
        let x = path3();
        let sieves = [
            Sieve::Maximal,
            Sieve::empty(),
            Sieve::stars(&x),
            Sieve::stars_of(&x, [&VertexId::from("b")]),
            Sieve::Generated(vec![Morphism::contraction(&x, ["ab".into()].into())]),
        ];
        let mut decided = 0;
        for u in &sieves {
            for v in &sieves {
                if let Some(ok) = local_axiom(&x, u, v).unwrap() {
                    assert!(ok, "{u:?} {v:?}");
                    decided += 1;
                }
            }
        }
        assert!(decided > 0);
    }
}

//! The `rgk-graph/1` JSON document and DOT export.
//!
//! Documents are canonical when vertices and edges are sorted by id, every
//! cyclic order starts at its least label, and rationals are written `"p/q"`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclic::{CyclicOrder, Parity, Unwinding, UnwindingError};
use crate::grading::{GradingError, Z2Grading, ZGrading};
use crate::graph::{Diagnostics, Edge, EdgeId, End, Graph, HalfEdge, RawGraph, VertexId};
use crate::linalg::{parse_rational, Matrix, Rational};
use crate::quiver::{Base, ConicLagrangian, Direction, LagrangianError, Quiver, QuiverError, Rep, RepError, Spoke};
use crate::ribbon::{ChordalStructure, RibbonError, RibbonGraph};

pub const FORMAT: &str = "rgk-graph/1";

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported format tag {0:?}; expected \"rgk-graph/1\"")]
    Format(String),
    #[error("edge {edge}: cannot read {value:?} as a rational p/q")]
    Rational { edge: String, value: String },
    #[error("graph clause: {0}")]
    Graph(#[from] Diagnostics),
    #[error("ribbon clause: {0}")]
    Ribbon(RibbonError),
    #[error("chordal clause: {0}")]
    Chordal(RibbonError),
    #[error("grading clause: {0}")]
    Grading(#[from] GradingError),
    #[error("grading clause: {0}")]
    Unwinding(#[from] UnwindingError),
    #[error("{0} needs a \"cyclic\" block")]
    NeedsCyclic(&'static str),
    #[error("parity at {0} must be 0 or 1")]
    Parity(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub id: String,
    /// Vertex ids, `null` for a free end.
    pub ends: [Option<String>; 2],
    pub interval: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnwindingRecord {
    pub steps: BTreeMap<String, i64>,
    pub parity: BTreeMap<String, u8>,
}

/// Per-vertex tables keyed by vertex, then by edge.
pub type HalfEdgeTable<T> = BTreeMap<String, BTreeMap<String, T>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradingRecord {
    /// Odd flips of the ℤ/2-torsor; omitted half-edges are even.
    #[serde(default)]
    pub tau: HalfEdgeTable<u8>,
    pub labels: BTreeMap<String, u8>,
    pub unwindings: BTreeMap<String, UnwindingRecord>,
    pub theta: HalfEdgeTable<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub format: String,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cyclic: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_section: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<GradingRecord>,
}

/// Everything a document describes, validated.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub graph: Graph,
    pub ribbon: Option<RibbonGraph>,
    pub chordal: Option<ChordalStructure>,
    pub grading: Option<ZGrading>,
}

pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parity_bit(p: Parity) -> u8 {
    u8::from(p.0)
}

fn read_parity(bit: u8, at: impl FnOnce() -> String) -> Result<Parity, DocumentError> {
    match bit {
        0 => Ok(Parity::EVEN),
        1 => Ok(Parity::ODD),
        _ => Err(DocumentError::Parity(at())),
    }
}

fn rotated(order: &CyclicOrder<EdgeId>) -> Vec<String> {
    let least = order.as_slice().iter().min().expect("ribbon orders are nonempty");
    order
        .starting_at(least)
        .expect("least label is present")
        .into_iter()
        .map(|e| e.0)
        .collect()
}

impl GraphDocument {
    pub fn from_graph(g: &Graph) -> Self {
        let edges = g
            .edges()
            .iter()
            .map(|(id, e)| EdgeRecord {
                id: id.0.clone(),
                ends: [0, 1].map(|i| e.ends[i].vertex().map(|v| v.0.clone())),
                interval: [format_rational(&e.lo), format_rational(&e.hi)],
            })
            .collect();
        GraphDocument {
            format: FORMAT.to_string(),
            vertices: g.vertices().iter().map(|v| v.0.clone()).collect(),
            edges,
            cyclic: BTreeMap::new(),
            zero_section: None,
            grading: None,
        }
    }

    pub fn from_ribbon(r: &RibbonGraph) -> Self {
        let mut doc = GraphDocument::from_graph(r.graph());
        doc.cyclic = r.orders().iter().map(|(v, o)| (v.0.clone(), rotated(o))).collect();
        doc
    }

    pub fn from_chordal(c: &ChordalStructure) -> Self {
        let mut doc = GraphDocument::from_ribbon(c.ribbon());
        doc.zero_section = Some(c.zero_section().iter().map(|e| e.0.clone()).collect());
        doc
    }

    /// A graded ribbon graph, with the zero section of `c` if given.
    pub fn from_grading(z: &ZGrading, c: Option<&ChordalStructure>) -> Self {
        let mut doc = match c {
            Some(c) => GraphDocument::from_chordal(c),
            None => GraphDocument::from_ribbon(z.ribbon()),
        };
        let mut tau: HalfEdgeTable<u8> = BTreeMap::new();
        for (h, p) in z.tau().flips() {
            if p.0 {
                tau.entry(h.vertex.0.clone()).or_default().insert(h.edge.0.clone(), 1);
            }
        }
        let mut theta: HalfEdgeTable<i64> = BTreeMap::new();
        for (h, t) in z.theta() {
            theta.entry(h.vertex.0.clone()).or_default().insert(h.edge.0.clone(), *t);
        }
        let unwindings = z
            .unwindings()
            .iter()
            .map(|(v, u)| {
                let steps = u.steps().iter().map(|(e, s)| (e.0.clone(), *s)).collect();
                let parity = u.parities().iter().map(|(e, p)| (e.0.clone(), parity_bit(*p))).collect();
                (v.0.clone(), UnwindingRecord { steps, parity })
            })
            .collect();
        doc.grading = Some(GradingRecord {
            tau,
            labels: z.labels().iter().map(|(e, p)| (e.0.clone(), parity_bit(*p))).collect(),
            unwindings,
            theta,
        });
        doc
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: GraphDocument = serde_json::from_str(text)?;
        if doc.format != FORMAT {
            return Err(DocumentError::Format(doc.format));
        }
        Ok(doc)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn load(&self) -> Result<Loaded, DocumentError> {
        let mut raw = RawGraph::new().vertices(self.vertices.iter().map(String::as_str));
        for r in &self.edges {
            let read = |s: &String| {
                parse_rational(s).ok_or_else(|| DocumentError::Rational { edge: r.id.clone(), value: s.clone() })
            };
            let end = |v: &Option<String>| v.as_ref().map_or(End::Free, |v| End::Vertex(v.as_str().into()));
            let edge = Edge::new(end(&r.ends[0]), end(&r.ends[1]), read(&r.interval[0])?, read(&r.interval[1])?);
            raw = raw.edge(&r.id, edge);
        }
        let graph = raw.build()?;
        let mut out = Loaded { graph: graph.clone(), ribbon: None, chordal: None, grading: None };
        if self.cyclic.is_empty() {
            if self.zero_section.is_some() {
                return Err(DocumentError::NeedsCyclic("zero_section"));
            }
            if self.grading.is_some() {
                return Err(DocumentError::NeedsCyclic("grading"));
            }
            return Ok(out);
        }
        let lists = self.cyclic.iter().map(|(v, es)| (v.as_str(), es.iter().map(String::as_str).collect()));
        let ribbon = RibbonGraph::from_lists(graph, lists).map_err(DocumentError::Ribbon)?;
        if let Some(zero) = &self.zero_section {
            let zero: BTreeSet<EdgeId> = zero.iter().map(|e| EdgeId::from(e.as_str())).collect();
            out.chordal = Some(ChordalStructure::new(ribbon.clone(), zero).map_err(DocumentError::Chordal)?);
        }
        if let Some(g) = &self.grading {
            out.grading = Some(g.load(&ribbon)?);
        }
        out.ribbon = Some(ribbon);
        Ok(out)
    }
}

impl GradingRecord {
    fn load(&self, ribbon: &RibbonGraph) -> Result<ZGrading, DocumentError> {
        let half = |v: &str, e: &str| HalfEdge::new(&EdgeId::from(e), &VertexId::from(v));
        let mut flips = BTreeMap::new();
        for (v, row) in &self.tau {
            for (e, bit) in row {
                flips.insert(half(v, e), read_parity(*bit, || format!("{e}@{v}"))?);
            }
        }
        let labels = self
            .labels
            .iter()
            .map(|(e, bit)| Ok((EdgeId::from(e.as_str()), read_parity(*bit, || e.clone())?)))
            .collect::<Result<_, DocumentError>>()?;
        let mut unwindings = BTreeMap::new();
        for (v, u) in &self.unwindings {
            let vid = VertexId::from(v.as_str());
            let base = ribbon.order(&vid).map_err(DocumentError::Ribbon)?.clone();
            let steps = u.steps.iter().map(|(e, s)| (EdgeId::from(e.as_str()), *s)).collect();
            let parity = u
                .parity
                .iter()
                .map(|(e, bit)| Ok((EdgeId::from(e.as_str()), read_parity(*bit, || format!("{e}@{v}"))?)))
                .collect::<Result<_, DocumentError>>()?;
            unwindings.insert(vid, Unwinding::new(base, steps, parity)?);
        }
        let mut theta = BTreeMap::new();
        for (v, row) in &self.theta {
            for (e, t) in row {
                theta.insert(half(v, e), *t);
            }
        }
        Ok(ZGrading::new(ribbon.clone(), Z2Grading::new(flips), labels, unwindings, theta)?)
    }
}

/// `{"base": "line"|"circle", "points": [...], "spokes": [{"at": "p/q", "dir": "up"|"down"}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LagrangianDocument {
    pub base: Base,
    pub points: Vec<String>,
    pub spokes: Vec<SpokeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpokeRecord {
    pub at: String,
    pub dir: Direction,
}

#[derive(Debug, Error)]
pub enum QuiverDocError {
    #[error("malformed JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("cannot read {0:?} as a rational p/q")]
    Rational(String),
    #[error(transparent)]
    Lagrangian(#[from] LagrangianError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("map {0} is ragged")]
    Ragged(usize),
}

fn read_rational(s: &str) -> Result<Rational, QuiverDocError> {
    parse_rational(s).ok_or_else(|| QuiverDocError::Rational(s.to_string()))
}

impl LagrangianDocument {
    pub fn from_lagrangian(l: &ConicLagrangian) -> Self {
        LagrangianDocument {
            base: l.base(),
            points: l.points().iter().map(format_rational).collect(),
            spokes: l.spokes().iter().map(|s| SpokeRecord { at: format_rational(&s.at), dir: s.dir }).collect(),
        }
    }

    pub fn load(&self) -> Result<ConicLagrangian, QuiverDocError> {
        let points = self.points.iter().map(|p| read_rational(p)).collect::<Result<_, _>>()?;
        let spokes = self
            .spokes
            .iter()
            .map(|s| Ok(Spoke { at: read_rational(&s.at)?, dir: s.dir }))
            .collect::<Result<_, QuiverDocError>>()?;
        Ok(ConicLagrangian::new(self.base, points, spokes)?)
    }
}

/// A quiver as its vertex count and `[source, target]` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverRecord {
    pub vertices: usize,
    pub arrows: Vec<[usize; 2]>,
}

impl QuiverRecord {
    pub fn from_quiver(q: &Quiver) -> Self {
        QuiverRecord { vertices: q.vertex_count(), arrows: q.arrows().iter().map(|a| [a.source, a.target]).collect() }
    }

    pub fn load(&self) -> Result<Quiver, QuiverDocError> {
        let pairs: Vec<(usize, usize)> = self.arrows.iter().map(|a| (a[0], a[1])).collect();
        Ok(Quiver::from_pairs(self.vertices, &pairs)?)
    }
}

/// A representation: dimensions per vertex and one dense `"p/q"` matrix per arrow, row by row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepDocument {
    pub quiver: QuiverRecord,
    pub dims: Vec<usize>,
    pub maps: Vec<Vec<Vec<String>>>,
}

impl RepDocument {
    pub fn from_rep(m: &Rep) -> Self {
        let maps = m
            .maps()
            .iter()
            .map(|a| (0..a.rows()).map(|i| a.row(i).iter().map(format_rational).collect()).collect())
            .collect();
        RepDocument { quiver: QuiverRecord::from_quiver(m.quiver()), dims: m.dims().to_vec(), maps }
    }

    pub fn load(&self) -> Result<Rep, QuiverDocError> {
        let q = self.quiver.load()?;
        let mut maps = Vec::new();
        for (k, rows) in self.maps.iter().enumerate() {
            let arrow = q.arrows().get(k).copied();
            let cols = arrow.map_or(0, |a| self.dims.get(a.source).copied().unwrap_or(0));
            let mut m = Matrix::zeros(rows.len(), cols);
            for (i, row) in rows.iter().enumerate() {
                if row.len() != cols {
                    return Err(QuiverDocError::Ragged(k));
                }
                for (j, x) in row.iter().enumerate() {
                    m[(i, j)] = read_rational(x)?;
                }
            }
            maps.push(m);
        }
        Ok(Rep::new(q, self.dims.clone(), maps)?)
    }
}

fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn record_text(s: &str) -> String {
    s.chars()
        .flat_map(|c| match c {
            '{' | '}' | '|' | '<' | '>' | '"' | '\\' | ' ' => vec!['\\', c],
            c => vec![c],
        })
        .collect()
}

/// Deterministic DOT: each vertex is a record whose ports `p0, p1, …` list
/// its half-edges in cyclic order from the least label; zero-section edges are bold.
pub fn to_dot(g: &Graph, ribbon: Option<&RibbonGraph>, zero: Option<&BTreeSet<EdgeId>>) -> String {
    let ports: BTreeMap<&VertexId, Vec<EdgeId>> = g
        .vertices()
        .iter()
        .map(|v| {
            let order = match ribbon.and_then(|r| r.order(v).ok()) {
                Some(o) => rotated(o).into_iter().map(EdgeId).collect(),
                None => g.incident_edges(v).cloned().collect(),
            };
            (v, order)
        })
        .collect();
    let mut out = String::from("graph rgk {\n  node [shape=record];\n");
    for (v, es) in &ports {
        let fields: Vec<String> = es.iter().enumerate().map(|(i, e)| format!("<p{i}> {}", record_text(&e.0))).collect();
        let _ = writeln!(out, "  {} [label=\"{{{}|{{{}}}}}\"];", quoted(&v.0), record_text(&v.0), fields.join("|"));
    }
    for (id, e) in g.edges() {
        let end = |i: usize| match &e.ends[i] {
            End::Vertex(v) => {
                let p = ports[v].iter().position(|x| x == id).expect("edge is incident");
                format!("{}:p{p}", quoted(&v.0))
            }
            End::Free => quoted(&format!("{}:{}", id.0, if i == 0 { "lo" } else { "hi" })),
        };
        for i in 0..2 {
            if e.ends[i].is_free() {
                let _ = writeln!(out, "  {} [shape=point];", end(i));
            }
        }
        let bold = if zero.is_some_and(|z| z.contains(id)) { ", style=bold" } else { "" };
        let _ = writeln!(out, "  {} -- {} [label={}{bold}];", end(0), end(1), quoted(&id.0));
    }
    out.push_str("}\n");
    out
}

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rgk::cpm::{self, Indices};
use rgk::io::{to_dot, GraphDocument, Loaded};
use rgk::graph::{EdgeId, RawGraph};
use rgk::ribbon::{ChordalStructure, RibbonGraph, ZComponent};
use serde::Serialize;

use crate::{emit, out, invalid, read, Failure, Outcome};

mod algebra;
mod checks;

pub use algebra::{cpm_hom, hom, quiver, reflect};
pub use checks::{grade, hms_check, mirror_check, sieve_check, verify_all};

fn load(path: &Path) -> Result<Loaded, Failure> {
    let text = read(path)?;
    let doc = GraphDocument::parse(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    doc.load().map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn chordal_of(path: &Path) -> Result<ChordalStructure, Failure> {
    load(path)?.chordal.ok_or_else(|| invalid(format!("{}: no \"zero_section\" block", path.display())))
}

pub fn validate(path: &Path) -> Outcome {
    let l = load(path)?;
    let mut layers = vec!["graph"];
    layers.extend(l.ribbon.as_ref().map(|_| "ribbon"));
    layers.extend(l.chordal.as_ref().map(|_| "chordal"));
    layers.extend(l.grading.as_ref().map(|_| "grading"));
    out(&format!(
        "valid: {} vertices, {} edges ({})\n",
        l.graph.vertices().len(),
        l.graph.edges().len(),
        layers.join(", ")
    ));
    Ok(())
}

#[derive(Serialize)]
struct ZeroRow {
    vertices: Vec<String>,
    circle: bool,
    genus: Option<usize>,
}

#[derive(Serialize)]
struct InvariantTable {
    vertices: usize,
    edges: usize,
    noncompact_edges: usize,
    boundary_components: Option<usize>,
    genus: Option<usize>,
    zero_section: Vec<ZeroRow>,
    shape: Option<cpm::Shape>,
    indices: Option<Indices>,
    not_dualizable: Option<String>,
}

impl InvariantTable {
    fn render(&self) -> String {
        let dash = |x: Option<usize>| x.map_or("-".to_string(), |x| x.to_string());
        let mut rows = vec![
            format!("vertices             {}", self.vertices),
            format!("edges                {} ({} noncompact)", self.edges, self.noncompact_edges),
            format!("boundary components  {}", dash(self.boundary_components)),
            format!("genus                {}", dash(self.genus)),
        ];
        for (k, z) in self.zero_section.iter().enumerate() {
            let kind = if z.circle { "circle" } else { "line" };
            rows.push(format!("zero component {k}     {kind} through {}, genus {}", z.vertices.join(" "), dash(z.genus)));
        }
        if let Some(shape) = self.shape {
            rows.push(format!("shape                {shape}"));
        }
        if let Some(i) = &self.indices {
            rows.push(format!("indices              {i}"));
        }
        if let Some(why) = &self.not_dualizable {
            rows.push(format!("not dualizable       {why}"));
        }
        rows.join("\n")
    }
}

pub fn invariants(path: &Path, json: bool) -> Outcome {
    let l = load(path)?;
    let g = &l.graph;
    let mut table = InvariantTable {
        vertices: g.vertices().len(),
        edges: g.edges().len(),
        noncompact_edges: g.noncompact_edge_count(),
        boundary_components: l.ribbon.as_ref().map(|r| r.boundary_components().len()),
        genus: l.ribbon.as_ref().and_then(|r| r.genus().ok()),
        zero_section: Vec::new(),
        shape: None,
        indices: None,
        not_dualizable: None,
    };
    if let Some(c) = &l.chordal {
        for z in c.zero_components() {
            let genus = if z.circle { zero_ribbon(c, &z).and_then(|r| r.genus().ok()) } else { None };
            table.zero_section.push(ZeroRow {
                vertices: z.vertices.iter().map(|v| v.as_str().to_string()).collect(),
                circle: z.circle,
                genus,
            });
        }
        table.shape = Some(cpm::base_graph(c).shape());
        match cpm::dualizable(c) {
            Ok(d) => table.indices = Some(d.indices),
            Err(e) => table.not_dualizable = Some(e.to_string()),
        }
    }
    emit(json, &table, || table.render());
    Ok(())
}

/// A zero-section component on its own, with the orders it inherits.
fn zero_ribbon(c: &ChordalStructure, z: &ZComponent) -> Option<RibbonGraph> {
    let g = c.graph();
    let mut raw = RawGraph::new();
    for v in &z.vertices {
        raw = raw.vertex(v.as_str());
    }
    for e in &z.edges {
        raw = raw.edge(e.as_str(), g.edges()[e].clone());
    }
    let mut orders = BTreeMap::new();
    for v in &z.vertices {
        let here: BTreeSet<EdgeId> = g.incident_edges(v).filter(|e| z.edges.contains(*e)).cloned().collect();
        orders.insert(v.clone(), c.ribbon().orders()[v].induced(&here).ok()?);
    }
    RibbonGraph::new(raw.build().ok()?, orders).ok()
}

pub fn dualizable(path: &Path, json: bool) -> Outcome {
    let c = chordal_of(path)?;
    let d = cpm::dualizable(&c).map_err(invalid)?;
    emit(json, &d.indices, || format!("{} {}", d.indices.shape, d.indices));
    Ok(())
}

pub fn export_dot(path: &Path) -> Outcome {
    let l = load(path)?;
    let zero = l.chordal.as_ref().map(|c| c.zero_section());
    out(&to_dot(&l.graph, l.ribbon.as_ref(), zero));
    Ok(())
}

use std::path::Path;

use rgk::cpm::{structure_object, wheel_cover};
use rgk::homology::GradedDims;
use rgk::io::{LagrangianDocument, QuiverRecord, RepDocument};
use rgk::quiver::{bgp_reflect, hom_ext, quiver_from_lagrangian, Rep};
use serde::Serialize;

use super::chordal_of;
use crate::{emit, out, invalid, read_json, Outcome};

#[derive(Serialize)]
struct QuiverReport {
    quiver: QuiverRecord,
    cells: Vec<String>,
    picture: Option<String>,
    monodromy: Option<usize>,
}

pub fn quiver(path: &Path, rep: Option<&str>, json: bool) -> Outcome {
    let doc: LagrangianDocument = read_json(path)?;
    let lag = doc.load().map_err(invalid)?;
    let lq = quiver_from_lagrangian(&lag);
    if let Some(which) = rep {
        let q = &lq.quiver;
        let vertex = |s: &str| s.parse::<usize>().map_err(|_| invalid(format!("bad vertex {s:?}")));
        let m = match which.split_once(':') {
            None if which == "constant" => Rep::constant(q),
            Some(("projective", v)) => Rep::projective(q, vertex(v)?).map_err(invalid)?,
            Some(("simple", v)) if vertex(v)? < q.vertex_count() => Rep::simple(q, vertex(v)?),
            _ => return Err(invalid(format!("unknown representation {which:?}"))),
        };
        out(&format!("{}\n", serde_json::to_string_pretty(&RepDocument::from_rep(&m)).expect("serializes")));
        return Ok(());
    }
    let report = QuiverReport {
        quiver: QuiverRecord::from_quiver(&lq.quiver),
        cells: lq.partition.cells().iter().map(ToString::to_string).collect(),
        picture: lq.quiver.picture(),
        monodromy: lq.monodromy,
    };
    emit(json, &report, || {
        let mut rows: Vec<String> = report.cells.iter().enumerate().map(|(v, c)| format!("vertex {v}  {c}")).collect();
        for (a, [s, t]) in report.quiver.arrows.iter().enumerate() {
            let tag = if Some(a) == report.monodromy { "  (monodromy)" } else { "" };
            rows.push(format!("arrow {a}   {s} -> {t}{tag}"));
        }
        rows.extend(report.picture.clone());
        rows.join("\n")
    });
    Ok(())
}

fn load_rep(path: &Path) -> Result<Rep, crate::Failure> {
    let doc: RepDocument = read_json(path)?;
    doc.load().map_err(|e| invalid(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct HomReport {
    hom: usize,
    ext: usize,
}

pub fn hom(source: &Path, target: &Path, json: bool) -> Outcome {
    let (m, n) = (load_rep(source)?, load_rep(target)?);
    let (hom, ext) = hom_ext(&m, &n).map_err(invalid)?;
    let report = HomReport { hom, ext };
    emit(json, &report, || format!("hom  {hom}\next  {ext}"));
    Ok(())
}

pub fn reflect(path: &Path, vertex: usize) -> Outcome {
    let m = load_rep(path)?;
    let r = bgp_reflect(&m, vertex).map_err(invalid)?;
    out(&format!("{}\n", serde_json::to_string_pretty(&RepDocument::from_rep(&r)).expect("serializes")));
    Ok(())
}

pub fn cpm_hom(path: &Path, json: bool) -> Outcome {
    let c = chordal_of(path)?;
    let cover = wheel_cover(&c).map_err(invalid)?;
    let o = structure_object(&c, &cover).map_err(invalid)?;
    let dims: GradedDims = rgk::cpm::cpm_hom(&cover, &o, &o).map_err(invalid)?;
    emit(json, &dims, || format!("{dims}  euler={}", dims.euler()));
    Ok(())
}

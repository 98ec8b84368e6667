use std::path::Path;

use rgk::catalog;
use rgk::cpm::sieve::{all_morphisms, local_axiom, maximal_axiom, pullback_axiom, Sieve};
use rgk::cpm::Shape;
use rgk::grading::chordal_grading;
use rgk::homology::GradedDims;
use rgk::io::GraphDocument;
use rgk::mirror::{bb_compare, BbReport};
use rgk::verify::{self, Options, Report, DEFAULT_TRUNCATION};
use serde::Serialize;

use super::{chordal_of, load};
use crate::{emit, out, invalid, Failure, Outcome};

#[derive(Serialize)]
struct StructureRow {
    shape: Shape,
    cpm: GradedDims,
    perf: GradedDims,
    agree: bool,
}

impl StructureRow {
    fn render(&self) -> String {
        let mark = if self.agree { "PASS" } else { "FAIL" };
        format!("[{mark}] {:<5} cpm {}  perf {}", self.shape, self.cpm, self.perf)
    }
}

fn structure_row(c: &rgk::ribbon::ChordalStructure, shape: Shape) -> Result<StructureRow, Failure> {
    let (cpm, perf) = verify::structure_homs(c).map_err(invalid)?;
    Ok(StructureRow { shape, agree: cpm == perf, cpm, perf })
}

#[derive(Serialize)]
struct MirrorReport {
    indices: Vec<u32>,
    wheel: Option<BbReport>,
    structure: Vec<StructureRow>,
}

pub fn mirror_check(indices: &[u32], json: bool) -> Outcome {
    if indices.len() < 2 || indices.contains(&0) {
        return Err(invalid("--indices needs at least two positive entries"));
    }
    let wheel = match indices {
        &[a1, a2] => Some(bb_compare(a1, a2).map_err(invalid)?),
        _ => None,
    };
    let values: Vec<usize> = indices.iter().map(|&a| a as usize).collect();
    let structure = [Shape::Path, Shape::Cycle]
        .into_iter()
        .map(|shape| structure_row(&catalog::dualizable(shape, &values), shape))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = wheel.as_ref().is_none_or(BbReport::passed) && structure.iter().all(|r| r.agree);
    let report = MirrorReport { indices: indices.to_vec(), wheel, structure };
    emit(json, &report, || {
        let mut rows = Vec::new();
        if let Some(bb) = &report.wheel {
            let mark = if bb.passed() { "PASS" } else { "FAIL" };
            rows.push(format!("[{mark}] wheel {:?} against balloon {:?}", bb.wheel, bb.balloon));
            rows.push(format!("       quiver hom {:?}  balloon hom {:?}", bb.quiver_hom, bb.balloon_hom));
            rows.push(format!("       quiver ext {:?}  balloon ext {:?}", bb.quiver_ext, bb.balloon_ext));
            rows.push(format!("       permutation {:?}", bb.permutation));
            rows.extend(bb.mismatch.as_ref().map(|m| format!("       {m}")));
        }
        rows.extend(report.structure.iter().map(StructureRow::render));
        rows.join("\n")
    });
    if passed {
        Ok(())
    } else {
        Err(Failure::Unverified("the two sides disagree".into()))
    }
}

pub fn hms_check(path: &Path, json: bool) -> Outcome {
    let c = chordal_of(path)?;
    let shape = rgk::cpm::dualizable(&c).map_err(invalid)?.indices.shape;
    let row = structure_row(&c, shape)?;
    emit(json, &row, || row.render());
    if row.agree {
        Ok(())
    } else {
        Err(Failure::Unverified("the two sides disagree".into()))
    }
}

#[derive(Serialize, Default)]
struct AxiomRow {
    decided: usize,
    failed: usize,
    first_failure: Option<String>,
}

impl AxiomRow {
    fn record(&mut self, outcome: Option<bool>, what: impl FnOnce() -> String) {
        if let Some(ok) = outcome {
            self.decided += 1;
            if !ok {
                self.failed += 1;
                self.first_failure.get_or_insert_with(what);
            }
        }
    }
}

#[derive(Serialize)]
struct SieveReport {
    morphisms: usize,
    stars_cover: bool,
    maximal: AxiomRow,
    pullback: AxiomRow,
    local: AxiomRow,
}

pub fn sieve_check(path: &Path, json: bool) -> Outcome {
    let x = load(path)?.graph;
    let morphisms = all_morphisms(&x);
    let mut sieves = vec![Sieve::Maximal, Sieve::empty(), Sieve::stars(&x)];
    sieves.extend(x.vertices().iter().map(|v| Sieve::stars_of(&x, [v])));
    let mut report = SieveReport {
        morphisms: morphisms.len(),
        stars_cover: Sieve::stars(&x).is_covering(&x),
        maximal: AxiomRow::default(),
        pullback: AxiomRow::default(),
        local: AxiomRow::default(),
    };
    report.maximal.record(Some(maximal_axiom(&x)), || "the maximal sieve does not cover".into());
    for u in &sieves {
        for f in &morphisms {
            let outcome = pullback_axiom(&x, u, f).map_err(invalid)?;
            report.pullback.record(outcome, || format!("{u:?} pulled back along {f:?}"));
        }
        for v in &sieves {
            let outcome = local_axiom(&x, u, v).map_err(invalid)?;
            report.local.record(outcome, || format!("{v:?} is locally covering for {u:?}"));
        }
    }
    let passed = report.stars_cover && [&report.maximal, &report.pullback, &report.local].iter().all(|a| a.failed == 0);
    emit(json, &report, || {
        let mut rows = vec![
            format!("partial contractions  {}", report.morphisms),
            format!("stars cover           {}", report.stars_cover),
        ];
        for (name, a) in [("maximal", &report.maximal), ("pullback", &report.pullback), ("local", &report.local)] {
            rows.push(format!("{name:<21} {} failed of {} decided", a.failed, a.decided));
            rows.extend(a.first_failure.as_ref().map(|f| format!("  first: {f}")));
        }
        rows.join("\n")
    });
    if passed {
        Ok(())
    } else {
        Err(Failure::Unverified("a covering axiom fails".into()))
    }
}

pub fn grade(path: &Path, reverse: bool) -> Outcome {
    let c = chordal_of(path)?;
    let mut o = c.default_orientation();
    if reverse {
        o = o.reversed();
    }
    let z = chordal_grading(&c, &o).map_err(invalid)?;
    out(&GraphDocument::from_grading(&z, Some(&c)).to_json());
    Ok(())
}

fn truncation() -> Result<usize, Failure> {
    match std::env::var("RGK_TRUNCATION") {
        Ok(s) => s.trim().parse().map_err(|_| invalid(format!("RGK_TRUNCATION={s:?} is not a degree"))),
        Err(_) => Ok(DEFAULT_TRUNCATION),
    }
}

pub fn verify_all(seed: u64, indices_max: u32, hms_max: usize, corpus: usize, only: &[u8], json: bool) -> Outcome {
    if let Some(bad) = only.iter().find(|&&id| !(1..=10).contains(&id)) {
        return Err(invalid(format!("there is no suite {bad}")));
    }
    let opts = Options { seed, corpus, indices_max, hms_max, truncation: truncation()? };
    let report = if only.is_empty() {
        verify::run_all(&opts)
    } else {
        Report { options: opts.clone(), criteria: only.iter().map(|&id| verify::run(id, &opts)).collect() }
    };
    emit(json, &report, || report.to_string());
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Unverified("some suites failed".into()))
    }
}

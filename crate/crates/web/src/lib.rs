//! Browser bindings. Each export takes plain strings and numbers and
//! returns JSON, or an error message the page shows as-is.

use delpezzo_core::census::{census_row, FamilyKind};
use delpezzo_core::classifier::classify_class;
use delpezzo_core::geometry::{disjoint_lines, enumerate_lines};
use delpezzo_core::threefold::{QualityPolicy, ThreefoldContext};
use delpezzo_core::{DivisorClass, SurfaceModel};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn model(degree: i64, quadric: bool) -> Result<SurfaceModel, String> {
    if quadric {
        if degree != 8 {
            return Err(format!("the quadric has degree 8, not {degree}"));
        }
        return Ok(SurfaceModel::Quadric);
    }
    SurfaceModel::of_degree(degree).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct LineGraph {
    surface: String,
    lines: Vec<String>,
    /// `(i, j, l_i . l_j)` for every meeting pair `i < j`.
    edges: Vec<(usize, usize, i128)>,
    /// Indices of lines disjoint from the given curve class.
    disjoint: Vec<usize>,
}

/// Lines of the degree `degree` surface with their intersection numbers.
/// If `class` is non-empty, also marks the lines it misses.
pub fn line_graph(degree: i64, quadric: bool, class: &str) -> Result<String, String> {
    let m = model(degree, quadric)?;
    let lines: Vec<DivisorClass> = enumerate_lines(m).iter().map(|l| *l.class()).collect();
    let mut edges = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let k = lines[i].dot(&lines[j]);
            if k > 0 {
                edges.push((i, j, k));
            }
        }
    }
    let disjoint = if class.trim().is_empty() {
        Vec::new()
    } else {
        let c = DivisorClass::parse(m, class.trim()).map_err(|e| e.to_string())?;
        let missed = disjoint_lines(&c).map_err(|e| e.to_string())?;
        lines
            .iter()
            .enumerate()
            .filter(|(_, l)| missed.iter().any(|x| x.class() == *l))
            .map(|(i, _)| i)
            .collect()
    };
    let graph = LineGraph {
        surface: m.label(),
        lines: lines.iter().map(ToString::to_string).collect(),
        edges,
        disjoint,
    };
    Ok(serde_json::to_string(&graph).expect("graph serializes"))
}

/// Classification report for `class` on a general hyperplane section of
/// `V_degree`, or with the lines in `quality_json` overridden.
pub fn classify(degree: i64, class: &str, quality_json: &str) -> Result<String, String> {
    let m = model(degree, degree == 8)?;
    let policy = if quality_json.trim().is_empty() {
        QualityPolicy::GeneralSection
    } else {
        ThreefoldContext::parse_quality_map(m, quality_json).map_err(|e| e.to_string())?
    };
    let ctx = ThreefoldContext::new(degree, m, policy).map_err(|e| e.to_string())?;
    let cls = DivisorClass::parse(m, class.trim()).map_err(|e| e.to_string())?;
    let report = classify_class(&ctx, &cls).map_err(|e| e.to_string())?;
    Ok(report.to_json())
}

/// Census rows of a family as a JSON array.
pub fn census(family: &str, max: i32) -> Result<String, String> {
    let kind: FamilyKind = family.parse().map_err(|e: delpezzo_core::Error| e.to_string())?;
    let first = if kind == FamilyKind::Canonical { 1 } else { 0 };
    if kind == FamilyKind::Canonical && max > 7 {
        return Err(format!("the canonical family stops at n = 7 (asked for {max})"));
    }
    let rows = (first..=max as i128)
        .map(|p| census_row(kind, p))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&rows).expect("rows serialize"))
}

#[wasm_bindgen(js_name = lineGraph)]
pub fn line_graph_js(degree: i32, quadric: bool, class: &str) -> Result<String, JsError> {
    line_graph(degree as i64, quadric, class).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = classify)]
pub fn classify_js(degree: i32, class: &str, quality_json: &str) -> Result<String, JsError> {
    classify(degree as i64, class, quality_json).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = census)]
pub fn census_js(family: &str, max: i32) -> Result<String, JsError> {
    census(family, max).map_err(|e| JsError::new(&e))
}

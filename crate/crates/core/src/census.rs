//! Named families of curves and tabulation of their invariants.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::classifier::{classify, validate_curve_class, ComponentStatus, CurveClass};
use crate::error::{Error, Result};
use crate::geometry::enumerate_lines;
use crate::lattice::DivisorClass;
use crate::threefold::{exceptional_plane_line, ThreefoldContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilySpec {
    /// `-2K + 2l` on `S_n`, `l` the smallest line; `1 <= n <= 7`.
    CanonicalDP(i64),
    /// `(λ+6; λ+1, 1, 1, 1, 1, 0)` on a cubic surface.
    CubicA(i128),
    /// `(λ+6; λ+2, 1, 1, 1, 1, 0)` on a cubic surface.
    CubicB(i128),
    /// `-2K + 2(l - e1 - e2)` on `S_7 in V_7`.
    V7Counterexample,
}

impl FamilySpec {
    pub fn resolve(self) -> Result<(ThreefoldContext, CurveClass)> {
        resolve_family(self)
    }
}

pub fn resolve_family(spec: FamilySpec) -> Result<(ThreefoldContext, CurveClass)> {
    let (ctx, cls) = match spec {
        FamilySpec::CanonicalDP(n) => {
            if !(1..=7).contains(&n) {
                return Err(Error::OutOfRange(format!(
                    "canonical family needs a line on S_n, so 1 <= n <= 7 (got {n})"
                )));
            }
            let ctx = ThreefoldContext::general(n)?;
            let m = ctx.surface();
            let line = enumerate_lines(m)[0];
            (ctx, -2 * m.canonical() + 2 * *line.class())
        }
        FamilySpec::CubicA(lambda) | FamilySpec::CubicB(lambda) => {
            if lambda < 0 {
                return Err(Error::OutOfRange(format!("λ must be >= 0 (got {lambda})")));
            }
            let b1 = match spec {
                FamilySpec::CubicA(_) => lambda + 1,
                _ => lambda + 2,
            };
            let ctx = ThreefoldContext::general(3)?;
            let cls = DivisorClass::new(ctx.surface(), &[lambda + 6, b1, 1, 1, 1, 1, 0])?;
            (ctx, cls)
        }
        FamilySpec::V7Counterexample => {
            let ctx = ThreefoldContext::general(7)?;
            let m = ctx.surface();
            let l0 = exceptional_plane_line(m).expect("S7 has l - e1 - e2");
            (ctx, -2 * m.canonical() + 2 * l0)
        }
    };
    let curve = validate_curve_class(&ctx, &cls)?;
    Ok((ctx, curve))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Canonical,
    CubicA,
    CubicB,
}

impl FamilyKind {
    fn first_param(self) -> i128 {
        match self {
            FamilyKind::Canonical => 1,
            _ => 0,
        }
    }

    fn spec(self, param: i128) -> FamilySpec {
        match self {
            FamilyKind::Canonical => FamilySpec::CanonicalDP(param as i64),
            FamilyKind::CubicA => FamilySpec::CubicA(param),
            FamilyKind::CubicB => FamilySpec::CubicB(param),
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(FamilyKind::Canonical),
            "cubic-a" => Ok(FamilyKind::CubicA),
            "cubic-b" => Ok(FamilyKind::CubicB),
            other => Err(Error::Parse {
                token: other.to_string(),
                reason: "family must be canonical, cubic-a or cubic-b".to_string(),
            }),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Canonical => "canonical",
            FamilyKind::CubicA => "cubic-a",
            FamilyKind::CubicB => "cubic-b",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub param: i128,
    pub class: DivisorClass,
    pub d: i128,
    pub g: i128,
    pub chi_ideal: i128,
    pub m: usize,
    #[serde(rename = "dim_W", serialize_with = "ser_dim")]
    pub dim_w: Option<i128>,
    pub expected_dim: i128,
    pub tangent_dim: i128,
    pub component_status: ComponentStatus,
}

fn ser_dim<S: serde::Serializer>(v: &Option<i128>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(d) => s.serialize_i128(*d),
        None => s.serialize_str("unknown"),
    }
}

pub const TSV_HEADER: &str =
    "param\td\tg\tchi_ideal\tm\tdim_W\texpected_dim\ttangent_dim\tcomponent_status";

impl CensusRow {
    pub fn to_tsv(&self) -> String {
        let dim_w = self
            .dim_w
            .map_or_else(|| "unknown".to_string(), |d| d.to_string());
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.param,
            self.d,
            self.g,
            self.chi_ideal,
            self.m,
            dim_w,
            self.expected_dim,
            self.tangent_dim,
            self.component_status.as_str()
        )
    }
}

pub fn census_row(kind: FamilyKind, param: i128) -> Result<CensusRow> {
    let (ctx, curve) = resolve_family(kind.spec(param))?;
    let report = classify(&ctx, &curve)?;
    Ok(CensusRow {
        param,
        class: report.class,
        d: report.d,
        g: report.g,
        chi_ideal: report.chi_ideal,
        m: report.m_total,
        dim_w: report.dim_w,
        expected_dim: report.expected_dim,
        tangent_dim: report.tangent_dim,
        component_status: report.component_status,
    })
}

/// Rows for `param` from the family's first parameter up to `max_param`,
/// in ascending order.
pub fn census_table(kind: FamilyKind, max_param: i128) -> Result<Vec<CensusRow>> {
    if max_param < 0 {
        return Err(Error::OutOfRange(format!("max must be >= 0 (got {max_param})")));
    }
    if kind == FamilyKind::Canonical && max_param > 7 {
        return Err(Error::OutOfRange(format!(
            "canonical family stops at n = 7 (asked for {max_param})"
        )));
    }
    (kind.first_param()..=max_param)
        .into_par_iter()
        .map(|p| census_row(kind, p))
        .collect()
}

pub fn to_tsv(rows: &[CensusRow]) -> String {
    let mut out = String::from(TSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_tsv());
        out.push('\n');
    }
    out
}

pub fn to_json_lines(rows: &[CensusRow]) -> String {
    rows.iter()
        .map(|r| serde_json::to_string(r).expect("row serializes") + "\n")
        .collect()
}

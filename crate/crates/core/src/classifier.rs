//! Classification of a smooth connected curve `C` on a smooth hyperplane
//! section `S` of a del Pezzo threefold `V`: numerical invariants,
//! `S`-normality, stable degeneracy, smoothness of the Hilbert scheme at
//! `[C]`, and the status of the `S`-maximal family `W_{S,C}`.
//!
//! Identities used throughout, with `N_{S/V} = -K_S`:
//!
//! * `chi(I_C(S)) = (n + 2) - (d + 1 - g)`, and `chi >= 1` iff `g >= d - n`;
//! * `H^1(I_C(S)) = H^1(S, -K_S - C)`; `C` is `S`-normal iff this vanishes;
//! * `dim W_{S,C} = d + g + n` once `g >= 2` or `d >= n + 1`;
//! * `h^0(N_{C/V}) = (d + g - 1) + h^0(-K_S|_C)`.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{
    anticanonical_restriction_dims, disjoint_lines, fixed_part, is_conic_class, is_effective,
    is_line_class, LineClass, RestrictionDims,
};
use crate::lattice::DivisorClass;
use crate::threefold::{exceptional_plane_line, LineQuality, ThreefoldContext};

/// A class with a smooth connected member: effective, free of fixed lines
/// and with `C^2 > 0`, or a line or conic class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveClass {
    cls: DivisorClass,
    d: i128,
    g: i128,
}

impl CurveClass {
    pub fn class(&self) -> &DivisorClass {
        &self.cls
    }

    pub fn degree(&self) -> i128 {
        self.d
    }

    pub fn genus(&self) -> i128 {
        self.g
    }
}

pub fn validate_curve_class(ctx: &ThreefoldContext, cls: &DivisorClass) -> Result<CurveClass> {
    if cls.model() != ctx.surface() {
        return Err(Error::ModelMismatch(cls.model(), ctx.surface()));
    }
    if !is_effective(cls) {
        return Err(Error::NotEffective(Box::new(*cls)));
    }
    let rigid_or_pencil = is_line_class(cls) || is_conic_class(cls);
    if !rigid_or_pencil {
        let fp = fixed_part(cls)?;
        if !fp.fixed.is_empty() {
            return Err(Error::HasFixedPart {
                class: Box::new(*cls),
                lines: fp.fixed.iter().map(|(l, _)| *l.class()).collect(),
            });
        }
        if cls.self_intersection() <= 0 {
            return Err(Error::NotIrreducibleCriterion(Box::new(*cls)));
        }
    }
    let g = cls.arithmetic_genus();
    if g < 0 {
        return Err(Error::Internal(format!("curve class {cls} has genus {g}")));
    }
    Ok(CurveClass {
        cls: *cls,
        d: cls.degree(),
        g,
    })
}

pub fn chi_ideal(ctx: &ThreefoldContext, c: &CurveClass) -> i128 {
    ctx.degree() + 2 - (c.d + 1 - c.g)
}

pub fn h1_ideal(ctx: &ThreefoldContext, c: &CurveClass) -> Result<i128> {
    let twist = ctx.surface().anticanonical() - c.cls;
    crate::geometry::h1(&twist)
}

/// `h^1(I_C(S)) = 0`. For `g >= 2` and `chi(I_C(S)) >= 1` this must agree with
/// the absence of lines disjoint from `C`; a disagreement is an internal
/// error.
pub fn is_s_normal(ctx: &ThreefoldContext, c: &CurveClass) -> Result<bool> {
    let normal = h1_ideal(ctx, c)? == 0;
    if c.g >= 2 && chi_ideal(ctx, c) >= 1 {
        let m = disjoint_lines(&c.cls)?.len();
        if normal != (m == 0) {
            return Err(Error::Internal(format!(
                "{}: h1(I_C(S)) = 0 is {normal} but {m} lines miss C",
                c.cls
            )));
        }
    }
    Ok(normal)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Dims {
    /// `dim W_{S,C}`, when the forgetful map from the flag scheme is an
    /// embedding near `(C, S)`.
    #[serde(rename = "dim_W", serialize_with = "ser_dim")]
    pub dim_w: Option<i128>,
    /// Dimension of the flag scheme at `(C, S)`, always `d + g + n`.
    pub flag_dim: i128,
    pub tangent_dim: i128,
}

pub fn dims(ctx: &ThreefoldContext, c: &CurveClass) -> Result<Dims> {
    let restricted = anticanonical_restriction_dims(&c.cls)?;
    Ok(dims_from(ctx, c, &restricted))
}

fn dims_from(ctx: &ThreefoldContext, c: &CurveClass, restricted: &RestrictionDims) -> Dims {
    let n = ctx.degree();
    let flag_dim = c.d + c.g + n;
    Dims {
        dim_w: (c.g >= 2 || c.d > n).then_some(flag_dim),
        flag_dim,
        tangent_dim: (c.d + c.g - 1) + restricted.h0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentStatus {
    MaximalGenericallySmooth,
    MaximalGenericallyNonReduced,
    NotMaximal,
    Inconclusive,
}

impl ComponentStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ComponentStatus::MaximalGenericallySmooth => "maximal_generically_smooth",
            ComponentStatus::MaximalGenericallyNonReduced => "maximal_generically_non_reduced",
            ComponentStatus::NotMaximal => "not_maximal",
            ComponentStatus::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisjointLine {
    pub class: DivisorClass,
    pub quality: LineQuality,
}

pub const V7_COUNTEREXAMPLE_NOTE: &str =
    "known not stably degenerate: deforms off every hyperplane section via a (4,4) curve on a quadric section of V8";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub surface: String,
    pub class: DivisorClass,
    pub n: i128,
    pub d: i128,
    pub g: i128,
    pub chi_ideal: i128,
    pub h1_ideal: i128,
    pub disjoint_lines: Vec<DisjointLine>,
    pub m_total: usize,
    pub m_good: usize,
    pub m_bad: usize,
    pub s_normal: bool,
    pub stably_degenerate: Verdict,
    pub hilb_smooth: Verdict,
    #[serde(rename = "dim_W", serialize_with = "ser_dim")]
    pub dim_w: Option<i128>,
    pub flag_dim: i128,
    pub expected_dim: i128,
    pub tangent_dim: i128,
    /// `h^0(-K_S|_C)` and `h^1(-K_S|_C)`.
    pub h0_restricted: i128,
    pub h1_restricted: i128,
    /// Rank of the reduced obstruction map, the number of good lines in `E`.
    pub obstruction_rank: usize,
    pub component_status: ComponentStatus,
    pub notes: Vec<String>,
}

impl ClassificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn ser_dim<S: Serializer>(v: &Option<i128>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(d) => s.serialize_i128(*d),
        None => s.serialize_str("unknown"),
    }
}

pub fn classify(ctx: &ThreefoldContext, c: &CurveClass) -> Result<ClassificationReport> {
    let n = ctx.degree();
    let (d, g) = (c.d, c.g);
    let chi = chi_ideal(ctx, c);
    let h1 = h1_ideal(ctx, c)?;
    let s_normal = is_s_normal(ctx, c)?;
    let restricted = anticanonical_restriction_dims(&c.cls)?;
    let dims = dims_from(ctx, c, &restricted);

    let lines: Vec<DisjointLine> = disjoint_lines(&c.cls)?
        .iter()
        .map(|l: &LineClass| DisjointLine {
            class: *l.class(),
            quality: ctx.quality(l),
        })
        .collect();
    let m_good = lines.iter().filter(|l| l.quality.is_good()).count();
    let m_bad = lines.len() - m_good;

    let mut notes = Vec::new();
    // H^1(-K_S|_C) = 0 forces smoothness of expected dimension 2d.
    let unobstructed = restricted.h1 == 0;

    let (stably_degenerate, mut hilb_smooth, component_status) = if chi < 1 {
        notes.push(format!("g = {g} < d - n = {}: not stably degenerate", d - n));
        let smooth = if unobstructed || s_normal {
            Verdict::Yes
        } else {
            Verdict::Inconclusive
        };
        (Verdict::No, smooth, ComponentStatus::NotMaximal)
    } else if s_normal {
        (
            Verdict::Yes,
            Verdict::Yes,
            ComponentStatus::MaximalGenericallySmooth,
        )
    } else if m_bad == 0 {
        (
            Verdict::Yes,
            Verdict::No,
            ComponentStatus::MaximalGenericallyNonReduced,
        )
    } else {
        notes.push(format!(
            "{m_bad} bad line(s) miss C; the good-line hypothesis fails"
        ));
        let smooth = if m_good > 0 && g >= 2 {
            Verdict::No
        } else {
            Verdict::Inconclusive
        };
        (Verdict::Inconclusive, smooth, ComponentStatus::Inconclusive)
    };
    if unobstructed {
        hilb_smooth = Verdict::Yes;
    }
    if chi >= 1 && g <= 1 && !s_normal {
        notes.push(format!(
            "anomaly: g = {g} with chi >= 1 but h1(I_C(S)) = {h1}"
        ));
    }
    if is_v7_counterexample(ctx, c) {
        notes.push(V7_COUNTEREXAMPLE_NOTE.to_string());
    }

    Ok(ClassificationReport {
        surface: ctx.surface().label(),
        class: c.cls,
        n,
        d,
        g,
        chi_ideal: chi,
        h1_ideal: h1,
        m_total: lines.len(),
        m_good,
        m_bad,
        disjoint_lines: lines,
        s_normal,
        stably_degenerate,
        hilb_smooth,
        dim_w: dims.dim_w,
        flag_dim: dims.flag_dim,
        expected_dim: 2 * d,
        tangent_dim: dims.tangent_dim,
        h0_restricted: restricted.h0,
        h1_restricted: restricted.h1,
        obstruction_rank: m_good,
        component_status,
        notes,
    })
}

/// `-2K + 2 l_0` on `S_7 in V_7`, `l_0` the bad line.
fn is_v7_counterexample(ctx: &ThreefoldContext, c: &CurveClass) -> bool {
    match exceptional_plane_line(ctx.surface()) {
        Some(l0) if ctx.degree() == 7 => {
            let target = -2 * ctx.surface().canonical() + 2 * l0;
            c.cls == target
                && matches!(ctx.quality(&LineClass::new(l0).expect("l0 is a line")), LineQuality::Bad(_))
        }
        _ => false,
    }
}

/// Validates then classifies.
pub fn classify_class(ctx: &ThreefoldContext, cls: &DivisorClass) -> Result<ClassificationReport> {
    let c = validate_curve_class(ctx, cls)?;
    classify(ctx, &c)
}

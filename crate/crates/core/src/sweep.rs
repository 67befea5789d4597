//! Exhaustive and randomized consistency sweeps over boxes of classes.
//!
//! Each check compares two computations that must agree on a del Pezzo
//! surface and records every disagreement as a [`Violation`]. The
//! effectivity check uses [`ConeOracle`], a brute-force decomposition into
//! generators that shares nothing with the line-stripping algorithm in
//! [`crate::geometry`] beyond the list of lines itself.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classifier::{classify, validate_curve_class};
use crate::error::Result;
use crate::geometry::{
    classes_with, cohomology, enumerate_conics, enumerate_lines, h0, is_effective,
    restriction_h0_in_lifting_regime, triple_pole_vanishing,
};
use crate::lattice::{DivisorClass, SurfaceModel, MAX_POINTS};
use crate::threefold::ThreefoldContext;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub property: &'static str,
    pub class: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}", self.property, self.class, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl SweepSummary {
    pub fn merge(&mut self, other: SweepSummary) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn violation(property: &'static str, class: &DivisorClass, detail: String) -> Violation {
    Violation {
        property,
        class: class.to_string(),
        detail,
    }
}

/// All classes on `model` whose coefficients lie in `lo..=hi`, in
/// lexicographic order.
pub fn class_box(model: SurfaceModel, lo: i128, hi: i128) -> impl Iterator<Item = DivisorClass> {
    let rank = model.rank();
    let width = (hi - lo + 1).max(0) as u128;
    let total = width.pow(rank as u32);
    (0..total).map(move |mut idx| {
        let mut coeffs = vec![lo; rank];
        for c in coeffs.iter_mut().rev() {
            *c = lo + (idx % width) as i128;
            idx /= width;
        }
        DivisorClass::from_slice(model, &coeffs)
    })
}

/// Cohomology identities for one effective class: `h^1 >= 0`,
/// `h^0 - h^1 + h^2 = chi` and `chi(D) = chi(K - D)`.
pub fn check_cohomology(d: &DivisorClass) -> Vec<Violation> {
    let mut out = Vec::new();
    match cohomology(d) {
        Ok(c) => {
            if c.h0 - c.h1 + c.h2 != d.euler_char() {
                out.push(violation("euler", d, format!("{c:?} vs chi {}", d.euler_char())));
            }
        }
        Err(e) => out.push(violation("euler", d, e.to_string())),
    }
    if d.euler_char() != d.serre_dual().euler_char() {
        out.push(violation("serre", d, "chi(D) != chi(K-D)".to_string()));
    }
    out
}

/// Classifier invariants for one class, skipped unless the class has a
/// smooth connected member.
pub fn check_curve(ctx: &ThreefoldContext, cls: &DivisorClass) -> Result<Option<Vec<Violation>>> {
    let Ok(curve) = validate_curve_class(ctx, cls) else {
        return Ok(None);
    };
    let mut out = Vec::new();
    let report = match classify(ctx, &curve) {
        Ok(r) => r,
        Err(e) if e.is_internal() => {
            out.push(violation("classify", cls, e.to_string()));
            return Ok(Some(out));
        }
        Err(e) => return Err(e),
    };
    let (d, g, n, m) = (report.d, report.g, report.n, report.m_total as i128);
    let regime = g >= 2 && report.chi_ideal >= 1;

    if regime && (report.h1_ideal == 0) != (m == 0) {
        out.push(violation(
            "s_normal_iff_no_disjoint_line",
            cls,
            format!("h1_ideal = {}, m = {m}", report.h1_ideal),
        ));
    }
    // h1(-K-C) <= h0(O_E) needs H^1(-K+E-C) = 0, i.e. C irrational and chi(-K-C) >= 0
    if g >= 1 && report.chi_ideal >= 1 && report.h1_ideal > m {
        out.push(violation(
            "h1_ideal_le_m",
            cls,
            format!("h1_ideal = {} > m = {m}", report.h1_ideal),
        ));
    }
    if regime {
        match report.dim_w {
            Some(w) if report.tangent_dim - w == m => {}
            other => out.push(violation(
                "tangent_excess_is_m",
                cls,
                format!("tangent {} dim_W {other:?} m {m}", report.tangent_dim),
            )),
        }
        if let Some(h0) = restriction_h0_in_lifting_regime(cls)? {
            if h0 != report.h0_restricted {
                out.push(violation(
                    "restriction_h0",
                    cls,
                    format!("long exact sequence {} vs n+1+m {h0}", report.h0_restricted),
                ));
            }
        }
        if !triple_pole_vanishing(cls)? {
            out.push(violation("triple_pole_vanishing", cls, "h1(-K+3E-C) != 0".to_string()));
        }
    }
    if (report.chi_ideal >= 1) != (d + g + n >= 2 * d) {
        out.push(violation(
            "chi_iff_dimension",
            cls,
            format!("chi {} vs d+g+n {} / 2d {}", report.chi_ideal, d + g + n, 2 * d),
        ));
    }
    if let Some(w) = report.dim_w {
        if report.tangent_dim < w {
            out.push(violation("tangent_ge_dim", cls, format!("{} < {w}", report.tangent_dim)));
        }
    }
    Ok(Some(out))
}

/// Cohomology identities for every effective class and classifier
/// invariants for every curve class with coefficients in `0..=bound`.
pub fn sweep_curves(ctx: &ThreefoldContext, bound: i128) -> Result<SweepSummary> {
    let classes: Vec<DivisorClass> = class_box(ctx.surface(), 0, bound).collect();
    let per_class: Vec<Result<(usize, Vec<Violation>)>> = classes
        .par_iter()
        .map(|cls| {
            if !is_effective(cls) {
                return Ok((0, Vec::new()));
            }
            let mut v = check_cohomology(cls);
            if let Some(more) = check_curve(ctx, cls)? {
                v.extend(more);
            }
            Ok((1, v))
        })
        .collect();
    let mut summary = SweepSummary::default();
    for r in per_class {
        let (checked, v) = r?;
        summary.checked += checked;
        summary.violations.extend(v);
    }
    Ok(summary)
}

/// Blowing down `m` disjoint lines: for `D` on `S_{9-r}` with
/// `h^0(D) >= m`, pulling back to `S_{9-r-m}` and subtracting the `m` new
/// exceptional curves drops `h^0` by exactly `m`, and keeps `h^1 = 0` when
/// the pullback has `h^1 = 0`.
pub fn sweep_blow_down(samples: usize, seed: u64) -> Result<SweepSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = SweepSummary::default();
    while summary.checked < samples {
        let r: u8 = rng.random_range(0..MAX_POINTS);
        let m: u8 = rng.random_range(1..=MAX_POINTS - r);
        let base = SurfaceModel::blow_up(r)?;
        let coeffs: Vec<i128> = (0..base.rank())
            .map(|i| if i == 0 { rng.random_range(0..=6) } else { rng.random_range(-2..=3) })
            .collect();
        let d = DivisorClass::new(base, &coeffs)?;
        let before = h0(&d);
        if before < m as i128 {
            continue;
        }
        summary.checked += 1;
        let pulled = d.pull_back(m)?;
        let up = pulled.model();
        let e = (r as usize + 1..=(r + m) as usize)
            .map(|i| up.exceptional(i).expect("new exceptional curve"))
            .fold(up.zero(), |acc, x| acc + x);
        let after = h0(&(pulled - e));
        if after != before - m as i128 {
            summary.violations.push(violation(
                "blow_down_h0",
                &d,
                format!("m = {m}: h0 {before} -> {after}"),
            ));
        }
        if cohomology(&pulled)?.h1 == 0 && cohomology(&(pulled - e))?.h1 != 0 {
            summary.violations.push(violation(
                "blow_down_h1",
                &d,
                format!("m = {m}: h1 appears after subtracting E"),
            ));
        }
    }
    Ok(summary)
}

/// Decides effectivity by searching for a decomposition into lines, conics,
/// `-K` and the classes with `D^2 = 1`, `D.(-K) = 3` (pullbacks of a line
/// of P^2 under some blow-down). Searches are pruned by pairing with the
/// nef members of that list, and memoized.
pub struct ConeOracle {
    generators: Vec<DivisorClass>,
    nef: Vec<DivisorClass>,
    memo: HashMap<DivisorClass, bool>,
}

impl ConeOracle {
    pub fn new(model: SurfaceModel) -> Self {
        let mut generators: Vec<DivisorClass> = enumerate_lines(model)
            .iter()
            .map(|l| *l.class())
            .chain(enumerate_conics(model).iter().map(|q| *q.class()))
            .chain(classes_with(model, 1, 3))
            .collect();
        generators.push(model.anticanonical());
        generators.sort();
        generators.dedup();
        let nef = generators
            .iter()
            .filter(|n| generators.iter().all(|g| n.dot(g) >= 0))
            .copied()
            .collect();
        Self {
            generators,
            nef,
            memo: HashMap::new(),
        }
    }

    pub fn contains(&mut self, d: &DivisorClass) -> bool {
        if d.is_zero() {
            return true;
        }
        if d.degree() <= 0 || self.nef.iter().any(|n| n.dot(d) < 0) {
            return false;
        }
        if let Some(&known) = self.memo.get(d) {
            return known;
        }
        let mut found = false;
        for i in 0..self.generators.len() {
            let rest = *d - self.generators[i];
            if self.contains(&rest) {
                found = true;
                break;
            }
        }
        self.memo.insert(*d, found);
        found
    }
}

/// `is_effective` against [`ConeOracle`] on every class with coefficients
/// in `-bound..=bound`.
pub fn sweep_effectivity(model: SurfaceModel, bound: i128) -> SweepSummary {
    let rank = model.rank();
    let width = 2 * bound + 1;
    // split on the leading coefficient so each worker keeps its own memo
    let chunks: Vec<SweepSummary> = (-bound..=bound)
        .into_par_iter()
        .map(|lead| {
            let mut oracle = ConeOracle::new(model);
            let mut s = SweepSummary::default();
            let tail = width.pow(rank as u32 - 1);
            for mut idx in 0..tail {
                let mut coeffs = vec![lead; rank];
                for c in coeffs[1..].iter_mut().rev() {
                    *c = -bound + idx % width;
                    idx /= width;
                }
                let d = DivisorClass::from_slice(model, &coeffs);
                let fast = is_effective(&d);
                let slow = oracle.contains(&d);
                s.checked += 1;
                if fast != slow {
                    s.violations.push(violation(
                        "effective_vs_cone_oracle",
                        &d,
                        format!("line stripping says {fast}, decomposition search says {slow}"),
                    ));
                }
            }
            s
        })
        .collect();
    let mut out = SweepSummary::default();
    for c in chunks {
        out.merge(c);
    }
    out
}

/// Everything the `sweep` command runs for one threefold degree.
pub fn property_suite(ctx: &ThreefoldContext, bound: i128) -> Result<Vec<(&'static str, SweepSummary)>> {
    let mut out = vec![("curves", sweep_curves(ctx, bound)?)];
    let small_rank = ctx.surface().points().is_none_or(|r| r <= 6);
    if small_rank {
        out.push(("effectivity", sweep_effectivity(ctx.surface(), bound)));
    }
    out.push(("blow_down", sweep_blow_down(1000, 0x5eed)?));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_box_counts_and_order() {
        let m = SurfaceModel::of_degree(7).unwrap();
        let all: Vec<_> = class_box(m, -1, 1).collect();
        assert_eq!(all.len(), 27);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn oracle_basics() {
        let m = SurfaceModel::of_degree(3).unwrap();
        let mut o = ConeOracle::new(m);
        assert!(o.contains(&m.zero()));
        assert!(o.contains(&m.anticanonical()));
        assert!(!o.contains(&m.canonical()));
        assert!(o.contains(&(2 * m.exceptional(1).unwrap())));
        assert!(!o.contains(&-m.exceptional(1).unwrap()));
        assert_eq!(o.nef.len(), 27 + 72 + 1);
    }

    #[test]
    fn effectivity_agrees_on_small_boxes() {
        for n in [9, 8, 7, 6] {
            let s = sweep_effectivity(SurfaceModel::of_degree(n).unwrap(), 3);
            assert!(s.is_clean(), "{:?}", &s.violations[..s.violations.len().min(5)]);
        }
        assert!(sweep_effectivity(SurfaceModel::Quadric, 6).is_clean());
    }

    #[test]
    fn blow_down_small_sample() {
        let s = sweep_blow_down(100, 1).unwrap();
        assert_eq!(s.checked, 100);
        assert!(s.is_clean(), "{:?}", s.violations);
    }

    #[test]
    fn curves_on_s5() {
        let ctx = ThreefoldContext::general(5).unwrap();
        let s = sweep_curves(&ctx, 3).unwrap();
        assert!(s.checked > 0);
        assert!(s.is_clean(), "{:?}", s.violations);
    }
}

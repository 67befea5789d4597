//! Lines, conics, nefness, effectivity and line-bundle cohomology on del
//! Pezzo surfaces.
//!
//! Cohomology dimensions rest on two facts. An effective class splits as a
//! nef moving part plus the lines it meets negatively, and a nef class `D`
//! has `h^1(D) = h^2(D) = 0` because `D - K` is ample (Kodaira), so
//! `h^0(D) = chi(D)`. Everything else follows from Serre duality and
//! Riemann-Roch.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel, MAX_POINTS};

/// A `(-1)`-curve: `l^2 = -1`, `l.K = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct LineClass(DivisorClass);

impl LineClass {
    pub fn new(cls: DivisorClass) -> Option<Self> {
        (cls.self_intersection() == -1 && cls.degree() == 1).then_some(Self(cls))
    }

    pub fn class(&self) -> &DivisorClass {
        &self.0
    }
}

/// `q^2 = 0`, `q.(-K) = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ConicClass(DivisorClass);

impl ConicClass {
    pub fn new(cls: DivisorClass) -> Option<Self> {
        (cls.self_intersection() == 0 && cls.degree() == 2).then_some(Self(cls))
    }

    pub fn class(&self) -> &DivisorClass {
        &self.0
    }
}

/// Largest `|a|` that can occur for a line on any blow-up with `r <= 8`.
pub const LINE_COEFF_BOUND: i128 = 7;

/// Every class on `model` with `D^2 = self_int` and `D.(-K) = degree`,
/// sorted. The search is exhaustive: on the blow-up models Cauchy-Schwarz
/// gives `(3a - degree)^2 <= r (a^2 - self_int)`, which bounds `a`, and
/// each `b_i` is bounded by `sqrt(a^2 - self_int)`.
pub fn classes_with(model: SurfaceModel, self_int: i128, degree: i128) -> Vec<DivisorClass> {
    let mut out = Vec::new();
    match model {
        SurfaceModel::Quadric => {
            // 2pq = self_int, 2p + 2q = degree
            if degree % 2 == 0 {
                let sum = degree / 2;
                let span = sum.abs() + self_int.abs() + 1;
                for p in -span..=span {
                    let q = sum - p;
                    if 2 * p * q == self_int {
                        out.push(DivisorClass::from_slice(model, &[p, q]));
                    }
                }
            }
        }
        SurfaceModel::BlowUpP2(r) => {
            let r_i = r as i128;
            let feasible = |a: i128| {
                let sq = a * a - self_int;
                sq >= 0 && (3 * a - degree).pow(2) <= r_i * sq
            };
            let bound = a_bound(r_i, self_int, degree);
            let mut bs = vec![0i128; r as usize];
            for a in -bound..=bound {
                if !feasible(a) {
                    continue;
                }
                fill_b(
                    &mut bs,
                    0,
                    3 * a - degree,
                    a * a - self_int,
                    &mut |b| {
                        let mut coeffs = vec![a];
                        coeffs.extend_from_slice(b);
                        out.push(DivisorClass::from_slice(model, &coeffs));
                    },
                );
            }
        }
    }
    out.sort();
    out
}

/// Bound on `|a|` over the solutions of `(3a - t)^2 <= r (a^2 - s)`, i.e. of
/// `(9 - r) a^2 - 6 t a + t^2 + r s <= 0`, a parabola opening upwards for
/// `r < 9`.
fn a_bound(r: i128, s: i128, t: i128) -> i128 {
    let lead = (9 - r) as f64;
    let disc = 36.0 * (t * t) as f64 - 4.0 * lead * (t * t + r * s) as f64;
    if disc < 0.0 {
        return 0;
    }
    let root = disc.sqrt();
    let hi = ((6.0 * t as f64 + root) / (2.0 * lead)).abs();
    let lo = ((6.0 * t as f64 - root) / (2.0 * lead)).abs();
    hi.max(lo).ceil() as i128 + 1
}

/// Enumerates integer vectors with the given coordinate sum and sum of
/// squares.
fn fill_b(b: &mut [i128], idx: usize, sum: i128, sq: i128, emit: &mut impl FnMut(&[i128])) {
    let left = (b.len() - idx) as i128;
    if left == 0 {
        if sum == 0 && sq == 0 {
            emit(b);
        }
        return;
    }
    // Cauchy-Schwarz on the remaining coordinates
    if sum * sum > left * sq {
        return;
    }
    let m = isqrt(sq);
    for v in -m..=m {
        b[idx] = v;
        fill_b(b, idx + 1, sum - v, sq - v * v, emit);
    }
    b[idx] = 0;
}

fn isqrt(n: i128) -> i128 {
    if n <= 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

const MODEL_SLOTS: usize = MAX_POINTS as usize + 2;

fn slot(model: SurfaceModel) -> usize {
    match model {
        SurfaceModel::BlowUpP2(r) => r as usize,
        SurfaceModel::Quadric => MODEL_SLOTS - 1,
    }
}

static LINES: [OnceLock<Vec<LineClass>>; MODEL_SLOTS] = [const { OnceLock::new() }; MODEL_SLOTS];
static CONICS: [OnceLock<Vec<ConicClass>>; MODEL_SLOTS] = [const { OnceLock::new() }; MODEL_SLOTS];

/// All lines on `model`, in lexicographic order of their coefficients.
pub fn enumerate_lines(model: SurfaceModel) -> &'static [LineClass] {
    LINES[slot(model)].get_or_init(|| {
        let found = classes_with(model, -1, 1);
        debug_assert!(found
            .iter()
            .all(|c| c.coeffs()[0].abs() < LINE_COEFF_BOUND || model == SurfaceModel::Quadric));
        found.into_iter().map(LineClass).collect()
    })
}

pub fn enumerate_conics(model: SurfaceModel) -> &'static [ConicClass] {
    CONICS[slot(model)].get_or_init(|| {
        classes_with(model, 0, 2)
            .into_iter()
            .map(ConicClass)
            .collect()
    })
}

pub fn is_line_class(cls: &DivisorClass) -> bool {
    LineClass::new(*cls).is_some()
}

pub fn is_conic_class(cls: &DivisorClass) -> bool {
    ConicClass::new(*cls).is_some()
}

/// `D.C >= 0` for every curve `C`. On the rank <= 2 models the extremal
/// rays of the effective cone are listed explicitly; otherwise the effective
/// cone is spanned by lines.
pub fn is_nef(d: &DivisorClass) -> bool {
    let c = d.coeffs();
    match d.model() {
        SurfaceModel::Quadric => c[0] >= 0 && c[1] >= 0,
        SurfaceModel::BlowUpP2(0) => c[0] >= 0,
        // D.e1 = b1, D.(l - e1) = a - b1
        SurfaceModel::BlowUpP2(1) => c[1] >= 0 && c[0] - c[1] >= 0,
        SurfaceModel::BlowUpP2(_) => enumerate_lines(d.model())
            .iter()
            .all(|l| d.dot(l.class()) >= 0),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPartDecomposition {
    pub moving: DivisorClass,
    /// Lines with their multiplicities, sorted by line.
    pub fixed: Vec<(LineClass, i128)>,
}

impl FixedPartDecomposition {
    pub fn fixed_class(&self) -> DivisorClass {
        self.fixed
            .iter()
            .fold(self.moving.model().zero(), |acc, (l, m)| acc + *m * *l.class())
    }
}

/// Strips lines meeting the class negatively until a nef class remains.
/// Returns `None` when the class is not effective: either the anticanonical
/// degree drops below zero, or no line is negative but the class still
/// fails the nef test.
fn reduce(d: &DivisorClass) -> Option<FixedPartDecomposition> {
    let lines = enumerate_lines(d.model());
    let mut cur = *d;
    let mut fixed: BTreeMap<LineClass, i128> = BTreeMap::new();
    loop {
        if cur.degree() < 0 {
            return None;
        }
        match lines.iter().find(|l| cur.dot(l.class()) < 0) {
            Some(l) => {
                let mult = -cur.dot(l.class());
                cur -= mult * *l.class();
                *fixed.entry(*l).or_insert(0) += mult;
            }
            None => {
                return is_nef(&cur).then(|| FixedPartDecomposition {
                    moving: cur,
                    fixed: fixed.into_iter().collect(),
                })
            }
        }
    }
}

pub fn is_effective(d: &DivisorClass) -> bool {
    reduce(d).is_some()
}

/// Splits an effective class into its nef moving part and fixed lines.
pub fn fixed_part(d: &DivisorClass) -> Result<FixedPartDecomposition> {
    reduce(d).ok_or_else(|| Error::NotEffective(Box::new(*d)))
}

pub fn h0(d: &DivisorClass) -> i128 {
    reduce(d).map_or(0, |fp| fp.moving.euler_char())
}

pub fn h2(d: &DivisorClass) -> i128 {
    h0(&d.serre_dual())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cohomology {
    pub h0: i128,
    pub h1: i128,
    pub h2: i128,
}

pub fn cohomology(d: &DivisorClass) -> Result<Cohomology> {
    let h0 = h0(d);
    let h2 = h2(d);
    let h1 = h0 + h2 - d.euler_char();
    if h1 < 0 {
        return Err(Error::Internal(format!(
            "h1({d}) = {h1} < 0 (h0 = {h0}, h2 = {h2}, chi = {})",
            d.euler_char()
        )));
    }
    Ok(Cohomology { h0, h1, h2 })
}

pub fn h1(d: &DivisorClass) -> Result<i128> {
    cohomology(d).map(|c| c.h1)
}

/// Lines `l` with `C.l = 0`.
pub fn disjoint_lines(c: &DivisorClass) -> Result<Vec<LineClass>> {
    if !is_effective(c) {
        return Err(Error::NotEffective(Box::new(*c)));
    }
    Ok(enumerate_lines(c.model())
        .iter()
        .filter(|l| c.dot(l.class()) == 0)
        .copied()
        .collect())
}

/// The sum `E` of the given lines.
pub fn line_sum(model: SurfaceModel, lines: &[LineClass]) -> DivisorClass {
    lines.iter().fold(model.zero(), |acc, l| acc + *l.class())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RestrictionDims {
    /// `h^0(C, -K_S|_C)`
    pub h0: i128,
    /// `h^1(C, -K_S|_C)`
    pub h1: i128,
}

/// Cohomology of `-K_S|_C` from `0 -> O(-K-C) -> O(-K) -> O(-K)|_C -> 0`.
/// Since `h^1(-K) = h^2(-K) = 0`, `h^0(-K|_C) = h^0(-K) - h^0(-K-C) +
/// h^1(-K-C)` and `h^1(-K|_C) = h^2(-K-C)`.
pub fn anticanonical_restriction_dims(c: &DivisorClass) -> Result<RestrictionDims> {
    if !is_effective(c) {
        return Err(Error::NotEffective(Box::new(*c)));
    }
    let model = c.model();
    let minus_k = model.anticanonical();
    let twist = cohomology(&(minus_k - *c))?;
    let h0 = h0(&minus_k) - twist.h0 + twist.h1;
    let h1 = twist.h2;
    let (d, g) = (c.degree(), c.arithmetic_genus());
    if h0 - h1 != d + 1 - g {
        return Err(Error::Internal(format!(
            "h0 - h1 of -K|_C is {} but d + 1 - g = {}",
            h0 - h1,
            d + 1 - g
        )));
    }
    Ok(RestrictionDims { h0, h1 })
}

/// When `C` is neither rational nor elliptic and `chi(-K-C) >= 0`, sections
/// of `-K|_C` are exactly the sections of `-K + E`, which is the pullback of
/// `-K` from the surface with the `m` disjoint lines blown down. Returns
/// `Some(n + 1 + m)` in that regime.
pub fn restriction_h0_in_lifting_regime(c: &DivisorClass) -> Result<Option<i128>> {
    let g = c.arithmetic_genus();
    let chi = (c.model().anticanonical() - *c).euler_char();
    if g < 2 || chi < 0 {
        return Ok(None);
    }
    let m = disjoint_lines(c)?.len() as i128;
    Ok(Some(c.model().degree() + 1 + m))
}

/// `h^1(-K + 3E - C) = 0`, which makes `H^1(-K+3E) -> H^1(-K|_C)`
/// injective.
pub fn triple_pole_vanishing(c: &DivisorClass) -> Result<bool> {
    let e = line_sum(c.model(), &disjoint_lines(c)?);
    let d = c.model().anticanonical() + 3 * e - *c;
    Ok(h1(&d)? == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> SurfaceModel {
        SurfaceModel::of_degree(n).unwrap()
    }

    fn cls(model: SurfaceModel, text: &str) -> DivisorClass {
        DivisorClass::parse(model, text).unwrap()
    }

    /// Plain box search over |a|, |b_i| <= 7, independent of the pruned
    /// recursion. Only feasible for small r.
    fn box_count(r: u8, self_int: i128, degree: i128) -> usize {
        let model = SurfaceModel::blow_up(r).unwrap();
        let rank = r as usize + 1;
        let mut v = vec![-7i128; rank];
        let mut count = 0;
        loop {
            let d = DivisorClass::from_slice(model, &v);
            if d.self_intersection() == self_int && d.degree() == degree {
                count += 1;
            }
            let mut i = 0;
            loop {
                if i == rank {
                    return count;
                }
                v[i] += 1;
                if v[i] <= 7 {
                    break;
                }
                v[i] = -7;
                i += 1;
            }
        }
    }

    #[test]
    fn line_counts_match_box_search_for_small_r() {
        for r in 0..=4u8 {
            let m = SurfaceModel::blow_up(r).unwrap();
            assert_eq!(enumerate_lines(m).len(), box_count(r, -1, 1), "r = {r}");
            assert_eq!(enumerate_conics(m).len(), box_count(r, 0, 2), "r = {r}");
        }
    }

    #[test]
    fn line_counts() {
        let expected = [0, 1, 3, 6, 10, 16, 27, 56, 240];
        for (r, want) in expected.into_iter().enumerate() {
            let m = SurfaceModel::blow_up(r as u8).unwrap();
            assert_eq!(enumerate_lines(m).len(), want, "r = {r}");
        }
        assert!(enumerate_lines(SurfaceModel::Quadric).is_empty());
    }

    #[test]
    fn boundary_shell_has_no_lines() {
        for r in 0..=8u8 {
            let m = SurfaceModel::blow_up(r).unwrap();
            assert!(enumerate_lines(m)
                .iter()
                .all(|l| l.class().coeffs()[0].abs() < LINE_COEFF_BOUND));
        }
    }

    #[test]
    fn lines_on_s7_form_a_chain() {
        let m = s(7);
        let lines: Vec<_> = enumerate_lines(m).iter().map(|l| *l.class()).collect();
        let l0 = cls(m, "1;1,1");
        let e1 = m.exceptional(1).unwrap();
        let e2 = m.exceptional(2).unwrap();
        let mut want = vec![l0, e1, e2];
        want.sort();
        assert_eq!(lines, want);
        assert_eq!(l0.dot(&e1), 1);
        assert_eq!(l0.dot(&e2), 1);
        assert_eq!(e1.dot(&e2), 0);
    }

    #[test]
    fn conic_examples() {
        assert!(enumerate_conics(s(9)).is_empty());
        let on_s7: Vec<_> = enumerate_conics(s(7)).iter().map(|q| *q.class()).collect();
        assert!(on_s7.contains(&cls(s(7), "1;1,0")));
        assert!(on_s7.contains(&cls(s(7), "1;0,1")));
        assert_eq!(enumerate_conics(s(3)).len(), 27);
        assert_eq!(enumerate_conics(SurfaceModel::Quadric).len(), 2);
    }

    #[test]
    fn nef_examples() {
        for n in 1..=9 {
            assert!(is_nef(&s(n).anticanonical()));
        }
        assert!(is_nef(&SurfaceModel::Quadric.anticanonical()));
        assert!(!is_nef(&s(8).exceptional(1).unwrap()));
        // C + K - E for the canonical family: -K on the blow-down, pulled back
        for n in 1..=7 {
            let m = s(n);
            let l = m.exceptional(1).unwrap();
            let c = -2 * m.canonical() + 2 * l;
            let d1 = c + m.canonical() - l;
            assert!(is_nef(&d1), "n = {n}");
        }
    }

    #[test]
    fn fixed_part_examples() {
        let d = s(3).anticanonical();
        let fp = fixed_part(&d).unwrap();
        assert_eq!(fp.moving, d);
        assert!(fp.fixed.is_empty());

        let m = s(7);
        let l0 = cls(m, "1;1,1");
        let fp = fixed_part(&(m.anticanonical() + l0)).unwrap();
        assert!(fp.fixed.is_empty());

        let e1 = s(3).exceptional(1).unwrap();
        let fp = fixed_part(&(2 * e1)).unwrap();
        assert!(fp.moving.is_zero());
        assert_eq!(fp.fixed, vec![(LineClass::new(e1).unwrap(), 2)]);
        assert_eq!(fp.fixed_class(), 2 * e1);

        assert!(matches!(
            fixed_part(&s(3).canonical()),
            Err(Error::NotEffective(_))
        ));
    }

    #[test]
    fn effectivity_examples() {
        assert!(is_effective(&s(3).zero()));
        assert!(is_effective(&s(3).anticanonical()));
        assert!(!is_effective(&s(3).canonical()));
        let l = cls(s(3), "2;0,1,1,1,1,1");
        assert!(enumerate_lines(s(3)).iter().any(|x| *x.class() == l));
        assert!(is_effective(&l));
        assert!(!is_effective(&cls(s(8), "1;2")));
        assert!(is_effective(&cls(s(8), "1;1")));
        assert!(!is_effective(&cls(SurfaceModel::Quadric, "3,-1")));
    }

    #[test]
    fn cohomology_examples() {
        for n in 1..=9 {
            assert_eq!(h0(&s(n).anticanonical()), n as i128 + 1);
        }
        for n in 1..=7 {
            let m = s(n);
            let c = -2 * m.canonical() + 2 * m.exceptional(1).unwrap();
            let twist = m.anticanonical() - c;
            let coh = cohomology(&twist).unwrap();
            assert_eq!(coh, Cohomology { h0: 0, h1: 1, h2: 1 }, "n = {n}");
        }
        // P1xP1: h1(O(a,b)) = (a+1)(-b-1) for a >= 0, b <= -2
        let d = cls(SurfaceModel::Quadric, "2,-4");
        assert_eq!(h1(&d).unwrap(), 9);
    }

    #[test]
    fn blow_down_drops_sections() {
        // h0(l) = 3 on P2; a line through two general points is unique
        let l = s(9).hyperplane().unwrap();
        for m in 0..=3u8 {
            let pulled = l.pull_back(m).unwrap();
            let e: DivisorClass = (1..=m as usize)
                .map(|i| pulled.model().exceptional(i).unwrap())
                .fold(pulled.model().zero(), |a, b| a + b);
            assert_eq!(h0(&(pulled - e)), 3 - m as i128);
        }
    }

    #[test]
    fn disjoint_line_examples() {
        for n in 1..=7 {
            let m = s(n);
            let l = m.exceptional(1).unwrap();
            let c = -2 * m.canonical() + 2 * l;
            let got: Vec<_> = disjoint_lines(&c).unwrap().iter().map(|x| *x.class()).collect();
            assert_eq!(got, vec![l], "n = {n}");
        }
        let e6 = s(3).exceptional(6).unwrap();
        for lambda in 0..10 {
            let c = cls(s(3), &format!("{};{},1,1,1,1,0", lambda + 6, lambda + 1));
            let got: Vec<_> = disjoint_lines(&c).unwrap().iter().map(|x| *x.class()).collect();
            assert_eq!(got, vec![e6]);
        }
        assert!(disjoint_lines(&cls(SurfaceModel::Quadric, "3,5")).unwrap().is_empty());
        assert!(disjoint_lines(&s(3).canonical()).is_err());
    }

    #[test]
    fn restriction_dims_examples() {
        for n in 1..=7 {
            let m = s(n);
            let c = -2 * m.canonical() + 2 * m.exceptional(1).unwrap();
            let dims = anticanonical_restriction_dims(&c).unwrap();
            assert_eq!(dims.h0, n as i128 + 2);
            assert_eq!(restriction_h0_in_lifting_regime(&c).unwrap(), Some(dims.h0));
        }
        let q = cls(s(3), "1;1,0,0,0,0,0");
        assert_eq!(anticanonical_restriction_dims(&q).unwrap().h1, 0);
    }
}

//! Picard lattices of del Pezzo surfaces.
//!
//! A class on the blow-up of P^2 at `r` points is stored as `(a; b1, ..., br)`
//! and stands for `a*l - b1*e1 - ... - br*er`, so the pairing is
//! `a*a' - sum(bi*bi')`. On P^1 x P^1 a class is a bidegree `(p, q)` with
//! `(p, q).(p', q') = p*q' + q*p'`.
//!
//! All arithmetic is done in `i128`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of blown-up points for which the blow-up is del Pezzo.
pub const MAX_POINTS: u8 = 8;

const MAX_RANK: usize = MAX_POINTS as usize + 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceModel {
    /// P^2 blown up at `r` points in general position, `0 <= r <= 8`.
    BlowUpP2(u8),
    /// P^1 x P^1.
    Quadric,
}

impl SurfaceModel {
    pub fn blow_up(points: u8) -> Result<Self> {
        if points > MAX_POINTS {
            return Err(Error::InvalidModel(format!(
                "P^2 blown up at {points} points is not del Pezzo (at most {MAX_POINTS})"
            )));
        }
        Ok(SurfaceModel::BlowUpP2(points))
    }

    /// The blow-up model `S_n` of degree `n`, `1 <= n <= 9`.
    pub fn of_degree(degree: i64) -> Result<Self> {
        if !(1..=9).contains(&degree) {
            return Err(Error::InvalidModel(format!(
                "no blow-up of P^2 has degree {degree}"
            )));
        }
        Ok(SurfaceModel::BlowUpP2((9 - degree) as u8))
    }

    pub fn degree(self) -> i128 {
        match self {
            SurfaceModel::BlowUpP2(r) => 9 - r as i128,
            SurfaceModel::Quadric => 8,
        }
    }

    pub fn rank(self) -> usize {
        match self {
            SurfaceModel::BlowUpP2(r) => r as usize + 1,
            SurfaceModel::Quadric => 2,
        }
    }

    pub fn points(self) -> Option<u8> {
        match self {
            SurfaceModel::BlowUpP2(r) => Some(r),
            SurfaceModel::Quadric => None,
        }
    }

    pub fn canonical(self) -> DivisorClass {
        match self {
            SurfaceModel::BlowUpP2(r) => {
                let mut coeffs = vec![-3];
                coeffs.extend(std::iter::repeat_n(-1, r as usize));
                DivisorClass::from_slice(self, &coeffs)
            }
            SurfaceModel::Quadric => DivisorClass::from_slice(self, &[-2, -2]),
        }
    }

    pub fn anticanonical(self) -> DivisorClass {
        -self.canonical()
    }

    pub fn zero(self) -> DivisorClass {
        DivisorClass {
            model: self,
            coeffs: [0; MAX_RANK],
        }
    }

    /// Pullback `l` of a line of P^2. `None` on the quadric.
    pub fn hyperplane(self) -> Option<DivisorClass> {
        self.points().map(|_| self.basis(0))
    }

    /// Exceptional curve `e_i` (1-based) as a class, i.e. coefficients with
    /// `b_i = -1`.
    pub fn exceptional(self, i: usize) -> Option<DivisorClass> {
        let r = self.points()? as usize;
        if i == 0 || i > r {
            return None;
        }
        Some(-self.basis(i))
    }

    fn basis(self, i: usize) -> DivisorClass {
        let mut d = self.zero();
        d.coeffs[i] = 1;
        d
    }

    pub fn label(self) -> String {
        match self {
            SurfaceModel::BlowUpP2(r) => format!("S{}", 9 - r),
            SurfaceModel::Quadric => "P1xP1".to_string(),
        }
    }
}

impl fmt::Display for SurfaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceModel::BlowUpP2(r) => write!(f, "S{} (P2 blown up at {r} points)", 9 - r),
            SurfaceModel::Quadric => write!(f, "P1xP1"),
        }
    }
}

/// An element of Pic(S).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    model: SurfaceModel,
    coeffs: [i128; MAX_RANK],
}

impl DivisorClass {
    pub fn new(model: SurfaceModel, coeffs: &[i128]) -> Result<Self> {
        if coeffs.len() != model.rank() {
            return Err(Error::LengthMismatch {
                expected: model.rank(),
                found: coeffs.len(),
            });
        }
        Ok(Self::from_slice(model, coeffs))
    }

    pub(crate) fn from_slice(model: SurfaceModel, coeffs: &[i128]) -> Self {
        debug_assert_eq!(coeffs.len(), model.rank());
        let mut c = [0; MAX_RANK];
        c[..coeffs.len()].copy_from_slice(coeffs);
        Self { model, coeffs: c }
    }

    /// Parses `a;b1,...,br` (blow-up models) or `p,q` (quadric).
    pub fn parse(model: SurfaceModel, text: &str) -> Result<Self> {
        let bad = |reason: &str| Error::Parse {
            token: text.to_string(),
            reason: reason.to_string(),
        };
        let coeffs: Vec<i128> = match model {
            SurfaceModel::BlowUpP2(r) => {
                let (head, tail) = match text.split_once(';') {
                    Some((h, t)) => (h, t),
                    None if r == 0 => (text, ""),
                    None => return Err(bad("expected `a;b1,...,br`")),
                };
                let mut out = vec![parse_int(head, text)?];
                if !tail.is_empty() {
                    for tok in tail.split(',') {
                        out.push(parse_int(tok, text)?);
                    }
                }
                out
            }
            SurfaceModel::Quadric => {
                if text.contains(';') {
                    return Err(bad("classes on P1xP1 are written `p,q`"));
                }
                text.split(',')
                    .map(|tok| parse_int(tok, text))
                    .collect::<Result<_>>()?
            }
        };
        if coeffs.len() != model.rank() {
            return Err(bad(&format!(
                "{} has Picard rank {}, got {} coefficients",
                model.label(),
                model.rank(),
                coeffs.len()
            )));
        }
        Ok(Self::from_slice(model, &coeffs))
    }

    pub fn model(&self) -> SurfaceModel {
        self.model
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs[..self.model.rank()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn intersect(&self, other: &DivisorClass) -> Result<i128> {
        if self.model != other.model {
            return Err(Error::ModelMismatch(self.model, other.model));
        }
        Ok(self.dot(other))
    }

    /// Intersection number for classes already known to share a model.
    pub fn dot(&self, other: &DivisorClass) -> i128 {
        debug_assert_eq!(self.model, other.model);
        match self.model {
            SurfaceModel::BlowUpP2(r) => {
                let mut acc = self.coeffs[0] * other.coeffs[0];
                for i in 1..=r as usize {
                    acc -= self.coeffs[i] * other.coeffs[i];
                }
                acc
            }
            SurfaceModel::Quadric => {
                self.coeffs[0] * other.coeffs[1] + self.coeffs[1] * other.coeffs[0]
            }
        }
    }

    pub fn self_intersection(&self) -> i128 {
        self.dot(self)
    }

    pub fn canonical_degree(&self) -> i128 {
        self.dot(&self.model.canonical())
    }

    /// `D.(-K)`, the degree in the anticanonical polarization.
    pub fn degree(&self) -> i128 {
        -self.canonical_degree()
    }

    /// Riemann-Roch: `chi(D) = D.(D - K)/2 + 1`.
    pub fn euler_char(&self) -> i128 {
        let twice = self.self_intersection() - self.canonical_degree();
        assert!(twice % 2 == 0, "odd D.(D-K) = {twice} for {self}");
        twice / 2 + 1
    }

    /// Adjunction: `g = C.(C + K)/2 + 1`.
    pub fn arithmetic_genus(&self) -> i128 {
        let twice = self.self_intersection() + self.canonical_degree();
        assert!(twice % 2 == 0, "odd C.(C+K) = {twice} for {self}");
        twice / 2 + 1
    }

    /// `K - D`.
    pub fn serre_dual(&self) -> DivisorClass {
        self.model.canonical() - *self
    }

    /// Embeds a class of the blow-up at `r` points into the blow-up at
    /// `r + extra` points (pullback along the blow-down).
    pub fn pull_back(&self, extra: u8) -> Result<DivisorClass> {
        let r = self.model.points().ok_or_else(|| {
            Error::InvalidModel("P1xP1 is not a blow-up of P2".to_string())
        })?;
        let target = SurfaceModel::blow_up(r + extra)?;
        let mut out = target.zero();
        out.coeffs[..self.model.rank()].copy_from_slice(self.coeffs());
        Ok(out)
    }
}

fn parse_int(tok: &str, whole: &str) -> Result<i128> {
    tok.parse::<i128>().map_err(|_| Error::Parse {
        token: whole.to_string(),
        reason: format!("`{tok}` is not an integer"),
    })
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coeffs();
        match self.model {
            SurfaceModel::BlowUpP2(_) => {
                write!(f, "{};", c[0])?;
                for (i, b) in c[1..].iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{b}")?;
                }
                Ok(())
            }
            SurfaceModel::Quadric => write!(f, "{},{}", c[0], c[1]),
        }
    }
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.model.label(), self)
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(mut self, rhs: DivisorClass) -> DivisorClass {
        self += rhs;
        self
    }
}

impl AddAssign for DivisorClass {
    fn add_assign(&mut self, rhs: DivisorClass) {
        assert_eq!(self.model, rhs.model, "adding classes of different models");
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(mut self, rhs: DivisorClass) -> DivisorClass {
        self -= rhs;
        self
    }
}

impl SubAssign for DivisorClass {
    fn sub_assign(&mut self, rhs: DivisorClass) {
        assert_eq!(self.model, rhs.model, "subtracting classes of different models");
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(mut self) -> DivisorClass {
        for a in self.coeffs.iter_mut() {
            *a = -*a;
        }
        self
    }
}

impl Mul<DivisorClass> for i128 {
    type Output = DivisorClass;
    fn mul(self, mut rhs: DivisorClass) -> DivisorClass {
        for a in rhs.coeffs.iter_mut() {
            *a *= self;
        }
        rhs
    }
}

impl FromStr for SurfaceModel {
    type Err = Error;

    /// Accepts `S1`..`S9`, `quadric` or `P1xP1`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        if lower == "quadric" || lower == "p1xp1" {
            return Ok(SurfaceModel::Quadric);
        }
        lower
            .strip_prefix('s')
            .and_then(|d| d.parse::<i64>().ok())
            .ok_or_else(|| Error::Parse {
                token: s.to_string(),
                reason: "expected S1..S9 or quadric".to_string(),
            })
            .and_then(SurfaceModel::of_degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(n: i64) -> SurfaceModel {
        SurfaceModel::of_degree(n).unwrap()
    }

    fn cls(model: SurfaceModel, text: &str) -> DivisorClass {
        DivisorClass::parse(model, text).unwrap()
    }

    #[test]
    fn hyperplane_squares_to_one() {
        let l = s(3).hyperplane().unwrap();
        assert_eq!(l.intersect(&l).unwrap(), 1);
    }

    #[test]
    fn canonical_squares_to_degree() {
        for r in 0..=8 {
            let m = SurfaceModel::blow_up(r).unwrap();
            let k = m.canonical();
            assert_eq!(k.self_intersection(), m.degree());
        }
        let k = SurfaceModel::Quadric.canonical();
        assert_eq!(k.coeffs(), &[-2, -2]);
        assert_eq!(k.self_intersection(), 8);
        assert_eq!(s(3).canonical().to_string(), "-3;-1,-1,-1,-1,-1,-1");
    }

    #[test]
    fn cubic_family_misses_e6() {
        let e6 = s(3).exceptional(6).unwrap();
        assert_eq!(e6.to_string(), "0;0,0,0,0,0,-1");
        for lambda in 0..5 {
            let c = cls(s(3), &format!("{};{},1,1,1,1,0", lambda + 6, lambda + 1));
            assert_eq!(c.intersect(&e6).unwrap(), 0);
            assert_eq!(c.intersect(&cls(s(3), "0;0,0,0,0,0,1")).unwrap(), 0);
        }
    }

    #[test]
    fn model_mismatch_is_an_error() {
        let a = s(3).canonical();
        let b = s(4).canonical();
        assert!(matches!(a.intersect(&b), Err(Error::ModelMismatch(..))));
    }

    #[test]
    fn euler_characteristic_examples() {
        assert_eq!(s(3).zero().euler_char(), 1);
        assert_eq!(s(3).anticanonical().euler_char(), 4);
        // chi(-m q) = 1 - m for a conic q
        let q = cls(s(5), "1;1,0,0,0");
        for m in 0..6 {
            assert_eq!((-(m as i128) * q).euler_char(), 1 - m as i128);
        }
        let q = cls(SurfaceModel::Quadric, "1,0");
        assert_eq!((-3 * q).euler_char(), -2);
    }

    #[test]
    fn degree_and_genus_of_named_classes() {
        let e1 = s(3).exceptional(1).unwrap();
        assert_eq!(e1.degree(), 1);
        for n in 1..=7 {
            let m = s(n);
            let c = -2 * m.canonical() + 2 * m.exceptional(1).unwrap();
            assert_eq!(c.degree(), 2 * n as i128 + 2);
            assert_eq!(c.arithmetic_genus(), n as i128 + 2);
        }
        for lambda in 0..20i128 {
            let c = cls(s(3), &format!("{};{},1,1,1,1,0", lambda + 6, lambda + 1));
            assert_eq!(c.degree(), 2 * lambda + 13);
            assert_eq!(c.arithmetic_genus(), 4 * lambda + 10);
            assert_eq!(c.arithmetic_genus(), 2 * c.degree() - 16);
        }
        let q = cls(s(3), "1;1,0,0,0,0,0");
        assert_eq!(q.arithmetic_genus(), 0);
        let c44 = cls(SurfaceModel::Quadric, "4,4");
        assert_eq!((c44.degree(), c44.arithmetic_genus()), (16, 9));
    }

    #[test]
    fn serre_dual_examples() {
        let k = s(3).canonical();
        assert!(k.serre_dual().is_zero());
        assert_eq!(s(3).zero().serre_dual(), k);
    }

    #[test]
    fn parse_errors_name_the_token() {
        let err = DivisorClass::parse(s(3), "7;2,x,1,1,1,0").unwrap_err();
        assert!(err.to_string().contains("`x`"));
        assert!(DivisorClass::parse(s(3), "7;2,1").is_err());
        assert!(DivisorClass::parse(SurfaceModel::Quadric, "4;4").is_err());
        assert_eq!(cls(s(9), "3").coeffs(), &[3]);
        assert_eq!(cls(s(9), "3;").coeffs(), &[3]);
    }

    #[test]
    fn display_round_trips() {
        for text in ["7;2,1,1,1,1,0", "-3;-1,-1", "0;"] {
            let m = s(9 - text.matches(',').count() as i64 - if text.ends_with(';') { 0 } else { 1 });
            assert_eq!(cls(m, text).to_string(), text);
        }
        assert_eq!(cls(SurfaceModel::Quadric, "4,-4").to_string(), "4,-4");
    }

    #[test]
    fn pull_back_pads_with_zeros() {
        let d = cls(s(7), "2;1,0");
        let p = d.pull_back(3).unwrap();
        assert_eq!(p.model(), s(4));
        assert_eq!(p.to_string(), "2;1,0,0,0,0");
        assert!(d.pull_back(7).is_err());
    }

    fn class_strategy(r: u8, bound: i128) -> impl Strategy<Value = DivisorClass> {
        let model = SurfaceModel::blow_up(r).unwrap();
        proptest::collection::vec(-bound..=bound, r as usize + 1)
            .prop_map(move |v| DivisorClass::new(model, &v).unwrap())
    }

    proptest! {
        #[test]
        fn pairing_is_symmetric_and_bilinear(
            (a, b, c) in (0u8..=8).prop_flat_map(|r| (
                class_strategy(r, 1_000_000),
                class_strategy(r, 1_000_000),
                class_strategy(r, 1_000_000),
            )),
            x in -50i128..50,
        ) {
            prop_assert_eq!(a.dot(&b), b.dot(&a));
            prop_assert_eq!((a + b).dot(&c), a.dot(&c) + b.dot(&c));
            prop_assert_eq!((x * a).dot(&c), x * a.dot(&c));
        }

        #[test]
        fn riemann_roch_is_serre_symmetric(d in (0u8..=8).prop_flat_map(|r| class_strategy(r, 10_000))) {
            prop_assert_eq!(d.euler_char(), d.serre_dual().euler_char());
            prop_assert_eq!(d.serre_dual().serre_dual(), d);
        }

        #[test]
        fn degree_linear_and_genus_additive(
            (a, b) in (0u8..=8).prop_flat_map(|r| (class_strategy(r, 1000), class_strategy(r, 1000))),
        ) {
            prop_assert_eq!((a + b).degree(), a.degree() + b.degree());
            prop_assert_eq!(
                (a + b).arithmetic_genus(),
                a.arithmetic_genus() + b.arithmetic_genus() + a.dot(&b) - 1
            );
        }

        #[test]
        fn quadric_symmetries(p in -1000i128..1000, q in -1000i128..1000) {
            let d = DivisorClass::new(SurfaceModel::Quadric, &[p, q]).unwrap();
            prop_assert_eq!(d.euler_char(), (p + 1) * (q + 1));
            prop_assert_eq!(d.euler_char(), d.serre_dual().euler_char());
        }
    }
}

//! The ambient del Pezzo threefold `V` of degree `n`, its hyperplane section
//! model, and which lines of the section are good (trivial normal bundle in
//! `V`) or bad.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{enumerate_lines, LineClass};
use crate::lattice::{DivisorClass, SurfaceModel};

/// Splitting type `(k, -k)` of the normal bundle of a bad line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BadType {
    #[serde(rename = "(1,-1)")]
    OneMinusOne,
    #[serde(rename = "(2,-2)")]
    TwoMinusTwo,
    #[serde(rename = "(3,-3)")]
    ThreeMinusThree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LineQuality {
    Good,
    /// The splitting type is often unknown; the lattice cannot see it.
    Bad(Option<BadType>),
}

impl LineQuality {
    pub fn is_good(self) -> bool {
        self == LineQuality::Good
    }
}

impl fmt::Display for LineQuality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineQuality::Good => f.write_str("good"),
            LineQuality::Bad(None) => f.write_str("bad"),
            LineQuality::Bad(Some(BadType::OneMinusOne)) => f.write_str("bad(1,-1)"),
            LineQuality::Bad(Some(BadType::TwoMinusTwo)) => f.write_str("bad(2,-2)"),
            LineQuality::Bad(Some(BadType::ThreeMinusThree)) => f.write_str("bad(3,-3)"),
        }
    }
}

impl FromStr for LineQuality {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "good" => LineQuality::Good,
            "bad" => LineQuality::Bad(None),
            "bad(1,-1)" => LineQuality::Bad(Some(BadType::OneMinusOne)),
            "bad(2,-2)" => LineQuality::Bad(Some(BadType::TwoMinusTwo)),
            "bad(3,-3)" => LineQuality::Bad(Some(BadType::ThreeMinusThree)),
            other => {
                return Err(Error::Parse {
                    token: other.to_string(),
                    reason: "line quality must be good, bad, bad(1,-1), bad(2,-2) or bad(3,-3)"
                        .to_string(),
                })
            }
        })
    }
}

impl Serialize for LineQuality {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QualityPolicy {
    /// `S` is a general member of `|H|`: every line is good, except on `V_7`
    /// where the line `l - e1 - e2` lies in the exceptional plane and is bad.
    GeneralSection,
    /// Explicit assignments; unlisted lines fall back to `GeneralSection`.
    Explicit(BTreeMap<LineClass, LineQuality>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreefoldContext {
    n: i128,
    surface: SurfaceModel,
    policy: QualityPolicy,
}

impl ThreefoldContext {
    /// Degree `n` threefold with a general hyperplane section.
    pub fn general(n: i64) -> Result<Self> {
        let surface = if n == 8 {
            SurfaceModel::Quadric
        } else {
            SurfaceModel::of_degree(n).map_err(|e| Error::InvalidContext(e.to_string()))?
        };
        Self::new(n, surface, QualityPolicy::GeneralSection)
    }

    pub fn new(n: i64, surface: SurfaceModel, policy: QualityPolicy) -> Result<Self> {
        if !(1..=8).contains(&n) {
            return Err(Error::InvalidContext(format!(
                "del Pezzo threefolds have degree 1..8, got {n}"
            )));
        }
        let n = n as i128;
        if surface.degree() != n {
            return Err(Error::InvalidContext(format!(
                "a hyperplane section of a degree {n} threefold has degree {n}, but {} has degree {}",
                surface.label(),
                surface.degree()
            )));
        }
        if n == 8 && surface != SurfaceModel::Quadric {
            return Err(Error::InvalidContext(
                "V8 contains no lines, so its hyperplane sections are quadrics".to_string(),
            ));
        }
        if let QualityPolicy::Explicit(map) = &policy {
            for (line, quality) in map {
                if line.class().model() != surface {
                    return Err(Error::InvalidContext(format!(
                        "line {} is not on {}",
                        line.class(),
                        surface.label()
                    )));
                }
                match quality {
                    LineQuality::Bad(Some(BadType::TwoMinusTwo)) if n > 2 => {
                        return Err(Error::InvalidContext(format!(
                            "lines of type (2,-2) only occur for n <= 2 (line {})",
                            line.class()
                        )))
                    }
                    LineQuality::Bad(Some(BadType::ThreeMinusThree)) if n != 1 => {
                        return Err(Error::InvalidContext(format!(
                            "lines of type (3,-3) only occur for n = 1 (line {})",
                            line.class()
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(Self { n, surface, policy })
    }

    /// Reads a JSON object mapping class strings to qualities, e.g.
    /// `{"1;1,1": "bad", "0;-1,0": "good"}`. Every key must be a line.
    pub fn parse_quality_map(surface: SurfaceModel, json: &str) -> Result<QualityPolicy> {
        let raw: BTreeMap<String, String> =
            serde_json::from_str(json).map_err(|e| Error::Parse {
                token: json.chars().take(40).collect(),
                reason: format!("quality file must be a JSON object of strings: {e}"),
            })?;
        let lines = enumerate_lines(surface);
        let mut map = BTreeMap::new();
        for (key, value) in raw {
            let cls = DivisorClass::parse(surface, &key)?;
            let line = lines
                .iter()
                .find(|l| *l.class() == cls)
                .ok_or_else(|| Error::InvalidContext(format!("{key} is not a line on {}", surface.label())))?;
            map.insert(*line, value.parse()?);
        }
        Ok(QualityPolicy::Explicit(map))
    }

    pub fn degree(&self) -> i128 {
        self.n
    }

    pub fn surface(&self) -> SurfaceModel {
        self.surface
    }

    pub fn policy(&self) -> &QualityPolicy {
        &self.policy
    }

    pub fn quality(&self, line: &LineClass) -> LineQuality {
        if let QualityPolicy::Explicit(map) = &self.policy {
            if let Some(q) = map.get(line) {
                return *q;
            }
        }
        if self.n == 7 && Some(*line.class()) == exceptional_plane_line(self.surface) {
            LineQuality::Bad(Some(BadType::OneMinusOne))
        } else {
            LineQuality::Good
        }
    }
}

/// `l - e1 - e2` on `S_7`, the trace of the exceptional plane of
/// `V_7 = Bl_p P^3`.
pub fn exceptional_plane_line(surface: SurfaceModel) -> Option<DivisorClass> {
    (surface == SurfaceModel::BlowUpP2(2)).then(|| DivisorClass::from_slice(surface, &[1, 1, 1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn general_policy_on_v7() {
        let ctx = ThreefoldContext::general(7).unwrap();
        let q: Vec<_> = enumerate_lines(ctx.surface())
            .iter()
            .map(|l| (l.class().to_string(), ctx.quality(l)))
            .collect();
        assert_eq!(
            q,
            vec![
                ("0;-1,0".to_string(), LineQuality::Good),
                ("0;0,-1".to_string(), LineQuality::Good),
                ("1;1,1".to_string(), LineQuality::Bad(Some(BadType::OneMinusOne))),
            ]
        );
    }

    #[test]
    fn general_policy_elsewhere_is_all_good() {
        for n in 1..=6 {
            let ctx = ThreefoldContext::general(n).unwrap();
            assert!(enumerate_lines(ctx.surface())
                .iter()
                .all(|l| ctx.quality(l).is_good()));
        }
    }

    #[test]
    fn degree_eight_needs_the_quadric() {
        assert_eq!(ThreefoldContext::general(8).unwrap().surface(), SurfaceModel::Quadric);
        let s8 = SurfaceModel::of_degree(8).unwrap();
        assert!(ThreefoldContext::new(8, s8, QualityPolicy::GeneralSection).is_err());
        assert!(ThreefoldContext::new(3, SurfaceModel::Quadric, QualityPolicy::GeneralSection).is_err());
        assert!(ThreefoldContext::general(9).is_err());
        assert!(ThreefoldContext::general(0).is_err());
    }

    #[test]
    fn explicit_map_validation() {
        let s3 = SurfaceModel::of_degree(3).unwrap();
        let policy = ThreefoldContext::parse_quality_map(s3, r#"{"0;0,0,0,0,0,-1": "bad"}"#).unwrap();
        let ctx = ThreefoldContext::new(3, s3, policy).unwrap();
        let e6 = LineClass::new(s3.exceptional(6).unwrap()).unwrap();
        let e1 = LineClass::new(s3.exceptional(1).unwrap()).unwrap();
        assert_eq!(ctx.quality(&e6), LineQuality::Bad(None));
        assert_eq!(ctx.quality(&e1), LineQuality::Good);

        assert!(ThreefoldContext::parse_quality_map(s3, r#"{"1;0,0,0,0,0,0": "bad"}"#).is_err());
        assert!(ThreefoldContext::parse_quality_map(s3, r#"{"0;0,0,0,0,0,-1": "meh"}"#).is_err());
        let p22 = ThreefoldContext::parse_quality_map(s3, r#"{"0;0,0,0,0,0,-1": "bad(2,-2)"}"#).unwrap();
        assert!(ThreefoldContext::new(3, s3, p22.clone()).is_err());
        let s2 = SurfaceModel::of_degree(2).unwrap();
        let p22 = ThreefoldContext::parse_quality_map(s2, r#"{"0;0,0,0,0,0,0,-1": "bad(2,-2)"}"#).unwrap();
        assert!(ThreefoldContext::new(2, s2, p22).is_ok());
        let p33 = ThreefoldContext::parse_quality_map(s2, r#"{"0;0,0,0,0,0,0,-1": "bad(3,-3)"}"#).unwrap();
        assert!(ThreefoldContext::new(2, s2, p33).is_err());
    }
}

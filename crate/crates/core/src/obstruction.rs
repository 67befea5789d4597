//! Reduced obstruction map for first-order deformations of `S` in `V` with a
//! simple pole along `E = E_1 + ... + E_m`.
//!
//! Modulo sections without poles, such a deformation is determined by one
//! scalar per component `E_i`. Its obstruction restricted to `E` lives in
//! `H^1(N_{S/V}(3E)|_E)`, and along a good line it is the square of that
//! scalar. Along a bad line the connecting map may vanish; the model then
//! records 0, which downstream code treats as inconclusive rather than as
//! a proof of unobstructedness.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::threefold::LineQuality;

/// `H^0(N_{S/V}(E)) / H^0(N_{S/V})`, one coordinate per line `E_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PoleSectionSpace {
    m: usize,
}

impl PoleSectionSpace {
    pub fn new(m: usize) -> Self {
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoleSection {
    space: PoleSectionSpace,
    coeffs: Vec<BigRational>,
}

impl PoleSection {
    pub fn new(space: PoleSectionSpace, coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() != space.m {
            return Err(Error::LengthMismatch {
                expected: space.m,
                found: coeffs.len(),
            });
        }
        Ok(Self { space, coeffs })
    }

    pub fn from_integers(space: PoleSectionSpace, coeffs: &[i64]) -> Result<Self> {
        Self::new(
            space,
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn space(&self) -> PoleSectionSpace {
        self.space
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn scale(&self, by: &BigRational) -> PoleSection {
        PoleSection {
            space: self.space,
            coeffs: self.coeffs.iter().map(|c| c * by).collect(),
        }
    }

    /// Adds a section of `N_{S/V}` without poles. Such a section has no
    /// coordinates in the quotient, so only the opaque tag changes hands.
    pub fn add_regular(&self, _perturbation: &RegularSection) -> PoleSection {
        self.clone()
    }
}

impl std::ops::Add for &PoleSection {
    type Output = PoleSection;

    fn add(self, rhs: &PoleSection) -> PoleSection {
        assert_eq!(self.space, rhs.space);
        PoleSection {
            space: self.space,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// A global section of `N_{S/V}` (no pole along `E`), identified only by an
/// opaque tag; the reduced model never looks inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RegularSection(pub u64);

/// `ob(v)|_E`, one entry per line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionValue {
    pub components: Vec<BigRational>,
}

impl ObstructionValue {
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Zero::is_zero)
    }
}

/// The diagonal quadratic map `(c_1, ..., c_m) -> (c_1^2, ..., c_m^2)`, with
/// bad-line coordinates sent to 0.
pub fn reduced_obstruction(v: &PoleSection, quality: &[LineQuality]) -> Result<ObstructionValue> {
    if quality.len() != v.coeffs.len() {
        return Err(Error::LengthMismatch {
            expected: v.coeffs.len(),
            found: quality.len(),
        });
    }
    let components = v
        .coeffs
        .iter()
        .zip(quality)
        .map(|(c, q)| match q {
            LineQuality::Good => c * c,
            LineQuality::Bad(_) => BigRational::zero(),
        })
        .collect();
    Ok(ObstructionValue { components })
}

/// Whether the reduced map vanishes only at 0, which holds exactly when
/// every line is good.
pub fn is_injective_reduced_obstruction(space: PoleSectionSpace, quality: &[LineQuality]) -> bool {
    debug_assert_eq!(space.m, quality.len());
    quality.iter().all(|q| q.is_good())
}

/// `ob(v + v')|_E = ob(v)|_E` for every regular `v'`.
pub fn translation_invariance_check(
    v: &PoleSection,
    perturbation: &RegularSection,
    quality: &[LineQuality],
) -> bool {
    match (
        reduced_obstruction(v, quality),
        reduced_obstruction(&v.add_regular(perturbation), quality),
    ) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn good(m: usize) -> Vec<LineQuality> {
        vec![LineQuality::Good; m]
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect()
    }

    #[test]
    fn zero_section_is_unobstructed() {
        let space = PoleSectionSpace::new(4);
        let v = PoleSection::from_integers(space, &[0, 0, 0, 0]).unwrap();
        assert!(reduced_obstruction(&v, &good(4)).unwrap().is_zero());
    }

    #[test]
    fn single_good_line_obstructs() {
        let v = PoleSection::from_integers(PoleSectionSpace::new(1), &[1]).unwrap();
        assert_eq!(reduced_obstruction(&v, &good(1)).unwrap().components, ints(&[1]));
    }

    #[test]
    fn squares_componentwise() {
        let v = PoleSection::from_integers(PoleSectionSpace::new(2), &[2, -3]).unwrap();
        assert_eq!(reduced_obstruction(&v, &good(2)).unwrap().components, ints(&[4, 9]));
    }

    #[test]
    fn bad_line_kills_injectivity() {
        let space = PoleSectionSpace::new(3);
        assert!(is_injective_reduced_obstruction(space, &good(3)));
        let q = [LineQuality::Good, LineQuality::Bad(None), LineQuality::Good];
        assert!(!is_injective_reduced_obstruction(space, &q));
        let unit = PoleSection::from_integers(space, &[0, 1, 0]).unwrap();
        assert!(reduced_obstruction(&unit, &q).unwrap().is_zero());
        assert!(is_injective_reduced_obstruction(PoleSectionSpace::new(0), &[]));
    }

    #[test]
    fn length_mismatch() {
        assert!(PoleSection::from_integers(PoleSectionSpace::new(2), &[1]).is_err());
        let v = PoleSection::from_integers(PoleSectionSpace::new(2), &[1, 1]).unwrap();
        assert!(reduced_obstruction(&v, &good(3)).is_err());
    }

    #[test]
    fn not_additive() {
        let space = PoleSectionSpace::new(1);
        let a = PoleSection::from_integers(space, &[1]).unwrap();
        let sum = &a + &a;
        let ob = |v: &PoleSection| reduced_obstruction(v, &good(1)).unwrap().components;
        assert_ne!(ob(&sum), ints(&[2]));
        assert_eq!(ob(&sum), ints(&[4]));
    }

    #[test]
    fn translation_invariance() {
        let space = PoleSectionSpace::new(3);
        let v = PoleSection::from_integers(space, &[1, -2, 5]).unwrap();
        assert!(translation_invariance_check(&v, &RegularSection(7), &good(3)));
        let zero = PoleSection::from_integers(space, &[0, 0, 0]).unwrap();
        assert!(translation_invariance_check(&zero, &RegularSection(0), &good(3)));
    }
}

//! Residue-class systems over the integers.
//!
//! A system is a finite list of classes `a + nZ`. Membership in a class
//! depends only on `x mod n`, so every cover property of the infinite system
//! is decided over one period (the lcm of the moduli), to which
//! [`ZSystem::to_instance`] reduces it.

use std::fmt;
use std::str::FromStr;

use num::integer::{gcd, lcm};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{AnalysisError, CoverInstance, Provenance};

/// Default cap on the period: carrier enumeration stays desk-scale.
pub const DEFAULT_PERIOD_CAP: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZSystemError {
    #[error("malformed residue class token {token:?} (expected \"a/n\" or \"a mod n\")")]
    MalformedToken { token: String },
    #[error("modulus must be positive, got {0}")]
    NonpositiveModulus(i64),
    #[error("a system needs at least one residue class")]
    Empty,
    #[error("{k} classes exceed the global limit of 64")]
    TooManyClasses { k: usize },
    #[error("period {period} exceeds cap {cap}")]
    PeriodCapExceeded { period: u128, cap: u64 },
}

/// The arithmetic progression `a + nZ`, canonicalized to `0 ≤ a < n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawResidueClass", into = "RawResidueClass")]
pub struct ResidueClass {
    modulus: u64,
    residue: u64,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
struct RawResidueClass {
    a: i64,
    n: i64,
}

impl TryFrom<RawResidueClass> for ResidueClass {
    type Error = ZSystemError;
    fn try_from(raw: RawResidueClass) -> Result<Self, ZSystemError> {
        ResidueClass::new(raw.a, raw.n)
    }
}

impl From<ResidueClass> for RawResidueClass {
    fn from(c: ResidueClass) -> RawResidueClass {
        RawResidueClass {
            a: c.residue as i64,
            n: c.modulus as i64,
        }
    }
}

impl ResidueClass {
    pub fn new(a: i64, n: i64) -> Result<Self, ZSystemError> {
        if n <= 0 {
            return Err(ZSystemError::NonpositiveModulus(n));
        }
        Ok(ResidueClass {
            modulus: n as u64,
            residue: a.rem_euclid(n) as u64,
        })
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn contains(&self, x: i64) -> bool {
        x.rem_euclid(self.modulus as i64) as u64 == self.residue
    }

    fn parse_token(token: &str) -> Result<Self, ZSystemError> {
        let malformed = || ZSystemError::MalformedToken {
            token: token.to_owned(),
        };
        let (a_str, n_str) = if let Some((a, n)) = token.split_once('/') {
            (a, n)
        } else if let Some((a, n)) = token.split_once("mod") {
            (a, n)
        } else {
            return Err(malformed());
        };
        let a: i64 = a_str.trim().parse().map_err(|_| malformed())?;
        let n: i64 = n_str.trim().parse().map_err(|_| malformed())?;
        ResidueClass::new(a, n)
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.residue, self.modulus)
    }
}

/// An ordered finite list of residue classes with its period.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawZSystem", into = "RawZSystem")]
pub struct ZSystem {
    classes: Vec<ResidueClass>,
    period: u64,
}

#[derive(Serialize, Deserialize, Clone)]
struct RawZSystem {
    classes: Vec<ResidueClass>,
}

impl TryFrom<RawZSystem> for ZSystem {
    type Error = ZSystemError;
    fn try_from(raw: RawZSystem) -> Result<Self, ZSystemError> {
        ZSystem::new(raw.classes)
    }
}

impl From<ZSystem> for RawZSystem {
    fn from(zs: ZSystem) -> RawZSystem {
        RawZSystem {
            classes: zs.classes,
        }
    }
}

impl ZSystem {
    pub fn new(classes: Vec<ResidueClass>) -> Result<Self, ZSystemError> {
        Self::with_period_cap(classes, DEFAULT_PERIOD_CAP)
    }

    pub fn with_period_cap(classes: Vec<ResidueClass>, cap: u64) -> Result<Self, ZSystemError> {
        if classes.is_empty() {
            return Err(ZSystemError::Empty);
        }
        if classes.len() > crate::analysis::MAX_MEMBERS {
            return Err(ZSystemError::TooManyClasses { k: classes.len() });
        }
        let mut period: u128 = 1;
        for c in &classes {
            let g = gcd(period, c.modulus as u128);
            period = period / g * c.modulus as u128;
            if period > cap as u128 {
                return Err(ZSystemError::PeriodCapExceeded { period, cap });
            }
        }
        Ok(ZSystem {
            classes,
            period: period as u64,
        })
    }

    /// Parses a comma/whitespace-separated list of `a/n` or `a mod n` tokens.
    pub fn parse(text: &str) -> Result<Self, ZSystemError> {
        Self::parse_with_cap(text, DEFAULT_PERIOD_CAP)
    }

    pub fn parse_with_cap(text: &str, cap: u64) -> Result<Self, ZSystemError> {
        let mut classes = Vec::new();
        for piece in text.split(',') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            if piece.contains("mod") {
                classes.push(ResidueClass::parse_token(piece)?);
            } else {
                for token in piece.split_whitespace() {
                    classes.push(ResidueClass::parse_token(token)?);
                }
            }
        }
        ZSystem::with_period_cap(classes, cap)
    }

    pub fn classes(&self) -> &[ResidueClass] {
        &self.classes
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    /// The lcm of the moduli.
    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn moduli(&self) -> Vec<u64> {
        self.classes.iter().map(|c| c.modulus).collect()
    }

    /// All representatives are 0, i.e. every class is a subgroup `nZ`.
    pub fn all_zero_residues(&self) -> bool {
        self.classes.iter().all(|c| c.residue == 0)
    }

    /// Same classes sorted by (modulus, residue); the canonical form used by
    /// enumeration and dedup.
    #[must_use]
    pub fn canonical(&self) -> ZSystem {
        let mut classes = self.classes.clone();
        classes.sort_unstable();
        ZSystem {
            classes,
            period: self.period,
        }
    }

    /// Reduces the system to one period: carrier `{0, …, period−1}` where
    /// element x stands for the whole class `x + period·Z`.
    pub fn to_instance(&self) -> Result<CoverInstance, AnalysisError> {
        CoverInstance::from_membership_fn(
            self.period as usize,
            self.classes.len(),
            Provenance::ZPeriodic,
            |x, i| (x as u64) % self.classes[i].modulus == self.classes[i].residue,
        )
    }

    /// gcd of two member indices `[Z : n_iZ] = n_i`.
    pub fn pair_index_gcd(&self, i: usize, j: usize) -> u64 {
        gcd(self.classes[i].modulus, self.classes[j].modulus)
    }
}

impl fmt::Display for ZSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (pos, c) in self.classes.iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for ZSystem {
    type Err = ZSystemError;
    fn from_str(s: &str) -> Result<Self, ZSystemError> {
        ZSystem::parse(s)
    }
}

/// lcm helper re-exported for callers working with moduli directly.
pub fn lcm_u64(a: u64, b: u64) -> u64 {
    lcm(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_classic() {
        let zs = ZSystem::parse("0/2,0/3,1/4,5/6,7/12").unwrap();
        assert_eq!(zs.k(), 5);
        assert_eq!(zs.period(), 12);
    }

    #[test]
    fn parse_trivial_and_canonicalization() {
        let zs = ZSystem::parse("0/1").unwrap();
        assert_eq!(zs.k(), 1);
        assert_eq!(zs.period(), 1);
        let c = ResidueClass::parse_token("14/4").unwrap();
        assert_eq!((c.residue(), c.modulus()), (2, 4));
        let c = ResidueClass::parse_token("-1/4").unwrap();
        assert_eq!((c.residue(), c.modulus()), (3, 4));
        let c = ResidueClass::parse_token("5 mod 6").unwrap();
        assert_eq!((c.residue(), c.modulus()), (5, 6));
    }

    #[test]
    fn parse_whitespace_separated() {
        let zs = ZSystem::parse("0/2 1/2").unwrap();
        assert_eq!(zs.k(), 2);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            ZSystem::parse("x/2"),
            Err(ZSystemError::MalformedToken { .. })
        ));
        assert!(matches!(
            ZSystem::parse("1/0"),
            Err(ZSystemError::NonpositiveModulus(0))
        ));
        assert!(matches!(
            ZSystem::parse("1/-2"),
            Err(ZSystemError::NonpositiveModulus(-2))
        ));
        assert!(matches!(ZSystem::parse(""), Err(ZSystemError::Empty)));
        assert!(matches!(
            ZSystem::parse_with_cap("1/7,1/11,1/13", 500),
            Err(ZSystemError::PeriodCapExceeded { .. })
        ));
    }

    #[test]
    fn instance_small() {
        let zs = ZSystem::parse("0/2,0/4,2/4").unwrap();
        let inst = zs.to_instance().unwrap();
        assert_eq!(inst.carrier(), 4);
        assert_eq!(inst.member_elements(0), vec![0, 2]);
        assert_eq!(inst.member_elements(1), vec![0]);
        assert_eq!(inst.member_elements(2), vec![2]);
    }

    #[test]
    fn instance_whole_class() {
        let inst = ZSystem::parse("0/1").unwrap().to_instance().unwrap();
        assert_eq!(inst.carrier(), 1);
        assert_eq!(inst.member_elements(0), vec![0]);
    }

    #[test]
    fn classic_covers_one_period() {
        let inst = ZSystem::parse("0/2,0/3,1/4,5/6,7/12")
            .unwrap()
            .to_instance()
            .unwrap();
        // brute force over the period: every x lies in at least one class
        for x in 0..inst.carrier() {
            assert!(!inst.full_set(x).is_empty(), "x = {x} uncovered");
        }
        assert_eq!(inst.multiplicity(), 1);
    }

    #[test]
    fn density_bound_over_period() {
        // Σ_i period/n_i ≥ m(A)·period
        for text in ["0/2,0/3,1/4,5/6,7/12", "0/2,1/2,0/1", "0/4,1/4"] {
            let zs = ZSystem::parse(text).unwrap();
            let inst = zs.to_instance().unwrap();
            let total: u64 = zs.classes().iter().map(|c| zs.period() / c.modulus()).sum();
            assert!(total >= inst.multiplicity() as u64 * zs.period());
        }
    }

    #[test]
    fn json_roundtrip() {
        let zs = ZSystem::parse("0/2,7/12").unwrap();
        let json = serde_json::to_string(&zs).unwrap();
        assert_eq!(json, r#"{"classes":[{"a":0,"n":2},{"a":7,"n":12}]}"#);
        let back: ZSystem = serde_json::from_str(&json).unwrap();
        assert_eq!(back, zs);
        // non-canonical JSON input is canonicalized on the way in
        let back: ZSystem = serde_json::from_str(r#"{"classes":[{"a":14,"n":4}]}"#).unwrap();
        assert_eq!((back.classes()[0].residue(), back.classes()[0].modulus()), (2, 4));
    }

    proptest! {
        #[test]
        fn display_parse_roundtrip(raw in proptest::collection::vec((0i64..100, 1i64..40), 1..8)) {
            let classes: Vec<ResidueClass> =
                raw.iter().map(|&(a, n)| ResidueClass::new(a, n).unwrap()).collect();
            if let Ok(zs) = ZSystem::new(classes) {
                let reparsed = ZSystem::parse(&zs.to_string()).unwrap();
                prop_assert_eq!(reparsed, zs);
            }
        }

        #[test]
        fn periodicity_of_membership(a in 0i64..50, n in 1i64..50, x in -200i64..200) {
            let c = ResidueClass::new(a, n).unwrap();
            prop_assert_eq!(c.contains(x), c.contains(x + n));
        }
    }
}

//! Cover-property analysis over a finite carrier.
//!
//! A [`CoverInstance`] is the common substrate: a carrier `{0, …, M−1}` with
//! `k` membership sets, stored x-major as the full index set of every carrier
//! element. All predicates (covering multiplicity, m-cover, exact, minimal,
//! regular, partition) are decided here, independent of whether the instance
//! came from a residue-class system or a coset system.

use serde::{Serialize, Serializer};
use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

/// Hard limit on the number of member sets: index subsets are machine words.
pub const MAX_MEMBERS: usize = 64;

/// Default cap on k for the regularity check (it loops over 2^k subsets).
pub const DEFAULT_REGULARITY_CAP: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("a cover instance needs at least one member set")]
    Empty,
    #[error("carrier must be nonempty")]
    EmptyCarrier,
    #[error("{k} member sets exceed the limit of {MAX_MEMBERS}")]
    TooManyMembers { k: usize },
    #[error("member index {i} out of range (k = {k})")]
    MemberOutOfRange { i: usize, k: usize },
    #[error("carrier element {x} out of range (carrier size {carrier})")]
    ElementOutOfRange { x: usize, carrier: usize },
    #[error("regularity check with k = {k} exceeds cap {cap}")]
    RegularityCapExceeded { k: usize, cap: usize },
}

/// Subset of member indices `0..k`, packed into a 64-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexSet(u64);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn full(k: usize) -> IndexSet {
        debug_assert!(k <= MAX_MEMBERS);
        if k == 64 {
            IndexSet(u64::MAX)
        } else {
            IndexSet((1u64 << k) - 1)
        }
    }

    pub fn from_bits(bits: u64) -> IndexSet {
        IndexSet(bits)
    }

    pub fn from_indices(indices: &[usize]) -> IndexSet {
        let mut s = IndexSet::EMPTY;
        for &i in indices {
            s = s.with(i);
        }
        s
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1 << i) != 0
    }

    #[must_use]
    pub fn with(self, i: usize) -> IndexSet {
        debug_assert!(i < MAX_MEMBERS);
        IndexSet(self.0 | (1 << i))
    }

    #[must_use]
    pub fn without(self, i: usize) -> IndexSet {
        IndexSet(self.0 & !(1 << i))
    }

    #[must_use]
    pub fn intersect(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 & other.0)
    }

    /// Complement within `[0, k)`.
    #[must_use]
    pub fn complement(self, k: usize) -> IndexSet {
        IndexSet(!self.0 & IndexSet::full(k).0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: IndexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (pos, i) in self.iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// Where a cover instance came from. For `ZPeriodic` the carrier is one full
/// period and each element stands for a whole residue class modulo it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    ZPeriodic,
    Group,
}

/// Finite carrier with k membership sets.
#[derive(Debug, Clone)]
pub struct CoverInstance {
    k: usize,
    carrier: usize,
    /// Full index set of each carrier element, x-major.
    full_sets: Vec<IndexSet>,
    provenance: Provenance,
}

impl CoverInstance {
    /// Builds an instance from the k member sets given as element lists.
    pub fn from_member_sets(
        carrier: usize,
        members: &[Vec<usize>],
        provenance: Provenance,
    ) -> Result<Self, AnalysisError> {
        let k = members.len();
        if k == 0 {
            return Err(AnalysisError::Empty);
        }
        if k > MAX_MEMBERS {
            return Err(AnalysisError::TooManyMembers { k });
        }
        if carrier == 0 {
            return Err(AnalysisError::EmptyCarrier);
        }
        let mut full_sets = vec![IndexSet::EMPTY; carrier];
        for (i, member) in members.iter().enumerate() {
            for &x in member {
                if x >= carrier {
                    return Err(AnalysisError::ElementOutOfRange { x, carrier });
                }
                full_sets[x] = full_sets[x].with(i);
            }
        }
        Ok(CoverInstance {
            k,
            carrier,
            full_sets,
            provenance,
        })
    }

    /// Builds an instance from a membership predicate over (element, member).
    pub fn from_membership_fn(
        carrier: usize,
        k: usize,
        provenance: Provenance,
        contains: impl Fn(usize, usize) -> bool,
    ) -> Result<Self, AnalysisError> {
        if k == 0 {
            return Err(AnalysisError::Empty);
        }
        if k > MAX_MEMBERS {
            return Err(AnalysisError::TooManyMembers { k });
        }
        if carrier == 0 {
            return Err(AnalysisError::EmptyCarrier);
        }
        let full_sets = (0..carrier)
            .map(|x| {
                let mut s = IndexSet::EMPTY;
                for i in 0..k {
                    if contains(x, i) {
                        s = s.with(i);
                    }
                }
                s
            })
            .collect();
        Ok(CoverInstance {
            k,
            carrier,
            full_sets,
            provenance,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// `[1,k]*(x)`: the set of all member indices containing x.
    pub fn full_set(&self, x: usize) -> IndexSet {
        self.full_sets[x]
    }

    pub fn member_contains(&self, i: usize, x: usize) -> bool {
        self.full_sets[x].contains(i)
    }

    pub fn member_size(&self, i: usize) -> usize {
        self.full_sets.iter().filter(|s| s.contains(i)).count()
    }

    pub fn member_elements(&self, i: usize) -> Vec<usize> {
        (0..self.carrier)
            .filter(|&x| self.full_sets[x].contains(i))
            .collect()
    }

    /// `I*(x) = {i ∈ I : x ∈ member i}`.
    pub fn index_map(&self, i_set: IndexSet, x: usize) -> Result<IndexSet, AnalysisError> {
        if x >= self.carrier {
            return Err(AnalysisError::ElementOutOfRange {
                x,
                carrier: self.carrier,
            });
        }
        Ok(i_set.intersect(self.full_sets[x]))
    }

    /// Covering multiplicity: the minimum over the carrier of `|[1,k]*(x)|`.
    pub fn multiplicity(&self) -> usize {
        self.full_sets.iter().map(|s| s.len()).min().unwrap_or(0)
    }

    pub fn is_m_cover(&self, m: usize) -> bool {
        assert!(m >= 1, "m-cover is defined for m >= 1");
        self.multiplicity() >= m
    }

    pub fn is_exact_m_cover(&self, m: usize) -> bool {
        assert!(m >= 1, "exact m-cover is defined for m >= 1");
        self.full_sets.iter().all(|s| s.len() == m)
    }

    /// Minimal (irredundant) m-cover: an m-cover such that dropping any
    /// single member breaks the m-cover property. Single deletion suffices
    /// because coverage counts are monotone in the member set; the full
    /// subsystem check is kept as [`CoverInstance::is_minimal_m_cover_exhaustive`].
    pub fn is_minimal_m_cover(&self, m: usize) -> bool {
        if !self.is_m_cover(m) {
            return false;
        }
        // member i is essential iff some x at multiplicity exactly m lies in it
        let mut essential = IndexSet::EMPTY;
        for s in &self.full_sets {
            if s.len() == m {
                essential = IndexSet(essential.0 | s.0);
            }
        }
        essential == IndexSet::full(self.k)
    }

    /// Oracle form of minimality: no proper subsystem is an m-cover,
    /// checked over all 2^k subsets.
    pub fn is_minimal_m_cover_exhaustive(&self, m: usize) -> Result<bool, AnalysisError> {
        if self.k > DEFAULT_REGULARITY_CAP {
            return Err(AnalysisError::RegularityCapExceeded {
                k: self.k,
                cap: DEFAULT_REGULARITY_CAP,
            });
        }
        if !self.is_m_cover(m) {
            return Ok(false);
        }
        let distinct = self.distinct_full_sets();
        let full = IndexSet::full(self.k).bits();
        for sub in 0..full {
            // every proper subsystem must fail to be an m-cover
            let is_cover = distinct
                .iter()
                .all(|s| (s.bits() & sub).count_ones() as usize >= m);
            if is_cover {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exact 1-cover.
    pub fn is_partition(&self) -> bool {
        self.is_exact_m_cover(1)
    }

    /// Regularity per the index-map definition: no nonempty proper subset I
    /// of the member indices has its image `{I*(x)}` contained in the full
    /// image `{[1,k]*(x)}`. With `require_cover`, additionally demands the
    /// system covers the carrier.
    pub fn is_regular(&self, require_cover: bool) -> Result<bool, AnalysisError> {
        self.is_regular_with_cap(require_cover, DEFAULT_REGULARITY_CAP)
    }

    pub fn is_regular_with_cap(
        &self,
        require_cover: bool,
        cap: usize,
    ) -> Result<bool, AnalysisError> {
        if self.k > cap || self.k > MAX_MEMBERS - 1 {
            return Err(AnalysisError::RegularityCapExceeded { k: self.k, cap });
        }
        if require_cover && self.multiplicity() == 0 {
            return Ok(false);
        }
        let distinct = self.distinct_full_sets();
        let image: HashSet<u64> = distinct.iter().map(|s| s.bits()).collect();
        let full = IndexSet::full(self.k).bits();
        for i_bits in 1..full {
            // regular iff some x has I*(x) outside the full image
            let escaped = distinct.iter().any(|s| !image.contains(&(s.bits() & i_bits)));
            if !escaped {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Sorted, deduplicated list of the full index sets over the carrier.
    pub fn distinct_full_sets(&self) -> Vec<IndexSet> {
        let mut v = self.full_sets.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Property report for the given query multiplicity.
    pub fn report(&self, m: usize) -> PropertyReport {
        let regular = self.is_regular(false).ok();
        let regular_cover = self.is_regular(true).ok();
        PropertyReport {
            k: self.k,
            carrier: self.carrier,
            multiplicity: self.multiplicity(),
            m,
            m_cover: self.is_m_cover(m),
            exact_m_cover: self.is_exact_m_cover(m),
            minimal_m_cover: self.is_minimal_m_cover(m),
            regular,
            regular_cover,
            partition: self.is_partition(),
        }
    }
}

/// Answers of the standard property battery; the regularity fields are
/// `None` when k exceeds the regularity cap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub k: usize,
    pub carrier: usize,
    pub multiplicity: usize,
    pub m: usize,
    pub m_cover: bool,
    pub exact_m_cover: bool,
    pub minimal_m_cover: bool,
    pub regular: Option<bool>,
    pub regular_cover: Option<bool>,
    pub partition: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_instance(classes: &[(u64, u64)], period: usize) -> CoverInstance {
        CoverInstance::from_membership_fn(period, classes.len(), Provenance::ZPeriodic, |x, i| {
            (x as u64) % classes[i].1 == classes[i].0
        })
        .unwrap()
    }

    /// {2Z, 3Z, 1+4Z, 5+6Z, 7+12Z} over one period.
    fn classic() -> CoverInstance {
        z_instance(&[(0, 2), (0, 3), (1, 4), (5, 6), (7, 12)], 12)
    }

    /// {2Z, 4Z, 2+4Z} over one period.
    fn regular_noncover() -> CoverInstance {
        z_instance(&[(0, 2), (0, 4), (2, 4)], 4)
    }

    #[test]
    fn index_map_examples() {
        let inst = classic();
        let full = IndexSet::full(5);
        assert_eq!(inst.index_map(full, 0).unwrap().to_vec(), vec![0, 1]);
        assert_eq!(inst.index_map(IndexSet::EMPTY, 0).unwrap(), IndexSet::EMPTY);
        let nc = regular_noncover();
        assert!(nc.index_map(IndexSet::full(3), 1).unwrap().is_empty());
        assert!(matches!(
            inst.index_map(full, 12),
            Err(AnalysisError::ElementOutOfRange { .. })
        ));
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(classic().multiplicity(), 1);
        assert_eq!(regular_noncover().multiplicity(), 0);
        let doubled = z_instance(&[(0, 1), (0, 1)], 1);
        assert!(doubled.multiplicity() >= 2);
    }

    #[test]
    fn m_cover_examples() {
        let c = classic();
        assert!(c.is_m_cover(1));
        assert!(!c.is_exact_m_cover(1)); // x = 0 is covered twice
        assert!(!regular_noncover().is_m_cover(1));
    }

    #[test]
    fn minimality_examples() {
        assert!(classic().is_minimal_m_cover(1));
        let redundant = z_instance(&[(0, 1), (0, 2)], 2);
        assert!(!redundant.is_minimal_m_cover(1));
        // an exact m-cover is always minimal
        let partition = z_instance(&[(0, 2), (1, 2)], 2);
        assert!(partition.is_exact_m_cover(1));
        assert!(partition.is_minimal_m_cover(1));
    }

    #[test]
    fn minimality_oracle_agrees() {
        for inst in [
            classic(),
            regular_noncover(),
            z_instance(&[(0, 1), (0, 2)], 2),
            z_instance(&[(0, 2), (1, 4), (3, 4)], 4),
            z_instance(&[(0, 2), (0, 3), (0, 4)], 12),
        ] {
            for m in 1..=3 {
                assert_eq!(
                    inst.is_minimal_m_cover(m),
                    inst.is_minimal_m_cover_exhaustive(m).unwrap(),
                    "minimality mismatch at m={m}"
                );
            }
        }
    }

    #[test]
    fn regularity_examples() {
        let nc = regular_noncover();
        assert!(nc.is_regular(false).unwrap());
        assert!(!nc.is_regular(true).unwrap());
        assert!(classic().is_regular(true).unwrap());
        // single whole-group member: vacuously a regular cover
        let whole = z_instance(&[(0, 1)], 1);
        assert!(whole.is_regular(true).unwrap());
        assert!(whole.is_partition());
    }

    #[test]
    fn partition_examples() {
        assert!(!classic().is_partition());
        assert!(z_instance(&[(0, 2), (1, 2)], 2).is_partition());
    }

    #[test]
    fn minimal_cover_is_regular_cover() {
        for inst in [classic(), z_instance(&[(0, 2), (1, 4), (3, 4)], 4)] {
            assert!(inst.is_minimal_m_cover(1));
            assert!(inst.is_regular(true).unwrap());
        }
    }

    #[test]
    fn shift_invariance_of_multiplicity() {
        // membership over any window of one period length agrees
        let classes: &[(u64, u64)] = &[(0, 2), (0, 3), (1, 4), (5, 6), (7, 12)];
        let base = classic();
        for offset in 0..36u64 {
            let shifted = CoverInstance::from_membership_fn(
                12,
                classes.len(),
                Provenance::ZPeriodic,
                |x, i| (x as u64 + offset) % classes[i].1 == classes[i].0,
            )
            .unwrap();
            assert_eq!(shifted.multiplicity(), base.multiplicity());
        }
    }

    #[test]
    fn density_counting_identity() {
        // Σ_i |member i| equals Σ_x |full(x)|, and min ≤ average gives
        // Σ_i period/n_i ≥ m(A)·period.
        let inst = classic();
        let total: usize = (0..inst.k()).map(|i| inst.member_size(i)).sum();
        let by_x: usize = (0..inst.carrier()).map(|x| inst.full_set(x).len()).sum();
        assert_eq!(total, by_x);
        assert!(total >= inst.multiplicity() * inst.carrier());
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            CoverInstance::from_member_sets(4, &[], Provenance::ZPeriodic),
            Err(AnalysisError::Empty)
        ));
        assert!(matches!(
            CoverInstance::from_member_sets(0, &[vec![]], Provenance::ZPeriodic),
            Err(AnalysisError::EmptyCarrier)
        ));
        assert!(matches!(
            CoverInstance::from_member_sets(2, &[vec![5]], Provenance::ZPeriodic),
            Err(AnalysisError::ElementOutOfRange { .. })
        ));
    }

    #[test]
    fn index_set_basics() {
        let s = IndexSet::from_indices(&[0, 2, 5]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(2));
        assert!(!s.contains(1));
        assert_eq!(s.complement(6).to_vec(), vec![1, 3, 4]);
        assert_eq!(format!("{s:?}"), "{0,2,5}");
        assert_eq!(IndexSet::full(3).bits(), 0b111);
    }
}

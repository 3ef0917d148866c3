//! Explicit finite groups via Cayley tables, with subgroup machinery:
//! generation, cosets, normality, normal core, subnormality, Hall property,
//! solvability, perfectness, composition series and the depth function.

mod builtins;
mod series;

pub(crate) use builtins::symmetric_permutations;
pub use series::{CompositionSeries, TieBreak};

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{AnalysisError, CoverInstance, Provenance};
use crate::zsystems::ZSystem;

/// Default cap on the order of constructed groups.
pub const DEFAULT_ORDER_CAP: usize = 360;

/// Default cap on the order for full subgroup-lattice enumeration.
pub const DEFAULT_LATTICE_CAP: usize = 192;

/// Table sizes up to this get the full associativity triple loop; larger
/// user-supplied tables are sampled.
const FULL_ASSOC_CHECK_MAX: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("unknown group spec {0:?} (expected Zn, Sk, Dn, Q8 or 'x'-joined products)")]
    UnknownSpec(String),
    #[error("group order {order} exceeds cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("subgroup lattice unavailable: order {order} exceeds cap {cap}")]
    LatticeCapExceeded { order: usize, cap: usize },
    #[error("element index {x} out of range for group of order {order}")]
    ElementOutOfRange { x: usize, order: usize },
    #[error("multiplication table is not a group: {0}")]
    InvalidTable(String),
    #[error("element set is not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroup is not subnormal")]
    NotSubnormal,
    #[error("subgroup does not contain the required base subgroup")]
    DoesNotContain,
    #[error("group is abelian: no pairwise non-commuting set of size >= 2 exists")]
    Abelian,
    #[error("a coset system needs at least one coset")]
    EmptySystem,
    #[error("{k} cosets exceed the global limit of 64")]
    TooManyCosets { k: usize },
    #[error("expected {expected} representatives, got {got}")]
    RepCountMismatch { expected: usize, got: usize },
}

/// Set of element indices of one group, as a fixed-width bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElemSet {
    universe: usize,
    words: Vec<u64>,
}

impl ElemSet {
    pub fn empty(universe: usize) -> Self {
        ElemSet {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = ElemSet::empty(universe);
        for x in 0..universe {
            s.insert(x);
        }
        s
    }

    pub fn collect_from(universe: usize, iter: impl IntoIterator<Item = usize>) -> Self {
        let mut s = ElemSet::empty(universe);
        for x in iter {
            s.insert(x);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, x: usize) {
        debug_assert!(x < self.universe);
        self.words[x / 64] |= 1 << (x % 64);
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.universe && self.words[x / 64] & (1 << (x % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersect_with(&mut self, other: &ElemSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &ElemSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    #[must_use]
    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    #[must_use]
    pub fn union(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn is_disjoint(&self, other: &ElemSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset_of(&self, other: &ElemSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn first(&self) -> Option<usize> {
        for (w, &word) in self.words.iter().enumerate() {
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let i = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(w * 64 + i)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl PartialOrd for ElemSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ElemSet {
    /// Lexicographic on the sorted element lists; a proper prefix sorts
    /// before its extension.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (pos, x) in self.iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// A subgroup, stored as its element set. Validity (closure, identity) is
/// guaranteed by the constructors on [`FiniteGroup`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elems: ElemSet,
}

impl Subgroup {
    /// Wraps a set known to be closed (e.g. an intersection of subgroups).
    pub(crate) fn from_elem_set_unchecked(elems: ElemSet) -> Subgroup {
        Subgroup { elems }
    }

    pub fn elements(&self) -> &ElemSet {
        &self.elems
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elems.contains(x)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.elems.cmp(&other.elems))
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.elems)
    }
}

/// Explicit finite group: an order-n Cayley table over element indices
/// `0..n`, with the identity canonicalized to index 0.
pub struct FiniteGroup {
    label: String,
    order: usize,
    table: Vec<u16>,
    inverses: Vec<u16>,
    lattice: OnceLock<Result<Lattice, GroupError>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("label", &self.label)
            .field("order", &self.order)
            .finish()
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Builds a group from spec strings `Zn`, `Sk`, `Dn`, `Q8` and
    /// 'x'-joined direct products of these, e.g. `"Z2xZ2"` or `"S3xZ4"`.
    pub fn parse_spec(spec: &str) -> Result<FiniteGroup, GroupError> {
        builtins::parse_spec(spec, DEFAULT_ORDER_CAP)
    }

    pub fn parse_spec_with_cap(spec: &str, cap: usize) -> Result<FiniteGroup, GroupError> {
        builtins::parse_spec(spec, cap)
    }

    /// Validates and wraps a user-supplied multiplication table. The identity
    /// must sit at index 0; associativity is checked by the full triple loop
    /// up to order 128 and by seeded random sampling above that.
    pub fn from_table(label: &str, rows: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        if n > u16::MAX as usize {
            return Err(GroupError::OrderCapExceeded {
                order: n,
                cap: u16::MAX as usize,
            });
        }
        let mut table = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(GroupError::InvalidTable("table is not square".into()));
            }
            for &v in row {
                if v >= n {
                    return Err(GroupError::InvalidTable(format!(
                        "entry {v} out of range for order {n}"
                    )));
                }
                table.push(v as u16);
            }
        }
        Self::from_parts(label.to_owned(), n, table, true)
    }

    pub(crate) fn from_parts(
        label: String,
        order: usize,
        table: Vec<u16>,
        validate: bool,
    ) -> Result<FiniteGroup, GroupError> {
        let n = order;
        debug_assert_eq!(table.len(), n * n);
        if validate {
            for j in 0..n {
                if table[j] as usize != j || table[j * n] as usize != j {
                    return Err(GroupError::InvalidTable(
                        "element 0 is not a two-sided identity".into(),
                    ));
                }
            }
            // rows and columns must be permutations
            for a in 0..n {
                let mut row_seen = vec![false; n];
                let mut col_seen = vec![false; n];
                for b in 0..n {
                    let r = table[a * n + b] as usize;
                    let c = table[b * n + a] as usize;
                    if row_seen[r] || col_seen[c] {
                        return Err(GroupError::InvalidTable(format!(
                            "row or column {a} is not a permutation"
                        )));
                    }
                    row_seen[r] = true;
                    col_seen[c] = true;
                }
            }
            check_associativity(n, &table)?;
        }
        let mut inverses = vec![0u16; n];
        for a in 0..n {
            let mut found = false;
            for b in 0..n {
                if table[a * n + b] == 0 && table[b * n + a] == 0 {
                    inverses[a] = b as u16;
                    found = true;
                    break;
                }
            }
            if !found {
                return Err(GroupError::InvalidTable(format!(
                    "element {a} has no two-sided inverse"
                )));
            }
        }
        Ok(FiniteGroup {
            label,
            order,
            table,
            inverses,
            lattice: OnceLock::new(),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut t = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            t += 1;
        }
        t
    }

    /// x^e by repeated multiplication, reducing e modulo the element order.
    pub fn power(&self, x: usize, e: u64) -> usize {
        let ord = self.element_order(x) as u64;
        let mut y = 0;
        for _ in 0..(e % ord) {
            y = self.mul(y, x);
        }
        y
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order).any(|x| self.element_order(x) == self.order)
    }

    /// Smallest subgroup containing the generators (closure under products;
    /// inverses come for free in a finite group).
    pub fn subgroup_generated(&self, gens: &[usize]) -> Result<Subgroup, GroupError> {
        for &x in gens {
            if x >= self.order {
                return Err(GroupError::ElementOutOfRange {
                    x,
                    order: self.order,
                });
            }
        }
        Ok(self.closure_of(gens.iter().copied()))
    }

    pub(crate) fn closure_of(&self, gens: impl IntoIterator<Item = usize>) -> Subgroup {
        let gens: Vec<usize> = {
            let mut v: Vec<usize> = gens.into_iter().collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let mut elems = ElemSet::empty(self.order);
        elems.insert(0);
        let mut queue = vec![0usize];
        while let Some(g) = queue.pop() {
            for &h in &gens {
                let p = self.mul(g, h);
                if !elems.contains(p) {
                    elems.insert(p);
                    queue.push(p);
                }
            }
        }
        Subgroup { elems }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        self.closure_of([])
    }

    pub fn full_subgroup(&self) -> Subgroup {
        Subgroup {
            elems: ElemSet::full(self.order),
        }
    }

    /// Wraps an explicit element set after verifying it really is a subgroup.
    pub fn subgroup_from_elements(&self, elems: &[usize]) -> Result<Subgroup, GroupError> {
        let mut set = ElemSet::empty(self.order);
        for &x in elems {
            if x >= self.order {
                return Err(GroupError::ElementOutOfRange {
                    x,
                    order: self.order,
                });
            }
            set.insert(x);
        }
        if !set.contains(0) {
            return Err(GroupError::NotASubgroup("missing the identity".into()));
        }
        for a in set.iter() {
            for b in set.iter() {
                if !set.contains(self.mul(a, b)) {
                    return Err(GroupError::NotASubgroup(format!(
                        "not closed: {a}*{b} falls outside"
                    )));
                }
            }
        }
        Ok(Subgroup { elems: set })
    }

    pub fn subgroup_index(&self, h: &Subgroup) -> usize {
        self.order / h.order()
    }

    pub fn conjugate_set(&self, set: &ElemSet, g: usize) -> ElemSet {
        let gi = self.inv(g);
        ElemSet::collect_from(self.order, set.iter().map(|h| self.mul(self.mul(g, h), gi)))
    }

    /// Largest normal subgroup of the group contained in `h`:
    /// the intersection of all conjugates of `h`.
    pub fn normal_core(&self, h: &Subgroup) -> Subgroup {
        let mut core = h.elems.clone();
        for g in 0..self.order {
            core.intersect_with(&self.conjugate_set(&h.elems, g));
            if core.len() == 1 {
                break;
            }
        }
        Subgroup { elems: core }
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        if let Some(lat) = self.lattice_if_built() {
            if let Some(id) = lat.id_of(&h.elems) {
                return lat.normal[id];
            }
        }
        self.is_normal_direct(h)
    }

    fn is_normal_direct(&self, h: &Subgroup) -> bool {
        (0..self.order).all(|g| {
            let gi = self.inv(g);
            h.elems
                .iter()
                .all(|x| h.elems.contains(self.mul(self.mul(g, x), gi)))
        })
    }

    /// Whether `h` is normal inside the subgroup `k` (h ⊆ k assumed).
    pub(crate) fn is_normal_in(&self, h: &ElemSet, k: &ElemSet) -> bool {
        k.iter().all(|g| {
            let gi = self.inv(g);
            h.iter().all(|x| h.contains(self.mul(self.mul(g, x), gi)))
        })
    }

    pub fn is_subnormal(&self, h: &Subgroup) -> bool {
        if let Some(lat) = self.lattice_if_built() {
            if let Some(id) = lat.id_of(&h.elems) {
                return lat.subnormal[id];
            }
        }
        series::subnormal_chain(self, h).is_some()
    }

    /// Descending witness chain `G = K_0 ⊵ K_1 ⊵ … ⊵ H` when `h` is
    /// subnormal, built from iterated normal closures.
    pub fn subnormal_chain(&self, h: &Subgroup) -> Option<Vec<Subgroup>> {
        series::subnormal_chain(self, h)
    }

    /// gcd(|H|, [G:H]) = 1.
    pub fn is_hall(&self, h: &Subgroup) -> bool {
        num::integer::gcd(h.order(), self.subgroup_index(h)) == 1
    }

    /// Subgroup generated by the commutators of elements of `h`.
    pub fn derived_subgroup_of(&self, h: &Subgroup) -> Subgroup {
        let mut gens = ElemSet::empty(self.order);
        for a in h.elems.iter() {
            for b in h.elems.iter() {
                let c = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                gens.insert(c);
            }
        }
        self.closure_of(gens.iter())
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        self.derived_subgroup_of(&self.full_subgroup())
    }

    pub fn is_perfect(&self, h: &Subgroup) -> bool {
        self.derived_subgroup_of(h) == *h
    }

    /// Derived series of `h` (as a group in its own right) reaches trivial.
    pub fn is_solvable_subgroup(&self, h: &Subgroup) -> bool {
        let mut cur = h.clone();
        loop {
            let next = self.derived_subgroup_of(&cur);
            if next == cur {
                return cur.is_trivial();
            }
            cur = next;
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.is_solvable_subgroup(&self.full_subgroup())
    }

    /// Quotient by a normal subgroup, as a Cayley-table group on the sorted
    /// canonical coset representatives.
    pub fn quotient(&self, n_sub: &Subgroup) -> Result<FiniteGroup, GroupError> {
        if !self.is_normal(n_sub) {
            return Err(GroupError::NotNormal);
        }
        let rep_of = self.coset_rep_table(n_sub);
        let mut reps: Vec<usize> = (0..self.order).map(|g| rep_of[g] as usize).collect();
        reps.sort_unstable();
        reps.dedup();
        let q = reps.len();
        let coset_index: HashMap<usize, usize> =
            reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut table = vec![0u16; q * q];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i * q + j] = coset_index[&(rep_of[self.mul(a, b)] as usize)] as u16;
            }
        }
        FiniteGroup::from_parts(format!("{}/{}", self.label, n_sub.order()), q, table, false)
    }

    /// `h` re-indexed as a group in its own right, elements sorted ascending.
    pub fn to_group(&self, h: &Subgroup) -> FiniteGroup {
        let elems = h.elems.to_vec();
        let index: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let m = elems.len();
        let mut table = vec![0u16; m * m];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                table[i * m + j] = index[&self.mul(a, b)] as u16;
            }
        }
        FiniteGroup::from_parts(format!("{}[{}]", self.label, m), m, table, false)
            .expect("restriction of a valid table")
    }

    pub fn centralizer(&self, x: usize) -> Subgroup {
        let elems = ElemSet::collect_from(
            self.order,
            (0..self.order).filter(|&g| self.mul(g, x) == self.mul(x, g)),
        );
        Subgroup { elems }
    }

    pub fn center(&self) -> Subgroup {
        let elems = ElemSet::collect_from(
            self.order,
            (0..self.order)
                .filter(|&g| (0..self.order).all(|x| self.mul(g, x) == self.mul(x, g))),
        );
        Subgroup { elems }
    }

    /// The product set HK = {hk}.
    pub fn product_set(&self, h: &Subgroup, k: &Subgroup) -> ElemSet {
        let mut out = ElemSet::empty(self.order);
        for a in h.elems.iter() {
            for b in k.elems.iter() {
                out.insert(self.mul(a, b));
            }
        }
        out
    }

    /// Canonical (minimum-element) representative of g·H for every g.
    pub fn coset_rep_table(&self, h: &Subgroup) -> Vec<u16> {
        let mut rep = vec![u16::MAX; self.order];
        for g in 0..self.order {
            if rep[g] != u16::MAX {
                continue;
            }
            let mut members: Vec<usize> = h.elems.iter().map(|x| self.mul(g, x)).collect();
            members.sort_unstable();
            let r = members[0] as u16;
            for m in members {
                rep[m] = r;
            }
        }
        rep
    }

    /// Number of left cosets of `h` contained in `set`, assuming `set` is a
    /// union of left cosets of `h`.
    pub fn coset_count_in(&self, set: &ElemSet, h: &Subgroup) -> usize {
        debug_assert_eq!(set.len() % h.order(), 0);
        set.len() / h.order()
    }

    /// No subgroup sits strictly between `h` and the whole group.
    pub fn is_maximal_subgroup(&self, h: &Subgroup) -> bool {
        if h.order() == self.order {
            return false;
        }
        if let Some(lat) = self.lattice_if_built() {
            if let Some(id) = lat.id_of(&h.elems) {
                return lat.maximal[id];
            }
        }
        (0..self.order)
            .filter(|&x| !h.contains(x))
            .all(|x| self.closure_of(h.elems.iter().chain([x])).order() == self.order)
    }

    /// `h` is normal and no normal subgroup sits strictly between it and the
    /// whole group (equivalently, the quotient is simple).
    pub fn is_maximal_normal_subgroup(&self, h: &Subgroup) -> bool {
        if h.order() == self.order || !self.is_normal(h) {
            return false;
        }
        if let Some(lat) = self.lattice_if_built() {
            if let Some(id) = lat.id_of(&h.elems) {
                return lat.maximal_normal[id];
            }
        }
        (0..self.order).filter(|&x| !h.contains(x)).all(|x| {
            let gen = self.closure_of(h.elems.iter().chain([x]));
            series::normal_closure(self, &gen, &self.full_subgroup()).order() == self.order
        })
    }

    /// Whether the quotient by a normal subgroup is cyclic, decided by
    /// looking for a coset of full order.
    pub fn quotient_is_cyclic(&self, n_sub: &Subgroup) -> bool {
        let q = self.subgroup_index(n_sub);
        (0..self.order).any(|g| {
            let mut t = 1;
            let mut y = g;
            while !n_sub.contains(y) {
                y = self.mul(y, g);
                t += 1;
            }
            t == q
        })
    }

    /// Complete subgroup lattice with precomputed per-subgroup and per-pair
    /// facts; cached on first use.
    pub fn lattice(&self) -> Result<&Lattice, GroupError> {
        self.lattice
            .get_or_init(|| Lattice::compute(self))
            .as_ref()
            .map_err(|e| e.clone())
    }

    fn lattice_if_built(&self) -> Option<&Lattice> {
        self.lattice.get().and_then(|r| r.as_ref().ok())
    }

    /// All subgroups, duplicate-free, sorted by order then element set.
    pub fn all_subgroups(&self) -> Result<&[Subgroup], GroupError> {
        Ok(&self.lattice()?.subgroups)
    }

    pub fn composition_series(&self, h: &Subgroup) -> Result<CompositionSeries, GroupError> {
        series::composition_series(self, h, TieBreak::SmallestOrder)
    }

    pub fn composition_series_with(
        &self,
        h: &Subgroup,
        tie_break: TieBreak,
    ) -> Result<CompositionSeries, GroupError> {
        series::composition_series(self, h, tie_break)
    }

    /// Depth `d(G,H) = Σ (|H_i/H_{i−1}| − 1)` over a composition series from
    /// `h` to the whole group; requires `h` subnormal.
    pub fn depth_d(&self, h: &Subgroup) -> Result<u64, GroupError> {
        Ok(self.series_info(h)?.0)
    }

    /// Depth and factor orders of the canonical composition series, cached
    /// per lattice subgroup.
    pub fn series_info(&self, h: &Subgroup) -> Result<(u64, Vec<usize>), GroupError> {
        if let Ok(lat) = self.lattice() {
            if let Some(id) = lat.id_of(&h.elems) {
                return lat.series_info(self, id);
            }
        }
        let s = self.composition_series(h)?;
        Ok((s.depth(), s.factor_orders().to_vec()))
    }
}

fn check_associativity(n: usize, table: &[u16]) -> Result<(), GroupError> {
    let mul = |a: usize, b: usize| table[a * n + b] as usize;
    let check = |a: usize, b: usize, c: usize| -> Result<(), GroupError> {
        if mul(mul(a, b), c) != mul(a, mul(b, c)) {
            return Err(GroupError::InvalidTable(format!(
                "associativity fails at ({a},{b},{c})"
            )));
        }
        Ok(())
    };
    if n <= FULL_ASSOC_CHECK_MAX {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    check(a, b, c)?;
                }
            }
        }
    } else {
        // seeded splitmix64 sampling; deterministic across runs
        let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
        let mut next = move || {
            state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z ^ (z >> 31)
        };
        for _ in 0..1 << 17 {
            let a = (next() % n as u64) as usize;
            let b = (next() % n as u64) as usize;
            let c = (next() % n as u64) as usize;
            check(a, b, c)?;
        }
    }
    Ok(())
}

/// Greedily extends a pairwise non-commuting set to maximality and returns
/// the system of centralizers of its members (identity representatives).
/// The returned system is a minimal cover whose intersection is the center.
pub fn centralizer_cover(group: &Arc<FiniteGroup>) -> Result<CosetSystem, GroupError> {
    let center = group.center();
    if center.order() == group.order() {
        return Err(GroupError::Abelian);
    }
    let mut chosen: Vec<usize> = Vec::new();
    for x in 0..group.order() {
        if center.contains(x) {
            continue;
        }
        if chosen
            .iter()
            .all(|&y| group.mul(x, y) != group.mul(y, x))
        {
            chosen.push(x);
        }
    }
    let subs: Vec<Subgroup> = chosen.iter().map(|&x| group.centralizer(x)).collect();
    let sys = CosetSystem::from_subgroups(Arc::clone(group), subs)?;
    let inter = sys.intersection();
    assert_eq!(inter, center, "centralizer intersection must be the center");
    let inst = sys.to_instance().expect("small k");
    assert!(
        inst.is_minimal_m_cover(1),
        "centralizers of a maximal pairwise non-commuting set must form a minimal cover"
    );
    Ok(sys)
}

/// Left coset `a·H` with the canonical (minimum-element) representative.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coset {
    rep: usize,
    sub: Subgroup,
}

impl Coset {
    pub fn new(group: &FiniteGroup, sub: Subgroup, a: usize) -> Coset {
        let rep = sub
            .elems
            .iter()
            .map(|x| group.mul(a, x))
            .min()
            .expect("subgroups are nonempty");
        Coset { rep, sub }
    }

    pub fn rep(&self) -> usize {
        self.rep
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.sub
    }

    pub fn mask(&self, group: &FiniteGroup) -> ElemSet {
        ElemSet::collect_from(
            group.order(),
            self.sub.elems.iter().map(|x| group.mul(self.rep, x)),
        )
    }
}

impl fmt::Debug for Coset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*{:?}", self.rep, self.sub.elems)
    }
}

/// Ordered finite system of left cosets in one group.
///
/// Serializes as `{"group": "<spec>", "cosets": [{"rep": r, "subgroup":
/// [...]}, ...]}`; deserializing rebuilds the group from the spec string.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(into = "RawCosetSystem", try_from = "RawCosetSystem")]
pub struct CosetSystem {
    group: Arc<FiniteGroup>,
    items: Vec<Coset>,
}

#[derive(Serialize, Deserialize, Clone)]
struct RawCosetSystem {
    group: String,
    cosets: Vec<RawCoset>,
}

#[derive(Serialize, Deserialize, Clone)]
struct RawCoset {
    rep: usize,
    subgroup: Vec<usize>,
}

impl From<CosetSystem> for RawCosetSystem {
    fn from(sys: CosetSystem) -> RawCosetSystem {
        RawCosetSystem {
            group: sys.group.label().to_owned(),
            cosets: sys
                .items
                .iter()
                .map(|c| RawCoset {
                    rep: c.rep,
                    subgroup: c.sub.elems.to_vec(),
                })
                .collect(),
        }
    }
}

impl TryFrom<RawCosetSystem> for CosetSystem {
    type Error = String;

    fn try_from(raw: RawCosetSystem) -> Result<CosetSystem, String> {
        let group = Arc::new(FiniteGroup::parse_spec(&raw.group).map_err(|e| e.to_string())?);
        let mut items = Vec::new();
        for rc in raw.cosets {
            let sub = group
                .subgroup_from_elements(&rc.subgroup)
                .map_err(|e| e.to_string())?;
            if rc.rep >= group.order() {
                return Err(format!("rep {} out of range", rc.rep));
            }
            items.push(Coset::new(&group, sub, rc.rep));
        }
        CosetSystem::new(group, items).map_err(|e| e.to_string())
    }
}

impl CosetSystem {
    pub fn new(group: Arc<FiniteGroup>, items: Vec<Coset>) -> Result<CosetSystem, GroupError> {
        if items.is_empty() {
            return Err(GroupError::EmptySystem);
        }
        if items.len() > crate::analysis::MAX_MEMBERS {
            return Err(GroupError::TooManyCosets { k: items.len() });
        }
        for c in &items {
            if c.sub.elems.universe() != group.order() {
                return Err(GroupError::ElementOutOfRange {
                    x: c.rep,
                    order: group.order(),
                });
            }
        }
        Ok(CosetSystem { group, items })
    }

    /// System of subgroups: every representative is the identity.
    pub fn from_subgroups(
        group: Arc<FiniteGroup>,
        subs: Vec<Subgroup>,
    ) -> Result<CosetSystem, GroupError> {
        let items = subs
            .into_iter()
            .map(|s| Coset::new(&group, s, 0))
            .collect();
        CosetSystem::new(group, items)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn items(&self) -> &[Coset] {
        &self.items
    }

    pub fn k(&self) -> usize {
        self.items.len()
    }

    pub fn masks(&self) -> Vec<ElemSet> {
        self.items.iter().map(|c| c.mask(&self.group)).collect()
    }

    /// Intersection of the member subgroups `∩ G_i`.
    pub fn intersection(&self) -> Subgroup {
        let mut elems = self.items[0].sub.elems.clone();
        for c in &self.items[1..] {
            elems.intersect_with(&c.sub.elems);
        }
        Subgroup { elems }
    }

    pub fn all_identity_reps(&self) -> bool {
        self.items.iter().all(|c| c.rep == 0)
    }

    pub fn to_instance(&self) -> Result<CoverInstance, AnalysisError> {
        let masks = self.masks();
        CoverInstance::from_membership_fn(
            self.group.order(),
            self.items.len(),
            Provenance::Group,
            |x, i| masks[i].contains(x),
        )
    }

    /// Transports a residue-class system into the cyclic group of order equal
    /// to its period: `a + nZ` becomes the coset `a + ⟨n⟩`.
    pub fn from_zsystem(zs: &ZSystem) -> Result<(Arc<FiniteGroup>, CosetSystem), GroupError> {
        Self::from_zsystem_with_cap(zs, DEFAULT_ORDER_CAP)
    }

    pub fn from_zsystem_with_cap(
        zs: &ZSystem,
        cap: usize,
    ) -> Result<(Arc<FiniteGroup>, CosetSystem), GroupError> {
        let n = zs.period() as usize;
        if n > cap {
            return Err(GroupError::OrderCapExceeded { order: n, cap });
        }
        let group = Arc::new(builtins::parse_spec(&format!("Z{n}"), n.max(1))?);
        let items = zs
            .classes()
            .iter()
            .map(|c| {
                let gen = (c.modulus() % zs.period()) as usize;
                let sub = group.closure_of([gen]);
                Coset::new(&group, sub, c.residue() as usize)
            })
            .collect();
        let sys = CosetSystem::new(Arc::clone(&group), items)?;
        Ok((group, sys))
    }
}

impl fmt::Display for CosetSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.group.label())?;
        for (pos, c) in self.items.iter().enumerate() {
            if pos > 0 {
                write!(f, " |")?;
            }
            write!(f, " {}*{:?}", c.rep, c.sub.elems)?;
        }
        Ok(())
    }
}

/// Per-pair facts used by the hypothesis checks of the verifiers.
#[derive(Debug, Clone, Copy)]
pub struct PairInfo {
    /// |G_i ∩ G_j|.
    pub inter_order: usize,
    /// gcd([G:G_i], [G_i:G_i∩G_j]) = 1.
    pub gcd_coprime: bool,
    /// Both normal with cyclic quotient G/(G_i∩G_j).
    pub normal_cyclic: bool,
}

/// Complete subgroup lattice with eagerly computed per-subgroup flags and
/// per-ordered-pair facts.
pub struct Lattice {
    pub subgroups: Vec<Subgroup>,
    id_by_elems: HashMap<ElemSet, usize>,
    /// [G:H] per subgroup.
    pub index: Vec<usize>,
    pub normal: Vec<bool>,
    pub subnormal: Vec<bool>,
    pub maximal: Vec<bool>,
    pub maximal_normal: Vec<bool>,
    pub perfect: Vec<bool>,
    /// Lattice id of the normal core of each subgroup.
    pub core_id: Vec<usize>,
    /// For normal subgroups: whether G/N is solvable.
    pub quotient_solvable: Vec<Option<bool>>,
    /// Canonical coset representative tables, one per subgroup.
    pub coset_rep: Vec<Vec<u16>>,
    pair: Vec<PairInfo>,
    /// Lazily computed (depth, factor orders) per subnormal subgroup.
    series: Vec<OnceLock<Result<(u64, Vec<usize>), GroupError>>>,
}

impl Lattice {
    pub fn id_of(&self, elems: &ElemSet) -> Option<usize> {
        self.id_by_elems.get(elems).copied()
    }

    pub fn pair(&self, i: usize, j: usize) -> &PairInfo {
        &self.pair[i * self.subgroups.len() + j]
    }

    fn series_info(&self, g: &FiniteGroup, id: usize) -> Result<(u64, Vec<usize>), GroupError> {
        self.series[id]
            .get_or_init(|| {
                series::composition_series(g, &self.subgroups[id], TieBreak::SmallestOrder)
                    .map(|s| (s.depth(), s.factor_orders().to_vec()))
            })
            .clone()
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    fn compute(g: &FiniteGroup) -> Result<Lattice, GroupError> {
        let n = g.order();
        if n > DEFAULT_LATTICE_CAP {
            return Err(GroupError::LatticeCapExceeded {
                order: n,
                cap: DEFAULT_LATTICE_CAP,
            });
        }
        // breadth-first closure over generated subgroups, seeded at trivial
        let trivial = g.trivial_subgroup();
        let mut subgroups = vec![trivial.clone()];
        let mut seen: std::collections::HashSet<ElemSet> = std::collections::HashSet::new();
        seen.insert(trivial.elems.clone());
        let mut queue: VecDeque<Subgroup> = VecDeque::new();
        queue.push_back(trivial);
        while let Some(h) = queue.pop_front() {
            for x in 0..n {
                if h.contains(x) {
                    continue;
                }
                let bigger = g.closure_of(h.elems.iter().chain([x]));
                if seen.insert(bigger.elems.clone()) {
                    subgroups.push(bigger.clone());
                    queue.push_back(bigger);
                }
            }
        }
        subgroups.sort_unstable();
        let len = subgroups.len();
        let id_by_elems: HashMap<ElemSet, usize> = subgroups
            .iter()
            .enumerate()
            .map(|(i, s)| (s.elems.clone(), i))
            .collect();

        let index: Vec<usize> = subgroups.iter().map(|s| n / s.order()).collect();
        let normal: Vec<bool> = subgroups.iter().map(|s| g.is_normal_direct(s)).collect();
        let subnormal: Vec<bool> = subgroups
            .iter()
            .enumerate()
            .map(|(i, s)| normal[i] || series::subnormal_chain(g, s).is_some())
            .collect();
        let perfect: Vec<bool> = subgroups.iter().map(|s| g.is_perfect(s)).collect();
        let core_id: Vec<usize> = subgroups
            .iter()
            .map(|s| id_by_elems[&g.normal_core(s).elems])
            .collect();
        let quotient_solvable: Vec<Option<bool>> = subgroups
            .iter()
            .enumerate()
            .map(|(i, s)| {
                normal[i].then(|| {
                    g.quotient(s)
                        .expect("normal by construction")
                        .is_solvable()
                })
            })
            .collect();

        // maximality by lattice scan
        let mut maximal = vec![false; len];
        let mut maximal_normal = vec![false; len];
        for i in 0..len {
            if subgroups[i].order() == n {
                continue;
            }
            let above_proper = |normal_only: bool| {
                (0..len).any(|j| {
                    j != i
                        && subgroups[j].order() < n
                        && subgroups[j].order() > subgroups[i].order()
                        && (!normal_only || normal[j])
                        && subgroups[i].elems.is_subset_of(&subgroups[j].elems)
                })
            };
            maximal[i] = !above_proper(false);
            maximal_normal[i] = normal[i] && !above_proper(true);
        }

        let coset_rep: Vec<Vec<u16>> = subgroups.iter().map(|s| g.coset_rep_table(s)).collect();

        let mut pair = Vec::with_capacity(len * len);
        for i in 0..len {
            for j in 0..len {
                let inter = subgroups[i].elems.intersection(&subgroups[j].elems);
                let inter_order = inter.len();
                let gcd_coprime = num::integer::gcd(
                    index[i],
                    subgroups[i].order() / inter_order,
                ) == 1;
                let normal_cyclic = normal[i]
                    && normal[j]
                    && g.quotient_is_cyclic(&Subgroup { elems: inter });
                pair.push(PairInfo {
                    inter_order,
                    gcd_coprime,
                    normal_cyclic,
                });
            }
        }

        let series = (0..len).map(|_| OnceLock::new()).collect();

        Ok(Lattice {
            subgroups,
            id_by_elems,
            index,
            normal,
            subnormal,
            maximal,
            maximal_normal,
            perfect,
            core_id,
            quotient_solvable,
            coset_rep,
            pair,
            series,
        })
    }
}

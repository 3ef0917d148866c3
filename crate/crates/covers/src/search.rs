//! Exhaustive, pruned enumeration of cover systems and conjecture hunts.
//!
//! Systems are multisets of residue classes (resp. cosets), enumerated as
//! non-decreasing index sequences over a canonically ordered universe, so
//! each system appears exactly once up to reordering. Work is sharded by
//! the first class/coset choice; shards run through [`exec`] and results
//! merge in canonical order, so output is deterministic in either mode.
//!
//! Pruning per predicate: a running density bound `Σ 1/n_i` cut against the
//! target multiplicity (sound because the universe is ordered by decreasing
//! member density), per-element coverage caps for exact covers, and
//! incremental overlap rejection for disjoint systems.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::exec::{self, ExecMode};
use crate::groups::{
    symmetric_permutations, Coset, CosetSystem, ElemSet, FiniteGroup, GroupError, Subgroup,
};
use crate::mycielski::conjecture11_bound;
use crate::verifiers::{
    check_conjecture11, check_conjecture11_z, check_conjecture12, check_conjecture12_z,
    max_pair_index_gcd, Outcome,
};
use crate::zsystems::{ResidueClass, ZSystem, ZSystemError};

/// Cap on listed boundary-tight examples in hunt reports (counts are exact).
pub const TIGHT_EXAMPLE_LIMIT: usize = 20;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    ZSystem(#[from] ZSystemError),
    #[error("max_k must be between 1 and 64, got {0}")]
    BadKBound(usize),
    #[error("max_period must be positive")]
    BadPeriodBound,
    #[error("regular-cover enumeration needs max_k <= 20, got {0}")]
    RegularityBound(usize),
    #[error("the symmetric-group partition is built for 2 <= k <= 6, got {0}")]
    ExampleRange(usize),
}

/// Property the enumerated systems must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predicate {
    MinimalMCover(usize),
    ExactMCover(usize),
    RegularCover,
    PairwiseDisjoint,
    Any,
}

impl Predicate {
    /// Target multiplicity for the density prune; `None` disables it.
    fn density_target(&self) -> Option<usize> {
        match self {
            Predicate::MinimalMCover(m) | Predicate::ExactMCover(m) => Some(*m),
            Predicate::RegularCover => Some(1),
            Predicate::PairwiseDisjoint | Predicate::Any => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ZBounds {
    pub max_period: u64,
    pub max_k: usize,
    /// Restrict the universe to classes with residue 0 (subgroup systems).
    pub zero_residues_only: bool,
}

impl ZBounds {
    pub fn new(max_period: u64, max_k: usize) -> ZBounds {
        ZBounds {
            max_period,
            max_k,
            zero_residues_only: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroupBounds {
    pub max_k: usize,
    /// Restrict the universe to identity representatives (subgroup systems).
    pub identity_reps_only: bool,
    /// Restrict the universe to cosets of subnormal subgroups.
    pub subnormal_only: bool,
}

impl GroupBounds {
    pub fn new(max_k: usize) -> GroupBounds {
        GroupBounds {
            max_k,
            identity_reps_only: false,
            subnormal_only: false,
        }
    }
}

/// Result of a streaming scan: how many predicate-matching systems were
/// visited, and whatever the visitor chose to keep.
#[derive(Debug)]
pub struct ScanOutcome<R> {
    pub enumerated: u64,
    pub hits: Vec<R>,
}

fn validate(max_k: usize, pred: &Predicate) -> Result<(), SearchError> {
    if max_k == 0 || max_k > 64 {
        return Err(SearchError::BadKBound(max_k));
    }
    if *pred == Predicate::RegularCover && max_k > 20 {
        return Err(SearchError::RegularityBound(max_k));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// residue-class systems

fn z_universe(n: u64, zero_only: bool) -> Vec<ResidueClass> {
    let mut v = Vec::new();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let residues = if zero_only { 1 } else { d };
        for a in 0..residues {
            v.push(ResidueClass::new(a as i64, d as i64).expect("d >= 1"));
        }
    }
    v
}

struct ZScan<'a, R, F: Fn(&ZSystem) -> Option<R>> {
    n: u64,
    uni: &'a [ResidueClass],
    max_k: usize,
    pred: Predicate,
    f: &'a F,
    counts: Vec<u32>,
    chosen: Vec<usize>,
    lcm: u64,
    density_num: u64, // Σ n/n_i over chosen classes
    enumerated: u64,
    hits: Vec<R>,
}

impl<R, F: Fn(&ZSystem) -> Option<R>> ZScan<'_, R, F> {
    fn class_elems(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let c = self.uni[idx];
        (c.residue()..self.n).step_by(c.modulus() as usize).map(|x| x as usize)
    }

    fn push(&mut self, idx: usize) {
        let c = self.uni[idx];
        for x in (c.residue()..self.n).step_by(c.modulus() as usize) {
            self.counts[x as usize] += 1;
        }
        self.lcm = num::integer::lcm(self.lcm, c.modulus());
        self.density_num += self.n / c.modulus();
        self.chosen.push(idx);
    }

    fn pop(&mut self, idx: usize) {
        let c = self.uni[idx];
        for x in (c.residue()..self.n).step_by(c.modulus() as usize) {
            self.counts[x as usize] -= 1;
        }
        self.lcm = self
            .chosen
            .iter()
            .take(self.chosen.len() - 1)
            .map(|&i| self.uni[i].modulus())
            .fold(1, num::integer::lcm);
        self.density_num -= self.n / c.modulus();
        self.chosen.pop();
    }

    fn candidate_rejected(&self, idx: usize) -> bool {
        match self.pred {
            Predicate::ExactMCover(m) => self
                .class_elems(idx)
                .any(|x| self.counts[x] as usize >= m),
            Predicate::PairwiseDisjoint => self.class_elems(idx).any(|x| self.counts[x] > 0),
            _ => false,
        }
    }

    /// Density break: with the universe ordered by ascending modulus, once
    /// a candidate cannot close the density gap no later candidate can.
    fn density_break(&self, idx: usize) -> bool {
        if let Some(m) = self.pred.density_target() {
            let slots = (self.max_k - self.chosen.len()) as u64;
            let best = self.density_num + slots * (self.n / self.uni[idx].modulus());
            return best < m as u64 * self.n;
        }
        false
    }

    fn emit(&mut self) {
        if self.lcm != self.n || !self.predicate_holds() {
            return;
        }
        let classes: Vec<ResidueClass> = self.chosen.iter().map(|&i| self.uni[i]).collect();
        let sys = ZSystem::with_period_cap(classes, self.n).expect("lcm equals the target period");
        self.enumerated += 1;
        if let Some(r) = (self.f)(&sys) {
            self.hits.push(r);
        }
    }

    fn predicate_holds(&self) -> bool {
        match self.pred {
            Predicate::Any | Predicate::PairwiseDisjoint => true,
            Predicate::ExactMCover(m) => self.counts.iter().all(|&c| c as usize == m),
            Predicate::MinimalMCover(m) => {
                self.counts.iter().all(|&c| c as usize >= m)
                    && self.chosen.iter().all(|&i| {
                        self.class_elems(i).any(|x| self.counts[x] as usize == m)
                    })
            }
            Predicate::RegularCover => {
                self.counts.iter().all(|&c| c > 0) && {
                    let classes: Vec<ResidueClass> =
                        self.chosen.iter().map(|&i| self.uni[i]).collect();
                    let sys = ZSystem::with_period_cap(classes, self.n).expect("capped");
                    sys.to_instance()
                        .expect("capped")
                        .is_regular(true)
                        .expect("k <= 20 validated")
                }
            }
        }
    }

    fn dfs(&mut self, last: usize) {
        self.emit();
        if self.chosen.len() == self.max_k {
            return;
        }
        for idx in last..self.uni.len() {
            if self.density_break(idx) {
                break;
            }
            if self.candidate_rejected(idx) {
                continue;
            }
            self.push(idx);
            self.dfs(idx);
            self.pop(idx);
        }
    }
}

/// Visits every system with period at most `max_period` and at most `max_k`
/// classes that satisfies the predicate, in canonical order, calling `f` on
/// each; `Some` results are collected.
pub fn scan_zsystems<R, F>(
    bounds: &ZBounds,
    pred: Predicate,
    mode: ExecMode,
    f: F,
) -> Result<ScanOutcome<R>, SearchError>
where
    R: Send,
    F: Fn(&ZSystem) -> Option<R> + Sync + Send,
{
    validate(bounds.max_k, &pred)?;
    if bounds.max_period == 0 {
        return Err(SearchError::BadPeriodBound);
    }
    // shard by (target period, first class)
    let mut shards = Vec::new();
    for n in 1..=bounds.max_period {
        let len = z_universe(n, bounds.zero_residues_only).len();
        for first in 0..len {
            shards.push((n, first));
        }
    }
    let results = exec::map_collect(mode, shards, |(n, first)| {
        let uni = z_universe(n, bounds.zero_residues_only);
        let mut scan = ZScan {
            n,
            uni: &uni,
            max_k: bounds.max_k,
            pred,
            f: &f,
            counts: vec![0; n as usize],
            chosen: Vec::new(),
            lcm: 1,
            density_num: 0,
            enumerated: 0,
            hits: Vec::new(),
        };
        if !scan.density_break(first) {
            scan.push(first);
            scan.dfs(first);
        }
        (scan.enumerated, scan.hits)
    });
    let mut out = ScanOutcome {
        enumerated: 0,
        hits: Vec::new(),
    };
    for (count, hits) in results {
        out.enumerated += count;
        out.hits.extend(hits);
    }
    Ok(out)
}

pub fn enumerate_zsystems(
    bounds: &ZBounds,
    pred: Predicate,
    mode: ExecMode,
) -> Result<Vec<ZSystem>, SearchError> {
    Ok(scan_zsystems(bounds, pred, mode, |s| Some(s.clone()))?.hits)
}

// ---------------------------------------------------------------------------
// coset systems

struct GEntry {
    sub: Subgroup,
    rep: usize,
    mask: ElemSet,
}

fn group_universe(g: &FiniteGroup, bounds: &GroupBounds) -> Result<Vec<GEntry>, SearchError> {
    let lat = g.lattice()?;
    let mut entries = Vec::new();
    // subgroup order descending so member densities are non-increasing
    for id in (0..lat.len()).rev() {
        if bounds.subnormal_only && !lat.subnormal[id] {
            continue;
        }
        let sub = &lat.subgroups[id];
        let mut reps: Vec<usize> = lat.coset_rep[id].iter().map(|&r| r as usize).collect();
        reps.sort_unstable();
        reps.dedup();
        for rep in reps {
            if bounds.identity_reps_only && rep != 0 {
                continue;
            }
            let mask = ElemSet::collect_from(
                g.order(),
                sub.elements().iter().map(|x| g.mul(rep, x)),
            );
            entries.push(GEntry {
                sub: sub.clone(),
                rep,
                mask,
            });
        }
    }
    Ok(entries)
}

struct GScan<'a, R, F: Fn(&CosetSystem) -> Option<R>> {
    group: &'a Arc<FiniteGroup>,
    uni: &'a [GEntry],
    max_k: usize,
    pred: Predicate,
    f: &'a F,
    counts: Vec<u32>,
    chosen: Vec<usize>,
    size_sum: u64,
    enumerated: u64,
    hits: Vec<R>,
}

impl<R, F: Fn(&CosetSystem) -> Option<R>> GScan<'_, R, F> {
    fn push(&mut self, idx: usize) {
        for x in self.uni[idx].mask.iter() {
            self.counts[x] += 1;
        }
        self.size_sum += self.uni[idx].sub.order() as u64;
        self.chosen.push(idx);
    }

    fn pop(&mut self, idx: usize) {
        for x in self.uni[idx].mask.iter() {
            self.counts[x] -= 1;
        }
        self.size_sum -= self.uni[idx].sub.order() as u64;
        self.chosen.pop();
    }

    fn candidate_rejected(&self, idx: usize) -> bool {
        match self.pred {
            Predicate::ExactMCover(m) => self.uni[idx]
                .mask
                .iter()
                .any(|x| self.counts[x] as usize >= m),
            Predicate::PairwiseDisjoint => {
                self.uni[idx].mask.iter().any(|x| self.counts[x] > 0)
            }
            _ => false,
        }
    }

    fn density_break(&self, idx: usize) -> bool {
        if let Some(m) = self.pred.density_target() {
            let slots = (self.max_k - self.chosen.len()) as u64;
            let best = self.size_sum + slots * self.uni[idx].sub.order() as u64;
            return best < (m * self.group.order()) as u64;
        }
        false
    }

    fn build(&self) -> CosetSystem {
        let items: Vec<Coset> = self
            .chosen
            .iter()
            .map(|&i| Coset::new(self.group, self.uni[i].sub.clone(), self.uni[i].rep))
            .collect();
        CosetSystem::new(Arc::clone(self.group), items).expect("nonempty and in range")
    }

    fn emit(&mut self) {
        let ok = match self.pred {
            Predicate::Any | Predicate::PairwiseDisjoint => true,
            Predicate::ExactMCover(m) => self.counts.iter().all(|&c| c as usize == m),
            Predicate::MinimalMCover(m) => {
                self.counts.iter().all(|&c| c as usize >= m)
                    && self.chosen.iter().all(|&i| {
                        self.uni[i]
                            .mask
                            .iter()
                            .any(|x| self.counts[x] as usize == m)
                    })
            }
            Predicate::RegularCover => {
                self.counts.iter().all(|&c| c > 0)
                    && self
                        .build()
                        .to_instance()
                        .expect("capped")
                        .is_regular(true)
                        .expect("k <= 20 validated")
            }
        };
        if !ok {
            return;
        }
        let sys = self.build();
        self.enumerated += 1;
        if let Some(r) = (self.f)(&sys) {
            self.hits.push(r);
        }
    }

    fn dfs(&mut self, last: usize) {
        self.emit();
        if self.chosen.len() == self.max_k {
            return;
        }
        for idx in last..self.uni.len() {
            if self.density_break(idx) {
                break;
            }
            if self.candidate_rejected(idx) {
                continue;
            }
            self.push(idx);
            self.dfs(idx);
            self.pop(idx);
        }
    }
}

/// Visits every coset system (multiset of cosets over the subgroup lattice)
/// with at most `max_k` members satisfying the predicate, in canonical
/// order; `Some` results of `f` are collected.
pub fn scan_cosetsystems<R, F>(
    group: &Arc<FiniteGroup>,
    bounds: &GroupBounds,
    pred: Predicate,
    mode: ExecMode,
    f: F,
) -> Result<ScanOutcome<R>, SearchError>
where
    R: Send,
    F: Fn(&CosetSystem) -> Option<R> + Sync + Send,
{
    validate(bounds.max_k, &pred)?;
    let uni = group_universe(group, bounds)?;
    let shards: Vec<usize> = (0..uni.len()).collect();
    let results = exec::map_collect(mode, shards, |first| {
        let mut scan = GScan {
            group,
            uni: &uni,
            max_k: bounds.max_k,
            pred,
            f: &f,
            counts: vec![0; group.order()],
            chosen: Vec::new(),
            size_sum: 0,
            enumerated: 0,
            hits: Vec::new(),
        };
        if !scan.density_break(first) && !scan.candidate_rejected(first) {
            scan.push(first);
            scan.dfs(first);
        }
        (scan.enumerated, scan.hits)
    });
    let mut out = ScanOutcome {
        enumerated: 0,
        hits: Vec::new(),
    };
    for (count, hits) in results {
        out.enumerated += count;
        out.hits.extend(hits);
    }
    Ok(out)
}

pub fn enumerate_cosetsystems(
    group: &Arc<FiniteGroup>,
    bounds: &GroupBounds,
    pred: Predicate,
    mode: ExecMode,
) -> Result<Vec<CosetSystem>, SearchError> {
    Ok(scan_cosetsystems(group, bounds, pred, mode, |s| Some(s.clone()))?.hits)
}

/// Partition of the symmetric group on k letters into the k cosets sending
/// a fixed letter everywhere: member i is the stabilizer of letter i,
/// shifted by the transposition (0 i).
pub fn construct_example21(k: usize) -> Result<CosetSystem, SearchError> {
    if !(2..=6).contains(&k) {
        return Err(SearchError::ExampleRange(k));
    }
    let g = Arc::new(FiniteGroup::parse_spec_with_cap(&format!("S{k}"), 720)?);
    let perms = symmetric_permutations(k);
    let find = |target: &[u8]| perms.iter().position(|p| p == target).expect("a permutation");
    let mut items = Vec::new();
    for i in 0..k {
        let stab: Vec<usize> = (0..g.order())
            .filter(|&x| perms[x][i] == i as u8)
            .collect();
        let sub = g.subgroup_from_elements(&stab).expect("stabilizer is a subgroup");
        let rep = if i == 0 {
            0
        } else {
            let mut t: Vec<u8> = (0..k as u8).collect();
            t.swap(0, i);
            find(&t)
        };
        items.push(Coset::new(&g, sub, rep));
    }
    let sys = CosetSystem::new(g, items)?;
    let inst = sys.to_instance().expect("k <= 6");
    assert!(inst.is_partition(), "stabilizer cosets must partition the group");
    Ok(sys)
}

// ---------------------------------------------------------------------------
// conjecture hunts

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HuntTarget {
    /// Minimal m-covers by subnormal subgroups, m from 1 to `max_m`.
    Conjecture11 { max_m: usize },
    /// Pairwise disjoint systems with k >= 2.
    Conjecture12,
}

enum HuntRow {
    Confirmed { tight: Option<String> },
    Counterexample(String),
}

/// Aggregated hunt result. A clean run reports "no counterexample within
/// bounds" — never more: the search accumulates evidence, it cannot settle
/// an open conjecture.
#[derive(Debug, Clone, Serialize)]
pub struct HuntReport {
    pub target: String,
    pub bounds: String,
    pub enumerated: u64,
    pub hypotheses_held: u64,
    pub confirmed: u64,
    pub tight_count: u64,
    pub tight_examples: Vec<String>,
    pub counterexamples: Vec<String>,
}

impl HuntReport {
    fn collect(target: String, bounds: String, enumerated: u64, rows: Vec<HuntRow>) -> HuntReport {
        let mut report = HuntReport {
            target,
            bounds,
            enumerated,
            hypotheses_held: rows.len() as u64,
            confirmed: 0,
            tight_count: 0,
            tight_examples: Vec::new(),
            counterexamples: Vec::new(),
        };
        for row in rows {
            match row {
                HuntRow::Confirmed { tight } => {
                    report.confirmed += 1;
                    if let Some(t) = tight {
                        report.tight_count += 1;
                        if report.tight_examples.len() < TIGHT_EXAMPLE_LIMIT {
                            report.tight_examples.push(t);
                        }
                    }
                }
                HuntRow::Counterexample(w) => report.counterexamples.push(w),
            }
        }
        report
    }

    fn merge(mut self, other: HuntReport) -> HuntReport {
        self.enumerated += other.enumerated;
        self.hypotheses_held += other.hypotheses_held;
        self.confirmed += other.confirmed;
        self.tight_count += other.tight_count;
        for t in other.tight_examples {
            if self.tight_examples.len() < TIGHT_EXAMPLE_LIMIT {
                self.tight_examples.push(t);
            }
        }
        self.counterexamples.extend(other.counterexamples);
        self
    }
}

impl fmt::Display for HuntReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "hunt {} over {}", self.target, self.bounds)?;
        writeln!(
            f,
            "  scanned {} systems, {} satisfied the hypotheses, {} confirmed",
            self.enumerated, self.hypotheses_held, self.confirmed
        )?;
        writeln!(
            f,
            "  boundary-tight cases: {} (showing {})",
            self.tight_count,
            self.tight_examples.len()
        )?;
        for t in &self.tight_examples {
            writeln!(f, "    {t}")?;
        }
        if self.counterexamples.is_empty() {
            write!(f, "  no counterexample within bounds")?;
        } else {
            writeln!(f, "  COUNTEREXAMPLES:")?;
            for c in &self.counterexamples {
                writeln!(f, "    {c}")?;
            }
        }
        Ok(())
    }
}

pub fn hunt_zsystems(
    bounds: &ZBounds,
    target: HuntTarget,
    mode: ExecMode,
) -> Result<HuntReport, SearchError> {
    let bounds_str = format!("Z systems, period <= {}, k <= {}", bounds.max_period, bounds.max_k);
    match target {
        HuntTarget::Conjecture12 => {
            let scan = scan_zsystems(bounds, Predicate::PairwiseDisjoint, mode, |zs| {
                if zs.k() < 2 {
                    return None;
                }
                let v = check_conjecture12_z(zs);
                if !v.hypotheses_hold {
                    return None;
                }
                Some(match v.outcome {
                    Outcome::Counterexample => HuntRow::Counterexample(zs.to_string()),
                    _ => {
                        let idx: Vec<usize> =
                            zs.moduli().iter().map(|&n| n as usize).collect();
                        let tight =
                            (max_pair_index_gcd(&idx) == zs.k()).then(|| zs.to_string());
                        HuntRow::Confirmed { tight }
                    }
                })
            })?;
            Ok(HuntReport::collect(
                "c1.2".into(),
                bounds_str,
                scan.enumerated,
                scan.hits,
            ))
        }
        HuntTarget::Conjecture11 { max_m } => {
            let mut zb = bounds.clone();
            zb.zero_residues_only = true;
            let mut report: Option<HuntReport> = None;
            for m in 1..=max_m {
                let scan = scan_zsystems(&zb, Predicate::MinimalMCover(m), mode, |zs| {
                    let v = check_conjecture11_z(zs, m);
                    if !v.hypotheses_hold {
                    return None;
                }
                    Some(match v.outcome {
                        Outcome::Counterexample => HuntRow::Counterexample(zs.to_string()),
                        _ => {
                            let bound =
                                m as u64 + conjecture11_bound(zs.period()).expect("period >= 1");
                            let tight = (zs.k() as u64 == bound + 1).then(|| zs.to_string());
                            HuntRow::Confirmed { tight }
                        }
                    })
                })?;
                let part = HuntReport::collect(
                    "c1.1".into(),
                    format!("{bounds_str}, m <= {max_m}"),
                    scan.enumerated,
                    scan.hits,
                );
                report = Some(match report {
                    None => part,
                    Some(r) => r.merge(part),
                });
            }
            Ok(report.expect("max_m >= 1"))
        }
    }
}

pub fn hunt_cosetsystems(
    group: &Arc<FiniteGroup>,
    bounds: &GroupBounds,
    target: HuntTarget,
    mode: ExecMode,
) -> Result<HuntReport, SearchError> {
    let bounds_str = format!("{} coset systems, k <= {}", group.label(), bounds.max_k);
    match target {
        HuntTarget::Conjecture12 => {
            let scan = scan_cosetsystems(group, bounds, Predicate::PairwiseDisjoint, mode, |sys| {
                if sys.k() < 2 {
                    return None;
                }
                let v = check_conjecture12(sys);
                if !v.hypotheses_hold {
                    return None;
                }
                Some(match v.outcome {
                    Outcome::Counterexample => HuntRow::Counterexample(sys.to_string()),
                    _ => {
                        let idx: Vec<usize> = sys
                            .items()
                            .iter()
                            .map(|c| group.subgroup_index(c.subgroup()))
                            .collect();
                        let tight =
                            (max_pair_index_gcd(&idx) == sys.k()).then(|| sys.to_string());
                        HuntRow::Confirmed { tight }
                    }
                })
            })?;
            Ok(HuntReport::collect(
                "c1.2".into(),
                bounds_str,
                scan.enumerated,
                scan.hits,
            ))
        }
        HuntTarget::Conjecture11 { max_m } => {
            let mut gb = bounds.clone();
            gb.identity_reps_only = true;
            gb.subnormal_only = true;
            let mut report: Option<HuntReport> = None;
            for m in 1..=max_m {
                let scan =
                    scan_cosetsystems(group, &gb, Predicate::MinimalMCover(m), mode, |sys| {
                        let v = check_conjecture11(sys, m);
                        if !v.hypotheses_hold {
                    return None;
                }
                        Some(match v.outcome {
                            Outcome::Counterexample => HuntRow::Counterexample(sys.to_string()),
                            _ => {
                                let index_f =
                                    (group.order() / sys.intersection().order()) as u64;
                                let bound = m as u64
                                    + conjecture11_bound(index_f).expect("index >= 1");
                                let tight =
                                    (sys.k() as u64 == bound + 1).then(|| sys.to_string());
                                HuntRow::Confirmed { tight }
                            }
                        })
                    })?;
                let part = HuntReport::collect(
                    "c1.1".into(),
                    format!("{bounds_str}, m <= {max_m}"),
                    scan.enumerated,
                    scan.hits,
                );
                report = Some(match report {
                    None => part,
                    Some(r) => r.merge(part),
                });
            }
            Ok(report.expect("max_m >= 1"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn canon(zs: &ZSystem) -> String {
        zs.canonical().to_string()
    }

    #[test]
    fn example21_partitions() {
        for k in 2..=4 {
            let sys = construct_example21(k).unwrap();
            assert_eq!(sys.k(), k);
            assert_eq!(sys.intersection().order(), 1);
            let inst = sys.to_instance().unwrap();
            assert!(inst.is_partition());
        }
        assert!(matches!(
            construct_example21(1),
            Err(SearchError::ExampleRange(1))
        ));
        assert!(matches!(
            construct_example21(7),
            Err(SearchError::ExampleRange(7))
        ));
    }

    #[test]
    fn example21_k2_singletons() {
        let sys = construct_example21(2).unwrap();
        for c in sys.items() {
            assert_eq!(c.subgroup().order(), 1);
        }
    }

    #[test]
    fn minimal_cover_census_period_6() {
        // hand census: exactly five minimal 1-covers with period <= 6, k <= 3
        let found = enumerate_zsystems(
            &ZBounds::new(6, 3),
            Predicate::MinimalMCover(1),
            ExecMode::Sequential,
        )
        .unwrap();
        let names: BTreeSet<String> = found.iter().map(canon).collect();
        let expected: BTreeSet<String> = [
            "0/1",
            "0/2,1/2",
            "0/3,1/3,2/3",
            "0/2,1/4,3/4",
            "1/2,0/4,2/4",
        ]
        .iter()
        .map(|s| canon(&ZSystem::parse(s).unwrap()))
        .collect();
        assert_eq!(names, expected);
    }

    #[test]
    fn census_matches_unpruned_oracle() {
        // direct nested-loop generation without pruning, as the oracle
        let oracle = |pred: &Predicate| -> BTreeSet<String> {
            let mut all_classes = Vec::new();
            for d in 1..=6u64 {
                for a in 0..d {
                    all_classes.push(ResidueClass::new(a as i64, d as i64).unwrap());
                }
            }
            let mut out = BTreeSet::new();
            // multisets of up to 3 classes as non-decreasing index triples
            let idx_count = all_classes.len();
            let mut visit = |ids: &[usize]| {
                let classes: Vec<ResidueClass> =
                    ids.iter().map(|&i| all_classes[i]).collect();
                let zs = ZSystem::new(classes).unwrap();
                if zs.period() > 6 {
                    return;
                }
                let inst = zs.to_instance().unwrap();
                let keep = match pred {
                    Predicate::MinimalMCover(m) => inst.is_minimal_m_cover(*m),
                    Predicate::ExactMCover(m) => inst.is_exact_m_cover(*m),
                    Predicate::PairwiseDisjoint => {
                        (0..inst.carrier()).all(|x| inst.full_set(x).len() <= 1)
                    }
                    Predicate::RegularCover => inst.is_regular(true).unwrap(),
                    Predicate::Any => true,
                };
                if keep {
                    out.insert(canon(&zs));
                }
            };
            for i in 0..idx_count {
                visit(&[i]);
                for j in i..idx_count {
                    visit(&[i, j]);
                    for l in j..idx_count {
                        visit(&[i, j, l]);
                    }
                }
            }
            out
        };
        for pred in [
            Predicate::MinimalMCover(1),
            Predicate::MinimalMCover(2),
            Predicate::ExactMCover(1),
            Predicate::ExactMCover(2),
            Predicate::PairwiseDisjoint,
            Predicate::RegularCover,
            Predicate::Any,
        ] {
            let found: BTreeSet<String> =
                enumerate_zsystems(&ZBounds::new(6, 3), pred, ExecMode::Sequential)
                    .unwrap()
                    .iter()
                    .map(canon)
                    .collect();
            assert_eq!(found, oracle(&pred), "census mismatch for {pred:?}");
        }
    }

    #[test]
    fn classic_cover_is_found() {
        let found = enumerate_zsystems(
            &ZBounds::new(12, 5),
            Predicate::MinimalMCover(1),
            ExecMode::Parallel,
        )
        .unwrap();
        let classic = canon(&ZSystem::parse("0/2,0/3,1/4,5/6,7/12").unwrap());
        assert!(found.iter().any(|z| canon(z) == classic));
    }

    #[test]
    fn disjoint_census_period_4() {
        let found = enumerate_zsystems(
            &ZBounds::new(4, 3),
            Predicate::PairwiseDisjoint,
            ExecMode::Sequential,
        )
        .unwrap();
        let target = canon(&ZSystem::parse("0/2,1/4,3/4").unwrap());
        assert!(found.iter().any(|z| canon(z) == target));
    }

    #[test]
    fn trivial_period_bound() {
        let found = enumerate_zsystems(
            &ZBounds::new(1, 2),
            Predicate::Any,
            ExecMode::Sequential,
        )
        .unwrap();
        // {0/1} and {0/1, 0/1}
        assert_eq!(found.len(), 2);
    }

    #[test]
    fn modes_agree() {
        for pred in [Predicate::MinimalMCover(1), Predicate::PairwiseDisjoint] {
            let a = enumerate_zsystems(&ZBounds::new(8, 4), pred, ExecMode::Sequential).unwrap();
            let b = enumerate_zsystems(&ZBounds::new(8, 4), pred, ExecMode::Parallel).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn klein_minimal_covers() {
        let g = Arc::new(FiniteGroup::parse_spec("Z2xZ2").unwrap());
        let found = enumerate_cosetsystems(
            &g,
            &GroupBounds {
                max_k: 3,
                identity_reps_only: true,
                subnormal_only: false,
            },
            Predicate::MinimalMCover(1),
            ExecMode::Sequential,
        )
        .unwrap();
        // the three order-2 subgroups form the only proper subgroup cover
        let proper: Vec<&CosetSystem> =
            found.iter().filter(|s| s.intersection().order() < 4).collect();
        assert_eq!(proper.len(), 1);
        assert_eq!(proper[0].k(), 3);
        assert!(proper[0].items().iter().all(|c| c.subgroup().order() == 2));
    }

    #[test]
    fn exact_covers_are_single_subgroup_partitions_in_z4() {
        let g = Arc::new(FiniteGroup::parse_spec("Z4").unwrap());
        let found = enumerate_cosetsystems(
            &g,
            &GroupBounds::new(4),
            Predicate::ExactMCover(1),
            ExecMode::Sequential,
        )
        .unwrap();
        // {G}; {H, 1+H}; the four singletons; and the two mixed partitions
        // {0,2}+{1}+{3} and {1,3}+{0}+{2}
        assert_eq!(found.len(), 5);
        for sys in &found {
            let inst = sys.to_instance().unwrap();
            assert!(inst.is_partition());
        }
    }

    #[test]
    fn s3_exact_covers_include_stabilizer_partition() {
        let g = Arc::new(FiniteGroup::parse_spec("S3").unwrap());
        let found = enumerate_cosetsystems(
            &g,
            &GroupBounds::new(3),
            Predicate::ExactMCover(1),
            ExecMode::Parallel,
        )
        .unwrap();
        // some partition into three cosets of order-2 subgroups exists
        assert!(found
            .iter()
            .any(|s| s.k() == 3 && s.items().iter().all(|c| c.subgroup().order() == 2)));
    }

    #[test]
    fn hunt_c12_small() {
        let report = hunt_zsystems(
            &ZBounds::new(8, 3),
            HuntTarget::Conjecture12,
            ExecMode::Sequential,
        )
        .unwrap();
        assert!(report.counterexamples.is_empty());
        assert!(report.hypotheses_held > 0);
        assert_eq!(report.confirmed, report.hypotheses_held);
        assert!(report.tight_count > 0, "k = 2 pairs with gcd 2 are tight");
        let text = report.to_string();
        assert!(text.contains("no counterexample within bounds"));
    }

    #[test]
    fn hunt_c11_klein() {
        let g = Arc::new(FiniteGroup::parse_spec("Z2xZ2").unwrap());
        let report = hunt_cosetsystems(
            &g,
            &GroupBounds::new(4),
            HuntTarget::Conjecture11 { max_m: 1 },
            ExecMode::Sequential,
        )
        .unwrap();
        assert!(report.counterexamples.is_empty());
        assert!(report.hypotheses_held > 0);
    }

    #[test]
    fn hunt_reports_are_deterministic() {
        let a = hunt_zsystems(
            &ZBounds::new(10, 3),
            HuntTarget::Conjecture12,
            ExecMode::Sequential,
        )
        .unwrap();
        let b = hunt_zsystems(
            &ZBounds::new(10, 3),
            HuntTarget::Conjecture12,
            ExecMode::Parallel,
        )
        .unwrap();
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn empty_hunt_is_empty_report() {
        // period 1 admits no disjoint pair
        let report = hunt_zsystems(
            &ZBounds::new(1, 3),
            HuntTarget::Conjecture12,
            ExecMode::Sequential,
        )
        .unwrap();
        assert_eq!(report.hypotheses_held, 0);
        assert!(report.counterexamples.is_empty());
    }

    #[test]
    fn bad_bounds_are_rejected() {
        assert!(matches!(
            enumerate_zsystems(&ZBounds::new(6, 0), Predicate::Any, ExecMode::Sequential),
            Err(SearchError::BadKBound(0))
        ));
        assert!(matches!(
            enumerate_zsystems(&ZBounds::new(0, 2), Predicate::Any, ExecMode::Sequential),
            Err(SearchError::BadPeriodBound)
        ));
        assert!(matches!(
            enumerate_zsystems(
                &ZBounds::new(6, 21),
                Predicate::RegularCover,
                ExecMode::Sequential
            ),
            Err(SearchError::RegularityBound(21))
        ));
    }

    #[test]
    fn emitted_systems_satisfy_their_predicate() {
        // re-check a sample through the analysis layer
        let found = enumerate_zsystems(
            &ZBounds::new(12, 4),
            Predicate::MinimalMCover(1),
            ExecMode::Sequential,
        )
        .unwrap();
        assert!(!found.is_empty());
        for zs in found.iter().take(50) {
            let inst = zs.to_instance().unwrap();
            assert!(inst.is_minimal_m_cover(1));
            assert!(inst.is_regular(true).unwrap(), "minimal covers are regular covers");
        }
    }
}

//! Subnormality and composition series.
//!
//! Subnormality is decided by the descending normal-closure chain
//! `K_0 = G, K_{j+1} = ncl(H in K_j)`: the chain either stabilizes at `H`
//! (subnormal, with the chain as witness) or stalls strictly above it.
//! A composition series from `H` to `G` is built by refining the witness
//! chain: between a lower term `L` normal in an upper term `U`, insert a
//! maximal proper normal subgroup of `U` containing `L` (found by lattice
//! search) and recurse below it. Maximality among the candidates makes the
//! factor above the inserted term simple, and `L` stays normal in every
//! inserted term because normality in `U` restricts to its subgroups.

use super::{FiniteGroup, GroupError, Subgroup};

/// Tie-breaking rule when several maximal candidates exist during series
/// refinement. The depth is series-independent either way; the two rules
/// give genuinely different series on rich lattices, which tests exploit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    /// Smallest order, then lexicographically smallest element set.
    SmallestOrder,
    /// Largest order, then lexicographically smallest element set.
    LargestOrder,
}

/// Chain from a subnormal subgroup up to the whole group with simple
/// factors; `factor_orders[i] = |chain[i+1]| / |chain[i]|`.
#[derive(Debug, Clone)]
pub struct CompositionSeries {
    chain: Vec<Subgroup>,
    factor_orders: Vec<usize>,
}

impl CompositionSeries {
    /// Ascending chain `H = chain[0] ⊂ … ⊂ chain[n] = G`.
    pub fn chain(&self) -> &[Subgroup] {
        &self.chain
    }

    pub fn factor_orders(&self) -> &[usize] {
        &self.factor_orders
    }

    /// `d = Σ (factor − 1)`; zero for the length-0 chain.
    pub fn depth(&self) -> u64 {
        self.factor_orders.iter().map(|&f| f as u64 - 1).sum()
    }

    pub fn all_factors_prime(&self) -> bool {
        self.factor_orders.iter().all(|&f| is_prime(f))
    }
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Normal closure of `h` in `k`: the subgroup generated by all
/// `x h x^{-1}` with x in k. Assumes h ⊆ k.
pub(super) fn normal_closure(g: &FiniteGroup, h: &Subgroup, k: &Subgroup) -> Subgroup {
    let mut gens = super::ElemSet::empty(g.order());
    for x in k.elements().iter() {
        let xi = g.inv(x);
        for e in h.elements().iter() {
            gens.insert(g.mul(g.mul(x, e), xi));
        }
    }
    g.closure_of(gens.iter())
}

pub(super) fn subnormal_chain(g: &FiniteGroup, h: &Subgroup) -> Option<Vec<Subgroup>> {
    let mut chain = vec![g.full_subgroup()];
    loop {
        let top = chain.last().unwrap();
        if top == h {
            return Some(chain);
        }
        let next = normal_closure(g, h, top);
        if next.order() == top.order() {
            return None; // stalled strictly above h
        }
        chain.push(next);
    }
}

pub(super) fn composition_series(
    g: &FiniteGroup,
    h: &Subgroup,
    tie_break: TieBreak,
) -> Result<CompositionSeries, GroupError> {
    let witness = subnormal_chain(g, h).ok_or(GroupError::NotSubnormal)?;
    g.lattice()?;

    // walk the witness chain bottom-up, refining every adjacent pair
    let mut chain: Vec<Subgroup> = vec![h.clone()];
    for w in (0..witness.len() - 1).rev() {
        let upper = &witness[w];
        let lower = chain.last().unwrap().clone();
        chain.extend(series_between(g, &lower, upper, tie_break)?);
        chain.push(upper.clone());
    }

    let factor_orders: Vec<usize> = chain
        .windows(2)
        .map(|w| w[1].order() / w[0].order())
        .collect();
    debug_assert!(chain.windows(2).all(|w| w[1].order() % w[0].order() == 0));
    Ok(CompositionSeries {
        chain,
        factor_orders,
    })
}

/// Subgroups strictly between `lower` and `upper` completing a maximal
/// chain, ascending. Assumes `lower ⊴ upper`.
fn series_between(
    g: &FiniteGroup,
    lower: &Subgroup,
    upper: &Subgroup,
    tie_break: TieBreak,
) -> Result<Vec<Subgroup>, GroupError> {
    if lower.order() == upper.order() {
        return Ok(Vec::new());
    }
    let lattice = g.lattice()?;
    // proper normal subgroups of `upper` containing `lower`; `lower` itself
    // is always among them
    let candidates: Vec<&Subgroup> = lattice
        .subgroups
        .iter()
        .filter(|s| {
            s.order() < upper.order()
                && lower.elements().is_subset_of(s.elements())
                && s.elements().is_subset_of(upper.elements())
                && g.is_normal_in(s.elements(), upper.elements())
        })
        .collect();
    let maximal: Vec<&Subgroup> = candidates
        .iter()
        .filter(|s| {
            !candidates
                .iter()
                .any(|t| t.order() > s.order() && s.elements().is_subset_of(t.elements()))
        })
        .copied()
        .collect();
    let pick = maximal
        .iter()
        .min_by(|a, b| match tie_break {
            TieBreak::SmallestOrder => a.cmp(b),
            TieBreak::LargestOrder => b
                .order()
                .cmp(&a.order())
                .then_with(|| a.elements().cmp(b.elements())),
        })
        .expect("lower itself is always a candidate");
    if pick.order() == lower.order() {
        // the factor upper/lower is already simple
        return Ok(Vec::new());
    }
    let pick = (*pick).clone();
    let mut below = series_between(g, lower, &pick, tie_break)?;
    below.push(pick);
    Ok(below)
}

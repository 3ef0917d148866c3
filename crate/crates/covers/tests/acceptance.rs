//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its runtime. Run with `cargo test -p covers --test acceptance --
//! --nocapture` to see the lines.

use std::sync::Arc;
use std::time::Instant;

use covers::analysis::IndexSet;
use covers::corpus;
use covers::exec::{map_collect, ExecMode};
use covers::groups::{CosetSystem, FiniteGroup, Subgroup};
use covers::mycielski::{check_chain16, mycielski_f};
use covers::search::{
    construct_example21, hunt_cosetsystems, hunt_zsystems, scan_cosetsystems, scan_zsystems,
    GroupBounds, HuntTarget, Predicate, ZBounds,
};
use covers::verifiers::{
    check_lemma21, check_lemma31, cross_check_z, proved_battery, verify_cor12, verify_thm11_z,
    verify_thm12_z, verify_thm13, verify_thm13_z, verify_thm15, verify_thm21, verify_tomkinson_z,
    Outcome,
};
use covers::zsystems::ZSystem;

const PAR: ExecMode = ExecMode::Parallel;

#[test]
fn criterion_1_named_example_fidelity() {
    let t = Instant::now();

    let classic = corpus::classic_cover();
    let inst = classic.to_instance().unwrap();
    assert!(inst.multiplicity() >= 1, "classic system must be a cover");
    assert_eq!(inst.multiplicity(), 1);
    assert!(inst.is_minimal_m_cover(1));
    assert!(inst.is_regular(true).unwrap());

    let noncover = corpus::regular_noncover();
    let inst = noncover.to_instance().unwrap();
    assert!(inst.is_regular(false).unwrap());
    assert_eq!(inst.multiplicity(), 0, "must not be a cover");
    assert!(!inst.is_regular(true).unwrap());

    let el = t.elapsed();
    assert!(el.as_secs() < 1, "runtime budget 1 s exceeded: {el:.2?}");
    println!("acceptance 1: PASS — named examples report exactly as stated ({el:.2?})");
}

#[test]
fn criterion_2_symmetric_partition_suite() {
    let t = Instant::now();
    for k in 3..=5usize {
        let sys = construct_example21(k).unwrap();
        let g = sys.group();
        let n = g.order();
        let inst = sys.to_instance().unwrap();
        assert!(inst.is_partition(), "k = {k}: not a partition");
        let f_order = sys.intersection().order();
        assert_eq!(f_order, 1);

        for bits in 1u64..=IndexSet::full(k).bits() {
            let i_set = IndexSet::from_bits(bits);
            // D = ∩_{j ∉ I} G_j
            let mut d = g.full_subgroup().elements().clone();
            for j in i_set.complement(k).iter() {
                d.intersect_with(sys.items()[j].subgroup().elements());
            }
            // [D : ∩G_i] = |I|! exactly
            let fact: usize = (1..=i_set.len()).product();
            assert_eq!(d.len() / f_order, fact, "k = {k}, I = {bits:b}");

            // index chain, cleared of denominators over |G|:
            //   Σ|G_i| ≥ Σ|G_i ∩ D| = |D| and Π[G:G_j] ≥ [G:D]
            let s1: usize = i_set.iter().map(|i| sys.items()[i].subgroup().order()).sum();
            let s2: usize = i_set
                .iter()
                .map(|i| sys.items()[i].subgroup().elements().intersection(&d).len())
                .sum();
            assert!(s1 >= s2, "first inequality fails");
            assert_eq!(s2, d.len(), "middle relation must hold with equality");
            let prod: u128 = i_set
                .complement(k)
                .iter()
                .map(|j| (n / sys.items()[j].subgroup().order()) as u128)
                .product();
            assert!(prod >= (n / d.len()) as u128, "last inequality fails");

            // union size matches the alternating binomial sum exactly
            let mut union = g.trivial_subgroup().elements().clone();
            for i in i_set.iter() {
                union.union_with(sys.items()[i].subgroup().elements());
            }
            let mut expect: i128 = 0;
            for l in 1..=i_set.len() {
                let term = binomial(i_set.len(), l) * factorial(k - l);
                expect += if l % 2 == 1 { term } else { -term };
            }
            assert_eq!(union.len() as i128, expect, "union identity fails");

            // and the bundled checker agrees
            let v = verify_thm21(&sys, i_set).unwrap();
            assert_eq!(v.outcome, Outcome::Confirmed, "k = {k}, I = {bits:b}");
        }
    }
    let el = t.elapsed();
    assert!(el.as_secs() < 30, "runtime budget 30 s exceeded: {el:.2?}");
    println!("acceptance 2: PASS — stabilizer partitions meet every index-subset identity ({el:.2?})");
}

fn factorial(n: usize) -> i128 {
    (1..=n as i128).product()
}

fn binomial(n: usize, k: usize) -> i128 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

#[test]
fn criterion_3_inequality_chain_over_family() {
    let t = Instant::now();
    let family = corpus::builtin_family(48);
    assert!(family.len() > 60);
    let results = map_collect(PAR, family, |g| {
        let lat = g.lattice().expect("order <= 48");
        let mut checked = 0u64;
        for (id, h) in lat.subgroups.iter().enumerate() {
            if !lat.subnormal[id] {
                continue;
            }
            let index = lat.index[id] as u64;
            let d = g.depth_d(h).expect("subnormal");
            let chain = check_chain16(index, d).unwrap();
            assert!(
                chain.all_hold(),
                "{}: chain fails at subgroup of order {} (index {index}, d {d})",
                g.label(),
                h.order()
            );
            // d = f([G:H]) exactly when the quotient by the core is solvable
            let solvable = lat.quotient_solvable[lat.core_id[id]].expect("core is normal");
            assert_eq!(
                d == chain.f,
                solvable,
                "{}: depth/f criterion fails at order {}",
                g.label(),
                h.order()
            );
            checked += 1;
        }
        checked
    });
    let total: u64 = results.iter().sum();
    assert!(total > 500, "family sweep looks too small: {total}");

    // spot check on the order-60 simple group
    let s5 = FiniteGroup::parse_spec("S5").unwrap();
    let a5 = s5.to_group(&s5.derived_subgroup());
    let d = a5.depth_d(&a5.trivial_subgroup()).unwrap();
    assert_eq!(d, 59);
    assert_eq!(mycielski_f(60).unwrap(), 8);
    assert!(!a5.is_solvable());
    assert_ne!(d, 8);

    let el = t.elapsed();
    assert!(el.as_secs() < 120, "runtime budget 2 min exceeded: {el:.2?}");
    println!(
        "acceptance 3: PASS — chain and depth/f criterion hold at {total} subnormal subgroups ({el:.2?})"
    );
}

/// Battery wrapper: returns a description for any counterexample verdict.
fn battery_counterexamples(sys: &CosetSystem) -> Option<String> {
    let verdicts = proved_battery(sys).expect("battery");
    let bad: Vec<String> = verdicts
        .iter()
        .filter(|v| v.outcome == Outcome::Counterexample)
        .map(|v| format!("{}: {sys}", v.claim))
        .collect();
    if bad.is_empty() {
        None
    } else {
        Some(bad.join("; "))
    }
}

#[test]
fn criterion_4_verifier_soundness_sweep() {
    let t = Instant::now();

    // (a) all minimal m-covers of the integers, period <= 24, k <= 6, m <= 2
    let mut z_scanned = 0u64;
    for m in 1..=2usize {
        let scan = scan_zsystems(
            &ZBounds::new(24, 6),
            Predicate::MinimalMCover(m),
            PAR,
            |zs| {
                let mut bad: Vec<String> = Vec::new();
                let inst = zs.to_instance().unwrap();
                let mult = inst.multiplicity();
                for v in [
                    verify_tomkinson_z(zs, m),
                    verify_thm11_z(zs, mult),
                    verify_thm12_z(zs, m),
                    verify_thm13_z(zs).unwrap(),
                ] {
                    if v.outcome == Outcome::Counterexample {
                        bad.push(format!("{} (native): {zs}", v.claim));
                    }
                }
                let (_, sys) = CosetSystem::from_zsystem(zs).expect("period <= 24");
                if let Some(b) = battery_counterexamples(&sys) {
                    bad.push(b);
                }
                if bad.is_empty() {
                    None
                } else {
                    Some(bad.join("; "))
                }
            },
        )
        .unwrap();
        assert!(scan.enumerated > 0);
        assert_eq!(scan.hits, Vec::<String>::new(), "counterexamples at m = {m}");
        z_scanned += scan.enumerated;
    }

    // (b) coset systems in every built-in group of order <= 16, through the
    // same battery: everything with k <= 3, covers up to k <= 4 (minimal)
    // and k <= 6 (exact), disjoint systems up to k <= 4
    let family = corpus::builtin_family(16);
    let sweeps: Vec<(Predicate, usize)> = vec![
        (Predicate::Any, 3),
        (Predicate::MinimalMCover(1), 4),
        (Predicate::MinimalMCover(2), 4),
        (Predicate::ExactMCover(1), 6),
        (Predicate::ExactMCover(2), 6),
        (Predicate::PairwiseDisjoint, 4),
    ];
    let mut g_scanned = 0u64;
    let mut g_bad: Vec<String> = Vec::new();
    for g in &family {
        for (pred, max_k) in &sweeps {
            let scan = scan_cosetsystems(
                g,
                &GroupBounds::new(*max_k),
                *pred,
                PAR,
                battery_counterexamples,
            )
            .expect("scan");
            g_scanned += scan.enumerated;
            g_bad.extend(scan.hits);
        }
    }
    assert!(g_scanned > 1_000_000, "sweep too small: {g_scanned}");
    assert!(g_bad.is_empty(), "counterexamples: {g_bad:?}");

    // the two subgroup lemmas over every ordered pair in every group
    let lemma_checked: u64 = map_collect(PAR, family.clone(), |g| {
        let lat = g.lattice().expect("small");
        let mut n = 0u64;
        for h in &lat.subgroups {
            for k in &lat.subgroups {
                for v in [check_lemma21(&g, h, k), check_lemma31(&g, h, k)] {
                    assert_ne!(
                        v.outcome,
                        Outcome::Counterexample,
                        "{}: {} fails at orders ({}, {})",
                        g.label(),
                        v.claim,
                        h.order(),
                        k.order()
                    );
                }
                n += 1;
            }
        }
        n
    })
    .iter()
    .sum();

    // the coset-count statement over pairs of members above every base
    // subgroup, with every representative choice; parallel over base ids
    let mut thm15_checked = 0u64;
    for g in &family {
        let lat = g.lattice().expect("small");
        let n = g.order();
        let ids: Vec<usize> = (0..lat.len()).collect();
        thm15_checked += map_collect(PAR, ids, |hid| {
            let h = &lat.subgroups[hid];
            let sups: Vec<&Subgroup> = lat
                .subgroups
                .iter()
                .filter(|s| h.elements().is_subset_of(s.elements()))
                .collect();
            let mut checked = 0u64;
            for (si, s1) in sups.iter().enumerate() {
                for s2 in &sups[si..] {
                    let pair = [(*s1).clone(), (*s2).clone()];
                    for a1 in 0..n {
                        for a2 in 0..n {
                            let v = verify_thm15(g, h, &pair, &[a1, a2])
                                .expect("h contained in both");
                            assert_ne!(
                                v.outcome,
                                Outcome::Counterexample,
                                "{}: 1.5 fails",
                                g.label()
                            );
                            if h.is_trivial() {
                                let v = verify_cor12(g, &pair, &[a1, a2]).expect("trivial base");
                                assert_ne!(v.outcome, Outcome::Counterexample);
                            }
                            checked += 1;
                        }
                    }
                }
            }
            checked
        })
        .iter()
        .sum::<u64>();
    }

    let el = t.elapsed();
    assert!(el.as_secs() < 600, "runtime budget 10 min exceeded: {el:.2?}");
    println!(
        "acceptance 4: PASS — zero counterexamples over {z_scanned} Z systems, {g_scanned} coset systems, {lemma_checked} lemma pairs, {thm15_checked} union checks ({el:.2?})"
    );
}

#[test]
fn criterion_5_klein_negative_controls() {
    let t = Instant::now();

    // shifted cosets of the three order-2 subgroups can cover only the
    // non-identity elements: the union inequality genuinely fails, and the
    // checker reports it as vacuous (hypotheses reject the configuration)
    let g = Arc::new(FiniteGroup::parse_spec("Z2xZ2").unwrap());
    let subs: Vec<Subgroup> = g
        .all_subgroups()
        .unwrap()
        .iter()
        .filter(|s| s.order() == 2)
        .cloned()
        .collect();
    assert_eq!(subs.len(), 3);
    let mut strict_failure = false;
    for a1 in 0..4 {
        for a2 in 0..4 {
            for a3 in 0..4 {
                let v = verify_cor12(&g, &subs, &[a1, a2, a3]).unwrap();
                assert_ne!(v.outcome, Outcome::Counterexample);
                if !v.conclusion_holds {
                    assert!(!v.hypotheses_hold);
                    strict_failure = true;
                }
            }
        }
    }
    assert!(strict_failure, "a strict union failure must exist on the Klein group");

    // the depth-bound hypothesis checker rejects the p x p configurations
    let klein_sys = corpus::klein_cover();
    let v = verify_thm13(&klein_sys).unwrap();
    assert_eq!(v.outcome, Outcome::Vacuous);

    let g33 = Arc::new(FiniteGroup::parse_spec("Z3xZ3").unwrap());
    let subs33: Vec<Subgroup> = g33
        .all_subgroups()
        .unwrap()
        .iter()
        .filter(|s| s.order() == 3)
        .cloned()
        .collect();
    assert_eq!(subs33.len(), 4);
    let sys33 = CosetSystem::from_subgroups(Arc::clone(&g33), subs33).unwrap();
    let v = verify_thm13(&sys33).unwrap();
    assert_eq!(v.outcome, Outcome::Vacuous);
    assert!(
        !v.conclusion_holds,
        "k = 4 < 1 + d = 5: the conclusion must genuinely fail here"
    );

    let el = t.elapsed();
    assert!(el.as_secs() < 1, "runtime budget 1 s exceeded: {el:.2?}");
    println!("acceptance 5: PASS — Klein/odd-p negative controls behave as stated ({el:.2?})");
}

#[test]
fn criterion_6_conjecture_hunts() {
    let t = Instant::now();

    // disjoint-coset conjecture over the cyclic groups of order <= 36
    let mut tight_total = 0u64;
    let mut held_total = 0u64;
    let reports = map_collect(PAR, (1..=36usize).collect::<Vec<_>>(), |n| {
        let g = Arc::new(FiniteGroup::parse_spec(&format!("Z{n}")).unwrap());
        hunt_cosetsystems(
            &g,
            &GroupBounds::new(4),
            HuntTarget::Conjecture12,
            ExecMode::Sequential,
        )
        .unwrap()
    });
    for r in &reports {
        assert!(r.counterexamples.is_empty(), "counterexample: {r}");
        assert_eq!(r.confirmed, r.hypotheses_held);
        tight_total += r.tight_count;
        held_total += r.hypotheses_held;
    }
    assert!(held_total > 0);
    assert!(tight_total > 0, "at least one boundary-tight case required");

    // the same over the Z side with matching period bound
    let zr = hunt_zsystems(&ZBounds::new(36, 4), HuntTarget::Conjecture12, PAR).unwrap();
    assert!(zr.counterexamples.is_empty());
    assert!(zr.tight_count > 0);

    // all built-in groups of order <= 16
    let family = corpus::builtin_family(16);
    let reports = map_collect(PAR, family.clone(), |g| {
        let c12 = hunt_cosetsystems(
            &g,
            &GroupBounds::new(4),
            HuntTarget::Conjecture12,
            ExecMode::Sequential,
        )
        .unwrap();
        let c11 = hunt_cosetsystems(
            &g,
            &GroupBounds::new(6),
            HuntTarget::Conjecture11 { max_m: 2 },
            ExecMode::Sequential,
        )
        .unwrap();
        (c12, c11)
    });
    for (c12, c11) in &reports {
        assert!(c12.counterexamples.is_empty(), "{c12}");
        assert!(c11.counterexamples.is_empty(), "{c11}");
    }

    // the k = 2 case is a theorem: every disjoint pair everywhere confirms
    let pair_only = hunt_zsystems(&ZBounds::new(36, 2), HuntTarget::Conjecture12, PAR).unwrap();
    assert!(pair_only.hypotheses_held > 0);
    assert_eq!(pair_only.confirmed, pair_only.hypotheses_held);
    assert!(pair_only.counterexamples.is_empty());

    let el = t.elapsed();
    assert!(el.as_secs() < 300, "runtime budget 5 min exceeded: {el:.2?}");
    println!(
        "acceptance 6: PASS — hunts clean; {held_total} hypothesis instances, {tight_total} tight cases ({el:.2?})"
    );
}

#[test]
fn criterion_7_oracle_equivalences() {
    let t = Instant::now();

    // single-deletion minimality agrees with the full-subset oracle
    let mut minimality_checked = 0u64;
    let scan = scan_zsystems(&ZBounds::new(12, 4), Predicate::Any, PAR, |zs| {
        let inst = zs.to_instance().unwrap();
        for m in 1..=3 {
            if inst.is_minimal_m_cover(m) != inst.is_minimal_m_cover_exhaustive(m).unwrap() {
                return Some(zs.to_string());
            }
        }
        None
    })
    .unwrap();
    assert_eq!(scan.hits, Vec::<String>::new());
    minimality_checked += scan.enumerated;

    for g in corpus::builtin_family(8) {
        let scan = scan_cosetsystems(
            &g,
            &GroupBounds::new(3),
            Predicate::Any,
            ExecMode::Sequential,
            |sys| {
                let inst = sys.to_instance().unwrap();
                for m in 1..=2 {
                    if inst.is_minimal_m_cover(m)
                        != inst.is_minimal_m_cover_exhaustive(m).unwrap()
                    {
                        return Some(sys.to_string());
                    }
                }
                None
            },
        )
        .unwrap();
        assert_eq!(scan.hits, Vec::<String>::new(), "{}", g.label());
        minimality_checked += scan.enumerated;
    }

    // a k = 12 instance through both routes
    let twelve = ZSystem::parse(
        "0/12,1/12,2/12,3/12,4/12,5/12,6/12,7/12,8/12,9/12,10/12,11/12",
    )
    .unwrap();
    let inst = twelve.to_instance().unwrap();
    assert!(inst.is_minimal_m_cover(1));
    assert!(inst.is_minimal_m_cover_exhaustive(1).unwrap());

    // native and transported verification agree on every corpus instance
    let mut cross_checked = 0u64;
    for m in 1..=2usize {
        let scan = scan_zsystems(
            &ZBounds::new(24, 6),
            Predicate::MinimalMCover(m),
            PAR,
            |zs| {
                for (claim, native, transported) in cross_check_z(zs).expect("period <= 24") {
                    if native != transported {
                        return Some(format!("{claim} disagrees on {zs}"));
                    }
                }
                None
            },
        )
        .unwrap();
        assert_eq!(scan.hits, Vec::<String>::new());
        cross_checked += scan.enumerated;
    }
    let scan = scan_zsystems(&ZBounds::new(8, 3), Predicate::Any, PAR, |zs| {
        for (claim, native, transported) in cross_check_z(zs).expect("period <= 8") {
            if native != transported {
                return Some(format!("{claim} disagrees on {zs}"));
            }
        }
        None
    })
    .unwrap();
    assert_eq!(scan.hits, Vec::<String>::new());
    cross_checked += scan.enumerated;

    let el = t.elapsed();
    println!(
        "acceptance 7: PASS — minimality oracle on {minimality_checked} systems, native/transported agreement on {cross_checked} ({el:.2?})"
    );
}

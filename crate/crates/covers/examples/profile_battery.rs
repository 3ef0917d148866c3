use std::sync::Arc;
use std::time::Instant;
use covers::groups::FiniteGroup;
use covers::search::{scan_cosetsystems, GroupBounds, Predicate};
use covers::exec::ExecMode;
use covers::verifiers::proved_battery;

fn main() {
    let g = Arc::new(FiniteGroup::parse_spec("Z2xZ2xZ2xZ2").unwrap());
    g.lattice().unwrap();
    let sweeps: Vec<(Predicate, usize)> = vec![
        (Predicate::MinimalMCover(1), 4),
        (Predicate::MinimalMCover(2), 4),
        (Predicate::ExactMCover(1), 6),
        (Predicate::ExactMCover(2), 6),
        (Predicate::PairwiseDisjoint, 4),
    ];
    for (pred, max_k) in sweeps {
        let t = Instant::now();
        let scan = scan_cosetsystems(&g, &GroupBounds::new(max_k), pred, ExecMode::Sequential, |s| {
            let v = proved_battery(s).unwrap();
            if v.iter().any(|x| matches!(x.outcome, covers::Outcome::Counterexample)) { Some(()) } else { None }
        }).unwrap();
        println!("{pred:?} k<={max_k}: {} systems in {:.2?}", scan.enumerated, t.elapsed());
    }
}

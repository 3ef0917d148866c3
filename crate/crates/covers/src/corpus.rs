//! Named demo instances and the built-in group family used by the test and
//! acceptance suites.

use std::sync::Arc;

use crate::groups::{centralizer_cover, CosetSystem, FiniteGroup, GroupError};
use crate::search::{construct_example21, SearchError};
use crate::zsystems::ZSystem;

/// The five-class cover with distinct moduli and period 12.
pub fn classic_cover() -> ZSystem {
    ZSystem::parse("0/2,0/3,1/4,5/6,7/12").expect("well-formed")
}

/// A regular system of three residue classes that is not a cover.
pub fn regular_noncover() -> ZSystem {
    ZSystem::parse("0/2,0/4,2/4").expect("well-formed")
}

/// Stabilizer-coset partition of the symmetric group on k letters.
pub fn example21(k: usize) -> Result<CosetSystem, SearchError> {
    construct_example21(k)
}

/// The Klein group covered by its three subgroups of order 2.
pub fn klein_cover() -> CosetSystem {
    subgroup_cover("Z2xZ2", 2)
}

/// The quaternion group covered by its three subgroups of order 4.
pub fn q8_cover() -> CosetSystem {
    subgroup_cover("Q8", 4)
}

fn subgroup_cover(spec: &str, order: usize) -> CosetSystem {
    let g = Arc::new(FiniteGroup::parse_spec(spec).expect("builtin"));
    let subs = g
        .all_subgroups()
        .expect("small group")
        .iter()
        .filter(|s| s.order() == order)
        .cloned()
        .collect();
    CosetSystem::from_subgroups(g, subs).expect("nonempty")
}

/// Centralizer cover of a maximal pairwise non-commuting set in the group
/// given by spec; fails on abelian groups.
pub fn centralizer_cover_of(spec: &str) -> Result<CosetSystem, GroupError> {
    let g = Arc::new(FiniteGroup::parse_spec(spec)?);
    centralizer_cover(&g)
}

/// Deterministic catalog of built-in groups with order at most `max_order`:
/// all cyclic and dihedral groups in range, the small symmetric groups, the
/// quaternion group, and a fixed list of direct products. Sorted by order
/// then label; isomorphic duplicates under different specs are kept.
pub fn builtin_family(max_order: usize) -> Vec<Arc<FiniteGroup>> {
    let mut specs: Vec<String> = Vec::new();
    for n in 1..=max_order {
        specs.push(format!("Z{n}"));
    }
    for n in 2..=max_order / 2 {
        specs.push(format!("D{n}"));
    }
    for k in 3..=5 {
        if (1..=k).product::<usize>() <= max_order {
            specs.push(format!("S{k}"));
        }
    }
    for p in [
        "Q8",
        "Z2xZ2",
        "Z2xZ4",
        "Z3xZ3",
        "Z2xZ6",
        "Z2xZ2xZ2",
        "Z2xZ8",
        "Z4xZ4",
        "Z2xZ2xZ4",
        "Z3xZ6",
        "Z2xZ2xZ2xZ2",
        "Z2xZ12",
        "Z2xZ2xZ2xZ3",
        "Q8xZ2",
        "Q8xZ3",
        "S3xZ2",
        "S3xZ3",
        "S3xS3",
        "S4xZ2",
        "D4xZ2",
        "D4xZ3",
        "D6xZ2",
    ] {
        specs.push(p.to_owned());
    }
    let mut family: Vec<Arc<FiniteGroup>> = specs
        .iter()
        .filter_map(|s| FiniteGroup::parse_spec(s).ok())
        .filter(|g| g.order() <= max_order)
        .map(Arc::new)
        .collect();
    family.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.label().cmp(b.label()))
    });
    family
}

/// Demo names accepted by the command-line front-end.
pub const DEMO_NAMES: &[&str] = &[
    "classic_cover",
    "regular_noncover",
    "example21",
    "klein_cover",
    "q8_cover",
    "centralizer_cover",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_cover_properties() {
        let inst = classic_cover().to_instance().unwrap();
        assert_eq!(inst.multiplicity(), 1);
        assert!(inst.is_minimal_m_cover(1));
        assert!(inst.is_regular(true).unwrap());
        assert!(!inst.is_partition());
    }

    #[test]
    fn regular_noncover_properties() {
        let inst = regular_noncover().to_instance().unwrap();
        assert!(inst.is_regular(false).unwrap());
        assert!(!inst.is_regular(true).unwrap());
        assert_eq!(inst.multiplicity(), 0);
    }

    #[test]
    fn example21_properties() {
        for k in 2..=5 {
            let sys = example21(k).unwrap();
            assert!(sys.to_instance().unwrap().is_partition());
            assert_eq!(sys.intersection().order(), 1);
        }
    }

    #[test]
    fn klein_cover_properties() {
        let sys = klein_cover();
        assert_eq!(sys.k(), 3);
        let inst = sys.to_instance().unwrap();
        assert!(inst.is_minimal_m_cover(1));
        assert!(sys.intersection().is_trivial());
    }

    #[test]
    fn q8_cover_properties() {
        let sys = q8_cover();
        assert_eq!(sys.k(), 3);
        let inst = sys.to_instance().unwrap();
        assert!(inst.is_minimal_m_cover(1));
        assert_eq!(sys.intersection().order(), 2);
    }

    #[test]
    fn centralizer_cover_demo() {
        let sys = centralizer_cover_of("S4").unwrap();
        let inst = sys.to_instance().unwrap();
        assert!(inst.is_minimal_m_cover(1));
        assert!(centralizer_cover_of("Z8").is_err());
    }

    #[test]
    fn family_is_sorted_and_capped() {
        let family = builtin_family(16);
        assert!(family.iter().all(|g| g.order() <= 16));
        assert!(family.len() > 25);
        for w in family.windows(2) {
            assert!(w[0].order() <= w[1].order());
        }
        // the 48 family picks up the larger products
        let family48 = builtin_family(48);
        assert!(family48.iter().any(|g| g.label() == "S4xZ2"));
        assert!(family48.iter().any(|g| g.label() == "S3xS3"));
    }
}

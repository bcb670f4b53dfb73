use std::collections::BTreeSet;

use proptest::prelude::*;

use pds_kit::feasibility::subgroup_restriction;
use pds_kit::field::paley_pds;
use pds_kit::group::{AbelianGroup, GroupElement};
use pds_kit::pds::{cayley_srg_params, verify_pds, CandidateSet};
use pds_kit::search::restrict_to_hall;

const GROUPS: [&str; 7] = ["Z3^2", "Z13", "Z4^2", "Z2^4", "Z15", "Z5^2", "Z2xZ8"];

fn symmetric_set(spec: &str, picks: &[bool]) -> CandidateSet {
    let group = AbelianGroup::parse(spec).unwrap();
    let mut members = BTreeSet::new();
    let mut seen = BTreeSet::new();
    let mut pick = picks.iter().cycle();
    for x in group.elements().skip(1) {
        if seen.insert(x.clone()) {
            let n = group.neg(&x);
            seen.insert(n.clone());
            if *pick.next().unwrap() {
                members.insert(x);
                members.insert(n);
            }
        }
    }
    CandidateSet::new(group, members).unwrap()
}

fn small_symmetric_set() -> impl Strategy<Value = CandidateSet> {
    (0..GROUPS.len(), prop::collection::vec(any::<bool>(), 1..40))
        .prop_map(|(i, picks)| symmetric_set(GROUPS[i], &picks))
}

proptest! {
    #[test]
    fn identity_toggle_preserves_verdict(d in small_symmetric_set()) {
        let with_e = d.toggle_identity();
        prop_assert!(with_e.contains(&d.group.identity()));
        prop_assert_eq!(verify_pds(&d).is_pds, verify_pds(&with_e).is_pds);
    }

    #[test]
    fn srg_agrees_with_difference_counts(d in small_symmetric_set()) {
        let report = verify_pds(&d);
        match cayley_srg_params(&d) {
            Ok(srg) => prop_assert_eq!(report.params, Some(srg)),
            Err(_) => prop_assert!(!report.is_pds || report.degenerate),
        }
    }
}

#[test]
fn restriction_of_paley_sets_is_admissible() {
    for q in [9u64, 25, 49, 81, 121, 169] {
        let d = paley_pds(q).unwrap();
        let params = verify_pds(&d).params.unwrap();
        let primes: BTreeSet<u64> = d.group.primes().into_iter().collect();
        let n = d.group.hall_subgroup(&primes).unwrap();
        let restricted = restrict_to_hall(&d, &n);
        let restricted_params = verify_pds(&restricted).params.unwrap();
        let r = subgroup_restriction(&params, n.order).unwrap();
        assert!(!r.locally_infeasible(), "q = {q}");
        assert!(
            r.admissible_params().contains(&restricted_params),
            "q = {q}: {restricted_params} not in {:?}",
            r.admissible_params()
        );
    }
}

#[test]
fn negation_fixes_paley_sets() {
    for q in [13u64, 29, 81] {
        let d = paley_pds(q).unwrap();
        let negated: BTreeSet<GroupElement> = d.members.iter().map(|g| d.group.neg(g)).collect();
        assert_eq!(negated, d.members);
    }
}

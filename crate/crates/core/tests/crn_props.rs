mod common;

use common::*;
use proptest::prelude::*;
use rrcrn::{explore, Cap, Configuration, Direction, Mode, Step};

fn config(counts: &[u32]) -> Configuration {
    Configuration::from_counts(counts.to_vec())
}

proptest! {
    #[test]
    fn reverse_undoes_forward(rxns in arb_reactions(3, 4), counts in arb_counts(3, 4)) {
        let crn = build_crn(3, &rxns);
        let c = config(&counts);
        for r in 0..crn.reactions().len() {
            for d in [Direction::Forward, Direction::Reverse] {
                if let Ok(n) = crn.apply(&c, r, d) {
                    prop_assert_eq!(crn.apply(&n, r, d.opposite()).unwrap(), c.clone());
                }
            }
        }
    }

    #[test]
    fn steps_are_additive(
        rxns in arb_reactions(3, 4),
        counts in arb_counts(3, 4),
        extra in arb_counts(3, 3),
    ) {
        let crn = build_crn(3, &rxns);
        let c = config(&counts);
        let e = config(&extra);
        for (s, n) in crn.successors(&c, Mode::BiDirectional) {
            let bigger = crn.apply_step(&c.plus(&e), s).expect("enabled on a superset");
            prop_assert_eq!(bigger, n.plus(&e));
            let delta = step_delta(&crn, s);
            for (i, d) in delta.iter().enumerate() {
                prop_assert_eq!(i64::from(n.get(i)) - i64::from(c.get(i)), *d);
            }
        }
    }

    #[test]
    fn forward_steps_are_bidirectional_steps(rxns in arb_reactions(3, 4), counts in arb_counts(3, 4)) {
        let crn = build_crn(3, &rxns);
        let c = config(&counts);
        let fwd = crn.enabled(&c, Mode::ForwardOnly);
        let bi = crn.enabled(&c, Mode::BiDirectional);
        prop_assert!(fwd.iter().all(|s| bi.contains(s)));
        prop_assert!(fwd.iter().all(|s| s.direction == Direction::Forward));
        let reverse: Vec<Step> = bi.iter().copied().filter(|s| s.direction == Direction::Reverse).collect();
        for s in reverse {
            prop_assert!(c.covers(crn.reactions()[s.reaction].products()));
        }
    }

    #[test]
    fn explore_matches_plain_bfs(
        rxns in arb_reactions(3, 4),
        counts in arb_counts(3, 3),
        headroom in 0u64..3,
        bi in any::<bool>(),
    ) {
        let crn = build_crn(3, &rxns);
        let c = config(&counts);
        let mode = if bi { Mode::BiDirectional } else { Mode::ForwardOnly };
        let max_total = (c.total() + headroom).max(1);
        let rs = explore(&crn, &c, mode, Cap::new(max_total, 1 << 20).unwrap()).unwrap();
        let (oracle, closed) = naive_reach(&crn, &c, mode, max_total);
        prop_assert_eq!(rs.len(), oracle.len());
        prop_assert!(rs.members().all(|m| oracle.contains(&m)));
        prop_assert_eq!(rs.closed(), closed);
        prop_assert_eq!(rs.start(), &c);
        prop_assert_eq!(rs.get(0).unwrap(), c.clone());
    }

    #[test]
    fn witnesses_replay_to_their_targets(
        rxns in arb_reactions(3, 4),
        counts in arb_counts(3, 3),
        bi in any::<bool>(),
    ) {
        let crn = build_crn(3, &rxns);
        let c = config(&counts);
        let mode = if bi { Mode::BiDirectional } else { Mode::ForwardOnly };
        let rs = explore(&crn, &c, mode, Cap::new(c.total() + 2, 1 << 20).unwrap()).unwrap();
        for m in rs.members() {
            let w = rs.witness(&m).unwrap();
            if mode == Mode::ForwardOnly {
                prop_assert!(w.is_forward());
            }
            prop_assert_eq!(rrcrn::transform::endpoint(&crn, &w).unwrap(), m);
        }
    }

    #[test]
    fn closed_sets_contain_their_successors(
        rxns in arb_conservative_reactions(3, 4),
        counts in arb_counts(3, 3),
    ) {
        let crn = build_crn(3, &rxns);
        let c = config(&counts);
        let rs = explore(&crn, &c, Mode::BiDirectional, Cap::new(c.total().max(1), 1 << 20).unwrap()).unwrap();
        prop_assert!(rs.closed());
        for m in rs.members() {
            for (_, n) in crn.successors(&m, Mode::BiDirectional) {
                prop_assert!(rs.contains(&n));
            }
        }
    }

    #[test]
    fn state_limit_is_respected(rxns in arb_reactions(3, 4), counts in arb_counts(3, 3), limit in 1usize..6) {
        let crn = build_crn(3, &rxns);
        let c = config(&counts);
        let rs = explore(&crn, &c, Mode::BiDirectional, Cap::new(c.total() + 3, limit).unwrap()).unwrap();
        prop_assert!(rs.len() <= limit);
        let (oracle, _) = naive_reach(&crn, &c, Mode::BiDirectional, c.total() + 3);
        prop_assert_eq!(rs.hit_state_limit(), oracle.len() > limit);
    }
}

#[test]
fn wide_counts_use_the_same_semantics() {
    let crn = rrcrn::Crn::from_reactions(&["2 X -> Y", "Y -> Z"]).unwrap();
    let start = crn.config(&[("X", 300)]).unwrap();
    let rs = explore(&crn, &start, Mode::ForwardOnly, Cap::new(300, 1 << 20).unwrap()).unwrap();
    let (oracle, closed) = naive_reach(&crn, &start, Mode::ForwardOnly, 300);
    assert!(closed && rs.closed());
    assert_eq!(rs.len(), oracle.len());
    assert!(rs.contains(&crn.config(&[("Z", 150)]).unwrap()));
    assert!(!rs.contains(&crn.config(&[("Z", 151)]).unwrap()));
}

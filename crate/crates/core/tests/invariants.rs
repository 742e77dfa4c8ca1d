mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rrcrn::construct::{
    combine_boolean, compile_affine, compile_mod, compile_threshold, complement, AffineSpec, BoolOp, ModSpec,
    ThresholdSpec,
};
use rrcrn::{check, conserved_along, find_linear_invariants, Configuration, Crn, Device, Invariant};

/// Rank over the rationals by fraction-free elimination on `i128`.
fn rank(mut rows: Vec<Vec<i128>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let (a, b) = (rows[r][c], rows[i][c]);
                for j in 0..cols {
                    rows[i][j] = rows[i][j] * a - rows[r][j] * b;
                }
                let g = rows[i].iter().fold(0i128, |g, &v| num_gcd(g, v.abs()));
                if g > 1 {
                    rows[i].iter_mut().for_each(|v| *v /= g);
                }
            }
        }
        r += 1;
    }
    r
}

fn num_gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

fn net_changes(crn: &Crn) -> Vec<Vec<i128>> {
    (0..crn.reactions().len())
        .map(|r| crn.net_change(r).unwrap().into_iter().map(i128::from).collect())
        .collect()
}

proptest! {
    #[test]
    fn basis_spans_the_left_kernel(rxns in arb_reactions(4, 4)) {
        let crn = build_crn(4, &rxns);
        let basis = find_linear_invariants(&crn);
        let changes = net_changes(&crn);
        for b in &basis {
            prop_assert!(check(&crn, &Invariant::Linear(b.clone())).holds());
            prop_assert!(!b.is_zero());
        }
        prop_assert_eq!(basis.len(), 4 - rank(changes));
        let vectors: Vec<Vec<i128>> = basis.iter().map(|b| b.weights.iter().map(|&w| i128::from(w)).collect()).collect();
        prop_assert_eq!(rank(vectors), basis.len());
    }

    #[test]
    fn check_agrees_with_executions(
        rxns in arb_reactions(3, 4),
        weights in prop::collection::vec(-2i64..=2, 3),
        counts in arb_counts(3, 3),
        seed in any::<u64>(),
    ) {
        let crn = build_crn(3, &rxns);
        let inv = Invariant::linear(weights);
        let start = Configuration::from_counts(counts);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let exec = random_bi_execution(&crn, &start, 12, start.total() + 4, &mut rng);
        let report = check(&crn, &inv);
        let conserved = conserved_along(&crn, &inv, &exec).unwrap();
        if report.holds() {
            prop_assert!(conserved);
        }
        let hits_violation = exec.steps.iter().any(|s| report.violations.iter().any(|&(r, _)| r == s.reaction));
        if !hits_violation {
            prop_assert!(conserved);
        }
        // A single violating step always changes the value.
        for (r, residual) in &report.violations {
            let d = step_delta(&crn, rrcrn::Step::forward(*r));
            let value: i64 = inv.weights().iter().zip(&d).map(|(w, x)| w * x).sum();
            prop_assert_eq!(value, *residual);
        }
    }

    #[test]
    fn linear_invariants_are_modular_invariants(
        rxns in arb_reactions(3, 4),
        weights in prop::collection::vec(-3i64..=3, 3),
        m in 2i64..6,
    ) {
        let crn = build_crn(3, &rxns);
        let modular = Invariant::modular(weights.clone(), m).unwrap();
        if check(&crn, &Invariant::linear(weights)).holds() {
            prop_assert!(check(&crn, &modular).holds());
        }
        for (_, residual) in check(&crn, &modular).violations {
            prop_assert!(residual.rem_euclid(m) != 0);
        }
    }

    #[test]
    fn compiled_mod_invariants_hold(weights in prop::collection::vec(-4i64..=4, 1..3), c in -3i64..6, m in 2i64..6) {
        let d = compile_mod(&ModSpec::new(weights.clone(), c, m).unwrap()).unwrap();
        all_hold(&d)?;
        let k = weights.len();
        prop_assert_eq!(d.crn.num_species(), k + m as usize);
        prop_assert_eq!(d.crn.reactions().len(), k + (m * (m + 1) / 2) as usize);
    }

    #[test]
    fn compiled_threshold_invariants_hold(weights in prop::collection::vec(-3i64..=3, 1..3), t in -4i64..5) {
        let d = compile_threshold(&ThresholdSpec::new(weights.clone(), t)).unwrap();
        all_hold(&d)?;
        let c = weights.iter().map(|w| w.abs()).max().unwrap().max(t.abs()) + 1;
        let k = weights.len();
        let width = (2 * c + 1) as usize;
        prop_assert_eq!(d.crn.num_species(), k + 2 * width);
        for p in -c..=c {
            let (leader, follower) = (format!("YL_{p}"), format!("YF_{p}"));
            prop_assert!(d.crn.species_id(&leader).is_some());
            prop_assert!(d.crn.species_id(&follower).is_some());
        }
        let outside = format!("YL_{}", c + 1);
        prop_assert!(d.crn.species_id(&outside).is_none());
        prop_assert_eq!(d.crn.reactions().len(), k + width * (width + 1) / 2 + width * width);
    }

    #[test]
    fn compiled_affine_invariants_hold(
        terms in prop::collection::vec((-3i64..=3, 1i64..=3, 0i64..=2), 1..3),
        b in 0i64..4,
    ) {
        let coefficients = terms.iter().map(|&(n, d, _)| num_rational::Ratio::new(n, d)).collect();
        let offsets = terms.iter().map(|&(_, _, c)| c).collect();
        let d = compile_affine(&AffineSpec::new(coefficients, offsets, b).unwrap()).unwrap();
        all_hold(&d)?;
    }

    #[test]
    fn boolean_combinations_keep_invariants(m in 2i64..4, t in -2i64..3, or in any::<bool>()) {
        let a = compile_mod(&ModSpec::new(vec![1], 0, m).unwrap()).unwrap();
        let b = compile_threshold(&ThresholdSpec::new(vec![1], t)).unwrap();
        let op = if or { BoolOp::Or } else { BoolOp::And };
        let d = combine_boolean(&a, &complement(&b).unwrap(), op).unwrap();
        all_hold(&d)?;
        prop_assert!(d.invariants.iter().any(|i| i.name.as_deref() == Some("I_V")));
    }
}

fn all_hold(d: &Device) -> std::result::Result<(), TestCaseError> {
    prop_assert!(!d.invariants.is_empty());
    for inv in &d.invariants {
        let report = check(&d.crn, &inv.invariant);
        prop_assert!(report.holds(), "{} violated: {:?}", inv.label(), report.violations);
    }
    Ok(())
}

#[test]
fn halving_basis() {
    let crn = Crn::from_reactions(&["2 X -> Y"]).unwrap();
    let basis = find_linear_invariants(&crn);
    assert_eq!(basis.len(), 1);
    assert_eq!(basis[0].weights, vec![1, 2]);
}

#[test]
fn trap_has_no_invariants() {
    let crn = Crn::from_reactions(&["2 X -> Y", "Z -> Y", "Z ->"]).unwrap();
    assert!(find_linear_invariants(&crn).is_empty());
}

#[test]
fn parity_invariant_is_modular_only() {
    let d = compile_mod(&ModSpec::new(vec![1], 0, 2).unwrap()).unwrap();
    let inv = &d.invariants[0].invariant;
    assert_eq!(inv.modulus(), Some(2));
    assert!(check(&d.crn, inv).holds());
    let lin = Invariant::Linear(match inv {
        Invariant::Modular(m) => m.linearization(),
        _ => unreachable!(),
    });
    assert!(!check(&d.crn, &lin).holds());
}

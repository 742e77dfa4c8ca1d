#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rrcrn::crn::Multiset;
use rrcrn::{Configuration, Crn, Device, Direction, Execution, Expected, Mode, Reaction, Step};

/// Plain breadth-first closure using only `Crn::successors`. Returns the
/// members and whether no successor was dropped for exceeding `max_total`.
pub fn naive_reach(crn: &Crn, start: &Configuration, mode: Mode, max_total: u64) -> (HashSet<Configuration>, bool) {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    let mut closed = true;
    seen.insert(start.clone());
    queue.push_back(start.clone());
    while let Some(c) = queue.pop_front() {
        for (_, n) in crn.successors(&c, mode) {
            if n.total() > max_total {
                closed = false;
                continue;
            }
            if seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    (seen, closed)
}

/// Stable or reverse-robust correctness straight from the definitions, for
/// systems that stay within `max_total`. `None` if they do not.
pub fn naive_correct(dev: &Device, start: &Configuration, mode: Mode, expected: Expected, max_total: u64) -> Option<bool> {
    let (reach, closed) = naive_reach(&dev.crn, start, mode, max_total);
    if !closed {
        return None;
    }
    let mut good = HashSet::new();
    for c in &reach {
        let (fwd, closed) = naive_reach(&dev.crn, c, Mode::ForwardOnly, max_total);
        if !closed {
            return None;
        }
        let own = dev.output_value(c);
        if expected.matches(&own) && fwd.iter().all(|d| dev.output_value(d) == own) {
            good.insert(c.clone());
        }
    }
    Some(reach.iter().all(|c| {
        let (fwd, _) = naive_reach(&dev.crn, c, Mode::ForwardOnly, max_total);
        fwd.iter().any(|d| good.contains(d))
    }))
}

/// Random walk of up to `len` steps, forward or reverse, never exceeding
/// `max_total` molecules.
pub fn random_bi_execution<R: Rng>(crn: &Crn, start: &Configuration, len: usize, max_total: u64, rng: &mut R) -> Execution {
    let mut cur = start.clone();
    let mut steps = Vec::new();
    for _ in 0..len {
        let options: Vec<(Step, Configuration)> = crn
            .successors(&cur, Mode::BiDirectional)
            .into_iter()
            .filter(|(_, n)| n.total() <= max_total)
            .collect();
        let Some((s, n)) = options.choose(rng).cloned() else {
            break;
        };
        steps.push(s);
        cur = n;
    }
    Execution::new(start.clone(), steps)
}

pub fn species_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("S{i}")).collect()
}

pub fn build_crn(n: usize, reactions: &[(Multiset, Multiset)]) -> Crn {
    let mut b = Crn::builder();
    for name in species_names(n) {
        b.species(&name);
    }
    for (a, p) in reactions {
        b.push(Reaction::new(a.clone(), p.clone()));
    }
    b.build()
}

fn arb_side(n: usize, size: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Multiset> {
    prop::collection::vec(0..n, size).prop_map(|ids| ids.into_iter().map(|s| (s, 1)).collect())
}

/// Random reactions over `n` species with sides of at most two molecules.
pub fn arb_reactions(n: usize, max: usize) -> impl Strategy<Value = Vec<(Multiset, Multiset)>> {
    prop::collection::vec((arb_side(n, 0..=2), arb_side(n, 0..=2)), 1..=max)
}

/// Random reactions whose two sides have equal size, so every step in
/// either direction keeps the molecule count.
pub fn arb_conservative_reactions(n: usize, max: usize) -> impl Strategy<Value = Vec<(Multiset, Multiset)>> {
    prop::collection::vec(
        (1usize..=2).prop_flat_map(move |k| (arb_side(n, k..=k), arb_side(n, k..=k))),
        1..=max,
    )
}

/// Random reactions that never increase the molecule count when applied
/// forward.
pub fn arb_nonincreasing_reactions(n: usize, max: usize) -> impl Strategy<Value = Vec<(Multiset, Multiset)>> {
    prop::collection::vec(
        (1usize..=2)
            .prop_flat_map(move |k| (arb_side(n, k..=k), arb_side(n, 0..=k))),
        1..=max,
    )
}

pub fn arb_counts(n: usize, max: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..=max, n)
}

/// Net change of a step, computed from the reaction sides directly.
pub fn step_delta(crn: &Crn, s: Step) -> Vec<i64> {
    let rxn = &crn.reactions()[s.reaction];
    let mut d = vec![0i64; crn.num_species()];
    for &(x, k) in rxn.reactants() {
        d[x] -= i64::from(k);
    }
    for &(x, k) in rxn.products() {
        d[x] += i64::from(k);
    }
    if s.direction == Direction::Reverse {
        d.iter_mut().for_each(|v| *v = -*v);
    }
    d
}

// Arithmetic oracles, written out independently of the library's specs.

pub fn parity_even(x: i64) -> bool {
    x % 2 == 0
}

pub fn mod23(x1: i64, x2: i64) -> bool {
    (2 * x1 + 3 * x2).rem_euclid(4) == 1
}

pub fn diff_nonneg(x1: i64, x2: i64) -> bool {
    x1 >= x2
}

pub fn double_at_least_3(x: i64) -> bool {
    2 * x >= 3
}

/// `2 + (x - 1) / 2` on odd `x`.
pub fn affine_example(x: i64) -> Option<i64> {
    (x % 2 == 1).then(|| 2 + (x - 1) / 2)
}

pub fn half_floor(x: i64) -> i64 {
    x.div_euclid(2)
}

fn random_side<R: Rng>(n: usize, rng: &mut R) -> Multiset {
    (0..rng.gen_range(0..=2)).map(|_| (rng.gen_range(0..n), 1)).collect()
}

pub fn random_crn<R: Rng>(rng: &mut R) -> Crn {
    let n = rng.gen_range(2..=4);
    let rxns: Vec<(Multiset, Multiset)> = (0..rng.gen_range(1..=4))
        .map(|_| (random_side(n, rng), random_side(n, rng)))
        .collect();
    build_crn(n, &rxns)
}

/// Whether nothing `first` produces is consumed by `second`.
pub fn independent(crn: &Crn, first: Step, second: Step) -> bool {
    let produced = crn.reactions()[first.reaction].produced(first.direction);
    let consumed = crn.reactions()[second.reaction].consumed(second.direction);
    !produced.iter().any(|(s, _)| consumed.iter().any(|(t, _)| t == s))
}

/// Random execution in which steps `index` and `index + 1` satisfy the
/// commutation hypothesis.
pub fn random_commutation_case<R: Rng>(rng: &mut R) -> (Crn, Execution, usize) {
    loop {
        let crn = random_crn(rng);
        let counts = (0..crn.num_species()).map(|_| rng.gen_range(0..=3)).collect();
        let start = Configuration::from_counts(counts);
        let bound = start.total() + 3;
        let prefix = random_bi_execution(&crn, &start, rng.gen_range(0..4), bound, rng);
        let mid = rrcrn::transform::endpoint(&crn, &prefix).unwrap();
        let firsts = crn.successors(&mid, Mode::BiDirectional);
        let Some((s1, c1)) = firsts.choose(rng).cloned() else {
            continue;
        };
        let seconds: Vec<(Step, Configuration)> = crn
            .successors(&c1, Mode::BiDirectional)
            .into_iter()
            .filter(|(s2, _)| independent(&crn, s1, *s2))
            .collect();
        let Some((s2, c2)) = seconds.choose(rng).cloned() else {
            continue;
        };
        let suffix = random_bi_execution(&crn, &c2, rng.gen_range(0..3), bound + 2, rng);
        let index = prefix.len();
        let mut steps = prefix.steps;
        steps.extend([s1, s2]);
        steps.extend(suffix.steps);
        return (crn, Execution::new(start, steps), index);
    }
}

/// Random bi-execution of a composed device, then forward splits until no
/// unsplit input remains.
pub fn random_split_execution<R: Rng>(
    crn: &Crn,
    inputs: &[rrcrn::SpeciesId],
    split_reactions: &[usize],
    start: &Configuration,
    len: usize,
    max_total: u64,
    rng: &mut R,
) -> Execution {
    let mut exec = random_bi_execution(crn, start, len, max_total, rng);
    let mut end = rrcrn::transform::endpoint(crn, &exec).unwrap();
    for (&x, &r) in inputs.iter().zip(split_reactions) {
        while end.get(x) > 0 {
            end = crn.apply(&end, r, Direction::Forward).unwrap();
            exec.steps.push(Step::forward(r));
        }
    }
    exec
}

/// Uniformly random forward steps, skipping steps that leave the
/// configuration unchanged, until none is enabled. `None` if that takes
/// more than `max_steps`.
pub fn run_to_terminal<R: Rng>(crn: &Crn, start: &Configuration, max_steps: usize, rng: &mut R) -> Option<Configuration> {
    let mut cur = start.clone();
    for _ in 0..max_steps {
        let options: Vec<Configuration> = crn
            .successors(&cur, Mode::ForwardOnly)
            .into_iter()
            .map(|(_, n)| n)
            .filter(|n| *n != cur)
            .collect();
        match options.choose(rng) {
            Some(n) => cur = n.clone(),
            None => return Some(cur),
        }
    }
    None
}

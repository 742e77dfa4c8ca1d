use crate::crn::{Crn, Reaction, SpeciesId};
use crate::device::{Device, OutputSpec};
use crate::error::{Error, Result};
use crate::invariant::{Invariant, NamedInvariant};

use super::compose::{Composer, SparseInvariant};
use super::spec::{ModSpec, Oracle, PredicateSpec, ThresholdSpec};
use super::input_names;

/// Decider for `Σ w_i x_i ≡ c (mod m)`.
///
/// `X_i → Y_{w_i mod m}` per input and `Y_p + Y_q → Y_{(p+q) mod m}` per
/// unordered pair `p ≤ q`; `Y_c` votes yes, every other `Y_p` votes no.
pub fn compile_mod(spec: &ModSpec) -> Result<Device> {
    let m = spec.modulus();
    if m < 2 {
        return Err(Error::BadModulus(m));
    }
    let mut b = Crn::builder().dedup(true);
    let xs: Vec<SpeciesId> = input_names(spec.weights.len())
        .iter()
        .map(|n| b.species(n))
        .collect();
    let ys: Vec<SpeciesId> = (0..m).map(|p| b.species(&format!("Y{p}"))).collect();

    for (&x, &w) in xs.iter().zip(&spec.weights) {
        b.push(Reaction::new(vec![(x, 1)], vec![(ys[w.rem_euclid(m) as usize], 1)]));
    }
    for p in 0..m {
        for q in p..m {
            let sum = ((p + q) % m) as usize;
            b.push(Reaction::new(
                vec![(ys[p as usize], 1), (ys[q as usize], 1)],
                vec![(ys[sum], 1)],
            ));
        }
    }
    let crn = b.build();

    let c = spec.residue() as usize;
    let yes = vec![ys[c]];
    let no = ys.iter().copied().filter(|&y| y != ys[c]).collect();

    let mut w = vec![0i64; crn.num_species()];
    for (&x, &wi) in xs.iter().zip(&spec.weights) {
        w[x] = wi;
    }
    for (p, &y) in ys.iter().enumerate() {
        w[y] = p as i64;
    }

    let mut dev = Device::new(crn, xs, Vec::new(), OutputSpec::Vote { yes, no })?;
    dev.invariants.push(NamedInvariant::new("I_M", Invariant::modular(w, m)?));
    dev.oracle = Some(Oracle::Predicate(PredicateSpec::Mod(spec.clone())));
    Ok(dev)
}

/// Decider for `Σ w_i x_i ≥ t`.
///
/// Leaders `YL_p` and followers `YF_p` for `-c ≤ p ≤ c`, where
/// `c = max(|w_i|, |t|) + 1`. Sums that leave `[-c, c]` are clamped onto
/// the leader and the excess is kept in a follower.
pub fn compile_threshold(spec: &ThresholdSpec) -> Result<Device> {
    let c = spec.clamp();
    let mut b = Crn::builder().dedup(true);
    let xs: Vec<SpeciesId> = input_names(spec.weights.len())
        .iter()
        .map(|n| b.species(n))
        .collect();
    let range = -c..=c;
    let leaders: Vec<SpeciesId> = range.clone().map(|p| b.species(&format!("YL_{p}"))).collect();
    let followers: Vec<SpeciesId> = range.clone().map(|p| b.species(&format!("YF_{p}"))).collect();
    let at = |v: &[SpeciesId], p: i64| v[(p + c) as usize];

    for (&x, &w) in xs.iter().zip(&spec.weights) {
        b.push(Reaction::new(vec![(x, 1)], vec![(at(&leaders, w), 1)]));
    }
    for p in range.clone() {
        for second in [&leaders, &followers] {
            for q in range.clone() {
                let s = p + q;
                let products = if s < -c {
                    vec![(at(&leaders, -c), 1), (at(&followers, s + c), 1)]
                } else if s > c {
                    vec![(at(&leaders, c), 1), (at(&followers, s - c), 1)]
                } else {
                    vec![(at(&leaders, s), 1)]
                };
                b.push(Reaction::new(
                    vec![(at(&leaders, p), 1), (at(second, q), 1)],
                    products,
                ));
            }
        }
    }
    let crn = b.build();

    let yes = range.clone().filter(|&p| p >= spec.threshold).map(|p| at(&leaders, p)).collect();
    let no = range.clone().filter(|&p| p < spec.threshold).map(|p| at(&leaders, p)).collect();

    let mut w = vec![0i64; crn.num_species()];
    for (&x, &wi) in xs.iter().zip(&spec.weights) {
        w[x] = wi;
    }
    for p in range {
        w[at(&leaders, p)] = p;
        w[at(&followers, p)] = p;
    }

    let mut dev = Device::new(crn, xs, Vec::new(), OutputSpec::Vote { yes, no })?;
    dev.invariants.push(NamedInvariant::new("I_T", Invariant::linear(w)));
    dev.oracle = Some(Oracle::Predicate(PredicateSpec::Threshold(spec.clone())));
    Ok(dev)
}

/// Same reactions, yes and no voters exchanged.
pub fn complement(dev: &Device) -> Result<Device> {
    let OutputSpec::Vote { yes, no } = &dev.output else {
        return Err(Error::InvalidArgument("complement needs a decider".into()));
    };
    let mut out = dev.clone();
    out.output = OutputSpec::Vote {
        yes: no.clone(),
        no: yes.clone(),
    };
    out.oracle = match &dev.oracle {
        Some(Oracle::Predicate(PredicateSpec::Not(inner))) => Some(Oracle::Predicate((**inner).clone())),
        Some(Oracle::Predicate(p)) => Some(Oracle::Predicate(PredicateSpec::not(p.clone()))),
        _ => None,
    };
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoolOp {
    And,
    Or,
}

/// Runs both deciders on split copies of the input and records their votes
/// in `V_ab` (a: first decider, b: second), flipped by catalytic reactions
/// driven by each sub-decider's voters.
pub fn combine_boolean(d1: &Device, d2: &Device, op: BoolOp) -> Result<Device> {
    let (OutputSpec::Vote { yes: yes1, no: no1 }, OutputSpec::Vote { yes: yes2, no: no2 }) =
        (&d1.output, &d2.output)
    else {
        return Err(Error::InvalidArgument("Boolean combination needs two deciders".into()));
    };
    let mut comp = Composer::new(&[d1, d2], &["VNN"])?;
    let b = &mut comp.builder;
    let [vnn, vny, vyn, vyy] = ["VNN", "VNY", "VYN", "VYY"].map(|n| b.species(n));
    let voter = |first: char, second: char| match (first, second) {
        ('N', 'N') => vnn,
        ('N', 'Y') => vny,
        ('Y', 'N') => vyn,
        _ => vyy,
    };
    let flip = |c: char| if c == 'Y' { 'N' } else { 'Y' };

    let (map1, map2) = (comp.units[0].clone(), comp.units[1].clone());
    for (vote, voters1, voters2) in [('Y', yes1, yes2), ('N', no1, no2)] {
        // S_b + V_{b̄?} → S_b + V_{b?}
        for &s in voters1 {
            for other in ['N', 'Y'] {
                b.push(Reaction::new(
                    vec![(map1[s], 1), (voter(flip(vote), other), 1)],
                    vec![(map1[s], 1), (voter(vote, other), 1)],
                ));
            }
        }
        // T_b + V_{?b̄} → T_b + V_{?b}
        for &t in voters2 {
            for other in ['N', 'Y'] {
                b.push(Reaction::new(
                    vec![(map2[t], 1), (voter(other, flip(vote)), 1)],
                    vec![(map2[t], 1), (voter(other, vote), 1)],
                ));
            }
        }
    }

    let (yes, no) = match op {
        BoolOp::Or => (vec![vny, vyn, vyy], vec![vnn]),
        BoolOp::And => (vec![vyy], vec![vnn, vny, vyn]),
    };
    let mut votes_terms: Vec<(SpeciesId, i64)> = comp.inputs.iter().map(|&x| (x, 1)).collect();
    votes_terms.extend([vnn, vny, vyn, vyy].map(|s| (s, 1)));
    let composition = comp.finish(vec![SparseInvariant::linear("I_V", votes_terms)]);

    let mut dev = Device::new(
        composition.crn,
        composition.inputs,
        composition.context,
        OutputSpec::Vote { yes, no },
    )?;
    dev.invariants = composition.invariants;
    dev.oracle = match (&d1.oracle, &d2.oracle) {
        (Some(Oracle::Predicate(p1)), Some(Oracle::Predicate(p2))) => Some(Oracle::Predicate(match op {
            BoolOp::And => PredicateSpec::and(p1.clone(), p2.clone()),
            BoolOp::Or => PredicateSpec::or(p1.clone(), p2.clone()),
        })),
        _ => None,
    };
    Ok(dev)
}

/// Compiles a predicate tree bottom-up.
pub fn compile_predicate(p: &PredicateSpec) -> Result<Device> {
    p.arity()?;
    match p {
        PredicateSpec::Mod(m) => compile_mod(m),
        PredicateSpec::Threshold(t) => compile_threshold(t),
        PredicateSpec::Not(inner) => complement(&compile_predicate(inner)?),
        PredicateSpec::And(a, b) => combine_boolean(&compile_predicate(a)?, &compile_predicate(b)?, BoolOp::And),
        PredicateSpec::Or(a, b) => combine_boolean(&compile_predicate(a)?, &compile_predicate(b)?, BoolOp::Or),
    }
}

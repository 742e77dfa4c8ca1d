//! Execution rewriting: replay, commutation of independent adjacent steps,
//! cancellation of inverse pairs, and normalization of input-splitting
//! steps into a forward-only prefix.

use crate::crn::{Configuration, Crn, Direction, Step};
use crate::error::{Error, Result};
use crate::reach::Execution;

/// Configurations `c_0, …, c_n` visited by `exec`.
pub fn replay(crn: &Crn, exec: &Execution) -> Result<Vec<Configuration>> {
    let mut out = Vec::with_capacity(exec.len() + 1);
    out.push(exec.start.clone());
    for (i, &step) in exec.steps.iter().enumerate() {
        let rxn = crn.reaction(step.reaction).map_err(|e| Error::ReplayFailure {
            step: i,
            reason: e.to_string(),
        })?;
        let last = out.last().expect("nonempty");
        let next = last.try_step(rxn, step.direction).ok_or_else(|| Error::ReplayFailure {
            step: i,
            reason: format!(
                "{} of `{}` needs {} at {}",
                match step.direction {
                    Direction::Forward => "forward",
                    Direction::Reverse => "reverse",
                },
                crn.format_reaction(step.reaction),
                crn.format_multiset(rxn.consumed(step.direction)),
                crn.format_config(last),
            ),
        })?;
        out.push(next);
    }
    Ok(out)
}

/// Final configuration of `exec`.
pub fn endpoint(crn: &Crn, exec: &Execution) -> Result<Configuration> {
    Ok(replay(crn, exec)?.pop().expect("nonempty"))
}

/// First species produced by `first` and consumed by `second`, if any.
fn blocking_species(crn: &Crn, first: Step, second: Step) -> Result<Option<usize>> {
    let r1 = crn.reaction(first.reaction)?;
    let r2 = crn.reaction(second.reaction)?;
    let consumed = r2.consumed(second.direction);
    Ok(r1
        .produced(first.direction)
        .iter()
        .map(|&(s, _)| s)
        .find(|s| consumed.iter().any(|(t, _)| t == s)))
}

/// Swaps steps `i` and `i + 1`. Requires that nothing step `i` produces is
/// consumed by step `i + 1`; a reverse step counts as the forward reaction
/// with reactants and products exchanged.
pub fn commute_adjacent(crn: &Crn, exec: &Execution, i: usize) -> Result<Execution> {
    if i + 1 >= exec.len() {
        return Err(Error::StepOutOfRange(i + 1));
    }
    if let Some(s) = blocking_species(crn, exec.steps[i], exec.steps[i + 1])? {
        return Err(Error::CommutationBlocked {
            index: i,
            species: crn.species_name(s).to_string(),
        });
    }
    let mut out = exec.clone();
    out.steps.swap(i, i + 1);
    Ok(out)
}

/// Removes steps `i` and `i + 1` when they are one reaction in opposite
/// directions.
pub fn cancel_inverse_pair(exec: &Execution, i: usize) -> Result<Execution> {
    if i + 1 >= exec.len() {
        return Err(Error::StepOutOfRange(i + 1));
    }
    let (a, b) = (exec.steps[i], exec.steps[i + 1]);
    if b != a.inverse() {
        return Err(Error::NotAnInversePair(i));
    }
    let mut out = exec.clone();
    out.steps.drain(i..i + 2);
    Ok(out)
}

/// Rewrites `exec` so that no split reaction runs in reverse and every
/// forward split forms a prefix, keeping both endpoints.
///
/// Each reverse split is paired with the next occurrence of the same split
/// reaction, which must be forward; the reverse step is commuted up to it
/// and the pair cancelled. Remaining forward splits are then commuted to
/// the front in their original order.
pub fn eliminate_reverse_splits(crn: &Crn, exec: &Execution, split_ids: &[usize]) -> Result<Execution> {
    let last = endpoint(crn, exec)?;
    for &r in split_ids {
        let rxn = crn.reaction(r)?;
        for &(x, _) in rxn.reactants() {
            if last.get(x) > 0 {
                return Err(Error::PreconditionViolated(format!(
                    "final configuration still holds split reactant `{}`",
                    crn.species_name(x)
                )));
            }
            if let Some(other) = (0..crn.reactions().len())
                .find(|o| !split_ids.contains(o) && crn.reactions()[*o].involves(x))
            {
                return Err(Error::PreconditionViolated(format!(
                    "split reactant `{}` also occurs in reaction {}",
                    crn.species_name(x),
                    other + 1
                )));
            }
        }
    }
    let is_split = |s: &Step| split_ids.contains(&s.reaction);

    let mut cur = exec.clone();
    while cur.steps.iter().any(|s| is_split(s) && s.direction == Direction::Reverse) {
        let Some((j, k)) = next_pair(&cur, split_ids) else {
            return Err(Error::PairingFailed {
                execution: Box::new(cur),
            });
        };
        for pos in j..k - 1 {
            cur = commute_adjacent(crn, &cur, pos).map_err(|_| Error::PairingFailed {
                execution: Box::new(cur.clone()),
            })?;
        }
        cur = cancel_inverse_pair(&cur, k - 1)?;
    }

    let mut prefix = 0;
    for k in 0..cur.len() {
        if !is_split(&cur.steps[k]) {
            continue;
        }
        for pos in (prefix..k).rev() {
            cur = commute_adjacent(crn, &cur, pos)?;
        }
        prefix += 1;
    }
    Ok(cur)
}

/// Earliest forward split whose previous occurrence of the same reaction
/// is a reverse step, as `(reverse position, forward position)`.
fn next_pair(exec: &Execution, split_ids: &[usize]) -> Option<(usize, usize)> {
    let mut last_seen: Vec<Option<(usize, Direction)>> = vec![None; split_ids.len()];
    for (k, step) in exec.steps.iter().enumerate() {
        let Some(slot) = split_ids.iter().position(|&r| r == step.reaction) else {
            continue;
        };
        if step.direction == Direction::Forward {
            if let Some((j, Direction::Reverse)) = last_seen[slot] {
                return Some((j, k));
            }
        }
        last_seen[slot] = Some((k, step.direction));
    }
    None
}

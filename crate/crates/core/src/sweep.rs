//! Verification over a box of inputs, aggregated worst-first.

use crate::construct::grid;
use crate::device::{Device, OutputSpec};
use crate::error::Result;
use crate::reach::{verify, Cap, Model, Verification};

#[derive(Debug, Clone)]
pub enum PointOutcome {
    Checked(Verification),
    /// A leaderless decider on the all-zero input holds no molecules and
    /// therefore never votes; such points are reported, not judged.
    Excluded(String),
    /// The oracle is undefined at this input.
    OutsideDomain,
}

#[derive(Debug, Clone)]
pub struct GridPoint {
    pub input: Vec<u32>,
    pub outcome: PointOutcome,
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub model: Model,
    pub cap_extra: u64,
    pub cap_states: usize,
}

/// Verifies every input in `[lo, hi]^k`, in lexicographic order.
pub fn verify_grid(dev: &Device, lo: u32, hi: u32, opts: SweepOptions) -> Result<Vec<GridPoint>> {
    grid(dev.arity(), i64::from(lo), i64::from(hi))
        .into_iter()
        .map(|x| {
            let input: Vec<u32> = x.iter().map(|&v| v as u32).collect();
            let outcome = verify_point(dev, &input, opts)?;
            Ok(GridPoint { input, outcome })
        })
        .collect()
}

pub fn verify_point(dev: &Device, input: &[u32], opts: SweepOptions) -> Result<PointOutcome> {
    let start = dev.initial_configuration(input)?;
    if matches!(dev.output, OutputSpec::Vote { .. }) && start.is_empty() {
        return Ok(PointOutcome::Excluded(
            "initial configuration is empty, so no voter can ever appear".into(),
        ));
    }
    if !dev.in_domain(input) {
        return Ok(PointOutcome::OutsideDomain);
    }
    let cap = Cap::with_headroom(&start, opts.cap_extra, opts.cap_states);
    Ok(PointOutcome::Checked(verify(dev, input, opts.model, cap, None)?))
}

/// Most severe verdict among checked points, as an index into `points`.
pub fn worst(points: &[GridPoint]) -> Option<usize> {
    points
        .iter()
        .enumerate()
        .filter_map(|(i, p)| match &p.outcome {
            PointOutcome::Checked(v) => Some((i, v.verdict.severity())),
            _ => None,
        })
        .max_by_key(|&(i, s)| (s, std::cmp::Reverse(i)))
        .map(|(i, _)| i)
}

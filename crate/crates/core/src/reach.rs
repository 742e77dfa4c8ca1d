//! Bounded exploration of forward- and bi-reachable configuration sets, and
//! verification of stable / reverse-robust computation on top of it.
//!
//! Reachable sets are usually infinite under bi-directional semantics, so
//! every exploration is bounded by a [`Cap`]. A `VerifiedUpToCap` verdict
//! only speaks about configurations within the cap; a `Refuted` verdict is
//! unconditional because its certificate is a closed forward set.

use std::hash::Hasher;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use hashbrown::HashTable;
use rustc_hash::{FxHashMap, FxHasher};
use serde::{Deserialize, Serialize};

use crate::crn::{Configuration, Crn, Direction, Mode, Step};
use crate::device::{Device, Expected, OutputValue};
use crate::error::{Error, Result};


pub const DEFAULT_CAP_EXTRA: u64 = 16;
pub const DEFAULT_CAP_STATES: usize = 1_000_000;

/// Exploration bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cap {
    /// No explored configuration holds more molecules than this.
    pub max_total_count: u64,
    /// No exploration stores more configurations than this.
    pub max_states: usize,
}

impl Cap {
    pub fn new(max_total_count: u64, max_states: usize) -> Result<Cap> {
        if max_total_count == 0 || max_states == 0 {
            return Err(Error::InvalidArgument("cap bounds must be at least 1".into()));
        }
        Ok(Cap {
            max_total_count,
            max_states,
        })
    }

    /// `initial total + extra` molecules.
    pub fn with_headroom(start: &Configuration, extra: u64, max_states: usize) -> Cap {
        Cap {
            max_total_count: (start.total() + extra).max(1),
            max_states: max_states.max(1),
        }
    }
}

/// A start configuration and a sequence of directed reaction steps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Execution {
    pub start: Configuration,
    pub steps: Vec<Step>,
}

impl Execution {
    pub fn new(start: Configuration, steps: Vec<Step>) -> Self {
        Execution { start, steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_forward(&self) -> bool {
        self.steps.iter().all(|s| s.direction == Direction::Forward)
    }
}

/// Fixed-width counts stored back to back; index `i` is the `i`-th
/// configuration discovered.
#[derive(Debug, Clone)]
struct Store<T> {
    width: usize,
    len: usize,
    data: Vec<T>,
    table: HashTable<u32>,
}

trait Cell: Copy + Eq + Default + std::fmt::Debug {
    const MAX: u64;
    fn from_u32(v: u32) -> Self;
    fn to_u32(self) -> u32;
    fn hash_slice(s: &[Self]) -> u64;
    fn wrap(s: Store<Self>) -> Cells;
}

impl Cell for u8 {
    const MAX: u64 = u8::MAX as u64;
    fn from_u32(v: u32) -> Self {
        v as u8
    }
    fn to_u32(self) -> u32 {
        u32::from(self)
    }
    fn hash_slice(s: &[Self]) -> u64 {
        let mut h = FxHasher::default();
        h.write(s);
        h.finish()
    }
    fn wrap(s: Store<Self>) -> Cells {
        Cells::Narrow(s)
    }
}

impl Cell for u32 {
    const MAX: u64 = u32::MAX as u64;
    fn from_u32(v: u32) -> Self {
        v
    }
    fn to_u32(self) -> u32 {
        self
    }
    fn hash_slice(s: &[Self]) -> u64 {
        let mut h = FxHasher::default();
        for &v in s {
            h.write_u32(v);
        }
        h.finish()
    }
    fn wrap(s: Store<Self>) -> Cells {
        Cells::Wide(s)
    }
}

impl<T: Cell> Store<T> {
    fn new(width: usize) -> Self {
        Store {
            width,
            len: 0,
            data: Vec::new(),
            table: HashTable::new(),
        }
    }

    fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    fn find(&self, key: &[T], hash: u64) -> Option<usize> {
        self.table
            .find(hash, |&i| self.row(i as usize) == key)
            .map(|&i| i as usize)
    }

    fn insert(&mut self, key: &[T], hash: u64) -> usize {
        let idx = self.len;
        self.data.extend_from_slice(key);
        self.len += 1;
        let (width, data) = (self.width, &self.data);
        self.table.insert_unique(hash, idx as u32, |&i| {
            let i = i as usize;
            T::hash_slice(&data[i * width..(i + 1) * width])
        });
        idx
    }

    fn config(&self, i: usize) -> Configuration {
        Configuration::from_counts(self.row(i).iter().map(|v| v.to_u32()).collect())
    }

    fn index_of(&self, c: &Configuration) -> Option<usize> {
        if c.len() != self.width || c.counts().iter().any(|&v| u64::from(v) > T::MAX) {
            return None;
        }
        let key: Vec<T> = c.counts().iter().map(|&v| T::from_u32(v)).collect();
        self.find(&key, T::hash_slice(&key))
    }
}

#[derive(Debug, Clone)]
enum Cells {
    Narrow(Store<u8>),
    Wide(Store<u32>),
}

impl Cells {
    fn len(&self) -> usize {
        match self {
            Cells::Narrow(s) => s.len,
            Cells::Wide(s) => s.len,
        }
    }

    fn config(&self, i: usize) -> Configuration {
        match self {
            Cells::Narrow(s) => s.config(i),
            Cells::Wide(s) => s.config(i),
        }
    }

    fn index_of(&self, c: &Configuration) -> Option<usize> {
        match self {
            Cells::Narrow(s) => s.index_of(c),
            Cells::Wide(s) => s.index_of(c),
        }
    }
}

/// Forward edges among members, in CSR form: the successors of `u` are
/// `targets[offsets[u]..offsets[u + 1]]`.
#[derive(Debug, Clone, Default)]
struct ForwardEdges {
    offsets: Vec<u32>,
    targets: Vec<u32>,
    /// Some forward successor was dropped at the cap.
    leaks: Vec<bool>,
}

impl ForwardEdges {
    fn successors(&self, u: usize) -> &[u32] {
        &self.targets[self.offsets[u] as usize..self.offsets[u + 1] as usize]
    }
}

/// Configurations reached from a start by breadth-first search.
#[derive(Debug, Clone)]
pub struct ReachSet {
    start: Configuration,
    cells: Cells,
    /// `parent[i]`, `step[i]`: how member `i` was first reached (unused for 0).
    parent: Vec<u32>,
    step: Vec<u32>,
    mode: Mode,
    cap: Cap,
    dropped_over_count: u64,
    dropped_over_states: u64,
    stopped_early: bool,
    forward: Option<ForwardEdges>,
}

fn encode_step(s: Step) -> u32 {
    (s.reaction as u32) << 1 | u32::from(s.direction == Direction::Reverse)
}

fn decode_step(v: u32) -> Step {
    Step {
        reaction: (v >> 1) as usize,
        direction: if v & 1 == 1 {
            Direction::Reverse
        } else {
            Direction::Forward
        },
    }
}

impl ReachSet {
    pub fn start(&self) -> &Configuration {
        &self.start
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn cap(&self) -> Cap {
        self.cap
    }

    /// Every successor of every member is a member.
    pub fn closed(&self) -> bool {
        !self.stopped_early && self.frontier_truncated() == 0
    }

    /// Successor configurations discarded at the cap.
    pub fn frontier_truncated(&self) -> u64 {
        self.dropped_over_count + self.dropped_over_states
    }

    /// Whether the state limit (rather than the count bound) cut exploration.
    pub fn hit_state_limit(&self) -> bool {
        self.dropped_over_states > 0
    }

    pub fn contains(&self, c: &Configuration) -> bool {
        self.index_of(c).is_some()
    }

    pub fn index_of(&self, c: &Configuration) -> Option<usize> {
        self.cells.index_of(c)
    }

    pub fn get(&self, i: usize) -> Option<Configuration> {
        (i < self.len()).then(|| self.cells.config(i))
    }

    /// Members in discovery (breadth-first) order.
    pub fn members(&self) -> impl Iterator<Item = Configuration> + '_ {
        (0..self.len()).map(|i| self.cells.config(i))
    }

    /// Replayable execution from the start to `target` along stored
    /// predecessor links.
    pub fn witness(&self, target: &Configuration) -> Result<Execution> {
        let idx = self.index_of(target).ok_or(Error::NotAMember)?;
        Ok(self.witness_to(idx))
    }

    pub(crate) fn witness_to(&self, mut idx: usize) -> Execution {
        let mut steps = Vec::new();
        while idx != 0 {
            steps.push(decode_step(self.step[idx]));
            idx = self.parent[idx] as usize;
        }
        steps.reverse();
        Execution::new(self.start.clone(), steps)
    }
}

/// Breadth-first closure of `start` in the given mode, bounded by `cap`.
pub fn explore(crn: &Crn, start: &Configuration, mode: Mode, cap: Cap) -> Result<ReachSet> {
    explore_with(crn, start, mode, cap, |_, _| ControlFlow::Continue(()))
}

/// Like [`explore`], calling `visit(index, config)` on every new member
/// (the start included). Returning `Break` stops the search.
pub fn explore_with<F>(crn: &Crn, start: &Configuration, mode: Mode, cap: Cap, visit: F) -> Result<ReachSet>
where
    F: FnMut(usize, &Configuration) -> ControlFlow<()>,
{
    search(crn, start, mode, cap, false, visit)
}

/// One reaction applied in one direction, precomputed.
struct Move {
    step: u32,
    forward: bool,
    consumed: Vec<(usize, u32)>,
    delta: Vec<(usize, i64)>,
    change: i64,
}

fn moves(crn: &Crn, mode: Mode) -> Vec<Move> {
    let n = crn.num_species();
    let mut out = Vec::new();
    for (r, rxn) in crn.reactions().iter().enumerate() {
        let dirs: &[Direction] = match mode {
            Mode::ForwardOnly => &[Direction::Forward],
            Mode::BiDirectional => &[Direction::Forward, Direction::Reverse],
        };
        for &d in dirs {
            let mut net = rxn.net_change(n);
            if d == Direction::Reverse {
                net.iter_mut().for_each(|v| *v = -*v);
            }
            out.push(Move {
                step: encode_step(Step { reaction: r, direction: d }),
                forward: d == Direction::Forward,
                consumed: rxn.consumed(d).to_vec(),
                delta: net.iter().enumerate().filter(|(_, &v)| v != 0).map(|(s, &v)| (s, v)).collect(),
                change: net.iter().sum(),
            });
        }
    }
    out
}

fn search<F>(crn: &Crn, start: &Configuration, mode: Mode, cap: Cap, record: bool, visit: F) -> Result<ReachSet>
where
    F: FnMut(usize, &Configuration) -> ControlFlow<()>,
{
    let total = start.total();
    if total > cap.max_total_count {
        return Err(Error::CapUnreasonable {
            total,
            cap: cap.max_total_count,
        });
    }
    if cap.max_total_count <= u8::MAX as u64 {
        search_in::<u8, F>(crn, start, mode, cap, record, visit)
    } else {
        search_in::<u32, F>(crn, start, mode, cap, record, visit)
    }
}

fn search_in<T: Cell, F>(
    crn: &Crn,
    start: &Configuration,
    mode: Mode,
    cap: Cap,
    record: bool,
    mut visit: F,
) -> Result<ReachSet>
where
    F: FnMut(usize, &Configuration) -> ControlFlow<()>,
{
    let n = crn.num_species();
    let moves = moves(crn, mode);
    let mut store = Store::<T>::new(n);
    let key: Vec<T> = start.counts().iter().map(|&v| T::from_u32(v)).collect();
    store.insert(&key, T::hash_slice(&key));
    let mut parent = vec![0u32];
    let mut step = vec![0u32];
    let mut forward = record.then(ForwardEdges::default);
    let mut dropped_over_count = 0;
    let mut dropped_over_states = 0;

    let finish = |store, parent, step, dropped_over_count, dropped_over_states, stopped_early, forward| {
        ReachSet {
            start: start.clone(),
            cells: T::wrap(store),
            parent,
            step,
            mode,
            cap,
            dropped_over_count,
            dropped_over_states,
            stopped_early,
            forward,
        }
    };

    if visit(0, start).is_break() {
        return Ok(finish(store, parent, step, 0, 0, true, forward));
    }

    let mut cur: Vec<u32> = vec![0; n];
    let mut next: Vec<T> = vec![T::default(); n];
    let mut head = 0;
    while head < store.len {
        for (c, v) in cur.iter_mut().zip(store.row(head)) {
            *c = v.to_u32();
        }
        let cur_total: i64 = cur.iter().map(|&v| i64::from(v)).sum();
        if let Some(f) = forward.as_mut() {
            f.offsets.push(f.targets.len() as u32);
            f.leaks.push(false);
        }
        for mv in &moves {
            if mv.consumed.iter().any(|&(s, k)| cur[s] < k) || mv.delta.is_empty() {
                continue;
            }
            let over = (cur_total + mv.change) as u64 > cap.max_total_count;
            let mut found = None;
            if !over {
                for (dst, &src) in next.iter_mut().zip(&cur) {
                    *dst = T::from_u32(src);
                }
                for &(s, d) in &mv.delta {
                    next[s] = T::from_u32((i64::from(cur[s]) + d) as u32);
                }
                let hash = T::hash_slice(&next);
                found = match store.find(&next, hash) {
                    Some(i) => Some(i),
                    None if store.len >= cap.max_states => {
                        dropped_over_states += 1;
                        None
                    }
                    None => {
                        let idx = store.insert(&next, hash);
                        parent.push(head as u32);
                        step.push(mv.step);
                        if mv.forward {
                            if let Some(f) = forward.as_mut() {
                                f.targets.push(idx as u32);
                            }
                        }
                        let cfg = store.config(idx);
                        if visit(idx, &cfg).is_break() {
                            if let Some(f) = forward.as_mut() {
                                f.offsets.push(f.targets.len() as u32);
                            }
                            return Ok(finish(
                                store,
                                parent,
                                step,
                                dropped_over_count,
                                dropped_over_states,
                                true,
                                forward,
                            ));
                        }
                        continue;
                    }
                };
            } else {
                dropped_over_count += 1;
            }
            if mv.forward {
                if let Some(f) = forward.as_mut() {
                    match found {
                        Some(i) => f.targets.push(i as u32),
                        None => *f.leaks.last_mut().expect("pushed above") = true,
                    }
                }
            }
        }
        head += 1;
    }
    if let Some(f) = forward.as_mut() {
        f.offsets.push(f.targets.len() as u32);
    }
    Ok(finish(
        store,
        parent,
        step,
        dropped_over_count,
        dropped_over_states,
        false,
        forward,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stability {
    Stable,
    /// Forward execution from the configuration to one with a different output.
    Unstable(Execution),
    /// The cap was hit before a differing configuration turned up.
    Unknown,
}

/// Whether every configuration forward-reachable from `c` shares its output.
pub fn is_stable(dev: &Device, c: &Configuration, cap: Cap) -> Result<Stability> {
    let own = dev.output_value(c);
    let mut differing = None;
    let rs = explore_with(&dev.crn, c, Mode::ForwardOnly, cap, |i, next| {
        if dev.output_value(next) != own {
            differing = Some(i);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(match differing {
        Some(i) => Stability::Unstable(rs.witness_to(i)),
        None if rs.closed() => Stability::Stable,
        None => Stability::Unknown,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    /// Forward reactions only.
    Stable,
    /// Forward and reverse reactions up to a cutoff, forward only afterwards.
    ReverseRobust,
}

impl Model {
    pub fn mode(self) -> Mode {
        match self {
            Model::Stable => Mode::ForwardOnly,
            Model::ReverseRobust => Mode::BiDirectional,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Verdict {
    /// Every reachable configuration within the cap can forward-reach a
    /// correct stable configuration.
    VerifiedUpToCap { states_checked: usize },
    /// `trap` leads from the initial configuration to a configuration whose
    /// closed forward set (`certificate`) holds no correct stable member.
    Refuted {
        trap: Execution,
        certificate: ReachSet,
    },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::VerifiedUpToCap { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::VerifiedUpToCap { .. } => "VERIFIED-UP-TO-CAP",
            Verdict::Refuted { .. } => "REFUTED",
            Verdict::Inconclusive { .. } => "INCONCLUSIVE",
        }
    }

    /// The configuration the trap execution ends in.
    pub fn trap_configuration(&self) -> Option<&Configuration> {
        match self {
            Verdict::Refuted { certificate, .. } => Some(certificate.start()),
            _ => None,
        }
    }

    /// Refuted beats inconclusive beats verified.
    pub fn severity(&self) -> u8 {
        match self {
            Verdict::VerifiedUpToCap { .. } => 0,
            Verdict::Inconclusive { .. } => 1,
            Verdict::Refuted { .. } => 2,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Stats {
    pub states: usize,
    pub forward_edges: usize,
    /// The reachable set was fully explored without touching the cap.
    pub closed: bool,
    pub cap: Cap,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct Verification {
    pub verdict: Verdict,
    pub expected: Expected,
    /// Output of some correct stable configuration reachable from the
    /// initial configuration, when one was found.
    pub stable_output: Option<OutputValue>,
    pub stats: Stats,
}

/// Checks the device on one input.
///
/// Explores the reachable set of the initial configuration (forward-only
/// for [`Model::Stable`], bi-directional for [`Model::ReverseRobust`]);
/// every member must forward-reach a stable configuration with the
/// expected output. Stability is decided on the same bounded forward
/// graph, so a configuration whose forward closure leaves the cap is never
/// declared stable.
pub fn verify(
    dev: &Device,
    input: &[u32],
    model: Model,
    cap: Cap,
    expected: Option<Expected>,
) -> Result<Verification> {
    let t0 = Instant::now();
    let expected = match expected {
        Some(e) => e,
        None => dev.expected(input)?,
    };
    let initial = dev.initial_configuration(input)?;
    let crn = &dev.crn;

    // Terminal configurations are trivially stable; an incorrect one
    // refutes immediately.
    let mut early = None;
    let mut ids: FxHashMap<OutputValue, u32> = FxHashMap::default();
    let mut values: Vec<OutputValue> = Vec::new();
    let mut outputs: Vec<u32> = Vec::new();
    let reach = search(crn, &initial, model.mode(), cap, true, |i, c| {
        let out = dev.output_value(c);
        let id = *ids.entry(out).or_insert_with(|| {
            values.push(out);
            values.len() as u32 - 1
        });
        outputs.push(id);
        let terminal = crn.reactions().iter().all(|r| !c.covers(r.reactants()));
        if terminal && !expected.matches(&out) {
            early = Some(i);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;

    if let Some(i) = early {
        let c = reach.get(i).expect("member index");
        let certificate = explore(crn, &c, Mode::ForwardOnly, cap)?;
        return Ok(Verification {
            verdict: Verdict::Refuted {
                trap: reach.witness_to(i),
                certificate,
            },
            expected,
            stable_output: None,
            stats: Stats {
                states: reach.len(),
                forward_edges: 0,
                closed: false,
                cap,
                elapsed: t0.elapsed(),
            },
        });
    }

    let edges = reach.forward.as_ref().expect("recorded");
    let graph = ForwardGraph::build(edges, outputs);
    let matches: Vec<bool> = values.iter().map(|v| expected.matches(v)).collect();
    let analysis = graph.analyze(&matches);

    let verdict = if let Some(i) = analysis.refuted {
        let c = reach.get(i).expect("member index");
        let certificate = explore(crn, &c, Mode::ForwardOnly, cap)?;
        debug_assert!(certificate.closed());
        Verdict::Refuted {
            trap: reach.witness_to(i),
            certificate,
        }
    } else if analysis.unresolved > 0 {
        Verdict::Inconclusive {
            reason: format!(
                "{} of {} configurations have forward closures that leave the cap",
                analysis.unresolved,
                reach.len()
            ),
        }
    } else if reach.hit_state_limit() {
        Verdict::Inconclusive {
            reason: format!("state limit of {} reached", cap.max_states),
        }
    } else {
        Verdict::VerifiedUpToCap {
            states_checked: reach.len(),
        }
    };

    Ok(Verification {
        verdict,
        expected,
        stable_output: analysis.initial_stable_output.map(|id| values[id as usize]),
        stats: Stats {
            states: reach.len(),
            forward_edges: graph.num_edges(),
            closed: reach.closed(),
            cap,
            elapsed: t0.elapsed(),
        },
    })
}

/// Forward edges among the members of a reach set, in both directions.
struct ForwardGraph<'a> {
    fwd: &'a ForwardEdges,
    /// Interned output per node.
    outputs: Vec<u32>,
    /// Predecessors of `v` are `rev_targets[rev_offsets[v]..rev_offsets[v + 1]]`.
    rev_offsets: Vec<u32>,
    rev_targets: Vec<u32>,
}

struct Analysis {
    refuted: Option<usize>,
    unresolved: usize,
    initial_stable_output: Option<u32>,
}

impl<'a> ForwardGraph<'a> {
    fn build(fwd: &'a ForwardEdges, outputs: Vec<u32>) -> ForwardGraph<'a> {
        let n = outputs.len();
        let mut rev_offsets = vec![0u32; n + 1];
        for &v in &fwd.targets {
            rev_offsets[v as usize + 1] += 1;
        }
        for v in 0..n {
            rev_offsets[v + 1] += rev_offsets[v];
        }
        let mut fill = rev_offsets.clone();
        let mut rev_targets = vec![0u32; fwd.targets.len()];
        for u in 0..n {
            for &v in fwd.successors(u) {
                rev_targets[fill[v as usize] as usize] = u as u32;
                fill[v as usize] += 1;
            }
        }
        ForwardGraph {
            fwd,
            outputs,
            rev_offsets,
            rev_targets,
        }
    }

    fn num_edges(&self) -> usize {
        self.rev_targets.len()
    }

    /// Marks every node that can forward-reach a seed.
    fn backward_closure(&self, seeds: Vec<bool>) -> Vec<bool> {
        let mut mark = seeds;
        let mut stack: Vec<u32> = (0..mark.len() as u32).filter(|&v| mark[v as usize]).collect();
        while let Some(v) = stack.pop() {
            let (lo, hi) = (
                self.rev_offsets[v as usize] as usize,
                self.rev_offsets[v as usize + 1] as usize,
            );
            for &u in &self.rev_targets[lo..hi] {
                if !mark[u as usize] {
                    mark[u as usize] = true;
                    stack.push(u);
                }
            }
        }
        mark
    }

    fn analyze(&self, matches: &[bool]) -> Analysis {
        let n = self.outputs.len();
        // A node is unstable iff it can reach a node with a successor of a
        // different output; a leaking node may have one outside the cap.
        let differs: Vec<bool> = (0..n)
            .map(|u| {
                self.fwd
                    .successors(u)
                    .iter()
                    .any(|&v| self.outputs[v as usize] != self.outputs[u])
            })
            .collect();
        let unstable = self.backward_closure(differs);
        let unknown = self.backward_closure(self.fwd.leaks.clone());
        let good: Vec<bool> = (0..n)
            .map(|u| !unstable[u] && !unknown[u] && matches[self.outputs[u] as usize])
            .collect();
        let reaches_good = self.backward_closure(good.clone());

        let mut refuted = None;
        let mut unresolved = 0;
        for u in 0..n {
            if reaches_good[u] {
                continue;
            }
            if unknown[u] {
                unresolved += 1;
            } else if refuted.is_none() {
                refuted = Some(u);
            }
        }

        // Walk from the initial configuration towards a good node.
        let initial_stable_output = reaches_good.first().copied().unwrap_or(false).then(|| {
            let mut u = 0usize;
            let mut guard = 0;
            while !good[u] && guard <= n {
                u = self
                    .fwd
                    .successors(u)
                    .iter()
                    .map(|&v| v as usize)
                    .find(|&v| reaches_good[v])
                    .expect("a node that reaches a good node has a successor that does");
                guard += 1;
            }
            self.outputs[u]
        });

        Analysis {
            refuted,
            unresolved,
            initial_stable_output,
        }
    }
}

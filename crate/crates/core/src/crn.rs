//! Species, reactions, configurations and single-step semantics.
//!
//! A reaction `(a, p)` is applicable to `c` when `c >= a` and turns `c`
//! into `c - a + p`. It is reverse-applicable when `c >= p`, turning `c`
//! into `c - p + a`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Molecule count of a single species.
pub type Count = u32;

pub type SpeciesId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Species {
    pub name: String,
    pub id: SpeciesId,
}

/// Sparse multiset of species: `(id, count)` pairs, sorted by id, no zero counts.
pub type Multiset = Vec<(SpeciesId, Count)>;

fn normalize(mut terms: Multiset) -> Multiset {
    terms.sort_unstable_by_key(|&(s, _)| s);
    let mut out: Multiset = Vec::with_capacity(terms.len());
    for (s, k) in terms {
        if k == 0 {
            continue;
        }
        match out.last_mut() {
            Some((last, acc)) if *last == s => *acc += k,
            _ => out.push((s, k)),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Reaction {
    reactants: Multiset,
    products: Multiset,
    pub label: Option<String>,
}

impl Reaction {
    pub fn new(reactants: Multiset, products: Multiset) -> Self {
        Reaction {
            reactants: normalize(reactants),
            products: normalize(products),
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn reactants(&self) -> &[(SpeciesId, Count)] {
        &self.reactants
    }

    pub fn products(&self) -> &[(SpeciesId, Count)] {
        &self.products
    }

    /// What the step consumes when taken in direction `d`.
    pub fn consumed(&self, d: Direction) -> &[(SpeciesId, Count)] {
        match d {
            Direction::Forward => &self.reactants,
            Direction::Reverse => &self.products,
        }
    }

    /// What the step produces when taken in direction `d`.
    pub fn produced(&self, d: Direction) -> &[(SpeciesId, Count)] {
        match d {
            Direction::Forward => &self.products,
            Direction::Reverse => &self.reactants,
        }
    }

    pub fn reactant_count(&self, s: SpeciesId) -> Count {
        lookup(&self.reactants, s)
    }

    pub fn product_count(&self, s: SpeciesId) -> Count {
        lookup(&self.products, s)
    }

    /// `a == p`: the reaction never changes a configuration.
    pub fn is_self_inverse(&self) -> bool {
        self.reactants == self.products
    }

    pub fn involves(&self, s: SpeciesId) -> bool {
        self.reactant_count(s) > 0 || self.product_count(s) > 0
    }

    /// The net change `p - a` as a dense signed vector.
    pub fn net_change(&self, num_species: usize) -> Vec<i64> {
        let mut delta = vec![0i64; num_species];
        for &(s, k) in &self.reactants {
            delta[s] -= i64::from(k);
        }
        for &(s, k) in &self.products {
            delta[s] += i64::from(k);
        }
        delta
    }

    /// Net change of a single species when the step runs in direction `d`.
    pub fn delta(&self, s: SpeciesId, d: Direction) -> i64 {
        let fwd = i64::from(self.product_count(s)) - i64::from(self.reactant_count(s));
        match d {
            Direction::Forward => fwd,
            Direction::Reverse => -fwd,
        }
    }
}

fn lookup(ms: &[(SpeciesId, Count)], s: SpeciesId) -> Count {
    ms.binary_search_by_key(&s, |&(id, _)| id)
        .map(|i| ms[i].1)
        .unwrap_or(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Reverse,
}

impl Direction {
    pub fn opposite(self) -> Self {
        match self {
            Direction::Forward => Direction::Reverse,
            Direction::Reverse => Direction::Forward,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    ForwardOnly,
    BiDirectional,
}

/// A reaction taken in a given direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub reaction: usize,
    pub direction: Direction,
}

impl Step {
    pub fn forward(reaction: usize) -> Self {
        Step {
            reaction,
            direction: Direction::Forward,
        }
    }

    pub fn reverse(reaction: usize) -> Self {
        Step {
            reaction,
            direction: Direction::Reverse,
        }
    }

    pub fn inverse(self) -> Self {
        Step {
            reaction: self.reaction,
            direction: self.direction.opposite(),
        }
    }
}

/// Nonnegative count vector indexed by species id.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration(Box<[Count]>);

impl Configuration {
    pub fn zero(num_species: usize) -> Self {
        Configuration(vec![0; num_species].into_boxed_slice())
    }

    pub fn from_counts(counts: Vec<Count>) -> Self {
        Configuration(counts.into_boxed_slice())
    }

    pub fn from_multiset(num_species: usize, terms: &[(SpeciesId, Count)]) -> Self {
        let mut c = Self::zero(num_species);
        for &(s, k) in terms {
            c.0[s] += k;
        }
        c
    }

    pub fn counts(&self) -> &[Count] {
        &self.0
    }

    pub fn get(&self, s: SpeciesId) -> Count {
        self.0[s]
    }

    pub fn set(&mut self, s: SpeciesId, k: Count) {
        self.0[s] = k;
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&k| u64::from(k)).sum()
    }

    pub fn covers(&self, terms: &[(SpeciesId, Count)]) -> bool {
        terms.iter().all(|&(s, k)| self.0[s] >= k)
    }

    /// Componentwise sum; both sides must share a species table.
    pub fn plus(&self, other: &Configuration) -> Configuration {
        Configuration(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Applies `step` when its precondition holds.
    pub fn try_step(&self, rxn: &Reaction, d: Direction) -> Option<Configuration> {
        if !self.covers(rxn.consumed(d)) {
            return None;
        }
        let mut next = self.0.clone();
        for &(s, k) in rxn.consumed(d) {
            next[s] -= k;
        }
        for &(s, k) in rxn.produced(d) {
            next[s] += k;
        }
        Some(Configuration(next))
    }

    /// Support as `(id, count)` pairs.
    pub fn support(&self) -> Multiset {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(s, &k)| (s, k))
            .collect()
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Species table plus an ordered list of reactions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crn {
    species: Vec<Species>,
    index: HashMap<String, SpeciesId>,
    reactions: Vec<Reaction>,
}

impl Crn {
    pub fn builder() -> CrnBuilder {
        CrnBuilder::default()
    }

    /// Builds a CRN from reaction lines such as `"2 X -> Y"` or `"Z ->"`.
    /// Species are numbered in order of first appearance.
    pub fn from_reactions(lines: &[&str]) -> Result<Crn> {
        let mut b = CrnBuilder::default();
        for (i, line) in lines.iter().enumerate() {
            let (reactants, products) = crate::format::parse_reaction_sides(line)
                .map_err(|m| Error::parse(i + 1, m))?;
            b.reaction(&reactants, &products);
        }
        Ok(b.build())
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    pub fn species_name(&self, s: SpeciesId) -> &str {
        &self.species[s].name
    }

    pub fn species_id(&self, name: &str) -> Option<SpeciesId> {
        self.index.get(name).copied()
    }

    pub fn require_species(&self, name: &str) -> Result<SpeciesId> {
        self.species_id(name)
            .ok_or_else(|| Error::UnknownSpecies(name.to_string()))
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn reaction(&self, r: usize) -> Result<&Reaction> {
        self.reactions.get(r).ok_or(Error::UnknownReaction(r))
    }

    pub fn zero(&self) -> Configuration {
        Configuration::zero(self.num_species())
    }

    /// Configuration from `(name, count)` pairs.
    pub fn config(&self, terms: &[(&str, Count)]) -> Result<Configuration> {
        let mut c = self.zero();
        for &(name, k) in terms {
            let s = self.require_species(name)?;
            c.0[s] += k;
        }
        Ok(c)
    }

    pub fn net_change(&self, r: usize) -> Result<Vec<i64>> {
        Ok(self.reaction(r)?.net_change(self.num_species()))
    }

    pub fn apply(&self, c: &Configuration, r: usize, d: Direction) -> Result<Configuration> {
        let rxn = self.reaction(r)?;
        c.try_step(rxn, d).ok_or(Error::NotApplicable {
            reaction: r,
            direction: d,
        })
    }

    pub fn apply_step(&self, c: &Configuration, step: Step) -> Result<Configuration> {
        self.apply(c, step.reaction, step.direction)
    }

    /// Enabled steps in reaction order, forward before reverse.
    pub fn enabled(&self, c: &Configuration, mode: Mode) -> Vec<Step> {
        let mut out = Vec::new();
        for (r, rxn) in self.reactions.iter().enumerate() {
            if c.covers(&rxn.reactants) {
                out.push(Step::forward(r));
            }
            if mode == Mode::BiDirectional && c.covers(&rxn.products) {
                out.push(Step::reverse(r));
            }
        }
        out
    }

    /// Successor configurations in `enabled` order.
    pub fn successors(&self, c: &Configuration, mode: Mode) -> Vec<(Step, Configuration)> {
        let mut out = Vec::new();
        for (r, rxn) in self.reactions.iter().enumerate() {
            if let Some(n) = c.try_step(rxn, Direction::Forward) {
                out.push((Step::forward(r), n));
            }
            if mode == Mode::BiDirectional {
                if let Some(n) = c.try_step(rxn, Direction::Reverse) {
                    out.push((Step::reverse(r), n));
                }
            }
        }
        out
    }

    pub fn format_multiset(&self, terms: &[(SpeciesId, Count)]) -> String {
        if terms.is_empty() {
            return "∅".to_string();
        }
        terms
            .iter()
            .map(|&(s, k)| {
                if k == 1 {
                    self.species_name(s).to_string()
                } else {
                    format!("{k} {}", self.species_name(s))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn format_reaction(&self, r: usize) -> String {
        let rxn = &self.reactions[r];
        format!(
            "{} -> {}",
            self.format_multiset(rxn.reactants()),
            self.format_multiset(rxn.products())
        )
    }

    /// `{2 X, 1 Y}` style rendering.
    pub fn format_config(&self, c: &Configuration) -> String {
        let parts: Vec<String> = c
            .support()
            .into_iter()
            .map(|(s, k)| format!("{k} {}", self.species_name(s)))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

#[derive(Debug, Default, Clone)]
pub struct CrnBuilder {
    species: Vec<Species>,
    index: HashMap<String, SpeciesId>,
    reactions: Vec<Reaction>,
    dedup: bool,
}

impl CrnBuilder {
    /// Drop reactions whose `(reactants, products)` pair was already added.
    pub fn dedup(mut self, on: bool) -> Self {
        self.dedup = on;
        self
    }

    /// Interns a species, returning its id.
    pub fn species(&mut self, name: &str) -> SpeciesId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.species.len();
        self.species.push(Species {
            name: name.to_string(),
            id,
        });
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn species_id(&self, name: &str) -> Option<SpeciesId> {
        self.index.get(name).copied()
    }

    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    pub fn reaction<S: AsRef<str>>(&mut self, reactants: &[(S, Count)], products: &[(S, Count)]) -> Option<usize> {
        let a = reactants
            .iter()
            .map(|(n, k)| (self.species(n.as_ref()), *k))
            .collect();
        let p = products
            .iter()
            .map(|(n, k)| (self.species(n.as_ref()), *k))
            .collect();
        self.push(Reaction::new(a, p))
    }

    /// Adds a reaction over already-interned ids. Returns `None` when
    /// deduplication dropped it.
    pub fn push(&mut self, rxn: Reaction) -> Option<usize> {
        if self.dedup
            && self
                .reactions
                .iter()
                .any(|r| r.reactants == rxn.reactants && r.products == rxn.products)
        {
            return None;
        }
        self.reactions.push(rxn);
        Some(self.reactions.len() - 1)
    }

    pub fn build(self) -> Crn {
        Crn {
            species: self.species,
            index: self.index,
            reactions: self.reactions,
        }
    }
}

//! Deciders and computers: a CRN packaged with input species, an initial
//! context and an output convention.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::construct::Oracle;
use crate::crn::{Configuration, Count, Crn, Multiset, SpeciesId};
use crate::error::{Error, Result};
use crate::invariant::{LinearInvariant, NamedInvariant};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutputSpec {
    /// Plain CRN, no output convention.
    None,
    /// Decider with yes voters and no voters.
    Vote { yes: Vec<SpeciesId>, no: Vec<SpeciesId> },
    /// Computer whose output is the count of one species.
    Count(SpeciesId),
    /// Diff-representation computer: the output is `count(pos) - count(neg)`.
    Difference { pos: SpeciesId, neg: SpeciesId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Vote {
    Yes,
    No,
    Undefined,
}

/// Output read off a configuration. Two configurations have the same output
/// iff these values are equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OutputValue {
    None,
    Vote(Vote),
    Count(u64),
    /// `(count(pos), count(neg))`
    Pair(u64, u64),
}

/// The output a correct stable configuration must carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Expected {
    Vote(bool),
    Count(u64),
    Difference(i64),
}

impl Expected {
    pub fn matches(&self, v: &OutputValue) -> bool {
        match (self, v) {
            (Expected::Vote(true), OutputValue::Vote(Vote::Yes)) => true,
            (Expected::Vote(false), OutputValue::Vote(Vote::No)) => true,
            (Expected::Count(n), OutputValue::Count(m)) => n == m,
            (Expected::Difference(d), OutputValue::Pair(p, c)) => *p as i64 - *c as i64 == *d,
            _ => false,
        }
    }
}

impl std::fmt::Display for Expected {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expected::Vote(true) => write!(f, "yes"),
            Expected::Vote(false) => write!(f, "no"),
            Expected::Count(n) => write!(f, "{n}"),
            Expected::Difference(d) => write!(f, "diff {d}"),
        }
    }
}

/// A weighted species sum that is tracked but not conserved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantity {
    pub name: String,
    pub form: LinearInvariant,
    /// Lower bound the quantity keeps once reached.
    pub floor: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Device {
    pub crn: Crn,
    pub inputs: Vec<SpeciesId>,
    /// Initial context over non-input species; empty means leaderless.
    pub context: Multiset,
    pub output: OutputSpec,
    pub invariants: Vec<NamedInvariant>,
    pub quantities: Vec<Quantity>,
    pub oracle: Option<Oracle>,
}

impl Device {
    pub fn new(crn: Crn, inputs: Vec<SpeciesId>, context: Multiset, output: OutputSpec) -> Result<Device> {
        let dev = Device {
            crn,
            inputs,
            context,
            output,
            invariants: Vec::new(),
            quantities: Vec::new(),
            oracle: None,
        };
        dev.validate()?;
        Ok(dev)
    }

    /// Decider from species names.
    pub fn decider(crn: Crn, inputs: &[&str], yes: &[&str], no: &[&str]) -> Result<Device> {
        let ids = |names: &[&str]| -> Result<Vec<SpeciesId>> {
            names.iter().map(|n| crn.require_species(n)).collect()
        };
        let (inputs, yes, no) = (ids(inputs)?, ids(yes)?, ids(no)?);
        Device::new(crn, inputs, Vec::new(), OutputSpec::Vote { yes, no })
    }

    /// Computer from species names.
    pub fn computer(crn: Crn, inputs: &[&str], output: &str) -> Result<Device> {
        let inputs = inputs
            .iter()
            .map(|n| crn.require_species(n))
            .collect::<Result<Vec<_>>>()?;
        let y = crn.require_species(output)?;
        Device::new(crn, inputs, Vec::new(), OutputSpec::Count(y))
    }

    pub fn with_context(mut self, context: Multiset) -> Result<Device> {
        self.context = context;
        self.validate()?;
        Ok(self)
    }

    pub fn with_oracle(mut self, oracle: Oracle) -> Device {
        self.oracle = Some(oracle);
        self
    }

    pub fn is_decider(&self) -> bool {
        matches!(self.output, OutputSpec::Vote { .. })
    }

    pub fn is_leaderless(&self) -> bool {
        self.context.iter().all(|&(_, k)| k == 0)
    }

    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.crn.num_species();
        let bad = |m: String| Err(Error::Validation(m));
        for (r, rxn) in self.crn.reactions().iter().enumerate() {
            if rxn.reactants().is_empty() {
                return bad(format!(
                    "reaction {} ({}) has no reactants",
                    r + 1,
                    self.crn.format_reaction(r)
                ));
            }
        }
        let mut seen = HashSet::new();
        for &s in &self.inputs {
            if s >= n {
                return bad(format!("input species id {s} out of range"));
            }
            if !seen.insert(s) {
                return bad(format!("input `{}` listed twice", self.crn.species_name(s)));
            }
        }
        for &(s, _) in &self.context {
            if self.inputs.contains(&s) {
                return bad(format!(
                    "context species `{}` is an input",
                    self.crn.species_name(s)
                ));
            }
        }
        match &self.output {
            OutputSpec::None => {}
            OutputSpec::Vote { yes, no } => {
                if let Some(&s) = yes.iter().find(|s| no.contains(s)) {
                    return bad(format!(
                        "species `{}` is both a yes and a no voter",
                        self.crn.species_name(s)
                    ));
                }
            }
            OutputSpec::Count(y) => {
                if self.inputs.contains(y) {
                    return bad(format!("output `{}` is an input", self.crn.species_name(*y)));
                }
            }
            OutputSpec::Difference { pos, neg } => {
                if pos == neg {
                    return bad("difference output uses the same species twice".into());
                }
                if self.inputs.contains(pos) || self.inputs.contains(neg) {
                    return bad("difference output species must not be inputs".into());
                }
            }
        }
        Ok(())
    }

    /// Non-fatal findings, e.g. self-inverse reactions.
    pub fn warnings(&self) -> Vec<String> {
        self.crn
            .reactions()
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_self_inverse())
            .map(|(i, _)| {
                format!(
                    "reaction {} ({}) is self-inverse and never changes state",
                    i + 1,
                    self.crn.format_reaction(i)
                )
            })
            .collect()
    }

    /// `context + input`, with the input embedded on the input species.
    pub fn initial_configuration(&self, input: &[Count]) -> Result<Configuration> {
        if input.len() != self.inputs.len() {
            return Err(Error::ArityMismatch(input.len(), self.inputs.len()));
        }
        let mut c = Configuration::from_multiset(self.crn.num_species(), &self.context);
        for (&s, &k) in self.inputs.iter().zip(input) {
            c.set(s, c.get(s) + k);
        }
        Ok(c)
    }

    /// Parses `X1=3,X2=0`; unspecified inputs default to 0.
    pub fn parse_input(&self, text: &str) -> Result<Vec<Count>> {
        let mut v = vec![0; self.inputs.len()];
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, val) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("input `{part}` is not NAME=COUNT")))?;
            let s = self.crn.require_species(name.trim())?;
            let pos = self
                .inputs
                .iter()
                .position(|&i| i == s)
                .ok_or_else(|| Error::InvalidArgument(format!("`{name}` is not an input species")))?;
            v[pos] = val
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad count in `{part}`")))?;
        }
        Ok(v)
    }

    pub fn format_input(&self, input: &[Count]) -> String {
        self.inputs
            .iter()
            .zip(input)
            .map(|(&s, k)| format!("{}={k}", self.crn.species_name(s)))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn crd_output(&self, c: &Configuration) -> Vote {
        match &self.output {
            OutputSpec::Vote { yes, no } => vote(c, yes, no),
            _ => Vote::Undefined,
        }
    }

    pub fn crc_output(&self, c: &Configuration) -> u64 {
        match self.output {
            OutputSpec::Count(y) => u64::from(c.get(y)),
            OutputSpec::Difference { pos, .. } => u64::from(c.get(pos)),
            _ => 0,
        }
    }

    pub fn output_value(&self, c: &Configuration) -> OutputValue {
        match &self.output {
            OutputSpec::None => OutputValue::None,
            OutputSpec::Vote { yes, no } => OutputValue::Vote(vote(c, yes, no)),
            OutputSpec::Count(y) => OutputValue::Count(u64::from(c.get(*y))),
            OutputSpec::Difference { pos, neg } => {
                OutputValue::Pair(u64::from(c.get(*pos)), u64::from(c.get(*neg)))
            }
        }
    }

    /// Expected output for `input` according to the attached oracle.
    pub fn expected(&self, input: &[Count]) -> Result<Expected> {
        let oracle = self.oracle.as_ref().ok_or(Error::MissingOracle)?;
        let x: Vec<i64> = input.iter().map(|&k| i64::from(k)).collect();
        match (&self.output, oracle) {
            (OutputSpec::Vote { .. }, Oracle::Predicate(p)) => Ok(Expected::Vote(p.eval(&x))),
            (OutputSpec::Difference { .. }, Oracle::Affine(a)) => a
                .eval(&x)
                .map(Expected::Difference)
                .ok_or_else(|| Error::InvalidArgument(format!("input {x:?} is outside the affine domain"))),
            (OutputSpec::Count(_), Oracle::Affine(a)) => match a.eval(&x) {
                Some(v) if v >= 0 => Ok(Expected::Count(v as u64)),
                _ => Err(Error::InvalidArgument(format!("input {x:?} is outside the affine domain"))),
            },
            (OutputSpec::Count(_), Oracle::Semilinear(s)) => match s.eval(&x) {
                Some(v) if v >= 0 => Ok(Expected::Count(v as u64)),
                _ => Err(Error::InvalidArgument(format!("no piece covers input {x:?}"))),
            },
            _ => Err(Error::InvalidArgument("oracle kind does not match the device output".into())),
        }
    }

    /// Whether `input` lies in the region the oracle speaks about.
    pub fn in_domain(&self, input: &[Count]) -> bool {
        let x: Vec<i64> = input.iter().map(|&k| i64::from(k)).collect();
        match &self.oracle {
            Some(Oracle::Affine(a)) => a.eval(&x).is_some(),
            Some(Oracle::Semilinear(s)) => s.eval(&x).is_some(),
            _ => true,
        }
    }
}

fn vote(c: &Configuration, yes: &[SpeciesId], no: &[SpeciesId]) -> Vote {
    let any_yes = yes.iter().any(|&s| c.get(s) > 0);
    let any_no = no.iter().any(|&s| c.get(s) > 0);
    match (any_yes, any_no) {
        (true, false) => Vote::Yes,
        (false, true) => Vote::No,
        _ => Vote::Undefined,
    }
}

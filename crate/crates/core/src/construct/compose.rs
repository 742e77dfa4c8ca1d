use crate::crn::{Crn, CrnBuilder, Multiset, Reaction, SpeciesId};
use crate::device::{Device, OutputSpec};
use crate::error::{Error, Result};
use crate::invariant::{Invariant, NamedInvariant};

/// Disjoint union of several devices sharing an input arity, plus one
/// split reaction `X_i → X_i#1 + … + X_i#n` per input.
#[derive(Debug, Clone)]
pub struct Composition {
    pub crn: Crn,
    pub inputs: Vec<SpeciesId>,
    /// `units[u][s]` is the composite id of species `s` of unit `u`.
    pub units: Vec<Vec<SpeciesId>>,
    pub split_reactions: Vec<usize>,
    pub context: Multiset,
    pub invariants: Vec<NamedInvariant>,
}

impl Composition {
    /// Packages the composition as a plain CRN device with the shared inputs.
    pub fn into_device(self) -> Result<Device> {
        let mut dev = Device::new(self.crn, self.inputs, self.context, OutputSpec::None)?;
        dev.invariants = self.invariants;
        Ok(dev)
    }
}

pub fn parallel_compose(devices: &[&Device]) -> Result<Composition> {
    Ok(Composer::new(devices, &[])?.finish(Vec::new()))
}

/// Invariant over a growing species table.
pub(crate) struct SparseInvariant {
    pub name: Option<String>,
    pub modulus: Option<i64>,
    pub terms: Vec<(SpeciesId, i64)>,
}

impl SparseInvariant {
    pub fn linear(name: &str, terms: Vec<(SpeciesId, i64)>) -> Self {
        SparseInvariant {
            name: Some(name.to_string()),
            modulus: None,
            terms,
        }
    }

    pub fn densify(&self, n: usize) -> NamedInvariant {
        let mut w = vec![0; n];
        for &(s, k) in &self.terms {
            w[s] += k;
        }
        let invariant = match self.modulus {
            None => Invariant::linear(w),
            Some(m) => Invariant::modular(w, m).expect("modulus validated by the compiler"),
        };
        NamedInvariant {
            name: self.name.clone(),
            invariant,
        }
    }
}

pub(crate) struct Composer {
    pub builder: CrnBuilder,
    pub inputs: Vec<SpeciesId>,
    pub units: Vec<Vec<SpeciesId>>,
    pub split_reactions: Vec<usize>,
    pub context: Multiset,
    pub lifted: Vec<SparseInvariant>,
}

impl Composer {
    /// Renames every unit's species to `<name>#<unit>` and adds the split
    /// reactions (with `extra_split_products` appended to each).
    pub fn new(devices: &[&Device], extra_split_products: &[&str]) -> Result<Composer> {
        let first = devices
            .first()
            .ok_or_else(|| Error::InvalidArgument("nothing to compose".into()))?;
        let k = first.arity();
        if let Some(d) = devices.iter().find(|d| d.arity() != k) {
            return Err(Error::ArityMismatch(k, d.arity()));
        }

        let mut builder = Crn::builder().dedup(true);
        let inputs: Vec<SpeciesId> = first
            .inputs
            .iter()
            .map(|&s| builder.species(first.crn.species_name(s)))
            .collect();

        let mut units = Vec::with_capacity(devices.len());
        for (u, dev) in devices.iter().enumerate() {
            let map: Vec<SpeciesId> = dev
                .crn
                .species()
                .iter()
                .map(|sp| builder.species(&format!("{}#{}", sp.name, u + 1)))
                .collect();
            units.push(map);
        }
        let extras: Vec<SpeciesId> = extra_split_products
            .iter()
            .map(|n| builder.species(n))
            .collect();

        let mut split_reactions = Vec::with_capacity(k);
        for (i, &x) in inputs.iter().enumerate() {
            let mut products: Multiset = devices
                .iter()
                .zip(&units)
                .map(|(dev, map)| (map[dev.inputs[i]], 1))
                .collect();
            products.extend(extras.iter().map(|&e| (e, 1)));
            let r = builder
                .push(Reaction::new(vec![(x, 1)], products))
                .expect("split reactions are distinct");
            split_reactions.push(r);
        }

        let mut context = Vec::new();
        let mut lifted = Vec::new();
        for (u, (dev, map)) in devices.iter().zip(&units).enumerate() {
            for rxn in dev.crn.reactions() {
                let a = rxn.reactants().iter().map(|&(s, k)| (map[s], k)).collect();
                let p = rxn.products().iter().map(|&(s, k)| (map[s], k)).collect();
                builder.push(Reaction::new(a, p));
            }
            context.extend(dev.context.iter().map(|&(s, k)| (map[s], k)));
            for inv in &dev.invariants {
                lifted.push(lift(inv, map, &dev.inputs, &inputs, u + 1));
            }
        }

        Ok(Composer {
            builder,
            inputs,
            units,
            split_reactions,
            context,
            lifted,
        })
    }

    pub fn finish(self, extra: Vec<SparseInvariant>) -> Composition {
        let n = self.builder.num_species();
        let invariants = self
            .lifted
            .iter()
            .chain(extra.iter())
            .map(|s| s.densify(n))
            .collect();
        Composition {
            crn: self.builder.build(),
            inputs: self.inputs,
            units: self.units,
            split_reactions: self.split_reactions,
            context: self.context,
            invariants,
        }
    }
}

/// Moves a unit invariant into the composite table. The shared input `X_i`
/// takes the weight the unit gives its own copy of `X_i`, so the split
/// reaction conserves it.
pub(crate) fn lift(
    inv: &NamedInvariant,
    map: &[SpeciesId],
    unit_inputs: &[SpeciesId],
    shared_inputs: &[SpeciesId],
    unit: usize,
) -> SparseInvariant {
    let w = inv.invariant.weights();
    let mut terms: Vec<(SpeciesId, i64)> = w
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(s, &k)| (map[s], k))
        .collect();
    for (&own, &shared) in unit_inputs.iter().zip(shared_inputs) {
        if w[own] != 0 {
            terms.push((shared, w[own]));
        }
    }
    SparseInvariant {
        name: inv.name.as_ref().map(|n| format!("{n}#{unit}")),
        modulus: inv.invariant.modulus(),
        terms,
    }
}

use crate::crn::{Count, Crn, Multiset, Reaction, SpeciesId};
use crate::device::{Device, OutputSpec, Quantity};
use crate::error::{Error, Result};
use crate::invariant::{Invariant, LinearInvariant, NamedInvariant};

use super::compose::{Composer, SparseInvariant};
use super::decide::compile_predicate;
use super::input_names;
use super::spec::{AffineSpec, Oracle, SemilinearSpec};

/// Side length of the grid on which piece domains are cross-checked.
pub const DEFAULT_DOMAIN_GRID: i64 = 8;

fn term(s: SpeciesId, k: i64) -> Option<(SpeciesId, Count)> {
    (k > 0).then_some((s, k as Count))
}

/// Diff-representation computer for an affine partial function; outputs
/// `YP` and `YC` with `count(YP) - count(YC) = f(x)` once stable.
pub fn compile_affine(spec: &AffineSpec) -> Result<Device> {
    let k = spec.arity();
    let d = spec.denominator();
    let n = spec.numerators();
    let b = spec.constant;
    let count = |v: i64| Count::try_from(v).map_err(|_| Error::InvalidArgument(format!("coefficient {v} is too large")));

    let mut bld = Crn::builder().dedup(true);
    let xs: Vec<SpeciesId> = input_names(k).iter().map(|s| bld.species(s)).collect();
    let cs: Vec<Vec<SpeciesId>> = (0..k)
        .map(|i| (1..=spec.offsets[i]).map(|p| bld.species(&format!("C{}_{p}", i + 1))).collect())
        .collect();
    let big_b = bld.species("B");
    let primes: Vec<SpeciesId> = (0..k).map(|i| bld.species(&format!("X{}'", i + 1))).collect();
    let dp: Vec<SpeciesId> = (1..d).map(|p| bld.species(&format!("DP{p}"))).collect();
    let dc: Vec<SpeciesId> = (1..d).map(|p| bld.species(&format!("DC{p}"))).collect();
    let yp = bld.species("YP");
    let yc = bld.species("YC");

    for i in 0..k {
        let first = if spec.offsets[i] == 0 { primes[i] } else { cs[i][0] };
        let products = [Some((first, 1)), Some((big_b, 1)), term(yp, b)];
        bld.push(Reaction::new(vec![(xs[i], 1)], products.into_iter().flatten().collect()));
    }
    for i in 0..k {
        let ci = spec.offsets[i];
        for p in 1..=ci {
            for q in p..=ci {
                let reactants = vec![(cs[i][p as usize - 1], 1), (cs[i][q as usize - 1], 1)];
                let products = if p + q <= ci {
                    vec![(cs[i][(p + q) as usize - 1], 1)]
                } else {
                    vec![(cs[i][ci as usize - 1], 1), (primes[i], count(p + q - ci)?)]
                };
                bld.push(Reaction::new(reactants, products));
            }
        }
    }
    for i in 0..k {
        let products: Multiset = if d == 1 {
            if n[i] >= 0 { term(yp, n[i]) } else { term(yc, -n[i]) }.into_iter().collect()
        } else if n[i] >= 0 {
            term(dp[0], n[i]).into_iter().collect()
        } else {
            term(dc[0], -n[i]).into_iter().collect()
        };
        bld.push(Reaction::new(vec![(primes[i], 1)], products));
    }
    for (acc, out) in [(&dp, yp), (&dc, yc)] {
        for p in 1..d {
            for q in p..d {
                let reactants = vec![(acc[p as usize - 1], 1), (acc[q as usize - 1], 1)];
                let products = if p + q < d {
                    vec![(acc[(p + q) as usize - 1], 1)]
                } else if p + q == d {
                    vec![(out, 1)]
                } else {
                    vec![(acc[(p + q - d) as usize - 1], 1), (out, 1)]
                };
                bld.push(Reaction::new(reactants, products));
            }
        }
    }
    let products = [Some((big_b, 1)), term(yc, b)];
    bld.push(Reaction::new(vec![(big_b, 2)], products.into_iter().flatten().collect()));
    let crn = bld.build();

    let ns = crn.num_species();
    let input_part = |w: &mut Vec<i64>, keep: &dyn Fn(i64) -> bool| {
        for i in 0..k {
            if !keep(n[i]) {
                continue;
            }
            w[xs[i]] = n[i];
            w[primes[i]] = n[i];
            for (p, &c) in cs[i].iter().enumerate() {
                w[c] = n[i] * (p as i64 + 1);
            }
        }
    };
    let mut fhat = vec![0i64; ns];
    input_part(&mut fhat, &|_| true);
    for (p, &s) in dp.iter().enumerate() {
        fhat[s] = p as i64 + 1;
    }
    for (q, &s) in dc.iter().enumerate() {
        fhat[s] = -(q as i64 + 1);
    }
    fhat[yp] = d;
    fhat[yc] = -d;
    fhat[big_b] = -b * d;

    let mut invariants = vec![NamedInvariant::new("I_fhat", Invariant::linear(fhat))];
    if d >= 2 {
        let mut ip = vec![0i64; ns];
        input_part(&mut ip, &|ni| ni >= 0);
        for (p, &s) in dp.iter().enumerate() {
            ip[s] = p as i64 + 1;
        }
        let mut ic = vec![0i64; ns];
        input_part(&mut ic, &|ni| ni < 0);
        for (q, &s) in dc.iter().enumerate() {
            ic[s] = -(q as i64 + 1);
        }
        invariants.push(NamedInvariant::new("I_P", Invariant::modular(ip, d)?));
        invariants.push(NamedInvariant::new("I_C", Invariant::modular(ic, d)?));
    }

    let quantities = (0..k)
        .filter(|&i| spec.offsets[i] > 0)
        .map(|i| {
            let mut w = vec![0i64; ns];
            w[xs[i]] = 1;
            for (p, &c) in cs[i].iter().enumerate() {
                w[c] = p as i64 + 1;
            }
            Quantity {
                name: format!("I_c{}", i + 1),
                form: LinearInvariant::new(w),
                floor: spec.offsets[i],
            }
        })
        .collect();

    let mut dev = Device::new(crn, xs, Vec::new(), OutputSpec::Difference { pos: yp, neg: yc })?;
    dev.invariants = invariants;
    dev.quantities = quantities;
    dev.oracle = Some(Oracle::Affine(spec.clone()));
    Ok(dev)
}

pub fn compile_semilinear(spec: &SemilinearSpec) -> Result<Device> {
    compile_semilinear_with_grid(spec, DEFAULT_DOMAIN_GRID)
}

/// Composes a domain decider and an affine computer per piece and routes the
/// active piece's output to the global output `Y`.
pub fn compile_semilinear_with_grid(spec: &SemilinearSpec, grid: i64) -> Result<Device> {
    spec.check_grid(grid)?;
    let mut units = Vec::with_capacity(2 * spec.pieces.len());
    for (f, dom) in &spec.pieces {
        units.push(compile_predicate(dom)?);
        units.push(compile_affine(f)?);
    }
    let refs: Vec<&Device> = units.iter().collect();
    let mut comp = Composer::new(&refs, &[])?;

    let m = spec.pieces.len();
    let bld = &mut comp.builder;
    let active: Vec<(SpeciesId, SpeciesId)> = (1..=m)
        .map(|j| (bld.species(&format!("YP_{j}")), bld.species(&format!("YC_{j}"))))
        .collect();
    let y = bld.species("Y");

    let mut extra = Vec::new();
    let mut zero_terms = vec![(y, -1)];
    for j in 0..m {
        let (dom, fun) = (&units[2 * j], &units[2 * j + 1]);
        let (dmap, fmap) = (&comp.units[2 * j], &comp.units[2 * j + 1]);
        let OutputSpec::Vote { yes, no } = &dom.output else {
            unreachable!("domains compile to deciders")
        };
        let OutputSpec::Difference { pos, neg } = fun.output else {
            unreachable!("affine pieces compile to diff computers")
        };
        let (hat_p, hat_c) = (fmap[pos], fmap[neg]);
        let (yp, yc) = active[j];
        for &l in yes {
            let l = dmap[l];
            bld.push(Reaction::new(vec![(l, 1), (hat_p, 1)], vec![(l, 1), (yp, 1), (y, 1)]));
        }
        for &l in no {
            let l = dmap[l];
            bld.push(Reaction::new(vec![(l, 1), (yp, 1), (y, 1)], vec![(l, 1), (hat_p, 1)]));
        }
        for &l in yes {
            let l = dmap[l];
            bld.push(Reaction::new(vec![(l, 1), (hat_c, 1)], vec![(l, 1), (yc, 1)]));
        }
        for &l in no {
            let l = dmap[l];
            bld.push(Reaction::new(vec![(l, 1), (yc, 1)], vec![(l, 1), (hat_c, 1)]));
        }
        bld.push(Reaction::new(vec![(yp, 1), (yc, 1), (y, 1)], vec![]));

        let fhat = &fun.invariants[0];
        let d = spec.pieces[j].0.denominator();
        let mut lifted = super::compose::lift(fhat, fmap, &fun.inputs, &comp.inputs, 2 * j + 2);
        lifted.name = Some(format!("I_{}", j + 1));
        lifted.terms.extend([(yp, d), (yc, -d)]);
        extra.push(lifted);
        zero_terms.push((yp, 1));
    }
    extra.push(SparseInvariant::linear("I_0", zero_terms));
    // Each unit's I_fhat stops being conserved once its outputs can be
    // activated; I_j takes its place.
    comp.lifted
        .retain(|inv| !inv.name.as_deref().is_some_and(|n| n.starts_with("I_fhat#")));

    let composition = comp.finish(extra);
    let mut dev = Device::new(composition.crn, composition.inputs, composition.context, OutputSpec::Count(y))?;
    dev.invariants = composition.invariants;
    dev.oracle = Some(Oracle::Semilinear(spec.clone()));
    Ok(dev)
}

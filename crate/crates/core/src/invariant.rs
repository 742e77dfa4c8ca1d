//! Linear and modular invariants: weighted species sums that every
//! reaction's net change leaves unchanged (exactly, or modulo `m`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::crn::{Configuration, Crn, SpeciesId};
use crate::error::{Error, Result};
use crate::reach::Execution;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearInvariant {
    pub weights: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModularInvariant {
    weights: Vec<i64>,
    modulus: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Invariant {
    Linear(LinearInvariant),
    Modular(ModularInvariant),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NamedInvariant {
    pub name: Option<String>,
    pub invariant: Invariant,
}

/// Reactions whose net change the invariant does not annihilate.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InvariantReport {
    pub violations: Vec<(usize, i64)>,
}

impl InvariantReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

fn dot(weights: &[i64], v: impl IntoIterator<Item = i64>) -> i64 {
    weights.iter().zip(v).map(|(w, x)| w * x).sum()
}

impl LinearInvariant {
    pub fn new(weights: Vec<i64>) -> Self {
        LinearInvariant { weights }
    }

    pub fn zero(num_species: usize) -> Self {
        LinearInvariant::new(vec![0; num_species])
    }

    /// Weights from `(species, weight)` pairs; missing species weigh 0.
    pub fn from_terms(crn: &Crn, terms: &[(&str, i64)]) -> Result<Self> {
        let mut w = vec![0; crn.num_species()];
        for &(name, k) in terms {
            w[crn.require_species(name)?] += k;
        }
        Ok(LinearInvariant::new(w))
    }

    pub fn evaluate(&self, c: &Configuration) -> i64 {
        dot(&self.weights, c.counts().iter().map(|&k| i64::from(k)))
    }

    pub fn evaluate_vector(&self, v: &[i64]) -> i64 {
        dot(&self.weights, v.iter().copied())
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(|&w| w == 0)
    }
}

impl ModularInvariant {
    pub fn new(weights: Vec<i64>, modulus: i64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::BadModulus(modulus));
        }
        let weights = weights.into_iter().map(|w| w.rem_euclid(modulus)).collect();
        Ok(ModularInvariant { weights, modulus })
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn evaluate(&self, c: &Configuration) -> i64 {
        let s: i64 = self
            .weights
            .iter()
            .zip(c.counts())
            .map(|(w, &k)| (w * i64::from(k)).rem_euclid(self.modulus))
            .sum();
        s.rem_euclid(self.modulus)
    }

    pub fn evaluate_vector(&self, v: &[i64]) -> i64 {
        dot(&self.weights, v.iter().copied()).rem_euclid(self.modulus)
    }

    /// The same weighted sum without the modulus.
    pub fn linearization(&self) -> LinearInvariant {
        LinearInvariant::new(self.weights.clone())
    }
}

impl Invariant {
    pub fn linear(weights: Vec<i64>) -> Self {
        Invariant::Linear(LinearInvariant::new(weights))
    }

    pub fn modular(weights: Vec<i64>, modulus: i64) -> Result<Self> {
        Ok(Invariant::Modular(ModularInvariant::new(weights, modulus)?))
    }

    pub fn weights(&self) -> &[i64] {
        match self {
            Invariant::Linear(l) => &l.weights,
            Invariant::Modular(m) => &m.weights,
        }
    }

    pub fn modulus(&self) -> Option<i64> {
        match self {
            Invariant::Linear(_) => None,
            Invariant::Modular(m) => Some(m.modulus),
        }
    }

    pub fn evaluate(&self, c: &Configuration) -> i64 {
        match self {
            Invariant::Linear(l) => l.evaluate(c),
            Invariant::Modular(m) => m.evaluate(c),
        }
    }

    pub fn evaluate_vector(&self, v: &[i64]) -> i64 {
        match self {
            Invariant::Linear(l) => l.evaluate_vector(v),
            Invariant::Modular(m) => m.evaluate_vector(v),
        }
    }

    /// Re-indexes the weights through `map[old] = new` into a table of
    /// `num_species` species.
    pub fn remap(&self, map: &[SpeciesId], num_species: usize) -> Invariant {
        let mut w = vec![0; num_species];
        for (old, &k) in self.weights().iter().enumerate() {
            w[map[old]] += k;
        }
        self.with_weights(w)
    }

    pub(crate) fn with_weights(&self, w: Vec<i64>) -> Invariant {
        match self {
            Invariant::Linear(_) => Invariant::linear(w),
            Invariant::Modular(m) => Invariant::Modular(
                ModularInvariant::new(w, m.modulus).expect("modulus already validated"),
            ),
        }
    }
}

impl NamedInvariant {
    pub fn new(name: impl Into<String>, invariant: Invariant) -> Self {
        NamedInvariant {
            name: Some(name.into()),
            invariant,
        }
    }

    pub fn anonymous(invariant: Invariant) -> Self {
        NamedInvariant {
            name: None,
            invariant,
        }
    }

    pub fn label(&self) -> &str {
        self.name.as_deref().unwrap_or("(unnamed)")
    }
}

/// Evaluates the invariant on every reaction's net change.
pub fn check(crn: &Crn, inv: &Invariant) -> InvariantReport {
    let n = crn.num_species();
    let violations = crn
        .reactions()
        .iter()
        .enumerate()
        .filter_map(|(r, rxn)| {
            let residual = inv.evaluate_vector(&rxn.net_change(n));
            (residual != 0).then_some((r, residual))
        })
        .collect();
    InvariantReport { violations }
}

/// True iff the invariant takes the same value on every configuration of
/// the replayed execution.
pub fn conserved_along(crn: &Crn, inv: &Invariant, exec: &Execution) -> Result<bool> {
    let configs = crate::transform::replay(crn, exec)?;
    let first = inv.evaluate(&configs[0]);
    Ok(configs.iter().all(|c| inv.evaluate(c) == first))
}

/// Integer basis of `{w : w · (p - a) = 0 for every reaction}`.
///
/// Exact rational row reduction of the net-change matrix; one basis vector
/// per free column, scaled to coprime integers with the first nonzero
/// weight positive.
pub fn find_linear_invariants(crn: &Crn) -> Vec<LinearInvariant> {
    let n = crn.num_species();
    let mut rows: Vec<Vec<BigRational>> = crn
        .reactions()
        .iter()
        .map(|r| {
            r.net_change(n)
                .into_iter()
                .map(|v| BigRational::from_integer(BigInt::from(v)))
                .collect()
        })
        .collect();

    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip();
        for v in rows[rank].iter_mut() {
            *v *= &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..n {
                    let sub = &factor * &rows[rank][c];
                    rows[r][c] -= sub;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }

    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); n];
        v[free] = BigRational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -rows[row][free].clone();
        }
        basis.push(LinearInvariant::new(to_primitive_integer(&v)));
    }
    basis
}

fn to_primitive_integer(v: &[BigRational]) -> Vec<i64> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints
        .iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let g = if g.is_zero() { BigInt::one() } else { g };
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.iter()
        .map(|x| (x / &g * &sign).to_i64().expect("invariant weight fits in i64"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crn::Step;

    fn trap() -> Crn {
        Crn::from_reactions(&["2 X -> Y", "Z -> Y", "Z ->"]).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let crn = Crn::from_reactions(&["X1 -> Y1", "Y0 + Y0 -> Y0"]).unwrap();
        let im = Invariant::modular(
            LinearInvariant::from_terms(&crn, &[("X1", 1), ("Y1", 1)]).unwrap().weights,
            2,
        )
        .unwrap();
        let c = crn.config(&[("X1", 3)]).unwrap();
        assert_eq!(im.evaluate(&c), 1);
        assert_eq!(im.evaluate(&crn.zero()), 0);

        let t = Crn::from_reactions(&["X1 -> X2"]).unwrap();
        let it = Invariant::linear(vec![1, -1]);
        assert_eq!(it.evaluate(&t.config(&[("X1", 2), ("X2", 1)]).unwrap()), 1);
    }

    #[test]
    fn modular_weights_are_reduced() {
        let m = ModularInvariant::new(vec![-1, 5, 2], 3).unwrap();
        assert_eq!(m.weights(), &[2, 2, 2]);
        assert_eq!(ModularInvariant::new(vec![1], 1), Err(Error::BadModulus(1)));
    }

    #[test]
    fn check_trap_weights() {
        let t = trap();
        let inv = Invariant::Linear(LinearInvariant::from_terms(&t, &[("X", 1), ("Y", 2)]).unwrap());
        // Z -> Y changes the weighted sum by +2, Z -> ∅ by 0.
        assert_eq!(check(&t, &inv).violations, vec![(1, 2)]);
        assert!(check(&t, &Invariant::linear(vec![0; 3])).holds());
    }

    #[test]
    fn find_examples() {
        let c = Crn::from_reactions(&["2 X -> Y"]).unwrap();
        assert_eq!(find_linear_invariants(&c), vec![LinearInvariant::new(vec![1, 2])]);
        assert!(find_linear_invariants(&trap()).is_empty());

        let mut b = Crn::builder();
        for s in ["A", "B", "C"] {
            b.species(s);
        }
        let empty = b.build();
        let basis = find_linear_invariants(&empty);
        assert_eq!(basis.len(), 3);
        assert_eq!(basis[0].weights, vec![1, 0, 0]);
    }

    #[test]
    fn find_normalizes_sign_and_gcd() {
        // A + B -> C conserves A + C and B + C.
        let c = Crn::from_reactions(&["A + B -> C", "2 C -> 2 A + 2 B"]).unwrap();
        let basis = find_linear_invariants(&c);
        for inv in &basis {
            assert!(check(&c, &Invariant::Linear(inv.clone())).holds());
            let first = inv.weights.iter().find(|&&w| w != 0).unwrap();
            assert!(*first > 0);
        }
        assert_eq!(basis.len(), 2);
    }

    #[test]
    fn conserved_along_examples() {
        let t = trap();
        let x_only = Invariant::linear(vec![1, 0, 0]);
        let exec = Execution::new(t.config(&[("X", 2)]).unwrap(), vec![Step::forward(0)]);
        assert!(!conserved_along(&t, &x_only, &exec).unwrap());
        let empty = Execution::new(t.config(&[("X", 2)]).unwrap(), vec![]);
        assert!(conserved_along(&t, &x_only, &empty).unwrap());
    }
}

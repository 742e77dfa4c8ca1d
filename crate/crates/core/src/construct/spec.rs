use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

/// `{x : Σ w_i x_i ≡ c (mod m)}`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModSpec {
    pub weights: Vec<i64>,
    residue: i64,
    modulus: i64,
}

impl ModSpec {
    pub fn new(weights: Vec<i64>, residue: i64, modulus: i64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::BadModulus(modulus));
        }
        Ok(ModSpec {
            weights,
            residue: residue.rem_euclid(modulus),
            modulus,
        })
    }

    pub fn residue(&self) -> i64 {
        self.residue
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn holds(&self, x: &[i64]) -> bool {
        dot(&self.weights, x).rem_euclid(self.modulus) == self.residue
    }
}

/// `{x : Σ w_i x_i ≥ t}`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThresholdSpec {
    pub weights: Vec<i64>,
    pub threshold: i64,
}

impl ThresholdSpec {
    pub fn new(weights: Vec<i64>, threshold: i64) -> Self {
        ThresholdSpec { weights, threshold }
    }

    /// Clamp bound `max(|w_1|, …, |w_k|, |t|) + 1`.
    pub fn clamp(&self) -> i64 {
        self.weights
            .iter()
            .map(|w| w.abs())
            .chain(std::iter::once(self.threshold.abs()))
            .max()
            .unwrap_or(0)
            + 1
    }

    pub fn holds(&self, x: &[i64]) -> bool {
        dot(&self.weights, x) >= self.threshold
    }
}

fn dot(w: &[i64], x: &[i64]) -> i64 {
    w.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// Boolean combination of mod and threshold predicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PredicateSpec {
    Mod(ModSpec),
    Threshold(ThresholdSpec),
    Not(Box<PredicateSpec>),
    And(Box<PredicateSpec>, Box<PredicateSpec>),
    Or(Box<PredicateSpec>, Box<PredicateSpec>),
}

impl PredicateSpec {
    pub fn not(p: PredicateSpec) -> Self {
        PredicateSpec::Not(Box::new(p))
    }

    pub fn and(a: PredicateSpec, b: PredicateSpec) -> Self {
        PredicateSpec::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: PredicateSpec, b: PredicateSpec) -> Self {
        PredicateSpec::Or(Box::new(a), Box::new(b))
    }

    pub fn eval(&self, x: &[i64]) -> bool {
        match self {
            PredicateSpec::Mod(m) => m.holds(x),
            PredicateSpec::Threshold(t) => t.holds(x),
            PredicateSpec::Not(p) => !p.eval(x),
            PredicateSpec::And(a, b) => a.eval(x) && b.eval(x),
            PredicateSpec::Or(a, b) => a.eval(x) || b.eval(x),
        }
    }

    /// Number of inputs; leaves must agree.
    pub fn arity(&self) -> Result<usize> {
        match self {
            PredicateSpec::Mod(m) => Ok(m.weights.len()),
            PredicateSpec::Threshold(t) => Ok(t.weights.len()),
            PredicateSpec::Not(p) => p.arity(),
            PredicateSpec::And(a, b) | PredicateSpec::Or(a, b) => {
                let (ka, kb) = (a.arity()?, b.arity()?);
                if ka != kb {
                    return Err(Error::ArityMismatch(ka, kb));
                }
                Ok(ka)
            }
        }
    }
}

/// Partial affine function `f(x) = b + Σ a_i (x_i - c_i)`, defined where
/// every `x_i ≥ c_i` and the value is integral.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineSpec {
    pub coefficients: Vec<Ratio<i64>>,
    pub offsets: Vec<i64>,
    pub constant: i64,
}

impl AffineSpec {
    pub fn new(coefficients: Vec<Ratio<i64>>, offsets: Vec<i64>, constant: i64) -> Result<Self> {
        if coefficients.len() != offsets.len() {
            return Err(Error::ArityMismatch(coefficients.len(), offsets.len()));
        }
        if offsets.iter().any(|&c| c < 0) {
            return Err(Error::InvalidArgument("affine offsets must be nonnegative".into()));
        }
        if constant < 0 {
            return Err(Error::InvalidArgument("affine constant must be nonnegative".into()));
        }
        Ok(AffineSpec {
            coefficients,
            offsets,
            constant,
        })
    }

    pub fn arity(&self) -> usize {
        self.coefficients.len()
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator(&self) -> i64 {
        self.coefficients
            .iter()
            .fold(1i64, |acc, a| acc.lcm(a.denom()))
    }

    /// `n_i = d · a_i`
    pub fn numerators(&self) -> Vec<i64> {
        let d = self.denominator();
        self.coefficients
            .iter()
            .map(|a| (a * Ratio::from_integer(d)).to_integer())
            .collect()
    }

    /// `f(x)`, or `None` outside the domain.
    pub fn eval(&self, x: &[i64]) -> Option<i64> {
        if x.len() != self.arity() || x.iter().zip(&self.offsets).any(|(xi, ci)| xi < ci) {
            return None;
        }
        let sum: Ratio<i64> = self
            .coefficients
            .iter()
            .zip(x.iter().zip(&self.offsets))
            .map(|(a, (xi, ci))| a * Ratio::from_integer(xi - ci))
            .sum();
        let v = sum + Ratio::from_integer(self.constant);
        v.is_integer().then(|| v.to_integer())
    }
}

/// Piecewise-affine function over disjoint predicate domains.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SemilinearSpec {
    pub pieces: Vec<(AffineSpec, PredicateSpec)>,
}

impl SemilinearSpec {
    pub fn new(pieces: Vec<(AffineSpec, PredicateSpec)>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidArgument("a semilinear function needs at least one piece".into()));
        }
        let k = pieces[0].0.arity();
        for (f, dom) in &pieces {
            if f.arity() != k {
                return Err(Error::ArityMismatch(f.arity(), k));
            }
            let kd = dom.arity()?;
            if kd != k {
                return Err(Error::ArityMismatch(kd, k));
            }
        }
        Ok(SemilinearSpec { pieces })
    }

    pub fn arity(&self) -> usize {
        self.pieces[0].0.arity()
    }

    /// Value of the first piece whose domain holds.
    pub fn eval(&self, x: &[i64]) -> Option<i64> {
        self.pieces
            .iter()
            .find(|(_, dom)| dom.eval(x))
            .and_then(|(f, _)| f.eval(x))
            .filter(|&v| v >= 0)
    }

    /// Samples `[0, g]^k`: domains must be disjoint and cover every point,
    /// and each piece must be defined and nonnegative on its domain.
    pub fn check_grid(&self, g: i64) -> Result<()> {
        for x in grid(self.arity(), 0, g) {
            let hits: Vec<usize> = self
                .pieces
                .iter()
                .enumerate()
                .filter(|(_, (_, dom))| dom.eval(&x))
                .map(|(j, _)| j + 1)
                .collect();
            match hits.as_slice() {
                [] => return Err(Error::InvalidArgument(format!("no domain covers {x:?}"))),
                [j] => match self.pieces[j - 1].0.eval(&x) {
                    Some(v) if v >= 0 => {}
                    _ => {
                        return Err(Error::InvalidArgument(format!(
                            "piece {j} is undefined or negative at {x:?}"
                        )))
                    }
                },
                many => {
                    return Err(Error::InvalidArgument(format!(
                        "domains of pieces {many:?} overlap at {x:?}"
                    )))
                }
            }
        }
        Ok(())
    }
}

/// Reference semantics attached to compiled devices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Oracle {
    Predicate(PredicateSpec),
    Affine(AffineSpec),
    Semilinear(SemilinearSpec),
}

/// All points of `[lo, hi]^k` in lexicographic order.
pub fn grid(k: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(k)];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn mod_spec_reduces_residue() {
        let m = ModSpec::new(vec![2, 3], -1, 4).unwrap();
        assert_eq!(m.residue(), 3);
        assert!(m.holds(&[0, 1]));
        assert_eq!(ModSpec::new(vec![1], 0, 1), Err(Error::BadModulus(1)));
    }

    #[test]
    fn threshold_clamp() {
        assert_eq!(ThresholdSpec::new(vec![1, -1], 0).clamp(), 2);
        assert_eq!(ThresholdSpec::new(vec![2], 3).clamp(), 4);
    }

    #[test]
    fn affine_eval_and_derived() {
        let f = AffineSpec::new(vec![r(1, 2)], vec![1], 2).unwrap();
        assert_eq!(f.denominator(), 2);
        assert_eq!(f.numerators(), vec![1]);
        assert_eq!(f.eval(&[1]), Some(2));
        assert_eq!(f.eval(&[7]), Some(5));
        assert_eq!(f.eval(&[2]), None);
        assert_eq!(f.eval(&[0]), None);

        let g = AffineSpec::new(vec![r(2, 3), r(-1, 2)], vec![0, 0], 0).unwrap();
        assert_eq!(g.denominator(), 6);
        assert_eq!(g.numerators(), vec![4, -3]);
    }

    #[test]
    fn semilinear_grid_check() {
        let even = PredicateSpec::Mod(ModSpec::new(vec![1], 0, 2).unwrap());
        let odd = PredicateSpec::Mod(ModSpec::new(vec![1], 1, 2).unwrap());
        let half = AffineSpec::new(vec![r(1, 2)], vec![0], 0).unwrap();
        let half_odd = AffineSpec::new(vec![r(1, 2)], vec![1], 0).unwrap();
        let s = SemilinearSpec::new(vec![(half.clone(), even.clone()), (half_odd, odd)]).unwrap();
        s.check_grid(8).unwrap();
        for x in 0..20 {
            assert_eq!(s.eval(&[x]), Some(x / 2));
        }
        let overlapping = SemilinearSpec::new(vec![(half.clone(), even.clone()), (half, even)]).unwrap();
        assert!(overlapping.check_grid(4).is_err());
    }

    #[test]
    fn grid_is_lexicographic() {
        assert_eq!(grid(2, 0, 1), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(grid(0, 0, 3), vec![Vec::<i64>::new()]);
    }
}

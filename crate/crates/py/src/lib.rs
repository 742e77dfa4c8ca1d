//! Python bindings: compile devices, verify them, inspect invariants and
//! replay traces. Configurations cross the boundary as `{species: count}`
//! dictionaries with zero counts omitted.

use std::collections::BTreeMap;

use num_rational::Ratio;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rrcrn::construct::{self, AffineSpec, BoolOp, ModSpec, ThresholdSpec};
use rrcrn::format::{parse_device, parse_execution, serialize_device};
use rrcrn::{Cap, Configuration, Crn, Model, OutputValue, Verdict, Vote};

fn err(e: rrcrn::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn config_dict(crn: &Crn, c: &Configuration) -> BTreeMap<String, u64> {
    crn.species()
        .iter()
        .filter(|s| c.get(s.id) > 0)
        .map(|s| (s.name.clone(), u64::from(c.get(s.id))))
        .collect()
}

fn config_from_dict(crn: &Crn, counts: &BTreeMap<String, u32>) -> PyResult<Configuration> {
    let mut c = Configuration::zero(crn.num_species());
    for (name, &k) in counts {
        c.set(crn.require_species(name).map_err(err)?, k);
    }
    Ok(c)
}

fn output_repr(v: &OutputValue) -> String {
    match v {
        OutputValue::None => "none".into(),
        OutputValue::Vote(Vote::Yes) => "yes".into(),
        OutputValue::Vote(Vote::No) => "no".into(),
        OutputValue::Vote(Vote::Undefined) => "undefined".into(),
        OutputValue::Count(n) => n.to_string(),
        OutputValue::Pair(p, n) => (*p as i64 - *n as i64).to_string(),
    }
}

/// A CRD or CRC with its bundled invariants and oracle.
#[pyclass(frozen, module = "rrcrn_py")]
struct Device {
    inner: rrcrn::Device,
}

#[pymethods]
impl Device {
    /// Parses the textual device format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Device { inner: parse_device(text).map_err(err)? })
    }

    fn to_text(&self) -> String {
        serialize_device(&self.inner)
    }

    #[getter]
    fn species(&self) -> Vec<String> {
        self.inner.crn.species().iter().map(|s| s.name.clone()).collect()
    }

    #[getter]
    fn arity(&self) -> usize {
        self.inner.arity()
    }

    #[getter]
    fn num_reactions(&self) -> usize {
        self.inner.crn.reactions().len()
    }

    #[getter]
    fn is_decider(&self) -> bool {
        self.inner.is_decider()
    }

    fn initial_configuration(&self, input: Vec<u32>) -> PyResult<BTreeMap<String, u64>> {
        let c = self.inner.initial_configuration(&input).map_err(err)?;
        Ok(config_dict(&self.inner.crn, &c))
    }

    /// Output of a configuration: "yes", "no" or "undefined" for deciders, the
    /// output count (or difference) as a string for computers.
    fn output(&self, config: BTreeMap<String, u32>) -> PyResult<String> {
        let c = config_from_dict(&self.inner.crn, &config)?;
        Ok(output_repr(&self.inner.output_value(&c)))
    }

    /// Names of bundled invariants paired with whether every reaction keeps them.
    fn check_invariants(&self) -> Vec<(String, bool)> {
        self.inner
            .invariants
            .iter()
            .map(|inv| (inv.label().to_string(), rrcrn::check(&self.inner.crn, &inv.invariant).holds()))
            .collect()
    }

    /// Integer basis of all linear invariants, one weight list per vector.
    fn find_linear_invariants(&self) -> Vec<Vec<i64>> {
        rrcrn::find_linear_invariants(&self.inner.crn)
            .into_iter()
            .map(|b| b.weights)
            .collect()
    }

    /// Configurations visited by a trace in `@start`/`@steps` form.
    fn replay(&self, trace: &str) -> PyResult<Vec<BTreeMap<String, u64>>> {
        let crn = &self.inner.crn;
        let exec = parse_execution(crn, trace).map_err(err)?;
        let configs = rrcrn::transform::replay(crn, &exec).map_err(err)?;
        Ok(configs.iter().map(|c| config_dict(crn, c)).collect())
    }

    #[pyo3(signature = (input, model = "reverse-robust", cap_extra = 16, cap_states = 1_000_000))]
    fn verify(&self, input: Vec<u32>, model: &str, cap_extra: u64, cap_states: usize) -> PyResult<Verification> {
        let model = match model {
            "stable" => Model::Stable,
            "reverse-robust" => Model::ReverseRobust,
            other => return Err(PyValueError::new_err(format!("unknown model {other:?}"))),
        };
        let start = self.inner.initial_configuration(&input).map_err(err)?;
        let cap = Cap::with_headroom(&start, cap_extra, cap_states);
        let v = rrcrn::verify(&self.inner, &input, model, cap, None).map_err(err)?;
        let crn = &self.inner.crn;
        let (trap, trap_configuration, reason) = match &v.verdict {
            Verdict::Refuted { trap, certificate } => (
                Some(rrcrn::format::format_execution(crn, trap)),
                Some(config_dict(crn, certificate.start())),
                None,
            ),
            Verdict::Inconclusive { reason } => (None, None, Some(reason.clone())),
            Verdict::VerifiedUpToCap { .. } => (None, None, None),
        };
        Ok(Verification {
            verdict: v.verdict.label().to_string(),
            states: v.stats.states,
            stable_output: v.stable_output.as_ref().map(output_repr),
            trap,
            trap_configuration,
            reason,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "Device(species={}, reactions={}, arity={})",
            self.inner.crn.num_species(),
            self.inner.crn.reactions().len(),
            self.inner.arity()
        )
    }
}

#[pyclass(frozen, get_all, module = "rrcrn_py")]
struct Verification {
    verdict: String,
    states: usize,
    stable_output: Option<String>,
    /// Trace text of the refuting execution.
    trap: Option<String>,
    trap_configuration: Option<BTreeMap<String, u64>>,
    reason: Option<String>,
}

#[pymethods]
impl Verification {
    fn __repr__(&self) -> String {
        format!("Verification({}, states={})", self.verdict, self.states)
    }
}

#[pyfunction]
fn compile_mod(weights: Vec<i64>, residue: i64, modulus: i64) -> PyResult<Device> {
    let spec = ModSpec::new(weights, residue, modulus).map_err(err)?;
    Ok(Device { inner: construct::compile_mod(&spec).map_err(err)? })
}

#[pyfunction]
fn compile_threshold(weights: Vec<i64>, threshold: i64) -> PyResult<Device> {
    let spec = ThresholdSpec::new(weights, threshold);
    Ok(Device { inner: construct::compile_threshold(&spec).map_err(err)? })
}

/// `coefficients` are fractions written as strings, such as "1/2" or "-3".
#[pyfunction]
fn compile_affine(coefficients: Vec<String>, offsets: Vec<i64>, constant: i64) -> PyResult<Device> {
    let coefficients = coefficients
        .iter()
        .map(|s| s.trim().parse::<Ratio<i64>>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| PyValueError::new_err(format!("bad coefficient: {e}")))?;
    let spec = AffineSpec::new(coefficients, offsets, constant).map_err(err)?;
    Ok(Device { inner: construct::compile_affine(&spec).map_err(err)? })
}

#[pyfunction]
fn complement(d: &Device) -> PyResult<Device> {
    Ok(Device { inner: construct::complement(&d.inner).map_err(err)? })
}

/// `op` is "and" or "or".
#[pyfunction]
fn combine(a: &Device, b: &Device, op: &str) -> PyResult<Device> {
    let op = match op {
        "and" => BoolOp::And,
        "or" => BoolOp::Or,
        other => return Err(PyValueError::new_err(format!("unknown operation {other:?}"))),
    };
    Ok(Device { inner: construct::combine_boolean(&a.inner, &b.inner, op).map_err(err)? })
}

#[pymodule]
pub fn rrcrn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Device>()?;
    m.add_class::<Verification>()?;
    m.add_function(wrap_pyfunction!(compile_mod, m)?)?;
    m.add_function(wrap_pyfunction!(compile_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(compile_affine, m)?)?;
    m.add_function(wrap_pyfunction!(complement, m)?)?;
    m.add_function(wrap_pyfunction!(combine, m)?)?;
    Ok(())
}

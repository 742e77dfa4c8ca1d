use pyo3::ffi::c_str;
use pyo3::prelude::*;
use rrcrn_py::rrcrn_py;

#[test]
fn module_runs_from_python() {
    pyo3::append_to_inittab!(rrcrn_py);
    Python::initialize();
    Python::attach(|py| {
        py.run(
            c_str!(
                r#"
import rrcrn_py
d = rrcrn_py.compile_threshold([1, -1], 0)
assert d.arity == 2
v = d.verify([2, 1], cap_extra=4)
assert v.verdict == "VERIFIED-UP-TO-CAP" and v.stable_output == "yes", v
assert d.output(d.initial_configuration([0, 3])) in ("yes", "no", "undefined")
assert rrcrn_py.Device.parse(d.to_text()).to_text() == d.to_text()
try:
    d.verify([1, 1], model="fast")
    raise AssertionError("bad model accepted")
except ValueError:
    pass
"#
            ),
            None,
            None,
        )
        .unwrap();
    });
}

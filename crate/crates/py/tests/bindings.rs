use pyo3::prelude::*;
use pyo3::types::PyDict;

use gramlaw_py::gramlaw_py;

fn run(code: &str) {
    pyo3::append_to_inittab!(gramlaw_py);
    Python::attach(|py| {
        let globals = PyDict::new(py);
        let code = std::ffi::CString::new(code).unwrap();
        py.run(&code, Some(&globals), None)
            .unwrap_or_else(|e| panic!("{e}"));
    });
}

#[test]
fn module_exposes_main_operations() {
    run(r#"
import math
import gramlaw_py as g
assert abs(g.gram_point(0) - 17.8455995404) < 1e-9
arc = g.ArcInterval.gram(4)
p = g.prob_u_all(4, arc)
assert abs(sum(p) - 1) < 1e-12
assert abs(p[1] - 0.670641) < 1e-6
assert abs(g.prob_su_corollary(3, 1) - g.quad_prob_su(3, 1)) < 1e-9
e = g.mc_prob_su(2, 1, 5000, 1)
assert e.value == 1.0 and e.std_error == 0.0
try:
    g.prob_u(3, 5, arc)
    raise SystemExit("k > N accepted")
except ValueError:
    pass
z = g.ZeroOrdinateList([14.134725, 21.022040], (10.0, 22.0))
assert len(z) == 2 and z.coverage == (10.0, 22.0)
assert g.matrix_index(5) == 594
"#);
}

//! Python bindings: exact scalars, rule construction, verification and the
//! obstruction and identity checks. Exact values cross the boundary as strings.

use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

use cubforge_core::analysis::{builtin_identity, identity_check, rule_to_identity, sharpness, verify_exactness, SymmetricIdentity};
use cubforge_core::constructor::{self, index6_obstruction, p4_certificate, Degree4Problem, Degree5Problem};
use cubforge_core::reduction::{design_4_11_5_1, victoir_simplex, Assignment};
use cubforge_core::rule::{CubatureRule, Exactness};
use cubforge_core::scalar;
use cubforge_core::symmetry::WeightExponent;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn gamma(s: &str) -> PyResult<WeightExponent> {
    s.parse().map_err(value_error)
}

/// `a + b·√D` with rational `a`, `b`.
#[pyclass(name = "ExactScalar", module = "cubforge", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyScalar(scalar::ExactScalar);

#[pymethods]
impl PyScalar {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(PyScalar).map_err(value_error)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("ExactScalar('{}')", self.0)
    }

    fn __float__(&self) -> f64 {
        self.0.to_f64()
    }

    fn __add__(&self, other: &PyScalar) -> PyResult<Self> {
        self.0.try_add(&other.0).map(PyScalar).map_err(value_error)
    }

    fn __sub__(&self, other: &PyScalar) -> PyResult<Self> {
        self.0.try_sub(&other.0).map(PyScalar).map_err(value_error)
    }

    fn __mul__(&self, other: &PyScalar) -> PyResult<Self> {
        self.0.try_mul(&other.0).map(PyScalar).map_err(value_error)
    }

    fn __truediv__(&self, other: &PyScalar) -> PyResult<Self> {
        if other.0.is_zero() {
            return Err(PyZeroDivisionError::new_err("division by zero"));
        }
        self.0.try_div(&other.0).map(PyScalar).map_err(value_error)
    }

    fn __neg__(&self) -> Self {
        PyScalar(-&self.0)
    }

    /// -1, 0 or 1, decided exactly.
    fn sign(&self) -> i8 {
        self.0.signum()
    }

    fn is_rational(&self) -> bool {
        self.0.is_rational()
    }
}

#[pyclass(name = "Rule", module = "cubforge", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyRule(CubatureRule);

#[pymethods]
impl PyRule {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        CubatureRule::from_json(text).map(PyRule).map_err(value_error)
    }

    fn to_json(&self) -> PyResult<String> {
        self.0.to_json().map_err(value_error)
    }

    #[getter]
    fn node_count(&self) -> u64 {
        self.0.node_count_u64()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn domain(&self) -> String {
        self.0.domain().to_string()
    }

    #[getter]
    fn exactness(&self) -> String {
        self.0.exactness().to_string()
    }

    /// Total weight of each orbit, as exact strings.
    #[getter]
    fn weights(&self) -> Vec<String> {
        self.0.orbits().iter().map(|o| o.weight.to_string()).collect()
    }

    #[getter]
    fn provenance(&self) -> Vec<String> {
        self.0.provenance().to_vec()
    }

    /// Exactness at the stated level, or at `index` / `degree` when given.
    #[pyo3(signature = (index=None, degree=None))]
    fn verify(&self, index: Option<u32>, degree: Option<u32>) -> PyResult<bool> {
        let target = match (index, degree) {
            (Some(_), Some(_)) => return Err(PyValueError::new_err("give index or degree, not both")),
            (Some(t), None) => Exactness::Index(t),
            (None, Some(n)) => Exactness::Degree(n),
            (None, None) => self.0.exactness(),
        };
        verify_exactness(&self.0, target).map(|r| r.passed).map_err(value_error)
    }

    fn is_sharp(&self) -> PyResult<bool> {
        sharpness(&self.0).map(|r| r.is_sharp()).map_err(value_error)
    }

    #[pyo3(signature = (antipodal=false))]
    fn to_sphere(&self, antipodal: bool) -> PyResult<Self> {
        let mut r = self.0.simplex_to_sphere().map_err(value_error)?;
        if antipodal {
            r = r.antipodal_reduce().map_err(value_error)?;
        }
        Ok(PyRule(r))
    }

    /// Reduce orbit `orbit` with the bundled 4-(11,5,1) design.
    fn reduce_with_bundled_design(&self, orbit: usize) -> PyResult<Self> {
        let design = design_4_11_5_1();
        victoir_simplex(&self.0, &[Assignment::design(orbit, &design)]).map(PyRule).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!("Rule({}, d={}, {}, {} nodes)", self.0.domain(), self.0.dim(), self.0.exactness(), self.0.node_count())
    }
}

#[pyclass(name = "Solution", module = "cubforge", frozen, get_all)]
struct PySolution {
    a: String,
    weights: Vec<String>,
    positive: bool,
    rule: PyRule,
}

fn solution(s: constructor::RuleSolution) -> PySolution {
    PySolution {
        a: s.a.to_string(),
        weights: s.weights.iter().map(|w| w.to_string()).collect(),
        positive: s.is_positive(),
        rule: PyRule(s.rule),
    }
}

/// Index-4 rule on the orbits `ks` plus `u_{a,p}`.
#[pyfunction]
#[pyo3(signature = (d, ks, p, a, gamma="0"))]
fn solve_degree4(d: usize, ks: Vec<usize>, p: usize, a: &str, gamma: &str) -> PyResult<PySolution> {
    let problem = Degree4Problem { d, gamma: self::gamma(gamma)?, ks, p, a: a.parse().map_err(value_error)? };
    constructor::solve_degree4(&problem).map(solution).map_err(value_error)
}

/// Index-5 rule; `a` is forced by `d`, `gamma` and `p`.
#[pyfunction]
#[pyo3(signature = (d, ks, p, gamma="0"))]
fn solve_degree5(d: usize, ks: Vec<usize>, p: usize, gamma: &str) -> PyResult<PySolution> {
    let problem = Degree5Problem { d, gamma: self::gamma(gamma)?, ks, p };
    constructor::solve_degree5(&problem).map(solution).map_err(value_error)
}

#[pyfunction]
#[pyo3(signature = (gamma="0"))]
fn obstruction(gamma: &str) -> PyResult<String> {
    Ok(index6_obstruction(&self::gamma(gamma)?).to_string())
}

#[pyfunction]
#[pyo3(signature = (d, gamma="0"))]
fn p4_holds(d: usize, gamma: &str) -> PyResult<bool> {
    if d == 0 {
        return Err(PyValueError::new_err("d must be positive"));
    }
    Ok(p4_certificate(d, &self::gamma(gamma)?).holds())
}

/// Check a bundled identity by name, or identity text.
#[pyfunction]
fn check_identity(name_or_text: &str) -> PyResult<bool> {
    let id: SymmetricIdentity = match builtin_identity(name_or_text) {
        Some(id) => id,
        None => name_or_text.parse().map_err(value_error)?,
    };
    Ok(identity_check(&id).passed)
}

#[pyfunction]
fn identity_from_rule(rule: &PyRule, t: u32) -> PyResult<String> {
    rule_to_identity(&rule.0, t).map(|id| id.to_string()).map_err(value_error)
}

#[pymodule]
fn cubforge(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScalar>()?;
    m.add_class::<PyRule>()?;
    m.add_class::<PySolution>()?;
    m.add_function(wrap_pyfunction!(solve_degree4, m)?)?;
    m.add_function(wrap_pyfunction!(solve_degree5, m)?)?;
    m.add_function(wrap_pyfunction!(obstruction, m)?)?;
    m.add_function(wrap_pyfunction!(p4_holds, m)?)?;
    m.add_function(wrap_pyfunction!(check_identity, m)?)?;
    m.add_function(wrap_pyfunction!(identity_from_rule, m)?)?;
    Ok(())
}

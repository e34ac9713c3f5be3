//! Python bindings. Reports come back as plain dicts built from the JSON
//! renderings in the core crate.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyIOError, PyValueError};
use pyo3::prelude::*;
use serde_json::Value;

use u21_core::classify::{self, Chi1Class, ClassifyError, Level, PadicCharDescriptor};
use u21_core::grp::{self, GroupSpec};
use u21_core::hecke;
use u21_core::meataxe::{self, MeatAxeError};
use u21_core::modrep::{self, FlatModule, ModrepError};
use u21_core::verify;

create_exception!(u21, UnsupportedCase, PyException);
create_exception!(u21, MeatAxeFailure, PyException);

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    let json = py.import("json")?;
    Ok(json.call_method1("loads", (v.to_string(),))?.unbind())
}

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn modrep_err(e: ModrepError) -> PyErr {
    match e {
        ModrepError::Io(_) => PyIOError::new_err(e.to_string()),
        _ => value_err(e),
    }
}

fn meataxe_err(e: MeatAxeError) -> PyErr {
    match e {
        MeatAxeError::Module(m) => modrep_err(m),
        _ => MeatAxeFailure::new_err(e.to_string()),
    }
}

fn classify_err(e: ClassifyError) -> PyErr {
    match e {
        ClassifyError::UnsupportedCase(_) => UnsupportedCase::new_err(e.to_string()),
        _ => value_err(e),
    }
}

/// The unitary group U(1,1) or U(2,1) over GF(q0^2).
#[pyclass(name = "UnitaryGroup", frozen)]
struct PyGroup {
    inner: GroupSpec,
}

#[pymethods]
impl PyGroup {
    #[new]
    fn new(q0: u32, rank: usize) -> PyResult<Self> {
        Ok(PyGroup {
            inner: grp::unitary_group(q0, rank).map_err(value_err)?,
        })
    }

    #[getter]
    fn q0(&self) -> u32 {
        self.inner.q0()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn generator_names(&self) -> Vec<String> {
        self.inner.generator_names().to_vec()
    }

    fn order(&self) -> u64 {
        self.inner.order_formula()
    }

    /// Order by breadth-first enumeration; raises ValueError above the limit.
    fn enumerate_order(&self) -> PyResult<u64> {
        self.inner.enumerate_order().map_err(value_err)
    }

    fn num_flags(&self) -> usize {
        grp::flag_table(&self.inner).len()
    }

    /// The principal series induced from the torus character (e1, e2) mod ell.
    #[pyo3(signature = (ell, e1=0, e2=0))]
    fn induce(&self, ell: u32, e1: u64, e2: u64) -> PyResult<PyModule_> {
        let chi = modrep::torus_character(self.inner.q0(), e1, e2, ell).map_err(modrep_err)?;
        let table = grp::flag_table(&self.inner);
        let m = modrep::induced_module(&self.inner, &table, &chi).map_err(modrep_err)?;
        Ok(PyModule_ { inner: m })
    }

    fn __repr__(&self) -> String {
        format!("UnitaryGroup(q0={}, rank={})", self.inner.q0(), self.inner.rank())
    }
}

/// A module given by generator matrices over a finite field.
#[pyclass(name = "Module", frozen)]
struct PyModule_ {
    inner: FlatModule,
}

#[pymethods]
impl PyModule_ {
    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        Ok(PyModule_ {
            inner: modrep::module_read(path).map_err(modrep_err)?,
        })
    }

    #[staticmethod]
    fn from_fmod(text: &str) -> PyResult<Self> {
        Ok(PyModule_ {
            inner: modrep::module_from_str(text).map_err(modrep_err)?,
        })
    }

    fn write(&self, path: &str) -> PyResult<()> {
        modrep::module_write(&self.inner, path).map_err(modrep_err)
    }

    fn to_fmod(&self) -> String {
        modrep::module_to_string(&self.inner)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn label(&self) -> &str {
        self.inner.label()
    }

    #[getter]
    fn field(&self) -> (u32, u32) {
        let f = self.inner.field();
        (f.characteristic(), f.degree())
    }

    #[pyo3(signature = (seed=verify::DEFAULT_SEED))]
    fn chop(&self, py: Python<'_>, seed: u64) -> PyResult<Py<PyAny>> {
        let r = py.detach(|| meataxe::chop(&self.inner, seed)).map_err(meataxe_err)?;
        to_py(py, &r.to_json())
    }

    #[pyo3(signature = (seed=verify::DEFAULT_SEED))]
    fn socle_series(&self, py: Python<'_>, seed: u64) -> PyResult<Py<PyAny>> {
        let r = py
            .detach(|| meataxe::socle_series(&self.inner, seed))
            .map_err(meataxe_err)?;
        to_py(py, &r.to_json())
    }

    fn endomorphism_algebra(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let e = meataxe::endomorphism_algebra(&self.inner).map_err(meataxe_err)?;
        to_py(py, &e.to_json())
    }

    fn quadratic_parameter(&self, py: Python<'_>, q0: u32) -> PyResult<Py<PyAny>> {
        let e = meataxe::endomorphism_algebra(&self.inner).map_err(meataxe_err)?;
        let p = meataxe::quadratic_parameter(&e, &self.inner, q0).map_err(meataxe_err)?;
        to_py(py, &p.to_json())
    }

    fn __repr__(&self) -> String {
        format!("Module(dim={}, label={:?})", self.inner.dim(), self.inner.label())
    }
}

/// Character table of the two-generator Hecke algebra; ell = 0 for characteristic zero.
#[pyfunction]
#[pyo3(signature = (q, a=1, ell=0))]
fn hecke_characters(py: Python<'_>, q: u64, a: u32, ell: u64) -> PyResult<Py<PyAny>> {
    let p = hecke::presentation(q, a, ell).map_err(value_err)?;
    to_py(py, &p.to_json())
}

#[pyfunction]
#[pyo3(signature = (q, ell, e1=0, e2=0, rank=3))]
fn classify_finite(py: Python<'_>, q: u64, ell: u64, e1: u64, e2: u64, rank: usize) -> PyResult<Py<PyAny>> {
    let r = classify::finite_ps_structure(q, ell, e1, e2, rank).map_err(classify_err)?;
    to_py(py, &r.to_json())
}

/// `chi1_class` is one of the class names such as "trivial" or "delta_half".
#[pyfunction]
#[pyo3(signature = (q, ell, chi1_class, positive_level=false))]
fn classify_padic(py: Python<'_>, q: u64, ell: u64, chi1_class: &str, positive_level: bool) -> PyResult<Py<PyAny>> {
    let class = Chi1Class::from_name(chi1_class)
        .ok_or_else(|| value_err(format!("unknown character class {chi1_class:?}")))?;
    let d = PadicCharDescriptor {
        level: if positive_level { Level::Positive } else { Level::Zero },
        chi1_class: class,
        chi2_absorbed: true,
        q,
        ell,
    };
    let r = classify::padic_ps_structure(&d).map_err(classify_err)?;
    to_py(py, &r.to_json())
}

/// Runs the desk acceptance suite and returns its report.
#[pyfunction]
#[pyo3(signature = (seed=verify::DEFAULT_SEED))]
fn verify_desk(py: Python<'_>, seed: u64) -> PyResult<Py<PyAny>> {
    let r = py.detach(|| verify::run_desk(seed));
    to_py(py, &r.to_json())
}

#[pymodule]
fn u21(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PyModule_>()?;
    m.add_function(wrap_pyfunction!(hecke_characters, m)?)?;
    m.add_function(wrap_pyfunction!(classify_finite, m)?)?;
    m.add_function(wrap_pyfunction!(classify_padic, m)?)?;
    m.add_function(wrap_pyfunction!(verify_desk, m)?)?;
    m.add("UnsupportedCase", m.py().get_type::<UnsupportedCase>())?;
    m.add("MeatAxeFailure", m.py().get_type::<MeatAxeFailure>())?;
    Ok(())
}

//! Python module `gramlaw_py`.

use std::path::PathBuf;

use gramlaw::fourier::FourierCoefficientTable as CoreFourier;
use gramlaw::montecarlo::{Estimate as CoreEstimate, HaarSampler, McConfig};
use gramlaw::table::{self, T4Method, TableArtifact};
use gramlaw::unitary::ArcInterval as CoreArc;
use gramlaw::zeros::ZeroOrdinateList as CoreZeros;
use gramlaw::{gram, special, special_unitary as su, unitary, Error};
use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Domain(_) | Error::Range(_) | Error::Unsupported(_) | Error::Parse { .. } => {
            PyValueError::new_err(e.to_string())
        }
        Error::Io(_) => PyIOError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

#[pyclass(name = "ArcInterval", frozen)]
struct ArcInterval(CoreArc);

#[pymethods]
impl ArcInterval {
    #[new]
    fn new(start: f64, length: f64) -> PyResult<Self> {
        CoreArc::new(start, length).map(ArcInterval).map_err(to_py)
    }

    /// [-π, -π + 2π/N)
    #[staticmethod]
    fn gram(n: usize) -> Self {
        ArcInterval(CoreArc::gram(n))
    }

    #[getter]
    fn start(&self) -> f64 {
        self.0.start()
    }

    #[getter]
    fn length(&self) -> f64 {
        self.0.length()
    }

    fn contains(&self, theta: f64) -> bool {
        self.0.contains(theta)
    }

    fn __repr__(&self) -> String {
        format!("ArcInterval(start={}, length={})", self.0.start(), self.0.length())
    }
}

#[pyclass(name = "Estimate", frozen)]
struct Estimate(CoreEstimate);

#[pymethods]
impl Estimate {
    #[getter]
    fn value(&self) -> f64 {
        self.0.value
    }

    #[getter]
    fn std_error(&self) -> f64 {
        self.0.std_error
    }

    #[getter]
    fn samples(&self) -> u64 {
        self.0.samples
    }

    fn __repr__(&self) -> String {
        format!("Estimate(value={}, std_error={})", self.0.value, self.0.std_error)
    }
}

#[pyclass(name = "ZeroOrdinateList", frozen)]
struct ZeroOrdinateList(CoreZeros);

#[pymethods]
impl ZeroOrdinateList {
    #[new]
    #[pyo3(signature = (ordinates, coverage=None))]
    fn new(ordinates: Vec<f64>, coverage: Option<(f64, f64)>) -> PyResult<Self> {
        match coverage {
            Some(c) => CoreZeros::new(ordinates, c),
            None => CoreZeros::from_ordinates(ordinates),
        }
        .map(ZeroOrdinateList)
        .map_err(to_py)
    }

    #[staticmethod]
    fn read(path: PathBuf) -> PyResult<Self> {
        CoreZeros::read_path(&path).map(ZeroOrdinateList).map_err(to_py)
    }

    fn write(&self, path: PathBuf) -> PyResult<()> {
        self.0.write_path(&path).map_err(to_py)
    }

    #[getter]
    fn ordinates(&self) -> Vec<f64> {
        self.0.ordinates().to_vec()
    }

    #[getter]
    fn coverage(&self) -> (f64, f64) {
        self.0.coverage()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    /// Table-1 counts of [g_0, g_M) intervals with k = 0..4 zeros.
    fn table1_row(&self, m: i64) -> PyResult<[u64; 5]> {
        gram::gram_stats_table1(&self.0, m).map_err(to_py)
    }

    /// Proportions G_{M_N, M_{N+1}}(k), k = 0, 1, 2.
    fn table3_row(&self, n: u32) -> PyResult<[f64; 3]> {
        gram::gram_stats_table3(&self.0, n).map_err(to_py)
    }
}

#[pyclass(name = "FourierCoefficientTable", frozen)]
struct FourierCoefficientTable(CoreFourier);

#[pymethods]
impl FourierCoefficientTable {
    #[new]
    fn new(n: usize) -> PyResult<Self> {
        CoreFourier::new(n).map(FourierCoefficientTable).map_err(to_py)
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.0.dimension()
    }

    /// Cosine-basis coefficient c_j.
    fn coefficient(&self, j: Vec<i8>) -> i64 {
        self.0.cos_coefficient(&j)
    }

    fn terms(&self) -> Vec<(Vec<i8>, i64)> {
        self.0.cos_terms()
    }

    fn evaluate(&self, theta: Vec<f64>) -> f64 {
        self.0.evaluate(&theta)
    }
}

#[pyfunction]
#[pyo3(signature = (t, order=6))]
fn theta(t: f64, order: usize) -> PyResult<f64> {
    special::theta(t, special::ThetaExpansionConfig { order }).map_err(to_py)
}

#[pyfunction]
fn gram_point(m: i64) -> PyResult<f64> {
    special::gram_point(m).map_err(to_py)
}

#[pyfunction]
fn hardy_z(t: f64) -> PyResult<f64> {
    special::hardy_z(t).map_err(to_py)
}

#[pyfunction]
fn zeta_critical_line(t: f64) -> PyResult<Complex64> {
    special::zeta_critical_line(t).map_err(to_py)
}

#[pyfunction]
fn cosine_integral(x: f64) -> PyResult<f64> {
    special::cosine_integral(x).map_err(to_py)
}

#[pyfunction]
fn alpha_constant() -> f64 {
    special::alpha_constant()
}

#[pyfunction]
fn find_zeros(py: Python<'_>, t_lo: f64, t_hi: f64) -> PyResult<ZeroOrdinateList> {
    py.detach(|| gramlaw::zeros::find_zeros(t_lo, t_hi))
        .map(ZeroOrdinateList)
        .map_err(to_py)
}

#[pyfunction]
fn matrix_index(n: u32) -> PyResult<u64> {
    gram::matrix_index(n).map(|h| h.gram_index).map_err(to_py)
}

#[pyfunction]
fn prob_u(n: usize, k: usize, arc: &ArcInterval) -> PyResult<f64> {
    unitary::prob_u(n, k, &arc.0).map_err(to_py)
}

#[pyfunction]
fn prob_u_all(n: usize, arc: &ArcInterval) -> PyResult<Vec<f64>> {
    unitary::prob_u_all(n, &arc.0).map_err(to_py)
}

#[pyfunction]
fn kernel_eigenvalues(n: usize, arc: &ArcInterval) -> PyResult<Vec<f64>> {
    unitary::kernel_matrix(n, &arc.0)
        .and_then(|k| k.eigenvalues())
        .map_err(to_py)
}

fn mc_config(samples: u64, seed: u64, workers: usize, sampler: &str) -> PyResult<McConfig> {
    let s = match sampler {
        "verblunsky" => HaarSampler::Verblunsky,
        "matrix" => HaarSampler::Matrix,
        _ => return Err(PyValueError::new_err(format!("unknown sampler {sampler:?}"))),
    };
    Ok(McConfig::new(samples, seed).with_workers(workers).with_sampler(s))
}

#[pyfunction]
#[pyo3(signature = (n, arc, samples, seed, workers=8, sampler="verblunsky"))]
fn mc_distribution_u(
    py: Python<'_>,
    n: usize,
    arc: &ArcInterval,
    samples: u64,
    seed: u64,
    workers: usize,
    sampler: &str,
) -> PyResult<Vec<Estimate>> {
    let cfg = mc_config(samples, seed, workers, sampler)?;
    let arc = arc.0;
    let est = py.detach(|| unitary::mc_distribution_u(n, &arc, &cfg)).map_err(to_py)?;
    Ok(est.into_iter().map(Estimate).collect())
}

#[pyfunction]
#[pyo3(signature = (n, k, samples, seed, workers=8, sampler="verblunsky"))]
fn mc_prob_su(
    py: Python<'_>,
    n: usize,
    k: usize,
    samples: u64,
    seed: u64,
    workers: usize,
    sampler: &str,
) -> PyResult<Estimate> {
    let cfg = mc_config(samples, seed, workers, sampler)?;
    py.detach(|| su::mc_prob_su(n, k, &cfg)).map(Estimate).map_err(to_py)
}

#[pyfunction]
fn quad_prob_su(py: Python<'_>, n: usize, k: usize) -> PyResult<f64> {
    py.detach(|| su::quad_prob_su(n, k)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, k, arc=None))]
fn prob_su_corollary(n: usize, k: usize, arc: Option<&ArcInterval>) -> PyResult<f64> {
    let arc = arc.map_or(CoreArc::gram(n), |a| a.0);
    su::prob_su_corollary(n, k, &arc).map_err(to_py)
}

#[pyfunction]
fn asymptotic_prob_su(n: usize, k: usize) -> PyResult<f64> {
    su::asymptotic_prob_su(n, k).map_err(to_py)
}

#[pyfunction]
fn x2_integral(n: usize) -> PyResult<f64> {
    su::x2_integral(n).map(|c| c.value).map_err(to_py)
}

#[pyfunction]
fn x2_term(n: usize, theta1: f64, theta2: f64) -> f64 {
    su::x2_term(n, theta1, theta2)
}

#[pyfunction]
fn sine_sum(n: usize) -> f64 {
    su::sine_sum(n)
}

/// One of T2, T4 or asymptotics as CSV text.
#[pyfunction]
#[pyo3(signature = (id, n_max, method="corollary", samples=1_000_000, seed=42, workers=8))]
fn table_csv(
    py: Python<'_>,
    id: &str,
    n_max: usize,
    method: &str,
    samples: u64,
    seed: u64,
    workers: usize,
) -> PyResult<String> {
    let cfg = mc_config(samples, seed, workers, "verblunsky")?;
    let route = match method {
        "corollary" => T4Method::Corollary,
        "quadrature" => T4Method::Quadrature,
        "mc" => T4Method::MonteCarlo,
        _ => return Err(PyValueError::new_err(format!("unknown method {method:?}"))),
    };
    let id: table::TableId = id.parse().map_err(to_py)?;
    let build = || -> gramlaw::Result<TableArtifact> {
        match id {
            table::TableId::T2 => table::table2(n_max),
            table::TableId::T4 => table::table4(n_max, route, &cfg),
            table::TableId::Asymptotics => table::asymptotics(n_max),
            other => Err(Error::Unsupported(format!("{other} needs zero data; use ZeroOrdinateList"))),
        }
    };
    py.detach(build)
        .and_then(|t| t.to_csv_string())
        .map_err(to_py)
}

#[pymodule]
pub fn gramlaw_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<ArcInterval>()?;
    m.add_class::<Estimate>()?;
    m.add_class::<ZeroOrdinateList>()?;
    m.add_class::<FourierCoefficientTable>()?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(gram_point, m)?)?;
    m.add_function(wrap_pyfunction!(hardy_z, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_critical_line, m)?)?;
    m.add_function(wrap_pyfunction!(cosine_integral, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_constant, m)?)?;
    m.add_function(wrap_pyfunction!(find_zeros, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_index, m)?)?;
    m.add_function(wrap_pyfunction!(prob_u, m)?)?;
    m.add_function(wrap_pyfunction!(prob_u_all, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(mc_distribution_u, m)?)?;
    m.add_function(wrap_pyfunction!(mc_prob_su, m)?)?;
    m.add_function(wrap_pyfunction!(quad_prob_su, m)?)?;
    m.add_function(wrap_pyfunction!(prob_su_corollary, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_prob_su, m)?)?;
    m.add_function(wrap_pyfunction!(x2_integral, m)?)?;
    m.add_function(wrap_pyfunction!(x2_term, m)?)?;
    m.add_function(wrap_pyfunction!(sine_sum, m)?)?;
    m.add_function(wrap_pyfunction!(table_csv, m)?)?;
    Ok(())
}

//! Python bindings: codes, bounds, the exact oracle, catalogs and the
//! stream engine.

use std::path::{Path, PathBuf};

use lincorr::bounds::{self, BoundKind, MinEntropyRate};
use lincorr::catalog::{self, CatalogEntry, Corrector};
use lincorr::engine;
use lincorr::oracle::{self, BitProbabilities, DEFAULT_ORACLE_LIMIT};
use lincorr::weights::{WeightDistribution, DEFAULT_MAX_DIM};
use lincorr::{BitVector, Error};
use num_bigint::BigUint;
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};

fn to_py(e: Error) -> PyErr {
    match e.exit_code() {
        3 if matches!(e, Error::Io { .. }) => PyOSError::new_err(e.to_string()),
        3 => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn kind(name: &str) -> PyResult<BoundKind> {
    name.parse().map_err(to_py)
}

fn rate(h: f64) -> PyResult<MinEntropyRate> {
    MinEntropyRate::new(h).map_err(to_py)
}

fn bits(v: &[u32]) -> BitVector {
    BitVector::from_bits(v.iter().map(|&b| b != 0))
}

/// A binary linear code used as a corrector.
#[pyclass(name = "Code", module = "lincorr")]
struct PyCode {
    inner: Corrector,
}

#[pymethods]
impl PyCode {
    /// Code from a JSON object in the catalog schema; `wd_ref` resolves
    /// against `base_dir`.
    #[staticmethod]
    #[pyo3(signature = (text, base_dir = None))]
    fn from_json(text: &str, base_dir: Option<PathBuf>) -> PyResult<Self> {
        let base = base_dir.unwrap_or_else(|| PathBuf::from("."));
        Ok(PyCode {
            inner: catalog::parse_code(text, &base).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(PyCode {
            inner: catalog::load_code(&path).map_err(to_py)?,
        })
    }

    /// Code spanned by generator rows given as '0'/'1' strings.
    #[staticmethod]
    #[pyo3(signature = (rows, name = "", d = None))]
    fn from_rows(rows: Vec<String>, name: &str, d: Option<usize>) -> PyResult<Self> {
        let first = rows.first().ok_or_else(|| PyValueError::new_err("no rows"))?;
        let parsed = rows
            .iter()
            .map(|r| BitVector::from_bit_str(r).map(|v| v.to_hex()))
            .collect::<lincorr::Result<Vec<_>>>()
            .map_err(to_py)?;
        let entry = CatalogEntry {
            name: name.into(),
            family: String::new(),
            n: first.len(),
            k: rows.len(),
            d,
            cyclic: false,
            construction: catalog::Construction::Generator(parsed),
            wd_ref: None,
            wd: None,
            provenance: None,
        };
        Ok(PyCode {
            inner: Corrector::from_entry(entry, Path::new(".")).map_err(to_py)?,
        })
    }

    /// Cyclic code of length `n` from a generator polynomial given as a
    /// '0'/'1' string of coefficients, lowest degree first.
    #[staticmethod]
    #[pyo3(signature = (n, poly, name = "", d = None))]
    fn cyclic(n: usize, poly: &str, name: &str, d: Option<usize>) -> PyResult<Self> {
        let g = BitVector::from_bit_str(poly).map_err(to_py)?;
        let code = lincorr::expand_cyclic(n, &g).map_err(to_py)?;
        let entry = CatalogEntry {
            name: name.into(),
            family: String::new(),
            n,
            k: code.k(),
            d,
            cyclic: true,
            construction: catalog::Construction::GenPoly(g.to_hex()),
            wd_ref: None,
            wd: None,
            provenance: None,
        };
        Ok(PyCode {
            inner: Corrector::from_entry(entry, Path::new(".")).map_err(to_py)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.code.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.code.k()
    }

    #[getter]
    fn d(&self) -> Option<usize> {
        self.inner.entry.d
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.entry.name.clone()
    }

    #[getter]
    fn is_cyclic(&self) -> bool {
        self.inner.code.is_cyclic()
    }

    /// Counts `A_0..A_n` as Python ints.
    #[pyo3(signature = (max_dim = DEFAULT_MAX_DIM))]
    fn weight_distribution(&self, max_dim: usize) -> PyResult<Vec<BigUint>> {
        let (wd, _) = self.inner.weight_distribution(max_dim).map_err(to_py)?;
        Ok(wd.counts().to_vec())
    }

    /// Lower bound on total output min-entropy at input rate `h_in`.
    #[pyo3(signature = (h_in, bound = "new", max_dim = DEFAULT_MAX_DIM))]
    fn bound(&self, h_in: f64, bound: &str, max_dim: usize) -> PyResult<f64> {
        let b = self.inner.bound(kind(bound)?, max_dim).map_err(to_py)?;
        Ok(b.total(rate(h_in)?).value())
    }

    #[pyo3(signature = (bound = "new", h_out1 = 0.999, max_dim = DEFAULT_MAX_DIM))]
    fn h_in_req(&self, bound: &str, h_out1: f64, max_dim: usize) -> PyResult<f64> {
        let b = self.inner.bound(kind(bound)?, max_dim).map_err(to_py)?;
        Ok(bounds::solve_h_in_req(b.as_ref(), h_out1).map_err(to_py)?.h_in.value())
    }

    #[pyo3(signature = (h_in, bound = "new", h_out1 = 0.999, max_dim = DEFAULT_MAX_DIM))]
    fn efficiency(&self, h_in: f64, bound: &str, h_out1: f64, max_dim: usize) -> PyResult<f64> {
        let b = self.inner.bound(kind(bound)?, max_dim).map_err(to_py)?;
        bounds::efficiency(b.as_ref(), h_out1, rate(h_in)?).map_err(to_py)
    }

    /// Exact output min-entropy for independent bits with the given
    /// one-probabilities.
    fn exact_min_entropy(&self, probs: Vec<f64>) -> PyResult<f64> {
        let p = BitProbabilities::new(probs).map_err(to_py)?;
        let dist = oracle::exact_output_dist(&self.inner.code, &p, DEFAULT_ORACLE_LIMIT).map_err(to_py)?;
        Ok(oracle::exact_min_entropy(&dist).map_err(to_py)?.value())
    }

    fn most_probable_coset_check(&self, probs: Vec<f64>) -> PyResult<bool> {
        let p = BitProbabilities::new(probs).map_err(to_py)?;
        oracle::most_probable_coset_check(&self.inner.code, &p, DEFAULT_ORACLE_LIMIT).map_err(to_py)
    }

    /// `G x` for one block of `n` bits (0/1 values).
    fn apply(&self, x: Vec<u32>) -> PyResult<Vec<u32>> {
        let y = engine::apply_block(&self.inner.code, &bits(&x)).map_err(to_py)?;
        Ok(y.iter().map(u32::from).collect())
    }

    /// Runs a byte string through the corrector; returns the output bytes
    /// and a stats dict.
    fn apply_bytes<'py>(&self, py: Python<'py>, data: &[u8]) -> PyResult<(Bound<'py, PyBytes>, Bound<'py, PyDict>)> {
        let path = if self.inner.code.is_cyclic() {
            engine::Path::Cyclic
        } else {
            engine::Path::Dense
        };
        let (out, st) = engine::apply_bytes(&self.inner.code, data, path).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("blocks", st.blocks)?;
        d.set_item("in_bits", st.in_bits)?;
        d.set_item("out_bits", st.out_bits)?;
        d.set_item("dropped_bits", st.dropped_bits)?;
        Ok((PyBytes::new(py, &out), d))
    }

    fn __repr__(&self) -> String {
        let d = self.inner.entry.d.map(|d| format!(",{d}")).unwrap_or_default();
        format!("Code({:?}, [{},{}{}])", self.inner.entry.name, self.n(), self.k(), d)
    }
}

/// Old bound from `(n, k, d)` alone.
#[pyfunction]
fn old_bound(n: usize, k: usize, d: usize, h_in: f64) -> PyResult<f64> {
    Ok(bounds::old_bound(n, k, d, rate(h_in)?).map_err(to_py)?.value())
}

/// New bound from a weight distribution `A_0..A_n` of a dimension-`k` code.
#[pyfunction]
fn new_bound(counts: Vec<BigUint>, k: usize, h_in: f64) -> PyResult<f64> {
    let wd = WeightDistribution::with_dimension(counts, k).map_err(to_py)?;
    Ok(bounds::new_bound(&wd, k, rate(h_in)?).map_err(to_py)?.value())
}

/// Dual distribution by the MacWilliams transform.
#[pyfunction]
fn macwilliams(counts: Vec<BigUint>, k: usize) -> PyResult<Vec<BigUint>> {
    let wd = WeightDistribution::with_dimension(counts, k).map_err(to_py)?;
    Ok(lincorr::macwilliams(&wd, k).map_err(to_py)?.counts().to_vec())
}

fn record_dict<'py>(py: Python<'py>, r: &catalog::CorrectorRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("name", &r.name)?;
    d.set_item("n", r.n)?;
    d.set_item("k", r.k)?;
    d.set_item("d", r.d)?;
    d.set_item("rate", r.rate)?;
    d.set_item("h_in_req", r.h_in_req)?;
    d.set_item("bound", r.bound_kind.as_str())?;
    d.set_item("efficiency_at_req", r.efficiency_at_req())?;
    Ok(d)
}

fn frontier_of(path: &Path, bound: &str, h_out1: f64, max_dim: usize, cyclic_only: bool) -> PyResult<catalog::Frontier> {
    let loaded = catalog::load_catalog(path, false).map_err(to_py)?;
    let (records, _) = catalog::build_records(&loaded.correctors, kind(bound)?, h_out1, max_dim);
    let mut records = catalog::appropriate(&records, h_out1);
    if cyclic_only {
        records = catalog::cyclic_only(&records);
    }
    catalog::pareto_frontier(&records).map_err(to_py)
}

/// Pareto frontier of a catalog file as a list of dicts.
#[pyfunction]
#[pyo3(signature = (path, bound = "new", h_out1 = 0.999, max_dim = DEFAULT_MAX_DIM, cyclic_only = false))]
fn frontier<'py>(
    py: Python<'py>,
    path: PathBuf,
    bound: &str,
    h_out1: f64,
    max_dim: usize,
    cyclic_only: bool,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let f = frontier_of(&path, bound, h_out1, max_dim, cyclic_only)?;
    f.records().iter().map(|r| record_dict(py, r)).collect()
}

/// Frontier record with the largest requirement not above `h_in`.
#[pyfunction]
#[pyo3(signature = (path, h_in, bound = "new", h_out1 = 0.999, max_dim = DEFAULT_MAX_DIM, cyclic_only = false))]
fn select<'py>(
    py: Python<'py>,
    path: PathBuf,
    h_in: f64,
    bound: &str,
    h_out1: f64,
    max_dim: usize,
    cyclic_only: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let f = frontier_of(&path, bound, h_out1, max_dim, cyclic_only)?;
    record_dict(py, catalog::select_for_target(&f, h_in).map_err(to_py)?)
}

#[pymodule]
#[pyo3(name = "lincorr")]
fn lincorr_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCode>()?;
    m.add_function(wrap_pyfunction!(old_bound, m)?)?;
    m.add_function(wrap_pyfunction!(new_bound, m)?)?;
    m.add_function(wrap_pyfunction!(macwilliams, m)?)?;
    m.add_function(wrap_pyfunction!(frontier, m)?)?;
    m.add_function(wrap_pyfunction!(select, m)?)?;
    Ok(())
}

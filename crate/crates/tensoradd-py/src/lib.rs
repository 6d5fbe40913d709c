//! Python bindings: a thin wrapper over the tensoradd crate exposing the
//! tensor type, the rank oracle, the substitution bound, Strassen
//! verification, and the additivity check.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use tensoradd::decomp::{rank_oracle, strassen_222, DEFAULT_BUDGET};
use tensoradd::directsum::additivity_check;
use tensoradd::io::{FieldSpec, Lcg, TensorFile};
use tensoradd::tensor3::{matmul_tensor, random_hook_tensor, random_tensor, Tensor3};

fn err(e: tensoradd::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rank_cap(dims: (usize, usize, usize)) -> usize {
    let (a, b, c) = dims;
    (a * b).min(a * c).min(b * c)
}

#[pyclass(name = "Tensor", from_py_object)]
#[derive(Clone)]
struct PyTensor {
    inner: Tensor3,
}

#[pymethods]
impl PyTensor {
    /// The matrix multiplication tensor mu_{i,j,k}.
    #[staticmethod]
    #[pyo3(signature = (i, j, k, field="gf2"))]
    fn matmul(i: usize, j: usize, k: usize, field: &str) -> PyResult<Self> {
        let desc = FieldSpec::parse(field).map_err(err)?;
        Ok(PyTensor { inner: matmul_tensor(i, j, k, desc).map_err(err)? })
    }

    /// Uniform random entries from the pinned 64-bit generator.
    #[staticmethod]
    #[pyo3(signature = (a, b, c, field="gf2", seed=0))]
    fn random(a: usize, b: usize, c: usize, field: &str, seed: u64) -> PyResult<Self> {
        let desc = FieldSpec::parse(field).map_err(err)?;
        let mut rng = Lcg::new(seed);
        Ok(PyTensor { inner: random_tensor(desc, (a, b, c), &mut rng) })
    }

    /// Random tensor whose slice space is (e,f)-hook shaped.
    #[staticmethod]
    #[pyo3(signature = (a, b, c, e, f, field="gf2", seed=0))]
    #[allow(clippy::too_many_arguments)]
    fn hook(
        a: usize,
        b: usize,
        c: usize,
        e: usize,
        f: usize,
        field: &str,
        seed: u64,
    ) -> PyResult<Self> {
        let desc = FieldSpec::parse(field).map_err(err)?;
        let mut rng = Lcg::new(seed);
        Ok(PyTensor {
            inner: random_hook_tensor(desc, (a, b, c), e, f, &mut rng).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file: TensorFile =
            serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyTensor { inner: file.to_tensor().map_err(err)? })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&TensorFile::of(&self.inner, None)).unwrap()
    }

    fn dims(&self) -> (usize, usize, usize) {
        self.inner.dims()
    }

    fn field(&self) -> String {
        self.inner.descriptor().to_string()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn flattening_ranks(&self) -> (usize, usize, usize) {
        self.inner.flattening_ranks()
    }

    fn direct_sum(&self, other: &PyTensor) -> PyResult<PyTensor> {
        Ok(PyTensor { inner: self.inner.direct_sum(&other.inner).map_err(err)? })
    }

    /// Exact rank search. Returns (exact_rank_or_None, proven_lower_bound).
    #[pyo3(signature = (max_rank=None, budget=None))]
    fn rank(&self, max_rank: Option<usize>, budget: Option<u64>) -> PyResult<(Option<usize>, usize)> {
        let cap = max_rank.unwrap_or_else(|| rank_cap(self.inner.dims()));
        let r = rank_oracle(&self.inner, cap, budget.unwrap_or(DEFAULT_BUDGET)).map_err(err)?;
        Ok((r.exact_rank(), r.lower_bound()))
    }

    /// Substitution lower bound. Returns (bound, number_of_peels).
    fn substitution_lower_bound(&self) -> PyResult<(usize, usize)> {
        let (bound, trace) =
            tensoradd::bounds::substitution_lower_bound(&self.inner).map_err(err)?;
        Ok((bound, trace.len()))
    }

    fn __repr__(&self) -> String {
        let (a, b, c) = self.inner.dims();
        format!("Tensor({a}x{b}x{c} over {})", self.inner.descriptor())
    }
}

#[pyclass(name = "AdditivityReport")]
struct PyAdditivityReport {
    /// Exact ranks when determined, else None.
    #[pyo3(get)]
    r_prime: Option<usize>,
    #[pyo3(get)]
    r_bis: Option<usize>,
    #[pyo3(get)]
    r_sum: Option<usize>,
    /// r_prime + r_bis - r_sum when all three ranks are exact.
    #[pyo3(get)]
    defect: Option<i64>,
    /// (prime, bis, hl, hr, vl, vr, mix) term counts of the sum witness.
    #[pyo3(get)]
    counts: Option<(usize, usize, usize, usize, usize, usize, usize)>,
    /// True when every audited inequality holds.
    #[pyo3(get)]
    audit_ok: bool,
}

#[pyfunction]
#[pyo3(signature = (t1, t2, budget=None))]
fn additivity(t1: &PyTensor, t2: &PyTensor, budget: Option<u64>) -> PyResult<PyAdditivityReport> {
    let report =
        additivity_check(&t1.inner, &t2.inner, budget.unwrap_or(DEFAULT_BUDGET)).map_err(err)?;
    Ok(PyAdditivityReport {
        r_prime: report.r_prime.exact_rank(),
        r_bis: report.r_bis.exact_rank(),
        r_sum: report.r_sum.exact_rank(),
        defect: report.defect,
        counts: report.classified.as_ref().map(|cd| {
            let c = &cd.counts;
            (c.prim, c.bis, c.hl, c.hr, c.vl, c.vr, c.mix)
        }),
        audit_ok: report.audit.iter().all(|i| i.pass),
    })
}

/// Certify the 7-term 2x2 matrix multiplication table over the given field.
#[pyfunction]
#[pyo3(signature = (field="q"))]
fn verify_strassen(field: &str) -> PyResult<bool> {
    let desc = FieldSpec::parse(field).map_err(err)?;
    let mu = matmul_tensor(2, 2, 2, desc).map_err(err)?;
    Ok(strassen_222(desc).certifies(&mu).map_err(err)?.is_some())
}

#[pymodule]
fn tensoradd_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTensor>()?;
    m.add_class::<PyAdditivityReport>()?;
    m.add_function(wrap_pyfunction!(additivity, m)?)?;
    m.add_function(wrap_pyfunction!(verify_strassen, m)?)?;
    Ok(())
}

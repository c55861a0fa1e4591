//! Python bindings for the groupoid metric toolkit.
//!
//! The module mirrors the core API surface: groupoid specs, algebra
//! elements with their norms and commutator seminorms, states, certified
//! distances, and rapid-decay diagnostics.

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use gqml::algebra::{AlgebraElement, SobolevSide};
use gqml::dirac;
use gqml::groupoid::{LengthFunction, TransformationGroupoid};
use gqml::metric::{self, CertificateStatus, DistanceOptions};
use gqml::rd;
use gqml::spec_io;
use gqml::state::{FibreMeasure, State, FIBRE_TOLERANCE};

fn value_error(err: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(err.to_string())
}

/// A validated transformation groupoid together with its length function.
#[pyclass(name = "Groupoid", frozen)]
struct PyGroupoid {
    groupoid: Arc<TransformationGroupoid>,
    length: LengthFunction,
    labels: Option<Vec<String>>,
}

#[pymethods]
impl PyGroupoid {
    /// Parses and validates a groupoid spec JSON string.
    #[staticmethod]
    fn from_spec_json(text: &str) -> PyResult<Self> {
        let bundle = spec_io::parse_groupoid_spec(text).map_err(value_error)?;
        Ok(Self {
            groupoid: bundle.groupoid,
            length: bundle.length,
            labels: bundle.labels,
        })
    }

    /// Loads and validates a groupoid spec file.
    #[staticmethod]
    fn from_spec_file(path: &str) -> PyResult<Self> {
        let bundle = spec_io::load_groupoid_spec(Path::new(path)).map_err(value_error)?;
        Ok(Self {
            groupoid: bundle.groupoid,
            length: bundle.length,
            labels: bundle.labels,
        })
    }

    #[getter]
    fn order(&self) -> usize {
        self.groupoid.order()
    }

    #[getter]
    fn space_size(&self) -> usize {
        self.groupoid.space_size()
    }

    #[getter]
    fn labels(&self) -> Option<Vec<String>> {
        self.labels.clone()
    }

    /// The length value ℓ(g, x).
    fn length(&self, g: usize, x: usize) -> PyResult<f64> {
        if g >= self.groupoid.order() || x >= self.groupoid.space_size() {
            return Err(value_error("arrow index out of range"));
        }
        Ok(self.length.value(g, x))
    }

    /// Group elements of the metric ball Γ_n.
    fn ball(&self, n: f64) -> Vec<usize> {
        gqml::groupoid::ball(&self.groupoid, &self.length, n).group_subset
    }

    fn __repr__(&self) -> String {
        format!(
            "Groupoid(order={}, space_size={})",
            self.groupoid.order(),
            self.groupoid.space_size()
        )
    }
}

/// An element of the convolution algebra C_c(G).
#[pyclass(name = "Element", frozen)]
struct PyElement {
    inner: AlgebraElement,
    length: LengthFunction,
}

impl PyElement {
    fn wrap(&self, inner: AlgebraElement) -> Self {
        Self {
            inner,
            length: self.length.clone(),
        }
    }
}

#[pymethods]
impl PyElement {
    /// Builds an element from a table of complex values indexed [g][x].
    #[staticmethod]
    fn from_table(groupoid: &PyGroupoid, values: Vec<Vec<C64>>) -> PyResult<Self> {
        let order = groupoid.groupoid.order();
        let space = groupoid.groupoid.space_size();
        if values.len() != order || values.iter().any(|row| row.len() != space) {
            return Err(value_error(format!(
                "expected a {order}×{space} table of complex values"
            )));
        }
        Ok(Self {
            inner: AlgebraElement::from_fn(groupoid.groupoid.clone(), |g, x| values[g][x]),
            length: groupoid.length.clone(),
        })
    }

    /// The unit 𝓔 (indicator of the unit space).
    #[staticmethod]
    fn unit(groupoid: &PyGroupoid) -> Self {
        Self {
            inner: AlgebraElement::unit_element(groupoid.groupoid.clone()),
            length: groupoid.length.clone(),
        }
    }

    /// The point mass δ at the arrow (g, x).
    #[staticmethod]
    fn delta(groupoid: &PyGroupoid, g: usize, x: usize) -> PyResult<Self> {
        if g >= groupoid.groupoid.order() || x >= groupoid.groupoid.space_size() {
            return Err(value_error("arrow index out of range"));
        }
        Ok(Self {
            inner: AlgebraElement::delta(groupoid.groupoid.clone(), g, x),
            length: groupoid.length.clone(),
        })
    }

    /// Seeded random element with standard complex Gaussian entries.
    #[staticmethod]
    fn random(groupoid: &PyGroupoid, seed: u64) -> Self {
        Self {
            inner: AlgebraElement::random(groupoid.groupoid.clone(), seed),
            length: groupoid.length.clone(),
        }
    }

    fn value(&self, g: usize, x: usize) -> PyResult<C64> {
        if g >= self.inner.groupoid().order() || x >= self.inner.groupoid().space_size() {
            return Err(value_error("arrow index out of range"));
        }
        Ok(self.inner.value(g, x))
    }

    fn table(&self) -> Vec<Vec<C64>> {
        let order = self.inner.groupoid().order();
        let space = self.inner.groupoid().space_size();
        (0..order)
            .map(|g| (0..space).map(|x| self.inner.value(g, x)).collect())
            .collect()
    }

    fn convolve(&self, other: &PyElement) -> PyResult<Self> {
        Ok(self.wrap(self.inner.convolve(&other.inner).map_err(value_error)?))
    }

    fn involution(&self) -> Self {
        self.wrap(self.inner.involution())
    }

    fn is_self_adjoint(&self, tol: f64) -> bool {
        self.inner.is_self_adjoint(tol)
    }

    /// The fibre block of the regular representation at x, as nested lists.
    fn fibre_matrix(&self, x: usize) -> PyResult<Vec<Vec<C64>>> {
        let m = self.inner.fibre_matrix(x).map_err(value_error)?;
        Ok((0..m.nrows())
            .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
            .collect())
    }

    fn sup_norm(&self) -> f64 {
        self.inner.sup_norm()
    }

    fn module_norm(&self) -> f64 {
        self.inner.module_norm()
    }

    fn i_norm(&self) -> f64 {
        self.inner.i_norm()
    }

    fn reduced_norm(&self) -> f64 {
        self.inner.reduced_norm()
    }

    #[pyo3(signature = (p, side = "max"))]
    fn sobolev_norm(&self, p: f64, side: &str) -> PyResult<f64> {
        let side = match side {
            "source" | "s" => SobolevSide::Source,
            "range" | "r" => SobolevSide::Range,
            "max" => SobolevSide::Max,
            other => return Err(value_error(format!("unknown side {other:?}"))),
        };
        self.inner
            .sobolev_norm(&self.length, p, side)
            .map_err(value_error)
    }

    fn quotient_norm(&self) -> f64 {
        self.inner.quotient_norm()
    }

    /// The commutator seminorm Lᵏ_ℓ.
    #[pyo3(signature = (k = 1))]
    fn lipschitz_seminorm(&self, k: u32) -> PyResult<f64> {
        if k < 1 {
            return Err(value_error("requires k ≥ 1"));
        }
        Ok(dirac::lipschitz_seminorm(&self.inner, &self.length, k))
    }

    /// Restriction to the unit space (the C(X) part).
    fn restrict_to_units(&self) -> Self {
        self.wrap(self.inner.restrict_to_units())
    }

    /// Ball truncation f·χ_n.
    fn truncate(&self, n: f64) -> Self {
        self.wrap(rd::truncate(&self.inner, &self.length, n))
    }

    /// Reduced norm of the part outside Γ_n.
    fn tail_norm(&self, n: f64) -> f64 {
        rd::tail_norm(&self.inner, &self.length, n)
    }

    /// Rapid-decay ratio ‖f‖_red / ‖f‖₂,p,ℓ.
    fn rd_ratio(&self, p: f64) -> PyResult<f64> {
        rd::rd_ratio(&self.inner, &self.length, p).map_err(value_error)
    }

    fn __add__(&self, other: &PyElement) -> Self {
        self.wrap(&self.inner + &other.inner)
    }

    fn __sub__(&self, other: &PyElement) -> Self {
        self.wrap(&self.inner - &other.inner)
    }

    fn __mul__(&self, scalar: C64) -> Self {
        self.wrap(&self.inner * scalar)
    }

    fn __rmul__(&self, scalar: C64) -> Self {
        self.wrap(&self.inner * scalar)
    }

    fn __neg__(&self) -> Self {
        self.wrap(-&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Element(order={}, space_size={}, reduced_norm={:.6})",
            self.inner.groupoid().order(),
            self.inner.groupoid().space_size(),
            self.inner.reduced_norm()
        )
    }
}

/// A state given by fibre density blocks.
#[pyclass(name = "State", frozen)]
struct PyState {
    inner: State,
    length: LengthFunction,
}

#[pymethods]
impl PyState {
    /// Builds a state from one |Γ|×|Γ| density block per point of X.
    #[staticmethod]
    fn from_blocks(groupoid: &PyGroupoid, blocks: Vec<Vec<Vec<C64>>>) -> PyResult<Self> {
        let order = groupoid.groupoid.order();
        let matrices = blocks
            .iter()
            .map(|b| {
                if b.len() != order || b.iter().any(|row| row.len() != order) {
                    return Err(value_error(format!("each block must be {order}×{order}")));
                }
                Ok(nalgebra_matrix(b))
            })
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Self {
            inner: State::new(groupoid.groupoid.clone(), matrices).map_err(value_error)?,
            length: groupoid.length.clone(),
        })
    }

    /// The vector state at fibre x given by a unit vector over the group.
    #[staticmethod]
    fn vector(groupoid: &PyGroupoid, x: usize, psi: Vec<C64>) -> PyResult<Self> {
        Ok(Self {
            inner: State::vector_state(groupoid.groupoid.clone(), x, &psi)
                .map_err(value_error)?,
            length: groupoid.length.clone(),
        })
    }

    /// Seeded random full-rank state.
    #[staticmethod]
    fn random(groupoid: &PyGroupoid, seed: u64) -> Self {
        Self {
            inner: State::random(groupoid.groupoid.clone(), seed),
            length: groupoid.length.clone(),
        }
    }

    /// Evaluates the state on an algebra element.
    fn evaluate(&self, f: &PyElement) -> PyResult<C64> {
        self.inner.evaluate(&f.inner).map_err(value_error)
    }

    /// The probability measure on X obtained by restricting to C(X).
    fn fibre_measure(&self) -> Vec<f64> {
        self.inner.fibre_measure().weights
    }

    #[pyo3(signature = (other, tol = FIBRE_TOLERANCE))]
    fn same_fibre(&self, other: &PyState, tol: f64) -> bool {
        self.inner.same_fibre(&other.inner, tol)
    }

    /// Convex combination t·self + (1−t)·other.
    fn mix(&self, other: &PyState, t: f64) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.mix(&other.inner, t).map_err(value_error)?,
            length: self.length.clone(),
        })
    }

    /// Moves the state onto a target fibre measure by diagonal congruence.
    fn reweighted_to(&self, weights: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: self
                .inner
                .reweighted_to(&FibreMeasure { weights })
                .map_err(value_error)?,
            length: self.length.clone(),
        })
    }

    fn __repr__(&self) -> String {
        format!("State(fibre_measure={:?})", self.fibre_measure())
    }
}

fn nalgebra_matrix(rows: &[Vec<C64>]) -> nalgebra::DMatrix<C64> {
    nalgebra::DMatrix::from_fn(rows.len(), rows[0].len(), |r, c| rows[r][c])
}

/// Certified distance between two states under the seminorm Lᵏ_ℓ.
///
/// Returns a dict with lower/upper bounds, the gap, the iteration count,
/// the status string, and the witness table when one exists.
#[pyfunction]
#[pyo3(signature = (a, b, k = 1, tol = 1e-6, budget = 2000))]
fn distance<'py>(
    py: Python<'py>,
    a: &PyState,
    b: &PyState,
    k: u32,
    tol: f64,
    budget: usize,
) -> PyResult<Bound<'py, PyDict>> {
    if k < 1 || tol <= 0.0 {
        return Err(value_error("requires k ≥ 1 and tol > 0"));
    }
    let opts = DistanceOptions {
        tol,
        budget,
        fibre_tol: FIBRE_TOLERANCE,
    };
    let cert =
        metric::connes_distance(&a.inner, &b.inner, &a.length, k, opts).map_err(value_error)?;
    let dict = PyDict::new(py);
    dict.set_item("lower", cert.lower)?;
    dict.set_item("upper", cert.upper)?;
    dict.set_item("gap", cert.gap)?;
    dict.set_item("iterations", cert.iterations)?;
    let status = match cert.status {
        CertificateStatus::Converged => "converged",
        CertificateStatus::BudgetExceeded => "budget-exceeded",
        CertificateStatus::Infinite => "infinite",
    };
    dict.set_item("status", status)?;
    if let Some(witness) = &cert.witness {
        let order = witness.groupoid().order();
        let space = witness.groupoid().space_size();
        let table: Vec<Vec<C64>> = (0..order)
            .map(|g| (0..space).map(|x| witness.value(g, x)).collect())
            .collect();
        dict.set_item("witness", table)?;
    }
    Ok(dict)
}

/// Sampling lower bound for the distance (instances with few parameters).
#[pyfunction]
#[pyo3(signature = (a, b, k = 1, samples = 100_000, seed = 42))]
fn brute_force_distance(
    a: &PyState,
    b: &PyState,
    k: u32,
    samples: usize,
    seed: u64,
) -> PyResult<f64> {
    metric::brute_force_distance(&a.inner, &b.inner, &a.length, k, samples, seed)
        .map_err(value_error)
}

/// The α constant bounding the Sobolev norm by the seminorm.
#[pyfunction]
fn alpha_constant(groupoid: &PyGroupoid, k: u32, p: f64, n: f64) -> PyResult<f64> {
    metric::alpha_constant(&groupoid.groupoid, &groupoid.length, k, p, n).map_err(value_error)
}

/// Diameter bound 2·C·α for a rapid-decay constant C.
#[pyfunction]
fn diameter_bound(groupoid: &PyGroupoid, k: u32, p: f64, n: f64, c: f64) -> PyResult<f64> {
    metric::diameter_bound(&groupoid.groupoid, &groupoid.length, k, p, n, c).map_err(value_error)
}

/// Empirical rapid-decay constant report as a dict.
#[pyfunction]
#[pyo3(signature = (groupoid, p = 1.0, samples = 1000, seed = 42))]
fn empirical_rd_constant<'py>(
    py: Python<'py>,
    groupoid: &PyGroupoid,
    p: f64,
    samples: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    if p <= 0.0 || samples == 0 {
        return Err(value_error("requires p > 0 and at least one sample"));
    }
    let report = rd::empirical_rd_constant(&groupoid.groupoid, &groupoid.length, p, samples, seed);
    let dict = PyDict::new(py);
    dict.set_item("p", report.p)?;
    dict.set_item("sample_count", report.sample_count)?;
    dict.set_item("empirical_c", report.empirical_c)?;
    dict.set_item("tail_table", report.tail_table.clone())?;
    Ok(dict)
}

#[pymodule]
fn gqml_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroupoid>()?;
    m.add_class::<PyElement>()?;
    m.add_class::<PyState>()?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_distance, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_constant, m)?)?;
    m.add_function(wrap_pyfunction!(diameter_bound, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_rd_constant, m)?)?;
    m.add("FIBRE_TOLERANCE", FIBRE_TOLERANCE)?;
    Ok(())
}

//! Python bindings: `import shrinkset`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use shrinkset::geometry::{self as geo, ConvexPolygon, Point2};
use shrinkset::io::{geometry_from_json, geometry_to_json, write_trace_csv};
use shrinkset::morphology;
use shrinkset::threshold::{self, OutcomeKind};
use shrinkset::{evolution, isoperimetric};

fn err(e: shrinkset::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn point(p: (f64, f64)) -> Point2 {
    Point2::new(p.0, p.1)
}

/// Convex polygon kernel dilated by a disk.
#[pyclass(name = "RoundedSet", module = "shrinkset", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyRoundedSet {
    inner: geo::RoundedSet,
}

impl From<geo::RoundedSet> for PyRoundedSet {
    fn from(inner: geo::RoundedSet) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyRoundedSet {
    #[new]
    #[pyo3(signature = (kernel, radius = 0.0))]
    fn new(kernel: Vec<(f64, f64)>, radius: f64) -> PyResult<Self> {
        let k = ConvexPolygon::new(kernel.into_iter().map(point).collect()).map_err(err)?;
        Ok(geo::RoundedSet::new(k, radius).map_err(err)?.into())
    }

    #[staticmethod]
    fn ball(center: (f64, f64), radius: f64) -> PyResult<Self> {
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(err(shrinkset::Error::BadRadius(radius)));
        }
        Ok(geo::RoundedSet::ball(point(center), radius).into())
    }

    #[staticmethod]
    #[pyo3(signature = (x0, y0, x1, y1, radius = 0.0))]
    fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64, radius: f64) -> PyResult<Self> {
        Ok(geo::RoundedSet::new(ConvexPolygon::rectangle(x0, y0, x1, y1), radius).map_err(err)?.into())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(geometry_from_json(text).map_err(err)?.into())
    }

    fn to_json(&self) -> String {
        geometry_to_json(&self.inner)
    }

    #[getter]
    fn kernel(&self) -> Vec<(f64, f64)> {
        self.inner.kernel().vertices().iter().map(|p| (p.x, p.y)).collect()
    }

    #[getter]
    fn radius(&self) -> f64 {
        self.inner.radius()
    }

    #[getter]
    fn area(&self) -> f64 {
        self.inner.area()
    }

    #[getter]
    fn perimeter(&self) -> f64 {
        self.inner.perimeter()
    }

    #[getter]
    fn diameter(&self) -> f64 {
        self.inner.diameter()
    }

    fn centroid(&self) -> PyResult<(f64, f64)> {
        let c = self.inner.centroid().map_err(err)?;
        Ok((c.x, c.y))
    }

    fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    fn contains_point(&self, p: (f64, f64)) -> bool {
        self.inner.contains_point(point(p))
    }

    #[pyo3(signature = (other, tol = 1e-9))]
    fn contains(&self, other: &PyRoundedSet, tol: f64) -> bool {
        geo::contains(&self.inner, &other.inner, tol)
    }

    fn hausdorff(&self, other: &PyRoundedSet) -> PyResult<f64> {
        geo::hausdorff(&self.inner, &other.inner).map_err(err)
    }

    fn dilate(&self, r: f64) -> Self {
        morphology::dilate(&self.inner, r).into()
    }

    fn erode(&self, r: f64) -> Self {
        morphology::erode(&self.inner, r).into()
    }

    fn opening(&self, rho: f64) -> Self {
        morphology::opening(&self.inner, rho).into()
    }

    /// `(R̄, center, direction, half_length)` of the inner-ball locus.
    fn inner_radius(&self) -> PyResult<(f64, (f64, f64), (f64, f64), f64)> {
        let (r, l) = morphology::inner_radius(&self.inner).map_err(err)?;
        Ok((r, (l.center.x, l.center.y), (l.direction.x, l.direction.y), l.half_length))
    }

    fn __repr__(&self) -> String {
        format!("RoundedSet({:?}, radius={})", self.kernel(), self.inner.radius())
    }
}

/// Minimal-perimeter subset of prescribed area.
#[pyclass(name = "Solution", module = "shrinkset", frozen)]
pub struct PySolution {
    #[pyo3(get)]
    regime: String,
    #[pyo3(get)]
    set: PyRoundedSet,
    #[pyo3(get)]
    area: f64,
    #[pyo3(get)]
    perimeter: f64,
    #[pyo3(get)]
    max_curvature: f64,
    #[pyo3(get)]
    rho: f64,
}

#[pymethods]
impl PySolution {
    fn __repr__(&self) -> String {
        format!("Solution(regime={}, area={}, perimeter={})", self.regime, self.area, self.perimeter)
    }
}

#[pyfunction]
fn solve_tilde(domain: &PyRoundedSet, a: f64) -> PyResult<PySolution> {
    let s = isoperimetric::solve_tilde(&domain.inner, a).map_err(err)?;
    Ok(PySolution {
        regime: s.regime.to_string(),
        set: s.set.into(),
        area: s.area,
        perimeter: s.perimeter,
        max_curvature: s.max_curvature,
        rho: s.rho,
    })
}

#[pyfunction]
fn perimeter_of_area(domain: &PyRoundedSet, a: f64) -> PyResult<f64> {
    isoperimetric::perimeter_of_area(&domain.inner, a).map_err(err)
}

/// Area trace of the optimal strategy.
#[pyclass(name = "Trace", module = "shrinkset", frozen)]
pub struct PyTrace {
    inner: evolution::EvolutionTrace,
}

#[pymethods]
impl PyTrace {
    #[getter]
    fn budget(&self) -> f64 {
        self.inner.budget()
    }

    #[getter]
    fn t_star(&self) -> Option<f64> {
        self.inner.t_star()
    }

    #[getter]
    fn t_dagger(&self) -> Option<f64> {
        self.inner.t_dagger()
    }

    #[getter]
    fn end_time(&self) -> f64 {
        self.inner.end_time()
    }

    /// `(t, a, perimeter, regime, rho)` rows.
    fn samples(&self) -> Vec<(f64, f64, f64, String, f64)> {
        self.inner.samples().iter().map(|s| (s.t, s.a, s.perimeter, s.regime.to_string(), s.rho)).collect()
    }

    fn area_at(&self, t: f64) -> PyResult<f64> {
        self.inner.area_at(t).map_err(err)
    }

    fn set_at(&self, t: f64) -> PyResult<PyRoundedSet> {
        Ok(self.inner.set_at(t).map_err(err)?.into())
    }

    fn cost(&self, c1: f64, c2: f64, t_end: f64) -> PyResult<f64> {
        evolution::compute_cost(&self.inner, c1, c2, t_end).map_err(err)
    }

    /// `(admissible, max_containment_gap, max_effort_error)`.
    #[pyo3(signature = (delta = 1e-4, tol = 1e-2))]
    fn check_admissible(&self, delta: f64, tol: f64) -> (bool, f64, f64) {
        let r = evolution::check_admissible(&self.inner, delta, tol);
        (r.admissible, r.max_containment_gap, r.max_effort_error)
    }

    fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        write_trace_csv(&self.inner, None, &mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("ascii")
    }
}

fn dt_or_default(domain: &geo::RoundedSet, dt: Option<f64>) -> f64 {
    dt.unwrap_or_else(|| evolution::default_dt(domain))
}

#[pyfunction]
#[pyo3(signature = (domain, m, horizon, dt = None))]
fn simulate(py: Python<'_>, domain: &PyRoundedSet, m: f64, horizon: f64, dt: Option<f64>) -> PyResult<PyTrace> {
    let dt = dt_or_default(&domain.inner, dt);
    let inner = py.detach(|| evolution::simulate(&domain.inner, m, horizon, dt)).map_err(err)?;
    Ok(PyTrace { inner })
}

/// `("extinct" | "grows" | "undetermined", time)`.
#[pyfunction]
#[pyo3(signature = (domain, m, horizon = 50.0, dt = None))]
fn classify(py: Python<'_>, domain: &PyRoundedSet, m: f64, horizon: f64, dt: Option<f64>) -> PyResult<(String, f64)> {
    let dt = dt_or_default(&domain.inner, dt);
    let out = py.detach(|| threshold::classify(&domain.inner, m, horizon, dt)).map_err(err)?;
    Ok(match out.kind {
        OutcomeKind::Extinct { t_star } => ("extinct".into(), t_star),
        OutcomeKind::Grows { t_escape } => ("grows".into(), t_escape),
        OutcomeKind::Undetermined { horizon } => ("undetermined".into(), horizon),
    })
}

#[pyclass(name = "ThresholdReport", module = "shrinkset", frozen)]
pub struct PyThresholdReport {
    #[pyo3(get)]
    m0: f64,
    #[pyo3(get)]
    bracket: (f64, f64),
    #[pyo3(get)]
    iterations: usize,
    #[pyo3(get)]
    t_dagger: Option<f64>,
}

#[pymethods]
impl PyThresholdReport {
    fn __repr__(&self) -> String {
        format!("ThresholdReport(m0={}, bracket={:?}, t_dagger={:?})", self.m0, self.bracket, self.t_dagger)
    }
}

#[pyfunction]
#[pyo3(signature = (domain, tol = 1e-3, horizon = 50.0, dt = None))]
fn find_m0(py: Python<'_>, domain: &PyRoundedSet, tol: f64, horizon: f64, dt: Option<f64>) -> PyResult<PyThresholdReport> {
    let dt = dt_or_default(&domain.inner, dt);
    let r = py.detach(|| threshold::find_m0(&domain.inner, tol, horizon, dt)).map_err(err)?;
    Ok(PyThresholdReport { m0: r.m0, bracket: (r.bracket[0], r.bracket[1]), iterations: r.iterations, t_dagger: r.t_dagger })
}

#[pyfunction]
#[pyo3(signature = (domain, m, horizon = 50.0, dt = None))]
fn ball_time_at_m0(py: Python<'_>, domain: &PyRoundedSet, m: f64, horizon: f64, dt: Option<f64>) -> PyResult<f64> {
    let dt = dt_or_default(&domain.inner, dt);
    py.detach(|| threshold::ball_time_at_m0(&domain.inner, m, horizon, dt)).map_err(err)
}

#[pymodule]
#[pyo3(name = "shrinkset")]
fn shrinkset_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRoundedSet>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PyTrace>()?;
    m.add_class::<PyThresholdReport>()?;
    m.add_function(wrap_pyfunction!(solve_tilde, m)?)?;
    m.add_function(wrap_pyfunction!(perimeter_of_area, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(find_m0, m)?)?;
    m.add_function(wrap_pyfunction!(ball_time_at_m0, m)?)?;
    Ok(())
}

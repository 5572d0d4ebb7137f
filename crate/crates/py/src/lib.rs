//! Python module `dualcx`: complexes, exact radii, balls and expansion
//! certificates. Structured results come back as plain dicts and lists.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

use dualcx::balls::{self, BallError, BallView};
use dualcx::complex::{self as cxm, DiskCondition, TriComplex, VertexId};
use dualcx::exactnum::{parse_radical, RadicalSum, Undecided};
use dualcx::expansion::{self, ExpansionCertificate, ExpansionError, Verdict};
use dualcx::generators::{gen_regular, gen_seifert, EdgeOrders};
use dualcx::geodesics::{self, cmp_distances, GeoError};

create_exception!(dualcx, UndecidedError, PyException, "An exact comparison ran out of precision.");
create_exception!(dualcx, DualcxError, PyValueError, "Invalid input or a refused computation.");

fn undecided(u: Undecided) -> PyErr {
    UndecidedError::new_err(u.to_string())
}

fn geo_err(e: GeoError) -> PyErr {
    match e {
        GeoError::Undecided(u) => undecided(u),
        e => DualcxError::new_err(e.to_string()),
    }
}

fn ball_err(e: BallError) -> PyErr {
    match e {
        BallError::Undecided(u) => undecided(u),
        BallError::Geo(g) => geo_err(g),
        e => DualcxError::new_err(e.to_string()),
    }
}

fn exp_err(e: ExpansionError) -> PyErr {
    match e {
        ExpansionError::Undecided(u) => undecided(u),
        ExpansionError::Ball(b) => ball_err(b),
        ExpansionError::Geo(g) => geo_err(g),
        e => DualcxError::new_err(e.to_string()),
    }
}

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    DualcxError::new_err(e.to_string())
}

/// Converts any serialisable value into Python objects through JSON.
fn to_py<'py, T: Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(x).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// An exact nonnegative radius: a sum of square roots over Q(√2, √3).
#[pyclass(name = "Radius", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyRadius {
    inner: RadicalSum,
}

fn radius_arg(obj: &Bound<'_, PyAny>) -> PyResult<RadicalSum> {
    if let Ok(r) = obj.extract::<PyRadius>() {
        return Ok(r.inner);
    }
    if let Ok(n) = obj.extract::<i64>() {
        return Ok(RadicalSum::from_int(n));
    }
    if let Ok(s) = obj.extract::<String>() {
        return parse_radical(&s).map_err(err);
    }
    Err(DualcxError::new_err("expected a Radius, an int or an expression string"))
}

#[pymethods]
impl PyRadius {
    #[new]
    fn new(value: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(PyRadius {
            inner: radius_arg(value)?,
        })
    }

    fn __float__(&self) -> f64 {
        self.inner.to_f64()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Radius('{}')", self.inner)
    }

    /// Decimal rendering with `digits` significant digits.
    #[pyo3(signature = (digits = 12))]
    fn decimal(&self, digits: usize) -> String {
        self.inner.to_decimal(digits)
    }

    /// Exact three-way comparison: -1, 0 or 1.
    fn compare(&self, other: &Bound<'_, PyAny>) -> PyResult<i8> {
        let o = radius_arg(other)?;
        Ok(cmp_distances(&self.inner, &o).map_err(undecided)? as i8)
    }

    fn __lt__(&self, other: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(self.compare(other)? < 0)
    }

    fn __eq__(&self, other: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(self.compare(other)? == 0)
    }

    fn __le__(&self, other: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(self.compare(other)? <= 0)
    }

    fn __gt__(&self, other: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(self.compare(other)? > 0)
    }

    fn __ge__(&self, other: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(self.compare(other)? >= 0)
    }

    fn __add__(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(PyRadius {
            inner: &self.inner + &radius_arg(other)?,
        })
    }

    fn __sub__(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(PyRadius {
            inner: &self.inner - &radius_arg(other)?,
        })
    }

    fn __mul__(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(PyRadius {
            inner: &self.inner * &radius_arg(other)?,
        })
    }
}

fn radius(inner: RadicalSum) -> PyRadius {
    PyRadius { inner }
}

/// A truncated typed triangle complex.
#[pyclass(name = "Complex", frozen)]
pub struct PyComplex {
    cx: TriComplex,
}

fn dc_of(dc: (u32, u32, u32)) -> DiskCondition {
    DiskCondition::new(dc.0, dc.1, dc.2)
}

#[pymethods]
impl PyComplex {
    /// Patch of the Euclidean triangle tessellation within `radius` steps.
    #[staticmethod]
    fn seifert(dc: (u32, u32, u32), radius: u32) -> PyResult<Self> {
        Ok(PyComplex {
            cx: gen_seifert(dc_of(dc), radius).map_err(err)?,
        })
    }

    /// Tree-like complex with the given edge orders `(o12, o13, o23)`.
    #[staticmethod]
    fn regular(dc: (u32, u32, u32), orders: (u32, u32, u32), radius: u32) -> PyResult<Self> {
        let orders = EdgeOrders {
            o12: orders.0,
            o13: orders.1,
            o23: orders.2,
        };
        Ok(PyComplex {
            cx: gen_regular(dc_of(dc), orders, radius).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyComplex {
            cx: TriComplex::from_json(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(PyComplex {
            cx: TriComplex::load(path).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        self.cx.to_json()
    }

    fn store(&self, path: &str) -> PyResult<()> {
        self.cx.store(path).map_err(err)
    }

    #[getter]
    fn num_vertices(&self) -> usize {
        self.cx.num_vertices()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.cx.num_edges()
    }

    #[getter]
    fn num_faces(&self) -> usize {
        self.cx.num_faces()
    }

    #[getter]
    fn margin(&self) -> u32 {
        self.cx.margin()
    }

    #[getter]
    fn disk_condition(&self) -> (u32, u32, u32) {
        let [a, b, c] = self.cx.disk_condition().n;
        (a, b, c)
    }

    fn faces(&self) -> Vec<[VertexId; 3]> {
        self.cx.faces().to_vec()
    }

    fn vertex_type(&self, v: VertexId) -> PyResult<u8> {
        self.check(v)?;
        Ok(self.cx.vertex_type(v))
    }

    fn neighbors(&self, v: VertexId) -> PyResult<Vec<VertexId>> {
        self.check(v)?;
        Ok(self.cx.neighbors(v).to_vec())
    }

    fn is_interior(&self, v: VertexId) -> PyResult<bool> {
        self.check(v)?;
        Ok(self.cx.is_interior(v))
    }

    fn check_link_condition<'py>(&self, py: Python<'py>, v: VertexId) -> PyResult<Bound<'py, PyAny>> {
        self.check(v)?;
        to_py(py, &cxm::check_link_condition(&self.cx, v).map_err(err)?)
    }

    fn structure<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.cx.check_structure())
    }

    fn __repr__(&self) -> String {
        let [a, b, c] = self.cx.disk_condition().n;
        format!(
            "Complex(dc=({a},{b},{c}), vertices={}, faces={}, margin={})",
            self.cx.num_vertices(),
            self.cx.num_faces(),
            self.cx.margin()
        )
    }
}

impl PyComplex {
    fn check(&self, v: VertexId) -> PyResult<()> {
        if (v as usize) < self.cx.num_vertices() {
            Ok(())
        } else {
            Err(DualcxError::new_err(format!("no vertex {v}")))
        }
    }
}

/// A recorded expansion, checkable against its complex.
#[pyclass(name = "Certificate", frozen)]
pub struct PyCertificate {
    cert: ExpansionCertificate,
}

#[pymethods]
impl PyCertificate {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyCertificate {
            cert: ExpansionCertificate::from_json(text).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        self.cert.to_json()
    }

    #[getter]
    fn base_vertex(&self) -> VertexId {
        self.cert.base_vertex
    }

    /// Radius and number of cone steps per stage.
    fn stages(&self) -> Vec<(PyRadius, usize)> {
        self.cert
            .stages
            .iter()
            .map(|s| (radius(s.radius.clone()), s.steps.len()))
            .collect()
    }

    fn final_hashes(&self) -> Vec<String> {
        self.cert.stages.iter().map(|s| s.final_hash.clone()).collect()
    }
}

/// `(code, name)` for a disk-condition triple; code 0 marks the base cases.
#[pyfunction]
fn validate_disk_condition(n: (i64, i64, i64)) -> PyResult<(u8, String)> {
    let v = cxm::validate_disk_condition([n.0, n.1, n.2]).map_err(err)?;
    Ok((v.code(), format!("{v:?}")))
}

/// Exact squared side lengths keyed by type pair: `{"12": ..., "13": ..., "23": ...}`.
#[pyfunction]
fn triangle_shape(py: Python<'_>, dc: (u32, u32, u32)) -> PyResult<Bound<'_, PyDict>> {
    let shape = cxm::triangle_shape(&dc_of(dc)).map_err(err)?;
    let d = PyDict::new(py);
    for (s, t) in [(1u8, 2u8), (1, 3), (2, 3)] {
        d.set_item(format!("{s}{t}"), shape.edge_sq(s, t).to_string())?;
    }
    Ok(d)
}

#[pyfunction]
fn vertex_distance(cx: &PyComplex, v: VertexId, w: VertexId) -> PyResult<PyRadius> {
    cx.check(v)?;
    cx.check(w)?;
    Ok(radius(geodesics::vertex_distance(&cx.cx, v, w).map_err(geo_err)?.length))
}

/// The geodesic between two vertices as a dict (length, breakpoints, segments).
#[pyfunction]
fn geodesic<'py>(py: Python<'py>, cx: &PyComplex, v: VertexId, w: VertexId) -> PyResult<Bound<'py, PyAny>> {
    cx.check(v)?;
    cx.check(w)?;
    to_py(py, &geodesics::vertex_distance(&cx.cx, v, w).map_err(geo_err)?)
}

/// Angle at `x` between the geodesics to `y` and `z`, in radians.
#[pyfunction]
fn angle_at(cx: &PyComplex, x: VertexId, y: VertexId, z: VertexId) -> PyResult<f64> {
    for v in [x, y, z] {
        cx.check(v)?;
    }
    Ok(geodesics::angle_at(&cx.cx, x, y, z).map_err(geo_err)?.radians)
}

#[pyfunction]
fn critical_radii(cx: &PyComplex, v: VertexId, max: &Bound<'_, PyAny>) -> PyResult<Vec<PyRadius>> {
    cx.check(v)?;
    let r = radius_arg(max)?;
    Ok(balls::critical_radii(&cx.cx, v, &r)
        .map_err(ball_err)?
        .into_iter()
        .map(radius)
        .collect())
}

/// The ball report: vertex partition, simplicial ball and face types.
#[pyfunction]
fn ball<'py>(py: Python<'py>, cx: &PyComplex, v: VertexId, r: &Bound<'_, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    cx.check(v)?;
    let r = radius_arg(r)?;
    let field = balls::field_for(&cx.cx, v, &r).map_err(ball_err)?;
    let view = BallView::new(&cx.cx, &field, &r).map_err(ball_err)?;
    let d = PyDict::new(py);
    d.set_item("regular", view.is_regular())?;
    d.set_item("partition", to_py(py, &view.partition)?)?;
    d.set_item("simplicial_ball", to_py(py, &view.simplicial(&cx.cx))?)?;
    let types: std::collections::BTreeMap<u32, String> = view
        .face_types
        .iter()
        .filter(|(_, t)| t.arcs() > 0 || **t == balls::FaceIntersectionType::Full)
        .map(|(&f, t)| (f, format!("{t:?}")))
        .collect();
    d.set_item("face_types", types)?;
    Ok(d.into_any())
}

#[pyfunction]
fn audit_sphere_lemmas(cx: &PyComplex, v: VertexId, r: &Bound<'_, PyAny>) -> PyResult<bool> {
    cx.check(v)?;
    let r = radius_arg(r)?;
    Ok(balls::audit_sphere_lemmas(&cx.cx, v, &r).map_err(ball_err)?.is_clean())
}

#[pyfunction]
fn epsilon_for(cx: &PyComplex, v: VertexId, r: &Bound<'_, PyAny>) -> PyResult<PyRadius> {
    cx.check(v)?;
    Ok(radius(expansion::epsilon_for(&cx.cx, v, &radius_arg(r)?).map_err(exp_err)?))
}

#[pyfunction]
fn expand(cx: &PyComplex, v: VertexId, max: &Bound<'_, PyAny>) -> PyResult<PyCertificate> {
    cx.check(v)?;
    Ok(PyCertificate {
        cert: expansion::expand_to(&cx.cx, v, &radius_arg(max)?).map_err(exp_err)?,
    })
}

/// `None` for a valid certificate, otherwise the reason it fails.
#[pyfunction]
fn verify(cx: &PyComplex, cert: &PyCertificate) -> Option<String> {
    match expansion::verify_certificate(&cx.cx, &cert.cert) {
        Verdict::Valid => None,
        Verdict::Invalid { stage, step, reason } => Some(format!("stage {stage:?}, step {step:?}: {reason}")),
    }
}

#[pymodule(name = "dualcx")]
fn dualcx_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("UndecidedError", m.py().get_type::<UndecidedError>())?;
    m.add("DualcxError", m.py().get_type::<DualcxError>())?;
    m.add_class::<PyRadius>()?;
    m.add_class::<PyComplex>()?;
    m.add_class::<PyCertificate>()?;
    for f in [
        wrap_pyfunction!(validate_disk_condition, m)?,
        wrap_pyfunction!(triangle_shape, m)?,
        wrap_pyfunction!(vertex_distance, m)?,
        wrap_pyfunction!(geodesic, m)?,
        wrap_pyfunction!(angle_at, m)?,
        wrap_pyfunction!(critical_radii, m)?,
        wrap_pyfunction!(ball, m)?,
        wrap_pyfunction!(audit_sphere_lemmas, m)?,
        wrap_pyfunction!(epsilon_for, m)?,
        wrap_pyfunction!(expand, m)?,
        wrap_pyfunction!(verify, m)?,
    ] {
        m.add_function(f)?;
    }
    Ok(())
}

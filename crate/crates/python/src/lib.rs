use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use henneberg::geometry::{bjorling_solve, enumerate_isometries_seeded, strip_error, AnalyticPlanarCurve};
use henneberg::io::{build_mesh, save_mesh, DataFile, MeshFormat, MeshMetadata, SamplingSpec, Selector, VerificationReport};
use henneberg::period::{self, FamilySign, ModuliPoint, SearchGrid};
use henneberg::surfaces::{eval_hm_even, HmParam, SurfaceMap};
use henneberg::weierstrass::{self, gauss_structural_stability};
use henneberg::Error;

fn err(e: Error) -> PyErr {
    match e {
        Error::Domain(_) | Error::InvalidConfig(_) | Error::NonFinite(_) | Error::Parse(_) | Error::Json(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Serializable value as plain Python objects (dicts, lists, floats).
fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn sign(name: &str) -> PyResult<FamilySign> {
    match name {
        "plus" | "+" => Ok(FamilySign::Plus),
        "minus" | "-" => Ok(FamilySign::Minus),
        _ => Err(PyValueError::new_err(format!("sign must be 'plus' or 'minus', got {name:?}"))),
    }
}

fn tuple3(p: &weierstrass::Point3) -> (f64, f64, f64) {
    (p[0], p[1], p[2])
}

/// Weierstrass data `g(z) = z`, `f(z) = c z^{-m-3} P(z)`.
#[pyclass(name = "WeierstrassData", module = "henneberg", skip_from_py_object)]
#[derive(Clone)]
struct PyWeierstrassData {
    inner: weierstrass::WeierstrassData,
}

#[pymethods]
impl PyWeierstrassData {
    /// `a` is a list of `(r, theta)` pairs, one per branch value.
    #[new]
    fn new(c: Complex64, a: Vec<(f64, f64)>) -> PyResult<Self> {
        let file = DataFile {
            c: [c.re, c.im],
            m: a.len().saturating_sub(1),
            a: a.iter().map(|&(r, t)| [r, t]).collect(),
        };
        Ok(Self {
            inner: file.to_data().map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file = DataFile::parse(text).map_err(err)?;
        Ok(Self {
            inner: file.to_data().map_err(err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&DataFile::from_data(&self.inner)).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    #[getter]
    fn complexity(&self) -> usize {
        self.inner.complexity()
    }

    #[getter]
    fn c(&self) -> Complex64 {
        self.inner.c()
    }

    #[getter]
    fn c_scale(&self) -> f64 {
        self.inner.c_scale()
    }

    fn branch_values(&self) -> Vec<Complex64> {
        self.inner.config().values()
    }

    /// Coefficients `A_0 .. A_{2m+2}` of `P`.
    fn coefficients(&self) -> Vec<Complex64> {
        let n = 2 * self.inner.complexity() as i32 + 2;
        (0..=n).map(|h| self.inner.a_coeff(h)).collect()
    }

    fn rotated(&self, phi: f64) -> Self {
        Self {
            inner: self.inner.rotated(phi),
        }
    }

    fn period_residuals<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &period::period_residuals(&self.inner))
    }

    #[pyo3(signature = (tol = period::PERIOD_TOLERANCE))]
    fn is_solution(&self, tol: f64) -> bool {
        period::period_residuals(&self.inner).is_solution(tol)
    }

    /// Zero-constant immersion at `z`.
    fn position(&self, z: Complex64) -> PyResult<(f64, f64, f64)> {
        let forms = weierstrass::integrate_phi(&self.inner).map_err(err)?;
        Ok(tuple3(&forms.position(z).map_err(err)?))
    }

    fn immersion(&self, z: Complex64, base: Complex64) -> PyResult<(f64, f64, f64)> {
        Ok(tuple3(&weierstrass::immersion(&self.inner, z, base).map_err(err)?))
    }

    fn metric_density(&self, z: Complex64) -> PyResult<f64> {
        weierstrass::metric_density(&self.inner, z).map_err(err)
    }

    fn stability<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &gauss_structural_stability(&self.inner))
    }

    /// Full verification report; `isometry_m` also enumerates the group of `H_m`.
    #[pyo3(signature = (isometry_m = None, seed = 0))]
    fn verify<'py>(&self, py: Python<'py>, isometry_m: Option<u32>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let report = VerificationReport::build_seeded(&self.inner, "python", isometry_m, seed).map_err(err)?;
        to_py(py, &report)
    }

    fn __repr__(&self) -> String {
        let c = self.inner.c();
        format!("WeierstrassData(m={}, c={}{:+}j)", self.inner.complexity(), c.re, c.im)
    }
}

/// A parametrized surface `(r, theta) -> R^3`.
#[pyclass(name = "Surface", module = "henneberg")]
struct PySurface {
    selector: Selector,
    map: SurfaceMap,
}

impl PySurface {
    fn build(selector: Selector) -> PyResult<Self> {
        let map = selector.surface().map_err(err)?;
        Ok(Self { selector, map })
    }
}

#[pymethods]
impl PySurface {
    #[staticmethod]
    fn h1() -> PyResult<Self> {
        Self::build(Selector::H1)
    }

    /// `H_m` for a positive integer `m`.
    #[staticmethod]
    fn hm(m: u32) -> PyResult<Self> {
        if m % 2 == 1 {
            Self::build(Selector::HmOdd(m))
        } else {
            Self::build(Selector::HmEven(HmParam::Integer(m).validate().map_err(err)?))
        }
    }

    /// The surface with exponent `m = 1/(2k)`.
    #[staticmethod]
    fn hm_inverse(k: u32) -> PyResult<Self> {
        Self::build(Selector::HmEven(HmParam::InverseEven(k).validate().map_err(err)?))
    }

    #[staticmethod]
    fn conjugate(m: u32) -> PyResult<Self> {
        Self::build(Selector::Conjugate(m))
    }

    #[staticmethod]
    fn associated(m: u32, phi: f64) -> PyResult<Self> {
        Self::build(Selector::Associated { m, phi })
    }

    #[staticmethod]
    fn limit_m2() -> PyResult<Self> {
        Self::build(Selector::LimitM2)
    }

    #[staticmethod]
    #[pyo3(signature = (theta2, sign = "plus"))]
    fn family(theta2: f64, sign: &str) -> PyResult<Self> {
        Self::build(Selector::Family {
            theta2,
            sign: self::sign(sign)?,
        })
    }

    #[staticmethod]
    fn from_data(data: PyRef<'_, PyWeierstrassData>) -> PyResult<Self> {
        Self::build(Selector::Custom(DataFile::from_data(&data.inner)))
    }

    fn eval(&self, r: f64, theta: f64) -> PyResult<(f64, f64, f64)> {
        Ok(tuple3(&self.map.eval(r, theta).map_err(err)?))
    }

    #[getter]
    fn theta_period(&self) -> f64 {
        self.map.theta_period()
    }

    #[getter]
    fn is_one_sided(&self) -> bool {
        self.map.is_one_sided()
    }

    fn data(&self) -> PyResult<Option<PyWeierstrassData>> {
        Ok(self.selector.data().map_err(err)?.map(|inner| PyWeierstrassData { inner }))
    }

    /// Tessellates the surface; returns `(vertices, normals, faces)`.
    #[pyo3(signature = (r_min = 0.125, r_max = 8.0, n_r = 129, n_theta = 256, quotient = false, wrap = true))]
    #[allow(clippy::type_complexity)]
    fn mesh(
        &self,
        py: Python<'_>,
        r_min: f64,
        r_max: f64,
        n_r: usize,
        n_theta: usize,
        quotient: bool,
        wrap: bool,
    ) -> PyResult<(Vec<[f64; 3]>, Vec<[f64; 3]>, Vec<[u32; 3]>)> {
        let spec = SamplingSpec {
            r_min,
            r_max,
            n_r,
            n_theta,
            quotient,
            wrap,
        };
        let metadata = MeshMetadata {
            source: self.selector.describe(),
            data: None,
            sampling: None,
        };
        let mesh = py.detach(|| build_mesh(&self.map, &spec, metadata)).map_err(err)?;
        Ok((mesh.vertices, mesh.normals, mesh.faces))
    }

    /// Writes OBJ or PLY (chosen by the extension) with the default sampling.
    fn write_mesh(&self, py: Python<'_>, path: std::path::PathBuf) -> PyResult<usize> {
        let metadata = MeshMetadata {
            source: self.selector.describe(),
            data: None,
            sampling: None,
        };
        py.detach(|| {
            let mesh = build_mesh(&self.map, &SamplingSpec::default(), metadata)?;
            save_mesh(&mesh, &path, MeshFormat::from_path(&path))?;
            Ok(mesh.vertices.len())
        })
        .map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Surface({})", self.map.describe())
    }
}

#[pyfunction]
fn symmetric_example(m: usize) -> PyResult<PyWeierstrassData> {
    Ok(PyWeierstrassData {
        inner: period::symmetric_example(m).map_err(err)?,
    })
}

#[pyfunction]
fn m1_residual(r1: f64, r2: f64, theta2: f64, beta: f64) -> f64 {
    period::m1_residual(r1, r2, theta2, beta)
}

/// Minimizers of the `m = 1` residual on a tensor grid, as dicts.
#[pyfunction]
#[pyo3(signature = (r_min = 0.25, r_max = 4.0, n_radial = 33, n_angular = 48, r1_range = None))]
fn brute_search_m1<'py>(
    py: Python<'py>,
    r_min: f64,
    r_max: f64,
    n_radial: usize,
    n_angular: usize,
    r1_range: Option<(f64, f64)>,
) -> PyResult<Bound<'py, PyAny>> {
    let grid = SearchGrid {
        r_min,
        r_max,
        r1_range,
        n_radial,
        n_angular,
        ..SearchGrid::default()
    };
    let report = py.detach(|| period::brute_search_m1(&grid)).map_err(err)?;
    to_py(py, &report)
}

#[pyfunction]
fn f_m2(r1: f64, r2: f64, r3: f64, theta2: f64, theta3: f64) -> PyResult<Complex64> {
    let p = ModuliPoint::new(r1, r2, r3, theta2, theta3, 0.0).map_err(err)?;
    Ok(period::f_m2(&p))
}

#[pyfunction]
fn g_m2(r1: f64, r2: f64, r3: f64, theta2: f64, theta3: f64) -> PyResult<f64> {
    let p = ModuliPoint::new(r1, r2, r3, theta2, theta3, 0.0).map_err(err)?;
    Ok(period::g_m2(&p))
}

#[pyfunction]
#[pyo3(signature = (theta2, sign = "plus"))]
fn family_theta2<'py>(py: Python<'py>, theta2: f64, sign: &str) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &period::family_theta2(theta2, self::sign(sign)?).map_err(err)?)
}

/// Continues `H_2` (or `start`, a dict of moduli) to `(r1, r2)`.
#[pyfunction]
#[pyo3(signature = (r1, r2, start = None))]
fn continue_from<'py>(
    py: Python<'py>,
    r1: f64,
    r2: f64,
    start: Option<Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyAny>> {
    let start = match start {
        Some(obj) => {
            let text: String = py.import("json")?.call_method1("dumps", (obj,))?.extract()?;
            serde_json::from_str::<ModuliPoint>(&text).map_err(|e| PyValueError::new_err(e.to_string()))?
        }
        None => ModuliPoint::h2(),
    };
    let result = py
        .detach(|| period::continue_with(&start, r1, r2, &period::ContinuationSettings::default()))
        .map_err(err)?;
    to_py(py, &result)
}

/// Certificates for every element of the symmetry group of `H_m`.
#[pyfunction]
#[pyo3(signature = (m, seed = 0))]
fn enumerate_isometries<'py>(py: Python<'py>, m: u32, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let certs = py.detach(|| enumerate_isometries_seeded(m, seed)).map_err(err)?;
    let entries: Vec<_> = certs
        .iter()
        .map(|c| {
            serde_json::json!({
                "map": c.map.describe(),
                "determinant": c.motion.determinant(),
                "residual": c.residual,
                "diameter": c.diameter,
                "passed": c.passed,
            })
        })
        .collect();
    to_py(py, &entries)
}

/// Sup distance between the Björling solution along an `n`-cusped
/// hypocycloid arc and the matching closed form, on `|v| <= strip`.
#[pyfunction]
#[pyo3(signature = (cusps, strip = 0.05, margin = 0.1, quad_order = 16))]
fn bjorling_error(py: Python<'_>, cusps: u64, strip: f64, margin: f64, quad_order: usize) -> PyResult<f64> {
    let param = if cusps < 3 {
        return Err(PyValueError::new_err(format!("need at least 3 cusps, got {cusps}")));
    } else if cusps % 2 == 1 {
        HmParam::Integer((cusps - 1) as u32)
    } else if cusps % 4 == 0 {
        HmParam::Integer((cusps / 2 - 1) as u32)
    } else {
        HmParam::InverseEven(((cusps - 2) / 4) as u32)
    };
    py.detach(|| {
        let curve = AnalyticPlanarCurve::for_param(param)?;
        let marks = curve.cusp_parameters(8192);
        if marks.len() < 2 {
            return Err(Error::Domain("curve has fewer than two cusps".into()));
        }
        let w0 = Complex64::new(0.5 * (marks[0] + marks[1]), 0.0);
        let surface = bjorling_solve(&curve, w0, quad_order)?;
        strip_error(&surface, |r, t| eval_hm_even(param, r, t), strip, margin, 17, 5)
    })
    .map_err(err)
}

#[pymodule]
#[pyo3(name = "henneberg")]
fn henneberg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWeierstrassData>()?;
    m.add_class::<PySurface>()?;
    m.add_function(wrap_pyfunction!(symmetric_example, m)?)?;
    m.add_function(wrap_pyfunction!(m1_residual, m)?)?;
    m.add_function(wrap_pyfunction!(brute_search_m1, m)?)?;
    m.add_function(wrap_pyfunction!(f_m2, m)?)?;
    m.add_function(wrap_pyfunction!(g_m2, m)?)?;
    m.add_function(wrap_pyfunction!(family_theta2, m)?)?;
    m.add_function(wrap_pyfunction!(continue_from, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_isometries, m)?)?;
    m.add_function(wrap_pyfunction!(bjorling_error, m)?)?;
    m.add("PERIOD_TOLERANCE", period::PERIOD_TOLERANCE)?;
    Ok(())
}

//! Python bindings: `import qmap`.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use qmap_core::cli::{self, Suite};
use qmap_core::exactalg::{format_rational, Index, Rational};
use qmap_core::ifunction::{self, IFunction as CoreIFunction};
use qmap_core::mirror::{self, InvariantQuery, MirrorOutput as CoreMirror};
use qmap_core::oracles;
use qmap_core::target::TargetModel;

create_exception!(qmap, QmapError, PyException, "Engine error; the message starts with its code.");

fn err(e: qmap_core::Error) -> PyErr {
    QmapError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((format_rational(r),))
}

fn fractions<'py>(py: Python<'py>, v: &[Rational]) -> PyResult<Vec<Bound<'py, PyAny>>> {
    v.iter().map(|r| fraction(py, r)).collect()
}

fn from_json<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

#[pyclass(name = "Target", module = "qmap", frozen)]
struct Target {
    inner: TargetModel,
}

#[pymethods]
impl Target {
    /// A bundled target (`p1`, `p2`, `p4_quintic`, `p1xp1`) or a spec file path.
    #[staticmethod]
    fn load(name: &str) -> PyResult<Target> {
        cli::load_target(name).map(|inner| Target { inner }).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Target> {
        TargetModel::from_json(text, None)
            .map(|inner| Target { inner })
            .map_err(err)
    }

    #[staticmethod]
    fn projective(n: u32) -> PyResult<Target> {
        TargetModel::projective(n).map(|inner| Target { inner }).map_err(err)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn basis(&self) -> Vec<String> {
        self.inner.ring().basis().iter().map(|b| b.label.clone()).collect()
    }

    #[getter]
    fn torus_rank(&self) -> usize {
        self.inner.torus_rank()
    }

    #[pyo3(signature = (d = None))]
    fn validate<'py>(&self, py: Python<'py>, d: Option<u32>) -> PyResult<Bound<'py, PyAny>> {
        let doc = cli::cmd_validate(&self.inner, d.unwrap_or(3)).map_err(err)?;
        from_json(py, &doc)
    }

    fn effective_classes(&self, d: u32) -> Vec<Vec<i64>> {
        self.inner.effective_monoid(d)
    }

    fn __repr__(&self) -> String {
        format!("Target({:?})", self.inner.name())
    }
}

#[pyclass(name = "IFunction", module = "qmap", frozen)]
struct IFunction {
    inner: CoreIFunction,
}

#[pymethods]
impl IFunction {
    /// `{exponent: [coefficients]}` of the `q^β t^m` term.
    #[pyo3(signature = (beta, m = None))]
    fn coefficient<'py>(
        &self,
        py: Python<'py>,
        beta: Vec<i64>,
        m: Option<Vec<u32>>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let s = self.inner.target.ring().rank();
        let idx = Index::new(beta, m.unwrap_or_else(|| vec![0; s]));
        let v = self
            .inner
            .series
            .get(&idx)
            .map(|l| l.to_json())
            .unwrap_or_else(|| serde_json::json!({}));
        from_json(py, &v)
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        from_json(py, &self.inner.series.to_json())
    }

    fn __len__(&self) -> usize {
        self.inner.series.len()
    }
}

#[pyclass(name = "MirrorOutput", module = "qmap", frozen)]
struct MirrorOutput {
    inner: CoreMirror,
}

#[pymethods]
impl MirrorOutput {
    #[getter]
    fn coordinates(&self) -> String {
        format!("{:?}", self.inner.coordinates).to_lowercase()
    }

    /// Inverts the mirror map.
    fn flatten(&self) -> PyResult<MirrorOutput> {
        mirror::flatten(&self.inner)
            .map(|inner| MirrorOutput { inner })
            .map_err(err)
    }

    fn check_contract(&self) -> PyResult<()> {
        self.inner.check_contract().map_err(err)
    }

    /// `⟨γ_{j1}, …, γ_{jk}, last·ψ^psi⟩_β` with insertions given as basis
    /// indices and `last` as a basis label or class expression.
    #[pyo3(signature = (beta, insertions, last, psi = 0))]
    fn invariant<'py>(
        &self,
        py: Python<'py>,
        beta: Vec<i64>,
        insertions: Vec<usize>,
        last: &str,
        psi: u32,
    ) -> PyResult<Bound<'py, PyAny>> {
        let q = InvariantQuery {
            beta,
            insertions,
            last_class: self.inner.target.ring().parse_class(last).map_err(err)?,
            psi_power: psi,
        };
        fraction(py, &mirror::extract_invariant(&self.inner, &q).map_err(err)?)
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        from_json(py, &self.inner.to_json())
    }
}

#[pyfunction]
fn small_i(target: &Target, d: u32) -> PyResult<IFunction> {
    ifunction::small_i(&target.inner, d)
        .map(|inner| IFunction { inner })
        .map_err(err)
}

/// Big I-function; `path` is `"shift"` or `"operator"`.
#[pyfunction]
#[pyo3(signature = (target, d, t, path = "shift"))]
fn big_i(target: &Target, d: u32, t: u32, path: &str) -> PyResult<IFunction> {
    let res = match path {
        "shift" => ifunction::big_i(&target.inner, d, t),
        "operator" => ifunction::big_i_operator(&target.inner, d, t),
        other => {
            return Err(QmapError::new_err(format!(
                "invalid-argument: unknown construction path {other:?}"
            )))
        }
    };
    res.map(|inner| IFunction { inner }).map_err(err)
}

#[pyfunction]
fn birkhoff(i: &IFunction) -> PyResult<MirrorOutput> {
    mirror::birkhoff(&i.inner)
        .map(|inner| MirrorOutput { inner })
        .map_err(err)
}

#[pyfunction]
fn p2_counts<'py>(py: Python<'py>, dmax: u32) -> PyResult<Vec<Bound<'py, PyAny>>> {
    fractions(py, &mirror::p2_counts(dmax).map_err(err)?)
}

#[pyfunction]
fn quintic_n1<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &mirror::quintic_n1().map_err(err)?)
}

#[pyfunction]
fn wdvv_p2<'py>(py: Python<'py>, dmax: u32) -> PyResult<Vec<Bound<'py, PyAny>>> {
    fractions(py, &oracles::wdvv_p2(dmax))
}

#[pyfunction]
#[allow(clippy::type_complexity)]
fn hypergeom_quintic<'py>(
    py: Python<'py>,
    dmax: u32,
) -> PyResult<(Vec<Bound<'py, PyAny>>, Vec<Bound<'py, PyAny>>)> {
    let (i0, i1) = oracles::hypergeom_quintic(dmax);
    Ok((fractions(py, &i0)?, fractions(py, &i1)?))
}

#[pyfunction]
fn schubert_quintic_lines<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &oracles::schubert_quintic_lines().map_err(err)?)
}

#[pyfunction]
fn cubic_surface_lines<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &oracles::cubic_surface_lines().map_err(err)?)
}

/// Runs a verification suite (`p2`, `quintic`, `identities`, `all`).
#[pyfunction]
#[pyo3(signature = (suite = "all"))]
fn verify<'py>(py: Python<'py>, suite: &str) -> PyResult<Bound<'py, PyAny>> {
    let suite = match suite {
        "p2" => Suite::P2,
        "quintic" => Suite::Quintic,
        "identities" => Suite::Identities,
        "all" => Suite::All,
        other => {
            return Err(QmapError::new_err(format!(
                "invalid-argument: unknown suite {other:?}"
            )))
        }
    };
    let checks = cli::run_suite(suite).map_err(err)?;
    from_json(py, &serde_json::to_value(checks).expect("checks serialize"))
}

/// Runs the command-line front end in-process: `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let out = cli::run_args(std::iter::once("qmap".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
fn qmap(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("QmapError", m.py().get_type::<QmapError>())?;
    m.add_class::<Target>()?;
    m.add_class::<IFunction>()?;
    m.add_class::<MirrorOutput>()?;
    m.add_function(wrap_pyfunction!(small_i, m)?)?;
    m.add_function(wrap_pyfunction!(big_i, m)?)?;
    m.add_function(wrap_pyfunction!(birkhoff, m)?)?;
    m.add_function(wrap_pyfunction!(p2_counts, m)?)?;
    m.add_function(wrap_pyfunction!(quintic_n1, m)?)?;
    m.add_function(wrap_pyfunction!(wdvv_p2, m)?)?;
    m.add_function(wrap_pyfunction!(hypergeom_quintic, m)?)?;
    m.add_function(wrap_pyfunction!(schubert_quintic_lines, m)?)?;
    m.add_function(wrap_pyfunction!(cubic_surface_lines, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}

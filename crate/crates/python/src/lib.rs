//! Python bindings for `eulerstack`.
//!
//! Stacks, functions and morphisms are built from the same JSON descriptors
//! the command line reads. Exact rationals come back as `fractions.Fraction`.

use std::path::Path;
use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use eulerstack::cartesian::{fiber_product as build_square, verify_commutation};
use eulerstack::groupcat::WeightFunction;
use eulerstack::json::{self as js, FunctionDesc, GSetDesc, MorphismDesc, StackDesc, StackRef};
use eulerstack::laws::{run_suite as run_law_suite, Suite};
use eulerstack::orbifold::{check_dhvw as dhvw, stringy_euler as stringy};
use eulerstack::pushpull::{self as pp, LcfMode, StackMorphism};
use eulerstack::rational::{format_rational, Rational};
use eulerstack::strata::{chi_naive_weighted, chi_weighted, ConstructibleFn, ConstructibleSet, StratifiedStack};
use eulerstack::Error;

create_exception!(eulerstack_py, EulerstackError, PyValueError);

fn err(e: Error) -> PyErr {
    EulerstackError::new_err(e.to_string())
}

fn fraction(py: Python<'_>, r: &Rational) -> PyResult<Py<PyAny>> {
    let cls = py.import("fractions")?.getattr("Fraction")?;
    Ok(cls.call1((format_rational(r),))?.unbind())
}

fn parse_weight(w: &str) -> PyResult<WeightFunction> {
    w.parse().map_err(err)
}

/// A stratified stack.
#[pyclass(frozen, module = "eulerstack_py")]
struct Stack {
    inner: Arc<StratifiedStack>,
}

#[pymethods]
impl Stack {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let d: StackDesc = js::from_str(text).map_err(err)?;
        Ok(Stack { inner: Arc::new(js::stack_from_desc(&d).map_err(err)?) })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(Stack { inner: Arc::new(js::read_stack(Path::new(path)).map_err(err)?) })
    }

    #[staticmethod]
    fn point() -> Self {
        Stack { inner: Arc::new(StratifiedStack::point()) }
    }

    #[staticmethod]
    fn affine_space(m: u32) -> Self {
        Stack { inner: Arc::new(StratifiedStack::affine_space(m)) }
    }

    #[staticmethod]
    fn projective_space(m: u32) -> Self {
        Stack { inner: Arc::new(StratifiedStack::projective_space(m)) }
    }

    fn to_json(&self) -> String {
        js::to_string_pretty(&js::stack_to_desc(&self.inner))
    }

    fn ids(&self) -> Vec<String> {
        self.inner.strata().iter().map(|s| s.id.clone()).collect()
    }

    #[getter]
    fn has_remainder(&self) -> bool {
        self.inner.has_remainder()
    }

    /// Euler characteristic of the listed strata under a weight
    /// (`naive`, `e`, `inv-e` or `o`).
    #[pyo3(signature = (weight = "naive"))]
    fn chi(&self, py: Python<'_>, weight: &str) -> PyResult<Py<PyAny>> {
        Function { inner: ConstructibleSet::all(self.inner.clone()).indicator() }.chi(py, weight)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: &Stack) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Stack({:?}, remainder={})", self.ids(), self.inner.has_remainder())
    }
}

/// A (locally) constructible function on a stack.
#[pyclass(frozen, module = "eulerstack_py")]
struct Function {
    inner: ConstructibleFn,
}

#[pymethods]
impl Function {
    /// Parses a function descriptor; its `stack` field, if present, is ignored
    /// in favour of `stack`.
    #[staticmethod]
    fn from_json(text: &str, stack: &Stack) -> PyResult<Self> {
        let d: FunctionDesc = js::from_str(text).map_err(err)?;
        Ok(Function { inner: js::function_from_desc(&d, stack.inner.clone()).map_err(err)? })
    }

    /// Builds a function from `{stratum id: value}` where values are ints or
    /// `"p/q"` strings.
    #[staticmethod]
    #[pyo3(signature = (stack, values, default = "0"))]
    fn from_values(stack: &Stack, values: &Bound<'_, PyDict>, default: &str) -> PyResult<Self> {
        let mut pairs = Vec::new();
        for (k, v) in values.iter() {
            let id: String = k.extract()?;
            let text = v.str()?.to_string();
            pairs.push((id, eulerstack::rational::parse_rational(&text).map_err(err)?));
        }
        let default = eulerstack::rational::parse_rational(default).map_err(err)?;
        let f = ConstructibleFn::from_map(stack.inner.clone(), pairs, default).map_err(err)?;
        Ok(Function { inner: f })
    }

    #[getter]
    fn stack(&self) -> Stack {
        Stack { inner: self.inner.stack().clone() }
    }

    fn values(&self, py: Python<'_>) -> PyResult<Py<PyDict>> {
        let d = PyDict::new(py);
        for (s, v) in self.inner.stack().strata().iter().zip(self.inner.values()) {
            d.set_item(&s.id, fraction(py, v)?)?;
        }
        Ok(d.unbind())
    }

    #[getter]
    fn default(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        fraction(py, self.inner.default_value())
    }

    fn is_constructible(&self) -> bool {
        self.inner.is_constructible()
    }

    #[pyo3(signature = (weight = "naive"))]
    fn chi(&self, py: Python<'_>, weight: &str) -> PyResult<Py<PyAny>> {
        let v = match parse_weight(weight)? {
            WeightFunction::Naive => chi_naive_weighted(&self.inner),
            w => chi_weighted(&self.inner, &w),
        }
        .map_err(err)?;
        fraction(py, &v)
    }

    fn to_json(&self) -> String {
        let stack = StackRef::Inline(js::stack_to_desc(self.inner.stack()));
        js::to_string_pretty(&js::function_to_desc(&self.inner, Some(stack)))
    }

    fn __add__(&self, other: &Function) -> PyResult<Function> {
        Ok(Function { inner: self.inner.add(&other.inner).map_err(err)? })
    }

    fn __sub__(&self, other: &Function) -> PyResult<Function> {
        Ok(Function { inner: self.inner.sub(&other.inner).map_err(err)? })
    }

    fn __mul__(&self, other: &Function) -> PyResult<Function> {
        Ok(Function { inner: self.inner.mul(&other.inner).map_err(err)? })
    }

    fn __eq__(&self, other: &Function) -> bool {
        self.inner == other.inner
    }
}

/// A morphism of stratified stacks.
#[pyclass(frozen, module = "eulerstack_py")]
struct Morphism {
    inner: StackMorphism,
}

#[pymethods]
impl Morphism {
    /// Loads a morphism file; stack paths inside resolve relative to it.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let (m, _) = js::read_morphism(Path::new(path)).map_err(err)?;
        Ok(Morphism { inner: m })
    }

    /// Parses a morphism descriptor with inline stacks.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let d: MorphismDesc = js::from_str(text).map_err(err)?;
        let source = js::resolve_stack(&d.source, Path::new(".")).map_err(err)?;
        let target = js::resolve_stack(&d.target, Path::new(".")).map_err(err)?;
        Ok(Morphism { inner: js::morphism_from_parts(&d, source, target).map_err(err)? })
    }

    #[staticmethod]
    fn identity(stack: &Stack) -> Self {
        Morphism { inner: StackMorphism::identity(stack.inner.clone()) }
    }

    fn to_json(&self) -> String {
        js::to_string_pretty(&js::morphism_to_inline_desc(&self.inner))
    }

    #[getter]
    fn source(&self) -> Stack {
        Stack { inner: self.inner.source().clone() }
    }

    #[getter]
    fn target(&self) -> Stack {
        Stack { inner: self.inner.target().clone() }
    }

    /// `None` when valid, otherwise the first violation.
    fn validate(&self) -> Option<String> {
        pp::validate_morphism(&self.inner).err().map(|v| v.to_string())
    }

    fn is_representable(&self) -> bool {
        self.inner.is_representable()
    }

    fn m_phi(&self, py: Python<'_>, stratum: &str) -> PyResult<Py<PyAny>> {
        fraction(py, &pp::m_phi_of(&self.inner, stratum).map_err(err)?)
    }

    /// Pushforward; `mode` is `naive`, `stk` or `w:<weight>`.
    #[pyo3(signature = (f, mode = "naive", lcf = false))]
    fn push(&self, f: &Function, mode: &str, lcf: bool) -> PyResult<Function> {
        let m = &self.inner;
        let g = match (mode, lcf) {
            ("naive", false) => pp::pushforward_naive(m, &f.inner),
            ("stk", false) => pp::pushforward_stack(m, &f.inner),
            ("naive", true) => pp::pushforward_lcf(m, &f.inner, LcfMode::Naive),
            ("stk", true) => pp::pushforward_lcf(m, &f.inner, LcfMode::Stack),
            (other, false) if other.starts_with("w:") => {
                pp::pushforward_weighted(m, &f.inner, &parse_weight(&other[2..])?)
            }
            _ => return Err(PyValueError::new_err(format!("unsupported mode {mode:?} (lcf={lcf})"))),
        };
        Ok(Function { inner: g.map_err(err)? })
    }

    fn pull(&self, f: &Function) -> PyResult<Function> {
        Ok(Function { inner: pp::pullback(&self.inner, &f.inner).map_err(err)? })
    }

    /// `self` followed by `then`.
    fn compose(&self, then: &Morphism) -> PyResult<Morphism> {
        Ok(Morphism { inner: pp::compose(&self.inner, &then.inner).map_err(err)? })
    }

    fn conserves(&self, f: &Function, weight: &str) -> PyResult<bool> {
        pp::check_conservation(&self.inner, &f.inner, &parse_weight(weight)?).map_err(err)
    }
}

/// The fibre product of `phi: F → H` and `psi: G → H`, as `(E, eta, theta)`.
#[pyfunction]
fn fiber_product(phi: &Morphism, psi: &Morphism) -> PyResult<(Stack, Morphism, Morphism)> {
    let sq = build_square(&phi.inner, &psi.inner).map_err(err)?;
    Ok((Stack { inner: sq.e.clone() }, Morphism { inner: sq.eta }, Morphism { inner: sq.theta }))
}

/// Both sides of the Cartesian-square identity on `δ_C`, per stratum of `G`:
/// `[(id, left, right), ...]`.
#[pyfunction]
fn commutation_rows(
    py: Python<'_>,
    phi: &Morphism,
    psi: &Morphism,
    ids: Vec<String>,
) -> PyResult<Vec<(String, Py<PyAny>, Py<PyAny>)>> {
    let sq = build_square(&phi.inner, &psi.inner).map_err(err)?;
    let c = ConstructibleSet::from_ids(phi.inner.source().clone(), &ids).map_err(err)?;
    let report = verify_commutation(&sq, &c).map_err(err)?;
    report
        .rows
        .iter()
        .map(|(id, l, r)| Ok((id.clone(), fraction(py, l)?, fraction(py, r)?)))
        .collect()
}

fn gset(text: &str) -> PyResult<eulerstack::orbifold::FiniteGSet> {
    let d: GSetDesc = js::from_str(text).map_err(err)?;
    js::gset_from_desc(&d).map_err(err)
}

/// `|G|⁻¹ Σ_{gh = hg} |M^{g,h}|` for a G-set descriptor.
#[pyfunction]
fn stringy_euler(py: Python<'_>, gset_json: &str) -> PyResult<Py<PyAny>> {
    fraction(py, &stringy(&gset(gset_json)?))
}

/// `(stringy, orbifold)` for a G-set descriptor.
#[pyfunction]
fn check_dhvw(py: Python<'_>, gset_json: &str) -> PyResult<(Py<PyAny>, Py<PyAny>)> {
    let r = dhvw(&gset(gset_json)?);
    Ok((fraction(py, &r.stringy)?, fraction(py, &r.orbifold)?))
}

/// Runs a property suite and returns its report as JSON text.
#[pyfunction]
#[pyo3(signature = (suite, seed = 0, cases = 100))]
fn run_suite(py: Python<'_>, suite: &str, seed: u64, cases: u64) -> PyResult<String> {
    let s: Suite = suite.parse().map_err(err)?;
    let report = py.detach(|| run_law_suite(s, seed, cases));
    Ok(serde_json::to_string(&report).expect("reports serialize"))
}

#[pymodule]
fn eulerstack_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("EulerstackError", m.py().get_type::<EulerstackError>())?;
    m.add_class::<Stack>()?;
    m.add_class::<Function>()?;
    m.add_class::<Morphism>()?;
    m.add_function(wrap_pyfunction!(fiber_product, m)?)?;
    m.add_function(wrap_pyfunction!(commutation_rows, m)?)?;
    m.add_function(wrap_pyfunction!(stringy_euler, m)?)?;
    m.add_function(wrap_pyfunction!(check_dhvw, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}

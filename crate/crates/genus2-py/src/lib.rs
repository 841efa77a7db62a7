//! Python bindings. Words and moves cross the boundary as text in the
//! script syntax.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use genus2::corpus;
use genus2::decompose as splits;
use genus2::dsl;
use genus2::fibration::{self, FiberSignature};
use genus2::homology;
use genus2::moves::Engine;
use genus2::pi1::{Pi1Model, Verdict};
use genus2::word::Word;

fn err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Registry", module = "genus2")]
struct PyRegistry {
    inner: genus2::Registry,
}

#[pyclass(name = "ReplayResult", module = "genus2", get_all)]
struct PyReplayResult {
    passed: bool,
    failed_step: Option<usize>,
    reason: Option<String>,
    final_word: String,
    signatures: Vec<(String, (u32, u32))>,
    text: String,
}

#[pymethods]
impl PyReplayResult {
    fn __repr__(&self) -> String {
        format!("ReplayResult(passed={})", if self.passed { "True" } else { "False" })
    }
}

#[pyclass(name = "Split", module = "genus2", get_all)]
struct PySplit {
    parts: ((u32, u32), (u32, u32)),
    admissible: bool,
    rules: Vec<String>,
}

#[pymethods]
impl PySplit {
    fn __repr__(&self) -> String {
        let ((a, b), (c, d)) = self.parts;
        format!("Split(({a},{b}) + ({c},{d}), admissible={})", if self.admissible { "True" } else { "False" })
    }
}

impl PyRegistry {
    fn word(&self, text: &str) -> PyResult<Word> {
        let w = dsl::parse_word(text).map_err(err)?;
        self.inner.check_word(&w).map_err(err)?;
        Ok(w)
    }
}

#[pymethods]
impl PyRegistry {
    /// The built-in registry, or one parsed from registry text.
    #[new]
    #[pyo3(signature = (text=None))]
    fn new(text: Option<&str>) -> PyResult<Self> {
        let inner = match text {
            None => genus2::Registry::standard(),
            Some(t) => genus2::Registry::parse(t).map_err(err)?,
        };
        Ok(PyRegistry { inner })
    }

    fn curves(&self) -> Vec<String> {
        self.inner.curves().iter().map(|c| c.name.clone()).collect()
    }

    /// `(name, passed, detail)` for every check.
    fn validate(&self) -> Vec<(String, bool, String)> {
        self.inner.validate().checks.into_iter().map(|c| (c.name, c.passed, c.detail)).collect()
    }

    fn image(&self, word: &str) -> PyResult<Vec<Vec<i64>>> {
        let m = homology::image(&self.inner, &self.word(word)?).map_err(err)?;
        Ok(m.0.iter().map(|r| r.to_vec()).collect())
    }

    fn is_relator(&self, word: &str) -> PyResult<bool> {
        let w = self.word(word)?;
        let image = homology::image(&self.inner, &w).map_err(err)?;
        Ok(image.is_identity() && homology::ab_class(&self.inner, &w).map_err(err)?.value() == 0)
    }

    fn ab_class(&self, word: &str) -> PyResult<u8> {
        Ok(homology::ab_class(&self.inner, &self.word(word)?).map_err(err)?.value())
    }

    fn signature(&self, word: &str) -> PyResult<(u32, u32)> {
        let s = fibration::word_signature(&self.inner, &self.word(word)?).map_err(err)?;
        Ok((s.n, s.s))
    }

    fn normalize(&self, word: &str) -> PyResult<String> {
        let w = self.word(word)?;
        Ok(Word::new(w.letters.iter().map(|l| self.inner.normalize_letter(l)).collect()).to_string())
    }

    /// Applies one move written as a script line, e.g. `"~ commute @0"`.
    fn apply_move(&self, word: &str, r#move: &str) -> PyResult<String> {
        let m = dsl::parse_move_line(r#move, Some(&self.inner)).map_err(err)?;
        let out = Engine::new(&self.inner).apply(&self.word(word)?, &m).map_err(err)?;
        Ok(out.to_string())
    }

    fn replay(&self, script: &str) -> PyResult<PyReplayResult> {
        let s = dsl::parse_script(script, Some(&self.inner)).map_err(err)?;
        let r = Engine::new(&self.inner).replay(&s);
        Ok(PyReplayResult {
            passed: r.passed(),
            failed_step: r.failure.as_ref().map(|f| f.step),
            reason: r.failure.as_ref().map(|f| f.reason.clone()),
            final_word: r.final_word.to_string(),
            signatures: r.labelled_signatures().into_iter().map(|(l, s)| (l, (s.n, s.s))).collect(),
            text: r.to_string(),
        })
    }

    /// A conjugator witnessing that the word acts as an inner automorphism
    /// of the surface group, or `None` when the search finds none.
    #[pyo3(signature = (word, bound=12))]
    fn pi1_conjugator(&self, word: &str, bound: usize) -> PyResult<Option<String>> {
        let w = self.word(word)?;
        match Pi1Model::new(&self.inner).equal_up_to_inner(&w, &Word::empty(), bound).map_err(err)? {
            Verdict::Equal(y) => Ok(Some(y.to_string())),
            _ => Ok(None),
        }
    }

    fn to_text(&self) -> String {
        self.inner.to_string()
    }
}

#[pyfunction]
#[pyo3(signature = (n, s, simply_connected=false))]
fn invariants<'py>(py: Python<'py>, n: u32, s: u32, simply_connected: bool) -> PyResult<Bound<'py, PyDict>> {
    let sig = FiberSignature::new(n, s);
    let inv = fibration::invariants(sig, simply_connected).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("e", inv.e)?;
    d.set_item("sigma", inv.sigma)?;
    d.set_item("c1sq", inv.c1sq)?;
    d.set_item("chi_h", inv.chi_h)?;
    if let Some(b) = inv.b2 {
        d.set_item("b2plus", b.b2plus)?;
        d.set_item("b2minus", b.b2minus)?;
        d.set_item("label", fibration::homeo_label(&inv, true, fibration::non_spin(sig)).ok())?;
    }
    Ok(d)
}

#[pyfunction]
fn decompose(n: u32, s: u32) -> Vec<PySplit> {
    splits::admissible_splits(FiberSignature::new(n, s))
        .splits
        .iter()
        .map(|sp| PySplit {
            parts: ((sp.parts[0].n, sp.parts[0].s), (sp.parts[1].n, sp.parts[1].s)),
            admissible: sp.is_admissible(),
            rules: sp.rule_ids().into_iter().map(String::from).collect(),
        })
        .collect()
}

#[pyfunction]
fn decompose_report(n: u32, s: u32) -> String {
    splits::admissible_splits(FiberSignature::new(n, s)).to_string()
}

/// Labelled fixture relators, as text.
#[pyfunction]
fn corpus_relators() -> PyResult<Vec<(String, String)>> {
    let reg = genus2::Registry::standard();
    let rs = corpus::relators(&reg).map_err(err)?;
    Ok(rs.into_iter().map(|r| (r.label.unwrap_or_default(), r.word.to_string())).collect())
}

#[pyfunction]
fn corpus_scripts() -> Vec<(String, String)> {
    corpus::DERIVATIONS.iter().map(|(n, t)| (n.to_string(), t.to_string())).collect()
}

#[pymodule(name = "genus2")]
fn genus2_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRegistry>()?;
    m.add_class::<PyReplayResult>()?;
    m.add_class::<PySplit>()?;
    m.add_function(wrap_pyfunction!(invariants, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(decompose_report, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_relators, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_scripts, m)?)?;
    Ok(())
}

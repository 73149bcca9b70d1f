//! Python bindings for the migmap engine.
//!
//! Exposes the pipeline's data model (fragments, catalogs, mappings) and its
//! two core operations: the substitution loop that turns observed fragments
//! into method mappings, and the description-similarity measure it uses to
//! split ambiguous fragments.

use std::path::Path;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use migmap::catalog::{load_catalog, Catalog as CoreCatalog};
use migmap::fragment::{read_fragments_file, Fragment as CoreFragment};
use migmap::mapping::{substitution as run_substitution, LdScorer, Mapping as CoreMapping};
use migmap::method::{MethodRef, Side};
use migmap::simdoc::{csld as core_csld, VectorSpace};

fn err(e: migmap::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_side(side: Side, encodings: &[String]) -> PyResult<Vec<MethodRef>> {
    encodings
        .iter()
        .map(|text| MethodRef::parse(side, text).map_err(err))
        .collect()
}

fn encodings(methods: &std::collections::BTreeSet<MethodRef>) -> Vec<String> {
    methods.iter().map(MethodRef::encode).collect()
}

fn join(encs: &[String]) -> String {
    encs.join(", ")
}

/// An API catalog: method signatures with one-line descriptions.
#[pyclass(frozen)]
struct Catalog {
    inner: CoreCatalog,
}

#[pymethods]
impl Catalog {
    /// Load a `name(paramTypes)|description` catalog file.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Catalog> {
        let inner = load_catalog(Path::new(path)).map_err(err)?;
        Ok(Catalog { inner })
    }

    fn contains(&self, name: &str, arity: usize) -> bool {
        self.inner.contains(name, arity)
    }

    /// Description of `name/arity`, or None when undocumented.
    fn description(&self, name: &str, arity: usize) -> Option<String> {
        self.inner
            .lookup(name, arity)
            .map(|entry| entry.description.clone())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Catalog({} methods)", self.inner.len())
    }
}

/// A pair of method sets observed changing together, with the frequency of
/// that exact pair. Methods are encoded as `name/arity`.
#[pyclass]
#[derive(Clone)]
struct Fragment {
    inner: CoreFragment,
}

#[pymethods]
impl Fragment {
    #[new]
    #[pyo3(signature = (removed, added, frequency = 1))]
    fn new(removed: Vec<String>, added: Vec<String>, frequency: u64) -> PyResult<Fragment> {
        let inner = CoreFragment::new(
            parse_side(Side::Source, &removed)?,
            parse_side(Side::Target, &added)?,
            frequency,
        )
        .map_err(err)?;
        Ok(Fragment { inner })
    }

    #[getter]
    fn removed(&self) -> Vec<String> {
        encodings(&self.inner.removed)
    }

    #[getter]
    fn added(&self) -> Vec<String> {
        encodings(&self.inner.added)
    }

    #[getter]
    fn frequency(&self) -> u64 {
        self.inner.frequency
    }

    /// Description-similarity score, present only on split-born fragments.
    #[getter]
    fn similarity(&self) -> Option<f64> {
        self.inner.similarity
    }

    fn __repr__(&self) -> String {
        format!(
            "Fragment({{{}}} -> {{{}}}, frequency={})",
            join(&self.removed()),
            join(&self.added()),
            self.inner.frequency
        )
    }
}

/// One migration mapping: the methods a client must replace and what replaces
/// them, with the evidence behind the pairing.
#[pyclass(frozen)]
struct Mapping {
    inner: CoreMapping,
}

#[pymethods]
impl Mapping {
    #[getter]
    fn removed(&self) -> Vec<String> {
        encodings(&self.inner.removed)
    }

    #[getter]
    fn added(&self) -> Vec<String> {
        encodings(&self.inner.added)
    }

    /// Accumulated frequency of the fragments behind this mapping.
    #[getter]
    fn support(&self) -> u64 {
        self.inner.support
    }

    #[getter]
    fn similarity(&self) -> Option<f64> {
        self.inner.similarity
    }

    /// False only for many-to-many fragments emitted as-is.
    #[getter]
    fn resolved(&self) -> bool {
        self.inner.resolved
    }

    /// "one-to-one", "one-to-many", or "many-to-many".
    #[getter]
    fn cardinality(&self) -> &'static str {
        use migmap::mapping::Cardinality;
        match self.inner.cardinality() {
            Cardinality::OneToOne => "one-to-one",
            Cardinality::OneToMany => "one-to-many",
            Cardinality::ManyToMany => "many-to-many",
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "Mapping({{{}}} -> {{{}}}, support={})",
            join(&self.removed()),
            join(&self.added()),
            self.inner.support
        )
    }
}

/// Counters from one substitution run.
#[pyclass(frozen, get_all)]
struct SubstitutionStats {
    /// Intersection steps applied.
    intersections: u64,
    /// Fragments born from documentation splits.
    ld_born: u64,
    /// Distinct description-similarity computations.
    doc_invocations: u64,
}

#[pymethods]
impl SubstitutionStats {
    fn __repr__(&self) -> String {
        format!(
            "SubstitutionStats(intersections={}, ld_born={}, doc_invocations={})",
            self.intersections, self.ld_born, self.doc_invocations
        )
    }
}

/// Read a JSONL fragment file (one fragment per line, `#` comments allowed).
#[pyfunction]
fn read_fragments(path: &str) -> PyResult<Vec<Fragment>> {
    let fragments = read_fragments_file(Path::new(path)).map_err(err)?;
    Ok(fragments
        .into_iter()
        .map(|inner| Fragment { inner })
        .collect())
}

/// Run the substitution loop over a list of fragments.
///
/// With both catalogs given, ambiguous fragments are additionally split by
/// description similarity (scores below `floor` never win); with neither,
/// the loop runs on intersections alone. Returns `(mappings, stats)`.
#[pyfunction]
#[pyo3(signature = (fragments, source = None, target = None, floor = 0.5))]
fn substitution(
    fragments: Vec<Fragment>,
    source: Option<&Catalog>,
    target: Option<&Catalog>,
    floor: f64,
) -> PyResult<(Vec<Mapping>, SubstitutionStats)> {
    let inputs: Vec<CoreFragment> = fragments.into_iter().map(|f| f.inner).collect();
    let outcome = match (source, target) {
        (Some(source), Some(target)) => {
            let mut scorer = LdScorer::new(&source.inner, &target.inner, floor);
            run_substitution(&inputs, Some(&mut scorer))
        }
        (None, None) => run_substitution(&inputs, None),
        _ => {
            return Err(PyValueError::new_err(
                "pass both catalogs to enable the documentation split, or neither",
            ))
        }
    }
    .map_err(err)?;
    let mappings = outcome
        .mappings
        .into_iter()
        .map(|inner| Mapping { inner })
        .collect();
    let stats = SubstitutionStats {
        intersections: outcome.stats.intersections,
        ld_born: outcome.stats.ld_born,
        doc_invocations: outcome.stats.doc_invocations,
    };
    Ok((mappings, stats))
}

/// Description similarity between two groups of method descriptions, in
/// [0, 1]: keyphrase extraction, tf-idf weighting over `corpus`, cosine.
#[pyfunction]
fn csld(corpus: Vec<String>, removed: Vec<String>, added: Vec<String>) -> f64 {
    let space = VectorSpace::build(corpus.iter().map(String::as_str));
    let removed: Vec<&str> = removed.iter().map(String::as_str).collect();
    let added: Vec<&str> = added.iter().map(String::as_str).collect();
    core_csld(&space, &removed, &added)
}

#[pymodule]
fn migmap_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Catalog>()?;
    m.add_class::<Fragment>()?;
    m.add_class::<Mapping>()?;
    m.add_class::<SubstitutionStats>()?;
    m.add_function(wrap_pyfunction!(read_fragments, m)?)?;
    m.add_function(wrap_pyfunction!(substitution, m)?)?;
    m.add_function(wrap_pyfunction!(csld, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}

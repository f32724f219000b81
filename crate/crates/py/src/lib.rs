//! Python bindings: signatures, Lefschetz lists, enumeration, similarity,
//! lattices and fundamental group invariants.

use pyo3::exceptions::{PyMemoryError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use arrangeclass::enumerate::{enumerate_omega, EnumerateOptions};
use arrangeclass::groupcmp::{self, compare_profiles, ProfileOptions};
use arrangeclass::lattice::{self, lattice_of, Mode};
use arrangeclass::render::RenderKind;
use arrangeclass::similarity::RelationSet;
use arrangeclass::{moves, pi1, render, sigs, Error};

fn err(e: Error) -> PyErr {
    match e {
        Error::Input(m) => PyValueError::new_err(m),
        Error::Resource(m) => PyMemoryError::new_err(m),
        Error::Internal(m) => PyRuntimeError::new_err(m),
    }
}

fn mode(s: &str) -> PyResult<Mode> {
    s.parse().map_err(err)
}

#[pyclass(name = "Signature", skip_from_py_object, frozen, eq, ord, hash, str)]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PySignature(arrangeclass::Signature);

impl std::fmt::Display for PySignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[pymethods]
impl PySignature {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(PySignature).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Signature('{}')", self.0)
    }

    /// `(multiplicity, count)` pairs.
    fn counts(&self) -> Vec<(usize, usize)> {
        self.0.counts().iter().map(|(&k, &n)| (k, n)).collect()
    }

    #[getter]
    fn points(&self) -> usize {
        self.0.points()
    }

    #[getter]
    fn multiple_points(&self) -> usize {
        self.0.multiple_points()
    }

    #[getter]
    fn lines(&self) -> Option<usize> {
        self.0.lines()
    }
}

#[pyclass(name = "LefschetzList", skip_from_py_object, frozen, eq, ord, hash, str)]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PyList(arrangeclass::LefschetzList);

impl std::fmt::Display for PyList {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[pymethods]
impl PyList {
    /// Either `LefschetzList("l=3 (1,2)(2,3)")` or `LefschetzList(3, [(1, 2), (2, 3)])`.
    #[new]
    #[pyo3(signature = (text_or_lines, pairs=None))]
    fn new(text_or_lines: &Bound<'_, PyAny>, pairs: Option<Vec<(u8, u8)>>) -> PyResult<Self> {
        match pairs {
            Some(p) => arrangeclass::LefschetzList::from_tuples(text_or_lines.extract()?, &p).map(PyList).map_err(err),
            None => text_or_lines.extract::<String>()?.parse().map(PyList).map_err(err),
        }
    }

    fn __repr__(&self) -> String {
        format!("LefschetzList('{}')", self.0)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    #[getter]
    fn lines(&self) -> usize {
        self.0.lines()
    }

    fn pairs(&self) -> Vec<(u8, u8)> {
        self.0.pairs().iter().map(|p| (p.a, p.b)).collect()
    }

    fn signature(&self) -> PySignature {
        PySignature(self.0.signature())
    }

    fn is_uip(&self) -> bool {
        self.0.check_uip()
    }

    /// Lexicographically smallest member of the commutation class.
    fn class_min(&self) -> PyList {
        PyList(moves::equiv_class_min(&self.0))
    }

    fn tau(&self) -> PyList {
        PyList(moves::tau(&self.0))
    }

    fn mu(&self) -> PyResult<PyList> {
        moves::mu(&self.0).map(PyList).map_err(err)
    }

    fn sigma(&self) -> PyResult<PyList> {
        moves::sigma(&self.0).map(PyList).map_err(err)
    }

    /// Canonical form of the incidence lattice, as text.
    fn canonical_form(&self) -> PyResult<String> {
        lattice::canonical_form(&lattice_of(&self.0)).map(|c| c.to_string()).map_err(err)
    }

    /// Rows are lines, columns are points.
    fn incidence_matrix(&self) -> Vec<Vec<u8>> {
        lattice_of(&self.0).matrix()
    }

    fn lattice_isomorphic(&self, other: &PyList) -> PyResult<bool> {
        lattice::lattices_isomorphic(&lattice_of(&self.0), &lattice_of(&other.0)).map_err(err)
    }

    #[pyo3(signature = (mode="affine"))]
    fn presentation(&self, mode: &str) -> PyResult<Presentation> {
        pi1::presentation(&self.0, self::mode(mode)?).map(Presentation).map_err(err)
    }

    /// SVG drawing; `kind` is `wiring` or `multipoint`.
    #[pyo3(signature = (kind="wiring"))]
    fn render(&self, kind: &str) -> PyResult<String> {
        Ok(render::render(&self.0, kind.parse::<RenderKind>().map_err(err)?))
    }
}

#[pyclass(name = "Presentation", skip_from_py_object, frozen, str)]
#[derive(Clone)]
pub struct Presentation(pi1::GroupPresentation);

impl std::fmt::Display for Presentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0.to_plain())
    }
}

#[pymethods]
impl Presentation {
    #[new]
    #[pyo3(signature = (generators, relators, mode="affine"))]
    fn new(generators: usize, relators: Vec<Vec<i32>>, mode: &str) -> PyResult<Self> {
        pi1::GroupPresentation::new(generators, relators, self::mode(mode)?).map(Presentation).map_err(err)
    }

    #[getter]
    fn generators(&self) -> usize {
        self.0.generators
    }

    #[getter]
    fn relators(&self) -> Vec<Vec<i32>> {
        self.0.relators.clone()
    }

    fn to_gap(&self) -> String {
        self.0.to_gap()
    }

    /// Abelianization as `(rank, torsion)`.
    fn abelianization(&self) -> (usize, Vec<String>) {
        let a = groupcmp::abelianization(&self.0);
        (a.rank, a.torsion.iter().map(|t| t.to_string()).collect())
    }

    /// Invariant profile: abelianization, quotient counts and lower central series ranks.
    #[pyo3(signature = (lcs_depth=3))]
    fn profile(&self, py: Python<'_>, lcs_depth: usize) -> PyResult<Profile> {
        let opts = ProfileOptions { lcs_depth, ..ProfileOptions::default() };
        let pres = self.0.clone();
        py.detach(|| groupcmp::invariant_profile(&pres, &opts)).map(Profile).map_err(err)
    }
}

#[pyclass(name = "Profile", skip_from_py_object, frozen, eq, str)]
#[derive(Clone, PartialEq)]
pub struct Profile(groupcmp::InvariantProfile);

impl std::fmt::Display for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[pymethods]
impl Profile {
    #[getter]
    fn abelianization(&self) -> String {
        self.0.abelianization.to_string()
    }

    /// `(target, homomorphisms, surjections)`, counts as decimal strings.
    #[getter]
    fn quotient_counts(&self) -> Vec<(String, String, String)> {
        self.0
            .quotient_counts
            .iter()
            .map(|(k, q)| (k.clone(), q.homomorphisms.to_string(), q.surjections.to_string()))
            .collect()
    }

    #[getter]
    fn lcs_ranks(&self) -> Vec<usize> {
        self.0.lcs_ranks.clone()
    }

    /// `distinguished` or `indistinguishable`.
    fn compare(&self, other: &Profile) -> String {
        compare_profiles(&self.0, &other.0).to_string()
    }
}

#[pyfunction]
fn admissible_signatures(lines: usize) -> PyResult<Vec<PySignature>> {
    sigs::admissible_signatures(lines).map(|v| v.into_iter().map(PySignature).collect()).map_err(err)
}

/// Minimal representatives of all commutation classes with the signature.
#[pyfunction]
fn enumerate(py: Python<'_>, signature: &PySignature) -> PyResult<Vec<PyList>> {
    let sig = signature.0.clone();
    py.detach(|| enumerate_omega(&sig, &EnumerateOptions::default()))
        .map(|o| o.reps.into_iter().map(PyList).collect())
        .map_err(err)
}

/// Similarity classes as lists of member indices into `enumerate(signature)`.
#[pyfunction]
#[pyo3(signature = (signature, relations="stmx"))]
fn classify(py: Python<'_>, signature: &PySignature, relations: &str) -> PyResult<Vec<Vec<usize>>> {
    let rels: RelationSet = relations.parse().map_err(err)?;
    let sig = signature.0.clone();
    py.detach(|| {
        let omega = enumerate_omega(&sig, &EnumerateOptions::default())?;
        arrangeclass::similarity::classify(&omega, rels)
    })
    .map(|c| c.components.into_iter().map(|c| c.members).collect())
    .map_err(err)
}

#[pymodule]
fn arrangeclass_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySignature>()?;
    m.add_class::<PyList>()?;
    m.add_class::<Presentation>()?;
    m.add_class::<Profile>()?;
    m.add_function(wrap_pyfunction!(admissible_signatures, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    Ok(())
}

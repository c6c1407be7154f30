//! Python bindings for the genplan synthesis engine.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use genplan::analysis::{asymptotic_complexity, certify_termination};
use genplan::benchmarks::{self, BenchmarkId};
use genplan::codegen::bundle;
use genplan::interpreter::{execute, Fuel, Undefined};
use genplan::model::{parse_domain, parse_instance, Domain, GpProblem, Instance};
use genplan::program::{Program, ProgramLimits};
use genplan::report::{validate, SynthesisReport};
use genplan::synthesis::{synthesize as run_search, SynthesisConfig, TieBreak};
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py(py: Python<'_>, v: &impl Serialize) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).map_err(value_err)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn benchmark(name: &str) -> PyResult<BenchmarkId> {
    name.parse().map_err(value_err)
}

/// A typed planning domain.
#[pyclass(name = "Domain", module = "genplan_py", frozen)]
struct PyDomain {
    inner: Arc<Domain>,
}

#[pymethods]
impl PyDomain {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyDomain {
            inner: Arc::new(parse_domain(text).map_err(value_err)?),
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn types(&self) -> Vec<String> {
        self.inner.types.clone()
    }

    #[getter]
    fn fluents(&self) -> Vec<String> {
        self.inner.fluents.iter().map(|f| f.name.clone()).collect()
    }

    #[getter]
    fn actions(&self) -> Vec<String> {
        self.inner.schemes.iter().map(|s| s.name.clone()).collect()
    }

    fn __repr__(&self) -> String {
        format!("Domain({:?})", self.inner.name)
    }
}

/// A planning instance of a domain.
#[pyclass(name = "Instance", module = "genplan_py", frozen)]
struct PyInstance {
    inner: Instance,
    domain: Arc<Domain>,
}

#[pymethods]
impl PyInstance {
    #[new]
    fn new(text: &str, domain: &PyDomain) -> PyResult<Self> {
        Ok(PyInstance {
            inner: parse_instance(text, &domain.inner).map_err(value_err)?,
            domain: Arc::clone(&domain.inner),
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    /// Number of objects of each type.
    fn counts(&self) -> Vec<(String, usize)> {
        self.domain
            .types
            .iter()
            .enumerate()
            .map(|(t, name)| (name.clone(), self.inner.count(t)))
            .collect()
    }

    fn to_pddl(&self) -> String {
        self.inner.to_pddl(&self.domain)
    }

    fn __repr__(&self) -> String {
        format!("Instance({:?})", self.inner.name)
    }
}

fn instances_of(domain: &Arc<Domain>, instances: &[PyRef<'_, PyInstance>]) -> PyResult<Vec<Instance>> {
    instances
        .iter()
        .map(|i| {
            if Arc::ptr_eq(&i.domain, domain) || *i.domain == **domain {
                Ok(i.inner.clone())
            } else {
                Err(PyValueError::new_err(format!("instance '{}' belongs to another domain", i.inner.name)))
            }
        })
        .collect()
}

/// A structured planning program.
#[pyclass(name = "Program", module = "genplan_py", frozen)]
struct PyProgram {
    inner: Program,
    domain: Arc<Domain>,
}

#[pymethods]
impl PyProgram {
    #[new]
    fn new(text: &str, domain: &PyDomain) -> PyResult<Self> {
        Ok(PyProgram {
            inner: Program::parse(text, &domain.inner).map_err(value_err)?,
            domain: Arc::clone(&domain.inner),
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        self.inner.to_text(&self.domain)
    }

    fn __repr__(&self) -> String {
        format!("Program({} lines)", self.inner.len())
    }

    fn __eq__(&self, other: &PyProgram) -> bool {
        self.inner == other.inner
    }

    #[getter]
    fn loop_count(&self) -> usize {
        self.inner.loop_count()
    }

    fn text(&self) -> String {
        self.inner.to_text(&self.domain)
    }

    /// Executes on one instance; returns the plan, attempted count, goal
    /// verdict and halt reason.
    #[pyo3(signature = (instance, fuel=None))]
    fn run(&self, py: Python<'_>, instance: &PyInstance, fuel: Option<u64>) -> PyResult<Py<PyAny>> {
        let fuel = fuel.map_or(Fuel::UNLIMITED, Fuel::limit);
        let t = py.detach(|| execute(&self.inner, &self.domain, &instance.inner, fuel));
        to_py(py, &t.to_json(&self.domain, &instance.inner))
    }

    /// Per-instance verdicts and whether every instance is solved.
    fn validate(&self, py: Python<'_>, instances: Vec<PyRef<'_, PyInstance>>) -> PyResult<Py<PyAny>> {
        let insts = instances_of(&self.domain, &instances)?;
        let r = py.detach(|| validate(&self.inner, &self.domain, &insts, Fuel::UNLIMITED));
        to_py(py, &r)
    }

    fn solves(&self, py: Python<'_>, instances: Vec<PyRef<'_, PyInstance>>) -> PyResult<bool> {
        let insts = instances_of(&self.domain, &instances)?;
        Ok(py.detach(|| validate(&self.inner, &self.domain, &insts, Fuel::UNLIMITED).all_solved))
    }

    /// The termination certificate: loop nest and any violations.
    fn certify(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &certify_termination(&self.inner))
    }

    /// Asymptotic complexity, with numeric bounds for each given instance.
    fn complexity(&self, py: Python<'_>, instances: Vec<PyRef<'_, PyInstance>>) -> PyResult<Py<PyAny>> {
        let prob = GpProblem::new(Arc::clone(&self.domain), instances_of(&self.domain, &instances)?)
            .map_err(value_err)?;
        to_py(py, &asymptotic_complexity(&self.inner, &prob).map_err(value_err)?)
    }

    /// Writes the C++ validator bundle for `instance`; returns the source path.
    fn emit(&self, instance: &PyInstance, out_dir: PathBuf) -> PyResult<String> {
        let b = bundle(&self.domain, &instance.inner, &self.inner).map_err(value_err)?;
        let src = b.write_to(&out_dir).map_err(|e| PyIOError::new_err(e.to_string()))?;
        Ok(src.display().to_string())
    }
}

/// Searches for a program solving every instance; returns the synthesis
/// report, whose `program` entry holds the program text when solved.
#[pyfunction]
#[pyo3(signature = (
    domain, instances, lines, pointers, tie="max-loops", time_limit=3600.0, node_limit=10_000_000,
    memory_limit_mib=3072, tabu=true, evaluation="close-open", threads=0
))]
#[allow(clippy::too_many_arguments)]
fn synthesize(
    py: Python<'_>,
    domain: &PyDomain,
    instances: Vec<PyRef<'_, PyInstance>>,
    lines: usize,
    pointers: &str,
    tie: &str,
    time_limit: f64,
    node_limit: u64,
    memory_limit_mib: usize,
    tabu: bool,
    evaluation: &str,
    threads: usize,
) -> PyResult<Py<PyAny>> {
    let dom = &domain.inner;
    let prob = GpProblem::new(Arc::clone(dom), instances_of(dom, &instances)?).map_err(value_err)?;
    let budget = ProgramLimits::parse_budget(dom, pointers).map_err(value_err)?;
    let mut cfg = SynthesisConfig::new(ProgramLimits::with_budget(dom, lines, &budget).map_err(value_err)?);
    cfg.tie = tie.parse::<TieBreak>().map_err(value_err)?;
    cfg.time_limit = Some(Duration::try_from_secs_f64(time_limit).map_err(value_err)?);
    cfg.node_limit = Some(node_limit);
    cfg.memory_limit = Some(memory_limit_mib << 20);
    cfg.use_tabu = tabu;
    cfg.evaluation = match evaluation {
        "close-open" => Undefined::CloseOpen,
        "halt" => Undefined::Halt,
        other => return Err(PyValueError::new_err(format!("unknown evaluation '{other}'"))),
    };
    cfg.threads = threads;
    let report = py.detach(|| SynthesisReport::new(&prob, &cfg, &run_search(&prob, &cfg)));
    to_py(py, &report)
}

#[pyfunction]
fn benchmark_names() -> Vec<&'static str> {
    BenchmarkId::ALL.iter().map(|b| b.name()).collect()
}

#[pyfunction]
fn benchmark_domain(name: &str) -> PyResult<PyDomain> {
    Ok(PyDomain {
        inner: benchmarks::domain(benchmark(name)?),
    })
}

#[pyfunction]
fn reference_program(name: &str) -> PyResult<PyProgram> {
    let id = benchmark(name)?;
    Ok(PyProgram {
        inner: benchmarks::reference_program(id),
        domain: benchmarks::domain(id),
    })
}

#[pyfunction]
#[pyo3(signature = (name, size, seed=1))]
fn generate(name: &str, size: usize, seed: u64) -> PyResult<PyInstance> {
    let id = benchmark(name)?;
    Ok(PyInstance {
        inner: benchmarks::generate(id, size, seed).map_err(value_err)?,
        domain: benchmarks::domain(id),
    })
}

/// The benchmark's synthesis budget: `(lines, "type=count,...")`.
#[pyfunction]
fn synthesis_budget(name: &str) -> PyResult<(usize, String)> {
    let (lines, budget) = benchmarks::synthesis_config(benchmark(name)?);
    let spec: Vec<String> = budget.iter().map(|(t, c)| format!("{t}={c}")).collect();
    Ok((lines, spec.join(",")))
}

#[pymodule]
fn genplan_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDomain>()?;
    m.add_class::<PyInstance>()?;
    m.add_class::<PyProgram>()?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(benchmark_names, m)?)?;
    m.add_function(wrap_pyfunction!(benchmark_domain, m)?)?;
    m.add_function(wrap_pyfunction!(reference_program, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(synthesis_budget, m)?)?;
    Ok(())
}

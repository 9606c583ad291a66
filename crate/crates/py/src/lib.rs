//! Python bindings.
//!
//! Records, verdicts and sweep rows cross the boundary as plain dicts built
//! from the same JSON the trace files use, so Python sees exactly what the
//! CLI writes.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use normmon_core::io::trace::{Trace, TraceTick};
use normmon_core::io::ScenarioFile;
use normmon_core::monitor::{InitialKnowledge, Monitor as CoreMonitor, MonitorConfig, Variant};
use normmon_core::sim::case_study::{CameraChoice, CaseStudyConfig};
use normmon_core::sim::experiment::{case_study_row, Aggregation, Metric, MonitorSettings};
use normmon_core::sim::{simulate as simulate_world, Layout};
use normmon_core::{ConcurrentAction, Scenario as CoreScenario, TickRecord};

create_exception!(normmon, NormmonError, PyException);

fn err(e: impl std::fmt::Display) -> PyErr {
    NormmonError::new_err(e.to_string())
}

fn parse_variant(name: &str) -> PyResult<Variant> {
    Variant::ALL
        .into_iter()
        .find(|v| v.name() == name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown variant {name:?}")))
}

fn parse_initial(name: &str) -> PyResult<InitialKnowledge> {
    match name {
        "complete" => Ok(InitialKnowledge::Complete),
        "empty" => Ok(InitialKnowledge::Empty),
        _ => Err(PyValueError::new_err(format!("unknown initial knowledge {name:?}"))),
    }
}

fn to_py<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A compiled scenario.
#[pyclass(frozen)]
struct Scenario {
    inner: Arc<CoreScenario>,
}

#[pymethods]
impl Scenario {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = CoreScenario::from_json(text).map_err(err)?;
        Ok(Scenario { inner: Arc::new(inner) })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let inner = CoreScenario::load(path).map_err(err)?;
        Ok(Scenario { inner: Arc::new(inner) })
    }

    /// The six-office, three-robot example with one camera on a→b.
    #[staticmethod]
    fn running_example() -> PyResult<Self> {
        let inner = CoreScenario::compile(Layout::running_example().to_scenario("running-example")).map_err(err)?;
        Ok(Scenario { inner: Arc::new(inner) })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.file().name.clone()
    }

    #[getter]
    fn agents(&self) -> Vec<String> {
        self.inner.file().agents.clone()
    }

    #[getter]
    fn hash(&self) -> String {
        self.inner.hash().to_string()
    }

    fn to_json(&self) -> String {
        self.inner.file().to_json_pretty()
    }

    /// Scenario files are validated against this JSON Schema.
    #[staticmethod]
    fn json_schema() -> String {
        ScenarioFile::json_schema()
    }

    /// Simulate `steps` ticks and monitor them; returns the trace as JSON
    /// lines (same bytes as `normmon simulate`).
    #[pyo3(signature = (steps, seed=0, variant="approximate", initial="complete"))]
    fn simulate(&self, steps: usize, seed: u64, variant: &str, initial: &str) -> PyResult<String> {
        let cfg = MonitorConfig {
            variant: parse_variant(variant)?,
            initial: parse_initial(initial)?,
            ..MonitorConfig::new(Variant::Traditional)
        };
        let scn = &self.inner;
        let mut world = ChaCha8Rng::seed_from_u64(seed);
        let mut obs = ChaCha8Rng::seed_from_u64(seed);
        obs.set_stream(1);
        let log = simulate_world(scn, steps, &mut world, &mut obs).map_err(err)?;
        let mut m = CoreMonitor::new(Arc::clone(scn), cfg);
        let mut records = Vec::new();
        for t in &log.ticks {
            records.extend(m.advance(&t.observed).map_err(err)?);
        }
        records.extend(m.finish().map_err(err)?);
        let mut trace = Trace::new(scn, Some(seed), cfg);
        for rec in &records {
            let executed = &log.ticks[rec.tick as usize].executed;
            trace.ticks.push(TraceTick::new(scn, rec, Some(executed)));
        }
        Ok(trace.to_jsonl())
    }

    fn __repr__(&self) -> String {
        format!("Scenario({:?}, agents={})", self.inner.file().name, self.inner.file().agents.len())
    }
}

/// Online monitor: feed observed joint actions tick by tick.
#[pyclass]
struct Monitor {
    inner: CoreMonitor,
}

impl Monitor {
    fn record<'py>(&self, py: Python<'py>, rec: Option<TickRecord>) -> PyResult<Option<Bound<'py, PyAny>>> {
        rec.map(|r| to_py(py, &TraceTick::new(self.inner.scenario(), &r, None))).transpose()
    }
}

#[pymethods]
impl Monitor {
    #[new]
    #[pyo3(signature = (scenario, variant="approximate", initial="complete"))]
    fn new(scenario: &Scenario, variant: &str, initial: &str) -> PyResult<Self> {
        let cfg = MonitorConfig {
            variant: parse_variant(variant)?,
            initial: parse_initial(initial)?,
            ..MonitorConfig::new(Variant::Traditional)
        };
        Ok(Monitor {
            inner: CoreMonitor::new(Arc::clone(&scenario.inner), cfg),
        })
    }

    /// Observe one tick's actions, e.g. `["move(r1,a,b)"]`. Returns the
    /// record for the previous tick (None on the first call).
    fn advance<'py>(&mut self, py: Python<'py>, observed: Vec<String>) -> PyResult<Option<Bound<'py, PyAny>>> {
        let scn = Arc::clone(self.inner.scenario());
        let act = observed
            .iter()
            .map(|s| scn.parse_action(s))
            .collect::<Result<ConcurrentAction, _>>()
            .map_err(err)?;
        let rec = self.inner.advance(&act).map_err(err)?;
        self.record(py, rec)
    }

    /// Close the run and return the last tick's record.
    fn finish<'py>(&mut self, py: Python<'py>) -> PyResult<Option<Bound<'py, PyAny>>> {
        let rec = self.inner.finish().map_err(err)?;
        self.record(py, rec)
    }

    #[getter]
    fn tick(&self) -> u64 {
        self.inner.tick()
    }

    /// The current partial state, as literal strings.
    #[getter]
    fn state(&self) -> Vec<String> {
        let scn = self.inner.scenario();
        self.inner.state().iter().map(|l| scn.describe(l)).collect()
    }
}

/// One row of the office-robot camera sweep: pooled violation detection
/// rates in percent, keyed like the CSV columns.
#[pyfunction]
#[pyo3(signature = (camera_ratio, reps=100, steps=100, seed=0))]
fn run_case_study<'py>(py: Python<'py>, camera_ratio: f64, reps: usize, steps: usize, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let cfg = CaseStudyConfig {
        cameras: CameraChoice::Ratio(camera_ratio),
        reps,
        steps,
        seed,
        ..CaseStudyConfig::default()
    };
    let row = py
        .detach(|| case_study_row(&cfg, &Variant::ALL, MonitorSettings::default()))
        .map_err(err)?;
    let rate = |v| row.rates(v, Metric::Violations, Aggregation::Pooled).unwrap_or((0.0, 0.0));
    let (t, td) = rate(Variant::Traditional);
    let (f, fd) = rate(Variant::Full);
    let (ai, ad) = rate(Variant::Approximate);
    let out = PyDict::new(py);
    out.set_item("ratio", camera_ratio)?;
    out.set_item("traditional", t + td)?;
    out.set_item("full", f + fd)?;
    out.set_item("approx_identified", ai)?;
    out.set_item("approx_discovered", ad)?;
    out.set_item("sound", row.is_sound())?;
    Ok(out)
}

#[pymodule]
fn normmon(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Scenario>()?;
    m.add_class::<Monitor>()?;
    m.add_function(wrap_pyfunction!(run_case_study, m)?)?;
    m.add("NormmonError", m.py().get_type::<NormmonError>())?;
    Ok(())
}

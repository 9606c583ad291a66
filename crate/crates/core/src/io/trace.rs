//! JSON-lines run traces.
//!
//! The first line is a header naming the scenario (by content hash), the
//! seed and the monitor variant; every further line is one tick. Actions and
//! literals are stored in their textual form so traces stay readable and
//! diffable.

use std::io::{BufRead, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::ConcurrentAction;
use crate::monitor::{InitialKnowledge, Monitor, MonitorConfig, MonitorError, TickRecord, Variant};
use crate::norm::{Deontic, Mode, Status, Verdict};
use crate::reconstruct::{Diagnostics, FullConfig};
use crate::scenario::{Scenario, ScenarioError};

pub const TRACE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("trace line {line}: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("trace io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("trace has no header line")]
    MissingHeader,
    #[error("trace line {line}: unexpected header")]
    UnexpectedHeader { line: usize },
    #[error("unsupported trace format version {0}")]
    Version(u32),
    #[error("trace was recorded for scenario {trace}, but the scenario hashes to {scenario}")]
    HashMismatch { trace: String, scenario: String },
    #[error("trace tick {tick}: {source}")]
    BadAction {
        tick: u64,
        #[source]
        source: ScenarioError,
    },
    #[error("trace tick numbering broken at line {line}")]
    TickOrder { line: usize },
    #[error(transparent)]
    Monitor(#[from] MonitorError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceHeader {
    pub format_version: u32,
    pub scenario: String,
    pub scenario_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub variant: Variant,
    pub initial_knowledge: InitialKnowledge,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictRecord {
    pub norm: String,
    pub deontic: Deontic,
    /// The instantiated norm action.
    pub action: String,
    pub status: Status,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub culprit: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl VerdictRecord {
    pub fn new(scn: &Scenario, v: &Verdict) -> Self {
        VerdictRecord {
            norm: scn.norms[v.instance.norm].id.clone(),
            deontic: v.instance.deontic,
            action: scn.describe(&v.instance.action),
            status: v.status,
            mode: v.mode,
            culprit: v.culprit.map(|c| scn.symbols.name(c).to_string()),
            witness: v.witness.map(|w| scn.describe_action(w)),
        }
    }

    pub fn deontic_symbol(&self) -> &'static str {
        self.deontic.symbol()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceTick {
    pub tick: u64,
    /// Ground truth, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub executed: Option<Vec<String>>,
    pub observed: Vec<String>,
    pub reconstructed: Vec<String>,
    pub discovered: Vec<String>,
    pub verdicts: Vec<VerdictRecord>,
    pub state: Vec<String>,
    #[serde(default)]
    pub diagnostics: Diagnostics,
}

impl TraceTick {
    pub fn new(scn: &Scenario, rec: &TickRecord, executed: Option<&ConcurrentAction>) -> Self {
        let acts = |ids: &mut dyn Iterator<Item = crate::action::ActionId>| -> Vec<String> {
            ids.map(|a| scn.describe_action(a)).collect()
        };
        TraceTick {
            tick: rec.tick,
            executed: executed.map(|e| acts(&mut e.iter().copied())),
            observed: acts(&mut rec.observed.iter().copied()),
            reconstructed: acts(&mut rec.reconstructed.iter().copied()),
            discovered: acts(&mut rec.discovered.iter().map(|d| d.action)),
            verdicts: rec.verdicts.iter().map(|v| VerdictRecord::new(scn, v)).collect(),
            state: rec.state.iter().map(|l| scn.describe(l)).collect(),
            diagnostics: rec.diagnostics.clone(),
        }
    }

    /// Human-readable differences against `other` (empty when they agree on
    /// everything the monitor derives).
    pub fn diff(&self, other: &TraceTick) -> Vec<String> {
        let mut out = Vec::new();
        let mut field = |name: &str, a: &dyn std::fmt::Debug, b: &dyn std::fmt::Debug, same: bool| {
            if !same {
                out.push(format!("{name}: recorded {a:?}, replayed {b:?}"));
            }
        };
        field("observed", &self.observed, &other.observed, self.observed == other.observed);
        field(
            "reconstructed",
            &self.reconstructed,
            &other.reconstructed,
            self.reconstructed == other.reconstructed,
        );
        field("discovered", &self.discovered, &other.discovered, self.discovered == other.discovered);
        field("state", &self.state, &other.state, self.state == other.state);
        let mut a = self.verdicts.clone();
        let mut b = other.verdicts.clone();
        a.sort();
        b.sort();
        for v in a.iter().filter(|v| !b.contains(v)) {
            out.push(format!("verdict only in recording: {}", serde_json::to_string(v).unwrap_or_default()));
        }
        for v in b.iter().filter(|v| !a.contains(v)) {
            out.push(format!("verdict only in replay: {}", serde_json::to_string(v).unwrap_or_default()));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum Line {
    Header(TraceHeader),
    Tick(TraceTick),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub header: TraceHeader,
    pub ticks: Vec<TraceTick>,
}

impl Trace {
    pub fn new(scn: &Scenario, seed: Option<u64>, cfg: MonitorConfig) -> Self {
        Trace {
            header: TraceHeader {
                format_version: TRACE_FORMAT_VERSION,
                scenario: scn.name.clone(),
                scenario_hash: scn.hash().to_string(),
                seed,
                variant: cfg.variant,
                initial_knowledge: cfg.initial,
            },
            ticks: Vec::new(),
        }
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<(), TraceError> {
        let line = |l: &Line| serde_json::to_string(l).expect("trace lines serialize");
        writeln!(w, "{}", line(&Line::Header(self.header.clone())))?;
        for t in &self.ticks {
            writeln!(w, "{}", line(&Line::Tick(t.clone())))?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 json")
    }

    pub fn read_from(r: impl BufRead) -> Result<Self, TraceError> {
        let mut header = None;
        let mut ticks: Vec<TraceTick> = Vec::new();
        for (k, line) in r.lines().enumerate() {
            let line = line?;
            let n = k + 1;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<Line>(&line).map_err(|source| TraceError::Json { line: n, source })? {
                Line::Header(h) => {
                    if header.is_some() || !ticks.is_empty() {
                        return Err(TraceError::UnexpectedHeader { line: n });
                    }
                    if h.format_version != TRACE_FORMAT_VERSION {
                        return Err(TraceError::Version(h.format_version));
                    }
                    header = Some(h);
                }
                Line::Tick(t) => {
                    if header.is_none() {
                        return Err(TraceError::MissingHeader);
                    }
                    if t.tick != ticks.len() as u64 {
                        return Err(TraceError::TickOrder { line: n });
                    }
                    ticks.push(t);
                }
            }
        }
        Ok(Trace {
            header: header.ok_or(TraceError::MissingHeader)?,
            ticks,
        })
    }

    pub fn from_jsonl(text: &str) -> Result<Self, TraceError> {
        Self::read_from(text.as_bytes())
    }
}

/// Outcome of re-running a trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayReport {
    pub replayed: Trace,
    /// (tick, differences) for every tick that disagrees.
    pub mismatches: Vec<(u64, Vec<String>)>,
}

/// Re-runs the monitor described by the trace header on the recorded
/// observations and compares tick by tick.
pub fn replay(scn: Arc<Scenario>, trace: &Trace, full: FullConfig) -> Result<ReplayReport, TraceError> {
    if trace.header.scenario_hash != scn.hash() {
        return Err(TraceError::HashMismatch {
            trace: trace.header.scenario_hash.clone(),
            scenario: scn.hash().to_string(),
        });
    }
    let cfg = MonitorConfig {
        variant: trace.header.variant,
        initial: trace.header.initial_knowledge,
        full,
    };
    let mut observations = Vec::with_capacity(trace.ticks.len());
    let mut executed = Vec::with_capacity(trace.ticks.len());
    for t in &trace.ticks {
        let parse = |xs: &[String]| -> Result<ConcurrentAction, TraceError> {
            xs.iter()
                .map(|s| scn.parse_action(s).map_err(|source| TraceError::BadAction { tick: t.tick, source }))
                .collect()
        };
        observations.push(parse(&t.observed)?);
        executed.push(t.executed.as_deref().map(parse).transpose()?);
    }

    let mut m = Monitor::new(Arc::clone(&scn), cfg);
    let mut replayed = Trace::new(&scn, trace.header.seed, cfg);
    let push = |rec: TickRecord, replayed: &mut Trace| {
        let e = executed[rec.tick as usize].as_ref();
        replayed.ticks.push(TraceTick::new(&scn, &rec, e));
    };
    for obs in &observations {
        if let Some(rec) = m.advance(obs)? {
            push(rec, &mut replayed);
        }
    }
    if let Some(rec) = m.finish()? {
        push(rec, &mut replayed);
    }

    let mut mismatches = Vec::new();
    for (a, b) in trace.ticks.iter().zip(&replayed.ticks) {
        let d = a.diff(b);
        if !d.is_empty() {
            mismatches.push((a.tick, d));
        }
    }
    Ok(ReplayReport { replayed, mismatches })
}

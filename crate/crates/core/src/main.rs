//! `normmon` command-line interface.
//!
//! Exit codes: 0 success, 1 replay mismatch or failed run, 2 usage or
//! validation error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use normmon_core::action::ConcurrentAction;
use normmon_core::io::report::{KeyKind, SweepTable};
use normmon_core::io::trace::{replay, Trace, TraceTick};
use normmon_core::monitor::{InitialKnowledge, Monitor, MonitorConfig, Variant};
use normmon_core::reconstruct::{FullConfig, DEFAULT_SOLUTION_CAP};
use normmon_core::sim::case_study::{CameraChoice, CaseStudyConfig, CorridorChoice};
use normmon_core::sim::experiment::{
    case_study_row, random_row, Aggregation, Metric, MonitorSettings, RowResult,
};
use normmon_core::sim::random::{ObsChoice, RandomConfig};
use normmon_core::sim::world::{scripted, simulate};
use normmon_core::{Error, Scenario};

#[derive(Parser)]
#[command(name = "normmon", version, about = "Norm monitoring when only some actions are observed")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Office-robot experiments (camera or corridor sweeps).
    CaseStudy(CaseStudyArgs),
    /// Randomly generated normative systems.
    Random(RandomArgs),
    /// Run one scenario and write a trace.
    Simulate(SimulateArgs),
    /// Re-run a trace and compare verdict for verdict.
    Replay(ReplayArgs),
    /// Print the JSON Schema for scenario files.
    Schema,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Traditional,
    Approximate,
    Full,
    All,
}

impl VariantArg {
    fn variants(self) -> Vec<Variant> {
        match self {
            VariantArg::Traditional => vec![Variant::Traditional],
            VariantArg::Approximate => vec![Variant::Approximate],
            VariantArg::Full => vec![Variant::Full],
            VariantArg::All => Variant::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InitialArg {
    Complete,
    Empty,
}

impl From<InitialArg> for InitialKnowledge {
    fn from(a: InitialArg) -> Self {
        match a {
            InitialArg::Complete => InitialKnowledge::Complete,
            InitialArg::Empty => InitialKnowledge::Empty,
        }
    }
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[arg(long, value_enum, default_value_t = VariantArg::All)]
    variant: VariantArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for CSV and text tables.
    #[arg(long, env = "NORMMON_OUT", default_value = "results")]
    out: PathBuf,
    /// Run the full variant beyond the size guard.
    #[arg(long)]
    force: bool,
    #[arg(long, value_enum, default_value_t = InitialArg::Complete)]
    initial: InitialArg,
    /// Complete assignments examined per tick by full reconstruction.
    #[arg(long, default_value_t = DEFAULT_SOLUTION_CAP)]
    solution_cap: u64,
}

impl Common {
    fn settings(&self) -> MonitorSettings {
        MonitorSettings {
            initial: self.initial.into(),
            full: FullConfig {
                cap: self.solution_cap,
                decompose: true,
            },
        }
    }

    fn check(&self, within_guard: bool) -> Result<Vec<Variant>, Error> {
        if self.reps == 0 {
            return Err(Error::Usage("--reps must be at least 1".into()));
        }
        let variants = self.variant.variants();
        if variants.contains(&Variant::Full) && !within_guard && !self.force {
            return Err(Error::Usage(
                "the full variant is exponential; these sizes exceed the guard (pass --force to run anyway)".into(),
            ));
        }
        Ok(variants)
    }
}

#[derive(Args)]
struct CaseStudyArgs {
    #[arg(long, default_value_t = 3)]
    offices_min: usize,
    #[arg(long, default_value_t = 10)]
    offices_max: usize,
    #[arg(long, default_value_t = 2)]
    robots_min: usize,
    #[arg(long, default_value_t = 5)]
    robots_max: usize,
    /// Fraction of corridors with a camera (single row).
    #[arg(long, conflicts_with_all = ["sweep", "corridor_sweep"])]
    camera_ratio: Option<f64>,
    /// Sweep the camera ratio over 0, 0.2, …, 1 (the default).
    #[arg(long)]
    sweep: bool,
    /// Sweep the corridor ratio over 0, 0.2, …, 1 with a random number of
    /// cameras.
    #[arg(long, conflicts_with = "sweep")]
    corridor_sweep: bool,
    #[command(flatten)]
    common: Common,
}

/// Offices and robots up to which the full variant runs without --force.
const CASE_STUDY_GUARD: (usize, usize) = (10, 5);
/// Agents and actions up to which the full variant runs without --force.
const RANDOM_GUARD: (usize, usize) = (5, 10);

#[derive(Args)]
struct RandomArgs {
    #[arg(long, default_value_t = 1)]
    agents_min: usize,
    #[arg(long, default_value_t = 5)]
    agents_max: usize,
    /// Comma-separated action counts: one row per count, with a random
    /// observation probability per repetition.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["obs_prob", "sweep"])]
    actions: Option<Vec<usize>>,
    #[arg(long, default_value_t = 1)]
    actions_min: usize,
    #[arg(long, default_value_t = 10)]
    actions_max: usize,
    /// Observation probability (single row).
    #[arg(long, conflicts_with = "sweep")]
    obs_prob: Option<f64>,
    /// Sweep the observation probability over 0, 0.2, …, 1 (the default).
    #[arg(long)]
    sweep: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = VariantArg::Approximate)]
    variant: VariantArg,
    #[arg(long, value_enum, default_value_t = InitialArg::Complete)]
    initial: InitialArg,
    /// Scripted joint action for the next tick, members separated by `;`
    /// (repeat once per tick; replaces the random agents).
    #[arg(long)]
    executed: Vec<String>,
    /// Trace file to write (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReplayArgs {
    #[arg(long)]
    trace: PathBuf,
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Command::CaseStudy(a) => cmd_case_study(a),
        Command::Random(a) => cmd_random(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Replay(a) => cmd_replay(a),
        Command::Schema => {
            print!("{}", normmon_core::io::ScenarioFile::json_schema());
            Ok(ExitCode::SUCCESS)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Monitor(_) | Error::World(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

const SWEEP: [f64; 6] = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];

fn write_tables(out: &Path, stem: &str, title: &str, key: KeyKind, rows: &[(f64, RowResult)], metric: Metric) -> Result<(), Error> {
    fs::create_dir_all(out)?;
    for (agg, suffix, label) in [
        (Aggregation::Pooled, "", "pooled counts"),
        (Aggregation::PerRunMean, "_per_run", "per-run means"),
    ] {
        let table = SweepTable {
            title: format!("{title} ({label})"),
            key,
            rows: rows.iter().map(|(k, r)| r.sweep_row(*k, metric, agg)).collect(),
        };
        fs::write(out.join(format!("{stem}{suffix}.csv")), table.to_csv())?;
        let text = table.to_text();
        fs::write(out.join(format!("{stem}{suffix}.txt")), &text)?;
        println!("{text}");
    }
    Ok(())
}

fn report_diagnostics(rows: &[(f64, RowResult)]) {
    for (k, r) in rows {
        let capped: u64 = r.summaries.values().map(|s| s.pooled.capped_ticks).sum();
        let none: u64 = r.summaries.values().map(|s| s.pooled.no_solution_ticks).sum();
        let sound = r.is_sound();
        eprintln!(
            "row {k:.2}: runs={} max_instantiations={} capped_ticks={capped} no_solution_ticks={none} sound={sound}",
            r.runs.len(),
            r.max_instantiations
        );
    }
}

fn cmd_case_study(a: CaseStudyArgs) -> Result<ExitCode, Error> {
    let within = a.offices_max <= CASE_STUDY_GUARD.0 && a.robots_max <= CASE_STUDY_GUARD.1;
    let variants = a.common.check(within)?;
    let base = CaseStudyConfig {
        offices: (a.offices_min, a.offices_max),
        robots: (a.robots_min, a.robots_max),
        corridors: CorridorChoice::Random,
        cameras: CameraChoice::Random,
        steps: a.common.steps,
        reps: a.common.reps,
        seed: a.common.seed,
    };
    let (stem, title, configs): (&str, &str, Vec<(f64, CaseStudyConfig)>) = if a.corridor_sweep {
        let cfgs = SWEEP
            .iter()
            .map(|&x| (x, CaseStudyConfig { corridors: CorridorChoice::Ratio(x), ..base.clone() }))
            .collect();
        ("case_study_instantiations", "Violations detected, corridor-ratio sweep", cfgs)
    } else {
        let ratios: Vec<f64> = match a.camera_ratio {
            Some(r) => vec![r],
            None => SWEEP.to_vec(),
        };
        let cfgs = ratios
            .into_iter()
            .map(|x| (x, CaseStudyConfig { cameras: CameraChoice::Ratio(x), ..base.clone() }))
            .collect();
        ("case_study_observability", "Violations detected, camera-ratio sweep", cfgs)
    };
    for (_, c) in &configs {
        c.validate().map_err(|e| Error::Usage(e.to_string()))?;
    }
    let mut rows = Vec::new();
    for (k, c) in configs {
        rows.push((k, case_study_row(&c, &variants, a.common.settings())?));
    }
    report_diagnostics(&rows);
    write_tables(&a.common.out, stem, title, KeyKind::Ratio, &rows, Metric::Violations)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_random(a: RandomArgs) -> Result<ExitCode, Error> {
    let max_actions = a.actions.as_ref().map_or(a.actions_max, |xs| xs.iter().copied().max().unwrap_or(0));
    let within = a.agents_max <= RANDOM_GUARD.0 && max_actions <= RANDOM_GUARD.1;
    let variants = a.common.check(within)?;
    let base = RandomConfig {
        agents: (a.agents_min, a.agents_max),
        actions: (a.actions_min, a.actions_max),
        observation: ObsChoice::Random,
        steps: a.common.steps,
        reps: a.common.reps,
        seed: a.common.seed,
    };
    let (stem, key, configs): (&str, KeyKind, Vec<(f64, RandomConfig)>) = if let Some(list) = &a.actions {
        if list.is_empty() {
            return Err(Error::Usage("--actions needs at least one count".into()));
        }
        let cfgs = list
            .iter()
            .map(|&n| (n as f64, RandomConfig { actions: (n, n), ..base.clone() }))
            .collect();
        ("random_actions", KeyKind::Actions, cfgs)
    } else {
        let probs: Vec<f64> = match a.obs_prob {
            Some(p) => vec![p],
            None => SWEEP.to_vec(),
        };
        let cfgs = probs
            .into_iter()
            .map(|p| (p, RandomConfig { observation: ObsChoice::Fixed(p), ..base.clone() }))
            .collect();
        ("random_observability", KeyKind::Ratio, cfgs)
    };
    for (_, c) in &configs {
        c.validate().map_err(|e| Error::Usage(e.to_string()))?;
    }
    let mut rows = Vec::new();
    for (k, c) in configs {
        rows.push((k, random_row(&c, &variants, a.common.settings())?));
    }
    report_diagnostics(&rows);
    let out = &a.common.out;
    write_tables(out, &format!("{stem}_fulfilments"), "Fulfilments detected", key, &rows, Metric::Fulfilments)?;
    write_tables(out, &format!("{stem}_violations"), "Violations detected", key, &rows, Metric::Violations)?;
    Ok(ExitCode::SUCCESS)
}

fn single_variant(v: VariantArg) -> Result<Variant, Error> {
    match v {
        VariantArg::All => Err(Error::Usage("simulate records one variant; pick traditional, approximate or full".into())),
        other => Ok(other.variants()[0]),
    }
}

fn cmd_simulate(a: SimulateArgs) -> Result<ExitCode, Error> {
    let scn = Arc::new(Scenario::load(&a.scenario)?);
    let variant = single_variant(a.variant)?;
    let mut obs_rng = ChaCha8Rng::seed_from_u64(a.seed);
    obs_rng.set_stream(1);
    let log = if a.executed.is_empty() {
        let mut world_rng = ChaCha8Rng::seed_from_u64(a.seed);
        simulate(&scn, a.steps, &mut world_rng, &mut obs_rng)?
    } else {
        let script = a
            .executed
            .iter()
            .map(|tick| {
                tick.split(';')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| scn.parse_action(s))
                    .collect::<Result<ConcurrentAction, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        scripted(&scn, &script, &mut obs_rng)?
    };
    let cfg = MonitorConfig {
        variant,
        initial: a.initial.into(),
        full: FullConfig::default(),
    };
    let mut trace = Trace::new(&scn, Some(a.seed), cfg);
    let mut m = Monitor::new(Arc::clone(&scn), cfg);
    let mut records = Vec::new();
    for t in &log.ticks {
        records.extend(m.advance(&t.observed)?);
    }
    records.extend(m.finish()?);
    for rec in &records {
        let executed = &log.ticks[rec.tick as usize].executed;
        trace.ticks.push(TraceTick::new(&scn, rec, Some(executed)));
    }
    match &a.out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(path, trace.to_jsonl())?;
        }
        None => print!("{}", trace.to_jsonl()),
    }
    Ok(ExitCode::SUCCESS)
}

fn braces(xs: &[String]) -> String {
    format!("{{{}}}", xs.join(", "))
}

fn cmd_replay(a: ReplayArgs) -> Result<ExitCode, Error> {
    let scn = Arc::new(Scenario::load(&a.scenario)?);
    let text = fs::read_to_string(&a.trace)?;
    let trace = Trace::from_jsonl(&text)?;
    let report = replay(Arc::clone(&scn), &trace, FullConfig::default())?;
    if !a.quiet {
        for t in &report.replayed.ticks {
            println!(
                "tick {}: observed={} R={} D={}",
                t.tick,
                braces(&t.observed),
                braces(&t.reconstructed),
                braces(&t.discovered)
            );
            for v in &t.verdicts {
                println!(
                    "  {} {} {} {:?}/{:?}{}",
                    v.norm,
                    v.deontic_symbol(),
                    v.action,
                    v.status,
                    v.mode,
                    v.culprit.as_ref().map(|c| format!(" by {c}")).unwrap_or_default()
                );
            }
        }
    }
    let mut count = report.mismatches.len();
    if trace.ticks.len() != report.replayed.ticks.len() {
        println!(
            "tick count differs: recorded {}, replayed {}",
            trace.ticks.len(),
            report.replayed.ticks.len()
        );
        count += 1;
    }
    for (tick, diffs) in &report.mismatches {
        println!("mismatch at tick {tick}:");
        for d in diffs {
            println!("  {d}");
        }
    }
    println!("{count} mismatches");
    Ok(if count == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

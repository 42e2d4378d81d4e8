//! Command-line driver over the simulation and benchmark library.
//!
//! Every successful run leaves a resolved-config JSON next to its outputs:
//! all defaults materialized, every seed spelled out, enough to reproduce
//! the files exactly. Exit codes: 0 success, 1 configuration error,
//! 2 model error, 3 numerical failure.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use reservoirflux::bench::{self, AccuracySummary, EnsembleConfig};
use reservoirflux::bigg;
use reservoirflux::dfba::{DfbaConfig, DfbaError, ExchangeIds, GrowthSimulator, KineticParams};
use reservoirflux::experiment::{
    self, accuracy_csv, baseline_csv, failures_json, fmt_sig, groups_json, pareto_json, ranks_csv,
    BenchmarkReport, ModelReport, PrefixRow, StudyConfig, StudyError,
};
use reservoirflux::fba::{self, FbaError};
use reservoirflux::lp::SolverOptions;
use reservoirflux::model::MetabolicModel;
use reservoirflux::ranks::{self, RankConfig, RankReport};
use reservoirflux::ridge;

#[derive(Debug)]
enum Failure {
    Config(String),
    Model(String),
    Numerical(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Model(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "config: {m}"),
            Failure::Model(m) => write!(f, "model: {m}"),
            Failure::Numerical(m) => write!(f, "numerical: {m}"),
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn fba_failure(e: &FbaError) -> Failure {
    match e {
        FbaError::UnknownReaction(_) | FbaError::Model(_) => Failure::Model(e.to_string()),
        _ => Failure::Numerical(e.to_string()),
    }
}

fn dfba_failure(e: &DfbaError) -> Failure {
    match e {
        DfbaError::Fba(f) => fba_failure(f),
        DfbaError::GridMismatch { .. } | DfbaError::InvalidState(_) => {
            Failure::Config(e.to_string())
        }
        DfbaError::Solver { .. } => Failure::Numerical(e.to_string()),
    }
}

fn study_failure(e: StudyError) -> Failure {
    match e {
        StudyError::Config(m) => Failure::Config(m),
        StudyError::Model { .. } => Failure::Model(e.to_string()),
        StudyError::Numerical { .. } => Failure::Numerical(e.to_string()),
    }
}

#[derive(Parser)]
#[command(
    name = "reservoirflux",
    version,
    about = "Growth-curve simulation and reservoir-readout benchmarks for metabolic models"
)]
struct Cli {
    /// Worker threads; falls back to RESERVOIRFLUX_JOBS, then all cores
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one batch growth curve and write it as CSV
    Simulate(SimulateArgs),
    /// Screen single-gene deletions and write growth ratios as CSV
    Screen(ScreenArgs),
    /// Sweep readout accuracy over curve prefixes for one model
    Bench(BenchArgs),
    /// Sweep kernel and generalisation ranks over curve prefixes
    Ranks(RanksArgs),
    /// Run a full study from a JSON config into a report directory
    Study(StudyArgs),
    /// Recompute the Pareto front from a study's accuracy.csv
    Pareto(ParetoArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Model file in BiGG JSON interchange format
    #[arg(long)]
    model: PathBuf,
    /// Objective reaction id when the file does not declare one
    #[arg(long)]
    objective: Option<String>,
    /// JSON file with kinetic parameter overrides (partial is fine)
    #[arg(long)]
    params: Option<PathBuf>,
}

impl ModelArgs {
    fn load(&self) -> Result<MetabolicModel> {
        bigg::load_model(&self.model, self.objective.as_deref())
            .map_err(|e| Failure::Model(format!("{}: {e}", self.model.display())))
    }

    fn kinetics(&self) -> Result<KineticParams> {
        let Some(path) = &self.params else {
            return Ok(KineticParams::default());
        };
        let json = std::fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&json)
            .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
    }

    fn id_or(&self, explicit: &Option<String>) -> String {
        explicit.clone().unwrap_or_else(|| {
            self.model
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "model".into())
        })
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Initial glucose pool, mM
    #[arg(long)]
    glucose: f64,
    /// Initial xylose pool, mM
    #[arg(long)]
    xylose: f64,
    /// Initial biomass, gDW/L
    #[arg(long, default_value_t = 0.01)]
    b0: f64,
    #[arg(long, default_value_t = 0.1)]
    dt: f64,
    #[arg(long, default_value_t = 20.0)]
    duration: f64,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ScreenArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Glucose pool defining the screen medium, mM
    #[arg(long, default_value_t = 10.0)]
    glucose: f64,
    /// Xylose pool defining the screen medium, mM
    #[arg(long, default_value_t = 10.0)]
    xylose: f64,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
    /// Value for the model column; defaults to the model file stem
    #[arg(long)]
    id: Option<String>,
    #[arg(long, default_value_t = 0.01)]
    b0: f64,
    #[arg(long, default_value_t = 0.1)]
    dt: f64,
    #[arg(long, default_value_t = 20.0)]
    duration: f64,
    /// Comma-separated prefix lengths; every step when omitted
    #[arg(long, value_delimiter = ',')]
    prefixes: Option<Vec<usize>>,
    #[arg(long, default_value_t = 20)]
    n_templates: usize,
    #[arg(long, default_value_t = 25)]
    n_per_template: usize,
    #[arg(long, default_value_t = 20)]
    n_train_per_template: usize,
    #[arg(long, default_value_t = 0.2)]
    noise_std: f64,
    #[arg(long, default_value_t = 100)]
    n_tasks: usize,
    #[arg(long, default_value_t = 0)]
    seed_ensemble: u64,
    #[arg(long, default_value_t = 1)]
    seed_tasks: u64,
    /// Score the raw-input readout instead of any curve prefix
    #[arg(long)]
    baseline: bool,
}

#[derive(Args)]
struct RanksArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
    /// Value for the model column; defaults to the model file stem
    #[arg(long)]
    id: Option<String>,
    #[arg(long, default_value_t = 0.01)]
    b0: f64,
    #[arg(long, default_value_t = 0.1)]
    dt: f64,
    #[arg(long, default_value_t = 20.0)]
    duration: f64,
    /// Comma-separated prefix lengths; every step when omitted
    #[arg(long, value_delimiter = ',')]
    prefixes: Option<Vec<usize>>,
    #[arg(long, default_value_t = 100)]
    n_kernel_templates: usize,
    #[arg(long, default_value_t = 5)]
    n_gen_templates: usize,
    #[arg(long, default_value_t = 20)]
    n_gen_variants: usize,
    #[arg(long, default_value_t = 0.2)]
    noise_std: f64,
    #[arg(long, default_value_t = 1e-6)]
    sv_rel_tol: f64,
    #[arg(long, default_value_t = 2)]
    seed_kernel: u64,
    #[arg(long, default_value_t = 3)]
    seed_generalisation: u64,
}

#[derive(Args)]
struct StudyArgs {
    /// Study config, one JSON document
    #[arg(long)]
    config: PathBuf,
    /// Report directory; overrides the config's output_dir
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run the deletion-mutant panel for this model id instead of the
    /// species panel
    #[arg(long)]
    mutants: Option<String>,
}

#[derive(Args)]
struct ParetoArgs {
    /// Study report directory containing accuracy.csv
    #[arg(long)]
    report: PathBuf,
    #[arg(long, default_value_t = 0.9)]
    threshold: f64,
    /// Output JSON path
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let kind = e.kind();
            let _ = e.print();
            return match kind {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    init_jobs(cli.jobs)?;
    match cli.command {
        Command::Simulate(a) => run_simulate(a),
        Command::Screen(a) => run_screen(a),
        Command::Bench(a) => run_bench(a),
        Command::Ranks(a) => run_ranks(a),
        Command::Study(a) => run_study(a),
        Command::Pareto(a) => run_pareto(a),
    }
}

fn init_jobs(flag: Option<usize>) -> Result<()> {
    let jobs = match flag {
        Some(n) => Some(n),
        None => match std::env::var("RESERVOIRFLUX_JOBS") {
            Ok(s) => Some(s.trim().parse::<usize>().map_err(|_| {
                Failure::Config(format!("RESERVOIRFLUX_JOBS: cannot parse {s:?}"))
            })?),
            Err(_) => None,
        },
    };
    let Some(n) = jobs else { return Ok(()) };
    if n == 0 {
        return Err(Failure::Config("--jobs must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Config(e.to_string()))
}

fn check_grid(dt: f64, duration: f64) -> Result<usize> {
    if !(dt > 0.0 && duration > 0.0) {
        return Err(Failure::Config("dt and duration must be positive".into()));
    }
    let steps = duration / dt;
    if (steps - steps.round()).abs() > 1e-9 || steps.round() < 1.0 {
        return Err(Failure::Config(format!(
            "duration {duration} is not a whole number of {dt}-h steps"
        )));
    }
    Ok(steps.round() as usize)
}

fn resolve_prefixes(opt: &Option<Vec<usize>>, n_steps: usize) -> Result<Vec<usize>> {
    let mut p = opt.clone().unwrap_or_else(|| (1..=n_steps).collect());
    p.sort_unstable();
    p.dedup();
    if p.is_empty() {
        return Err(Failure::Config("prefix list is empty".into()));
    }
    if p[0] < 1 || p[p.len() - 1] > n_steps {
        return Err(Failure::Config(format!(
            "prefixes must lie in 1..={n_steps}"
        )));
    }
    Ok(p)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::Config(format!("writing {}: {e}", path.display())))
}

/// `out.csv` gets its reproduction recipe at `out.resolved_config.json`.
fn write_sidecar(out: &Path, doc: &serde_json::Value) -> Result<()> {
    let mut s = serde_json::to_string_pretty(doc).expect("resolved config serializes");
    s.push('\n');
    write_file(&out.with_extension("resolved_config.json"), &s)
}

fn dfba_config(kinetics: KineticParams, dt: f64, duration: f64, b0: f64) -> DfbaConfig {
    DfbaConfig {
        kinetics,
        exchanges: ExchangeIds::default(),
        dt,
        duration,
        initial_biomass: b0,
        update: Default::default(),
        solver: SolverOptions::default(),
    }
}

fn run_simulate(a: SimulateArgs) -> Result<()> {
    check_grid(a.dt, a.duration)?;
    let kinetics = a.model.kinetics()?;
    let model = a.model.load()?;
    let cfg = dfba_config(kinetics, a.dt, a.duration, a.b0);
    let sim = GrowthSimulator::new(&model, cfg.clone()).map_err(|e| dfba_failure(&e))?;
    let traj = sim
        .simulate(a.glucose, a.xylose)
        .map_err(|e| dfba_failure(&e))?;

    let mut csv = String::from("time_h,biomass_gdw_per_l,glucose_mM,xylose_mM\n");
    for i in 0..traj.len() {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            fmt_sig(traj.time_h[i]),
            fmt_sig(traj.biomass[i]),
            fmt_sig(traj.glucose[i]),
            fmt_sig(traj.xylose[i])
        ));
    }
    write_file(&a.out, &csv)?;
    write_sidecar(
        &a.out,
        &json!({
            "command": "simulate",
            "model": a.model.model,
            "objective": a.model.objective,
            "glucose_mM": a.glucose,
            "xylose_mM": a.xylose,
            "b0_gdw_per_l": a.b0,
            "dt_h": a.dt,
            "duration_h": a.duration,
            "biomass_update": "euler",
            "kinetics": kinetics,
            "exchanges": cfg.exchanges,
        }),
    )
}

fn run_screen(a: ScreenArgs) -> Result<()> {
    let kinetics = a.model.kinetics()?;
    let model = a.model.load()?;
    let exchanges = ExchangeIds::default();
    let medium = experiment::screen_medium(&kinetics, (a.glucose, a.xylose), &model, &exchanges)
        .map_err(|e| fba_failure(&e))?;
    let screen = fba::screen_single_deletions(&model, &medium, &SolverOptions::default())
        .map_err(|e| fba_failure(&e))?;

    let mut csv = String::from("gene,growth_ratio,retained,group_id\n");
    for e in &screen.entries {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            e.gene,
            fmt_sig(e.growth_ratio),
            e.retained,
            e.group
        ));
    }
    write_file(&a.out, &csv)?;
    write_sidecar(
        &a.out,
        &json!({
            "command": "screen",
            "model": a.model.model,
            "objective": a.model.objective,
            "screen_input": [a.glucose, a.xylose],
            "kinetics": kinetics,
            "exchanges": exchanges,
            "wild_type_growth": screen.wild_type_growth,
        }),
    )
}

fn run_bench(a: BenchArgs) -> Result<()> {
    let n_steps = check_grid(a.dt, a.duration)?;
    if a.n_templates < 2 {
        return Err(Failure::Config(
            "binary tasks need at least two templates".into(),
        ));
    }
    if a.n_train_per_template == 0 || a.n_train_per_template >= a.n_per_template {
        return Err(Failure::Config(
            "the split needs both train and test samples per template".into(),
        ));
    }
    let kinetics = a.model.kinetics()?;
    let ens_cfg = EnsembleConfig {
        n_templates: a.n_templates,
        n_per_template: a.n_per_template,
        n_train_per_template: a.n_train_per_template,
        input_range: (0.0, 45.0),
        noise_std: a.noise_std,
        seed: a.seed_ensemble,
    };
    let ens = bench::draw_ensemble(&ens_cfg);
    let tasks = bench::draw_tasks(a.n_tasks, a.n_templates, a.seed_tasks);
    let alphas = ridge::default_alpha_grid();
    let id = a.model.id_or(&a.id);

    let resolved = json!({
        "command": "bench",
        "model": a.model.model,
        "objective": a.model.objective,
        "model_id": id,
        "b0_gdw_per_l": a.b0,
        "dt_h": a.dt,
        "duration_h": a.duration,
        "kinetics": kinetics,
        "n_templates": a.n_templates,
        "n_per_template": a.n_per_template,
        "n_train_per_template": a.n_train_per_template,
        "noise_std": a.noise_std,
        "n_tasks": a.n_tasks,
        "seeds": {"ensemble": a.seed_ensemble, "tasks": a.seed_tasks},
        "baseline": a.baseline,
        "alphas": alphas,
    });

    if a.baseline {
        let b = bench::baseline_accuracy(&ens, &tasks, &alphas);
        let csv = format!(
            "mean_accuracy,std_accuracy\n{},{}\n",
            fmt_sig(b.mean_accuracy),
            fmt_sig(b.std_accuracy)
        );
        write_file(&a.out, &csv)?;
        return write_sidecar(&a.out, &resolved);
    }

    let prefixes = resolve_prefixes(&a.prefixes, n_steps)?;
    let model = a.model.load()?;
    let sim = GrowthSimulator::new(&model, dfba_config(kinetics, a.dt, a.duration, a.b0))
        .map_err(|e| dfba_failure(&e))?;
    let bank = bench::simulate_ensemble(&sim, &ens).map_err(|e| dfba_failure(&e))?;

    let mut csv = String::from("model,T,mean_accuracy,std_accuracy\n");
    for &t in &prefixes {
        let acc = bench::accuracy_for_prefix(&bank, &tasks, t, &alphas);
        csv.push_str(&format!(
            "{},{},{},{}\n",
            id,
            t,
            fmt_sig(acc.mean_accuracy),
            fmt_sig(acc.std_accuracy)
        ));
    }
    write_file(&a.out, &csv)?;
    write_sidecar(&a.out, &resolved)
}

fn run_ranks(a: RanksArgs) -> Result<()> {
    let n_steps = check_grid(a.dt, a.duration)?;
    if !(a.sv_rel_tol > 0.0 && a.sv_rel_tol < 1.0) {
        return Err(Failure::Config("sv-rel-tol must lie in (0,1)".into()));
    }
    let prefixes = resolve_prefixes(&a.prefixes, n_steps)?;
    let kinetics = a.model.kinetics()?;
    let model = a.model.load()?;
    let sim = GrowthSimulator::new(&model, dfba_config(kinetics, a.dt, a.duration, a.b0))
        .map_err(|e| dfba_failure(&e))?;
    let rank_cfg = RankConfig {
        n_kernel_templates: a.n_kernel_templates,
        n_gen_templates: a.n_gen_templates,
        n_gen_variants: a.n_gen_variants,
        input_range: (0.0, 45.0),
        noise_std: a.noise_std,
        sv_rel_tol: a.sv_rel_tol,
        kernel_seed: a.seed_kernel,
        generalisation_seed: a.seed_generalisation,
    };
    let probes = ranks::simulate_probes(&sim, &rank_cfg).map_err(|e| dfba_failure(&e))?;
    let id = a.model.id_or(&a.id);

    let mut csv = String::from("model,T,kernel_rank,gen_rank,rank_diff\n");
    for &t in &prefixes {
        let r = ranks::ranks_at(&probes, t, rank_cfg.sv_rel_tol);
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            id, t, r.kernel_rank, r.generalisation_rank, r.rank_difference
        ));
    }
    write_file(&a.out, &csv)?;
    write_sidecar(
        &a.out,
        &json!({
            "command": "ranks",
            "model": a.model.model,
            "objective": a.model.objective,
            "model_id": id,
            "b0_gdw_per_l": a.b0,
            "dt_h": a.dt,
            "duration_h": a.duration,
            "kinetics": kinetics,
            "n_kernel_templates": a.n_kernel_templates,
            "n_gen_templates": a.n_gen_templates,
            "n_gen_variants": a.n_gen_variants,
            "noise_std": a.noise_std,
            "sv_rel_tol": a.sv_rel_tol,
            "seeds": {"kernel": a.seed_kernel, "generalisation": a.seed_generalisation},
        }),
    )
}

fn run_study(a: StudyArgs) -> Result<()> {
    let cfg = StudyConfig::load(&a.config).map_err(study_failure)?;
    let out_dir = a
        .out
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .ok_or_else(|| {
            Failure::Config("no output directory: pass --out or set output_dir".into())
        })?;
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| Failure::Config(format!("creating {}: {e}", out_dir.display())))?;

    let report = match &a.mutants {
        Some(base) => experiment::run_mutant_study(&cfg, base).map_err(study_failure)?,
        None => experiment::run_species_study(&cfg).map_err(study_failure)?,
    };

    write_file(&out_dir.join("accuracy.csv"), &accuracy_csv(&report))?;
    write_file(&out_dir.join("ranks.csv"), &ranks_csv(&report))?;
    write_file(&out_dir.join("baseline.csv"), &baseline_csv(&report))?;
    write_file(
        &out_dir.join("pareto.json"),
        &pareto_json(&report, cfg.pareto_threshold),
    )?;
    write_file(&out_dir.join("failures.json"), &failures_json(&report))?;
    if a.mutants.is_some() {
        write_file(&out_dir.join("groups.json"), &groups_json(&report))?;
    }

    let mut resolved = serde_json::to_value(cfg.resolved()).expect("config serializes");
    if let Some(base) = &a.mutants {
        resolved["mutants"] = json!(base);
    }
    let mut s = serde_json::to_string_pretty(&resolved).expect("config serializes");
    s.push('\n');
    write_file(&out_dir.join("resolved_config.json"), &s)?;

    // wall-clock metadata lives here and nowhere else, so the data files
    // stay byte-identical across reruns
    let meta = json!({
        "wall_clock_s": report.wall_clock_s,
        "n_models": report.models.len(),
        "n_failures": report.failures.len(),
    });
    write_file(
        &out_dir.join("meta.json"),
        &format!("{}\n", serde_json::to_string_pretty(&meta).unwrap()),
    )?;

    eprintln!(
        "wrote {} model(s) x {} prefix(es) to {}",
        report.models.len(),
        report.prefixes.len(),
        out_dir.display()
    );
    if report.models.is_empty() && !report.failures.is_empty() {
        let msg = report
            .failures
            .iter()
            .map(|f| format!("{} ({}): {}", f.model_id, f.stage, f.message))
            .collect::<Vec<_>>()
            .join("; ");
        if report.failures.iter().any(|f| f.stage == "simulate") {
            return Err(Failure::Numerical(msg));
        }
        return Err(Failure::Model(msg));
    }
    Ok(())
}

fn run_pareto(a: ParetoArgs) -> Result<()> {
    if !(a.threshold > 0.0 && a.threshold <= 1.0) {
        return Err(Failure::Config("threshold must lie in (0,1]".into()));
    }
    let path = a.report.join("accuracy.csv");
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let report = parse_accuracy_csv(&text)
        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    write_file(&a.out, &pareto_json(&report, a.threshold))?;
    write_sidecar(
        &a.out,
        &json!({
            "command": "pareto",
            "report": a.report,
            "threshold": a.threshold,
        }),
    )
}

/// Rebuild just enough of a report from accuracy.csv to rank models.
fn parse_accuracy_csv(text: &str) -> std::result::Result<BenchmarkReport, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty file")?;
    if header != "model,T,mean_accuracy,std_accuracy" {
        return Err(format!("unexpected header {header:?}"));
    }
    let mut order: Vec<String> = Vec::new();
    let mut rows: std::collections::BTreeMap<String, Vec<PrefixRow>> = Default::default();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 4 {
            return Err(format!("line {}: expected 4 fields", i + 2));
        }
        let t: usize = parts[1].parse().map_err(|_| format!("line {}: bad T", i + 2))?;
        let mean: f64 = parts[2]
            .parse()
            .map_err(|_| format!("line {}: bad mean_accuracy", i + 2))?;
        let std: f64 = parts[3]
            .parse()
            .map_err(|_| format!("line {}: bad std_accuracy", i + 2))?;
        if !rows.contains_key(parts[0]) {
            order.push(parts[0].to_string());
        }
        rows.entry(parts[0].to_string()).or_default().push(PrefixRow {
            prefix: t,
            accuracy: AccuracySummary {
                mean_accuracy: mean,
                std_accuracy: std,
            },
            ranks: RankReport {
                prefix: t,
                kernel_rank: 0,
                generalisation_rank: 0,
                rank_difference: 0,
            },
        });
    }
    if order.is_empty() {
        return Err("no data rows".into());
    }
    let models = order
        .into_iter()
        .map(|id| {
            let mut r = rows.remove(&id).unwrap();
            r.sort_by_key(|row| row.prefix);
            ModelReport { model_id: id, rows: r }
        })
        .collect();
    Ok(BenchmarkReport {
        models,
        baseline: AccuracySummary {
            mean_accuracy: 0.0,
            std_accuracy: 0.0,
        },
        prefixes: Vec::new(),
        failures: Vec::new(),
        groups: Vec::new(),
        wall_clock_s: 0.0,
    })
}

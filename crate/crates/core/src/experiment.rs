//! Study orchestration: accuracy-over-time and rank sweeps for a panel of
//! models, deletion-mutant panels, and Pareto summaries.
//!
//! A study draws one input ensemble and one task set, shared across every
//! model, then simulates each model's full-length curves exactly once.
//! Prefix sweeps only truncate those cached curves. All randomness comes
//! from the four named seeds in the config, so a rerun with the same
//! config produces the same report payload byte for byte; wall-clock
//! metadata is kept out of the payload for that reason.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bench::{self, AccuracySummary, EnsembleConfig};
use crate::bigg;
use crate::dfba::{BiomassUpdate, DfbaConfig, ExchangeIds, GrowthSimulator, KineticParams};
use crate::fba::{self, BoundOverride};
use crate::lp::SolverOptions;
use crate::model::MetabolicModel;
use crate::ranks::{self, RankConfig, RankReport};
use crate::ridge;

#[derive(Debug, Error)]
pub enum StudyError {
    #[error("config: {0}")]
    Config(String),
    #[error("model {id}: {message}")]
    Model { id: String, message: String },
    #[error("numerical failure in {id}: {message}")]
    Numerical { id: String, message: String },
}

/// Where a model's data comes from and how its exchanges are named.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSource {
    pub id: String,
    pub path: PathBuf,
    /// Biomass reaction id when the file does not flag an objective.
    #[serde(default)]
    pub objective: Option<String>,
    #[serde(default)]
    pub exchanges: ExchangeIds,
}

/// Ensemble shape without its seed; seeds live in [`Seeds`] so the config
/// has exactly one place where randomness is pinned down.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnsembleSettings {
    pub n_templates: usize,
    pub n_per_template: usize,
    pub n_train_per_template: usize,
    pub input_range: (f64, f64),
    pub noise_std: f64,
}

impl Default for EnsembleSettings {
    fn default() -> Self {
        Self {
            n_templates: 20,
            n_per_template: 25,
            n_train_per_template: 20,
            input_range: (0.0, 45.0),
            noise_std: 0.2,
        }
    }
}

/// Rank-probe sizes; probe inputs reuse the ensemble's range and noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RankSettings {
    pub n_kernel_templates: usize,
    pub n_gen_templates: usize,
    pub n_gen_variants: usize,
    pub sv_rel_tol: f64,
}

impl Default for RankSettings {
    fn default() -> Self {
        let d = RankConfig::default();
        Self {
            n_kernel_templates: d.n_kernel_templates,
            n_gen_templates: d.n_gen_templates,
            n_gen_variants: d.n_gen_variants,
            sv_rel_tol: d.sv_rel_tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Seeds {
    pub ensemble: u64,
    pub tasks: u64,
    pub kernel: u64,
    pub generalisation: u64,
}

impl Default for Seeds {
    fn default() -> Self {
        Self {
            ensemble: 0,
            tasks: 1,
            kernel: 2,
            generalisation: 3,
        }
    }
}

fn default_dt() -> f64 {
    0.1
}
fn default_duration() -> f64 {
    20.0
}
fn default_b0() -> f64 {
    0.01
}
fn default_n_tasks() -> usize {
    100
}
fn default_pareto_threshold() -> f64 {
    0.9
}
fn default_screen_input() -> (f64, f64) {
    (10.0, 10.0)
}

/// One JSON document drives a whole study. Unknown keys are rejected so a
/// typo cannot silently fall back to a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub models: Vec<ModelSource>,
    #[serde(default)]
    pub kinetics: KineticParams,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_duration")]
    pub duration: f64,
    #[serde(default = "default_b0")]
    pub b0: f64,
    #[serde(default)]
    pub biomass_update: BiomassUpdate,
    #[serde(default)]
    pub ensemble: EnsembleSettings,
    #[serde(default = "default_n_tasks")]
    pub n_tasks: usize,
    #[serde(default)]
    pub rank: RankSettings,
    #[serde(default)]
    pub seeds: Seeds,
    /// Prefix lengths to evaluate; every step when omitted.
    #[serde(default)]
    pub prefixes: Option<Vec<usize>>,
    #[serde(default = "default_pareto_threshold")]
    pub pareto_threshold: f64,
    /// (glucose, xylose) pools that set the deletion-screen medium.
    #[serde(default = "default_screen_input")]
    pub screen_input: (f64, f64),
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

impl StudyConfig {
    pub fn from_json_str(json: &str) -> Result<Self, StudyError> {
        let cfg: StudyConfig =
            serde_json::from_str(json).map_err(|e| StudyError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, StudyError> {
        let path = path.as_ref();
        let json = std::fs::read_to_string(path)
            .map_err(|e| StudyError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&json)
    }

    pub fn n_steps(&self) -> usize {
        (self.duration / self.dt).round() as usize
    }

    pub fn validate(&self) -> Result<(), StudyError> {
        let bad = |m: String| Err(StudyError::Config(m));
        if self.models.is_empty() {
            return bad("model list is empty".into());
        }
        let mut ids = BTreeSet::new();
        for m in &self.models {
            if !ids.insert(&m.id) {
                return bad(format!("duplicate model id '{}'", m.id));
            }
        }
        if !(self.dt > 0.0) || !(self.duration > 0.0) {
            return bad("dt and duration must be positive".into());
        }
        let steps = self.duration / self.dt;
        if (steps - steps.round()).abs() > 1e-9 || steps.round() < 1.0 {
            return bad(format!(
                "duration {} is not a whole number of {}-h steps",
                self.duration, self.dt
            ));
        }
        if !(self.b0 > 0.0) {
            return bad("b0 must be positive".into());
        }
        let e = &self.ensemble;
        if e.n_templates < 2 {
            return bad("ensemble needs at least two templates for binary tasks".into());
        }
        if e.n_train_per_template == 0 || e.n_train_per_template >= e.n_per_template {
            return bad("ensemble split needs both train and test samples per template".into());
        }
        if !(e.input_range.1 > e.input_range.0) || e.input_range.0 < 0.0 {
            return bad("input_range must be a nonnegative interval".into());
        }
        if !(e.noise_std >= 0.0) {
            return bad("noise_std must be nonnegative".into());
        }
        if self.n_tasks == 0 {
            return bad("n_tasks must be at least 1".into());
        }
        if !(self.rank.sv_rel_tol > 0.0 && self.rank.sv_rel_tol < 1.0) {
            return bad("rank.sv_rel_tol must lie in (0,1)".into());
        }
        if !(self.pareto_threshold > 0.0 && self.pareto_threshold <= 1.0) {
            return bad("pareto_threshold must lie in (0,1]".into());
        }
        if !(self.screen_input.0 >= 0.0 && self.screen_input.1 >= 0.0) {
            return bad("screen_input pools must be nonnegative".into());
        }
        if let Some(p) = &self.prefixes {
            if p.is_empty() {
                return bad("prefix schedule is empty".into());
            }
            let n = self.n_steps();
            for &t in p {
                if t < 1 || t > n {
                    return bad(format!("prefix {t} outside 1..={n}"));
                }
            }
        }
        Ok(())
    }

    /// Schedule with defaults materialized: sorted, deduplicated, never
    /// empty, every entry within the time grid.
    pub fn prefix_schedule(&self) -> Vec<usize> {
        let mut p = match &self.prefixes {
            Some(p) => p.clone(),
            None => (1..=self.n_steps()).collect(),
        };
        p.sort_unstable();
        p.dedup();
        p
    }

    pub fn ensemble_config(&self) -> EnsembleConfig {
        EnsembleConfig {
            n_templates: self.ensemble.n_templates,
            n_per_template: self.ensemble.n_per_template,
            n_train_per_template: self.ensemble.n_train_per_template,
            input_range: self.ensemble.input_range,
            noise_std: self.ensemble.noise_std,
            seed: self.seeds.ensemble,
        }
    }

    pub fn rank_config(&self) -> RankConfig {
        RankConfig {
            n_kernel_templates: self.rank.n_kernel_templates,
            n_gen_templates: self.rank.n_gen_templates,
            n_gen_variants: self.rank.n_gen_variants,
            input_range: self.ensemble.input_range,
            noise_std: self.ensemble.noise_std,
            sv_rel_tol: self.rank.sv_rel_tol,
            kernel_seed: self.seeds.kernel,
            generalisation_seed: self.seeds.generalisation,
        }
    }

    pub fn dfba_config(&self, exchanges: ExchangeIds) -> DfbaConfig {
        DfbaConfig {
            kinetics: self.kinetics,
            exchanges,
            dt: self.dt,
            duration: self.duration,
            initial_biomass: self.b0,
            update: self.biomass_update,
            solver: SolverOptions::default(),
        }
    }

    /// Copy with the prefix schedule spelled out, ready to serialize as the
    /// resolved config accompanying outputs.
    pub fn resolved(&self) -> StudyConfig {
        let mut out = self.clone();
        out.prefixes = Some(self.prefix_schedule());
        out
    }
}

/// A parsed model ready to simulate.
#[derive(Debug, Clone)]
pub struct LoadedModel {
    pub id: String,
    pub model: MetabolicModel,
    pub exchanges: ExchangeIds,
}

pub fn load_source(src: &ModelSource) -> Result<LoadedModel, StudyFailure> {
    let model =
        bigg::load_model(&src.path, src.objective.as_deref()).map_err(|e| StudyFailure {
            model_id: src.id.clone(),
            stage: "load".into(),
            message: e.to_string(),
        })?;
    Ok(LoadedModel {
        id: src.id.clone(),
        model,
        exchanges: src.exchanges.clone(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrefixRow {
    pub prefix: usize,
    pub accuracy: AccuracySummary,
    pub ranks: RankReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelReport {
    pub model_id: String,
    /// One row per scheduled prefix, in schedule order.
    pub rows: Vec<PrefixRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyFailure {
    pub model_id: String,
    /// "load", "validate" or "simulate".
    pub stage: String,
    pub message: String,
}

/// Genes whose deletion removes the same reactions, simulated once.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MutantGroup {
    /// Report id, `{base}~{reactions}`.
    pub id: String,
    /// "+"-joined knocked-out reaction ids.
    pub reactions: String,
    pub members: Vec<String>,
    pub representative: String,
    pub growth_ratio: f64,
    /// Wild type at least as accurate at every prefix, within one mutant
    /// standard deviation. None when the mutant failed to simulate.
    pub wild_type_dominates: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct BenchmarkReport {
    pub models: Vec<ModelReport>,
    /// Readout trained on the raw input pools, once per study.
    pub baseline: AccuracySummary,
    pub prefixes: Vec<usize>,
    pub failures: Vec<StudyFailure>,
    /// Mutant panels only; empty for species studies.
    pub groups: Vec<MutantGroup>,
    pub wall_clock_s: f64,
}

fn simulate_failure(id: &str, stage: &str, message: impl ToString) -> StudyFailure {
    StudyFailure {
        model_id: id.to_string(),
        stage: stage.to_string(),
        message: message.to_string(),
    }
}

fn run_one_model(
    cfg: &StudyConfig,
    lm: &LoadedModel,
    ens: &bench::Ensemble,
    tasks: &bench::TaskSet,
    alphas: &[f64],
    rank_cfg: &RankConfig,
    schedule: &[usize],
) -> Result<ModelReport, StudyFailure> {
    let sim = GrowthSimulator::new(&lm.model, cfg.dfba_config(lm.exchanges.clone()))
        .map_err(|e| simulate_failure(&lm.id, "validate", e))?;
    let bank = bench::simulate_ensemble(&sim, ens)
        .map_err(|e| simulate_failure(&lm.id, "simulate", e))?;
    let probes = ranks::simulate_probes(&sim, rank_cfg)
        .map_err(|e| simulate_failure(&lm.id, "simulate", e))?;
    let rows = schedule
        .par_iter()
        .map(|&t| PrefixRow {
            prefix: t,
            accuracy: bench::accuracy_for_prefix(&bank, tasks, t, alphas),
            ranks: ranks::ranks_at(&probes, t, rank_cfg.sv_rel_tol),
        })
        .collect();
    Ok(ModelReport {
        model_id: lm.id.clone(),
        rows,
    })
}

/// The shared sweep: one ensemble and task set, every model simulated once,
/// accuracy and ranks per scheduled prefix. Failures sit in the report
/// instead of aborting the other models.
fn run_pipeline(
    cfg: &StudyConfig,
    models: &[LoadedModel],
    mut failures: Vec<StudyFailure>,
) -> BenchmarkReport {
    let started = Instant::now();
    let schedule = cfg.prefix_schedule();
    let ens = bench::draw_ensemble(&cfg.ensemble_config());
    let tasks = bench::draw_tasks(cfg.n_tasks, cfg.ensemble.n_templates, cfg.seeds.tasks);
    let alphas = ridge::default_alpha_grid();
    let baseline = bench::baseline_accuracy(&ens, &tasks, &alphas);
    let rank_cfg = cfg.rank_config();

    let results: Vec<Result<ModelReport, StudyFailure>> = models
        .par_iter()
        .map(|lm| run_one_model(cfg, lm, &ens, &tasks, &alphas, &rank_cfg, &schedule))
        .collect();
    let mut out = Vec::new();
    for r in results {
        match r {
            Ok(m) => out.push(m),
            Err(f) => failures.push(f),
        }
    }
    BenchmarkReport {
        models: out,
        baseline,
        prefixes: schedule,
        failures,
        groups: Vec::new(),
        wall_clock_s: started.elapsed().as_secs_f64(),
    }
}

pub fn run_species_study(cfg: &StudyConfig) -> Result<BenchmarkReport, StudyError> {
    cfg.validate()?;
    let mut loaded = Vec::new();
    let mut failures = Vec::new();
    for src in &cfg.models {
        match load_source(src) {
            Ok(lm) => loaded.push(lm),
            Err(f) => failures.push(f),
        }
    }
    Ok(run_pipeline(cfg, &loaded, failures))
}

/// Bound overrides that put a model on the deletion-screen medium: sugar
/// uptake capped by the kinetics at the given pools, oxygen at its maximum,
/// upper bounds kept as shipped.
pub fn screen_medium(
    kinetics: &KineticParams,
    pools: (f64, f64),
    model: &MetabolicModel,
    exchanges: &ExchangeIds,
) -> Result<Vec<BoundOverride>, fba::FbaError> {
    let (g0, x0) = pools;
    let caps = [
        (&exchanges.glucose, kinetics.glucose_uptake_limit(g0)),
        (&exchanges.xylose, kinetics.xylose_uptake_limit(x0, g0)),
        (&exchanges.oxygen, kinetics.o2_max),
    ];
    caps.into_iter()
        .map(|(id, cap)| {
            let j = model
                .reaction_index(id)
                .ok_or_else(|| fba::FbaError::UnknownReaction(id.clone()))?;
            let ub = model.reactions()[j].upper_bound;
            Ok(BoundOverride::new(id.as_str(), -cap, ub))
        })
        .collect()
}

/// Screen the base model, group retained deletions by knocked-out reaction
/// set, then run the species pipeline on the wild type plus one
/// representative per group.
pub fn run_mutant_study(cfg: &StudyConfig, base_model: &str) -> Result<BenchmarkReport, StudyError> {
    cfg.validate()?;
    let src = cfg
        .models
        .iter()
        .find(|m| m.id == base_model)
        .ok_or_else(|| StudyError::Config(format!("no model '{base_model}' in config")))?;
    let base = load_source(src).map_err(|f| StudyError::Model {
        id: f.model_id,
        message: f.message,
    })?;
    run_mutant_pipeline(cfg, &base)
}

fn run_mutant_pipeline(
    cfg: &StudyConfig,
    base: &LoadedModel,
) -> Result<BenchmarkReport, StudyError> {
    let overrides = screen_medium(&cfg.kinetics, cfg.screen_input, &base.model, &base.exchanges)
        .map_err(|e| StudyError::Model {
            id: base.id.clone(),
            message: e.to_string(),
        })?;
    let screen = fba::screen_single_deletions(&base.model, &overrides, &SolverOptions::default())
        .map_err(|e| StudyError::Numerical {
            id: base.id.clone(),
            message: e.to_string(),
        })?;

    let mut by_group: BTreeMap<String, (f64, Vec<String>)> = BTreeMap::new();
    for e in screen.entries.iter().filter(|e| e.retained && !e.failed) {
        by_group
            .entry(e.group.clone())
            .or_insert_with(|| (e.growth_ratio, Vec::new()))
            .1
            .push(e.gene.clone());
    }

    let mut panel = vec![base.clone()];
    let mut groups = Vec::new();
    for (reactions, (ratio, members)) in &by_group {
        let deleted = BTreeSet::from([members[0].clone()]);
        let id = format!("{}~{}", base.id, reactions);
        panel.push(LoadedModel {
            id: id.clone(),
            model: base.model.apply_deletion(&deleted),
            exchanges: base.exchanges.clone(),
        });
        groups.push(MutantGroup {
            id,
            reactions: reactions.clone(),
            members: members.clone(),
            representative: members[0].clone(),
            growth_ratio: fmt_sig(*ratio).parse().unwrap_or(*ratio),
            wild_type_dominates: None,
        });
    }

    let mut report = run_pipeline(cfg, &panel, Vec::new());
    let wt = report.models.iter().find(|m| m.model_id == base.id);
    for g in &mut groups {
        let mutant = report.models.iter().find(|m| m.model_id == g.id);
        if let (Some(wt), Some(mu)) = (wt, mutant) {
            g.wild_type_dominates = Some(mu.rows.iter().zip(&wt.rows).all(|(m, w)| {
                w.accuracy.mean_accuracy >= m.accuracy.mean_accuracy - m.accuracy.std_accuracy
            }));
        }
    }
    report.groups = groups;
    Ok(report)
}

/// One model's standing in the speed/accuracy trade-off.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParetoEntry {
    pub model: String,
    /// First scheduled prefix whose mean accuracy reaches the threshold.
    pub first_prefix_at_threshold: Option<usize>,
    pub max_accuracy: f64,
    pub on_front: bool,
}

/// Non-dominated models under (time to threshold accuracy, max accuracy).
/// A model that never reaches the threshold gets infinite time, so it can
/// only stay on the front by out-peaking every faster model.
pub fn pareto_entries(report: &BenchmarkReport, threshold: f64) -> Vec<ParetoEntry> {
    let stats: Vec<(String, f64, f64)> = report
        .models
        .iter()
        .map(|m| {
            let max_acc = m
                .rows
                .iter()
                .map(|r| r.accuracy.mean_accuracy)
                .fold(f64::NEG_INFINITY, f64::max);
            let t = m
                .rows
                .iter()
                .find(|r| r.accuracy.mean_accuracy >= threshold)
                .map(|r| r.prefix as f64)
                .unwrap_or(f64::INFINITY);
            (m.model_id.clone(), t, max_acc)
        })
        .collect();

    stats
        .iter()
        .map(|(id, t, acc)| {
            let dominated = stats.iter().any(|(other, ot, oacc)| {
                other != id && *ot <= *t && *oacc >= *acc && (*ot < *t || *oacc > *acc)
            });
            ParetoEntry {
                model: id.clone(),
                first_prefix_at_threshold: if t.is_finite() {
                    Some(*t as usize)
                } else {
                    None
                },
                // round to the same nine significant digits the CSVs carry
                max_accuracy: fmt_sig(*acc).parse().unwrap_or(*acc),
                on_front: !dominated,
            }
        })
        .collect()
}

pub fn pareto_front(report: &BenchmarkReport, threshold: f64) -> Vec<String> {
    pareto_entries(report, threshold)
        .into_iter()
        .filter(|e| e.on_front)
        .map(|e| e.model)
        .collect()
}

/// Decimal rendering with nine significant digits; values far from unit
/// scale fall back to scientific notation at the same precision.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0.0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.8e}", v);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if !(-4..9).contains(&exp) {
        return sci;
    }
    format!("{:.*}", (8 - exp).max(0) as usize, v)
}

pub fn accuracy_csv(report: &BenchmarkReport) -> String {
    let mut out = String::from("model,T,mean_accuracy,std_accuracy\n");
    for m in &report.models {
        for r in &m.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                m.model_id,
                r.prefix,
                fmt_sig(r.accuracy.mean_accuracy),
                fmt_sig(r.accuracy.std_accuracy)
            ));
        }
    }
    out
}

pub fn ranks_csv(report: &BenchmarkReport) -> String {
    let mut out = String::from("model,T,kernel_rank,gen_rank,rank_diff\n");
    for m in &report.models {
        for r in &m.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                m.model_id,
                r.prefix,
                r.ranks.kernel_rank,
                r.ranks.generalisation_rank,
                r.ranks.rank_difference
            ));
        }
    }
    out
}

pub fn baseline_csv(report: &BenchmarkReport) -> String {
    format!(
        "mean_accuracy,std_accuracy\n{},{}\n",
        fmt_sig(report.baseline.mean_accuracy),
        fmt_sig(report.baseline.std_accuracy)
    )
}

pub fn pareto_json(report: &BenchmarkReport, threshold: f64) -> String {
    #[derive(Serialize)]
    struct Doc {
        threshold: f64,
        front: Vec<String>,
        entries: Vec<ParetoEntry>,
    }
    let entries = pareto_entries(report, threshold);
    let front = entries
        .iter()
        .filter(|e| e.on_front)
        .map(|e| e.model.clone())
        .collect();
    let mut s = serde_json::to_string_pretty(&Doc {
        threshold,
        front,
        entries,
    })
    .expect("pareto document serializes");
    s.push('\n');
    s
}

pub fn failures_json(report: &BenchmarkReport) -> String {
    let mut s =
        serde_json::to_string_pretty(&report.failures).expect("failure manifest serializes");
    s.push('\n');
    s
}

pub fn groups_json(report: &BenchmarkReport) -> String {
    let mut s = serde_json::to_string_pretty(&report.groups).expect("group manifest serializes");
    s.push('\n');
    s
}

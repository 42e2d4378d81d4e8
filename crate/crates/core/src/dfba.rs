//! Dynamic FBA: batch growth curves by explicit Euler stepping with one
//! flux optimization per step.
//!
//! Each step caps the sugar exchange lower bounds by saturation kinetics of
//! the current substrate pools, maximizes growth, and advances biomass and
//! substrates with the fluxes of the pinned minimum-uptake resolve. Both
//! substrate and biomass updates use the biomass value from the start of
//! the step. States are recorded after every step, so a 20 h run at
//! dt = 0.1 yields exactly 200 samples and no initial-condition row.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fba::{build_program, FbaError};
use crate::lp::{self, Basis, LinearProgram, LpError, LpStatus, SolverOptions};
use crate::model::MetabolicModel;

/// Saturation kinetics for the two sugars plus the oxygen cap.
/// Glucose represses xylose uptake through the inhibition constant `kig`.
/// The serialized names follow the conventional V_max / K notation so
/// config files read like the rate laws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KineticParams {
    #[serde(rename = "V_g_max")]
    pub vg_max: f64,
    #[serde(rename = "K_g")]
    pub kg: f64,
    #[serde(rename = "V_x_max")]
    pub vx_max: f64,
    #[serde(rename = "K_x")]
    pub kx: f64,
    /// Xylose uptake is scaled by 1 / (1 + G / kig).
    #[serde(rename = "K_ig")]
    pub kig: f64,
    #[serde(rename = "O2_max_uptake")]
    pub o2_max: f64,
}

impl Default for KineticParams {
    fn default() -> Self {
        Self {
            vg_max: 10.0,
            kg: 0.015,
            vx_max: 9.0,
            kx: 0.01,
            kig: 0.01,
            o2_max: 5.0,
        }
    }
}

impl KineticParams {
    /// Maximum glucose uptake at glucose concentration `g` (mM).
    pub fn glucose_uptake_limit(&self, g: f64) -> f64 {
        self.vg_max * g / (self.kg + g)
    }

    /// Maximum xylose uptake at xylose `x` under glucose repression by `g`.
    pub fn xylose_uptake_limit(&self, x: f64, g: f64) -> f64 {
        self.vx_max * x / (self.kx + x) / (1.0 + g / self.kig)
    }
}

/// Exchange reaction ids wired to the kinetic caps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExchangeIds {
    pub glucose: String,
    pub xylose: String,
    pub oxygen: String,
}

impl Default for ExchangeIds {
    fn default() -> Self {
        Self {
            glucose: "EX_glc__D_e".to_string(),
            xylose: "EX_xyl__D_e".to_string(),
            oxygen: "EX_o2_e".to_string(),
        }
    }
}

/// How biomass advances over one step of length dt at growth rate mu.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BiomassUpdate {
    /// B <- B (1 + mu dt)
    #[default]
    Euler,
    /// B <- B exp(mu dt)
    Exponential,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DfbaConfig {
    pub kinetics: KineticParams,
    pub exchanges: ExchangeIds,
    pub dt: f64,
    pub duration: f64,
    /// gDW/L at t = 0.
    pub initial_biomass: f64,
    pub update: BiomassUpdate,
    pub solver: SolverOptions,
}

impl Default for DfbaConfig {
    fn default() -> Self {
        Self {
            kinetics: KineticParams::default(),
            exchanges: ExchangeIds::default(),
            dt: 0.1,
            duration: 20.0,
            initial_biomass: 0.01,
            update: BiomassUpdate::default(),
            solver: SolverOptions::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum DfbaError {
    #[error(transparent)]
    Fba(#[from] FbaError),
    #[error("duration {duration} is not an integer number of steps of {dt}")]
    GridMismatch { dt: f64, duration: f64 },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("flux solve failed at step {step}: {source}")]
    Solver { step: usize, source: LpError },
}

/// One growth curve, sampled after every step.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub time_h: Vec<f64>,
    pub biomass: Vec<f64>,
    pub glucose: Vec<f64>,
    pub xylose: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.time_h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time_h.is_empty()
    }
}

/// Prepared simulator for one model. Building it validates the exchange
/// wiring once; `simulate` is `&self` and carries its own solver state, so
/// trajectories can run on parallel workers.
#[derive(Debug, Clone)]
pub struct GrowthSimulator {
    program: LinearProgram,
    objective_column: usize,
    glucose_column: usize,
    xylose_column: usize,
    glucose_upper: f64,
    xylose_upper: f64,
    config: DfbaConfig,
    n_steps: usize,
}

impl GrowthSimulator {
    pub fn new(model: &MetabolicModel, config: DfbaConfig) -> Result<Self, DfbaError> {
        if !(config.dt > 0.0) || !(config.duration > 0.0) {
            return Err(DfbaError::InvalidState(
                "dt and duration must be positive".to_string(),
            ));
        }
        let steps = config.duration / config.dt;
        let n_steps = steps.round();
        if n_steps < 1.0 || (n_steps * config.dt - config.duration).abs() > 1e-9 {
            return Err(DfbaError::GridMismatch {
                dt: config.dt,
                duration: config.duration,
            });
        }
        if !(config.initial_biomass >= 0.0) || !config.initial_biomass.is_finite() {
            return Err(DfbaError::InvalidState(
                "initial biomass must be finite and nonnegative".to_string(),
            ));
        }
        let (mut program, objective_column) = build_program(model)?;
        let col = |id: &str| {
            model
                .reaction_index(id)
                .ok_or_else(|| FbaError::UnknownReaction(id.to_string()))
        };
        let glucose_column = col(&config.exchanges.glucose)?;
        let xylose_column = col(&config.exchanges.xylose)?;
        let oxygen_column = col(&config.exchanges.oxygen)?;
        let (_, o2_upper) = program.bounds(oxygen_column);
        program
            .set_bounds(oxygen_column, -config.kinetics.o2_max, o2_upper)
            .map_err(FbaError::from)?;
        let (_, glucose_upper) = program.bounds(glucose_column);
        let (_, xylose_upper) = program.bounds(xylose_column);
        Ok(Self {
            program,
            objective_column,
            glucose_column,
            xylose_column,
            glucose_upper,
            xylose_upper,
            config,
            n_steps: n_steps as usize,
        })
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn config(&self) -> &DfbaConfig {
        &self.config
    }

    /// Integrate one batch culture from the given sugar pools (mM).
    pub fn simulate(&self, glucose_0: f64, xylose_0: f64) -> Result<Trajectory, DfbaError> {
        for (name, v) in [("glucose", glucose_0), ("xylose", xylose_0)] {
            if !v.is_finite() || v < 0.0 {
                return Err(DfbaError::InvalidState(format!(
                    "initial {name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        let kin = &self.config.kinetics;
        let dt = self.config.dt;
        let opts = self.config.solver;
        let tracked = [self.glucose_column, self.xylose_column];

        let mut lp = self.program.clone();
        let mut main_basis: Option<Basis> = None;
        let mut l1_basis: Option<Basis> = None;

        let mut b = self.config.initial_biomass;
        let mut g = glucose_0;
        let mut x = xylose_0;
        let n = self.n_steps;
        let mut out = Trajectory {
            time_h: Vec::with_capacity(n),
            biomass: Vec::with_capacity(n),
            glucose: Vec::with_capacity(n),
            xylose: Vec::with_capacity(n),
        };

        for step in 0..n {
            let vg = kin.glucose_uptake_limit(g);
            let vx = kin.xylose_uptake_limit(x, g);
            lp.set_bounds(self.glucose_column, -vg, self.glucose_upper)
                .map_err(|e| DfbaError::Solver { step, source: e })?;
            lp.set_bounds(self.xylose_column, -vx, self.xylose_upper)
                .map_err(|e| DfbaError::Solver { step, source: e })?;

            let (sol, basis) = lp::solve_warm(&lp, &opts, main_basis.as_ref())
                .map_err(|e| DfbaError::Solver { step, source: e })?;
            main_basis = Some(basis);

            let (mu, upt_g, upt_x) = match sol.status {
                LpStatus::Infeasible => (0.0, 0.0, 0.0),
                LpStatus::Unbounded => {
                    return Err(DfbaError::Solver {
                        step,
                        source: LpError::Numerical("unbounded growth".to_string()),
                    })
                }
                LpStatus::Optimal => {
                    let (pinned, basis) = lp::resolve_min_abs(
                        &lp,
                        sol.objective,
                        &tracked,
                        &opts,
                        l1_basis.as_ref(),
                    )
                    .map_err(|e| DfbaError::Solver { step, source: e })?;
                    l1_basis = Some(basis);
                    (
                        pinned.values[self.objective_column],
                        (-pinned.values[self.glucose_column]).max(0.0),
                        (-pinned.values[self.xylose_column]).max(0.0),
                    )
                }
            };

            let b_old = b;
            b = match self.config.update {
                BiomassUpdate::Euler => b_old * (1.0 + mu * dt),
                BiomassUpdate::Exponential => b_old * (mu * dt).exp(),
            };
            g = (g - upt_g * b_old * dt).max(0.0);
            x = (x - upt_x * b_old * dt).max(0.0);

            out.time_h.push((step + 1) as f64 * dt);
            out.biomass.push(b);
            out.glucose.push(g);
            out.xylose.push(x);
        }
        Ok(out)
    }
}

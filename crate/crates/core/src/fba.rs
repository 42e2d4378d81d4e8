//! Flux balance analysis: pick a steady-state flux distribution that
//! maximizes the model objective, and screen single-gene deletions.
//!
//! Uptake values reported for tracked exchange reactions come from a second
//! solve that pins the objective and minimizes total absolute flux through
//! the tracked columns. Without it, alternate optima leave exchange fluxes
//! free to wander between runs of an otherwise deterministic pipeline.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::lp::{self, LinearProgram, LpError, LpStatus, SolverOptions};
use crate::model::{MetabolicModel, ModelError};

/// Growth below this is treated as no growth when forming ratios.
pub const GROWTH_EPSILON: f64 = 1e-9;

/// A deletion is retained when its growth ratio falls inside this closed
/// interval: clearly impaired, clearly alive.
pub const RETENTION_WINDOW: (f64, f64) = (0.05, 0.95);

#[derive(Debug, Error)]
pub enum FbaError {
    #[error("unknown reaction '{0}'")]
    UnknownReaction(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solver(#[from] LpError),
    #[error("objective is unbounded; check exchange bounds")]
    UnboundedObjective,
    #[error("wild type does not grow (rate {0}); deletion ratios are undefined")]
    NonGrowingWildType(f64),
}

/// Replacement bounds for one reaction, applied after the model's own.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundOverride {
    pub reaction: String,
    pub lower: f64,
    pub upper: f64,
}

impl BoundOverride {
    pub fn new(reaction: impl Into<String>, lower: f64, upper: f64) -> Self {
        Self {
            reaction: reaction.into(),
            lower,
            upper,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FbaResult {
    /// Flux through the objective reaction; 0 when the medium is infeasible.
    pub growth_rate: f64,
    /// Full flux vector in model reaction order; zeros when infeasible.
    pub fluxes: Vec<f64>,
    /// Uptake magnitude per tracked exchange: max(-flux, 0).
    pub uptakes: Vec<(String, f64)>,
}

/// The model as a linear program: mass balance rows, model bounds, model
/// objective. Returns the program and the objective reaction's column.
pub fn build_program(model: &MetabolicModel) -> Result<(LinearProgram, usize), FbaError> {
    let objective_column = model.objective_index()?;
    let mut lp = LinearProgram::new(model.metabolites().len(), model.reactions().len());
    for (i, j, v) in model.stoichiometric_triplets() {
        lp.add_entry(i, j, v)?;
    }
    for (j, r) in model.reactions().iter().enumerate() {
        lp.set_bounds(j, r.lower_bound, r.upper_bound)?;
        lp.set_objective(j, r.objective_coefficient);
    }
    Ok((lp, objective_column))
}

/// Apply bound overrides to a program built from `model`.
pub fn apply_overrides(
    lp: &mut LinearProgram,
    model: &MetabolicModel,
    overrides: &[BoundOverride],
) -> Result<(), FbaError> {
    for o in overrides {
        let j = model
            .reaction_index(&o.reaction)
            .ok_or_else(|| FbaError::UnknownReaction(o.reaction.clone()))?;
        lp.set_bounds(j, o.lower, o.upper)?;
    }
    Ok(())
}

fn resolve_columns(model: &MetabolicModel, ids: &[String]) -> Result<Vec<usize>, FbaError> {
    ids.iter()
        .map(|id| {
            model
                .reaction_index(id)
                .ok_or_else(|| FbaError::UnknownReaction(id.clone()))
        })
        .collect()
}

/// Maximize the objective under `overrides`; an infeasible medium yields
/// zero growth and zero fluxes rather than an error. When `tracked` names
/// exchange reactions their uptakes are made unique by the pinned-objective
/// minimum-|flux| resolve before being reported.
pub fn run_fba(
    model: &MetabolicModel,
    overrides: &[BoundOverride],
    tracked: &[String],
    opts: &SolverOptions,
) -> Result<FbaResult, FbaError> {
    let (mut lp, objective_column) = build_program(model)?;
    apply_overrides(&mut lp, model, overrides)?;
    let tracked_cols = resolve_columns(model, tracked)?;
    let sol = lp::solve_with(&lp, opts)?;
    match sol.status {
        LpStatus::Infeasible => Ok(FbaResult {
            growth_rate: 0.0,
            fluxes: vec![0.0; model.reactions().len()],
            uptakes: tracked.iter().map(|t| (t.clone(), 0.0)).collect(),
        }),
        LpStatus::Unbounded => Err(FbaError::UnboundedObjective),
        LpStatus::Optimal => {
            let final_sol = if tracked_cols.is_empty() {
                sol
            } else {
                let (s, _) =
                    lp::resolve_min_abs(&lp, sol.objective, &tracked_cols, opts, None)?;
                s
            };
            let uptakes = tracked
                .iter()
                .zip(&tracked_cols)
                .map(|(t, &j)| (t.clone(), (-final_sol.values[j]).max(0.0)))
                .collect();
            Ok(FbaResult {
                growth_rate: final_sol.values[objective_column],
                fluxes: final_sol.values,
                uptakes,
            })
        }
    }
}

/// One gene's fate under deletion.
#[derive(Debug, Clone)]
pub struct ScreenEntry {
    pub gene: String,
    /// Mutant growth over wild-type growth; NaN when the solve failed.
    pub growth_ratio: f64,
    /// Inside [`RETENTION_WINDOW`].
    pub retained: bool,
    /// Reactions this deletion switches off, "+"-joined in model order;
    /// "none" when the gene is dispensable for every rule it appears in.
    pub group: String,
    pub failed: bool,
}

#[derive(Debug, Clone)]
pub struct ScreenOutcome {
    pub wild_type_growth: f64,
    /// One entry per gene, sorted by gene id.
    pub entries: Vec<ScreenEntry>,
}

/// Delete each gene in turn and report the growth ratio. Deletions that
/// knock out the same reaction set share one solve. Solver failures on a
/// mutant are recorded on the entry instead of aborting the screen.
pub fn screen_single_deletions(
    model: &MetabolicModel,
    overrides: &[BoundOverride],
    opts: &SolverOptions,
) -> Result<ScreenOutcome, FbaError> {
    let (mut lp, objective_column) = build_program(model)?;
    apply_overrides(&mut lp, model, overrides)?;
    let (wt, wt_basis) = lp::solve_warm(&lp, opts, None)?;
    let wild_type_growth = match wt.status {
        LpStatus::Optimal => wt.values[objective_column],
        LpStatus::Infeasible => 0.0,
        LpStatus::Unbounded => return Err(FbaError::UnboundedObjective),
    };
    if wild_type_growth <= GROWTH_EPSILON {
        return Err(FbaError::NonGrowingWildType(wild_type_growth));
    }

    let mut genes: Vec<&str> = model.genes().iter().map(|g| g.id.as_str()).collect();
    genes.sort_unstable();

    let mut cache: BTreeMap<Vec<usize>, Result<f64, String>> = BTreeMap::new();
    let mut entries = Vec::with_capacity(genes.len());
    for gene in genes {
        let deleted = BTreeSet::from([gene.to_string()]);
        let cols = model.deactivated_by(&deleted);
        let group = if cols.is_empty() {
            "none".to_string()
        } else {
            cols.iter()
                .map(|&j| model.reactions()[j].id.as_str())
                .collect::<Vec<_>>()
                .join("+")
        };
        let growth = cache.entry(cols.clone()).or_insert_with(|| {
            let mut mutant = lp.clone();
            for &j in &cols {
                // [0, 0] always satisfies the bounds contract
                mutant.set_bounds(j, 0.0, 0.0).unwrap();
            }
            match lp::solve_warm(&mutant, opts, Some(&wt_basis)) {
                Ok((sol, _)) => match sol.status {
                    LpStatus::Optimal => Ok(sol.values[objective_column]),
                    LpStatus::Infeasible => Ok(0.0),
                    LpStatus::Unbounded => Err("unbounded objective".to_string()),
                },
                Err(e) => Err(e.to_string()),
            }
        });
        let entry = match growth {
            Ok(mu) => {
                let ratio = *mu / wild_type_growth;
                ScreenEntry {
                    gene: gene.to_string(),
                    growth_ratio: ratio,
                    retained: ratio >= RETENTION_WINDOW.0 && ratio <= RETENTION_WINDOW.1,
                    group,
                    failed: false,
                }
            }
            Err(_) => ScreenEntry {
                gene: gene.to_string(),
                growth_ratio: f64::NAN,
                retained: false,
                group,
                failed: true,
            },
        };
        entries.push(entry);
    }
    Ok(ScreenOutcome {
        wild_type_growth,
        entries,
    })
}

#[cfg(test)]
pub(crate) mod tests_support {
    use crate::model::{MetabolicModel, Metabolite, Reaction};

    fn met(id: &str) -> Metabolite {
        Metabolite {
            id: id.to_string(),
            name: String::new(),
            compartment: "e".to_string(),
        }
    }

    fn rxn(id: &str, stoich: &[(&str, f64)], lb: f64, ub: f64, obj: f64) -> Reaction {
        Reaction {
            id: id.to_string(),
            name: String::new(),
            stoichiometry: stoich.iter().map(|(m, c)| (m.to_string(), *c)).collect(),
            lower_bound: lb,
            upper_bound: ub,
            gpr: None,
            objective_coefficient: obj,
        }
    }

    /// Tiny aerobic two-sugar network using the standard exchange ids, for
    /// simulator tests that do not need a genome-scale fixture.
    pub fn two_sugar_model() -> MetabolicModel {
        MetabolicModel::new(
            "two-sugar".to_string(),
            vec![met("glc_e"), met("xyl_e"), met("o2_e"), met("bm_c")],
            vec![
                rxn("EX_glc__D_e", &[("glc_e", -1.0)], -10.0, 1000.0, 0.0),
                rxn("EX_xyl__D_e", &[("xyl_e", -1.0)], -9.0, 1000.0, 0.0),
                rxn("EX_o2_e", &[("o2_e", -1.0)], -1000.0, 1000.0, 0.0),
                rxn(
                    "GROW_GLC",
                    &[("glc_e", -1.0), ("o2_e", -0.5), ("bm_c", 0.09)],
                    0.0,
                    1000.0,
                    0.0,
                ),
                rxn(
                    "GROW_XYL",
                    &[("xyl_e", -1.0), ("o2_e", -0.5), ("bm_c", 0.05)],
                    0.0,
                    1000.0,
                    0.0,
                ),
                rxn("BIO", &[("bm_c", -1.0)], 0.0, 1000.0, 1.0),
            ],
            vec![],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Gene, Metabolite, Reaction};
    use crate::gpr::parse_gpr;

    fn met(id: &str) -> Metabolite {
        Metabolite {
            id: id.to_string(),
            name: String::new(),
            compartment: "c".to_string(),
        }
    }

    fn rxn(id: &str, stoich: &[(&str, f64)], lb: f64, ub: f64, gpr: &str, obj: f64) -> Reaction {
        Reaction {
            id: id.to_string(),
            name: String::new(),
            stoichiometry: stoich
                .iter()
                .map(|(m, c)| (m.to_string(), *c))
                .collect(),
            lower_bound: lb,
            upper_bound: ub,
            gpr: parse_gpr(gpr).unwrap(),
            objective_coefficient: obj,
        }
    }

    fn gene(id: &str) -> Gene {
        Gene {
            id: id.to_string(),
            name: String::new(),
        }
    }

    /// A imported (up to 10), converted to B by either of two routes (one
    /// full-yield with isozymes, one half-yield), B drained by the
    /// objective. ATP-like maintenance is left out to keep optima obvious.
    fn two_route_model() -> MetabolicModel {
        MetabolicModel::new(
            "toy".to_string(),
            vec![met("a"), met("b")],
            vec![
                rxn("EX_a", &[("a", -1.0)], -10.0, 0.0, "", 0.0),
                rxn("FULL", &[("a", -1.0), ("b", 1.0)], 0.0, 1000.0, "g1 or g2", 0.0),
                rxn(
                    "HALF",
                    &[("a", -1.0), ("b", 0.5)],
                    0.0,
                    1000.0,
                    "g3",
                    0.0,
                ),
                rxn("BIO", &[("b", -1.0)], 0.0, 1000.0, "", 1.0),
            ],
            vec![gene("g1"), gene("g2"), gene("g3")],
        )
        .unwrap()
    }

    #[test]
    fn growth_matches_hand_optimum() {
        let model = two_route_model();
        let r = run_fba(&model, &[], &[], &SolverOptions::default()).unwrap();
        assert!((r.growth_rate - 10.0).abs() < 1e-9);
    }

    #[test]
    fn closed_medium_is_zero_growth_not_error() {
        let model = two_route_model();
        let r = run_fba(
            &model,
            &[BoundOverride::new("EX_a", 0.0, 0.0)],
            &["EX_a".to_string()],
            &SolverOptions::default(),
        )
        .unwrap();
        assert_eq!(r.growth_rate, 0.0);
        assert_eq!(r.uptakes, vec![("EX_a".to_string(), 0.0)]);
        assert!(r.fluxes.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn unknown_override_is_reported() {
        let model = two_route_model();
        let err = run_fba(
            &model,
            &[BoundOverride::new("EX_missing", -1.0, 0.0)],
            &[],
            &SolverOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, FbaError::UnknownReaction(id) if id == "EX_missing"));
    }

    #[test]
    fn uptake_is_positive_magnitude_of_import() {
        let model = two_route_model();
        let r = run_fba(
            &model,
            &[],
            &["EX_a".to_string()],
            &SolverOptions::default(),
        )
        .unwrap();
        assert!((r.uptakes[0].1 - 10.0).abs() < 1e-8);
        // flux itself is negative
        assert!(r.fluxes[0] < 0.0);
    }

    #[test]
    fn deletion_screen_groups_and_window() {
        let model = two_route_model();
        let out = screen_single_deletions(&model, &[], &SolverOptions::default()).unwrap();
        assert!((out.wild_type_growth - 10.0).abs() < 1e-9);
        assert_eq!(out.entries.len(), 3);
        let by_gene: BTreeMap<&str, &ScreenEntry> =
            out.entries.iter().map(|e| (e.gene.as_str(), e)).collect();
        // isozymes: deleting one of g1/g2 knocks nothing out
        assert_eq!(by_gene["g1"].group, "none");
        assert_eq!(by_gene["g1"].growth_ratio, 1.0);
        assert!(!by_gene["g1"].retained);
        assert_eq!(by_gene["g2"].group, "none");
        // g3 removes only the half-yield route, harmless while FULL is up
        assert_eq!(by_gene["g3"].group, "HALF");
        assert_eq!(by_gene["g3"].growth_ratio, 1.0);
        assert!(out.entries.iter().all(|e| !e.failed));
    }

    #[test]
    fn ratio_window_boundaries_are_inclusive() {
        // single gene per route, yields tuned to land on the window edges
        let model = MetabolicModel::new(
            "edges".to_string(),
            vec![met("a"), met("b")],
            vec![
                rxn("EX_a", &[("a", -1.0)], -1.0, 0.0, "", 0.0),
                rxn("R100", &[("a", -1.0), ("b", 1.0)], 0.0, 1000.0, "ga and gb", 0.0),
                rxn("R95", &[("a", -1.0), ("b", 0.95)], 0.0, 1000.0, "ga", 0.0),
                rxn("R05", &[("a", -1.0), ("b", 0.05)], 0.0, 1000.0, "gb", 0.0),
                rxn("BIO", &[("b", -1.0)], 0.0, 1000.0, "", 1.0),
            ],
            vec![gene("ga"), gene("gb")],
        )
        .unwrap();
        // wild type uses the full route: growth 1. Deleting gb leaves R95
        // (ratio 0.95, in), deleting ga leaves R05 (ratio 0.05, in).
        let out = screen_single_deletions(&model, &[], &SolverOptions::default()).unwrap();
        for e in &out.entries {
            assert!(e.retained, "{} ratio {} should be retained", e.gene, e.growth_ratio);
        }
    }

    #[test]
    fn non_growing_wild_type_is_an_error() {
        let model = two_route_model();
        let err = screen_single_deletions(
            &model,
            &[BoundOverride::new("EX_a", 0.0, 0.0)],
            &SolverOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, FbaError::NonGrowingWildType(_)));
    }
}

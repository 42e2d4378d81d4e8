//! Reader for metabolic models in the BiGG JSON interchange format.

use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::gpr::{parse_gpr, GprParseError};
use crate::model::{Gene, MetabolicModel, Metabolite, ModelError, Reaction};

#[derive(Debug, Error)]
pub enum BiggError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed model document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("reaction {reaction:?}: {source}")]
    Gpr {
        reaction: String,
        source: GprParseError,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("model declares no objective reaction and no override was given")]
    NoObjective,
    #[error("objective override {0:?} does not name a reaction in the model")]
    UnknownObjective(String),
}

#[derive(Deserialize)]
struct BiggDocument {
    #[serde(default)]
    id: Option<String>,
    metabolites: Vec<BiggMetabolite>,
    reactions: Vec<BiggReaction>,
    genes: Vec<BiggGene>,
}

#[derive(Deserialize)]
struct BiggMetabolite {
    id: String,
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    compartment: Option<String>,
}

#[derive(Deserialize)]
struct BiggReaction {
    id: String,
    #[serde(default)]
    name: Option<String>,
    metabolites: serde_json::Map<String, serde_json::Value>,
    lower_bound: f64,
    upper_bound: f64,
    #[serde(default)]
    gene_reaction_rule: String,
    #[serde(default)]
    objective_coefficient: f64,
}

#[derive(Deserialize)]
struct BiggGene {
    id: String,
    #[serde(default)]
    name: Option<String>,
}

/// Parse a BiGG JSON document into a validated model.
///
/// `objective_override`, when given, replaces whatever objective the document
/// declares with coefficient 1.0 on the named reaction. A document without
/// any objective and without an override is rejected.
pub fn parse_model(
    json: &str,
    objective_override: Option<&str>,
) -> Result<MetabolicModel, BiggError> {
    let doc: BiggDocument = serde_json::from_str(json)?;

    let metabolites = doc
        .metabolites
        .into_iter()
        .map(|m| {
            // compartment falls back to the id suffix convention ("_c", "_e")
            let compartment = m.compartment.unwrap_or_else(|| {
                m.id.rsplit_once('_')
                    .map(|(_, c)| c.to_string())
                    .unwrap_or_default()
            });
            Metabolite {
                name: m.name.unwrap_or_else(|| m.id.clone()),
                id: m.id,
                compartment,
            }
        })
        .collect();

    let genes = doc
        .genes
        .into_iter()
        .map(|g| Gene {
            name: g.name.unwrap_or_else(|| g.id.clone()),
            id: g.id,
        })
        .collect();

    let mut reactions = Vec::with_capacity(doc.reactions.len());
    for r in doc.reactions {
        let mut stoichiometry = Vec::with_capacity(r.metabolites.len());
        for (met, val) in &r.metabolites {
            let coeff = val.as_f64().ok_or_else(|| {
                serde_json::Error::io(std::io::Error::new(
                    std::io::ErrorKind::InvalidData,
                    format!(
                        "reaction {:?}: coefficient of {met:?} is not a number",
                        r.id
                    ),
                ))
            })?;
            stoichiometry.push((met.clone(), coeff));
        }
        let gpr = parse_gpr(&r.gene_reaction_rule).map_err(|source| BiggError::Gpr {
            reaction: r.id.clone(),
            source,
        })?;
        reactions.push(Reaction {
            name: r.name.unwrap_or_else(|| r.id.clone()),
            id: r.id,
            stoichiometry,
            lower_bound: r.lower_bound,
            upper_bound: r.upper_bound,
            gpr,
            objective_coefficient: r.objective_coefficient,
        });
    }

    if let Some(target) = objective_override {
        if !reactions.iter().any(|r| r.id == target) {
            return Err(BiggError::UnknownObjective(target.to_string()));
        }
        for r in &mut reactions {
            r.objective_coefficient = if r.id == target { 1.0 } else { 0.0 };
        }
    } else if reactions.iter().all(|r| r.objective_coefficient == 0.0) {
        return Err(BiggError::NoObjective);
    }

    let id = doc.id.unwrap_or_else(|| "model".to_string());
    Ok(MetabolicModel::new(id, metabolites, reactions, genes)?)
}

/// Read and parse a model file.
pub fn load_model(
    path: impl AsRef<Path>,
    objective_override: Option<&str>,
) -> Result<MetabolicModel, BiggError> {
    let path = path.as_ref();
    let json = std::fs::read_to_string(path).map_err(|source| BiggError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_model(&json, objective_override)
}

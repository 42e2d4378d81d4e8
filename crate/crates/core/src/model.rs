//! Constraint-based metabolic model: metabolites, bounded reactions with
//! stoichiometry and gene rules, and the genes themselves.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::gpr::GprExpression;

#[derive(Debug, Clone, PartialEq)]
pub struct Metabolite {
    pub id: String,
    pub name: String,
    pub compartment: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reaction {
    pub id: String,
    pub name: String,
    /// metabolite id -> stoichiometric coefficient (negative = consumed)
    pub stoichiometry: Vec<(String, f64)>,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub gpr: Option<GprExpression>,
    pub objective_coefficient: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gene {
    pub id: String,
    pub name: String,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("duplicate metabolite id {0:?}")]
    DuplicateMetabolite(String),
    #[error("duplicate reaction id {0:?}")]
    DuplicateReaction(String),
    #[error("duplicate gene id {0:?}")]
    DuplicateGene(String),
    #[error("reaction {reaction:?} references unknown metabolite {metabolite:?}")]
    UnknownMetabolite { reaction: String, metabolite: String },
    #[error("reaction {reaction:?} gene rule references unknown gene {gene:?}")]
    UnknownGene { reaction: String, gene: String },
    #[error("reaction {reaction:?} has invalid bounds [{lower}, {upper}]")]
    InvalidBounds {
        reaction: String,
        lower: f64,
        upper: f64,
    },
    #[error("reaction {reaction:?} has non-finite coefficient for {metabolite:?}")]
    NonFiniteCoefficient { reaction: String, metabolite: String },
    #[error("unknown reaction id {0:?}")]
    UnknownReaction(String),
    #[error("model declares no objective reaction")]
    NoObjective,
}

/// Validated metabolic network. Construction checks referential integrity,
/// bound sanity, and that every gene a rule mentions is in the gene list.
#[derive(Debug, Clone)]
pub struct MetabolicModel {
    pub id: String,
    metabolites: Vec<Metabolite>,
    reactions: Vec<Reaction>,
    genes: Vec<Gene>,
    met_index: HashMap<String, usize>,
    rxn_index: HashMap<String, usize>,
    gene_index: HashMap<String, usize>,
}

impl MetabolicModel {
    pub fn new(
        id: String,
        metabolites: Vec<Metabolite>,
        reactions: Vec<Reaction>,
        genes: Vec<Gene>,
    ) -> Result<Self, ModelError> {
        let mut met_index = HashMap::with_capacity(metabolites.len());
        for (i, m) in metabolites.iter().enumerate() {
            if met_index.insert(m.id.clone(), i).is_some() {
                return Err(ModelError::DuplicateMetabolite(m.id.clone()));
            }
        }
        let mut gene_index = HashMap::with_capacity(genes.len());
        for (i, g) in genes.iter().enumerate() {
            if gene_index.insert(g.id.clone(), i).is_some() {
                return Err(ModelError::DuplicateGene(g.id.clone()));
            }
        }
        let mut rxn_index = HashMap::with_capacity(reactions.len());
        for (i, r) in reactions.iter().enumerate() {
            if rxn_index.insert(r.id.clone(), i).is_some() {
                return Err(ModelError::DuplicateReaction(r.id.clone()));
            }
            if !(r.lower_bound <= r.upper_bound)
                || r.lower_bound.is_nan()
                || r.upper_bound.is_nan()
            {
                return Err(ModelError::InvalidBounds {
                    reaction: r.id.clone(),
                    lower: r.lower_bound,
                    upper: r.upper_bound,
                });
            }
            for (met, coeff) in &r.stoichiometry {
                if !met_index.contains_key(met) {
                    return Err(ModelError::UnknownMetabolite {
                        reaction: r.id.clone(),
                        metabolite: met.clone(),
                    });
                }
                if !coeff.is_finite() {
                    return Err(ModelError::NonFiniteCoefficient {
                        reaction: r.id.clone(),
                        metabolite: met.clone(),
                    });
                }
            }
            if let Some(gpr) = &r.gpr {
                for gene in gpr.genes() {
                    if !gene_index.contains_key(gene) {
                        return Err(ModelError::UnknownGene {
                            reaction: r.id.clone(),
                            gene: gene.to_string(),
                        });
                    }
                }
            }
        }
        Ok(Self {
            id,
            metabolites,
            reactions,
            genes,
            met_index,
            rxn_index,
            gene_index,
        })
    }

    pub fn metabolites(&self) -> &[Metabolite] {
        &self.metabolites
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn genes(&self) -> &[Gene] {
        &self.genes
    }

    pub fn metabolite_index(&self, id: &str) -> Option<usize> {
        self.met_index.get(id).copied()
    }

    pub fn reaction_index(&self, id: &str) -> Option<usize> {
        self.rxn_index.get(id).copied()
    }

    pub fn has_gene(&self, id: &str) -> bool {
        self.gene_index.contains_key(id)
    }

    /// Index of the reaction carrying a positive objective coefficient.
    pub fn objective_index(&self) -> Result<usize, ModelError> {
        self.reactions
            .iter()
            .position(|r| r.objective_coefficient != 0.0)
            .ok_or(ModelError::NoObjective)
    }

    /// Sparse stoichiometric matrix as (metabolite row, reaction column,
    /// coefficient) triplets, ordered column-major.
    pub fn stoichiometric_triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for (j, r) in self.reactions.iter().enumerate() {
            for (met, coeff) in &r.stoichiometry {
                out.push((self.met_index[met], j, *coeff));
            }
        }
        out
    }

    /// Indices of reactions that lose all catalysing gene products when
    /// `deleted` is removed from the genome.
    pub fn deactivated_by(&self, deleted: &BTreeSet<String>) -> Vec<usize> {
        self.reactions
            .iter()
            .enumerate()
            .filter(|(_, r)| {
                r.gpr
                    .as_ref()
                    .is_some_and(|gpr| !gpr.is_active(deleted))
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Copy of the model with deactivated reactions pinned to zero flux.
    /// The network structure is untouched; only bounds change.
    pub fn apply_deletion(&self, deleted: &BTreeSet<String>) -> MetabolicModel {
        let mut clone = self.clone();
        for idx in self.deactivated_by(deleted) {
            clone.reactions[idx].lower_bound = 0.0;
            clone.reactions[idx].upper_bound = 0.0;
        }
        clone
    }
}

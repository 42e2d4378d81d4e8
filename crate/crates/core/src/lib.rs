//! Batch-growth simulation of genome-scale metabolic models, with readout
//! benchmarks that treat the growth dynamics as a computational reservoir.
//!
//! The pipeline: load a model ([`bigg`]), pick fluxes by linear programming
//! ([`lp`], [`fba`]), integrate batch growth curves ([`dfba`]), then train
//! linear readouts on ensembles of curves ([`bench`]) and measure the
//! dimensionality of what the curves encode ([`ranks`]). [`experiment`]
//! drives full studies and writes their tables.

pub mod bench;
pub mod bigg;
pub mod dfba;
pub mod experiment;
pub mod fba;
pub mod gpr;
pub mod lp;
pub mod model;
pub mod ranks;
pub mod ridge;

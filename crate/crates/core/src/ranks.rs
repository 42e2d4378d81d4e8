//! Rank diagnostics for trajectory state matrices.
//!
//! Two probe sets measure opposite qualities of the same dynamical system.
//! Kernel probes are many independent inputs; the rank of their stacked
//! growth curves counts how many input directions survive into the
//! dynamics. Generalisation probes are a few templates jittered many times;
//! a low rank there means noisy variants of one input collapse onto one
//! trajectory, which is what a linear readout needs in order to generalise.
//! The gap between the two ranks tracks where the readout accuracy peaks.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::bench::{self, EnsembleConfig};
use crate::dfba::{DfbaError, GrowthSimulator};

#[derive(Debug, Clone, PartialEq)]
pub struct RankConfig {
    pub n_kernel_templates: usize,
    pub n_gen_templates: usize,
    pub n_gen_variants: usize,
    /// sampling range for probe inputs, mM of each sugar
    pub input_range: (f64, f64),
    /// jitter applied to generalisation variants, mM
    pub noise_std: f64,
    /// singular values below this fraction of the largest count as zero
    pub sv_rel_tol: f64,
    pub kernel_seed: u64,
    pub generalisation_seed: u64,
}

impl Default for RankConfig {
    fn default() -> Self {
        RankConfig {
            n_kernel_templates: 100,
            n_gen_templates: 5,
            n_gen_variants: 20,
            input_range: (0.0, 45.0),
            noise_std: 0.2,
            sv_rel_tol: 1e-6,
            kernel_seed: 2,
            generalisation_seed: 3,
        }
    }
}

/// Independent inputs for the kernel-quality matrix. Drawn from the same
/// template stream as a benchmark ensemble so seeds mean the same thing
/// everywhere.
pub fn kernel_inputs(cfg: &RankConfig) -> Vec<(f64, f64)> {
    bench::draw_ensemble(&EnsembleConfig {
        n_templates: cfg.n_kernel_templates,
        n_per_template: 0,
        n_train_per_template: 0,
        input_range: cfg.input_range,
        noise_std: cfg.noise_std,
        seed: cfg.kernel_seed,
    })
    .templates
}

/// Jittered template variants for the generalisation matrix: each of the
/// `n_gen_templates` base inputs appears `n_gen_variants` times with fresh
/// noise, clamped at zero.
pub fn generalisation_inputs(cfg: &RankConfig) -> Vec<(f64, f64)> {
    bench::draw_ensemble(&EnsembleConfig {
        n_templates: cfg.n_gen_templates,
        n_per_template: cfg.n_gen_variants,
        n_train_per_template: cfg.n_gen_variants,
        input_range: cfg.input_range,
        noise_std: cfg.noise_std,
        seed: cfg.generalisation_seed,
    })
    .train_inputs
}

/// Full-length growth curves for both probe sets. Rank sweeps over prefix
/// lengths reuse these; nothing is resimulated per prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct RankProbes {
    pub kernel_curves: Vec<Vec<f64>>,
    pub gen_curves: Vec<Vec<f64>>,
    pub n_steps: usize,
}

pub fn simulate_probes(
    sim: &GrowthSimulator,
    cfg: &RankConfig,
) -> Result<RankProbes, DfbaError> {
    assert!(
        cfg.sv_rel_tol > 0.0 && cfg.sv_rel_tol < 1.0,
        "sv_rel_tol must be in (0,1)"
    );
    let run = |inputs: Vec<(f64, f64)>| -> Result<Vec<Vec<f64>>, DfbaError> {
        inputs
            .into_par_iter()
            .map(|(g, x)| sim.simulate(g, x).map(|t| t.biomass))
            .collect()
    };
    Ok(RankProbes {
        kernel_curves: run(kernel_inputs(cfg))?,
        gen_curves: run(generalisation_inputs(cfg))?,
        n_steps: sim.n_steps(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankReport {
    /// number of leading curve samples used as columns
    pub prefix: usize,
    pub kernel_rank: usize,
    pub generalisation_rank: usize,
    /// kernel minus generalisation; positive when the system separates more
    /// inputs than it merges noisy variants
    pub rank_difference: i64,
}

/// Numerical ranks of both probe matrices truncated to `prefix` columns.
pub fn ranks_at(probes: &RankProbes, prefix: usize, sv_rel_tol: f64) -> RankReport {
    assert!(
        prefix >= 1 && prefix <= probes.n_steps,
        "prefix out of range"
    );
    let kernel_rank = numerical_rank(
        &bench::matrix_from_rows(&probes.kernel_curves, prefix),
        sv_rel_tol,
    );
    let generalisation_rank = numerical_rank(
        &bench::matrix_from_rows(&probes.gen_curves, prefix),
        sv_rel_tol,
    );
    RankReport {
        prefix,
        kernel_rank,
        generalisation_rank,
        rank_difference: kernel_rank as i64 - generalisation_rank as i64,
    }
}

/// Count of singular values above `rel_tol` times the largest one. The
/// all-zero matrix has rank 0 by convention (there is no largest scale to
/// compare against).
pub fn numerical_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    assert!(rel_tol > 0.0 && rel_tol < 1.0, "rel_tol must be in (0,1)");
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0_f64, f64::max);
    if !(max > 0.0) {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dfba::DfbaConfig;
    use crate::fba::tests_support::two_sugar_model;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Fraction-free Gaussian elimination (Bareiss). Every division is
    /// exact on integer input, so this is the true rank, no tolerance.
    fn exact_rank(mut a: Vec<Vec<i128>>) -> usize {
        let rows = a.len();
        if rows == 0 || a[0].is_empty() {
            return 0;
        }
        let cols = a[0].len();
        let mut rank = 0;
        let mut prev = 1i128;
        for col in 0..cols {
            let Some(p) = (rank..rows).find(|&r| a[r][col] != 0) else {
                continue;
            };
            a.swap(rank, p);
            for r in rank + 1..rows {
                for c in col + 1..cols {
                    a[r][c] = (a[r][c] * a[rank][col] - a[r][col] * a[rank][c]) / prev;
                }
                a[r][col] = 0;
            }
            prev = a[rank][col];
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    fn random_int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<i128>> {
        (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-3..=3)).collect())
            .collect()
    }

    fn to_dense(a: &[Vec<i128>]) -> DMatrix<f64> {
        DMatrix::from_fn(a.len(), a[0].len(), |i, j| a[i][j] as f64)
    }

    #[test]
    fn rank_of_small_known_matrices() {
        assert_eq!(numerical_rank(&DMatrix::identity(3, 3), 1e-6), 3);

        // third row is the sum of the first two
        let dep = DMatrix::from_row_slice(
            3,
            4,
            &[
                1.0, 2.0, 0.0, 1.0, //
                0.0, 1.0, 3.0, 2.0, //
                1.0, 3.0, 3.0, 3.0,
            ],
        );
        assert_eq!(numerical_rank(&dep, 1e-6), 2);

        assert_eq!(numerical_rank(&DMatrix::zeros(4, 5), 1e-6), 0);
    }

    #[test]
    fn numerical_rank_agrees_with_exact_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for case in 0..200 {
            let rows = rng.gen_range(1..=8);
            let cols = rng.gen_range(1..=8);
            let a = random_int_matrix(&mut rng, rows, cols);
            assert_eq!(
                numerical_rank(&to_dense(&a), 1e-9),
                exact_rank(a.clone()),
                "case {case}: {:?}",
                a
            );
        }
    }

    #[test]
    fn rank_never_drops_as_prefix_grows() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let rows = rng.gen_range(2..=6);
            let cols = rng.gen_range(2..=10);
            let a = random_int_matrix(&mut rng, rows, cols);
            let mut prev = 0;
            for t in 1..=cols {
                let cut: Vec<Vec<i128>> = a.iter().map(|r| r[..t].to_vec()).collect();
                let e = exact_rank(cut.clone());
                assert_eq!(numerical_rank(&to_dense(&cut), 1e-9), e);
                assert!(e >= prev, "prefix rank dropped from {prev} to {e}");
                prev = e;
            }
        }
    }

    fn tiny_sim() -> GrowthSimulator {
        let cfg = DfbaConfig {
            duration: 1.0,
            ..DfbaConfig::default()
        };
        GrowthSimulator::new(&two_sugar_model(), cfg).unwrap()
    }

    #[test]
    fn probe_ranks_respect_dimension_caps() {
        let sim = tiny_sim();
        let cfg = RankConfig {
            n_kernel_templates: 12,
            n_gen_templates: 3,
            n_gen_variants: 4,
            ..RankConfig::default()
        };
        let probes = simulate_probes(&sim, &cfg).unwrap();
        assert_eq!(probes.kernel_curves.len(), 12);
        assert_eq!(probes.gen_curves.len(), 12);
        assert_eq!(probes.n_steps, 10);
        for t in 1..=probes.n_steps {
            let r = ranks_at(&probes, t, cfg.sv_rel_tol);
            assert!(r.kernel_rank <= t.min(12));
            assert!(r.generalisation_rank <= t.min(12));
            assert_eq!(
                r.rank_difference,
                r.kernel_rank as i64 - r.generalisation_rank as i64
            );
        }
    }

    #[test]
    fn zero_noise_variants_collapse_to_template_count() {
        let sim = tiny_sim();
        let cfg = RankConfig {
            n_kernel_templates: 4,
            n_gen_templates: 3,
            n_gen_variants: 5,
            noise_std: 0.0,
            ..RankConfig::default()
        };
        let probes = simulate_probes(&sim, &cfg).unwrap();
        let r = ranks_at(&probes, probes.n_steps, cfg.sv_rel_tol);
        assert!(r.generalisation_rank <= 3);
    }

    #[test]
    fn probe_draws_and_curves_are_deterministic() {
        let cfg = RankConfig::default();
        assert_eq!(kernel_inputs(&cfg), kernel_inputs(&cfg));
        assert_eq!(generalisation_inputs(&cfg), generalisation_inputs(&cfg));
        for (g, x) in kernel_inputs(&cfg) {
            assert!((0.0..45.0).contains(&g) && (0.0..45.0).contains(&x));
        }
        for (g, x) in generalisation_inputs(&cfg) {
            assert!(g >= 0.0 && x >= 0.0);
        }

        let sim = tiny_sim();
        let small = RankConfig {
            n_kernel_templates: 3,
            n_gen_templates: 2,
            n_gen_variants: 2,
            ..cfg
        };
        let a = simulate_probes(&sim, &small).unwrap();
        let b = simulate_probes(&sim, &small).unwrap();
        assert_eq!(a, b);
    }
}

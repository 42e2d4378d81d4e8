//! Readout benchmark: ensembles of noisy input points, random template
//! classification tasks, and ridge-readout accuracy over growth-curve
//! features.
//!
//! Every random draw comes from a seeded generator in a documented order
//! (templates first, then sample noise template by template), so a seed
//! fully determines the benchmark and results reproduce bit for bit.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::dfba::{DfbaError, GrowthSimulator, Trajectory};
use crate::ridge::RidgeCv;

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleConfig {
    pub n_templates: usize,
    /// samples drawn around each template; the first `n_train_per_template`
    /// go to the training split, the rest to the test split
    pub n_per_template: usize,
    pub n_train_per_template: usize,
    /// uniform template range for both sugars, mM
    pub input_range: (f64, f64),
    /// standard deviation of the additive sample noise
    pub noise_std: f64,
    pub seed: u64,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            n_templates: 20,
            n_per_template: 25,
            n_train_per_template: 20,
            input_range: (0.0, 45.0),
            noise_std: 0.2,
            seed: 0,
        }
    }
}

/// Input points grouped into train and test splits. Inputs are
/// (glucose, xylose) pools in mM, clamped at zero after noising.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub templates: Vec<(f64, f64)>,
    pub train_inputs: Vec<(f64, f64)>,
    pub train_template: Vec<usize>,
    pub test_inputs: Vec<(f64, f64)>,
    pub test_template: Vec<usize>,
}

pub fn draw_ensemble(cfg: &EnsembleConfig) -> Ensemble {
    assert!(cfg.n_templates > 0);
    assert!(cfg.n_train_per_template <= cfg.n_per_template);
    assert!(cfg.input_range.1 > cfg.input_range.0);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (lo, hi) = cfg.input_range;
    let templates: Vec<(f64, f64)> = (0..cfg.n_templates)
        .map(|_| (rng.gen_range(lo..hi), rng.gen_range(lo..hi)))
        .collect();
    let noise = Normal::new(0.0, cfg.noise_std).expect("noise_std must be nonnegative");
    let mut out = Ensemble {
        templates,
        train_inputs: Vec::new(),
        train_template: Vec::new(),
        test_inputs: Vec::new(),
        test_template: Vec::new(),
    };
    for t in 0..cfg.n_templates {
        let (tg, tx) = out.templates[t];
        for s in 0..cfg.n_per_template {
            let g = (tg + noise.sample(&mut rng)).max(0.0);
            let x = (tx + noise.sample(&mut rng)).max(0.0);
            if s < cfg.n_train_per_template {
                out.train_inputs.push((g, x));
                out.train_template.push(t);
            } else {
                out.test_inputs.push((g, x));
                out.test_template.push(t);
            }
        }
    }
    out
}

/// Random binary labelings of the templates, +-1 valued. Constant draws
/// are redrawn, so every task has both classes.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskSet {
    pub labels: Vec<Vec<f64>>,
}

pub fn draw_tasks(n_tasks: usize, n_templates: usize, seed: u64) -> TaskSet {
    assert!(n_templates >= 2, "binary tasks need at least two templates");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = (0..n_tasks)
        .map(|_| loop {
            let l: Vec<f64> = (0..n_templates)
                .map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
                .collect();
            if l.iter().any(|&v| v != l[0]) {
                break l;
            }
        })
        .collect();
    TaskSet { labels }
}

/// Growth curves for a whole ensemble, in split order. Rows are biomass
/// series; prefix truncation reuses these without re-simulating.
#[derive(Debug, Clone)]
pub struct CurveBank {
    pub train_curves: Vec<Vec<f64>>,
    pub train_template: Vec<usize>,
    pub test_curves: Vec<Vec<f64>>,
    pub test_template: Vec<usize>,
    pub n_steps: usize,
}

/// Simulate every ensemble input. Work is spread over the rayon pool;
/// results keep input order regardless of worker count.
pub fn simulate_ensemble(
    sim: &GrowthSimulator,
    ens: &Ensemble,
) -> Result<CurveBank, DfbaError> {
    let run = |inputs: &[(f64, f64)]| -> Result<Vec<Vec<f64>>, DfbaError> {
        inputs
            .par_iter()
            .map(|&(g, x)| sim.simulate(g, x).map(|t: Trajectory| t.biomass))
            .collect()
    };
    Ok(CurveBank {
        train_curves: run(&ens.train_inputs)?,
        train_template: ens.train_template.clone(),
        test_curves: run(&ens.test_inputs)?,
        test_template: ens.test_template.clone(),
        n_steps: sim.n_steps(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracySummary {
    /// mean test accuracy over tasks
    pub mean_accuracy: f64,
    /// population standard deviation over tasks
    pub std_accuracy: f64,
}

pub(crate) fn matrix_from_rows(rows: &[Vec<f64>], width: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), width, |i, j| rows[i][j])
}

/// Train one readout per task on the feature rows and score the test rows.
/// Predictions take the sign of the readout, ties counting as +1.
pub fn evaluate_readouts(
    train_x: &DMatrix<f64>,
    train_template: &[usize],
    test_x: &DMatrix<f64>,
    test_template: &[usize],
    tasks: &TaskSet,
    alphas: &[f64],
) -> AccuracySummary {
    assert_eq!(train_x.nrows(), train_template.len());
    assert_eq!(test_x.nrows(), test_template.len());
    let cv = RidgeCv::new(train_x);
    let targets: Vec<Vec<f64>> = tasks
        .labels
        .iter()
        .map(|l| train_template.iter().map(|&t| l[t]).collect())
        .collect();
    let fits = cv.fit_many(&targets, alphas);
    let mut accs = Vec::with_capacity(fits.len());
    let n_test = test_template.len();
    let p = test_x.ncols();
    let mut row = vec![0.0; p];
    for (task, fit) in tasks.labels.iter().zip(&fits) {
        let mut correct = 0usize;
        for i in 0..n_test {
            for (j, r) in row.iter_mut().enumerate() {
                *r = test_x[(i, j)];
            }
            let pred = if fit.predict(&row) >= 0.0 { 1.0 } else { -1.0 };
            if pred == task[test_template[i]] {
                correct += 1;
            }
        }
        accs.push(correct as f64 / n_test as f64);
    }
    summarize(&accs)
}

fn summarize(accs: &[f64]) -> AccuracySummary {
    let n = accs.len() as f64;
    let mean = accs.iter().sum::<f64>() / n;
    let var = accs.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / n;
    AccuracySummary {
        mean_accuracy: mean,
        std_accuracy: var.max(0.0).sqrt(),
    }
}

/// Accuracy using the first `prefix` curve samples as features.
pub fn accuracy_for_prefix(
    bank: &CurveBank,
    tasks: &TaskSet,
    prefix: usize,
    alphas: &[f64],
) -> AccuracySummary {
    assert!(prefix >= 1 && prefix <= bank.n_steps, "prefix out of range");
    let train = matrix_from_rows(&bank.train_curves, prefix);
    let test = matrix_from_rows(&bank.test_curves, prefix);
    evaluate_readouts(
        &train,
        &bank.train_template,
        &test,
        &bank.test_template,
        tasks,
        alphas,
    )
}

/// Reference point: the same readout trained on the raw input pools
/// instead of any curve. What the tasks give away for free.
pub fn baseline_accuracy(ens: &Ensemble, tasks: &TaskSet, alphas: &[f64]) -> AccuracySummary {
    let to_matrix = |inputs: &[(f64, f64)]| {
        DMatrix::from_fn(inputs.len(), 2, |i, j| {
            if j == 0 {
                inputs[i].0
            } else {
                inputs[i].1
            }
        })
    };
    evaluate_readouts(
        &to_matrix(&ens.train_inputs),
        &ens.train_template,
        &to_matrix(&ens.test_inputs),
        &ens.test_template,
        tasks,
        alphas,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ridge::default_alpha_grid;

    #[test]
    fn ensemble_counts_and_bounds() {
        let cfg = EnsembleConfig {
            seed: 5,
            ..EnsembleConfig::default()
        };
        let e = draw_ensemble(&cfg);
        assert_eq!(e.templates.len(), 20);
        assert_eq!(e.train_inputs.len(), 400);
        assert_eq!(e.test_inputs.len(), 100);
        for &(g, x) in &e.templates {
            assert!((0.0..45.0).contains(&g) && (0.0..45.0).contains(&x));
        }
        for &(g, x) in e.train_inputs.iter().chain(&e.test_inputs) {
            assert!(g >= 0.0 && x >= 0.0);
        }
        // sample noise stays near its template
        for (i, &(g, x)) in e.train_inputs.iter().enumerate() {
            let (tg, tx) = e.templates[e.train_template[i]];
            assert!((g - tg).abs() < 2.0 && (x - tx).abs() < 2.0);
        }
    }

    #[test]
    fn same_seed_reproduces_ensemble() {
        let cfg = EnsembleConfig::default();
        assert_eq!(draw_ensemble(&cfg), draw_ensemble(&cfg));
        let other = EnsembleConfig {
            seed: 1,
            ..cfg
        };
        assert_ne!(draw_ensemble(&cfg), draw_ensemble(&other));
    }

    #[test]
    fn zero_noise_copies_templates() {
        let cfg = EnsembleConfig {
            noise_std: 0.0,
            seed: 9,
            ..EnsembleConfig::default()
        };
        let e = draw_ensemble(&cfg);
        for (i, &inp) in e.train_inputs.iter().enumerate() {
            assert_eq!(inp, e.templates[e.train_template[i]]);
        }
    }

    #[test]
    fn tasks_are_binary_and_never_constant() {
        let t = draw_tasks(100, 20, 123);
        assert_eq!(t.labels.len(), 100);
        for l in &t.labels {
            assert_eq!(l.len(), 20);
            assert!(l.iter().all(|&v| v == 1.0 || v == -1.0));
            assert!(l.iter().any(|&v| v != l[0]));
        }
        assert_eq!(t, draw_tasks(100, 20, 123));
        assert_ne!(t, draw_tasks(100, 20, 124));
    }

    /// Curves carrying a clean one-hot template signature are perfectly
    /// readable; pure noise curves are not.
    #[test]
    fn readout_separates_signature_curves() {
        let n_templates = 6;
        let width = 12;
        let mut bank = CurveBank {
            train_curves: Vec::new(),
            train_template: Vec::new(),
            test_curves: Vec::new(),
            test_template: Vec::new(),
            n_steps: width,
        };
        let mut rng_state = 88u64;
        let mut small = move || {
            // cheap deterministic jitter, fixed sequence
            rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((rng_state >> 33) as f64 / 2f64.powi(31) - 0.5) * 0.01
        };
        for t in 0..n_templates {
            for s in 0..5 {
                let mut row = vec![0.0; width];
                for (j, r) in row.iter_mut().enumerate() {
                    *r = if j % n_templates == t { 1.0 } else { 0.0 } + small();
                }
                if s < 4 {
                    bank.train_curves.push(row);
                    bank.train_template.push(t);
                } else {
                    bank.test_curves.push(row);
                    bank.test_template.push(t);
                }
            }
        }
        let tasks = draw_tasks(16, n_templates, 7);
        let acc = accuracy_for_prefix(&bank, &tasks, width, &default_alpha_grid());
        assert!(acc.mean_accuracy > 0.99, "got {}", acc.mean_accuracy);
        assert!(acc.std_accuracy < 0.05);
    }

    #[test]
    fn baseline_reads_inputs_directly() {
        // widely separated templates with tiny noise: the raw inputs are
        // linearly separable for most random labelings only when a single
        // threshold works, so accuracy is high but imperfect in general;
        // with 2 templates it is perfect
        let cfg = EnsembleConfig {
            n_templates: 2,
            n_per_template: 10,
            n_train_per_template: 8,
            noise_std: 0.01,
            seed: 3,
            ..EnsembleConfig::default()
        };
        let e = draw_ensemble(&cfg);
        let tasks = draw_tasks(4, 2, 11);
        let acc = baseline_accuracy(&e, &tasks, &default_alpha_grid());
        assert!(acc.mean_accuracy > 0.99, "got {}", acc.mean_accuracy);
    }

    #[test]
    fn prefix_must_stay_in_range() {
        let bank = CurveBank {
            train_curves: vec![vec![0.0; 5]; 4],
            train_template: vec![0, 0, 1, 1],
            test_curves: vec![vec![0.0; 5]; 2],
            test_template: vec![0, 1],
            n_steps: 5,
        };
        let tasks = draw_tasks(2, 2, 1);
        let r = std::panic::catch_unwind(|| {
            accuracy_for_prefix(&bank, &tasks, 6, &[0.1]);
        });
        assert!(r.is_err());
    }
}

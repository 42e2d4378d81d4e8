//! Ridge regression with an unpenalized intercept and exact leave-one-out
//! selection of the penalty.
//!
//! One SVD of the centered feature matrix serves every target and every
//! penalty value: shrinkage factors, leverages, and weights are all spectral
//! functions. The leave-one-out residual r / (1 - h) is exact for penalized
//! least squares, so model selection costs no refits.

use nalgebra::{DMatrix, DVector};

pub struct RidgeCv {
    u: DMatrix<f64>,
    /// squared entries of u, reused for leverages
    u2: DMatrix<f64>,
    s: DVector<f64>,
    v_t: DMatrix<f64>,
    feature_means: Vec<f64>,
    n: usize,
}

#[derive(Debug, Clone)]
pub struct RidgeFit {
    pub weights: Vec<f64>,
    pub intercept: f64,
    /// the selected penalty
    pub alpha: f64,
    pub loo_mse: f64,
}

impl RidgeFit {
    pub fn predict(&self, x: &[f64]) -> f64 {
        self.intercept
            + self
                .weights
                .iter()
                .zip(x)
                .map(|(w, v)| w * v)
                .sum::<f64>()
    }
}

impl RidgeCv {
    /// Center the columns of `features` (rows are samples) and factorize.
    pub fn new(features: &DMatrix<f64>) -> Self {
        let n = features.nrows();
        let p = features.ncols();
        assert!(n > 0 && p > 0, "empty feature matrix");
        let feature_means: Vec<f64> =
            (0..p).map(|j| features.column(j).mean()).collect();
        let mut centered = features.clone();
        for j in 0..p {
            let m = feature_means[j];
            for i in 0..n {
                centered[(i, j)] -= m;
            }
        }
        let svd = centered.svd(true, true);
        let u = svd.u.expect("svd requested u");
        let v_t = svd.v_t.expect("svd requested v_t");
        let u2 = u.map(|v| v * v);
        Self {
            u,
            u2,
            s: svd.singular_values,
            v_t,
            feature_means,
            n,
        }
    }

    /// Diagonal of the hat matrix at penalty `alpha`, intercept included.
    fn leverages(&self, alpha: f64) -> Vec<f64> {
        let r = self.s.len();
        let shrink: Vec<f64> = (0..r)
            .map(|k| {
                let s2 = self.s[k] * self.s[k];
                s2 / (s2 + alpha)
            })
            .collect();
        (0..self.n)
            .map(|i| {
                let mut h = 1.0 / self.n as f64;
                for (k, f) in shrink.iter().enumerate() {
                    h += self.u2[(i, k)] * f;
                }
                h
            })
            .collect()
    }

    /// Fit one target, selecting the penalty with the lowest leave-one-out
    /// mean squared error. Ties keep the earliest alpha in the slice. All
    /// penalties must be positive.
    pub fn fit(&self, y: &[f64], alphas: &[f64]) -> RidgeFit {
        self.fit_many(std::slice::from_ref(&y.to_vec()), alphas)
            .pop()
            .unwrap()
    }

    /// Fit many targets over one shared factorization and leverage set.
    pub fn fit_many(&self, targets: &[Vec<f64>], alphas: &[f64]) -> Vec<RidgeFit> {
        assert!(!alphas.is_empty(), "no penalties to select from");
        assert!(
            alphas.iter().all(|&a| a > 0.0 && a.is_finite()),
            "penalties must be positive and finite"
        );
        let n = self.n;
        let r = self.s.len();
        let lev: Vec<Vec<f64>> = alphas.iter().map(|&a| self.leverages(a)).collect();
        targets
            .iter()
            .map(|y| {
                assert_eq!(y.len(), n, "target length mismatch");
                let y_mean = y.iter().sum::<f64>() / n as f64;
                let yc: Vec<f64> = y.iter().map(|v| v - y_mean).collect();
                // b = U' yc
                let mut b = vec![0.0; r];
                for (k, bk) in b.iter_mut().enumerate() {
                    let mut s = 0.0;
                    for i in 0..n {
                        s += self.u[(i, k)] * yc[i];
                    }
                    *bk = s;
                }
                let mut best: Option<(usize, f64)> = None;
                for (ai, &alpha) in alphas.iter().enumerate() {
                    let mut mse = 0.0;
                    for i in 0..n {
                        let mut fitted = y_mean;
                        for k in 0..r {
                            let s2 = self.s[k] * self.s[k];
                            fitted += self.u[(i, k)] * (s2 / (s2 + alpha)) * b[k];
                        }
                        let denom = (1.0 - lev[ai][i]).max(1e-12);
                        let res = (y[i] - fitted) / denom;
                        mse += res * res;
                    }
                    mse /= n as f64;
                    if best.is_none_or(|(_, m)| mse < m) {
                        best = Some((ai, mse));
                    }
                }
                let (ai, loo_mse) = best.unwrap();
                let alpha = alphas[ai];
                // w = V diag(s / (s^2 + alpha)) b
                let p = self.v_t.ncols();
                let mut weights = vec![0.0; p];
                for k in 0..r {
                    let g = self.s[k] / (self.s[k] * self.s[k] + alpha) * b[k];
                    if g != 0.0 {
                        for (j, w) in weights.iter_mut().enumerate() {
                            *w += self.v_t[(k, j)] * g;
                        }
                    }
                }
                let intercept = y_mean
                    - weights
                        .iter()
                        .zip(&self.feature_means)
                        .map(|(w, m)| w * m)
                        .sum::<f64>();
                RidgeFit {
                    weights,
                    intercept,
                    alpha,
                    loo_mse,
                }
            })
            .collect()
    }
}

/// The 7-point geometric penalty grid used by the readout benchmarks:
/// 10^(-3 + 3k/6) for k = 0..6, spanning 1e-3 to 1.
pub fn default_alpha_grid() -> Vec<f64> {
    (0..7).map(|k| 10f64.powf(-3.0 + 3.0 * k as f64 / 6.0)).collect()
}

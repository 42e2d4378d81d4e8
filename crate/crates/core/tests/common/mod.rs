//! Brute-force reference optimizer for small box-constrained equality LPs,
//! plus a deterministic random-program generator. The reference enumerates
//! candidate vertices directly and never calls the simplex code, so the two
//! can disagree only if one of them is wrong.

use rand::Rng;
use reservoirflux::lp::LinearProgram;

pub struct DenseLp {
    pub n_rows: usize,
    pub n_cols: usize,
    /// row-major m x n
    pub a: Vec<f64>,
    pub c: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl DenseLp {
    pub fn to_program(&self) -> LinearProgram {
        let mut lp = LinearProgram::new(self.n_rows, self.n_cols);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                let v = self.a[i * self.n_cols + j];
                if v != 0.0 {
                    lp.add_entry(i, j, v).unwrap();
                }
            }
        }
        for j in 0..self.n_cols {
            lp.set_bounds(j, self.lower[j], self.upper[j]).unwrap();
            lp.set_objective(j, self.c[j]);
        }
        for (i, &b) in self.rhs.iter().enumerate() {
            lp.set_rhs(i, b);
        }
        lp
    }
}

/// Solve A_f x_f = r by Gaussian elimination; None when the system is
/// inconsistent or A_f is not of full column rank.
fn solve_square_ish(m: usize, cols: &[usize], a: &[f64], n_cols: usize, r: &[f64]) -> Option<Vec<f64>> {
    let k = cols.len();
    // augmented matrix, row-major m x (k + 1)
    let w = k + 1;
    let mut t = vec![0.0; m * w];
    for i in 0..m {
        for (jj, &j) in cols.iter().enumerate() {
            t[i * w + jj] = a[i * n_cols + j];
        }
        t[i * w + k] = r[i];
    }
    let mut row = 0;
    let mut pivot_cols = Vec::new();
    for col in 0..k {
        let mut best = row;
        let mut best_v = 0.0;
        for i in row..m {
            let v = t[i * w + col].abs();
            if v > best_v {
                best_v = v;
                best = i;
            }
        }
        if best_v < 1e-9 {
            // rank-deficient in this column: not full column rank
            return None;
        }
        if best != row {
            for c in 0..w {
                t.swap(row * w + c, best * w + c);
            }
        }
        let p = t[row * w + col];
        for i in 0..m {
            if i != row {
                let f = t[i * w + col] / p;
                if f != 0.0 {
                    for c in col..w {
                        t[i * w + c] -= f * t[row * w + c];
                    }
                }
            }
        }
        pivot_cols.push((row, col));
        row += 1;
        if row == m {
            break;
        }
    }
    if pivot_cols.len() < k {
        return None;
    }
    // consistency of the remaining rows
    for i in row..m {
        if t[i * w + k].abs() > 1e-7 {
            return None;
        }
    }
    let mut x = vec![0.0; k];
    for &(rr, cc) in &pivot_cols {
        x[cc] = t[rr * w + k] / t[rr * w + cc];
    }
    Some(x)
}

/// Maximum of c'x over {A x = b, l <= x <= u} by enumerating every candidate
/// vertex: a subset of columns solved exactly, the rest pinned to a bound.
/// Requires all bounds finite. Returns None when no candidate is feasible.
pub fn enumerate_optimum(lp: &DenseLp) -> Option<f64> {
    let n = lp.n_cols;
    let m = lp.n_rows;
    for j in 0..n {
        assert!(lp.lower[j].is_finite() && lp.upper[j].is_finite());
    }
    let max_free = n.min(m);
    let mut best: Option<f64> = None;
    // iterate subsets of {0..n} as bitmasks, keeping |subset| <= max_free
    for mask in 0u32..(1u32 << n) {
        let free: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        if free.len() > max_free {
            continue;
        }
        let pinned: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 0).collect();
        // every pinned variable sits at lower or upper
        for pin_mask in 0u32..(1u32 << pinned.len()) {
            let mut x = vec![0.0; n];
            for (idx, &j) in pinned.iter().enumerate() {
                x[j] = if pin_mask >> idx & 1 == 1 {
                    lp.upper[j]
                } else {
                    lp.lower[j]
                };
            }
            let mut r = lp.rhs.clone();
            for &j in &pinned {
                if x[j] != 0.0 {
                    for i in 0..m {
                        r[i] -= lp.a[i * n + j] * x[j];
                    }
                }
            }
            let solved = if free.is_empty() {
                if r.iter().any(|v| v.abs() > 1e-7) {
                    continue;
                }
                Some(Vec::new())
            } else {
                solve_square_ish(m, &free, &lp.a, n, &r)
            };
            let Some(xf) = solved else { continue };
            let mut ok = true;
            for (idx, &j) in free.iter().enumerate() {
                if xf[idx] < lp.lower[j] - 1e-9 || xf[idx] > lp.upper[j] + 1e-9 {
                    ok = false;
                    break;
                }
                x[j] = xf[idx];
            }
            if !ok {
                continue;
            }
            let obj: f64 = lp.c.iter().zip(&x).map(|(c, v)| c * v).sum();
            best = Some(match best {
                None => obj,
                Some(b) => b.max(obj),
            });
        }
    }
    best
}

/// Random program with exact integer data: up to 6 variables and 4 balance
/// rows, coefficients in [-2, 2], objective in [-3, 3], finite integer
/// bounds in [-3, 3]. Bound pairs are sorted, so some variables end up
/// strictly positive or negative and conflicting rows give infeasible cases.
pub fn random_program(rng: &mut impl Rng) -> DenseLp {
    let n = rng.gen_range(1..=6);
    let m = rng.gen_range(1..=4);
    let mut a = vec![0.0; m * n];
    for v in a.iter_mut() {
        if rng.gen_bool(0.7) {
            *v = rng.gen_range(-2..=2) as f64;
        }
    }
    let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-3..=3) as f64).collect();
    let mut lower = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    for _ in 0..n {
        let p = rng.gen_range(-3..=3) as f64;
        let q = rng.gen_range(-3..=3) as f64;
        lower.push(p.min(q));
        upper.push(p.max(q));
    }
    DenseLp {
        n_rows: m,
        n_cols: n,
        a,
        c,
        lower,
        upper,
        rhs: vec![0.0; m],
    }
}

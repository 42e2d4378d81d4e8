//! Bounded-variable linear programming by the revised simplex method.
//!
//! Solves `max c'x  s.t.  A x = b,  l <= x <= u` with finite or infinite
//! bounds. Phase 1 drives a full basis of artificial variables to zero;
//! phase 2 optimizes the true objective. The basis inverse is kept dense and
//! updated in product form, with periodic refactorization to bound drift.
//! Pricing is by steepest reduced cost with a switch to Bland's rule after a
//! run of degenerate steps, so the method terminates on cycling instances.
//! Every choice (pricing, ratio-test tie-breaks) is deterministic: the same
//! program yields bitwise-identical results.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective value; meaningful only when status is Optimal.
    pub objective: f64,
    /// Variable values; zeros unless status is Optimal.
    pub values: Vec<f64>,
}

#[derive(Debug, Error)]
pub enum LpError {
    #[error("variable {var} has invalid bounds [{lower}, {upper}]")]
    InvalidBounds { var: usize, lower: f64, upper: f64 },
    #[error("entry ({row}, {col}) outside a {rows} x {cols} program")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("non-finite value at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("simplex did not converge within {0} iterations")]
    IterationLimit(usize),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Primal feasibility tolerance on bounds and row residuals.
    pub feas_tol: f64,
    /// Dual tolerance on reduced costs at termination.
    pub opt_tol: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            feas_tol: 1e-9,
            opt_tol: 1e-9,
            max_iterations: 50_000,
        }
    }
}

/// `max c'x  s.t.  A x = b, l <= x <= u`, columns stored sparse.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    n_rows: usize,
    cols: Vec<Vec<(usize, f64)>>,
    objective: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    rhs: Vec<f64>,
}

impl LinearProgram {
    /// New program with all-zero matrix, objective, and rhs; every variable
    /// starts with bounds `[0, +inf)`.
    pub fn new(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            cols: vec![Vec::new(); n_cols],
            objective: vec![0.0; n_cols],
            lower: vec![0.0; n_cols],
            upper: vec![f64::INFINITY; n_cols],
            rhs: vec![0.0; n_rows],
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    /// Append `coeff` to column `col` of row `row`. Duplicate entries for the
    /// same position are summed by the solver.
    pub fn add_entry(&mut self, row: usize, col: usize, coeff: f64) -> Result<(), LpError> {
        if row >= self.n_rows || col >= self.cols.len() {
            return Err(LpError::EntryOutOfRange {
                row,
                col,
                rows: self.n_rows,
                cols: self.cols.len(),
            });
        }
        if !coeff.is_finite() {
            return Err(LpError::NonFinite { row, col });
        }
        self.cols[col].push((row, coeff));
        Ok(())
    }

    pub fn set_objective(&mut self, col: usize, coeff: f64) {
        self.objective[col] = coeff;
    }

    pub fn objective_coefficients(&self) -> &[f64] {
        &self.objective
    }

    /// Bounds may be infinite but never NaN or inverted.
    pub fn set_bounds(&mut self, col: usize, lower: f64, upper: f64) -> Result<(), LpError> {
        if lower.is_nan() || upper.is_nan() || lower > upper {
            return Err(LpError::InvalidBounds {
                var: col,
                lower,
                upper,
            });
        }
        self.lower[col] = lower;
        self.upper[col] = upper;
        Ok(())
    }

    pub fn bounds(&self, col: usize) -> (f64, f64) {
        (self.lower[col], self.upper[col])
    }

    pub fn set_rhs(&mut self, row: usize, value: f64) {
        self.rhs[row] = value;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VStat {
    Basic,
    AtLower,
    AtUpper,
    Free,
}

/// Opaque restart point: statuses of all variables plus the basic set in row
/// order. Reusing it on a program with the same shape (possibly different
/// bounds or rhs) skips phase 1 when the old basis is still feasible.
#[derive(Debug, Clone)]
pub struct Basis {
    statuses: Vec<VStat>,
    order: Vec<usize>,
}

const PIVOT_TOL: f64 = 1e-11;
const DEGEN_STEP: f64 = 1e-10;
const BLAND_TRIGGER: usize = 100;
const REFACTOR_EVERY: usize = 128;

struct Simplex<'a> {
    lp: &'a LinearProgram,
    opts: SolverOptions,
    m: usize,
    n: usize,
    /// artificial column k is sign[k] * e_k
    art_sign: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    status: Vec<VStat>,
    x: Vec<f64>,
    basis: Vec<usize>,
    /// B^{-1}, column-major: element (r, c) at binv[c * m + r]
    binv: Vec<f64>,
    cost: Vec<f64>,
    y: Vec<f64>,
    w: Vec<f64>,
    iterations: usize,
    pivots_since_refactor: usize,
    degenerate_run: usize,
    bland: bool,
}

impl<'a> Simplex<'a> {
    fn new(lp: &'a LinearProgram, opts: SolverOptions) -> Self {
        let m = lp.n_rows;
        let n = lp.cols.len();
        Self {
            lp,
            opts,
            m,
            n,
            art_sign: vec![1.0; m],
            lower: Vec::new(),
            upper: Vec::new(),
            status: Vec::new(),
            x: Vec::new(),
            basis: Vec::new(),
            binv: vec![0.0; m * m],
            cost: vec![0.0; n + m],
            y: vec![0.0; m],
            w: vec![0.0; m],
            iterations: 0,
            pivots_since_refactor: 0,
            degenerate_run: 0,
            bland: false,
        }
    }

    fn col_entries(&self, j: usize) -> ColIter<'_> {
        if j < self.n {
            ColIter::Structural(self.lp.cols[j].iter())
        } else {
            ColIter::Artificial(Some((j - self.n, self.art_sign[j - self.n])))
        }
    }

    /// Nonbasic variables rest on the finite bound closer to zero; free
    /// variables rest at zero.
    fn initial_status(lo: f64, hi: f64) -> (VStat, f64) {
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => {
                if lo.abs() <= hi.abs() {
                    (VStat::AtLower, lo)
                } else {
                    (VStat::AtUpper, hi)
                }
            }
            (true, false) => (VStat::AtLower, lo),
            (false, true) => (VStat::AtUpper, hi),
            (false, false) => (VStat::Free, 0.0),
        }
    }

    fn cold_start(&mut self) {
        self.lower = self.lp.lower.clone();
        self.upper = self.lp.upper.clone();
        self.lower.extend(std::iter::repeat(0.0).take(self.m));
        self.upper.extend(std::iter::repeat(f64::INFINITY).take(self.m));
        self.status = Vec::with_capacity(self.n + self.m);
        self.x = Vec::with_capacity(self.n + self.m);
        for j in 0..self.n {
            let (st, v) = Self::initial_status(self.lower[j], self.upper[j]);
            self.status.push(st);
            self.x.push(v);
        }
        // residual the artificials must cover
        let mut r = self.lp.rhs.clone();
        for j in 0..self.n {
            let xj = self.x[j];
            if xj != 0.0 {
                for &(i, v) in &self.lp.cols[j] {
                    r[i] -= v * xj;
                }
            }
        }
        self.basis.clear();
        for k in 0..self.m {
            self.art_sign[k] = if r[k] >= 0.0 { 1.0 } else { -1.0 };
            self.status.push(VStat::Basic);
            self.x.push(r[k].abs());
            self.basis.push(self.n + k);
        }
        self.binv.fill(0.0);
        for k in 0..self.m {
            self.binv[k * self.m + k] = self.art_sign[k];
        }
    }

    /// Rebuild B^{-1} from the current basis by Gauss-Jordan elimination.
    fn refactor(&mut self) -> Result<(), LpError> {
        let m = self.m;
        let mut b = vec![0.0; m * m]; // column-major
        for (r, &j) in self.basis.iter().enumerate() {
            for (i, v) in self.col_entries(j) {
                b[r * m + i] += v;
            }
        }
        let mut inv = vec![0.0; m * m];
        for k in 0..m {
            inv[k * m + k] = 1.0;
        }
        for col in 0..m {
            // partial pivot on the largest remaining entry
            let mut piv_row = col;
            let mut piv_val = b[col * m + col].abs();
            for r in col + 1..m {
                let v = b[col * m + r].abs();
                if v > piv_val {
                    piv_val = v;
                    piv_row = r;
                }
            }
            if piv_val < 1e-12 {
                return Err(LpError::Numerical("singular basis".to_string()));
            }
            if piv_row != col {
                for c in 0..m {
                    b.swap(c * m + col, c * m + piv_row);
                    inv.swap(c * m + col, c * m + piv_row);
                }
            }
            let d = b[col * m + col];
            for c in 0..m {
                b[c * m + col] /= d;
                inv[c * m + col] /= d;
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let f = b[col * m + r];
                if f != 0.0 {
                    for c in 0..m {
                        b[c * m + r] -= f * b[c * m + col];
                        inv[c * m + r] -= f * inv[c * m + col];
                    }
                }
            }
        }
        // inv now holds B^{-1} where element (r, c) sits at inv[c * m + r]
        self.binv = inv;
        self.pivots_since_refactor = 0;
        Ok(())
    }

    /// Recompute basic values from nonbasic rest points.
    fn recompute_basics(&mut self) {
        let m = self.m;
        let mut v = self.lp.rhs.clone();
        for j in 0..self.n + m {
            if self.status[j] != VStat::Basic && self.x[j] != 0.0 {
                let xj = self.x[j];
                for (i, a) in self.col_entries(j) {
                    v[i] -= a * xj;
                }
            }
        }
        for r in 0..m {
            let mut s = 0.0;
            for i in 0..m {
                s += self.binv[i * m + r] * v[i];
            }
            self.x[self.basis[r]] = s;
        }
    }

    fn price(&mut self) {
        let m = self.m;
        for i in 0..m {
            let mut s = 0.0;
            let col = &self.binv[i * m..(i + 1) * m];
            for (r, &b) in col.iter().enumerate() {
                let c = self.cost[self.basis[r]];
                if c != 0.0 {
                    s += c * b;
                }
            }
            self.y[i] = s;
        }
    }

    fn reduced_cost(&self, j: usize) -> f64 {
        let mut d = self.cost[j];
        for (i, v) in self.col_entries(j) {
            d -= self.y[i] * v;
        }
        d
    }

    /// Entering variable and its direction, or None at optimality.
    fn choose_entering(&self) -> Option<(usize, f64, f64)> {
        let tol = self.opts.opt_tol;
        let mut best: Option<(usize, f64, f64)> = None;
        for j in 0..self.n + self.m {
            if self.status[j] == VStat::Basic || self.lower[j] == self.upper[j] {
                continue;
            }
            let d = self.reduced_cost(j);
            let dir = match self.status[j] {
                VStat::AtLower if d > tol => 1.0,
                VStat::AtUpper if d < -tol => -1.0,
                VStat::Free if d.abs() > tol => d.signum(),
                _ => continue,
            };
            if self.bland {
                return Some((j, dir, d));
            }
            match &best {
                Some((_, _, bd)) if d.abs() <= bd.abs() => {}
                _ => best = Some((j, dir, d)),
            }
        }
        best
    }

    fn compute_direction(&mut self, j: usize) {
        let m = self.m;
        let mut w = std::mem::take(&mut self.w);
        w.fill(0.0);
        for (i, v) in self.col_entries(j) {
            if v != 0.0 {
                let col = &self.binv[i * m..(i + 1) * m];
                for (r, &b) in col.iter().enumerate() {
                    w[r] += v * b;
                }
            }
        }
        self.w = w;
    }

    /// One simplex step. Returns false at (phase-)optimality.
    fn step(&mut self) -> Result<bool, LpError> {
        self.price();
        let Some((j, dir, _)) = self.choose_entering() else {
            return Ok(false);
        };
        self.compute_direction(j);

        // limit from the entering variable's own opposite bound
        let own_range = self.upper[j] - self.lower[j];
        let mut t = if own_range.is_finite() {
            own_range
        } else {
            f64::INFINITY
        };
        let mut leaving: Option<(usize, bool)> = None; // (row, hits_upper)
        for r in 0..self.m {
            let delta = -dir * self.w[r];
            if delta.abs() <= PIVOT_TOL {
                continue;
            }
            let bv = self.basis[r];
            let (limit, hits_upper) = if delta > 0.0 {
                (self.upper[bv], true)
            } else {
                (self.lower[bv], false)
            };
            if !limit.is_finite() {
                continue;
            }
            let ratio = ((limit - self.x[bv]) / delta).max(0.0);
            let replace = match leaving {
                None => ratio < t - 1e-12,
                Some((cur, _)) => {
                    ratio < t - 1e-12
                        || (ratio < t + 1e-12
                            && if self.bland {
                                self.basis[r] < self.basis[cur]
                            } else {
                                self.w[r].abs() > self.w[cur].abs()
                            })
                }
            };
            if replace {
                t = ratio.min(t);
                leaving = Some((r, hits_upper));
            }
        }

        if t.is_infinite() {
            return Err(LpError::Numerical("unbounded direction".to_string()));
        }

        self.iterations += 1;
        if self.iterations > self.opts.max_iterations {
            return Err(LpError::IterationLimit(self.opts.max_iterations));
        }
        if t < DEGEN_STEP {
            self.degenerate_run += 1;
            if self.degenerate_run > BLAND_TRIGGER {
                self.bland = true;
            }
        } else {
            self.degenerate_run = 0;
            self.bland = false;
        }

        // move
        self.x[j] += dir * t;
        for r in 0..self.m {
            if self.w[r] != 0.0 {
                let bv = self.basis[r];
                self.x[bv] -= dir * t * self.w[r];
            }
        }

        match leaving {
            None => {
                // bound flip: variable traverses its whole range
                self.status[j] = if dir > 0.0 {
                    self.x[j] = self.upper[j];
                    VStat::AtUpper
                } else {
                    self.x[j] = self.lower[j];
                    VStat::AtLower
                };
            }
            Some((r, hits_upper)) => {
                let out = self.basis[r];
                self.status[out] = if hits_upper {
                    self.x[out] = self.upper[out];
                    VStat::AtUpper
                } else {
                    self.x[out] = self.lower[out];
                    VStat::AtLower
                };
                self.pivot_update(r)?;
                self.basis[r] = j;
                self.status[j] = VStat::Basic;
                self.pivots_since_refactor += 1;
                if self.pivots_since_refactor >= REFACTOR_EVERY {
                    self.refactor()?;
                    self.recompute_basics();
                }
            }
        }
        Ok(true)
    }

    /// Product-form update of B^{-1} for a pivot in row `r` with direction
    /// column already in `self.w`.
    fn pivot_update(&mut self, r: usize) -> Result<(), LpError> {
        let m = self.m;
        let wr = self.w[r];
        if wr.abs() <= PIVOT_TOL {
            return Err(LpError::Numerical("vanishing pivot".to_string()));
        }
        for c in 0..m {
            let col = &mut self.binv[c * m..(c + 1) * m];
            let pr = col[r] / wr;
            if pr != 0.0 {
                for (k, wk) in self.w.iter().enumerate() {
                    if k != r && *wk != 0.0 {
                        col[k] -= wk * pr;
                    }
                }
            }
            col[r] = pr;
        }
        Ok(())
    }

    fn run(&mut self) -> Result<(), LpError> {
        self.bland = false;
        self.degenerate_run = 0;
        while self.step()? {}
        Ok(())
    }

    fn phase1(&mut self) -> Result<bool, LpError> {
        for c in self.cost.iter_mut().take(self.n) {
            *c = 0.0;
        }
        for c in self.cost.iter_mut().skip(self.n) {
            *c = -1.0;
        }
        match self.run() {
            Ok(()) => {}
            // phase-1 objective is bounded; an unbounded ray is a numerical
            // artifact and surfaces as such
            Err(e) => return Err(e),
        }
        let infeas: f64 = self.x[self.n..].iter().sum();
        let scale = 1.0 + self.lp.rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        if infeas > self.opts.feas_tol * scale * 10.0 {
            return Ok(false);
        }
        // artificials may stay basic at zero but can never move again
        for k in 0..self.m {
            self.lower[self.n + k] = 0.0;
            self.upper[self.n + k] = 0.0;
            if self.status[self.n + k] != VStat::Basic {
                self.x[self.n + k] = 0.0;
            }
        }
        Ok(true)
    }

    fn phase2(&mut self) -> Result<LpStatus, LpError> {
        self.cost[..self.n].copy_from_slice(&self.lp.objective);
        for c in self.cost.iter_mut().skip(self.n) {
            *c = 0.0;
        }
        match self.run() {
            Ok(()) => Ok(LpStatus::Optimal),
            Err(LpError::Numerical(msg)) if msg == "unbounded direction" => {
                Ok(LpStatus::Unbounded)
            }
            Err(e) => Err(e),
        }
    }

    fn objective_value(&self) -> f64 {
        self.lp
            .objective
            .iter()
            .zip(&self.x)
            .map(|(c, x)| c * x)
            .sum()
    }

    /// Max row residual |A x - b| over all rows.
    fn residual(&self) -> f64 {
        let mut r = self.lp.rhs.clone();
        for j in 0..self.n + self.m {
            let xj = self.x[j];
            if xj != 0.0 {
                for (i, v) in self.col_entries(j) {
                    r[i] -= v * xj;
                }
            }
        }
        r.iter().fold(0.0f64, |a, b| a.max(b.abs()))
    }

    fn certify(&mut self) -> Result<(), LpError> {
        let scale = 1.0
            + self.lp.rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()))
            + self.x.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        for attempt in 0..2 {
            let mut ok = self.residual() <= 1e3 * self.opts.feas_tol * scale;
            if ok {
                for j in 0..self.n {
                    if self.x[j] < self.lower[j] - 1e3 * self.opts.feas_tol * scale
                        || self.x[j] > self.upper[j] + 1e3 * self.opts.feas_tol * scale
                    {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Ok(());
            }
            if attempt == 0 {
                self.refactor()?;
                self.recompute_basics();
                if self.phase2()? != LpStatus::Optimal {
                    break;
                }
            }
        }
        Err(LpError::Numerical(
            "solution failed the feasibility certificate".to_string(),
        ))
    }

    fn snapshot(&self) -> Basis {
        Basis {
            statuses: self.status.clone(),
            order: self.basis.clone(),
        }
    }

    /// True when the snapshot could be installed and is primal feasible.
    fn try_warm_start(&mut self, basis: &Basis) -> bool {
        if basis.statuses.len() != self.n + self.m || basis.order.len() != self.m {
            return false;
        }
        self.lower = self.lp.lower.clone();
        self.upper = self.lp.upper.clone();
        self.lower.extend(std::iter::repeat(0.0).take(self.m));
        self.upper.extend(std::iter::repeat(0.0).take(self.m));
        self.art_sign.fill(1.0);
        self.status = basis.statuses.clone();
        self.basis = basis.order.clone();
        self.x = vec![0.0; self.n + self.m];
        for j in 0..self.n + self.m {
            match self.status[j] {
                VStat::Basic => {}
                VStat::AtLower => {
                    if !self.lower[j].is_finite() {
                        return false;
                    }
                    self.x[j] = self.lower[j];
                }
                VStat::AtUpper => {
                    if !self.upper[j].is_finite() {
                        return false;
                    }
                    self.x[j] = self.upper[j];
                }
                VStat::Free => self.x[j] = 0.0,
            }
        }
        if self.refactor().is_err() {
            return false;
        }
        self.recompute_basics();
        let scale = 1.0 + self.lp.rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        let slack = 10.0 * self.opts.feas_tol * scale;
        for r in 0..self.m {
            let bv = self.basis[r];
            if self.x[bv] < self.lower[bv] - slack || self.x[bv] > self.upper[bv] + slack {
                return false;
            }
        }
        true
    }

    fn solution(&self, status: LpStatus) -> LpSolution {
        match status {
            LpStatus::Optimal => {
                let mut values: Vec<f64> = self.x[..self.n].to_vec();
                for (j, v) in values.iter_mut().enumerate() {
                    *v = v.clamp(
                        self.lp.lower[j],
                        self.lp.upper[j].max(self.lp.lower[j]),
                    );
                }
                LpSolution {
                    status,
                    objective: self.objective_value(),
                    values,
                }
            }
            _ => LpSolution {
                status,
                objective: 0.0,
                values: vec![0.0; self.n],
            },
        }
    }
}

enum ColIter<'a> {
    Structural(std::slice::Iter<'a, (usize, f64)>),
    Artificial(Option<(usize, f64)>),
}

impl Iterator for ColIter<'_> {
    type Item = (usize, f64);

    fn next(&mut self) -> Option<(usize, f64)> {
        match self {
            ColIter::Structural(it) => it.next().copied(),
            ColIter::Artificial(slot) => slot.take(),
        }
    }
}

/// Solve with default options.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    solve_with(lp, &SolverOptions::default())
}

pub fn solve_with(lp: &LinearProgram, opts: &SolverOptions) -> Result<LpSolution, LpError> {
    solve_warm(lp, opts, None).map(|(s, _)| s)
}

/// Solve, optionally restarting from a previous basis of a same-shaped
/// program. Returns the solution and the basis at termination.
pub fn solve_warm(
    lp: &LinearProgram,
    opts: &SolverOptions,
    warm: Option<&Basis>,
) -> Result<(LpSolution, Basis), LpError> {
    let mut s = Simplex::new(lp, *opts);
    let warmed = warm.is_some_and(|b| s.try_warm_start(b));
    if !warmed {
        s.cold_start();
        if !s.phase1()? {
            let sol = s.solution(LpStatus::Infeasible);
            return Ok((sol, s.snapshot()));
        }
    }
    let status = s.phase2()?;
    if status == LpStatus::Optimal {
        // a fresh inverse clears drift the product-form updates accumulate;
        // on well-scaled bases the recomputed values are exact
        s.refactor()?;
        s.recompute_basics();
        s.certify()?;
    }
    Ok((s.solution(status), s.snapshot()))
}

/// Re-solve with the objective pinned at `objective_value` and the summed
/// absolute value of `l1_vars` minimized. This removes degenerate freedom
/// from the reported values of those variables.
///
/// The pin allows slack `opts.opt_tol` downward, never upward, so the
/// secondary solve cannot trade objective for sparsity.
pub fn resolve_min_abs(
    lp: &LinearProgram,
    objective_value: f64,
    l1_vars: &[usize],
    opts: &SolverOptions,
    warm: Option<&Basis>,
) -> Result<(LpSolution, Basis), LpError> {
    let m = lp.n_rows;
    let n = lp.n_cols();
    let k = l1_vars.len();
    // layout: [0..n) original, [n..n+k) t_i, n+k pin slack, then 2k row slacks
    let mut ext = LinearProgram::new(m + 1 + 2 * k, n + 1 + 3 * k);
    for j in 0..n {
        for &(i, v) in &lp.cols[j] {
            ext.add_entry(i, j, v)?;
        }
        ext.set_bounds(j, lp.lower[j], lp.upper[j])?;
    }
    for (i, &b) in lp.rhs.iter().enumerate() {
        ext.set_rhs(i, b);
    }
    // pin row: c'v - s0 = z - opt_tol
    for (j, &c) in lp.objective.iter().enumerate() {
        if c != 0.0 {
            ext.add_entry(m, j, c)?;
        }
    }
    ext.add_entry(m, n + k, -1.0)?;
    ext.set_rhs(m, objective_value - opts.opt_tol);
    for (idx, &j) in l1_vars.iter().enumerate() {
        let t = n + idx;
        ext.set_objective(t, -1.0);
        // t - v - s1 = 0  and  t + v - s2 = 0
        let r1 = m + 1 + 2 * idx;
        let r2 = r1 + 1;
        ext.add_entry(r1, t, 1.0)?;
        ext.add_entry(r1, j, -1.0)?;
        ext.add_entry(r1, n + 1 + k + 2 * idx, -1.0)?;
        ext.add_entry(r2, t, 1.0)?;
        ext.add_entry(r2, j, 1.0)?;
        ext.add_entry(r2, n + 1 + k + 2 * idx + 1, -1.0)?;
    }
    let (sol, basis) = solve_warm(&ext, opts, warm)?;
    if sol.status != LpStatus::Optimal {
        // the pinned program is feasible by construction up to roundoff; a
        // failure here means the pin tolerance was too tight for this basis
        return Err(LpError::Numerical(
            "pinned-objective resolve was infeasible".to_string(),
        ));
    }
    let values: Vec<f64> = sol.values[..n].to_vec();
    let objective = lp
        .objective
        .iter()
        .zip(&values)
        .map(|(c, v)| c * v)
        .sum();
    Ok((
        LpSolution {
            status: LpStatus::Optimal,
            objective,
            values,
        },
        basis,
    ))
}

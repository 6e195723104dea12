//! Dense bounded-variable simplex on a condensed (Tucker) tableau.
//!
//! Every row `i` gets a logical variable `r_i = a_i . x` whose bounds encode
//! the row sense, so the system is homogeneous: basic values are always
//! `x_B = T x_N`. The tableau stores only the `m x n` block against the
//! nonbasic slots; a pivot swaps a basic variable into the entering slot.
//!
//! Primal phase 1 minimises the sum of infeasibilities, phase 2 the true
//! cost. The dual simplex reoptimises after bound changes (branch and bound)
//! from a dual-feasible basis.

use crate::model::{Sense, SubproblemModel, VarKind};

pub(crate) const FEAS_TOL: f64 = 1e-7;
const PIVOT_TOL: f64 = 1e-7;
const HARRIS_TOL: f64 = 1e-9;
const DROP_TOL: f64 = 1e-13;
const DEGENERATE_LIMIT: usize = 1000;
const REFRESH_EVERY: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pos {
    Basic(usize),
    Nonbasic(usize),
}

#[derive(Clone, Debug)]
pub(crate) struct Engine {
    m: usize,
    n: usize,
    tab: Vec<f64>,
    d: Vec<f64>,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    pos: Vec<Pos>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    x: Vec<f64>,
    dual_tol: f64,
    pub(crate) iterations: usize,
    pub(crate) max_iterations: usize,
    /// Rows proven infeasible by presolve (empty row with violated rhs).
    trivially_infeasible: bool,
}

impl Engine {
    /// Builds the engine for the LP relaxation of `model`.
    pub(crate) fn new(model: &SubproblemModel) -> Self {
        let n = model.num_columns();
        let mut kept = Vec::new();
        let mut trivially_infeasible = false;
        for row in &model.rows {
            if row.coeffs.is_empty() {
                let ok = match row.sense {
                    Sense::Le => 0.0 <= row.rhs + FEAS_TOL,
                    Sense::Ge => 0.0 >= row.rhs - FEAS_TOL,
                    Sense::Eq => row.rhs.abs() <= FEAS_TOL,
                };
                trivially_infeasible |= !ok;
            } else {
                kept.push(row);
            }
        }
        let m = kept.len();
        let mut tab = vec![0.0; m * n];
        let mut lower = Vec::with_capacity(n + m);
        let mut upper = Vec::with_capacity(n + m);
        let mut cost = Vec::with_capacity(n + m);
        for (j, c) in model.columns.iter().enumerate() {
            let (lo, hi) = match c.kind {
                VarKind::Binary => (c.lower.max(0.0), c.upper.min(1.0)),
                VarKind::Continuous => (c.lower, c.upper),
            };
            lower.push(lo);
            upper.push(hi);
            cost.push(model.objective[j]);
        }
        for (i, row) in kept.iter().enumerate() {
            for &(j, a) in &row.coeffs {
                tab[i * n + j] += a;
            }
            let (lo, hi) = match row.sense {
                Sense::Le => (f64::NEG_INFINITY, row.rhs),
                Sense::Ge => (row.rhs, f64::INFINITY),
                Sense::Eq => (row.rhs, row.rhs),
            };
            lower.push(lo);
            upper.push(hi);
            cost.push(0.0);
        }
        let mut x = vec![0.0; n + m];
        for j in 0..n {
            x[j] = initial_value(lower[j], upper[j]);
        }
        let cmax = cost.iter().fold(0.0f64, |acc, c| acc.max(c.abs()));
        let mut engine = Engine {
            m,
            n,
            tab,
            d: vec![0.0; n],
            basic: (n..n + m).collect(),
            nonbasic: (0..n).collect(),
            pos: (0..n)
                .map(Pos::Nonbasic)
                .chain((0..m).map(Pos::Basic))
                .collect(),
            lower,
            upper,
            cost,
            x,
            dual_tol: 1e-9 * cmax.max(1.0),
            iterations: 0,
            max_iterations: 50 * (n + m) + 10_000,
            trivially_infeasible,
        };
        engine.recompute_basics();
        engine.recompute_reduced_costs();
        engine
    }

    #[inline]
    fn row(&self, i: usize) -> &[f64] {
        &self.tab[i * self.n..(i + 1) * self.n]
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.tab[i * self.n + j]
    }

    fn recompute_basics(&mut self) {
        let xn: Vec<f64> = self.nonbasic.iter().map(|&v| self.x[v]).collect();
        for i in 0..self.m {
            let value: f64 = self.row(i).iter().zip(&xn).map(|(t, v)| t * v).sum();
            self.x[self.basic[i]] = value;
        }
    }

    fn recompute_reduced_costs(&mut self) {
        let mut d: Vec<f64> = self.nonbasic.iter().map(|&v| self.cost[v]).collect();
        for i in 0..self.m {
            let cb = self.cost[self.basic[i]];
            if cb != 0.0 {
                for (dj, t) in d.iter_mut().zip(self.row(i)) {
                    *dj += cb * t;
                }
            }
        }
        self.d = d;
    }

    fn infeasibility(&self, var: usize) -> f64 {
        let v = self.x[var];
        if v < self.lower[var] {
            self.lower[var] - v
        } else if v > self.upper[var] {
            v - self.upper[var]
        } else {
            0.0
        }
    }

    fn max_primal_infeasibility(&self) -> f64 {
        self.basic
            .iter()
            .map(|&v| self.infeasibility(v))
            .fold(0.0, f64::max)
    }

    fn can_increase(&self, var: usize) -> bool {
        self.x[var] < self.upper[var]
    }

    fn can_decrease(&self, var: usize) -> bool {
        self.x[var] > self.lower[var]
    }

    /// Exchanges basic row `r` with nonbasic slot `q`.
    fn pivot(&mut self, r: usize, q: usize) {
        let n = self.n;
        let p = self.at(r, q);
        debug_assert!(p.abs() > 0.0);
        let prow: Vec<(usize, f64)> = self
            .row(r)
            .iter()
            .enumerate()
            .filter(|&(j, &v)| j != q && v != 0.0)
            .map(|(j, &v)| (j, v))
            .collect();
        let dense = prow.len() * 3 > n;
        let pivot_row: Vec<f64> = if dense { self.row(r).to_vec() } else { Vec::new() };
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let a = self.tab[i * n + q];
            if a == 0.0 {
                continue;
            }
            let f = a / p;
            let row = &mut self.tab[i * n..(i + 1) * n];
            if dense {
                for (t, &pv) in row.iter_mut().zip(&pivot_row) {
                    *t -= f * pv;
                }
                for t in row.iter_mut() {
                    if t.abs() < DROP_TOL {
                        *t = 0.0;
                    }
                }
            } else {
                for &(j, pv) in &prow {
                    let t = &mut row[j];
                    *t -= f * pv;
                    if t.abs() < DROP_TOL {
                        *t = 0.0;
                    }
                }
            }
            row[q] = f;
        }
        let dq = self.d[q];
        if dq != 0.0 {
            let f = dq / p;
            for &(j, pv) in &prow {
                self.d[j] -= f * pv;
            }
            self.d[q] = f;
        }
        let row = &mut self.tab[r * n..(r + 1) * n];
        for t in row.iter_mut() {
            *t = -*t / p;
        }
        row[q] = 1.0 / p;

        let entering = self.nonbasic[q];
        let leaving = self.basic[r];
        self.basic[r] = entering;
        self.nonbasic[q] = leaving;
        self.pos[entering] = Pos::Basic(r);
        self.pos[leaving] = Pos::Nonbasic(q);
        self.iterations += 1;
    }

    /// Moves nonbasic slot `q` by `step` (signed) and the basics with it.
    fn shift(&mut self, q: usize, step: f64) {
        if step == 0.0 {
            return;
        }
        let v = self.nonbasic[q];
        self.x[v] += step;
        for i in 0..self.m {
            let a = self.at(i, q);
            if a != 0.0 {
                self.x[self.basic[i]] += a * step;
            }
        }
    }

    /// Phase-1 reduced costs of the sum-of-infeasibilities objective.
    fn phase1_costs(&self) -> Option<Vec<f64>> {
        let mut d = vec![0.0; self.n];
        let mut any = false;
        for i in 0..self.m {
            let var = self.basic[i];
            let w = if self.x[var] < self.lower[var] - FEAS_TOL {
                -1.0
            } else if self.x[var] > self.upper[var] + FEAS_TOL {
                1.0
            } else {
                continue;
            };
            any = true;
            for (dj, t) in d.iter_mut().zip(self.row(i)) {
                *dj += w * t;
            }
        }
        any.then_some(d)
    }

    /// Entering slot and direction (+1 increase, -1 decrease) for reduced
    /// costs `d`, or `None` when no slot improves.
    fn choose_entering(&self, d: &[f64], tol: f64, bland: bool) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64, f64)> = None;
        for (q, &dq) in d.iter().enumerate() {
            let var = self.nonbasic[q];
            let dir = if dq < -tol && self.can_increase(var) {
                1.0
            } else if dq > tol && self.can_decrease(var) {
                -1.0
            } else {
                continue;
            };
            let score = dq.abs();
            let better = match best {
                None => true,
                Some((bq, _, bscore)) => {
                    if bland {
                        var < self.nonbasic[bq]
                    } else {
                        score > bscore || (score == bscore && var < self.nonbasic[bq])
                    }
                }
            };
            if better {
                best = Some((q, dir, score));
            }
        }
        best.map(|(q, dir, _)| (q, dir))
    }

    /// Bound a basic variable moving at `rate` per unit step would block at,
    /// or `None` if it does not block. In phase 1 an infeasible variable
    /// blocks where it regains feasibility.
    fn blocking_bound(&self, var: usize, rate: f64, phase1: bool) -> Option<f64> {
        let (lo, hi, v) = (self.lower[var], self.upper[var], self.x[var]);
        if phase1 && v < lo - FEAS_TOL {
            return (rate > 0.0).then_some(lo);
        }
        if phase1 && v > hi + FEAS_TOL {
            return (rate < 0.0).then_some(hi);
        }
        if rate > 0.0 {
            hi.is_finite().then_some(hi)
        } else {
            lo.is_finite().then_some(lo)
        }
    }

    /// Primal ratio test. Returns `Some((row, step))` for a pivot, or
    /// `Some((usize::MAX, step))` for a bound flip of the entering variable,
    /// or `None` when nothing blocks (unbounded ray).
    fn ratio_test(&self, q: usize, dir: f64, phase1: bool, bland: bool) -> Option<(usize, f64)> {
        let entering = self.nonbasic[q];
        let room = if dir > 0.0 {
            self.upper[entering] - self.x[entering]
        } else {
            self.x[entering] - self.lower[entering]
        };
        let flip = room.max(0.0);
        let mut candidates: Vec<(usize, f64, f64)> = Vec::new(); // (row, exact ratio, |alpha|)
        let mut relaxed_min = f64::INFINITY;
        for i in 0..self.m {
            let alpha = self.at(i, q);
            if alpha.abs() <= PIVOT_TOL {
                continue;
            }
            let rate = dir * alpha;
            let var = self.basic[i];
            let Some(bound) = self.blocking_bound(var, rate, phase1) else {
                continue;
            };
            let exact = ((bound - self.x[var]) / rate).max(0.0);
            let relaxed = ((bound + rate.signum() * HARRIS_TOL - self.x[var]) / rate).max(0.0);
            relaxed_min = relaxed_min.min(relaxed);
            candidates.push((i, exact, alpha.abs()));
        }
        if flip.is_finite() && flip <= relaxed_min {
            return Some((usize::MAX, flip));
        }
        if candidates.is_empty() {
            return None;
        }
        let chosen = if bland {
            let min = candidates.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
            candidates
                .iter()
                .filter(|c| c.1 <= min + 1e-12)
                .min_by_key(|c| self.basic[c.0])
                .copied()
        } else {
            candidates
                .iter()
                .filter(|c| c.1 <= relaxed_min)
                .fold(None::<(usize, f64, f64)>, |best, &c| match best {
                    Some(b) if b.2 > c.2 || (b.2 == c.2 && self.basic[b.0] < self.basic[c.0]) => {
                        Some(b)
                    }
                    _ => Some(c),
                })
        };
        chosen.map(|(i, step, _)| (i, step))
    }

    /// Runs primal phases 1 and 2 from the current basis.
    pub(crate) fn solve_primal(&mut self) -> Outcome {
        if self.trivially_infeasible {
            return Outcome::Infeasible;
        }
        let start = self.iterations;
        let mut degenerate = 0usize;
        let mut since_refresh = 0usize;
        let mut phase2_started = false;
        loop {
            if self.iterations - start >= self.max_iterations {
                return Outcome::IterationLimit;
            }
            since_refresh += 1;
            if since_refresh >= REFRESH_EVERY {
                since_refresh = 0;
                self.recompute_basics();
                self.recompute_reduced_costs();
            }
            let bland = degenerate >= DEGENERATE_LIMIT;
            let (phase1, d) = match self.phase1_costs() {
                Some(d) => (true, d),
                None => {
                    if !phase2_started {
                        phase2_started = true;
                        self.recompute_reduced_costs();
                    }
                    (false, self.d.clone())
                }
            };
            let tol = if phase1 { 1e-9 } else { self.dual_tol };
            let Some((q, dir)) = self.choose_entering(&d, tol, bland) else {
                // Confirm with fresh values before declaring a result.
                self.recompute_basics();
                self.recompute_reduced_costs();
                if self.phase1_costs().is_some() {
                    if phase1 {
                        return Outcome::Infeasible;
                    }
                    continue;
                }
                if self.choose_entering(&self.d.clone(), self.dual_tol, false).is_some() {
                    continue;
                }
                return Outcome::Optimal;
            };
            match self.ratio_test(q, dir, phase1, bland) {
                None => {
                    if phase1 {
                        // Numerical trouble: refresh and retry once more.
                        self.recompute_basics();
                        self.recompute_reduced_costs();
                        if self.ratio_test(q, dir, true, true).is_none() {
                            return Outcome::Infeasible;
                        }
                        continue;
                    }
                    return Outcome::Unbounded;
                }
                Some((usize::MAX, step)) => {
                    self.shift(q, dir * step);
                    let v = self.nonbasic[q];
                    self.x[v] = if dir > 0.0 { self.upper[v] } else { self.lower[v] };
                    degenerate = 0;
                }
                Some((r, step)) => {
                    if step <= 1e-12 {
                        degenerate += 1;
                    } else {
                        degenerate = 0;
                    }
                    self.shift(q, dir * step);
                    let leaving = self.basic[r];
                    let rate = dir * self.at(r, q);
                    self.x[leaving] = self
                        .blocking_bound(leaving, rate, phase1)
                        .unwrap_or(self.x[leaving]);
                    self.pivot(r, q);
                }
            }
        }
    }

    /// Dual simplex from a dual-feasible basis; used after bound changes.
    pub(crate) fn solve_dual(&mut self) -> Outcome {
        if self.trivially_infeasible {
            return Outcome::Infeasible;
        }
        self.recompute_basics();
        self.recompute_reduced_costs();
        if !self.is_dual_feasible() {
            return self.solve_primal();
        }
        let limit = self.iterations + (20 * (self.m + self.n) + 1000).min(self.max_iterations);
        let mut since_refresh = 0usize;
        loop {
            if self.iterations >= limit {
                return self.solve_primal();
            }
            since_refresh += 1;
            if since_refresh >= REFRESH_EVERY {
                since_refresh = 0;
                self.recompute_basics();
                self.recompute_reduced_costs();
            }
            // Leaving row: largest bound violation, lowest variable on ties.
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let var = self.basic[i];
                let inf = self.infeasibility(var);
                if inf > FEAS_TOL {
                    let better = match leave {
                        None => true,
                        Some((bi, binf)) => inf > binf || (inf == binf && var < self.basic[bi]),
                    };
                    if better {
                        leave = Some((i, inf));
                    }
                }
            }
            let Some((r, _)) = leave else {
                self.recompute_basics();
                if self.max_primal_infeasibility() > FEAS_TOL {
                    continue;
                }
                // Finish with primal in case drift left a dual infeasibility.
                return self.solve_primal();
            };
            let leaving = self.basic[r];
            let target = if self.x[leaving] < self.lower[leaving] {
                self.lower[leaving]
            } else {
                self.upper[leaving]
            };
            let delta = target - self.x[leaving];
            let sign = delta.signum();
            let mut relaxed_min = f64::INFINITY;
            let mut candidates: Vec<(usize, f64, f64)> = Vec::new();
            for q in 0..self.n {
                let var = self.nonbasic[q];
                if self.lower[var] == self.upper[var] {
                    continue;
                }
                let alpha = self.at(r, q);
                if alpha.abs() <= PIVOT_TOL {
                    continue;
                }
                let moves_up = alpha * sign > 0.0;
                let (ok, dual) = if moves_up {
                    (self.can_increase(var), self.d[q])
                } else {
                    (self.can_decrease(var), -self.d[q])
                };
                if !ok {
                    continue;
                }
                let ratio = dual.max(0.0) / alpha.abs();
                relaxed_min = relaxed_min.min((dual.max(0.0) + self.dual_tol) / alpha.abs());
                candidates.push((q, ratio, alpha.abs()));
            }
            let chosen = candidates
                .iter()
                .filter(|c| c.1 <= relaxed_min)
                .fold(None::<(usize, f64, f64)>, |best, &c| match best {
                    Some(b)
                        if b.2 > c.2
                            || (b.2 == c.2 && self.nonbasic[b.0] < self.nonbasic[c.0]) =>
                    {
                        Some(b)
                    }
                    _ => Some(c),
                });
            let Some((q, _, _)) = chosen else {
                // Let phase 1 confirm; tiny skipped pivots make this no proof.
                return self.solve_primal();
            };
            let step = delta / self.at(r, q);
            self.shift(q, step);
            self.x[leaving] = target;
            self.pivot(r, q);
        }
    }

    fn is_dual_feasible(&self) -> bool {
        (0..self.n).all(|q| {
            let var = self.nonbasic[q];
            let dq = self.d[q];
            !((dq < -self.dual_tol && self.can_increase(var))
                || (dq > self.dual_tol && self.can_decrease(var)))
        })
    }

    /// Changes the bounds of structural column `j`. A nonbasic column is
    /// moved to the bound its reduced cost prefers so the basis stays dual
    /// feasible.
    pub(crate) fn set_bounds(&mut self, j: usize, lo: f64, hi: f64) {
        self.lower[j] = lo;
        self.upper[j] = hi;
        if let Pos::Nonbasic(q) = self.pos[j] {
            let prefer_low = self.d[q] >= 0.0;
            let target = if lo == hi {
                lo
            } else if prefer_low {
                if lo.is_finite() { lo } else { hi }
            } else if hi.is_finite() {
                hi
            } else {
                lo
            };
            let target = if target.is_finite() { target } else { 0.0 };
            let step = target - self.x[j];
            self.shift(q, step);
            self.x[j] = target;
        }
    }

    pub(crate) fn bounds(&self, j: usize) -> (f64, f64) {
        (self.lower[j], self.upper[j])
    }

    /// Structural column values.
    pub(crate) fn values(&self) -> Vec<f64> {
        self.x[..self.n].to_vec()
    }

    pub(crate) fn objective(&self) -> f64 {
        self.x[..self.n]
            .iter()
            .zip(&self.cost[..self.n])
            .map(|(x, c)| x * c)
            .sum()
    }

    /// Row duals (derivative of the optimal objective with respect to each
    /// kept row's right-hand side), reported against the original row list.
    pub(crate) fn duals(&self, model: &SubproblemModel) -> Vec<f64> {
        let mut out = Vec::with_capacity(model.rows.len());
        let mut kept = 0;
        for row in &model.rows {
            if row.coeffs.is_empty() {
                out.push(0.0);
                continue;
            }
            let var = self.n + kept;
            out.push(match self.pos[var] {
                Pos::Nonbasic(q) => self.d[q],
                Pos::Basic(_) => 0.0,
            });
            kept += 1;
        }
        out
    }
}

fn initial_value(lo: f64, hi: f64) -> f64 {
    if lo.is_finite() {
        lo
    } else if hi.is_finite() {
        hi
    } else {
        0.0
    }
}

//! Best-first branch and bound over binary columns.
//!
//! One simplex engine is shared by the whole tree: moving to a node rewrites
//! the binary bounds and reoptimises with the dual simplex from whatever
//! basis the previous node left behind.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use serde::Serialize;

use super::simplex::{Engine, Outcome};
use super::INTEGRALITY_TOL;
use crate::model::SubproblemModel;

#[derive(Clone, Debug)]
pub struct MilpOptions {
    /// Relative gap `(incumbent - bound) / max(1, |incumbent|)` at which to stop.
    pub gap: f64,
    pub node_limit: usize,
    pub time_limit: Option<Duration>,
    /// Known feasible point used as the starting incumbent when it passes
    /// the feasibility audit.
    pub incumbent_hint: Option<Vec<f64>>,
    /// Keep a per-node log in [`MilpSolution::events`].
    pub record_events: bool,
}

impl Default for MilpOptions {
    fn default() -> Self {
        MilpOptions {
            gap: 1e-4,
            node_limit: 100_000,
            time_limit: None,
            incumbent_hint: None,
            record_events: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MilpStatus {
    /// Search tree exhausted: the incumbent is optimal.
    Optimal,
    Infeasible,
    Unbounded,
    /// Stopped once the relative gap fell to the requested tolerance.
    GapLimit,
    NodeLimit,
    TimeLimit,
}

impl MilpStatus {
    /// True when an incumbent exists and is within the requested gap.
    pub fn is_solved(self) -> bool {
        matches!(self, MilpStatus::Optimal | MilpStatus::GapLimit)
    }
}

/// One processed node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchEvent {
    pub node: usize,
    pub parent_bound: f64,
    /// LP objective at the node (infinite when infeasible).
    pub lp_objective: f64,
    /// Global lower bound after processing the node.
    pub lower_bound: f64,
    /// Incumbent objective after processing the node.
    pub incumbent: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MilpSolution {
    pub status: MilpStatus,
    /// Incumbent column values; empty when no feasible point was found.
    pub x: Vec<f64>,
    /// Incumbent objective including the model constant.
    pub objective: f64,
    pub best_bound: f64,
    pub gap: f64,
    pub nodes: usize,
    pub lp_iterations: usize,
    pub events: Vec<BranchEvent>,
}

#[derive(Clone, Debug)]
struct Node {
    id: usize,
    depth: usize,
    bound: f64,
    /// (column, fixed value) decisions from the root.
    fixings: Vec<(usize, f64)>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // BinaryHeap is a max-heap: "greater" pops first. Lowest bound first,
    // then deepest, then oldest.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then(self.depth.cmp(&other.depth))
            .then(other.id.cmp(&self.id))
    }
}

fn relative_gap(incumbent: f64, bound: f64) -> f64 {
    if !incumbent.is_finite() {
        return f64::INFINITY;
    }
    ((incumbent - bound) / incumbent.abs().max(1.0)).max(0.0)
}

/// Most fractional binary (closest to 0.5), lowest column on ties.
fn branching_column(binaries: &[usize], x: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for &j in binaries {
        let frac = (x[j] - x[j].floor()).min(x[j].ceil() - x[j]);
        if frac > INTEGRALITY_TOL && best.is_none_or(|(_, b)| frac > b) {
            best = Some((j, frac));
        }
    }
    best.map(|(j, _)| j)
}

/// Solves `model` by LP-based branch and bound on its binary columns.
pub fn solve_milp(model: &SubproblemModel, opts: &MilpOptions) -> MilpSolution {
    let started = Instant::now();
    let binaries = model.binary_columns();
    let root_bounds: Vec<(f64, f64)> = binaries
        .iter()
        .map(|&j| (model.columns[j].lower.max(0.0), model.columns[j].upper.min(1.0)))
        .collect();
    let constant = model.objective_constant;
    let mut engine = Engine::new(model);
    let mut events = Vec::new();

    let mut incumbent_x: Vec<f64> = Vec::new();
    let mut incumbent = f64::INFINITY;
    if let Some(hint) = &opts.incumbent_hint {
        if hint.len() == model.num_columns()
            && model.audit(hint, 1e-6).is_empty()
        {
            let mut rounded = hint.clone();
            for &j in &binaries {
                rounded[j] = rounded[j].round();
            }
            incumbent = model.objective_value(&rounded);
            incumbent_x = rounded;
        }
    }

    let root_outcome = engine.solve_primal();
    match root_outcome {
        Outcome::Infeasible => {
            return finish(MilpStatus::Infeasible, incumbent_x, incumbent, f64::INFINITY, 0, &engine, events)
        }
        Outcome::Unbounded => {
            return finish(MilpStatus::Unbounded, incumbent_x, incumbent, f64::NEG_INFINITY, 0, &engine, events)
        }
        Outcome::IterationLimit | Outcome::Optimal => {}
    }

    let mut heap = BinaryHeap::new();
    let mut next_id = 0usize;
    heap.push(Node {
        id: next_id,
        depth: 0,
        bound: f64::NEG_INFINITY,
        fixings: Vec::new(),
    });
    next_id += 1;
    let mut nodes = 0usize;
    let mut first = true;
    let mut lower_bound = f64::NEG_INFINITY;
    let prune = |bound: f64, incumbent: f64| bound >= incumbent - 1e-9 * incumbent.abs().max(1.0);

    let status = loop {
        let Some(node) = heap.pop() else {
            break if incumbent.is_finite() {
                MilpStatus::Optimal
            } else {
                MilpStatus::Infeasible
            };
        };
        if prune(node.bound, incumbent) {
            continue;
        }
        // Best-first: this node carries the global lower bound.
        lower_bound = lower_bound.max(node.bound);
        if incumbent.is_finite() && relative_gap(incumbent, node.bound) <= opts.gap {
            heap.push(node);
            break MilpStatus::GapLimit;
        }
        if nodes >= opts.node_limit {
            heap.push(node);
            break MilpStatus::NodeLimit;
        }
        if opts.time_limit.is_some_and(|t| started.elapsed() >= t) {
            heap.push(node);
            break MilpStatus::TimeLimit;
        }
        nodes += 1;

        let outcome = if first {
            first = false;
            root_outcome
        } else {
            apply_fixings(&mut engine, &binaries, &root_bounds, &node.fixings);
            engine.solve_dual()
        };
        let lp = match outcome {
            Outcome::Optimal => engine.objective() + constant,
            Outcome::Unbounded => {
                // An unbounded relaxation below a feasible integer point
                // means the MILP itself is unbounded.
                break MilpStatus::Unbounded;
            }
            Outcome::Infeasible | Outcome::IterationLimit => f64::INFINITY,
        };
        let node_bound = lp.max(node.bound);
        let mut record = |lower_bound: f64, incumbent: f64| {
            if opts.record_events {
                events.push(BranchEvent {
                    node: node.id,
                    parent_bound: node.bound,
                    lp_objective: lp,
                    lower_bound,
                    incumbent,
                });
            }
        };
        if !lp.is_finite() || prune(node_bound, incumbent) {
            record(lower_bound, incumbent);
            continue;
        }
        let x = engine.values();
        match branching_column(&binaries, &x) {
            None => {
                // Integral: fix binaries exactly and re-solve so continuous
                // values are consistent with the rounded binaries.
                let fixed: Vec<(usize, f64)> = binaries.iter().map(|&j| (j, x[j].round())).collect();
                apply_fixings(&mut engine, &binaries, &root_bounds, &fixed);
                if engine.solve_dual() == Outcome::Optimal {
                    let value = engine.objective() + constant;
                    if value < incumbent {
                        incumbent = value;
                        incumbent_x = engine.values();
                        for &(j, v) in &fixed {
                            incumbent_x[j] = v;
                        }
                    }
                }
                record(lower_bound, incumbent);
            }
            Some(j) => {
                for value in [0.0, 1.0] {
                    let mut fixings = node.fixings.clone();
                    fixings.push((j, value));
                    heap.push(Node {
                        id: next_id,
                        depth: node.depth + 1,
                        bound: node_bound,
                        fixings,
                    });
                    next_id += 1;
                }
                record(lower_bound, incumbent);
            }
        }
    };

    let best_bound = match status {
        MilpStatus::Optimal => incumbent,
        MilpStatus::Infeasible => f64::INFINITY,
        MilpStatus::Unbounded => f64::NEG_INFINITY,
        _ => heap
            .iter()
            .map(|n| n.bound)
            .fold(incumbent, f64::min)
            .max(lower_bound),
    };
    finish(status, incumbent_x, incumbent, best_bound, nodes, &engine, events)
}

fn apply_fixings(engine: &mut Engine, binaries: &[usize], root: &[(f64, f64)], fixings: &[(usize, f64)]) {
    for (k, &j) in binaries.iter().enumerate() {
        let (mut lo, mut hi) = root[k];
        if let Some(&(_, v)) = fixings.iter().rev().find(|&&(c, _)| c == j) {
            lo = v;
            hi = v;
        }
        if engine.bounds(j) != (lo, hi) {
            engine.set_bounds(j, lo, hi);
        }
    }
}

fn finish(
    status: MilpStatus,
    x: Vec<f64>,
    objective: f64,
    best_bound: f64,
    nodes: usize,
    engine: &Engine,
    events: Vec<BranchEvent>,
) -> MilpSolution {
    let status = match status {
        MilpStatus::Infeasible if !x.is_empty() => MilpStatus::Optimal,
        s => s,
    };
    let gap = match status {
        MilpStatus::Optimal => 0.0,
        MilpStatus::Infeasible | MilpStatus::Unbounded => f64::INFINITY,
        _ => relative_gap(objective, best_bound),
    };
    MilpSolution {
        status,
        x,
        objective,
        best_bound,
        gap,
        nodes,
        lp_iterations: engine.iterations,
        events,
    }
}

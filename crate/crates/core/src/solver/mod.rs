//! LP and MILP solving for [`SubproblemModel`] instances, plus MPS I/O.

mod milp;
mod mps;
mod simplex;

use serde::Serialize;

use crate::model::SubproblemModel;

pub use milp::{solve_milp, BranchEvent, MilpOptions, MilpSolution, MilpStatus};
pub use mps::{read_mps, write_mps, MpsFormat};

/// Primal feasibility tolerance used throughout.
pub const FEASIBILITY_TOL: f64 = simplex::FEAS_TOL;
/// Distance from {0, 1} below which a binary counts as integral.
pub const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Gave up after the pivot limit; values are the last basis and not optimal.
    IterationLimit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Column values (meaningful when optimal).
    pub x: Vec<f64>,
    /// Objective including the model's constant term.
    pub objective: f64,
    /// Shadow price of each row's right-hand side.
    pub duals: Vec<f64>,
    pub iterations: usize,
}

/// Solves the LP relaxation of `model` (binaries relaxed to [0, 1]).
pub fn solve_lp(model: &SubproblemModel) -> LpSolution {
    let mut engine = simplex::Engine::new(model);
    let outcome = engine.solve_primal();
    let status = match outcome {
        simplex::Outcome::Optimal => LpStatus::Optimal,
        simplex::Outcome::Infeasible => LpStatus::Infeasible,
        simplex::Outcome::Unbounded => LpStatus::Unbounded,
        simplex::Outcome::IterationLimit => LpStatus::IterationLimit,
    };
    let objective = match status {
        LpStatus::Unbounded => f64::NEG_INFINITY,
        LpStatus::Infeasible => f64::INFINITY,
        _ => engine.objective() + model.objective_constant,
    };
    LpSolution {
        status,
        x: engine.values(),
        objective,
        duals: engine.duals(model),
        iterations: engine.iterations,
    }
}

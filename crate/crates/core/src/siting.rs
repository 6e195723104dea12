//! Runs every county subproblem and picks the cheapest locations.

use std::time::{Duration, Instant};

use log::{debug, info};
use rayon::prelude::*;
use serde::Serialize;

use crate::domain::{CountyRecord, DispatchSolution};
use crate::error::{Error, Result};
use crate::ingest::CountyRegistry;
use crate::model::{build_subproblem, extract_dispatch, BuildMode};
use crate::scenario::Scenario;
use crate::solver::{solve_milp, MilpOptions, MilpStatus};

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub mode: BuildMode,
    pub milp: MilpOptions,
    /// Worker threads for county-level parallelism.
    pub jobs: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            mode: BuildMode::Sized,
            milp: MilpOptions::default(),
            jobs: 1,
        }
    }
}

/// Result of one county solve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountyOutcome {
    pub fips: String,
    pub status: MilpStatus,
    /// `None` when no feasible point was found.
    pub objective: Option<f64>,
    pub gap: f64,
    pub nodes: usize,
    /// Incumbent column values, empty when infeasible.
    #[serde(skip)]
    pub x: Vec<f64>,
    #[serde(skip)]
    pub dispatch: Option<DispatchSolution>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CountyOutcome {
    pub fn feasible(&self) -> bool {
        self.objective.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SitingResult {
    /// One entry per county, in fips order.
    pub counties: Vec<CountyOutcome>,
    /// Selected fips, cheapest first.
    pub selected: Vec<String>,
    /// Sum of the selected counties' objectives.
    pub aggregate_objective: f64,
    /// Set when no county has a feasible solution.
    pub infeasible_everywhere: bool,
}

impl SitingResult {
    pub fn county(&self, fips: &str) -> Option<&CountyOutcome> {
        self.counties.iter().find(|c| c.fips == fips)
    }
}

/// Builds and solves one county, returning the outcome even when the
/// solver finds nothing feasible.
pub fn solve_county(scenario: &Scenario, county: &CountyRecord, opts: &SolveOptions) -> Result<CountyOutcome> {
    let started = Instant::now();
    let model = build_subproblem(scenario, county, opts.mode)?;
    let sol = solve_milp(&model, &opts.milp);
    debug!(
        "county {}: {:?} objective {} nodes {} in {:.2?}",
        county.fips,
        sol.status,
        sol.objective,
        sol.nodes,
        started.elapsed()
    );
    let dispatch = if sol.x.is_empty() {
        None
    } else {
        let mut d = extract_dispatch(scenario, county, &model, &sol.x)?;
        d.gap = sol.gap;
        Some(d)
    };
    Ok(CountyOutcome {
        fips: county.fips.clone(),
        status: sol.status,
        objective: dispatch.as_ref().map(|_| sol.objective),
        gap: sol.gap,
        nodes: sol.nodes,
        x: sol.x,
        dispatch,
        elapsed: started.elapsed(),
    })
}

/// Full dispatch trace and cost breakdown for one county.
pub fn evaluate_one(scenario: &Scenario, county: &CountyRecord, opts: &SolveOptions) -> Result<DispatchSolution> {
    let outcome = solve_county(scenario, county, opts)?;
    outcome.dispatch.ok_or_else(|| {
        Error::Solver(format!(
            "county {} has no feasible solution ({:?})",
            county.fips, outcome.status
        ))
    })
}

/// Indices of the `k` cheapest feasible outcomes, ties by fips.
pub fn select_cheapest(outcomes: &[CountyOutcome], k: usize) -> Vec<usize> {
    let mut ranked: Vec<usize> = (0..outcomes.len()).filter(|&i| outcomes[i].feasible()).collect();
    ranked.sort_by(|&a, &b| {
        let (oa, ob) = (outcomes[a].objective.unwrap(), outcomes[b].objective.unwrap());
        oa.total_cmp(&ob).then_with(|| outcomes[a].fips.cmp(&outcomes[b].fips))
    });
    ranked.truncate(k);
    ranked
}

/// Solves every county in the registry and selects the cheapest
/// `min_locations` of them.
pub fn evaluate_all(scenario: &Scenario, registry: &CountyRegistry, opts: &SolveOptions) -> Result<SitingResult> {
    if registry.is_empty() {
        return Err(Error::invalid("registry", "no counties to evaluate"));
    }
    scenario.validate()?;
    let counties: Vec<&CountyRecord> = registry.iter().collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::Solver(format!("thread pool: {e}")))?;
    let started = Instant::now();
    // Indexed collect keeps fips order whatever the completion order.
    let outcomes: Vec<CountyOutcome> = pool.install(|| {
        counties
            .par_iter()
            .map(|c| solve_county(scenario, c, opts))
            .collect::<Result<Vec<_>>>()
    })?;
    let chosen = select_cheapest(&outcomes, scenario.economics.min_locations);
    let selected: Vec<String> = chosen.iter().map(|&i| outcomes[i].fips.clone()).collect();
    let aggregate_objective = chosen.iter().map(|&i| outcomes[i].objective.unwrap()).sum();
    let infeasible_everywhere = !outcomes.iter().any(CountyOutcome::feasible);
    info!(
        "solved {} counties in {:.2?}; selected {:?}",
        outcomes.len(),
        started.elapsed(),
        selected
    );
    Ok(SitingResult {
        counties: outcomes,
        selected,
        aggregate_objective,
        infeasible_everywhere,
    })
}

//! Solves a synthetic registry in parallel and prints the ranking.

use siteopt::scenario::Scenario;
use siteopt::siting::{evaluate_all, SolveOptions};
use siteopt::synthetic;

fn main() -> siteopt::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let mut scenario = Scenario::table2();
    scenario.economics.min_locations = 2;
    let registry = synthetic::registry(n, scenario.horizon());
    let opts = SolveOptions {
        jobs: 4,
        ..SolveOptions::default()
    };
    let result = evaluate_all(&scenario, &registry, &opts)?;
    let mut ranked: Vec<_> = result.counties.iter().filter(|c| c.feasible()).collect();
    ranked.sort_by(|a, b| a.objective.partial_cmp(&b.objective).unwrap());
    for c in ranked {
        let mark = if result.selected.contains(&c.fips) { "*" } else { " " };
        println!("{mark} {}  {:>16.2}  {:>4} nodes  {:.2?}", c.fips, c.objective.unwrap(), c.nodes, c.elapsed);
    }
    println!("selected {:?}, total {:.2}", result.selected, result.aggregate_objective);
    Ok(())
}

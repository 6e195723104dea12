//! Builds one synthetic county and solves it with branch and bound.

use std::time::Instant;

use siteopt::model::{build_subproblem, extract_dispatch, BuildMode};
use siteopt::scenario::Scenario;
use siteopt::solver::{solve_milp, MilpOptions};
use siteopt::synthetic;

fn main() -> siteopt::Result<()> {
    let scenario = Scenario::table2();
    let index: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let county = synthetic::county(index, scenario.horizon());
    let model = build_subproblem(&scenario, &county, BuildMode::Sized)?;
    println!(
        "county {}: {} columns, {} rows, {} binaries",
        county.fips,
        model.num_columns(),
        model.num_rows(),
        model.binary_columns().len()
    );
    let start = Instant::now();
    let sol = solve_milp(&model, &MilpOptions::default());
    println!(
        "status {:?}, objective {:.2}, gap {:.2e}, nodes {}, lp iterations {}, {:.2?}",
        sol.status,
        sol.objective,
        sol.gap,
        sol.nodes,
        sol.lp_iterations,
        start.elapsed()
    );
    let worst = model
        .audit(&sol.x, 0.0)
        .into_iter()
        .map(|v| v.amount)
        .fold(0.0, f64::max);
    println!("largest residual {worst:.2e}");
    let dispatch = extract_dispatch(&scenario, &county, &model, &sol.x)?;
    for (name, value) in dispatch.breakdown.components() {
        println!("  {name:<18} {value:>16.2}");
    }
    println!("  {:<18} {:>16.2}", "total", dispatch.breakdown.total());
    for (tech, cap) in &dispatch.capacity {
        println!("  capacity {tech:?} {cap:.2} MW");
    }
    Ok(())
}

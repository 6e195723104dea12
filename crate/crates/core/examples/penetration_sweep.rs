//! Cost and variable-generation share as the penetration cap is relaxed.

use siteopt::analysis::{penetration_sweep, SweepScope};
use siteopt::scenario::Scenario;
use siteopt::siting::SolveOptions;
use siteopt::synthetic;

fn main() -> siteopt::Result<()> {
    let scenario = Scenario::table2();
    let registry = synthetic::registry(4, scenario.horizon());
    let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let points = penetration_sweep(&scenario, &registry, &grid, SweepScope::Best, &SolveOptions::default())?;
    println!("{:>5} {:>16} {:>8}  selected", "B", "objective", "vg");
    for p in points {
        println!(
            "{:>5.2} {:>16.2} {:>8.3}  {}",
            p.penetration,
            p.objective.unwrap_or(f64::NAN),
            p.vg_share.unwrap_or(f64::NAN),
            p.selected.join(" ")
        );
    }
    Ok(())
}

//! Correlation of each cost component with the county objective.

use siteopt::analysis::pearson_sensitivity;
use siteopt::scenario::Scenario;
use siteopt::siting::{evaluate_all, SolveOptions};
use siteopt::synthetic;

fn main() -> siteopt::Result<()> {
    let scenario = Scenario::table2();
    let registry = synthetic::registry(12, scenario.horizon());
    let opts = SolveOptions {
        jobs: 4,
        ..SolveOptions::default()
    };
    let result = evaluate_all(&scenario, &registry, &opts)?;
    for (name, r) in pearson_sensitivity(&result)? {
        match r {
            Some(r) => println!("{name:<18} {r:+.4}"),
            None => println!("{name:<18} constant"),
        }
    }
    Ok(())
}

//! Writes a county model as fixed and free MPS, reads both back and re-solves.

use siteopt::model::{build_subproblem, BuildMode};
use siteopt::scenario::Scenario;
use siteopt::solver::{read_mps, solve_milp, write_mps, MilpOptions, MpsFormat};
use siteopt::synthetic;

fn main() -> siteopt::Result<()> {
    let scenario = Scenario::table2();
    let county = synthetic::county(1, scenario.horizon());
    let model = build_subproblem(&scenario, &county, BuildMode::Sized)?;
    let opts = MilpOptions::default();
    let direct = solve_milp(&model, &opts);
    println!("direct      {:.4}", direct.objective);

    let fixed = write_mps(&model.with_short_names(), "C01001", MpsFormat::Fixed)?;
    let free = write_mps(&model, &model.name, MpsFormat::Free)?;
    for (label, text) in [("fixed", fixed), ("free", free)] {
        let back = read_mps(&text)?;
        let sol = solve_milp(&back, &opts);
        println!(
            "{label:<11} {:.4}  ({} bytes, {} columns, {} rows)",
            sol.objective,
            text.len(),
            back.num_columns(),
            back.num_rows()
        );
    }
    Ok(())
}

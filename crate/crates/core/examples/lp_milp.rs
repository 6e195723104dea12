//! A small knapsack-style MILP solved by branch and bound, with the node trace.

use siteopt::model::{RowFamily, Sense, SubproblemModel, VarKind};
use siteopt::solver::{solve_lp, solve_milp, MilpOptions};

fn main() {
    // Pick items to cover at least 9 units of demand at least cost.
    let items = [(4.0, 5.0), (3.0, 4.5), (5.0, 6.5), (2.0, 3.2), (6.0, 7.0)];
    let mut m = SubproblemModel::new("cover");
    let cols: Vec<usize> = items
        .iter()
        .enumerate()
        .map(|(i, &(_, cost))| m.add_column(format!("pick{i}"), VarKind::Binary, 0.0, 1.0, cost))
        .collect();
    let slack = m.add_column("buy", VarKind::Continuous, 0.0, f64::INFINITY, 2.0);
    let mut row: Vec<(usize, f64)> = cols.iter().zip(&items).map(|(&j, &(size, _))| (j, size)).collect();
    row.push((slack, 1.0));
    m.add_row("demand", RowFamily::Other, row, Sense::Ge, 9.0);

    let relaxed = solve_lp(&m);
    println!("LP relaxation: {:?} {:.4}", relaxed.status, relaxed.objective);
    println!("  demand dual {:.4}", relaxed.duals[0]);

    let sol = solve_milp(
        &m,
        &MilpOptions {
            gap: 0.0,
            record_events: true,
            ..MilpOptions::default()
        },
    );
    println!("MILP: {:?} {:.4} after {} nodes", sol.status, sol.objective, sol.nodes);
    for e in &sol.events {
        println!(
            "  node {:>3}  lp {:>10.4}  bound {:>10.4}  incumbent {:>10.4}",
            e.node, e.lp_objective, e.lower_bound, e.incumbent
        );
    }
    let picked: Vec<usize> = cols.iter().enumerate().filter(|(_, &j)| sol.x[j] > 0.5).map(|(i, _)| i).collect();
    println!("picked {picked:?}, bought {:.2}", sol.x[slack]);
}

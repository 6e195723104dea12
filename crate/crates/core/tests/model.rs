mod common;

use siteopt::domain::{CapacityFactor, Tech};
use siteopt::model::{build_subproblem, extract_dispatch, BuildMode, RowFamily};
use siteopt::scenario::Scenario;
use siteopt::solver::{solve_lp, solve_milp, LpStatus, MilpOptions};
use siteopt::synthetic;

fn solve(scenario: &Scenario, county: &siteopt::domain::CountyRecord, mode: BuildMode) -> (f64, Vec<f64>) {
    let model = build_subproblem(scenario, county, mode).unwrap();
    let sol = solve_milp(
        &model,
        &MilpOptions {
            gap: 1e-9,
            ..MilpOptions::default()
        },
    );
    assert!(sol.status.is_solved(), "{:?}", sol.status);
    assert!(model.audit(&sol.x, 1e-6).is_empty());
    (sol.objective, sol.x)
}

#[test]
fn zero_demand_costs_only_the_constants() {
    let mut scenario = Scenario::table2();
    scenario.load.hourly_it_mwh = vec![0.0; 96];
    let county = synthetic::county(4, 96);
    let (objective, _) = solve(&scenario, &county, BuildMode::Sized);

    let e = &scenario.economics;
    let rho = e.crf();
    let s = scenario.storage.as_ref().unwrap();
    let fiber = rho * e.weight_telecom * county.fiber_cost_per_km * county.fiber_km;
    let substation = rho * county.substation.fixed;
    let risk = e.weight_water * county.water_risk * county.water_risk_penalty;
    let battery = rho * s.capex_per_mwh * s.capacity_mwh + e.years as f64 * s.fixed_om_per_mwh_yr * s.capacity_mwh;
    let expected = fiber + substation + risk + battery;
    assert!((objective - expected).abs() <= 1e-6 * expected, "{objective} vs {expected}");
}

#[test]
fn zero_penetration_blocks_vg_and_discharge() {
    let mut scenario = Scenario::table2();
    scenario.economics.penetration_fraction = 0.0;
    let county = synthetic::county(1, 96);
    let model = build_subproblem(&scenario, &county, BuildMode::Sized).unwrap();
    let (_, x) = solve(&scenario, &county, BuildMode::Sized);
    let d = extract_dispatch(&scenario, &county, &model, &x).unwrap();
    for t in [Tech::Solar, Tech::Wind] {
        assert!(d.to_load[&t].iter().all(|v| v.abs() <= 1e-9), "{t:?} serves load");
    }
    assert!(d.discharge.iter().all(|v| v.abs() <= 1e-9));
    let bad = common::equation_residuals(&scenario, &county, &d, BuildMode::Sized, 1e-6);
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn solved_counties_pass_the_independent_residual_check() {
    let scenario = Scenario::table2();
    for (i, mode) in [(0, BuildMode::Sized), (3, BuildMode::Sized), (5, BuildMode::PaperLiteral)] {
        let county = synthetic::county(i, 96);
        let model = build_subproblem(&scenario, &county, mode).unwrap();
        let (objective, x) = solve(&scenario, &county, mode);
        let d = extract_dispatch(&scenario, &county, &model, &x).unwrap();
        assert!((d.objective - objective).abs() <= 1e-6 * objective.abs());
        let bad = common::equation_residuals(&scenario, &county, &d, mode, 1e-6);
        assert!(bad.is_empty(), "county {i} {mode:?}: {bad:?}");
    }
}

#[test]
fn modes_agree_when_full_build_is_optimal() {
    // Tiny, nearly free capacities are always worth building in full.
    let mut scenario = Scenario::table2();
    for t in &mut scenario.resource_techs {
        t.capex_per_mw = 1.0;
        t.fixed_om_per_mw_yr = 0.0;
    }
    scenario.thermal_techs.clear();
    let mut county = synthetic::county(2, 96);
    county.resource_capacity_mw.insert(Tech::Solar, 5.0);
    county.resource_capacity_mw.insert(Tech::Wind, 5.0);
    county.resource_capacity_mw.insert(Tech::Geothermal, 2.0);

    let sized_model = build_subproblem(&scenario, &county, BuildMode::Sized).unwrap();
    let (sized, x) = solve(&scenario, &county, BuildMode::Sized);
    let d = extract_dispatch(&scenario, &county, &sized_model, &x).unwrap();
    for t in [Tech::Solar, Tech::Wind, Tech::Geothermal] {
        assert!((d.capacity[&t] - county.resource_capacity(t)).abs() <= 1e-6, "{t:?} not fully built");
    }
    let (literal, _) = solve(&scenario, &county, BuildMode::PaperLiteral);
    assert!((sized - literal).abs() <= 1e-6 * sized.abs(), "{sized} vs {literal}");
}

#[test]
fn doubling_prices_doubles_the_relaxation() {
    let scenario = Scenario::table2();
    let county = synthetic::county(6, 96);
    let base = solve_lp(&build_subproblem(&scenario, &county, BuildMode::Sized).unwrap());
    let (mut s2, mut c2) = (scenario.clone(), county.clone());
    common::scale_prices(&mut s2, &mut c2, 2.0);
    let doubled = solve_lp(&build_subproblem(&s2, &c2, BuildMode::Sized).unwrap());
    assert_eq!(base.status, LpStatus::Optimal);
    assert_eq!(doubled.status, LpStatus::Optimal);
    assert!(
        (doubled.objective - 2.0 * base.objective).abs() <= 1e-6 * base.objective.abs(),
        "{} vs 2 x {}",
        doubled.objective,
        base.objective
    );
}

#[test]
fn row_families_cover_every_equation_group() {
    let scenario = Scenario::table2();
    let mut county = synthetic::county(0, 96);
    county.resource_capacity_mw.insert(Tech::Geothermal, 10.0);
    county.capacity_factors.insert(Tech::Geothermal, CapacityFactor::Annual(0.9));
    let model = build_subproblem(&scenario, &county, BuildMode::Sized).unwrap();
    for family in [
        RowFamily::LoadBalance,
        RowFamily::MinOutput,
        RowFamily::MaxOutput,
        RowFamily::RampUp,
        RowFamily::RampDown,
        RowFamily::Startup,
        RowFamily::BuildGate,
        RowFamily::VgAvailability,
        RowFamily::VgPenetration,
        RowFamily::Geothermal,
        RowFamily::StorageCharge,
        RowFamily::StateOfCharge,
        RowFamily::NetworkRating,
    ] {
        assert!(model.rows.iter().any(|r| r.family == family), "no {family:?} rows");
    }
}

#[test]
fn full_county_solves_across_the_penetration_grid() {
    let mut scenario = Scenario::table2();
    let county = synthetic::county(3, 96);
    let mut last = f64::INFINITY;
    for b in [0.4, 0.7, 0.8] {
        scenario.economics.penetration_fraction = b;
        let model = build_subproblem(&scenario, &county, BuildMode::Sized).unwrap();
        let sol = solve_milp(&model, &MilpOptions::default());
        assert!(sol.status.is_solved(), "B = {b}: {:?}", sol.status);
        assert!(model.audit(&sol.x, 1e-6).is_empty(), "B = {b}");
        assert!(sol.objective <= last * (1.0 + 1e-4), "B = {b}: {} after {last}", sol.objective);
        last = sol.objective;
    }
}

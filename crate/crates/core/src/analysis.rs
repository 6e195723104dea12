//! Result tables: heat map, Pearson sensitivity and the penetration sweep.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::domain::{CostBreakdown, DispatchSolution};
use crate::error::{Error, Result};
use crate::ingest::CountyRegistry;
use crate::scenario::Scenario;
use crate::siting::{evaluate_all, select_cheapest, solve_county, CountyOutcome, SitingResult, SolveOptions};

fn cell(v: f64) -> String {
    format!("{v}")
}

/// Heat-map table columns, in order.
pub fn heatmap_header() -> Vec<&'static str> {
    let mut h = vec!["fips", "name", "lat", "lon", "feasible", "selected", "status", "gap", "objective"];
    h.extend(CostBreakdown::COMPONENTS);
    h
}

/// One CSV row per county in the result.
pub fn heatmap_csv(result: &SitingResult, registry: &CountyRegistry) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(heatmap_header())?;
    for c in &result.counties {
        let record = registry.get(&c.fips);
        let mut row = vec![
            c.fips.clone(),
            record.map(|r| r.name.clone()).unwrap_or_default(),
            record.map(|r| cell(r.lat)).unwrap_or_default(),
            record.map(|r| cell(r.lon)).unwrap_or_default(),
            c.feasible().to_string(),
            result.selected.contains(&c.fips).to_string(),
            status_name(c),
            if c.feasible() { cell(c.gap) } else { String::new() },
            c.objective.map(cell).unwrap_or_default(),
        ];
        match &c.dispatch {
            Some(d) => row.extend(d.breakdown.components().iter().map(|&(_, v)| cell(v))),
            None => row.extend(CostBreakdown::COMPONENTS.iter().map(|_| String::new())),
        }
        w.write_record(&row)?;
    }
    finish(w)
}

fn status_name(c: &CountyOutcome) -> String {
    serde_json::to_value(c.status)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Solver(format!("csv buffer: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// FeatureCollection of county centroids with the heat-map fields as properties.
pub fn heatmap_geojson(result: &SitingResult, registry: &CountyRegistry) -> Value {
    let features: Vec<Value> = result
        .counties
        .iter()
        .filter_map(|c| {
            let r = registry.get(&c.fips)?;
            let mut props = serde_json::Map::new();
            props.insert("fips".into(), json!(c.fips));
            props.insert("name".into(), json!(r.name));
            props.insert("feasible".into(), json!(c.feasible()));
            props.insert("selected".into(), json!(result.selected.contains(&c.fips)));
            props.insert("status".into(), json!(status_name(c)));
            props.insert("gap".into(), if c.feasible() { json!(c.gap) } else { Value::Null });
            props.insert("objective".into(), json!(c.objective));
            for (name, v) in components(c) {
                props.insert(name.into(), json!(v));
            }
            Some(json!({
                "type": "Feature",
                "geometry": {"type": "Point", "coordinates": [r.lon, r.lat]},
                "properties": props,
            }))
        })
        .collect();
    json!({"type": "FeatureCollection", "features": features})
}

fn components(c: &CountyOutcome) -> Vec<(&'static str, Option<f64>)> {
    match &c.dispatch {
        Some(d) => d.breakdown.components().iter().map(|&(n, v)| (n, Some(v))).collect(),
        None => CostBreakdown::COMPONENTS.iter().map(|&n| (n, None)).collect(),
    }
}

/// Pearson correlation; `None` when either vector has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len(), "pearson needs equal-length inputs");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    // Relative cut-off so constant vectors with rounding noise count as constant.
    let scale = |m: f64| (m.abs() * 1e-12).powi(2) * n;
    if sxx <= scale(mx) || syy <= scale(my) {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Correlation of each cost component with the total objective across the
/// feasible counties.
pub fn pearson_sensitivity(result: &SitingResult) -> Result<BTreeMap<&'static str, Option<f64>>> {
    let solved: Vec<&DispatchSolution> = result
        .counties
        .iter()
        .filter_map(|c| c.dispatch.as_ref())
        .collect();
    if solved.len() < 2 {
        return Err(Error::invalid(
            "sensitivity",
            format!("needs at least 2 feasible counties, got {}", solved.len()),
        ));
    }
    let totals: Vec<f64> = solved.iter().map(|d| d.objective).collect();
    let mut out = BTreeMap::new();
    for (k, name) in CostBreakdown::COMPONENTS.iter().enumerate() {
        let values: Vec<f64> = solved.iter().map(|d| d.breakdown.components()[k].1).collect();
        out.insert(*name, pearson(&values, &totals));
    }
    Ok(out)
}

/// Renders the sensitivity map as `component,r` CSV, undefined as empty.
pub fn sensitivity_csv(map: &BTreeMap<&'static str, Option<f64>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["component", "r"])?;
    for name in CostBreakdown::COMPONENTS {
        let r = map.get(name).copied().flatten();
        w.write_record([name.to_string(), r.map(cell).unwrap_or_default()])?;
    }
    finish(w)
}

/// Share of load energy served by variable generation plus storage discharge.
pub fn vg_share(d: &DispatchSolution) -> f64 {
    let demand: f64 = d.demand_mwh.iter().sum();
    if demand <= 0.0 {
        return 0.0;
    }
    served_by_vg(d) / demand
}

fn served_by_vg(d: &DispatchSolution) -> f64 {
    let vg: f64 = d
        .to_load
        .iter()
        .filter(|(t, _)| t.is_variable())
        .map(|(_, v)| v.iter().sum::<f64>())
        .sum();
    vg + d.discharge.iter().sum::<f64>()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    pub penetration: f64,
    /// Sum over the chosen counties; `None` when nothing was feasible.
    pub objective: Option<f64>,
    pub vg_share: Option<f64>,
    pub selected: Vec<String>,
    /// Solver or assembly error at this point, if any.
    pub error: Option<String>,
}

/// Which counties a sweep re-solves.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SweepScope {
    /// Only the cheapest county(ies) at the scenario's own penetration.
    #[default]
    Best,
    /// Every county, re-selecting at each point.
    All,
}

/// Re-solves for each penetration fraction in `b_values` (ascending). Each
/// county's solution at one point seeds the next point, where it stays
/// feasible because a larger fraction only loosens the caps.
pub fn penetration_sweep(
    scenario: &Scenario,
    registry: &CountyRegistry,
    b_values: &[f64],
    scope: SweepScope,
    opts: &SolveOptions,
) -> Result<Vec<SweepPoint>> {
    if b_values.is_empty() {
        return Err(Error::invalid("penetration", "no values given"));
    }
    if b_values.windows(2).any(|w| w[0] > w[1]) || b_values.iter().any(|b| !b.is_finite() || *b < 0.0) {
        return Err(Error::invalid("penetration", "values must be ascending and nonnegative"));
    }
    let counties: Vec<&crate::domain::CountyRecord> = match scope {
        SweepScope::All => registry.iter().collect(),
        SweepScope::Best => {
            let base = evaluate_all(scenario, registry, opts)?;
            base.selected.iter().filter_map(|f| registry.get(f)).collect()
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::Solver(format!("thread pool: {e}")))?;
    // per_county[c][k] = outcome of county c at b_values[k]
    let per_county: Vec<Vec<std::result::Result<CountyOutcome, String>>> = pool.install(|| {
        counties
            .par_iter()
            .map(|county| {
                let mut hint: Option<Vec<f64>> = None;
                b_values
                    .iter()
                    .map(|&b| {
                        let mut s = scenario.clone();
                        s.economics.penetration_fraction = b;
                        let mut o = opts.clone();
                        o.milp.incumbent_hint = hint.clone();
                        let outcome = solve_county(&s, county, &o).map_err(|e| e.to_string());
                        if let Ok(out) = &outcome {
                            if !out.x.is_empty() {
                                hint = Some(out.x.clone());
                            }
                        }
                        outcome
                    })
                    .collect()
            })
            .collect()
    });
    let mut points = Vec::with_capacity(b_values.len());
    for (k, &b) in b_values.iter().enumerate() {
        let mut errors = Vec::new();
        let outcomes: Vec<CountyOutcome> = per_county
            .iter()
            .filter_map(|runs| match &runs[k] {
                Ok(o) => Some(o.clone()),
                Err(e) => {
                    errors.push(e.clone());
                    None
                }
            })
            .collect();
        let chosen = select_cheapest(&outcomes, scenario.economics.min_locations);
        let (objective, vg_share) = if chosen.is_empty() {
            (None, None)
        } else {
            let total: f64 = chosen.iter().map(|&i| outcomes[i].objective.unwrap()).sum();
            let (mut served, mut demand) = (0.0, 0.0);
            for &i in &chosen {
                let d = outcomes[i].dispatch.as_ref().unwrap();
                served += served_by_vg(d);
                demand += d.demand_mwh.iter().sum::<f64>();
            }
            let share = if demand > 0.0 { served / demand } else { 0.0 };
            (Some(total), Some(share))
        };
        points.push(SweepPoint {
            penetration: b,
            objective,
            vg_share,
            selected: chosen.iter().map(|&i| outcomes[i].fips.clone()).collect(),
            error: if errors.is_empty() { None } else { Some(errors.join("; ")) },
        });
    }
    Ok(points)
}

pub fn sweep_csv(points: &[SweepPoint]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["B", "objective", "vg_share", "selected", "error"])?;
    for p in points {
        w.write_record([
            cell(p.penetration),
            p.objective.map(cell).unwrap_or_default(),
            p.vg_share.map(cell).unwrap_or_default(),
            p.selected.join(" "),
            p.error.clone().unwrap_or_default(),
        ])?;
    }
    finish(w)
}

/// Hourly dispatch trace of one county as CSV.
pub fn dispatch_csv(d: &DispatchSolution) -> Result<String> {
    let mut header: Vec<String> = vec!["hour".into(), "demand_mwh".into()];
    let mut series: Vec<&Vec<f64>> = vec![&d.demand_mwh];
    for (label, map) in [
        ("load", &d.to_load),
        ("stor", &d.to_storage),
        ("exp", &d.export),
        ("curt", &d.curtail),
        ("on", &d.commitment),
        ("start", &d.startup),
    ] {
        for (tech, values) in map {
            header.push(format!("{label}_{}", tech.id()));
            series.push(values);
        }
    }
    for (label, values) in [
        ("grid", &d.grid_import),
        ("charge", &d.charge),
        ("discharge", &d.discharge),
        ("soc", &d.soc),
    ] {
        header.push(label.into());
        series.push(values);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for h in 0..d.demand_mwh.len() {
        let mut row = vec![h.to_string()];
        row.extend(series.iter().map(|s| cell(s.get(h).copied().unwrap_or(0.0))));
        w.write_record(&row)?;
    }
    finish(w)
}

//! Oracles shared by the integration tests. Nothing here calls into the
//! simplex except `enumerate_binaries`, which solves plain LPs per pattern.
#![allow(dead_code)]

use rand::Rng;
use siteopt::domain::{CapacityFactor, CountyRecord, DispatchSolution, Tech};
use siteopt::model::{BuildMode, RowFamily, Sense, SubproblemModel, VarKind};
use siteopt::scenario::Scenario;
use siteopt::solver::{solve_lp, LpStatus};

pub fn fixture_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/synthetic")
}

/// Coefficient with two decimals in [lo, hi].
fn dec<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo..=hi) * 100.0).round() / 100.0
}

/// Random LP with `m` rows and `n` columns, every column boxed in [0, u].
/// Most rows are built to hold at a random interior point so that roughly
/// three in four instances are feasible.
pub fn random_lp<R: Rng>(rng: &mut R, m: usize, n: usize) -> SubproblemModel {
    let mut model = SubproblemModel::new("rand");
    let mut anchor = Vec::with_capacity(n);
    for j in 0..n {
        let u = dec(rng, 0.5, 10.0);
        let c = dec(rng, -5.0, 5.0);
        model.add_column(format!("x{j}"), VarKind::Continuous, 0.0, u, c);
        anchor.push(dec(rng, 0.0, u));
    }
    for i in 0..m {
        let mut coeffs = Vec::new();
        for j in 0..n {
            if rng.gen_bool(0.7) {
                coeffs.push((j, dec(rng, -4.0, 4.0)));
            }
        }
        let sense = match rng.gen_range(0..10) {
            0 => Sense::Eq,
            1..=3 => Sense::Ge,
            _ => Sense::Le,
        };
        let at_anchor: f64 = coeffs.iter().map(|&(j, a)| a * anchor[j]).sum();
        let rhs = if rng.gen_bool(0.9) {
            let slack = dec(rng, 0.0, 3.0);
            match sense {
                Sense::Le => at_anchor + slack,
                Sense::Ge => at_anchor - slack,
                Sense::Eq => at_anchor,
            }
        } else {
            dec(rng, -3.0, 12.0)
        };
        model.add_row(format!("r{i}"), RowFamily::Other, coeffs, sense, rhs);
    }
    model
}

/// Random LP over `x >= 0` where only some columns carry an upper bound and
/// a budget row `sum x <= U` keeps the region bounded. Sizes up to 10 x 10
/// stay within reach of vertex enumeration.
pub fn random_budget_lp<R: Rng>(rng: &mut R, m: usize, n: usize) -> SubproblemModel {
    let mut model = random_lp(rng, m, n);
    for c in model.columns.iter_mut() {
        if rng.gen_bool(0.7) {
            c.upper = f64::INFINITY;
        }
    }
    let budget = dec(rng, 5.0, 40.0);
    model.add_row("budget", RowFamily::Other, (0..n).map(|j| (j, 1.0)), Sense::Le, budget);
    model
}

/// Random mixed model: an LP with the first `k` columns made binary.
pub fn random_milp<R: Rng>(rng: &mut R, m: usize, n: usize, k: usize) -> SubproblemModel {
    let mut model = random_lp(rng, m, n);
    for c in model.columns.iter_mut().take(k) {
        c.kind = VarKind::Binary;
        c.lower = 0.0;
        c.upper = 1.0;
    }
    model.objective_constant = dec(rng, -10.0, 10.0);
    model
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

fn combinations(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), f);
}

/// Minimum objective over all basic feasible solutions. The feasible region
/// must be bounded; `None` when no vertex is feasible.
pub fn vertex_enumeration(model: &SubproblemModel) -> Option<f64> {
    let n = model.num_columns();
    // Hyperplanes: every row, every lower bound, every upper bound.
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for r in &model.rows {
        let mut a = vec![0.0; n];
        for &(j, v) in &r.coeffs {
            a[j] = v;
        }
        planes.push((a, r.rhs));
    }
    for (j, c) in model.columns.iter().enumerate() {
        for bound in [c.lower, c.upper] {
            if bound.is_finite() {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                planes.push((e, bound));
            }
        }
    }
    let mut best: Option<f64> = None;
    combinations(planes.len(), n, &mut |idx| {
        let a: Vec<Vec<f64>> = idx.iter().map(|&i| planes[i].0.clone()).collect();
        let b: Vec<f64> = idx.iter().map(|&i| planes[i].1).collect();
        if let Some(x) = solve_dense(a, b) {
            if model.audit(&x, 1e-7).is_empty() {
                let v = model.objective_value(&x);
                best = Some(best.map_or(v, |b: f64| b.min(v)));
            }
        }
    });
    best
}

/// Lagrangian dual value implied by row duals `y`: `y.b + sum_j min over
/// the box of (c_j - y.A_j) x_j`, plus the constant. Also returns the worst
/// sign violation of `y` (negative for <= rows, positive for >= rows).
pub fn dual_bound(model: &SubproblemModel, y: &[f64]) -> (f64, f64) {
    let mut reduced = model.objective.clone();
    let mut value = model.objective_constant;
    let mut sign_violation = 0.0f64;
    for (r, &yi) in model.rows.iter().zip(y) {
        for &(j, a) in &r.coeffs {
            reduced[j] -= yi * a;
        }
        value += yi * r.rhs;
        let bad = match r.sense {
            Sense::Le => yi.max(0.0),
            Sense::Ge => (-yi).max(0.0),
            Sense::Eq => 0.0,
        };
        sign_violation = sign_violation.max(bad);
    }
    for (c, &d) in model.columns.iter().zip(&reduced) {
        if d.abs() <= 1e-9 {
            continue;
        }
        value += (d * c.lower).min(d * c.upper);
    }
    (value, sign_violation)
}

/// Optimum over every 0/1 pattern of the binary columns, each solved as an
/// LP with the binaries fixed. Returns (objective, x).
pub fn enumerate_binaries(model: &SubproblemModel) -> Option<(f64, Vec<f64>)> {
    let bins = model.binary_columns();
    assert!(bins.len() <= 16, "too many binaries to enumerate");
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 0u32..(1 << bins.len()) {
        let mut fixed = model.clone();
        for (k, &j) in bins.iter().enumerate() {
            let v = ((mask >> k) & 1) as f64;
            fixed.columns[j].kind = VarKind::Continuous;
            fixed.columns[j].lower = v;
            fixed.columns[j].upper = v;
        }
        let s = solve_lp(&fixed);
        if s.status == LpStatus::Optimal && best.as_ref().map_or(true, |(b, _)| s.objective < *b) {
            best = Some((s.objective, s.x));
        }
    }
    best
}

/// One model holding every county, each gated by a selection binary with
/// big-M bounds, plus `sum x >= min_locations`.
pub fn monolithic(models: &[SubproblemModel], min_locations: usize, big_m: f64) -> SubproblemModel {
    let mut mono = SubproblemModel::new("monolithic");
    let mut selectors = Vec::new();
    for (k, m) in models.iter().enumerate() {
        let x = mono.add_column(format!("x{k}"), VarKind::Binary, 0.0, 1.0, m.objective_constant);
        selectors.push(x);
        let offset = mono.num_columns();
        for (j, c) in m.columns.iter().enumerate() {
            assert!(c.lower >= 0.0, "gating assumes nonnegative lower bounds");
            let col = mono.add_column(format!("{}_{}", k, c.name), c.kind, 0.0, c.upper, m.objective[j]);
            if c.lower > 0.0 {
                mono.add_row(
                    format!("floor{k}_{j}"),
                    RowFamily::Other,
                    [(col, 1.0), (x, -c.lower)],
                    Sense::Ge,
                    0.0,
                );
            }
            let u = if c.upper.is_finite() { c.upper } else { big_m };
            mono.add_row(
                format!("gate{k}_{j}"),
                RowFamily::Other,
                [(col, 1.0), (x, -u)],
                Sense::Le,
                0.0,
            );
        }
        for r in &m.rows {
            let mut coeffs: Vec<(usize, f64)> = r.coeffs.iter().map(|&(j, a)| (offset + j, a)).collect();
            coeffs.push((x, -r.rhs));
            mono.add_row(format!("{k}_{}", r.name), r.family, coeffs, r.sense, 0.0);
        }
    }
    mono.add_row(
        "locations",
        RowFamily::Other,
        selectors.iter().map(|&x| (x, 1.0)),
        Sense::Ge,
        min_locations as f64,
    );
    mono
}

/// A short-horizon copy of `county` using representative hours `hours`.
pub fn truncate_county(county: &CountyRecord, hours: &[usize]) -> CountyRecord {
    let mut c = county.clone();
    for cf in c.capacity_factors.values_mut() {
        if let CapacityFactor::Hourly(v) = cf {
            *v = hours.iter().map(|&h| v[h]).collect();
        }
    }
    c.grid_price = hours.iter().map(|&h| c.grid_price[h]).collect();
    c
}

pub fn truncate_scenario(scenario: &Scenario, hours: &[usize]) -> Scenario {
    let mut s = scenario.clone();
    s.load.hourly_it_mwh = hours.iter().map(|&h| s.load.hourly_it_mwh[h]).collect();
    s
}

/// Independent residual check of a dispatch against the model equations,
/// computed from scenario and county data only. Returns every violation
/// larger than `tol` as a message.
pub fn equation_residuals(
    scenario: &Scenario,
    county: &CountyRecord,
    d: &DispatchSolution,
    mode: BuildMode,
    tol: f64,
) -> Vec<String> {
    let mut bad = Vec::new();
    let mut check = |ok: bool, what: String| {
        if !ok {
            bad.push(what);
        }
    };
    let econ = &scenario.economics;
    let horizon = scenario.load.hourly_it_mwh.len();
    let pue = scenario.load.pue_by_climate[&county.climate_zone];
    let demand: Vec<f64> = scenario.load.hourly_it_mwh.iter().map(|it| it * pue).collect();
    let zero = vec![0.0; horizon];
    let get = |m: &std::collections::BTreeMap<Tech, Vec<f64>>, t: Tech| m.get(&t).cloned().unwrap_or_else(|| zero.clone());
    let cf = |t: Tech, h: usize| -> f64 {
        match county.capacity_factors.get(&t) {
            Some(CapacityFactor::Hourly(v)) => v[h],
            Some(CapacityFactor::Annual(f)) => *f,
            None => scenario
                .resource_techs
                .iter()
                .find(|p| p.tech == t)
                .and_then(|p| p.default_capacity_factor)
                .unwrap_or(0.0),
        }
    };
    let all_series = d
        .to_load
        .values()
        .chain(d.to_storage.values())
        .chain(d.export.values())
        .chain(d.curtail.values())
        .chain([&d.grid_import, &d.charge, &d.discharge]);
    for s in all_series {
        check(s.iter().all(|v| *v >= -tol), "negative flow".into());
    }
    for h in 0..horizon {
        // Load balance.
        let supply: f64 = d.to_load.values().map(|v| v[h]).sum::<f64>() + d.grid_import[h] + d.discharge[h];
        check(supply >= econ.reserve_multiplier * demand[h] - tol, format!("load balance h{h}"));
        // Resource availability.
        for p in &scenario.resource_techs {
            let t = p.tech;
            let cap = match mode {
                BuildMode::Sized => d.capacity[&t],
                BuildMode::PaperLiteral => county.resource_capacity(t),
            };
            check(cap <= county.resource_capacity(t) + tol, format!("capacity {t:?}"));
            let used = get(&d.to_load, t)[h] + get(&d.to_storage, t)[h] + get(&d.export, t)[h] + get(&d.curtail, t)[h];
            check(used <= cf(t, h) * cap + tol, format!("availability {t:?} h{h}"));
        }
        // Penetration.
        let vg: f64 = d.to_load.iter().filter(|(t, _)| t.is_variable()).map(|(_, v)| v[h]).sum();
        check(vg <= econ.penetration_fraction * demand[h] + tol, format!("penetration h{h}"));
        // Network rating.
        let exports: f64 = d.export.values().map(|v| v[h]).sum();
        check(
            econ.headroom * (d.grid_import[h] + exports) <= d.transmission_rating_mw + tol,
            format!("network h{h}"),
        );
    }
    for p in &scenario.thermal_techs {
        let t = p.tech;
        let (out, on, start) = (get(&d.to_load, t), get(&d.commitment, t), get(&d.startup, t));
        let built = d.capacity[&t] / p.block_mw;
        for h in 0..horizon {
            check((on[h] - on[h].round()).abs() <= tol, format!("integrality {t:?} h{h}"));
            check(on[h] <= built + tol, format!("build gate {t:?} h{h}"));
            check(out[h] >= on[h] * p.min_output_fraction * p.block_mw - tol, format!("min output {t:?} h{h}"));
            check(out[h] <= on[h] * p.block_mw + tol, format!("max output {t:?} h{h}"));
            let prev_on = if h == 0 { 0.0 } else { on[h - 1] };
            check(start[h] >= on[h] - prev_on - tol, format!("startup {t:?} h{h}"));
            if h > 0 {
                let ramp = p.ramp_rate_fraction * p.block_mw;
                check((out[h] - out[h - 1]).abs() <= ramp + tol, format!("ramp {t:?} h{h}"));
            }
        }
    }
    match &scenario.storage {
        Some(s) => {
            for h in 0..horizon {
                let into: f64 = d.to_storage.values().map(|v| v[h]).sum();
                check((into - d.charge[h]).abs() <= tol, format!("charge balance h{h}"));
                check(d.charge[h] <= s.charge_rate_fraction * s.capacity_mwh + tol, format!("charge rate h{h}"));
                let dis_cap = (s.discharge_rate_fraction * s.capacity_mwh).min(econ.penetration_fraction * demand[h]);
                check(d.discharge[h] <= dis_cap + tol, format!("discharge cap h{h}"));
                check(
                    d.soc[h] >= s.min_soc_mwh - tol && d.soc[h] <= s.capacity_mwh + tol,
                    format!("soc limits h{h}"),
                );
                let expected = if h == 0 {
                    0.5 * s.capacity_mwh
                } else {
                    (1.0 - s.self_discharge) * d.soc[h - 1] + s.charge_efficiency * d.charge[h]
                        - s.discharge_efficiency * d.discharge[h]
                };
                check((d.soc[h] - expected).abs() <= tol, format!("soc recursion h{h}"));
            }
        }
        None => check(
            d.discharge.iter().chain(&d.charge).all(|v| v.abs() <= tol),
            "storage flows without storage".into(),
        ),
    }
    let total = d.breakdown.total();
    check(
        (total - d.objective).abs() <= 1e-6 * d.objective.abs().max(1.0),
        format!("breakdown {total} vs objective {}", d.objective),
    );
    bad
}

/// Scenario and registry of the bundled three-county fixture.
pub fn load_fixture() -> (Scenario, siteopt::ingest::CountyRegistry) {
    let dir = fixture_dir();
    let mut scenario = Scenario::from_path(&dir.join("scenario.json")).unwrap();
    let data = siteopt::ingest::load_dataset(&dir, &scenario.county_defaults).unwrap();
    if let Some(load) = data.it_load {
        scenario.load.hourly_it_mwh = load;
    }
    (scenario, data.registry)
}

/// Three synthetic counties cut down to `hours`, with two locations to pick.
pub fn reduced_fixture(hours: &[usize]) -> (Scenario, siteopt::ingest::CountyRegistry) {
    let (scenario, registry) = load_fixture();
    let mut s = truncate_scenario(&scenario, hours);
    s.economics.min_locations = 2;
    let counties = registry.iter().map(|c| truncate_county(c, hours)).collect();
    (s, siteopt::ingest::CountyRegistry::from_records(counties).unwrap())
}

/// Every file in `dir` by name, with its bytes. The wall-clock timings
/// object is cut out of the run manifest; everything else is kept verbatim.
pub fn read_tree(dir: &std::path::Path) -> std::collections::BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            let name = e.file_name().to_string_lossy().into_owned();
            let mut bytes = std::fs::read(e.path()).unwrap();
            if name == "run_manifest.json" {
                bytes = strip_timings(&String::from_utf8(bytes).unwrap()).into_bytes();
            }
            (name, bytes)
        })
        .collect()
}

/// Removes the `"timings_s": {...}` block from pretty-printed manifest text.
pub fn strip_timings(text: &str) -> String {
    let start = text.find("\"timings_s\"").expect("manifest has timings");
    let end = start + text[start..].find('}').unwrap() + 1;
    format!("{}{}", &text[..start], &text[end..])
}

/// Runs the command line with `args` after the program name.
pub fn cli(args: &[&str]) -> i32 {
    let mut full = vec!["siteopt"];
    full.extend_from_slice(args);
    siteopt::cli::run(full)
}

pub fn fixture_args<'a>(cmd: &'a str, out: &'a str, scenario: &'a str, data: &'a str) -> Vec<&'a str> {
    vec![cmd, "--scenario", scenario, "--data", data, "--out", out]
}

/// Multiplies every money-valued parameter of the scenario and the county
/// by `k`.
pub fn scale_prices(scenario: &mut Scenario, county: &mut CountyRecord, k: f64) {
    use siteopt::domain::HourlyValue;
    let e = &mut scenario.economics;
    e.export_price *= k;
    e.curtailment_penalty *= k;
    for t in &mut scenario.resource_techs {
        t.capex_per_mw *= k;
        t.fixed_om_per_mw_yr *= k;
        t.variable_om_per_mwh = match &t.variable_om_per_mwh {
            HourlyValue::Constant(v) => HourlyValue::Constant(v * k),
            HourlyValue::Hourly(v) => HourlyValue::Hourly(v.iter().map(|x| x * k).collect()),
        };
    }
    for t in &mut scenario.thermal_techs {
        t.capex_per_mw *= k;
        t.fixed_om_per_mw_yr *= k;
    }
    if let Some(s) = &mut scenario.storage {
        s.capex_per_mwh *= k;
        s.fixed_om_per_mwh_yr *= k;
    }
    for p in &mut county.grid_price {
        *p *= k;
    }
    county.water_price_per_l *= k;
    county.water_risk_penalty *= k;
    county.fiber_cost_per_km *= k;
    county.transmission_cost_per_mw_km *= k;
    county.substation.fixed *= k;
    county.substation.per_mw *= k;
}

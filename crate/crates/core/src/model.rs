//! Per-county subproblem assembly.
//!
//! [`SubproblemModel`] is a plain mixed 0-1 linear program (columns with
//! bounds, sparse rows, linear objective plus constant). [`build_subproblem`]
//! fills one in for a single county over the scenario's representative hours;
//! the county is implicitly selected, site selection happens afterwards.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::domain::{
    facility_demand, CapacityFactor, CountyRecord, DispatchSolution,
    DispatchableTechParams, Tech,
};
use crate::error::{Error, Result};
use crate::scenario::Scenario;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarKind {
    Continuous,
    Binary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        })
    }
}

/// Which constraint group a row belongs to. Rows read back from files are `Other`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RowFamily {
    LoadBalance,
    MinOutput,
    MaxOutput,
    RampUp,
    RampDown,
    Startup,
    BuildGate,
    VgAvailability,
    VgPenetration,
    Geothermal,
    StorageCharge,
    StateOfCharge,
    NetworkRating,
    Other,
}

impl RowFamily {
    pub fn is_storage(self) -> bool {
        matches!(self, RowFamily::StorageCharge | RowFamily::StateOfCharge)
    }
}

/// Decision-variable symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Symbol {
    ToLoad,
    ToStorage,
    Export,
    Curtail,
    Commit,
    Startup,
    Charge,
    Discharge,
    Soc,
    Grid,
    Capacity,
    Build,
    Rating,
}

impl Symbol {
    fn prefix(self) -> &'static str {
        match self {
            Symbol::ToLoad => "load",
            Symbol::ToStorage => "stor",
            Symbol::Export => "exp",
            Symbol::Curtail => "curt",
            Symbol::Commit => "on",
            Symbol::Startup => "start",
            Symbol::Charge => "chg",
            Symbol::Discharge => "dis",
            Symbol::Soc => "soc",
            Symbol::Grid => "grid",
            Symbol::Capacity => "cap",
            Symbol::Build => "build",
            Symbol::Rating => "z",
        }
    }

    pub fn is_storage(self) -> bool {
        matches!(
            self,
            Symbol::ToStorage | Symbol::Charge | Symbol::Discharge | Symbol::Soc
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColumnKey {
    pub symbol: Symbol,
    pub tech: Option<Tech>,
    pub hour: Option<usize>,
}

impl ColumnKey {
    pub fn new(symbol: Symbol, tech: Option<Tech>, hour: Option<usize>) -> Self {
        ColumnKey { symbol, tech, hour }
    }

    fn name(&self) -> String {
        let mut name = self.symbol.prefix().to_string();
        if let Some(t) = self.tech {
            name.push('_');
            name.push_str(t.short());
        }
        if let Some(h) = self.hour {
            name.push('_');
            name.push_str(&h.to_string());
        }
        name
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub name: String,
    pub family: RowFamily,
    /// (column, coefficient), columns ascending and unique.
    pub coeffs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Row {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }

    /// Amount by which `x` violates this row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = self.activity(x);
        match self.sense {
            Sense::Le => (lhs - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - lhs).max(0.0),
            Sense::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// A mixed 0-1 linear program: minimise `objective . x + objective_constant`.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct SubproblemModel {
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
    pub objective: Vec<f64>,
    pub objective_constant: f64,
    /// Symbolic lookup; empty for models read from files.
    #[serde(skip)]
    pub index: BTreeMap<ColumnKey, usize>,
}

/// A bound, row or integrality violation found by [`SubproblemModel::audit`].
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub what: String,
    pub amount: f64,
}

impl SubproblemModel {
    pub fn new(name: impl Into<String>) -> Self {
        SubproblemModel {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn add_column(
        &mut self,
        name: impl Into<String>,
        kind: VarKind,
        lower: f64,
        upper: f64,
        cost: f64,
    ) -> usize {
        let (lower, upper) = match kind {
            VarKind::Binary => (lower.max(0.0), upper.min(1.0)),
            VarKind::Continuous => (lower, upper),
        };
        self.columns.push(Column {
            name: name.into(),
            kind,
            lower,
            upper,
        });
        self.objective.push(cost);
        self.columns.len() - 1
    }

    fn add_keyed(&mut self, key: ColumnKey, kind: VarKind, lower: f64, upper: f64, cost: f64) -> usize {
        let j = self.add_column(key.name(), kind, lower, upper, cost);
        self.index.insert(key, j);
        j
    }

    /// Adds a row; duplicate columns are summed and zero coefficients dropped.
    pub fn add_row(
        &mut self,
        name: impl Into<String>,
        family: RowFamily,
        coeffs: impl IntoIterator<Item = (usize, f64)>,
        sense: Sense,
        rhs: f64,
    ) {
        let mut merged: BTreeMap<usize, f64> = BTreeMap::new();
        for (j, a) in coeffs {
            *merged.entry(j).or_insert(0.0) += a;
        }
        self.rows.push(Row {
            name: name.into(),
            family,
            coeffs: merged.into_iter().filter(|&(_, a)| a != 0.0).collect(),
            sense,
            rhs,
        });
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn column(&self, symbol: Symbol, tech: Option<Tech>, hour: Option<usize>) -> Option<usize> {
        self.index.get(&ColumnKey::new(symbol, tech, hour)).copied()
    }

    pub fn binary_columns(&self) -> Vec<usize> {
        self.columns
            .iter()
            .enumerate()
            .filter(|(_, c)| c.kind == VarKind::Binary)
            .map(|(j, _)| j)
            .collect()
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective_constant
            + self
                .objective
                .iter()
                .zip(x)
                .map(|(c, v)| c * v)
                .sum::<f64>()
    }

    /// Structural checks: every row references declared columns, binaries are
    /// bounded in [0, 1], objective length matches, bounds are ordered.
    pub fn validate(&self) -> Result<()> {
        if self.objective.len() != self.columns.len() {
            return Err(Error::Assembly(format!(
                "objective has {} entries for {} columns",
                self.objective.len(),
                self.columns.len()
            )));
        }
        for c in &self.columns {
            if c.lower > c.upper || c.lower.is_nan() || c.upper.is_nan() {
                return Err(Error::Assembly(format!(
                    "column {} has bounds [{}, {}]",
                    c.name, c.lower, c.upper
                )));
            }
            if c.kind == VarKind::Binary && (c.lower < 0.0 || c.upper > 1.0) {
                return Err(Error::Assembly(format!(
                    "binary column {} has bounds [{}, {}]",
                    c.name, c.lower, c.upper
                )));
            }
        }
        for r in &self.rows {
            if let Some(&(j, _)) = r.coeffs.iter().find(|&&(j, _)| j >= self.columns.len()) {
                return Err(Error::Assembly(format!(
                    "row {} references undeclared column {j}",
                    r.name
                )));
            }
            if !r.rhs.is_finite() || r.coeffs.iter().any(|(_, a)| !a.is_finite()) {
                return Err(Error::Assembly(format!("row {} has non-finite data", r.name)));
            }
        }
        Ok(())
    }

    /// Copy with columns renamed `C0000000..` and rows `R0000000..`, short
    /// enough for fixed-format MPS.
    pub fn with_short_names(&self) -> SubproblemModel {
        let mut m = self.clone();
        for (j, c) in m.columns.iter_mut().enumerate() {
            c.name = format!("C{j:07}");
        }
        for (i, r) in m.rows.iter_mut().enumerate() {
            r.name = format!("R{i:07}");
        }
        m
    }

    /// Every bound, row and integrality condition violated by more than `tol`.
    pub fn audit(&self, x: &[f64], tol: f64) -> Vec<Violation> {
        let mut out = Vec::new();
        for (c, &v) in self.columns.iter().zip(x) {
            let amount = (c.lower - v).max(v - c.upper).max(0.0);
            if amount > tol {
                out.push(Violation {
                    what: format!("bound {}", c.name),
                    amount,
                });
            }
            if c.kind == VarKind::Binary {
                let frac = (v - v.round()).abs();
                if frac > tol {
                    out.push(Violation {
                        what: format!("integrality {}", c.name),
                        amount: frac,
                    });
                }
            }
        }
        for r in &self.rows {
            let amount = r.violation(x);
            if amount > tol {
                out.push(Violation {
                    what: format!("row {} ({:?})", r.name, r.family),
                    amount,
                });
            }
        }
        out
    }
}

/// How resource capacity enters the model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuildMode {
    /// Capacity is a decision in [0, county maximum]; thermal units carry a
    /// build binary.
    #[default]
    Sized,
    /// Every enabled technology is built at its maximum and charged as a constant.
    PaperLiteral,
}

impl std::str::FromStr for BuildMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sized" => Ok(BuildMode::Sized),
            "paper_literal" => Ok(BuildMode::PaperLiteral),
            other => Err(Error::invalid(
                "mode",
                format!("expected sized or paper_literal, got {other}"),
            )),
        }
    }
}

/// Cost of one startup of a thermal unit of `capacity_mw`.
pub fn startup_cost_terms(params: &DispatchableTechParams, capacity_mw: f64) -> f64 {
    params.startup_cost_fraction * params.capex_per_mw * capacity_mw
}

fn capacity_factor_for(scenario: &Scenario, county: &CountyRecord, tech: Tech, horizon: usize) -> Result<CapacityFactor> {
    let cf = match county.capacity_factors.get(&tech) {
        Some(cf) => cf.clone(),
        None => match scenario.resource(tech).and_then(|p| p.default_capacity_factor) {
            Some(f) => CapacityFactor::Annual(f),
            None => {
                return Err(Error::Assembly(format!(
                    "county {}: {tech} enabled without a capacity-factor series",
                    county.fips
                )))
            }
        },
    };
    if let CapacityFactor::Hourly(values) = &cf {
        if values.len() != horizon {
            return Err(Error::Assembly(format!(
                "county {}: {tech} capacity factors have {} hours, horizon is {horizon}",
                county.fips,
                values.len()
            )));
        }
    }
    Ok(cf)
}

fn sorted_resources(scenario: &Scenario) -> Vec<Tech> {
    let mut techs: Vec<Tech> = scenario.resource_techs.iter().map(|t| t.tech).collect();
    techs.sort();
    techs
}

fn sorted_thermal(scenario: &Scenario) -> Vec<Tech> {
    let mut techs: Vec<Tech> = scenario.thermal_techs.iter().map(|t| t.tech).collect();
    techs.sort();
    techs
}

/// Assembles one county's subproblem over the scenario horizon.
pub fn build_subproblem(scenario: &Scenario, county: &CountyRecord, mode: BuildMode) -> Result<SubproblemModel> {
    scenario.validate()?;
    county.validate()?;
    let horizon = scenario.horizon();
    if county.grid_price.len() != horizon {
        return Err(Error::Assembly(format!(
            "county {}: grid price has {} hours, horizon is {horizon}",
            county.fips,
            county.grid_price.len()
        )));
    }
    let econ = &scenario.economics;
    let crf = econ.crf();
    let years = econ.years as f64;
    let op = years * econ.aggregation_weight;
    let demand = facility_demand(&scenario.load, &county.climate_zone)?;
    let hours = 0..horizon;
    let sized = mode == BuildMode::Sized;

    let resources = sorted_resources(scenario);
    let variable: Vec<Tech> = resources.iter().copied().filter(|t| t.is_variable()).collect();
    let thermal = sorted_thermal(scenario);
    let storage = scenario.storage.as_ref();
    let factors: BTreeMap<Tech, CapacityFactor> = resources
        .iter()
        .map(|&t| capacity_factor_for(scenario, county, t, horizon).map(|cf| (t, cf)))
        .collect::<Result<_>>()?;

    let mut m = SubproblemModel::new(format!("county_{}", county.fips));
    let key = |s, t, h| ColumnKey::new(s, t, h);
    let inf = f64::INFINITY;

    for &tech in &resources {
        let params = scenario.resource(tech).expect("listed resource");
        for h in hours.clone() {
            m.add_keyed(
                key(Symbol::ToLoad, Some(tech), Some(h)),
                VarKind::Continuous,
                0.0,
                inf,
                op * params.variable_om_per_mwh.at(h),
            );
        }
        if tech.is_variable() {
            if storage.is_some() {
                for h in hours.clone() {
                    m.add_keyed(key(Symbol::ToStorage, Some(tech), Some(h)), VarKind::Continuous, 0.0, inf, 0.0);
                }
            }
            for h in hours.clone() {
                m.add_keyed(
                    key(Symbol::Export, Some(tech), Some(h)),
                    VarKind::Continuous,
                    0.0,
                    inf,
                    -op * econ.weight_transmission * econ.export_price,
                );
            }
            for h in hours.clone() {
                m.add_keyed(
                    key(Symbol::Curtail, Some(tech), Some(h)),
                    VarKind::Continuous,
                    0.0,
                    inf,
                    op * econ.curtailment_penalty,
                );
            }
        }
    }
    for &tech in &thermal {
        let params = scenario.thermal(tech).expect("listed thermal");
        for h in hours.clone() {
            m.add_keyed(
                key(Symbol::ToLoad, Some(tech), Some(h)),
                VarKind::Continuous,
                0.0,
                params.block_mw,
                op * params.variable_cost_per_mwh(),
            );
        }
        for h in hours.clone() {
            m.add_keyed(key(Symbol::Commit, Some(tech), Some(h)), VarKind::Binary, 0.0, 1.0, 0.0);
        }
        let startup = op * startup_cost_terms(params, params.block_mw);
        for h in hours.clone() {
            m.add_keyed(key(Symbol::Startup, Some(tech), Some(h)), VarKind::Continuous, 0.0, 1.0, startup);
        }
    }
    if let Some(s) = storage {
        for h in hours.clone() {
            m.add_keyed(key(Symbol::Charge, None, Some(h)), VarKind::Continuous, 0.0, s.max_charge_mw(), 0.0);
        }
        for h in hours.clone() {
            let cap = s.max_discharge_mw().min(econ.penetration_fraction * demand.energy_mwh[h]);
            m.add_keyed(key(Symbol::Discharge, None, Some(h)), VarKind::Continuous, 0.0, cap, 0.0);
        }
        for h in hours.clone() {
            m.add_keyed(key(Symbol::Soc, None, Some(h)), VarKind::Continuous, s.min_soc_mwh, s.capacity_mwh, 0.0);
        }
    }
    for h in hours.clone() {
        m.add_keyed(
            key(Symbol::Grid, None, Some(h)),
            VarKind::Continuous,
            0.0,
            inf,
            op * econ.weight_transmission * county.grid_price[h],
        );
    }
    let mut constant = 0.0;
    for &tech in &resources {
        let params = scenario.resource(tech).expect("listed resource");
        let per_mw = crf * params.capex_per_mw + years * params.fixed_om_per_mw_yr;
        let cmax = county.resource_capacity(tech);
        if sized {
            m.add_keyed(key(Symbol::Capacity, Some(tech), None), VarKind::Continuous, 0.0, cmax, per_mw);
        } else {
            constant += per_mw * cmax;
        }
    }
    for &tech in &thermal {
        let params = scenario.thermal(tech).expect("listed thermal");
        let per_unit = (crf * params.capex_per_mw + years * params.fixed_om_per_mw_yr) * params.block_mw;
        if sized {
            m.add_keyed(key(Symbol::Build, Some(tech), None), VarKind::Binary, 0.0, 1.0, per_unit);
        } else {
            constant += per_unit;
        }
    }
    let z = m.add_keyed(
        key(Symbol::Rating, None, None),
        VarKind::Continuous,
        0.0,
        inf,
        crf * (econ.weight_transmission * county.transmission_cost_per_mw_km * county.transmission_km
            + county.substation.per_mw),
    );

    if let Some(s) = storage {
        constant += crf * s.capex_per_mwh * s.capacity_mwh + years * s.fixed_om_per_mwh_yr * s.capacity_mwh;
    }
    constant += crf * econ.weight_telecom * county.fiber_cost_per_km * county.fiber_km;
    constant += crf * county.substation.fixed;
    constant += econ.weight_water * county.water_risk * county.water_risk_penalty;
    constant += op * econ.weight_water * county.water_price_per_l * demand.water_l.iter().sum::<f64>();
    m.objective_constant = constant;

    let col = |m: &SubproblemModel, s, t, h| m.column(s, t, h).expect("declared column");

    // Load balance.
    for h in hours.clone() {
        let mut terms: Vec<(usize, f64)> = resources
            .iter()
            .chain(&thermal)
            .map(|&t| (col(&m, Symbol::ToLoad, Some(t), Some(h)), 1.0))
            .collect();
        terms.push((col(&m, Symbol::Grid, None, Some(h)), 1.0));
        if storage.is_some() {
            terms.push((col(&m, Symbol::Discharge, None, Some(h)), 1.0));
        }
        m.add_row(
            format!("bal_{h}"),
            RowFamily::LoadBalance,
            terms,
            Sense::Ge,
            econ.reserve_multiplier * demand.energy_mwh[h],
        );
    }

    // Thermal unit commitment.
    for &tech in &thermal {
        let params = scenario.thermal(tech).expect("listed thermal");
        let tag = tech.short();
        for h in hours.clone() {
            let p = col(&m, Symbol::ToLoad, Some(tech), Some(h));
            let y = col(&m, Symbol::Commit, Some(tech), Some(h));
            m.add_row(
                format!("minout_{tag}_{h}"),
                RowFamily::MinOutput,
                [(p, 1.0), (y, -params.min_output_mw())],
                Sense::Ge,
                0.0,
            );
            m.add_row(
                format!("maxout_{tag}_{h}"),
                RowFamily::MaxOutput,
                [(p, 1.0), (y, -params.block_mw)],
                Sense::Le,
                0.0,
            );
        }
        for h in 1..horizon {
            let p = col(&m, Symbol::ToLoad, Some(tech), Some(h));
            let prev = col(&m, Symbol::ToLoad, Some(tech), Some(h - 1));
            m.add_row(
                format!("rampup_{tag}_{h}"),
                RowFamily::RampUp,
                [(p, 1.0), (prev, -1.0)],
                Sense::Le,
                params.ramp_mw(),
            );
            m.add_row(
                format!("rampdn_{tag}_{h}"),
                RowFamily::RampDown,
                [(prev, 1.0), (p, -1.0)],
                Sense::Le,
                params.ramp_mw(),
            );
        }
        for h in hours.clone() {
            let t = col(&m, Symbol::Startup, Some(tech), Some(h));
            let y = col(&m, Symbol::Commit, Some(tech), Some(h));
            let mut terms = vec![(t, 1.0), (y, -1.0)];
            if h > 0 {
                terms.push((col(&m, Symbol::Commit, Some(tech), Some(h - 1)), 1.0));
            }
            m.add_row(format!("startup_{tag}_{h}"), RowFamily::Startup, terms, Sense::Ge, 0.0);
        }
        if sized {
            let build = col(&m, Symbol::Build, Some(tech), None);
            for h in hours.clone() {
                let y = col(&m, Symbol::Commit, Some(tech), Some(h));
                m.add_row(
                    format!("gate_{tag}_{h}"),
                    RowFamily::BuildGate,
                    [(y, 1.0), (build, -1.0)],
                    Sense::Le,
                    0.0,
                );
            }
        }
    }

    // Resource availability.
    for &tech in &resources {
        let cf = &factors[&tech];
        let tag = tech.short();
        let cmax = county.resource_capacity(tech);
        for h in hours.clone() {
            let mut terms = vec![(col(&m, Symbol::ToLoad, Some(tech), Some(h)), 1.0)];
            let (family, name) = if tech.is_variable() {
                if storage.is_some() {
                    terms.push((col(&m, Symbol::ToStorage, Some(tech), Some(h)), 1.0));
                }
                terms.push((col(&m, Symbol::Export, Some(tech), Some(h)), 1.0));
                terms.push((col(&m, Symbol::Curtail, Some(tech), Some(h)), 1.0));
                (RowFamily::VgAvailability, format!("avail_{tag}_{h}"))
            } else {
                (RowFamily::Geothermal, format!("geo_{tag}_{h}"))
            };
            let rhs = if sized {
                terms.push((col(&m, Symbol::Capacity, Some(tech), None), -cf.at(h)));
                0.0
            } else {
                cf.at(h) * cmax
            };
            m.add_row(name, family, terms, Sense::Le, rhs);
        }
    }

    // Penetration cap on VG serving the load directly.
    if !variable.is_empty() {
        for h in hours.clone() {
            let terms: Vec<_> = variable
                .iter()
                .map(|&t| (col(&m, Symbol::ToLoad, Some(t), Some(h)), 1.0))
                .collect();
            m.add_row(
                format!("pen_{h}"),
                RowFamily::VgPenetration,
                terms,
                Sense::Le,
                econ.penetration_fraction * demand.energy_mwh[h],
            );
        }
    }

    // Storage charging and state of charge.
    if let Some(s) = storage {
        for h in hours.clone() {
            let mut terms: Vec<_> = variable
                .iter()
                .map(|&t| (col(&m, Symbol::ToStorage, Some(t), Some(h)), 1.0))
                .collect();
            terms.push((col(&m, Symbol::Charge, None, Some(h)), -1.0));
            m.add_row(format!("charge_{h}"), RowFamily::StorageCharge, terms, Sense::Eq, 0.0);
        }
        for h in hours.clone() {
            let soc = col(&m, Symbol::Soc, None, Some(h));
            if h == 0 {
                m.add_row("soc_0", RowFamily::StateOfCharge, [(soc, 1.0)], Sense::Eq, s.initial_soc_mwh());
            } else {
                let terms = [
                    (soc, 1.0),
                    (col(&m, Symbol::Soc, None, Some(h - 1)), -(1.0 - s.self_discharge)),
                    (col(&m, Symbol::Charge, None, Some(h)), -s.charge_efficiency),
                    (col(&m, Symbol::Discharge, None, Some(h)), s.discharge_efficiency),
                ];
                m.add_row(format!("soc_{h}"), RowFamily::StateOfCharge, terms, Sense::Eq, 0.0);
            }
        }
    }

    // Interconnection rating.
    for h in hours {
        let mut terms = vec![(col(&m, Symbol::Grid, None, Some(h)), econ.headroom)];
        for &t in &variable {
            terms.push((col(&m, Symbol::Export, Some(t), Some(h)), econ.headroom));
        }
        terms.push((z, -1.0));
        m.add_row(format!("net_{h}"), RowFamily::NetworkRating, terms, Sense::Le, 0.0);
    }

    m.validate()?;
    Ok(m)
}

/// Reads the dispatch trace and sizing out of a solution vector and prices
/// every cost component from the scenario data.
pub fn extract_dispatch(
    scenario: &Scenario,
    county: &CountyRecord,
    model: &SubproblemModel,
    x: &[f64],
) -> Result<DispatchSolution> {
    let horizon = scenario.horizon();
    let econ = &scenario.economics;
    let crf = econ.crf();
    let years = econ.years as f64;
    let op = years * econ.aggregation_weight;
    let demand = facility_demand(&scenario.load, &county.climate_zone)?;
    let series = |symbol: Symbol, tech: Option<Tech>| -> Option<Vec<f64>> {
        (0..horizon)
            .map(|h| model.column(symbol, tech, Some(h)).map(|j| x[j].max(0.0)))
            .collect()
    };
    let zeros = vec![0.0; horizon];

    let mut sol = DispatchSolution {
        fips: county.fips.clone(),
        demand_mwh: demand.energy_mwh.clone(),
        grid_import: series(Symbol::Grid, None).unwrap_or_else(|| zeros.clone()),
        charge: series(Symbol::Charge, None).unwrap_or_else(|| zeros.clone()),
        discharge: series(Symbol::Discharge, None).unwrap_or_else(|| zeros.clone()),
        soc: series(Symbol::Soc, None).unwrap_or_else(|| zeros.clone()),
        transmission_rating_mw: model
            .column(Symbol::Rating, None, None)
            .map(|j| x[j])
            .unwrap_or(0.0),
        objective: model.objective_value(x),
        ..Default::default()
    };
    let b = &mut sol.breakdown;

    for params in &scenario.resource_techs {
        let tech = params.tech;
        let load = series(Symbol::ToLoad, Some(tech)).unwrap_or_else(|| zeros.clone());
        b.variable_om += op * load
            .iter()
            .enumerate()
            .map(|(h, p)| p * params.variable_om_per_mwh.at(h))
            .sum::<f64>();
        sol.to_load.insert(tech, load);
        let capacity = match model.column(Symbol::Capacity, Some(tech), None) {
            Some(j) => x[j],
            None => county.resource_capacity(tech),
        };
        sol.capacity.insert(tech, capacity);
        *b.capital.entry(tech).or_insert(0.0) += crf * params.capex_per_mw * capacity;
        b.fixed_om += years * params.fixed_om_per_mw_yr * capacity;
        if tech.is_variable() {
            if let Some(s) = series(Symbol::ToStorage, Some(tech)) {
                sol.to_storage.insert(tech, s);
            }
            let export = series(Symbol::Export, Some(tech)).unwrap_or_else(|| zeros.clone());
            let curtail = series(Symbol::Curtail, Some(tech)).unwrap_or_else(|| zeros.clone());
            b.export_revenue -= op * econ.weight_transmission * econ.export_price * export.iter().sum::<f64>();
            b.curtailment += op * econ.curtailment_penalty * curtail.iter().sum::<f64>();
            sol.export.insert(tech, export);
            sol.curtail.insert(tech, curtail);
        }
    }
    for params in &scenario.thermal_techs {
        let tech = params.tech;
        let load = series(Symbol::ToLoad, Some(tech)).unwrap_or_else(|| zeros.clone());
        let commit = series(Symbol::Commit, Some(tech)).unwrap_or_else(|| zeros.clone());
        let starts = series(Symbol::Startup, Some(tech)).unwrap_or_else(|| zeros.clone());
        let built = match model.column(Symbol::Build, Some(tech), None) {
            Some(j) => x[j],
            None => 1.0,
        };
        let capacity = built * params.block_mw;
        sol.capacity.insert(tech, capacity);
        *b.capital.entry(tech).or_insert(0.0) += crf * params.capex_per_mw * capacity;
        b.fixed_om += years * params.fixed_om_per_mw_yr * capacity;
        b.variable_om += op * params.variable_cost_per_mwh() * load.iter().sum::<f64>();
        b.startup += op * startup_cost_terms(params, params.block_mw) * starts.iter().sum::<f64>();
        sol.to_load.insert(tech, load);
        sol.commitment.insert(tech, commit);
        sol.startup.insert(tech, starts);
    }
    if let Some(s) = &scenario.storage {
        sol.capacity.insert(Tech::Battery, s.capacity_mwh);
        *b.capital.entry(Tech::Battery).or_insert(0.0) += crf * s.capex_per_mwh * s.capacity_mwh;
        b.fixed_om += years * s.fixed_om_per_mwh_yr * s.capacity_mwh;
    }
    b.grid_energy = op
        * econ.weight_transmission
        * sol
            .grid_import
            .iter()
            .zip(&county.grid_price)
            .map(|(p, price)| p * price)
            .sum::<f64>();
    b.water_operational =
        op * econ.weight_water * county.water_price_per_l * demand.water_l.iter().sum::<f64>();
    b.water_risk = econ.weight_water * county.water_risk * county.water_risk_penalty;
    b.transmission = crf
        * econ.weight_transmission
        * county.transmission_cost_per_mw_km
        * county.transmission_km
        * sol.transmission_rating_mw;
    b.substation = crf * (county.substation.fixed + county.substation.per_mw * sol.transmission_rating_mw);
    b.fiber = crf * econ.weight_telecom * county.fiber_cost_per_km * county.fiber_km;
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic;

    fn solar_only() -> Scenario {
        let mut s = Scenario::table2();
        s.resource_techs.retain(|t| t.tech == Tech::Solar);
        s.thermal_techs.clear();
        s
    }

    #[test]
    fn column_count_matches_enumeration() {
        let scenario = solar_only();
        let county = synthetic::county(0, scenario.horizon());
        let model = build_subproblem(&scenario, &county, BuildMode::Sized).unwrap();
        // Independent count: per hour the solar flows (load, storage, export,
        // curtail), the battery (charge, discharge, soc) and the grid import;
        // plus solar capacity and the interconnection rating.
        let per_hour = ["load", "stor", "exp", "curt", "chg", "dis", "soc", "grid"];
        let mut expected = 0;
        for _ in 0..96 {
            expected += per_hour.len();
        }
        expected += ["cap_sol", "z"].len();
        assert_eq!(expected, 770);
        assert_eq!(model.num_columns(), expected);
        for prefix in per_hour {
            let n = model
                .columns
                .iter()
                .filter(|c| c.name.split('_').next() == Some(prefix))
                .count();
            assert_eq!(n, 96, "{prefix}");
        }
    }

    #[test]
    fn binaries_are_bounded_and_rows_reference_declared_columns() {
        let scenario = Scenario::table2();
        let county = synthetic::county(1, scenario.horizon());
        let model = build_subproblem(&scenario, &county, BuildMode::Sized).unwrap();
        model.validate().unwrap();
        let binaries = model.binary_columns();
        assert_eq!(binaries.len(), 96 + 1);
        for j in binaries {
            assert_eq!((model.columns[j].lower, model.columns[j].upper), (0.0, 1.0));
        }
        assert_eq!(model.objective.len(), model.num_columns());
    }

    #[test]
    fn missing_capacity_factor_is_an_assembly_error() {
        let scenario = Scenario::table2();
        let mut county = synthetic::county(0, scenario.horizon());
        county.capacity_factors.remove(&Tech::Wind);
        let err = build_subproblem(&scenario, &county, BuildMode::Sized).unwrap_err();
        assert!(matches!(err, Error::Assembly(_)));
        assert!(err.to_string().contains("wind"));
    }

    #[test]
    fn startup_cost_examples() {
        let mut params = Scenario::table2().thermal_techs[0].clone();
        params.startup_cost_fraction = 0.0;
        assert_eq!(startup_cost_terms(&params, 10.0), 0.0);
        params.startup_cost_fraction = 0.01;
        params.capex_per_mw = 1e6;
        assert!((startup_cost_terms(&params, 10.0) - 1e5).abs() < 1e-6);
        assert_eq!(startup_cost_terms(&params, 0.0), 0.0);
    }

    #[test]
    fn dropping_storage_removes_only_storage_parts() {
        let with = Scenario::table2();
        let mut without = with.clone();
        without.storage = None;
        let county = synthetic::county(2, with.horizon());
        let a = build_subproblem(&with, &county, BuildMode::Sized).unwrap();
        let b = build_subproblem(&without, &county, BuildMode::Sized).unwrap();

        let storage_cols: Vec<&str> = a
            .index
            .iter()
            .filter(|(k, _)| k.symbol.is_storage())
            .map(|(_, &j)| a.columns[j].name.as_str())
            .collect();
        let b_names: std::collections::BTreeSet<&str> = b.columns.iter().map(|c| c.name.as_str()).collect();
        let a_names: std::collections::BTreeSet<&str> = a.columns.iter().map(|c| c.name.as_str()).collect();
        let removed: std::collections::BTreeSet<&str> = a_names.difference(&b_names).copied().collect();
        assert_eq!(removed, storage_cols.iter().copied().collect());
        assert!(b_names.is_subset(&a_names));

        let named = |m: &SubproblemModel, r: &Row| -> Vec<(String, String)> {
            r.coeffs
                .iter()
                .map(|&(j, v)| (m.columns[j].name.clone(), format!("{v:e}")))
                .collect()
        };
        let b_rows: BTreeMap<&str, &Row> = b.rows.iter().map(|r| (r.name.as_str(), r)).collect();
        for r in &a.rows {
            match b_rows.get(r.name.as_str()) {
                None => assert!(r.family.is_storage(), "non-storage row {} dropped", r.name),
                Some(other) => {
                    assert!(!r.family.is_storage());
                    let kept: Vec<_> = named(&a, r)
                        .into_iter()
                        .filter(|(n, _)| b_names.contains(n.as_str()))
                        .collect();
                    assert_eq!(kept, named(&b, other), "row {}", r.name);
                    assert_eq!((r.sense, r.rhs.to_bits()), (other.sense, other.rhs.to_bits()));
                }
            }
        }
        assert_eq!(
            a.rows.iter().filter(|r| !r.family.is_storage()).count(),
            b.rows.len()
        );
    }

    #[test]
    fn paper_literal_has_no_sizing_columns() {
        let scenario = Scenario::table2();
        let county = synthetic::county(0, scenario.horizon());
        let sized = build_subproblem(&scenario, &county, BuildMode::Sized).unwrap();
        let literal = build_subproblem(&scenario, &county, BuildMode::PaperLiteral).unwrap();
        assert_eq!(sized.num_columns(), literal.num_columns() + 3 + 1);
        assert!(literal.objective_constant > sized.objective_constant);
        assert_eq!(literal.binary_columns().len(), 96);
    }

    #[test]
    fn audit_flags_violations() {
        let mut m = SubproblemModel::new("t");
        let x = m.add_column("x", VarKind::Continuous, 0.0, 1.0, 1.0);
        let y = m.add_column("y", VarKind::Binary, 0.0, 1.0, 0.0);
        m.add_row("r", RowFamily::Other, [(x, 1.0), (y, 1.0)], Sense::Ge, 1.0);
        assert!(m.audit(&[0.5, 1.0], 1e-9).is_empty());
        let v = m.audit(&[1.5, 0.3], 1e-9);
        assert_eq!(v.len(), 2);
        assert!(v[0].what.contains("bound x"));
        assert!(v[1].what.contains("integrality y"));
        assert_eq!(m.audit(&[0.0, 0.0], 1e-9).len(), 1);
    }
}

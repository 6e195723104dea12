//! Value types shared by every stage of the pipeline.
//!
//! Units are fixed throughout: energy in MWh, power in MW, water in litres and
//! money in a single unspecified currency. Representative hours are one hour
//! long, so MW and MWh are numerically interchangeable per hour.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of representative hours in a year-long run (four seasonal days).
pub const REPRESENTATIVE_HOURS: usize = 96;
pub const HOURS_PER_YEAR: usize = 8760;
/// Days represented by one representative seasonal day.
pub const SEASONAL_WEIGHT: f64 = 91.25;

/// Generation and storage technologies known to the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tech {
    Solar,
    Wind,
    Geothermal,
    NuclearSmr,
    Gas,
    Diesel,
    Biomass,
    Battery,
}

impl Tech {
    pub const ALL: [Tech; 8] = [
        Tech::Solar,
        Tech::Wind,
        Tech::Geothermal,
        Tech::NuclearSmr,
        Tech::Gas,
        Tech::Diesel,
        Tech::Biomass,
        Tech::Battery,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Tech::Solar => "solar",
            Tech::Wind => "wind",
            Tech::Geothermal => "geothermal",
            Tech::NuclearSmr => "nuclear_smr",
            Tech::Gas => "gas",
            Tech::Diesel => "diesel",
            Tech::Biomass => "biomass",
            Tech::Battery => "battery",
        }
    }

    /// Short tag used in generated column names.
    pub fn short(self) -> &'static str {
        match self {
            Tech::Solar => "sol",
            Tech::Wind => "wnd",
            Tech::Geothermal => "geo",
            Tech::NuclearSmr => "smr",
            Tech::Gas => "gas",
            Tech::Diesel => "dsl",
            Tech::Biomass => "bio",
            Tech::Battery => "bat",
        }
    }

    /// Solar and wind: non-dispatchable, may charge storage, export or curtail.
    pub fn is_variable(self) -> bool {
        matches!(self, Tech::Solar | Tech::Wind)
    }

    /// Resource-limited renewables sized against a per-county capacity.
    pub fn is_resource(self) -> bool {
        matches!(self, Tech::Solar | Tech::Wind | Tech::Geothermal)
    }

    /// Fuel or reactor based units with commitment, ramping and startups.
    pub fn is_thermal(self) -> bool {
        matches!(
            self,
            Tech::NuclearSmr | Tech::Gas | Tech::Diesel | Tech::Biomass
        )
    }

    pub fn from_id(id: &str) -> Option<Tech> {
        Tech::ALL.into_iter().find(|t| t.id() == id)
    }
}

impl fmt::Display for Tech {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

fn check(cond: bool, field: &str, reason: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::invalid(field, reason()))
    }
}

fn check_nonneg(value: f64, field: &str) -> Result<()> {
    check(value.is_finite() && value >= 0.0, field, || {
        format!("must be finite and >= 0, got {value}")
    })
}

fn check_fraction(value: f64, field: &str) -> Result<()> {
    check((0.0..=1.0).contains(&value), field, || {
        format!("must lie in [0, 1], got {value}")
    })
}

/// Capital recovery factor: the annuity that repays one unit of capital over
/// `years` periods at `discount_rate`.
pub fn capital_recovery_factor(discount_rate: f64, years: u32) -> Result<f64> {
    check(
        discount_rate.is_finite() && discount_rate > 0.0,
        "discount_rate",
        || format!("must be > 0, got {discount_rate}"),
    )?;
    check(years >= 1, "years", || "must be >= 1".into())?;
    let growth = (1.0 + discount_rate).powi(years as i32);
    Ok(discount_rate * growth / (growth - 1.0))
}

/// Project-wide economic parameters and objective weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EconomicParams {
    pub years: u32,
    pub discount_rate: f64,
    /// Days represented by each representative hour-of-day.
    pub aggregation_weight: f64,
    pub export_price: f64,
    pub curtailment_penalty: f64,
    pub weight_transmission: f64,
    pub weight_telecom: f64,
    pub weight_water: f64,
    /// Share of hourly load that VG and storage discharge may each serve.
    pub penetration_fraction: f64,
    pub min_locations: usize,
    /// Adequacy margin applied to demand in the load balance.
    pub reserve_multiplier: f64,
    /// Contingency headroom on the grid interconnection rating.
    pub headroom: f64,
}

impl EconomicParams {
    /// Defaults from the base-case modelling assumptions.
    pub fn table2() -> Self {
        EconomicParams {
            years: 20,
            discount_rate: 0.012,
            aggregation_weight: SEASONAL_WEIGHT,
            export_price: 5.0,
            curtailment_penalty: 20.0,
            weight_transmission: 1.0,
            weight_telecom: 1.0,
            weight_water: 1.0,
            penetration_fraction: 1.0,
            min_locations: 1,
            reserve_multiplier: 1.0,
            headroom: 1.2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check(self.years >= 1, "years", || "must be >= 1".into())?;
        check(
            self.discount_rate.is_finite() && self.discount_rate > 0.0,
            "discount_rate",
            || format!("must be > 0, got {}", self.discount_rate),
        )?;
        check(
            self.aggregation_weight.is_finite() && self.aggregation_weight > 0.0,
            "aggregation_weight",
            || format!("must be > 0, got {}", self.aggregation_weight),
        )?;
        check_nonneg(self.export_price, "export_price")?;
        check_nonneg(self.curtailment_penalty, "curtailment_penalty")?;
        check_nonneg(self.weight_transmission, "weight_transmission")?;
        check_nonneg(self.weight_telecom, "weight_telecom")?;
        check_nonneg(self.weight_water, "weight_water")?;
        check_nonneg(self.penetration_fraction, "penetration_fraction")?;
        check(self.min_locations >= 1, "min_locations", || {
            "must be >= 1".into()
        })?;
        check(
            self.reserve_multiplier.is_finite() && self.reserve_multiplier >= 1.0,
            "reserve_multiplier",
            || format!("must be >= 1, got {}", self.reserve_multiplier),
        )?;
        check(
            self.headroom.is_finite() && self.headroom >= 1.0,
            "headroom",
            || format!("must be >= 1, got {}", self.headroom),
        )?;
        Ok(())
    }

    pub fn crf(&self) -> f64 {
        capital_recovery_factor(self.discount_rate, self.years)
            .expect("validated economic parameters")
    }
}

/// IT load profile plus the climate-dependent facility multipliers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadSpec {
    pub it_capacity_mw: f64,
    /// IT energy per representative hour (MWh).
    pub hourly_it_mwh: Vec<f64>,
    pub pue_by_climate: BTreeMap<String, f64>,
    /// Litres per kWh of IT energy.
    pub wue_by_climate: BTreeMap<String, f64>,
}

impl LoadSpec {
    pub fn validate(&self) -> Result<()> {
        check_nonneg(self.it_capacity_mw, "it_capacity_mw")?;
        check(!self.hourly_it_mwh.is_empty(), "hourly_it_mwh", || {
            "profile is empty".into()
        })?;
        for (h, &v) in self.hourly_it_mwh.iter().enumerate() {
            check(
                v.is_finite() && v >= 0.0 && v <= self.it_capacity_mw + 1e-9,
                "hourly_it_mwh",
                || {
                    format!(
                        "hour {h}: {v} outside [0, it_capacity_mw = {}]",
                        self.it_capacity_mw
                    )
                },
            )?;
        }
        for (zone, &pue) in &self.pue_by_climate {
            check(pue.is_finite() && pue >= 1.0, "pue_by_climate", || {
                format!("zone {zone}: PUE must be >= 1, got {pue}")
            })?;
        }
        for (zone, &wue) in &self.wue_by_climate {
            check(wue.is_finite() && wue >= 0.0, "wue_by_climate", || {
                format!("zone {zone}: WUE must be >= 0, got {wue}")
            })?;
        }
        Ok(())
    }

    pub fn horizon(&self) -> usize {
        self.hourly_it_mwh.len()
    }
}

/// Hourly facility energy (MWh) and water (L) demand for one climate zone.
#[derive(Clone, Debug, PartialEq)]
pub struct FacilityDemand {
    pub energy_mwh: Vec<f64>,
    pub water_l: Vec<f64>,
}

/// Scales the IT profile by the zone's PUE and WUE. WUE is per kWh, so each
/// MWh of IT energy draws `1000 * WUE` litres.
pub fn facility_demand(load: &LoadSpec, climate_zone: &str) -> Result<FacilityDemand> {
    let pue = *load
        .pue_by_climate
        .get(climate_zone)
        .ok_or_else(|| Error::Lookup {
            kind: "climate zone (PUE)",
            key: climate_zone.to_string(),
        })?;
    let wue = *load
        .wue_by_climate
        .get(climate_zone)
        .ok_or_else(|| Error::Lookup {
            kind: "climate zone (WUE)",
            key: climate_zone.to_string(),
        })?;
    Ok(FacilityDemand {
        energy_mwh: load.hourly_it_mwh.iter().map(|d| pue * d).collect(),
        water_l: load.hourly_it_mwh.iter().map(|d| wue * d * 1000.0).collect(),
    })
}

/// A cost that is either flat or varies by representative hour.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HourlyValue {
    Constant(f64),
    Hourly(Vec<f64>),
}

impl HourlyValue {
    pub fn at(&self, hour: usize) -> f64 {
        match self {
            HourlyValue::Constant(v) => *v,
            HourlyValue::Hourly(values) => values[hour],
        }
    }

    pub fn values(&self) -> Box<dyn Iterator<Item = f64> + '_> {
        match self {
            HourlyValue::Constant(v) => Box::new(std::iter::once(*v)),
            HourlyValue::Hourly(values) => Box::new(values.iter().copied()),
        }
    }

    pub(crate) fn check_len(&self, horizon: usize, field: &str) -> Result<()> {
        if let HourlyValue::Hourly(values) = self {
            check(values.len() == horizon, field, || {
                format!("expected {horizon} hourly values, got {}", values.len())
            })?;
        }
        Ok(())
    }
}

/// Cost data for solar, wind and geothermal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VgTechParams {
    pub tech: Tech,
    pub capex_per_mw: f64,
    pub fixed_om_per_mw_yr: f64,
    pub variable_om_per_mwh: HourlyValue,
    /// Used when a county supplies no capacity-factor series for this tech
    /// (typically geothermal's annual availability).
    #[serde(default)]
    pub default_capacity_factor: Option<f64>,
}

impl VgTechParams {
    pub fn is_dispatchable(&self) -> bool {
        self.tech == Tech::Geothermal
    }

    pub fn validate(&self) -> Result<()> {
        check(self.tech.is_resource(), "tech", || {
            format!("{} is not a solar/wind/geothermal technology", self.tech)
        })?;
        check_nonneg(self.capex_per_mw, "capex_per_mw")?;
        check_nonneg(self.fixed_om_per_mw_yr, "fixed_om_per_mw_yr")?;
        for v in self.variable_om_per_mwh.values() {
            check_nonneg(v, "variable_om_per_mwh")?;
        }
        if let Some(cf) = self.default_capacity_factor {
            check_fraction(cf, "default_capacity_factor")?;
        }
        Ok(())
    }
}

/// Thermal units with unit-commitment behaviour (SMR, gas, diesel, biomass).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispatchableTechParams {
    pub tech: Tech,
    pub capex_per_mw: f64,
    pub fixed_om_per_mw_yr: f64,
    /// Unit size; output is bounded by this when committed.
    pub block_mw: f64,
    pub min_output_fraction: f64,
    /// Maximum hourly change in output as a fraction of `block_mw`.
    pub ramp_rate_fraction: f64,
    pub startup_cost_fraction: f64,
    /// Yearly operating cost as a fraction of CAPEX.
    pub operating_cost_fraction: f64,
}

impl DispatchableTechParams {
    pub fn validate(&self) -> Result<()> {
        check(self.tech.is_thermal(), "tech", || {
            format!("{} is not a dispatchable thermal technology", self.tech)
        })?;
        check_nonneg(self.capex_per_mw, "capex_per_mw")?;
        check_nonneg(self.fixed_om_per_mw_yr, "fixed_om_per_mw_yr")?;
        check_nonneg(self.block_mw, "block_mw")?;
        check_fraction(self.min_output_fraction, "min_output_fraction")?;
        check(
            self.ramp_rate_fraction.is_finite() && self.ramp_rate_fraction > 0.0,
            "ramp_rate_fraction",
            || format!("must be > 0, got {}", self.ramp_rate_fraction),
        )?;
        check_nonneg(self.startup_cost_fraction, "startup_cost_fraction")?;
        check_nonneg(self.operating_cost_fraction, "operating_cost_fraction")?;
        Ok(())
    }

    pub fn min_output_mw(&self) -> f64 {
        self.min_output_fraction * self.block_mw
    }

    pub fn ramp_mw(&self) -> f64 {
        self.ramp_rate_fraction * self.block_mw
    }

    /// Variable cost per MWh implied by spreading the yearly operating cost
    /// over every hour of the year.
    pub fn variable_cost_per_mwh(&self) -> f64 {
        self.operating_cost_fraction * self.capex_per_mw / HOURS_PER_YEAR as f64
    }
}

/// Battery with fixed energy rating.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StorageParams {
    pub capacity_mwh: f64,
    /// Charge limit per hour as a fraction of `capacity_mwh`.
    pub charge_rate_fraction: f64,
    pub discharge_rate_fraction: f64,
    pub min_soc_mwh: f64,
    /// Fraction of stored energy lost per hour.
    pub self_discharge: f64,
    pub charge_efficiency: f64,
    pub discharge_efficiency: f64,
    #[serde(default)]
    pub round_trip_efficiency: Option<f64>,
    #[serde(default)]
    pub capex_per_mwh: f64,
    #[serde(default)]
    pub fixed_om_per_mwh_yr: f64,
}

impl StorageParams {
    pub fn validate(&self) -> Result<()> {
        check_nonneg(self.capacity_mwh, "capacity_mwh")?;
        check_nonneg(self.charge_rate_fraction, "charge_rate_fraction")?;
        check_nonneg(self.discharge_rate_fraction, "discharge_rate_fraction")?;
        check(
            self.min_soc_mwh >= 0.0 && self.min_soc_mwh <= self.capacity_mwh,
            "min_soc_mwh",
            || {
                format!(
                    "must lie in [0, capacity_mwh = {}], got {}",
                    self.capacity_mwh, self.min_soc_mwh
                )
            },
        )?;
        check(
            (0.0..1.0).contains(&self.self_discharge),
            "self_discharge",
            || format!("must lie in [0, 1), got {}", self.self_discharge),
        )?;
        check(
            self.charge_efficiency > 0.0 && self.charge_efficiency <= 1.0,
            "charge_efficiency",
            || format!("must lie in (0, 1], got {}", self.charge_efficiency),
        )?;
        check(
            self.discharge_efficiency > 0.0 && self.discharge_efficiency <= 1.0,
            "discharge_efficiency",
            || format!("must lie in (0, 1], got {}", self.discharge_efficiency),
        )?;
        if let Some(eta) = self.round_trip_efficiency {
            let product = self.charge_efficiency * self.discharge_efficiency;
            check((product - eta).abs() <= 0.05, "round_trip_efficiency", || {
                format!("{eta} inconsistent with charge*discharge efficiency {product:.4}")
            })?;
        }
        check_nonneg(self.capex_per_mwh, "capex_per_mwh")?;
        check_nonneg(self.fixed_om_per_mwh_yr, "fixed_om_per_mwh_yr")?;
        Ok(())
    }

    pub fn max_charge_mw(&self) -> f64 {
        self.charge_rate_fraction * self.capacity_mwh
    }

    pub fn max_discharge_mw(&self) -> f64 {
        self.discharge_rate_fraction * self.capacity_mwh
    }

    pub fn initial_soc_mwh(&self) -> f64 {
        0.5 * self.capacity_mwh
    }
}

/// Substation cost as a function of interconnection rating.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubstationCost {
    pub fixed: f64,
    pub per_mw: f64,
}

/// Values applied to counties whose data files leave a field blank.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountyDefaults {
    pub water_price_per_l: f64,
    pub water_risk: f64,
    /// Currency per unit of the water-risk index.
    pub water_risk_penalty: f64,
    pub fiber_cost_per_km: f64,
    pub transmission_cost_per_mw_km: f64,
    pub substation: SubstationCost,
    /// Used when a county row has no `trans_km`.
    pub transmission_km: f64,
}

impl CountyDefaults {
    pub fn validate(&self) -> Result<()> {
        check_nonneg(self.water_price_per_l, "water_price_per_l")?;
        check_nonneg(self.water_risk, "water_risk")?;
        check_nonneg(self.water_risk_penalty, "water_risk_penalty")?;
        check_nonneg(self.fiber_cost_per_km, "fiber_cost_per_km")?;
        check_nonneg(self.transmission_cost_per_mw_km, "transmission_cost_per_mw_km")?;
        check_nonneg(self.substation.fixed, "substation.fixed")?;
        check_nonneg(self.substation.per_mw, "substation.per_mw")?;
        check_nonneg(self.transmission_km, "transmission_km")?;
        Ok(())
    }
}

/// Hourly availability for a resource technology.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CapacityFactor {
    Annual(f64),
    Hourly(Vec<f64>),
}

impl CapacityFactor {
    pub fn at(&self, hour: usize) -> f64 {
        match self {
            CapacityFactor::Annual(f) => *f,
            CapacityFactor::Hourly(values) => values[hour],
        }
    }
}

/// One candidate location.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountyRecord {
    pub fips: String,
    pub name: String,
    pub lat: f64,
    pub lon: f64,
    pub climate_zone: String,
    /// Maximum buildable capacity per resource tech (MW).
    pub resource_capacity_mw: BTreeMap<Tech, f64>,
    pub capacity_factors: BTreeMap<Tech, CapacityFactor>,
    /// Grid energy price per representative hour.
    pub grid_price: Vec<f64>,
    pub water_price_per_l: f64,
    pub water_risk: f64,
    pub water_risk_penalty: f64,
    pub fiber_km: f64,
    pub transmission_km: f64,
    pub fiber_cost_per_km: f64,
    pub transmission_cost_per_mw_km: f64,
    pub substation: SubstationCost,
}

impl CountyRecord {
    pub fn validate(&self) -> Result<()> {
        check(!self.fips.is_empty(), "fips", || "empty".into())?;
        check((-90.0..=90.0).contains(&self.lat), "lat", || {
            format!("{} outside [-90, 90]", self.lat)
        })?;
        check((-180.0..=180.0).contains(&self.lon), "lon", || {
            format!("{} outside [-180, 180]", self.lon)
        })?;
        for (tech, &cap) in &self.resource_capacity_mw {
            check_nonneg(cap, &format!("cap_{}_mw", tech.id()))?;
        }
        for (tech, cf) in &self.capacity_factors {
            let field = format!("{}_cf", tech.id());
            match cf {
                CapacityFactor::Annual(f) => check_fraction(*f, &field)?,
                CapacityFactor::Hourly(values) => {
                    for (h, &f) in values.iter().enumerate() {
                        check((0.0..=1.0).contains(&f), &field, || {
                            format!("hour {h}: {f} outside [0, 1]")
                        })?;
                    }
                }
            }
        }
        for &p in &self.grid_price {
            check_nonneg(p, "grid_price")?;
        }
        check_nonneg(self.water_price_per_l, "water_price_per_l")?;
        check_nonneg(self.water_risk, "water_risk")?;
        check_nonneg(self.water_risk_penalty, "water_risk_penalty")?;
        check_nonneg(self.fiber_km, "fiber_km")?;
        check_nonneg(self.transmission_km, "transmission_km")?;
        check_nonneg(self.fiber_cost_per_km, "fiber_cost_per_km")?;
        check_nonneg(self.transmission_cost_per_mw_km, "transmission_cost_per_mw_km")?;
        check_nonneg(self.substation.fixed, "substation.fixed")?;
        check_nonneg(self.substation.per_mw, "substation.per_mw")?;
        Ok(())
    }

    pub fn resource_capacity(&self, tech: Tech) -> f64 {
        self.resource_capacity_mw.get(&tech).copied().unwrap_or(0.0)
    }
}

/// Objective contributions of one solved county. Every field is already
/// weighted, so the fields sum to the objective.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    /// Annualised capital per technology (battery included).
    pub capital: BTreeMap<Tech, f64>,
    pub fixed_om: f64,
    pub variable_om: f64,
    pub startup: f64,
    pub grid_energy: f64,
    /// Reported as a negative number (income).
    pub export_revenue: f64,
    pub curtailment: f64,
    pub water_operational: f64,
    pub water_risk: f64,
    pub transmission: f64,
    pub substation: f64,
    pub fiber: f64,
}

impl CostBreakdown {
    pub const COMPONENTS: [&'static str; 12] = [
        "capital",
        "fixed_om",
        "variable_om",
        "startup",
        "grid_energy",
        "export_revenue",
        "curtailment",
        "water_operational",
        "water_risk",
        "transmission",
        "substation",
        "fiber",
    ];

    pub fn capital_total(&self) -> f64 {
        self.capital.values().sum()
    }

    /// Named components in the fixed `COMPONENTS` order.
    pub fn components(&self) -> [(&'static str, f64); 12] {
        let values = [
            self.capital_total(),
            self.fixed_om,
            self.variable_om,
            self.startup,
            self.grid_energy,
            self.export_revenue,
            self.curtailment,
            self.water_operational,
            self.water_risk,
            self.transmission,
            self.substation,
            self.fiber,
        ];
        let mut out = [("", 0.0); 12];
        for (slot, (name, value)) in out
            .iter_mut()
            .zip(Self::COMPONENTS.iter().zip(values.iter()))
        {
            *slot = (name, *value);
        }
        out
    }

    pub fn total(&self) -> f64 {
        self.components().iter().map(|(_, v)| v).sum()
    }
}

/// Hourly dispatch, sizing and cost of one solved county.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DispatchSolution {
    pub fips: String,
    /// Facility energy demand the dispatch was solved against.
    pub demand_mwh: Vec<f64>,
    pub to_load: BTreeMap<Tech, Vec<f64>>,
    pub to_storage: BTreeMap<Tech, Vec<f64>>,
    pub export: BTreeMap<Tech, Vec<f64>>,
    pub curtail: BTreeMap<Tech, Vec<f64>>,
    pub commitment: BTreeMap<Tech, Vec<f64>>,
    pub startup: BTreeMap<Tech, Vec<f64>>,
    pub grid_import: Vec<f64>,
    pub charge: Vec<f64>,
    pub discharge: Vec<f64>,
    pub soc: Vec<f64>,
    /// Built capacity per technology (MW; MWh for the battery).
    pub capacity: BTreeMap<Tech, f64>,
    pub transmission_rating_mw: f64,
    pub objective: f64,
    pub breakdown: CostBreakdown,
    /// Relative MIP gap at termination (0 when proven optimal).
    pub gap: f64,
}

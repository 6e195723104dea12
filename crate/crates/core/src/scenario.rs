//! Scenario configuration: economics, load, technology catalog and county
//! defaults, loadable from JSON with an optional `"defaults": "table2"` preset
//! that user-supplied keys override field by field.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::domain::{
    CountyDefaults, DispatchableTechParams, EconomicParams, HourlyValue, LoadSpec,
    StorageParams, SubstationCost, Tech, VgTechParams, REPRESENTATIVE_HOURS,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub economics: EconomicParams,
    pub load: LoadSpec,
    /// Solar, wind and geothermal cost data. A tech absent here is disabled.
    pub resource_techs: Vec<VgTechParams>,
    /// Thermal units (SMR, gas, ...). A tech absent here is disabled.
    pub thermal_techs: Vec<DispatchableTechParams>,
    /// `null` disables storage.
    pub storage: Option<StorageParams>,
    pub county_defaults: CountyDefaults,
}

impl Scenario {
    /// Base-case assumptions: 200 MW facility, 150 MWh lithium-ion battery,
    /// export price 5, curtailment penalty 20, 20 years at 1.2 %.
    pub fn table2() -> Self {
        Scenario {
            economics: EconomicParams::table2(),
            load: LoadSpec {
                it_capacity_mw: 200.0,
                hourly_it_mwh: synthetic_it_profile(200.0),
                pue_by_climate: [
                    ("1", 1.30),
                    ("2", 1.26),
                    ("3", 1.22),
                    ("4", 1.18),
                    ("5", 1.15),
                    ("6", 1.13),
                    ("7", 1.11),
                    ("8", 1.10),
                ]
                .into_iter()
                .map(|(z, v)| (z.to_string(), v))
                .collect(),
                wue_by_climate: [
                    ("1", 0.45),
                    ("2", 0.40),
                    ("3", 0.35),
                    ("4", 0.28),
                    ("5", 0.22),
                    ("6", 0.17),
                    ("7", 0.12),
                    ("8", 0.10),
                ]
                .into_iter()
                .map(|(z, v)| (z.to_string(), v))
                .collect(),
            },
            resource_techs: vec![
                VgTechParams {
                    tech: Tech::Solar,
                    capex_per_mw: 1.4e6,
                    fixed_om_per_mw_yr: 22_000.0,
                    variable_om_per_mwh: HourlyValue::Constant(0.0),
                    default_capacity_factor: None,
                },
                VgTechParams {
                    tech: Tech::Wind,
                    capex_per_mw: 1.6e6,
                    fixed_om_per_mw_yr: 43_000.0,
                    variable_om_per_mwh: HourlyValue::Constant(0.0),
                    default_capacity_factor: None,
                },
                VgTechParams {
                    tech: Tech::Geothermal,
                    capex_per_mw: 8.0e6,
                    fixed_om_per_mw_yr: 200_000.0,
                    variable_om_per_mwh: HourlyValue::Constant(5.0),
                    default_capacity_factor: Some(0.9),
                },
            ],
            thermal_techs: vec![DispatchableTechParams {
                tech: Tech::NuclearSmr,
                capex_per_mw: 9.0e6,
                fixed_om_per_mw_yr: 120_000.0,
                block_mw: 77.0,
                min_output_fraction: 0.4,
                ramp_rate_fraction: 0.5,
                startup_cost_fraction: 0.0005,
                operating_cost_fraction: 0.02,
            }],
            storage: Some(StorageParams {
                capacity_mwh: 150.0,
                charge_rate_fraction: 0.25,
                discharge_rate_fraction: 0.25,
                min_soc_mwh: 15.0,
                self_discharge: 0.0002,
                charge_efficiency: 0.95,
                discharge_efficiency: 0.95,
                round_trip_efficiency: Some(0.9025),
                capex_per_mwh: 3.0e5,
                fixed_om_per_mwh_yr: 7_500.0,
            }),
            county_defaults: CountyDefaults {
                water_price_per_l: 0.0015,
                water_risk: 1.0,
                water_risk_penalty: 1.0e6,
                fiber_cost_per_km: 57_500.0,
                transmission_cost_per_mw_km: 3_000.0,
                substation: SubstationCost {
                    fixed: 5.0e6,
                    per_mw: 20_000.0,
                },
                transmission_km: 10.0,
            },
        }
    }

    /// Parses scenario JSON. A top-level `"defaults": "table2"` starts from
    /// [`Scenario::table2`] and deep-merges the remaining keys over it
    /// (objects merge, arrays and scalars replace).
    pub fn from_json_str(text: &str) -> Result<Self> {
        let mut doc: Value = serde_json::from_str(text)?;
        let preset = match doc.as_object_mut().and_then(|o| o.remove("defaults")) {
            None => None,
            Some(Value::String(name)) if name == "table2" => Some(Scenario::table2()),
            Some(other) => {
                return Err(Error::invalid(
                    "defaults",
                    format!("unknown preset {other}; only \"table2\" is defined"),
                ))
            }
        };
        let merged = match preset {
            Some(base) => {
                let mut base = serde_json::to_value(base)?;
                merge(&mut base, doc);
                base
            }
            None => doc,
        };
        let scenario: Scenario = serde_json::from_value(merged)?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.economics.validate()?;
        self.load.validate()?;
        let horizon = self.load.horizon();
        let mut seen = BTreeSet::new();
        for t in &self.resource_techs {
            t.validate()?;
            t.variable_om_per_mwh
                .check_len(horizon, "variable_om_per_mwh")?;
            if !seen.insert(t.tech) {
                return Err(Error::Duplicate {
                    kind: "technology",
                    key: t.tech.to_string(),
                });
            }
        }
        for t in &self.thermal_techs {
            t.validate()?;
            if !seen.insert(t.tech) {
                return Err(Error::Duplicate {
                    kind: "technology",
                    key: t.tech.to_string(),
                });
            }
        }
        if let Some(storage) = &self.storage {
            storage.validate()?;
        }
        self.county_defaults.validate()
    }

    pub fn horizon(&self) -> usize {
        self.load.horizon()
    }

    pub fn resource(&self, tech: Tech) -> Option<&VgTechParams> {
        self.resource_techs.iter().find(|t| t.tech == tech)
    }

    pub fn thermal(&self, tech: Tech) -> Option<&DispatchableTechParams> {
        self.thermal_techs.iter().find(|t| t.tech == tech)
    }

    /// Canonical serialisation used for fingerprinting.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("scenario serialises")
    }

    pub fn to_pretty_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialises")
    }
}

fn merge(base: &mut Value, overlay: Value) {
    match (base, overlay) {
        (Value::Object(base), Value::Object(overlay)) => {
            for (key, value) in overlay {
                match base.get_mut(&key) {
                    Some(slot) if slot.is_object() && value.is_object() => merge(slot, value),
                    _ => {
                        base.insert(key, value);
                    }
                }
            }
        }
        (slot, value) => *slot = value,
    }
}

/// A deliberately uneven 96-hour IT profile (four seasonal days) peaking in
/// the afternoon, never exceeding `capacity`.
pub fn synthetic_it_profile(capacity: f64) -> Vec<f64> {
    (0..REPRESENTATIVE_HOURS)
        .map(|h| {
            let season = (h / 24) as f64;
            let hour = (h % 24) as f64;
            let diurnal = (std::f64::consts::TAU * (hour - 9.0) / 24.0).sin();
            let jitter = ((h as f64 * 7.31).sin() * 0.5 + (h as f64 * 2.17).cos() * 0.5) * 0.05;
            let seasonal = [0.0, 0.04, 0.08, 0.02][season as usize];
            capacity * (0.78 + 0.12 * diurnal + seasonal + jitter).clamp(0.0, 1.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table2_values() {
        let s = Scenario::table2();
        s.validate().unwrap();
        assert_eq!(s.economics.years, 20);
        assert_eq!(s.economics.discount_rate, 0.012);
        assert_eq!(s.economics.export_price, 5.0);
        assert_eq!(s.economics.curtailment_penalty, 20.0);
        assert_eq!(s.load.it_capacity_mw, 200.0);
        assert_eq!(s.storage.as_ref().unwrap().capacity_mwh, 150.0);
        assert_eq!(s.horizon(), 96);
    }

    #[test]
    fn preset_with_overrides() {
        let s = Scenario::from_json_str(
            r#"{"defaults": "table2", "economics": {"penetration_fraction": 0.25}, "storage": null}"#,
        )
        .unwrap();
        assert_eq!(s.economics.penetration_fraction, 0.25);
        assert_eq!(s.economics.years, 20);
        assert!(s.storage.is_none());
    }

    #[test]
    fn full_document_round_trips() {
        let s = Scenario::table2();
        let back = Scenario::from_json_str(&s.to_pretty_json()).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn rejects_unknown_preset_and_bad_values() {
        assert!(Scenario::from_json_str(r#"{"defaults": "table9"}"#).is_err());
        let err = Scenario::from_json_str(
            r#"{"defaults": "table2", "economics": {"headroom": 0.5}}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("headroom"));
    }

    #[test]
    fn profile_within_capacity() {
        let p = synthetic_it_profile(200.0);
        assert_eq!(p.len(), 96);
        assert!(p.iter().all(|&v| (0.0..=200.0).contains(&v)));
        let spread = p.iter().cloned().fold(f64::MIN, f64::max) - p.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread > 20.0);
    }
}

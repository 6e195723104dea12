//! Deterministic synthetic counties for fixtures, examples and benchmarks.
//!
//! Nothing here samples a random number generator; every attribute is a
//! closed-form function of the county index so fixtures are reproducible
//! byte for byte.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use std::fmt::Write as _;
use std::path::Path;

use crate::domain::{CapacityFactor, CountyRecord, Tech};
use crate::error::{Error, Result};
use crate::ingest::CountyRegistry;
use crate::scenario::Scenario;

/// Uniform-looking value in [0, 1) derived from `(index, salt)`.
fn unit(index: usize, salt: u64) -> f64 {
    // splitmix64 finaliser
    let mut z = (index as u64)
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(salt.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64
}

fn round_to(value: f64, digits: i32) -> f64 {
    let scale = 10f64.powi(digits);
    (value * scale).round() / scale
}

/// Solar availability for representative hour `h` at `lat`.
pub fn solar_profile(lat: f64, horizon: usize) -> Vec<f64> {
    let peak = (0.82 - (lat - 30.0) * 0.012).clamp(0.3, 0.9);
    (0..horizon)
        .map(|h| {
            let hour = (h % 24) as f64;
            let season = [0.72, 1.0, 1.1, 0.85][(h / 24) % 4];
            let sun = (PI * (hour - 6.0) / 12.0).sin().max(0.0);
            round_to((peak * season * sun).min(1.0), 4)
        })
        .collect()
}

pub fn wind_profile(index: usize, horizon: usize) -> Vec<f64> {
    let level = 0.22 + 0.2 * unit(index, 11);
    let phase = 24.0 * unit(index, 12);
    (0..horizon)
        .map(|h| {
            let hour = h as f64;
            let v = level
                + 0.12 * (TAU * (hour + phase) / 24.0).sin()
                + 0.06 * (0.7 * hour + 6.0 * unit(index, 13)).cos();
            round_to(v.clamp(0.0, 1.0), 4)
        })
        .collect()
}

pub fn grid_price_profile(index: usize, horizon: usize) -> Vec<f64> {
    let level = 32.0 + 18.0 * unit(index, 21);
    (0..horizon)
        .map(|h| {
            let hour = (h % 24) as f64;
            round_to(level + 14.0 * (TAU * (hour - 12.0) / 24.0).sin().max(-0.5), 2)
        })
        .collect()
}

/// Synthetic county number `index` over `horizon` representative hours.
pub fn county(index: usize, horizon: usize) -> CountyRecord {
    let defaults = Scenario::table2().county_defaults;
    let lat = round_to(30.0 + 17.0 * unit(index, 1), 4);
    let lon = round_to(-120.0 + 45.0 * unit(index, 2), 4);
    let zone = (2 + ((lat - 30.0) / 17.0 * 5.0) as usize).min(8);
    let geo = if unit(index, 5) < 0.3 {
        round_to(20.0 + 60.0 * unit(index, 6), 1)
    } else {
        0.0
    };
    let mut capacity = BTreeMap::new();
    capacity.insert(Tech::Solar, round_to(200.0 + 800.0 * unit(index, 3), 1));
    capacity.insert(Tech::Wind, round_to(100.0 + 600.0 * unit(index, 4), 1));
    capacity.insert(Tech::Geothermal, geo);
    let mut factors = BTreeMap::new();
    factors.insert(Tech::Solar, CapacityFactor::Hourly(solar_profile(lat, horizon)));
    factors.insert(Tech::Wind, CapacityFactor::Hourly(wind_profile(index, horizon)));
    CountyRecord {
        fips: format!("{:05}", 1001 + 2 * index),
        name: format!("Synthetic {index}"),
        lat,
        lon,
        climate_zone: zone.to_string(),
        resource_capacity_mw: capacity,
        capacity_factors: factors,
        grid_price: grid_price_profile(index, horizon),
        water_price_per_l: round_to(0.0008 + 0.002 * unit(index, 7), 6),
        water_risk: round_to(5.0 * unit(index, 8), 3),
        water_risk_penalty: defaults.water_risk_penalty,
        fiber_km: round_to(5.0 + 120.0 * unit(index, 9), 2),
        transmission_km: round_to(2.0 + 40.0 * unit(index, 10), 2),
        fiber_cost_per_km: defaults.fiber_cost_per_km,
        transmission_cost_per_mw_km: defaults.transmission_cost_per_mw_km,
        substation: defaults.substation,
    }
}

/// Registry of `n` synthetic counties.
pub fn registry(n: usize, horizon: usize) -> CountyRegistry {
    CountyRegistry::from_records((0..n).map(|i| county(i, horizon)).collect())
        .expect("synthetic fips are unique")
}

/// Fiber node positions shared by every synthetic dataset.
pub fn fiber_nodes() -> Vec<(String, f64, f64)> {
    (0..12)
        .map(|k| {
            let lat = round_to(31.0 + 15.0 * unit(k, 31), 4);
            let lon = round_to(-118.0 + 40.0 * unit(k, 32), 4);
            (format!("node{k:02}"), lat, lon)
        })
        .collect()
}

/// Writes counties.csv, profiles.csv, fiber_nodes.csv and load.csv for the
/// first `n` synthetic counties into `dir`. Even-indexed counties leave
/// `fiber_km` blank so it is derived from the fiber nodes on load.
pub fn write_dataset(dir: &Path, n: usize) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let horizon = crate::domain::REPRESENTATIVE_HOURS;
    let mut counties = String::from(
        "fips,name,lat,lon,climate_zone,water_price_per_l,water_risk,fiber_km,trans_km,cap_solar_mw,cap_wind_mw,cap_geo_mw\n",
    );
    let mut profiles = String::from("fips,series,hour,value\n");
    for i in 0..n {
        let c = county(i, horizon);
        let fiber = if i % 2 == 0 { String::new() } else { c.fiber_km.to_string() };
        let _ = writeln!(
            counties,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            c.fips,
            c.name,
            c.lat,
            c.lon,
            c.climate_zone,
            c.water_price_per_l,
            c.water_risk,
            fiber,
            c.transmission_km,
            c.resource_capacity(Tech::Solar),
            c.resource_capacity(Tech::Wind),
            c.resource_capacity(Tech::Geothermal),
        );
        for (series, tech) in [("solar_cf", Tech::Solar), ("wind_cf", Tech::Wind)] {
            for h in 0..horizon {
                let _ = writeln!(profiles, "{},{series},{h},{}", c.fips, c.capacity_factors[&tech].at(h));
            }
        }
        for (h, p) in c.grid_price.iter().enumerate() {
            let _ = writeln!(profiles, "{},grid_price,{h},{p}", c.fips);
        }
    }
    let mut nodes = String::from("node_id,lat,lon\n");
    for (id, lat, lon) in fiber_nodes() {
        let _ = writeln!(nodes, "{id},{lat},{lon}");
    }
    let mut load = String::from("hour,it_mw\n");
    for (h, v) in Scenario::table2().load.hourly_it_mwh.iter().enumerate() {
        let _ = writeln!(load, "{h},{}", round_to(*v, 3));
    }
    for (name, body) in [
        ("counties.csv", counties),
        ("profiles.csv", profiles),
        ("fiber_nodes.csv", nodes),
        ("load.csv", load),
    ] {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counties_are_valid_and_distinct() {
        let reg = registry(50, 96);
        assert_eq!(reg.len(), 50);
        for c in reg.iter() {
            c.validate().unwrap();
        }
        assert_ne!(county(0, 96), county(1, 96));
        assert_eq!(county(3, 96), county(3, 96));
    }

    #[test]
    fn solar_is_dark_at_night() {
        let p = solar_profile(35.0, 96);
        assert_eq!(p[0], 0.0);
        assert!(p[12] > 0.5);
    }
}

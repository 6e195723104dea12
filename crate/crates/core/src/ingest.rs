//! Delimited-file ingestion: counties, hourly profiles, fiber nodes and the
//! IT load, plus the derived per-county fields.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::path::{Path, PathBuf};

use log::warn;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::domain::{
    CapacityFactor, CountyDefaults, CountyRecord, Tech, HOURS_PER_YEAR, REPRESENTATIVE_HOURS,
    SEASONAL_WEIGHT,
};
use crate::error::{Error, Result};

pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Counties keyed and iterated by fips.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CountyRegistry {
    records: BTreeMap<String, CountyRecord>,
    /// (source, note) pairs describing where values came from.
    provenance: Vec<(String, String)>,
}

impl CountyRegistry {
    pub fn from_records(records: Vec<CountyRecord>) -> Result<Self> {
        let mut reg = CountyRegistry::default();
        for r in records {
            reg.insert(r)?;
        }
        Ok(reg)
    }

    pub fn insert(&mut self, record: CountyRecord) -> Result<()> {
        if self.records.contains_key(&record.fips) {
            return Err(Error::Duplicate {
                kind: "fips",
                key: record.fips,
            });
        }
        self.records.insert(record.fips.clone(), record);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &CountyRecord> {
        self.records.values()
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = &mut CountyRecord> {
        self.records.values_mut()
    }

    pub fn get(&self, fips: &str) -> Option<&CountyRecord> {
        self.records.get(fips)
    }

    pub fn get_mut(&mut self, fips: &str) -> Option<&mut CountyRecord> {
        self.records.get_mut(fips)
    }

    pub fn provenance(&self) -> &[(String, String)] {
        &self.provenance
    }

    pub fn note(&mut self, source: impl Into<String>, note: impl Into<String>) {
        self.provenance.push((source.into(), note.into()));
    }

    /// Keeps only the listed counties; every listed fips must exist.
    pub fn retain(&mut self, fips: &[String]) -> Result<()> {
        for f in fips {
            if !self.records.contains_key(f) {
                return Err(Error::Lookup {
                    kind: "county",
                    key: f.clone(),
                });
            }
        }
        self.records.retain(|k, _| fips.contains(k));
        Ok(())
    }

    /// SHA-256 over the canonical JSON of all records.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_vec(&self.records).expect("records serialise");
        hex(&Sha256::digest(json))
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberNode {
    pub id: String,
    pub lat: f64,
    pub lon: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FiberNodeSet {
    nodes: Vec<FiberNode>,
}

impl FiberNodeSet {
    pub fn new(nodes: Vec<FiberNode>) -> Result<Self> {
        for n in &nodes {
            if !(-90.0..=90.0).contains(&n.lat) || !(-180.0..=180.0).contains(&n.lon) {
                return Err(Error::invalid(
                    format!("fiber node {}", n.id),
                    format!("({}, {}) outside [-90, 90] x [-180, 180]", n.lat, n.lon),
                ));
            }
        }
        Ok(FiberNodeSet { nodes })
    }

    pub fn nodes(&self) -> &[FiberNode] {
        &self.nodes
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Great-circle distance in km between two (lat, lon) points in degrees.
pub fn haversine_km(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let (p1, p2) = (lat1.to_radians(), lat2.to_radians());
    let dp = p2 - p1;
    let dl = (lon2 - lon1).to_radians();
    let a = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * a.sqrt().min(1.0).asin()
}

pub fn nearest_fiber_distance(county: &CountyRecord, nodes: &FiberNodeSet) -> Result<f64> {
    nodes
        .nodes
        .iter()
        .map(|n| haversine_km(county.lat, county.lon, n.lat, n.lon))
        .min_by(f64::total_cmp)
        .ok_or_else(|| Error::invalid("fiber_nodes", "node set is empty"))
}

/// Averages an 8760-hour series into four seasonal days of 24 hours.
/// Season `s` covers hours `[2190 s, 2190 (s + 1))`.
pub fn aggregate_seasonal(hourly: &[f64]) -> Result<Vec<f64>> {
    if hourly.len() != HOURS_PER_YEAR {
        return Err(Error::invalid(
            "hourly series",
            format!("expected {HOURS_PER_YEAR} values, got {}", hourly.len()),
        ));
    }
    let season_len = HOURS_PER_YEAR / 4;
    let mut sums = vec![0.0; REPRESENTATIVE_HOURS];
    let mut counts = vec![0usize; REPRESENTATIVE_HOURS];
    for (t, &v) in hourly.iter().enumerate() {
        let k = (t / season_len) * 24 + t % 24;
        sums[k] += v;
        counts[k] += 1;
    }
    // 2190 is not a multiple of 24, so groups differ slightly in size; the
    // representative weight assumes equal groups.
    debug_assert!((4.0 * 24.0 * SEASONAL_WEIGHT - HOURS_PER_YEAR as f64).abs() < 1e-9);
    Ok(sums.iter().zip(&counts).map(|(s, &c)| s / c as f64).collect())
}

/// Profile series recognised in profiles.csv.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Series {
    SolarCf,
    WindCf,
    GridPrice,
}

impl Series {
    pub fn id(self) -> &'static str {
        match self {
            Series::SolarCf => "solar_cf",
            Series::WindCf => "wind_cf",
            Series::GridPrice => "grid_price",
        }
    }

    pub fn from_id(id: &str) -> Option<Series> {
        match id {
            "solar_cf" => Some(Series::SolarCf),
            "wind_cf" => Some(Series::WindCf),
            "grid_price" => Some(Series::GridPrice),
            _ => None,
        }
    }

    fn tech(self) -> Option<Tech> {
        match self {
            Series::SolarCf => Some(Tech::Solar),
            Series::WindCf => Some(Tech::Wind),
            Series::GridPrice => None,
        }
    }
}

/// Dense representative-hour sequences keyed by (fips, series).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Profiles {
    pub series: BTreeMap<(String, Series), Vec<f64>>,
}

impl Profiles {
    /// Writes the series into the matching registry records.
    pub fn apply(&self, registry: &mut CountyRegistry) -> Result<()> {
        for ((fips, series), values) in &self.series {
            let county = registry.get_mut(fips).ok_or_else(|| Error::Lookup {
                kind: "county",
                key: fips.clone(),
            })?;
            match series.tech() {
                Some(tech) => {
                    county
                        .capacity_factors
                        .insert(tech, CapacityFactor::Hourly(values.clone()));
                }
                None => county.grid_price = values.clone(),
            }
        }
        Ok(())
    }
}

struct Table {
    path: PathBuf,
    headers: HashMap<String, usize>,
    reader: csv::Reader<File>,
}

struct Cells<'a> {
    table: &'a Table,
    record: csv::StringRecord,
    line: usize,
}

impl Table {
    fn open(path: &Path, required: &[&str]) -> Result<Table> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
        let headers: HashMap<String, usize> = reader
            .headers()?
            .iter()
            .enumerate()
            .map(|(i, h)| (h.to_string(), i))
            .collect();
        for &h in required {
            if !headers.contains_key(h) {
                return Err(Error::Parse {
                    source_name: path.display().to_string(),
                    line: 1,
                    column: h.to_string(),
                    message: "required column missing from header".into(),
                });
            }
        }
        Ok(Table {
            path: path.to_path_buf(),
            headers,
            reader,
        })
    }

    fn rows(&mut self) -> Result<Vec<(csv::StringRecord, usize)>> {
        let mut out = Vec::new();
        for rec in self.reader.records() {
            let rec = rec?;
            let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
            out.push((rec, line));
        }
        Ok(out)
    }

    fn has(&self, column: &str) -> bool {
        self.headers.contains_key(column)
    }
}

impl Cells<'_> {
    fn error(&self, column: &str, message: impl Into<String>) -> Error {
        Error::Parse {
            source_name: self.table.path.display().to_string(),
            line: self.line,
            column: column.to_string(),
            message: message.into(),
        }
    }

    /// Raw cell text; `None` when the column is absent or the cell empty.
    fn raw(&self, column: &str) -> Option<&str> {
        let &i = self.table.headers.get(column)?;
        self.record.get(i).filter(|s| !s.is_empty())
    }

    fn text(&self, column: &str) -> Result<String> {
        self.raw(column)
            .map(str::to_string)
            .ok_or_else(|| self.error(column, "missing value"))
    }

    fn opt_number(&self, column: &str) -> Result<Option<f64>> {
        match self.raw(column) {
            None => Ok(None),
            Some(s) => s
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(Some)
                .ok_or_else(|| self.error(column, format!("`{s}` is not a finite number"))),
        }
    }

    fn ranged(&self, column: &str, lo: f64, hi: f64) -> Result<Option<f64>> {
        match self.opt_number(column)? {
            Some(v) if !(lo..=hi).contains(&v) => {
                Err(self.error(column, format!("{v} outside [{lo}, {hi}]")))
            }
            v => Ok(v),
        }
    }
}

const COUNTY_COLUMNS: [&str; 10] = [
    "fips",
    "name",
    "lat",
    "lon",
    "climate_zone",
    "water_price_per_l",
    "water_risk",
    "cap_solar_mw",
    "cap_wind_mw",
    "cap_geo_mw",
];

/// Reads counties.csv. Missing fiber distances are computed from `fiber`
/// when given; other missing optional values take `defaults`.
pub fn load_counties(
    path: &Path,
    defaults: &CountyDefaults,
    fiber: Option<&FiberNodeSet>,
) -> Result<CountyRegistry> {
    let mut table = Table::open(path, &COUNTY_COLUMNS)?;
    let rows = table.rows()?;
    let mut registry = CountyRegistry::default();
    let source = path.display().to_string();
    for (record, line) in rows {
        let cells = Cells {
            table: &table,
            record,
            line,
        };
        let fips = cells.text("fips")?;
        let mut capacity = BTreeMap::new();
        for (tech, column) in [
            (Tech::Solar, "cap_solar_mw"),
            (Tech::Wind, "cap_wind_mw"),
            (Tech::Geothermal, "cap_geo_mw"),
        ] {
            capacity.insert(tech, cells.ranged(column, 0.0, f64::INFINITY)?.unwrap_or(0.0));
        }
        let mut factors = BTreeMap::new();
        for (tech, column) in [(Tech::Solar, "solar_cf"), (Tech::Wind, "wind_cf")] {
            if let Some(f) = cells.ranged(column, 0.0, 1.0)? {
                factors.insert(tech, CapacityFactor::Annual(f));
            }
        }
        let water_price = match cells.ranged("water_price_per_l", 0.0, f64::INFINITY)? {
            Some(v) => v,
            None => {
                warn!("{source}:{line}: county {fips} has no water price, using default");
                registry.note(&source, format!("{fips}: default water_price_per_l"));
                defaults.water_price_per_l
            }
        };
        let water_risk = match cells.ranged("water_risk", 0.0, f64::INFINITY)? {
            Some(v) => v,
            None => {
                warn!("{source}:{line}: county {fips} has no water risk, using default");
                registry.note(&source, format!("{fips}: default water_risk"));
                defaults.water_risk
            }
        };
        let lat = cells.ranged("lat", -90.0, 90.0)?.ok_or_else(|| cells.error("lat", "missing value"))?;
        let lon = cells.ranged("lon", -180.0, 180.0)?.ok_or_else(|| cells.error("lon", "missing value"))?;
        let mut county = CountyRecord {
            fips: fips.clone(),
            name: cells.text("name")?,
            lat,
            lon,
            climate_zone: cells.text("climate_zone")?,
            resource_capacity_mw: capacity,
            capacity_factors: factors,
            grid_price: Vec::new(),
            water_price_per_l: water_price,
            water_risk,
            water_risk_penalty: defaults.water_risk_penalty,
            fiber_km: 0.0,
            transmission_km: cells
                .ranged("trans_km", 0.0, f64::INFINITY)?
                .unwrap_or(defaults.transmission_km),
            fiber_cost_per_km: defaults.fiber_cost_per_km,
            transmission_cost_per_mw_km: defaults.transmission_cost_per_mw_km,
            substation: defaults.substation,
        };
        county.fiber_km = match (cells.ranged("fiber_km", 0.0, f64::INFINITY)?, fiber) {
            (Some(v), _) => v,
            (None, Some(nodes)) => nearest_fiber_distance(&county, nodes)?,
            (None, None) => {
                return Err(cells.error("fiber_km", "missing value and no fiber nodes to compute it"))
            }
        };
        if !cells.table.has("trans_km") || cells.raw("trans_km").is_none() {
            registry.note(&source, format!("{fips}: default trans_km"));
        }
        registry.insert(county).map_err(|e| match e {
            Error::Duplicate { key, .. } => cells.error("fips", format!("duplicate fips `{key}`")),
            e => e,
        })?;
    }
    Ok(registry)
}

pub fn load_fiber_nodes(path: &Path) -> Result<FiberNodeSet> {
    let mut table = Table::open(path, &["node_id", "lat", "lon"])?;
    let rows = table.rows()?;
    let mut nodes = Vec::with_capacity(rows.len());
    for (record, line) in rows {
        let cells = Cells {
            table: &table,
            record,
            line,
        };
        nodes.push(FiberNode {
            id: cells.text("node_id")?,
            lat: cells.ranged("lat", -90.0, 90.0)?.ok_or_else(|| cells.error("lat", "missing value"))?,
            lon: cells.ranged("lon", -180.0, 180.0)?.ok_or_else(|| cells.error("lon", "missing value"))?,
        });
    }
    FiberNodeSet::new(nodes)
}

/// Turns `hour -> value` into a dense representative-hour series. 96 hours
/// pass through; 8760 are seasonally aggregated.
fn densify(values: &BTreeMap<usize, f64>, what: &str) -> Result<Vec<f64>> {
    let max = values.keys().next_back().copied().unwrap_or(0);
    let len = if max < REPRESENTATIVE_HOURS {
        REPRESENTATIVE_HOURS
    } else {
        HOURS_PER_YEAR
    };
    if let Some(h) = (0..len).find(|h| !values.contains_key(h)) {
        return Err(Error::invalid(what, format!("missing hour {h} of {len}")));
    }
    let dense: Vec<f64> = values.values().copied().collect();
    if len == HOURS_PER_YEAR {
        aggregate_seasonal(&dense)
    } else {
        Ok(dense)
    }
}

/// Reads long-format profiles.csv (`fips,series,hour,value`).
pub fn load_profiles(path: &Path, registry: &CountyRegistry) -> Result<Profiles> {
    let mut table = Table::open(path, &["fips", "series", "hour", "value"])?;
    let rows = table.rows()?;
    let mut raw: BTreeMap<(String, Series), BTreeMap<usize, f64>> = BTreeMap::new();
    for (record, line) in rows {
        let cells = Cells {
            table: &table,
            record,
            line,
        };
        let fips = cells.text("fips")?;
        if registry.get(&fips).is_none() {
            return Err(cells.error("fips", format!("unknown county `{fips}`")));
        }
        let id = cells.text("series")?;
        let series = Series::from_id(&id)
            .ok_or_else(|| cells.error("series", format!("unknown series `{id}`")))?;
        let hour_text = cells.text("hour")?;
        let hour = hour_text
            .parse::<usize>()
            .ok()
            .filter(|&h| h < HOURS_PER_YEAR)
            .ok_or_else(|| cells.error("hour", format!("`{hour_text}` outside 0..{HOURS_PER_YEAR}")))?;
        let value = if series == Series::GridPrice {
            cells.ranged("value", 0.0, f64::INFINITY)?
        } else {
            cells.ranged("value", 0.0, 1.0)?
        }
        .ok_or_else(|| cells.error("value", "missing value"))?;
        if raw
            .entry((fips.clone(), series))
            .or_default()
            .insert(hour, value)
            .is_some()
        {
            return Err(cells.error("hour", format!("hour {hour} repeated for {fips}/{id}")));
        }
    }
    let mut profiles = Profiles::default();
    for ((fips, series), values) in raw {
        let dense = densify(&values, &format!("{fips}/{}", series.id()))?;
        profiles.series.insert((fips, series), dense);
    }
    Ok(profiles)
}

/// Reads load.csv (`hour,it_mw`), 96 or 8760 rows.
pub fn load_it_profile(path: &Path) -> Result<Vec<f64>> {
    let mut table = Table::open(path, &["hour", "it_mw"])?;
    let rows = table.rows()?;
    let mut values = BTreeMap::new();
    for (record, line) in rows {
        let cells = Cells {
            table: &table,
            record,
            line,
        };
        let hour_text = cells.text("hour")?;
        let hour = hour_text
            .parse::<usize>()
            .ok()
            .filter(|&h| h < HOURS_PER_YEAR)
            .ok_or_else(|| cells.error("hour", format!("`{hour_text}` outside 0..{HOURS_PER_YEAR}")))?;
        let v = cells
            .ranged("it_mw", 0.0, f64::INFINITY)?
            .ok_or_else(|| cells.error("it_mw", "missing value"))?;
        if values.insert(hour, v).is_some() {
            return Err(cells.error("hour", format!("hour {hour} repeated")));
        }
    }
    let len = values.len();
    if len != REPRESENTATIVE_HOURS && len != HOURS_PER_YEAR {
        return Err(Error::invalid(
            "load.csv",
            format!("expected {REPRESENTATIVE_HOURS} or {HOURS_PER_YEAR} rows, got {len}"),
        ));
    }
    densify(&values, "load.csv")
}

/// Everything read from a data directory.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub registry: CountyRegistry,
    /// Hourly IT load from load.csv, if present.
    pub it_load: Option<Vec<f64>>,
}

/// Reads `counties.csv`, `profiles.csv` and the optional `fiber_nodes.csv`
/// and `load.csv` from `dir`.
pub fn load_dataset(dir: &Path, defaults: &CountyDefaults) -> Result<Dataset> {
    let fiber_path = dir.join("fiber_nodes.csv");
    let fiber = if fiber_path.exists() {
        Some(load_fiber_nodes(&fiber_path)?)
    } else {
        None
    };
    let mut registry = load_counties(&dir.join("counties.csv"), defaults, fiber.as_ref())?;
    let profiles = load_profiles(&dir.join("profiles.csv"), &registry)?;
    profiles.apply(&mut registry)?;
    let load_path = dir.join("load.csv");
    let it_load = if load_path.exists() {
        Some(load_it_profile(&load_path)?)
    } else {
        None
    };
    Ok(Dataset { registry, it_load })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Scenario;
    use proptest::prelude::*;
    use std::io::Write;

    fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
        let p = dir.join(name);
        File::create(&p).unwrap().write_all(body.as_bytes()).unwrap();
        p
    }

    const HEADER: &str = "fips,name,lat,lon,climate_zone,water_price_per_l,water_risk,fiber_km,trans_km,cap_solar_mw,cap_wind_mw,cap_geo_mw";

    fn defaults() -> CountyDefaults {
        Scenario::table2().county_defaults
    }

    #[test]
    fn three_counties() {
        let dir = tempfile::tempdir().unwrap();
        let body = format!(
            "{HEADER}\n08013,Boulder,40.015,-105.27,5,0.002,1.5,12,8,500,300,0\n08031,Denver,39.74,-104.99,5,,2,3,,100,50,0\n06037,LA,34.05,-118.24,3,0.003,4,2,5,800,100,20\n"
        );
        let p = write(dir.path(), "c.csv", &body);
        let reg = load_counties(&p, &defaults(), None).unwrap();
        assert_eq!(reg.len(), 3);
        let fips: Vec<&str> = reg.iter().map(|c| c.fips.as_str()).collect();
        assert_eq!(fips, ["06037", "08013", "08031"]);
        let denver = reg.get("08031").unwrap();
        assert_eq!(denver.water_price_per_l, defaults().water_price_per_l);
        assert_eq!(denver.transmission_km, defaults().transmission_km);
        assert!(!reg.provenance().is_empty());
    }

    #[test]
    fn duplicate_fips_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let body = format!(
            "{HEADER}\n08013,A,40,-105,5,0.002,1,1,1,1,1,0\n08013,B,40,-105,5,0.002,1,1,1,1,1,0\n"
        );
        let p = write(dir.path(), "c.csv", &body);
        let err = load_counties(&p, &defaults(), None).unwrap_err();
        assert!(err.to_string().contains("08013"), "{err}");
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn capacity_factor_out_of_range() {
        let dir = tempfile::tempdir().unwrap();
        let body = format!("{HEADER},solar_cf\n08013,A,40,-105,5,0.002,1,1,1,1,1,0,1.3\n");
        let p = write(dir.path(), "c.csv", &body);
        match load_counties(&p, &defaults(), None).unwrap_err() {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 2);
                assert_eq!(column, "solar_cf");
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn missing_header_column() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "c.csv", "fips,name\n1,a\n");
        match load_counties(&p, &defaults(), None).unwrap_err() {
            Error::Parse { line: 1, column, .. } => assert_eq!(column, "lat"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn fiber_distance_computed_from_nodes() {
        let dir = tempfile::tempdir().unwrap();
        let body = format!("{HEADER}\n08013,A,40.0150,-105.2705,5,0.002,1,,1,1,1,0\n");
        let p = write(dir.path(), "c.csv", &body);
        let nodes = FiberNodeSet::new(vec![FiberNode {
            id: "den".into(),
            lat: 39.7392,
            lon: -104.9903,
        }])
        .unwrap();
        let reg = load_counties(&p, &defaults(), Some(&nodes)).unwrap();
        assert!((reg.get("08013").unwrap().fiber_km - 38.5).abs() < 1.0);
        assert!(load_counties(&p, &defaults(), None).is_err());
    }

    fn at(lat: f64, lon: f64) -> CountyRecord {
        let mut c = crate::synthetic::county(0, 96);
        c.lat = lat;
        c.lon = lon;
        c
    }

    #[test]
    fn fiber_distance_examples() {
        let node = |id: &str, lat, lon| FiberNode {
            id: id.into(),
            lat,
            lon,
        };
        let set = FiberNodeSet::new(vec![node("a", 39.7392, -104.9903)]).unwrap();
        assert_eq!(nearest_fiber_distance(&at(39.7392, -104.9903), &set).unwrap(), 0.0);
        // Independent spherical-law-of-cosines evaluation.
        let (p1, p2) = (40.0150f64.to_radians(), 39.7392f64.to_radians());
        let dl = (-104.9903f64 + 105.2705).to_radians();
        let oracle = 6371.0 * (p1.sin() * p2.sin() + p1.cos() * p2.cos() * dl.cos()).acos();
        let d = nearest_fiber_distance(&at(40.0150, -105.2705), &set).unwrap();
        assert!((d - oracle).abs() < 1e-6);
        assert!((d - 38.5).abs() < 1.0);
        let two = FiberNodeSet::new(vec![node("far", 40.9, -105.0), node("here", 40.0, -105.0)]).unwrap();
        assert_eq!(nearest_fiber_distance(&at(40.0, -105.0), &two).unwrap(), 0.0);
        assert!(nearest_fiber_distance(&at(0.0, 0.0), &FiberNodeSet::default()).is_err());
        assert!(FiberNodeSet::new(vec![node("bad", 91.0, 0.0)]).is_err());
    }

    #[test]
    fn seasonal_examples() {
        assert_eq!(aggregate_seasonal(&vec![5.0; 8760]).unwrap(), vec![5.0; 96]);
        let hod: Vec<f64> = (0..8760).map(|t| (t % 24) as f64).collect();
        let out = aggregate_seasonal(&hod).unwrap();
        for s in 0..4 {
            for k in 0..24 {
                assert_eq!(out[s * 24 + k], k as f64);
            }
        }
        assert!(aggregate_seasonal(&[1.0; 96]).is_err());
    }

    #[test]
    fn profiles_dense_and_gaps() {
        let dir = tempfile::tempdir().unwrap();
        let reg = crate::synthetic::registry(1, 96);
        let fips = reg.iter().next().unwrap().fips.clone();
        let mut body = String::from("fips,series,hour,value\n");
        for h in 0..96 {
            body.push_str(&format!("{fips},solar_cf,{h},0.5\n"));
        }
        for h in 0..8760 {
            body.push_str(&format!("{fips},grid_price,{h},{}\n", h % 24));
        }
        let p = write(dir.path(), "p.csv", &body);
        let prof = load_profiles(&p, &reg).unwrap();
        assert_eq!(prof.series[&(fips.clone(), Series::SolarCf)], vec![0.5; 96]);
        assert_eq!(prof.series[&(fips.clone(), Series::GridPrice)].len(), 96);

        let mut body = String::from("fips,series,hour,value\n");
        for h in (0..96).filter(|&h| h != 40) {
            body.push_str(&format!("{fips},wind_cf,{h},0.5\n"));
        }
        let p = write(dir.path(), "p.csv", &body);
        let err = load_profiles(&p, &reg).unwrap_err();
        assert!(err.to_string().contains("missing hour 40"), "{err}");

        let p = write(dir.path(), "p.csv", "fips,series,hour,value\n99999,solar_cf,0,0.5\n");
        assert!(matches!(load_profiles(&p, &reg), Err(Error::Parse { line: 2, .. })));
        let p = write(dir.path(), "p.csv", &format!("fips,series,hour,value\n{fips},solar_cf,9000,0.5\n"));
        assert!(matches!(load_profiles(&p, &reg), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn missing_file_names_path() {
        let err = load_counties(Path::new("/nonexistent/c.csv"), &defaults(), None).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/c.csv"));
    }

    proptest! {
        #[test]
        fn seasonal_preserves_total(values in proptest::collection::vec(0.0f64..100.0, 8760)) {
            let out = aggregate_seasonal(&values).unwrap();
            let a: f64 = out.iter().sum::<f64>() * SEASONAL_WEIGHT;
            let b: f64 = values.iter().sum();
            // Groups hold 91 or 92 hours, so the weighted mean differs from
            // the exact total by at most the spread within a group.
            prop_assert!((a - b).abs() <= 0.01 * b.max(1.0));
            prop_assert!(out.iter().all(|&v| v >= 0.0));
        }

        #[test]
        fn haversine_metric(
            a in (-80.0f64..80.0, -170.0f64..170.0),
            b in (-80.0f64..80.0, -170.0f64..170.0),
            c in (-80.0f64..80.0, -170.0f64..170.0),
        ) {
            let ab = haversine_km(a.0, a.1, b.0, b.1);
            let ba = haversine_km(b.0, b.1, a.0, a.1);
            let bc = haversine_km(b.0, b.1, c.0, c.1);
            let ac = haversine_km(a.0, a.1, c.0, c.1);
            prop_assert!((ab - ba).abs() < 1e-6);
            prop_assert!(ac <= ab + bc + 1e-6);
        }
    }
}

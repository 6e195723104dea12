//! Writes heat-map CSV and GeoJSON for a synthetic registry.

use std::error::Error;
use std::path::PathBuf;

use siteopt::analysis::{heatmap_csv, heatmap_geojson};
use siteopt::scenario::Scenario;
use siteopt::siting::{evaluate_all, SolveOptions};
use siteopt::synthetic;

fn main() -> Result<(), Box<dyn Error>> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "heatmap_out".into()));
    std::fs::create_dir_all(&out)?;
    let scenario = Scenario::table2();
    let registry = synthetic::registry(6, scenario.horizon());
    let result = evaluate_all(&scenario, &registry, &SolveOptions::default())?;
    let csv_path = out.join("heatmap.csv");
    std::fs::write(&csv_path, heatmap_csv(&result, &registry)?)?;
    let geo_path = out.join("heatmap.geojson");
    std::fs::write(&geo_path, serde_json::to_string_pretty(&heatmap_geojson(&result, &registry))?)?;
    println!("wrote {} and {}", csv_path.display(), geo_path.display());
    Ok(())
}

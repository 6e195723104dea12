//! Collapses a full-year hourly series into four representative days.

use siteopt::ingest::aggregate_seasonal;

fn main() -> siteopt::Result<()> {
    let hourly: Vec<f64> = (0..8760)
        .map(|h| {
            let day = (h / 24) as f64;
            let hour = (h % 24) as f64;
            100.0 + 20.0 * (std::f64::consts::TAU * day / 365.0).cos() + 10.0 * (std::f64::consts::TAU * hour / 24.0).sin()
        })
        .collect();
    let days = aggregate_seasonal(&hourly)?;
    for (season, day) in ["winter", "spring", "summer", "autumn"].iter().zip(days.chunks(24)) {
        let mean = day.iter().sum::<f64>() / 24.0;
        let peak = day.iter().cloned().fold(f64::MIN, f64::max);
        println!("{season:<7} mean {mean:7.2}  peak {peak:7.2}");
    }
    let year: f64 = hourly.iter().sum();
    let weighted: f64 = days.iter().sum::<f64>() * 91.25;
    println!("year total {year:.1}, weighted representative total {weighted:.1}");
    Ok(())
}

//! Writes a synthetic dataset directory readable by `siteopt run --data`.
//!
//! cargo run --example make_dataset -- <dir> [counties]

use std::path::PathBuf;

fn main() -> siteopt::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "synthetic_data".into()));
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(3);
    siteopt::synthetic::write_dataset(&dir, n)?;
    std::fs::write(dir.join("scenario.json"), "{\n  \"defaults\": \"table2\"\n}\n")
        .map_err(|e| siteopt::Error::Io { path: dir.join("scenario.json"), source: e })?;
    println!("wrote {n} counties to {}", dir.display());
    Ok(())
}

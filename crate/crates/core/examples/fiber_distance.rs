//! Nearest fiber node for each synthetic county by great-circle distance.

use siteopt::ingest::{haversine_km, nearest_fiber_distance, FiberNode, FiberNodeSet};
use siteopt::synthetic;

fn main() -> siteopt::Result<()> {
    let nodes = FiberNodeSet::new(
        synthetic::fiber_nodes()
            .into_iter()
            .map(|(id, lat, lon)| FiberNode { id, lat, lon })
            .collect(),
    )?;
    println!("Denver to Boulder {:.2} km", haversine_km(39.7392, -104.9903, 40.015, -105.2705));
    for i in 0..6 {
        let c = synthetic::county(i, 96);
        let km = nearest_fiber_distance(&c, &nodes)?;
        println!("{} ({:.3}, {:.3})  nearest node {km:.1} km", c.fips, c.lat, c.lon);
    }
    Ok(())
}

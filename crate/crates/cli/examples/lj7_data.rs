//! Rewrites `data/lj7-default.toml` and `data/lj7-waypoints.csv`.
//!
//! `cargo run -p egma-cli --example lj7_data`

use std::fs;
use std::path::Path;

use egma_cli::presets::{lj7_minima, lj7_waypoints};

fn main() -> std::io::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let minima = toml::to_string(&lj7_minima()).expect("presets serialize");
    fs::write(data.join("lj7-default.toml"), minima)?;

    let mut csv = (0..14).map(|k| format!("x{k}")).collect::<Vec<_>>().join(",") + "\n";
    for x in lj7_waypoints(15) {
        csv += &(x.iter().map(f64::to_string).collect::<Vec<_>>().join(",") + "\n");
    }
    fs::write(data.join("lj7-waypoints.csv"), csv)
}

//! Runs every registered demo at one seed through the batch runner and lists
//! the artifacts. Output goes to `./navsim_out`.

use std::path::Path;

use navsim::sim::{list_demos, run_batch, ScenarioConfig};

fn main() {
    let cfgs: Vec<ScenarioConfig> = list_demos()
        .iter()
        .map(|d| ScenarioConfig::new(d, 1))
        .collect();
    for (cfg, r) in cfgs.iter().zip(run_batch(&cfgs, Path::new("navsim_out"))) {
        match r {
            Ok(paths) => println!("{:24} {} files", cfg.demo, paths.len()),
            Err(e) => println!("{:24} failed: {e}", cfg.demo),
        }
    }
}

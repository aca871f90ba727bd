//! Seeded demo scenarios and their artifacts: CSV traces, SVG plots, PGM maps.

pub mod config;
pub mod demos;
pub mod svg;
pub mod trace;

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

pub use config::ScenarioConfig;
pub use demos::{
    demo_params, list_demos, run_demo, slam_world, DemoError, DemoOutput, LandmarkTable, DEMOS,
};
pub use svg::{render_svg_plot, svg_string, Series, PALETTE};
pub use trace::{write_table_csv, write_trace_csv, TraceTable};

use crate::error::Result;

/// Paths written by one scenario, or why it failed.
pub type RunResult = std::result::Result<Vec<PathBuf>, DemoError>;

/// Writes `<stem>.csv`, `<stem>.svg` and, when present, `<stem>_map.pgm` and
/// `<stem>_landmarks.csv`. Returns the paths written.
pub fn write_artifacts(cfg: &ScenarioConfig, out: &DemoOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let stem = cfg.stem();
    let mut written = Vec::new();

    let csv = dir.join(format!("{stem}.csv"));
    write_trace_csv(&out.trace, &csv)?;
    written.push(csv);

    let svg = dir.join(format!("{stem}.svg"));
    render_svg_plot(
        &out.series,
        &format!("{} (seed {})", cfg.demo, cfg.seed),
        &svg,
    )?;
    written.push(svg);

    if let Some(g) = &out.grid {
        let pgm = dir.join(format!("{stem}_map.pgm"));
        g.write_pgm(&pgm)?;
        written.push(pgm);
    }
    if let Some(lm) = &out.landmarks {
        let p = dir.join(format!("{stem}_landmarks.csv"));
        let rows: Vec<Vec<f64>> = lm.rows.iter().map(|r| r.to_vec()).collect();
        write_table_csv(&LandmarkTable::COLUMNS, &rows, &p)?;
        written.push(p);
    }
    Ok(written)
}

/// Runs one scenario and writes its artifacts. On an algorithm failure the
/// trace recorded so far goes to `<stem>_partial.csv` before the error is
/// returned.
pub fn run_to_dir(cfg: &ScenarioConfig, dir: &Path) -> RunResult {
    match run_demo(cfg) {
        Ok(out) => Ok(write_artifacts(cfg, &out, dir)?),
        Err(e) => {
            if let Some(t) = e.partial.as_ref().filter(|t| !t.is_empty()) {
                std::fs::create_dir_all(dir).map_err(crate::NavError::from)?;
                write_trace_csv(t, &dir.join(format!("{}_partial.csv", cfg.stem())))?;
            }
            Err(e)
        }
    }
}

/// Runs every scenario on a pool of scoped threads. Results come back in
/// input order; one failure does not stop the others.
pub fn run_batch(cfgs: &[ScenarioConfig], dir: &Path) -> Vec<RunResult> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(cfgs.len().max(1));
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<RunResult>>> =
        Mutex::new((0..cfgs.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(cfg) = cfgs.get(i) else { break };
                let r = run_to_dir(cfg, dir);
                results
                    .lock()
                    .expect("no worker panics while holding the lock")[i] = Some(r);
            });
        }
    });
    results
        .into_inner()
        .expect("workers joined")
        .into_iter()
        .map(|r| r.expect("every index claimed"))
        .collect()
}

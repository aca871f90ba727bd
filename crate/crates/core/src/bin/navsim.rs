use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use navsim::sim::{demo_params, list_demos, run_batch, run_to_dir, RunResult, ScenarioConfig};
use navsim::NavError;

/// Seeded navigation demos that write CSV traces and SVG plots.
#[derive(Parser)]
#[command(name = "navsim", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List demos and their parameters.
    List,
    /// Run one demo.
    Run {
        #[arg(long)]
        demo: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        duration: Option<f64>,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        /// Demo parameter override, KEY=VALUE. Repeatable.
        #[arg(long = "param", value_parser = parse_kv)]
        params: Vec<(String, f64)>,
        /// JSON scenario file; the flags above override it.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run every scenario in a JSON file (an array or a single object).
    Batch {
        file: PathBuf,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
}

fn parse_kv(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected KEY=VALUE, got `{s}`"))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|e| format!("bad value for {k}: {e}"))?;
    Ok((k.trim().to_string(), v))
}

const USAGE: u8 = 2;
const ALGORITHM: u8 = 3;
const IO: u8 = 4;

fn code(e: &NavError) -> u8 {
    match e {
        NavError::Io(_) => IO,
        NavError::InvalidInput(_) | NavError::UnknownDemo(_) => USAGE,
        _ => ALGORITHM,
    }
}

fn read(path: &Path) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("navsim: cannot read {}: {e}", path.display());
        IO
    })
}

fn report(cfg: &ScenarioConfig, r: &RunResult) -> u8 {
    match r {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("navsim: {}: {e}", cfg.stem());
            code(&e.error)
        }
    }
}

fn run(cli: Cli) -> Result<(), u8> {
    match cli.cmd {
        Cmd::List => {
            for d in list_demos() {
                let params: Vec<String> = demo_params(d)
                    .unwrap_or_default()
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect();
                println!("{d}\t{}", params.join(" "));
            }
            Ok(())
        }
        Cmd::Run {
            demo,
            seed,
            dt,
            duration,
            out_dir,
            params,
            config,
        } => {
            let mut cfg = match (&config, &demo) {
                (Some(path), _) => ScenarioConfig::from_json(&read(path)?).map_err(|e| {
                    eprintln!("navsim: {e}");
                    USAGE
                })?,
                (None, Some(d)) => ScenarioConfig::new(d, 0),
                (None, None) => {
                    eprintln!("navsim: run needs --demo or --config");
                    return Err(USAGE);
                }
            };
            if let Some(d) = demo {
                cfg.demo = d;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(v) = dt {
                cfg.dt = v;
            }
            if let Some(v) = duration {
                cfg.duration = v;
            }
            cfg.params.extend(params);
            match report(&cfg, &run_to_dir(&cfg, &out_dir)) {
                0 => Ok(()),
                c => Err(c),
            }
        }
        Cmd::Batch { file, out_dir } => {
            let cfgs = ScenarioConfig::batch_from_json(&read(&file)?).map_err(|e| {
                eprintln!("navsim: {e}");
                USAGE
            })?;
            let results = run_batch(&cfgs, &out_dir);
            let worst = cfgs
                .iter()
                .zip(&results)
                .map(|(c, r)| report(c, r))
                .max()
                .unwrap_or(0);
            match worst {
                0 => Ok(()),
                c => Err(c),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(c) => ExitCode::from(c),
    }
}

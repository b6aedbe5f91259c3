//! `stabilab` command-line front end: parse a scenario config, dispatch to
//! the library, write CSV artifacts and print a one-screen summary.
//!
//! Exit codes: 0 success, 2 configuration error, 3 computation error.

mod config;
mod scenarios;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use config::{validate, ScenarioConfig};
use scenarios::run_scenario;

#[derive(Parser)]
#[command(
    name = "stabilab",
    about = "Scenario-driven laboratory for stabilization policy as feedback control",
    version
)]
struct Cli {
    /// Scenario configuration file (JSON)
    config: Option<PathBuf>,

    /// Override the seed from the configuration
    #[arg(long)]
    seed: Option<u64>,

    /// Override the output path from the configuration
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Override a parameter, e.g. --set a=0.8 (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// List configuration diagnostics without running the scenario
    #[arg(long)]
    validate: bool,

    /// Run every .json configuration in a directory (parallel, one output
    /// file each)
    #[arg(long, value_name = "DIR")]
    batch: Option<PathBuf>,
}

const EXIT_CONFIG: u8 = 2;
const EXIT_COMPUTE: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Some(dir) = &cli.batch {
        return run_batch(dir);
    }
    let Some(path) = &cli.config else {
        eprintln!("ConfigError: no configuration file given (or use --batch DIR)");
        return ExitCode::from(EXIT_CONFIG);
    };
    run_one(path, &cli)
}

fn load_with_overrides(path: &Path, cli: &Cli) -> Result<ScenarioConfig, config::ConfigError> {
    let mut config = ScenarioConfig::load(path)?;
    for setting in &cli.set {
        config.apply_override(setting)?;
    }
    if let Some(seed) = cli.seed {
        config.seed = Some(seed);
    }
    if let Some(out) = &cli.out {
        config.output_path = Some(out.display().to_string());
    }
    Ok(config)
}

fn write_artifact(out_path: &str, content: &str) -> std::io::Result<()> {
    if let Some(parent) = Path::new(out_path).parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(out_path, content)
}

fn run_one(path: &Path, cli: &Cli) -> ExitCode {
    let config = match load_with_overrides(path, cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };

    let diagnostics = validate(&config);
    if cli.validate {
        if diagnostics.is_empty() {
            println!("configuration ok: scenario `{}`", config.scenario);
        } else {
            for d in &diagnostics {
                println!("{d}");
            }
        }
        return if diagnostics.is_empty() {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(EXIT_CONFIG)
        };
    }
    if !diagnostics.is_empty() {
        for d in &diagnostics {
            eprintln!("ConfigError: {d}");
        }
        return ExitCode::from(EXIT_CONFIG);
    }

    match run_scenario(&config) {
        Ok(output) => {
            let out_path = config.output_path();
            if let Err(e) = write_artifact(&out_path, &output.artifact) {
                eprintln!("IOError: cannot write {out_path}: {e}");
                return ExitCode::from(EXIT_COMPUTE);
            }
            println!("scenario: {}", config.scenario);
            println!("{}", output.summary);
            println!("artifact: {out_path}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}: {e}", e.name());
            ExitCode::from(EXIT_COMPUTE)
        }
    }
}

fn run_batch(dir: &Path) -> ExitCode {
    let mut paths: Vec<PathBuf> = match fs::read_dir(dir) {
        Ok(entries) => entries
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
            .collect(),
        Err(e) => {
            eprintln!("ConfigError: cannot read {}: {e}", dir.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    paths.sort();
    if paths.is_empty() {
        eprintln!("ConfigError: no .json configurations in {}", dir.display());
        return ExitCode::from(EXIT_CONFIG);
    }

    // Independent configs with independent outputs: run them in parallel.
    let mut worst = 0u8;
    std::thread::scope(|scope| {
        let handles: Vec<_> = paths
            .iter()
            .map(|path| {
                scope.spawn(move || {
                    let config = match ScenarioConfig::load(path) {
                        Ok(c) => c,
                        Err(e) => return (path, Err((EXIT_CONFIG, e.to_string()))),
                    };
                    let diagnostics = validate(&config);
                    if !diagnostics.is_empty() {
                        return (path, Err((EXIT_CONFIG, diagnostics.join("; "))));
                    }
                    match run_scenario(&config) {
                        Ok(output) => {
                            let out_path = config.output_path();
                            match write_artifact(&out_path, &output.artifact) {
                                Ok(()) => (path, Ok((out_path, output.summary))),
                                Err(e) => {
                                    (path, Err((EXIT_COMPUTE, format!("IOError: {e}"))))
                                }
                            }
                        }
                        Err(e) => (path, Err((EXIT_COMPUTE, format!("{}: {e}", e.name())))),
                    }
                })
            })
            .collect();
        for handle in handles {
            let (path, result) = handle.join().expect("batch worker panicked");
            match result {
                Ok((out_path, summary)) => {
                    println!("[ok] {} -> {out_path}", path.display());
                    println!("     {}", summary.replace('\n', "\n     "));
                }
                Err((code, message)) => {
                    eprintln!("[failed] {}: {message}", path.display());
                    worst = worst.max(code);
                }
            }
        }
    });
    ExitCode::from(worst)
}

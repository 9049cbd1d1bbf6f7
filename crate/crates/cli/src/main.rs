use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use pblab::output::render;
use pblab::{parse_config, run_all_parallel, run_suite, OutputFormat, RunConfig, Suite};

/// Numerical verification suites for the Kratzer pseudo-boson model.
#[derive(Debug, Parser)]
#[command(name = "pblab", version)]
struct Cli {
    suite: Suite,
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write `<suite>.<format>` into this directory instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Run the suites of `all` on separate threads.
    #[arg(long)]
    parallel: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(path) => match parse_config(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("pblab: {e}");
                return ExitCode::from(2);
            }
        },
        None => RunConfig::default(),
    };
    let format = cli.format.unwrap_or(cfg.output_format);
    let out_dir = cli.out.clone().or_else(|| cfg.output_dir.clone());

    let reports = if cli.parallel && cli.suite == Suite::All {
        run_all_parallel(&cfg)
    } else {
        run_suite(&cfg, cli.suite)
    };
    let text = match render(&reports, format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("pblab: cannot format reports: {e}");
            return ExitCode::from(1);
        }
    };
    match out_dir {
        Some(dir) => {
            let path = dir.join(format!("{}.{}", cli.suite.name(), format.extension()));
            if let Err(e) = std::fs::create_dir_all(&dir).and_then(|_| std::fs::write(&path, text)) {
                eprintln!("pblab: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }

    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.check.as_str()).collect();
    eprintln!("{}: {} checks, {} failed", cli.suite.name(), reports.len(), failed.len());
    for r in reports.iter().filter(|r| !r.pass) {
        eprintln!("  {r}");
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

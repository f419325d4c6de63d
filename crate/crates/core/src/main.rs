use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use smale_spectra::cli::{parse_config, parse_window, run, Command, Model, Overrides};

#[derive(Parser, Debug)]
#[command(
    name = "smale-spectra",
    version,
    about = "Spectral invariants of shifts of finite type"
)]
struct Args {
    /// entropy, counts, trace-theta, trace-zeta, specdim, check or enumerate
    command: Command,
    #[arg(long)]
    config: PathBuf,
    /// Largest shell index (core length bound for `enumerate`)
    #[arg(long)]
    n_max: Option<i64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Shell window A:B for `specdim`
    #[arg(long, value_parser = parse_window)]
    window: Option<(i64, i64)>,
    /// Which configured localization to use
    #[arg(long, default_value_t = 0)]
    localization: usize,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.config.display());
            return ExitCode::from(2);
        }
    };
    let model = match parse_config(&text).and_then(|c| Model::build(&c)) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {}: {e}", args.config.display());
            return ExitCode::from(2);
        }
    };
    let overrides = Overrides {
        n_max: args.n_max,
        t: args.t,
        s: args.s,
        tol: args.tol,
        window: args.window,
        localization: args.localization,
    };
    let report = match run(args.command, &model, &overrides) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}: {e}", args.command);
            return ExitCode::FAILURE;
        }
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = report.write_atomic(path) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", report.to_csv()),
    }
    if report.success() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

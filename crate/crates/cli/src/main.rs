//! Command-line front end: scan execution from JSON configs, fitting of
//! trace CSVs, and a dump of the physical constants in use.
//!
//! Exit codes: 0 on success, 1 on validation/input errors, 2 on
//! numerical/fit errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use femtotip::analysis::{self, FitReport};
use femtotip::config::RunConfig;
use femtotip::constants::CONSTANTS;
use femtotip::scan;
use femtotip::trace::Trace;

#[derive(Parser)]
#[command(
    name = "femtotip",
    version,
    about = "Laser-triggered field-emission tip simulator and fitting toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scan described by a JSON config and write the trace CSV.
    Simulate {
        /// Path to the run configuration (JSON).
        config: PathBuf,
        /// Write the trace here instead of the config's `output` path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit scan data from a trace CSV (uses the counts column when present,
    /// yields otherwise).
    #[command(subcommand)]
    Fit(FitCommand),
    /// Print the physical constants in use.
    Constants,
}

#[derive(Subcommand)]
enum FitCommand {
    /// Non-negative decomposition of counts into sum of c_n I^n.
    PowerSum {
        /// Trace CSV with the power axis in watts.
        data: PathBuf,
        /// Highest order fitted (inclusive).
        #[arg(long, default_value_t = 5)]
        max_order: usize,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Single power-law fit on log-log axes.
    SinglePower {
        data: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fowler-Nordheim I-V regression for the tip radius.
    FnRadius {
        /// Trace CSV with the voltage axis in volts.
        data: PathBuf,
        /// Assumed workfunction (eV).
        #[arg(long, default_value_t = 4.5)]
        phi: f64,
        /// Assumed tip geometry factor.
        #[arg(long, default_value_t = 5.0)]
        k: f64,
        /// Fowler-Nordheim exponent constant (V/m/eV^1.5); standard value
        /// unless overridden.
        #[arg(long)]
        c0: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure with the exit code it maps to.
enum Failure {
    /// Malformed input, bad config, unreadable files: exit 1.
    Validation(String),
    /// Scan or fit blew up on valid input: exit 2.
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Numerical(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Numerical(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version land on stdout with success; real usage
            // errors are validation failures.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Simulate { config, out } => simulate(&config, out.as_deref()),
        Command::Fit(fit) => run_fit(fit),
        Command::Constants => {
            print_constants();
            Ok(())
        }
    }
}

fn simulate(config_path: &std::path::Path, out: Option<&std::path::Path>) -> Result<(), Failure> {
    let text = fs::read_to_string(config_path).map_err(|e| {
        Failure::Validation(format!("cannot read {}: {e}", config_path.display()))
    })?;
    let config = RunConfig::from_json_str(&text)
        .map_err(|e| Failure::Validation(e.to_string()))?;
    let run = config
        .build()
        .map_err(|e| Failure::Validation(e.to_string()))?;
    let trace = scan::run(&run.spec).map_err(|e| Failure::Numerical(e.to_string()))?;
    let target = out.unwrap_or(&run.output);
    trace.write_csv_file(target).map_err(|e| {
        Failure::Validation(format!("cannot write {}: {e}", target.display()))
    })?;
    println!(
        "{}: wrote {} ({} points)",
        run.scenario,
        target.display(),
        trace.len()
    );
    Ok(())
}

fn run_fit(fit: FitCommand) -> Result<(), Failure> {
    let (data, out) = match &fit {
        FitCommand::PowerSum { data, out, .. }
        | FitCommand::SinglePower { data, out }
        | FitCommand::FnRadius { data, out, .. } => (data.clone(), out.clone()),
    };
    let trace =
        Trace::read_csv_file(&data).map_err(|e| Failure::Validation(e.to_string()))?;
    let ordinate = trace.fit_ordinate();
    let report = match fit {
        FitCommand::PowerSum { max_order, .. } => {
            let fit = analysis::fit_power_sum(&trace.axis, &ordinate, max_order)
                .map_err(|e| Failure::Numerical(e.to_string()))?;
            FitReport::from_power_sum(&fit)
        }
        FitCommand::SinglePower { .. } => {
            let fit = analysis::fit_single_power(&trace.axis, &ordinate)
                .map_err(|e| Failure::Numerical(e.to_string()))?;
            FitReport::from_single_power(&fit)
        }
        FitCommand::FnRadius { phi, k, c0, .. } => {
            let c0 = c0.unwrap_or_else(analysis::default_fn_c0);
            let fit = analysis::fit_fn_radius(&trace.axis, &ordinate, phi, k, c0)
                .map_err(|e| Failure::Numerical(e.to_string()))?;
            FitReport::from_fn_radius(&fit)
        }
    };
    let json = report.to_json();
    match out {
        Some(path) => fs::write(&path, json).map_err(|e| {
            Failure::Validation(format!("cannot write {}: {e}", path.display()))
        })?,
        None => println!("{json}"),
    }
    Ok(())
}

fn print_constants() {
    let c = CONSTANTS;
    println!("speed_of_light        {:.9e} m/s", c.speed_of_light);
    println!("vacuum_permittivity   {:.9e} F/m", c.vacuum_permittivity);
    println!("elementary_charge     {:.9e} C", c.elementary_charge);
    println!("electron_mass         {:.9e} kg", c.electron_mass);
    println!("reduced_planck        {:.9e} J*s", c.reduced_planck);
    println!("electronvolt          {:.9e} J", c.electronvolt);
}

//! Command-line interface.
//!
//! Exit codes: 0 on success, 1 for usage/input/I-O errors, 2 when a
//! numerical invariant is violated during integration.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::couplings::{collective_damping, dipole_dipole_shift, AtomPairConfig};
use crate::dynamics::{DynamicsError, Engine};
use crate::hilbert::DensityMatrix;
use crate::scenario::{
    parse_config, resolve_couplings, run_scenario, write_csv, InitialState, ScenarioError,
    ScenarioSpec, TimeGrid,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Parser)]
#[command(
    name = "atompair",
    about = "Collective spontaneous emission and transient entanglement of two coupled atoms",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)] // one-shot dispatch, never stored
enum Command {
    /// Print the collective damping and dipole-dipole shift for a geometry
    Couplings {
        /// Interatomic separation in units of the resonant wavelength
        #[arg(long)]
        r12: f64,
        /// Angle between dipole direction and interatomic axis, degrees
        #[arg(long, default_value_t = 90.0)]
        angle: f64,
    },
    /// Write the CSV for one of the bundled presets (1..=6)
    Figure {
        /// Preset number
        number: u8,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
        /// Recompute the couplings from r12 = lambda/6 (perpendicular)
        /// instead of the pinned reference values 0.79/1.12
        #[arg(long)]
        no_caption_couplings: bool,
        /// Integration engine
        #[arg(long, value_parser = parse_engine)]
        engine: Option<Engine>,
    },
    /// Integrate a custom scenario and write its CSV
    Evolve(EvolveArgs),
}

#[derive(Args, Clone, Default)]
struct EvolveArgs {
    /// Initial state: e1g2, g1e2, e1e2, sym, antisym, or a density-matrix file
    #[arg(long)]
    init: Option<String>,
    /// Detuning (half the transition-frequency difference), units of Gamma
    #[arg(long)]
    delta: Option<f64>,
    /// Mean transition frequency, units of Gamma (0 = rotating frame)
    #[arg(long)]
    omega0: Option<f64>,
    /// Interatomic separation in units of the resonant wavelength
    #[arg(long)]
    r12: Option<f64>,
    /// Dipole angle in degrees (used with --r12; default 90)
    #[arg(long)]
    angle: Option<f64>,
    /// Pin gamma12 directly (units of Gamma), bypassing the geometry
    #[arg(long)]
    gamma12_override: Option<f64>,
    /// Pin omega12 directly (units of Gamma), bypassing the geometry
    #[arg(long)]
    omega12_override: Option<f64>,
    /// Final time, units of 1/Gamma
    #[arg(long)]
    t_end: Option<f64>,
    /// Integration step, units of 1/Gamma
    #[arg(long)]
    dt: Option<f64>,
    /// Write every n-th step to the CSV
    #[arg(long)]
    stride: Option<usize>,
    /// Integration engine: product or collective
    #[arg(long)]
    engine: Option<String>,
    /// Output CSV path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Key=value config file; values in the file override the flags
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_engine(s: &str) -> Result<Engine, String> {
    match s {
        "product" => Ok(Engine::Product),
        "collective" => Ok(Engine::Collective),
        other => Err(format!(
            "expected \"product\" or \"collective\", got {other:?}"
        )),
    }
}

/// Run the CLI on the given argument list and return the process exit code.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match run_command(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(err: &ScenarioError) -> i32 {
    match err {
        ScenarioError::Dynamics(DynamicsError::TraceDrift { .. })
        | ScenarioError::Dynamics(DynamicsError::PositivityLoss { .. }) => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

fn run_command(cmd: Command) -> Result<(), ScenarioError> {
    match cmd {
        Command::Couplings { r12, angle } => {
            let cfg = AtomPairConfig::new(1.0, r12, angle.to_radians(), 0.0, 0.0)?;
            let g12 = collective_damping(&cfg)?;
            let o12 = dipole_dipole_shift(&cfg)?;
            println!("r12/lambda = {r12}, angle = {angle} deg");
            println!("gamma12 = {g12:.12} Gamma");
            println!("omega12 = {o12:.12} Gamma  (as implemented)");
            println!(
                "omega12 = {:.12} Gamma  (doubled convention, used by the figure presets)",
                2.0 * o12
            );
            Ok(())
        }
        Command::Figure {
            number,
            out,
            no_caption_couplings,
            engine,
        } => {
            let mut spec = ScenarioSpec::figure_preset(number, !no_caption_couplings)?;
            if let Some(e) = engine {
                spec.engine = e;
            }
            let traj = run_scenario(&spec)?;
            write_csv(&traj, spec.grid.stride, &out)?;
            println!(
                "wrote {} ({} rows, t_end = {}, dt = {}, stride = {})",
                out.display(),
                traj.times.len().div_ceil(spec.grid.stride),
                spec.grid.t_end,
                spec.grid.dt,
                spec.grid.stride
            );
            Ok(())
        }
        Command::Evolve(args) => {
            let (spec, out) = build_evolve_spec(args)?;
            let traj = run_scenario(&spec)?;
            write_csv(&traj, spec.grid.stride, &out)?;
            println!("wrote {}", out.display());
            Ok(())
        }
    }
}

fn build_evolve_spec(mut args: EvolveArgs) -> Result<(ScenarioSpec, PathBuf), ScenarioError> {
    if let Some(path) = args.config.take() {
        let text = fs::read_to_string(&path).map_err(|source| ScenarioError::Io {
            path: path.clone(),
            source,
        })?;
        apply_config(&mut args, &text)?;
    }

    let init_arg = args
        .init
        .ok_or_else(|| ScenarioError::Config("missing initial state (--init or init=)".into()))?;
    let initial_state = match InitialState::parse_name(&init_arg) {
        Some(s) => s,
        None => {
            let text = fs::read_to_string(&init_arg).map_err(|source| ScenarioError::Io {
                path: PathBuf::from(&init_arg),
                source,
            })?;
            InitialState::Custom(DensityMatrix::from_text(&text)?)
        }
    };
    let engine = match args.engine.as_deref() {
        None => Engine::Collective,
        Some(s) => parse_engine(s).map_err(ScenarioError::Config)?,
    };
    let (gamma12, omega12, mode) = resolve_couplings(
        args.r12,
        args.angle,
        args.gamma12_override,
        args.omega12_override,
    )?;
    let defaults = TimeGrid::default();
    let grid = TimeGrid {
        t_end: args.t_end.unwrap_or(defaults.t_end),
        dt: args.dt.unwrap_or(defaults.dt),
        stride: args.stride.unwrap_or(defaults.stride).max(1),
    };
    let params = crate::dynamics::SystemParams::new(
        1.0,
        gamma12,
        omega12,
        args.delta.unwrap_or(0.0),
        args.omega0.unwrap_or(0.0),
    )?;
    let out = args
        .out
        .ok_or_else(|| ScenarioError::Config("missing output path (--out or out=)".into()))?;
    Ok((
        ScenarioSpec {
            initial_state,
            params,
            couplings_mode: mode,
            grid,
            engine,
        },
        out,
    ))
}

/// Overlay config-file values onto the flag values (the file wins).
fn apply_config(args: &mut EvolveArgs, text: &str) -> Result<(), ScenarioError> {
    for (key, value) in parse_config(text)? {
        let num = || -> Result<f64, ScenarioError> {
            value.parse().map_err(|_| {
                ScenarioError::Config(format!("{key} must be a number, got {value:?}"))
            })
        };
        match key.as_str() {
            "init" => args.init = Some(value),
            "delta" => args.delta = Some(num()?),
            "omega0" => args.omega0 = Some(num()?),
            "r12" => args.r12 = Some(num()?),
            "angle" => args.angle = Some(num()?),
            "gamma12-override" => args.gamma12_override = Some(num()?),
            "omega12-override" => args.omega12_override = Some(num()?),
            "t-end" => args.t_end = Some(num()?),
            "dt" => args.dt = Some(num()?),
            "stride" => {
                args.stride = Some(value.parse().map_err(|_| {
                    ScenarioError::Config(format!(
                        "stride must be a positive integer, got {value:?}"
                    ))
                })?)
            }
            "engine" => args.engine = Some(value),
            "out" => args.out = Some(PathBuf::from(value)),
            other => return Err(ScenarioError::Config(format!("unknown key {other:?}"))),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> i32 {
        cli_main(std::iter::once("atompair").chain(args.iter().copied()))
    }

    #[test]
    fn unknown_flags_are_usage_errors() {
        assert_eq!(run(&["couplings", "--bogus", "1"]), EXIT_USAGE);
        assert_eq!(run(&["nonsense"]), EXIT_USAGE);
        assert_eq!(run(&[]), EXIT_USAGE);
    }

    #[test]
    fn help_is_success() {
        assert_eq!(run(&["--help"]), EXIT_OK);
    }

    #[test]
    fn couplings_smoke() {
        assert_eq!(
            run(&["couplings", "--r12", "0.16667", "--angle", "90"]),
            EXIT_OK
        );
        assert_eq!(run(&["couplings", "--r12", "-1"]), EXIT_USAGE);
    }

    #[test]
    fn figure_range_check() {
        assert_eq!(run(&["figure", "9", "--out", "/dev/null"]), EXIT_USAGE);
    }

    #[test]
    fn evolve_requires_init_and_out() {
        assert_eq!(run(&["evolve", "--out", "/dev/null"]), EXIT_USAGE);
        assert_eq!(
            run(&["evolve", "--init", "e1g2", "--t-end", "0.1"]),
            EXIT_USAGE
        );
    }

    #[test]
    fn unstable_step_is_a_numerical_error() {
        assert_eq!(
            run(&[
                "evolve",
                "--init",
                "e1e2",
                "--gamma12-override",
                "0.79",
                "--omega12-override",
                "1.12",
                "--t-end",
                "20",
                "--dt",
                "2.0",
                "--out",
                "/dev/null",
            ]),
            EXIT_NUMERICAL
        );
    }
}

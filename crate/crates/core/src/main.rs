use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hyiqp::checks::{self, Suite};
use hyiqp::commands::{self, ExpectRequest, FigureRequest, OracleRequest, System};
use hyiqp::hft::ObservableKind;
use hyiqp::oracle::{Method, OracleConfig};
use hyiqp::output::{self, Format, Metadata, Table};
use hyiqp::spectrum::JacobiConvention;
use hyiqp::{Error, PhysicalConstants, Registry, UnitMode};

#[derive(Parser)]
#[command(
    name = "hyiqp",
    version,
    about = "Bound states of the Hulthen-Yukawa-inverse-quadratic potential"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, default_value = "csv")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SystemArgs {
    /// Registry molecule (H2, LiH, HCl, CO or one from HYIQP_REGISTRY).
    #[arg(long)]
    molecule: Option<String>,
    /// Explicit parameters v0,A,B,C,alpha.
    #[arg(long, allow_hyphen_values = true)]
    params: Option<String>,
    /// Reduced mass; required with --params, overrides the molecule's otherwise.
    #[arg(long)]
    mu: Option<f64>,
    /// Hulthen strength for registry molecules.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    v0: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form energy of one state with its quantization audit.
    Energy {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long, default_value = "physical")]
        mode: UnitMode,
    },
    /// Expectation values on both derivation paths, with optional oracle and fixture columns.
    Expect {
        #[command(flatten)]
        system: SystemArgs,
        /// r-2, r-1, T or p2.
        #[arg(long)]
        observable: ObservableKind,
        #[arg(long, default_value_t = 4)]
        n_max: u32,
        #[arg(long, default_value_t = 4)]
        l_max: u32,
        #[arg(long, default_value = "physical")]
        mode: UnitMode,
        /// Value of e^{alpha r} in the printed r-1 formula (1 if omitted).
        #[arg(long)]
        exp_factor_r: Option<f64>,
        /// Add the grid-oracle column.
        #[arg(long)]
        oracle: bool,
    },
    /// Regenerate a published table (2, 2b, 5..17) with deviation columns.
    Table {
        id: String,
        #[arg(long, default_value = "paper")]
        mode: UnitMode,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        v0: f64,
        #[arg(long)]
        oracle: bool,
    },
    /// Emit plot data for figure 1..9.
    Figure {
        id: u32,
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, default_value = "physical")]
        mode: UnitMode,
        /// Jacobi exponents: printed, weight-function or derived.
        #[arg(long, default_value = "printed")]
        convention: JacobiConvention,
        #[arg(long)]
        points: Option<usize>,
        /// Upper radius for wave-function figures.
        #[arg(long)]
        r_end: Option<f64>,
    },
    /// Run a verification suite: hft, reduction, nu, oracle or all.
    Check { suite: Suite },
    /// List the registry or show one molecule.
    Registry {
        #[command(subcommand)]
        action: RegistryAction,
    },
    /// Solve the radial equation on a grid.
    Oracle {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long, default_value_t = 3)]
        states: usize,
        #[arg(long, default_value = "physical")]
        mode: UnitMode,
        #[arg(long)]
        r_min: Option<f64>,
        /// Defaults to a box scaled with 1/alpha.
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, default_value = "matrix")]
        method: Method,
        /// Emit the grid and eigenvectors u_k.
        #[arg(long)]
        dump: bool,
        #[arg(long, default_value_t = 1)]
        stride: usize,
    },
}

#[derive(Subcommand)]
enum RegistryAction {
    List,
    Show { name: String },
}

fn command_echo() -> String {
    let args: Vec<String> = std::env::args().skip(1).collect();
    format!("hyiqp {}", args.join(" "))
}

fn system(reg: &Registry, a: &SystemArgs) -> hyiqp::Result<System> {
    System::resolve(reg, a.molecule.as_deref(), a.params.as_deref(), a.mu, a.v0)
}

enum Outcome {
    Table(Table),
    Check(checks::SuiteReport),
}

fn run(cli: &Cli) -> hyiqp::Result<Outcome> {
    let reg = Registry::from_env()?;
    let meta = |mode: UnitMode| Metadata::new(mode, command_echo());
    let consts = PhysicalConstants::for_mode;
    let table = match &cli.command {
        Command::Energy { system: s, n, l, mode } => {
            commands::energy_table(&system(&reg, s)?, *n, *l, &consts(*mode), meta(*mode))?
        }
        Command::Expect {
            system: s,
            observable,
            n_max,
            l_max,
            mode,
            exp_factor_r,
            oracle,
        } => {
            let req = ExpectRequest {
                kind: *observable,
                n_max: *n_max,
                l_max: *l_max,
                exp_factor_r: *exp_factor_r,
                oracle: *oracle,
            };
            commands::expect_table(&system(&reg, s)?, &req, &consts(*mode), meta(*mode))?
        }
        Command::Table { id, mode, v0, oracle } => {
            commands::table_table(id, &reg, &consts(*mode), *v0, *oracle, meta(*mode))?
        }
        Command::Figure {
            id,
            system: s,
            mode,
            convention,
            points,
            r_end,
        } => {
            let sys = match (&s.molecule, &s.params) {
                (None, None) => System::molecule(&reg.get("H2")?, s.v0),
                _ => system(&reg, s)?,
            };
            let req = FigureRequest {
                id: *id,
                convention: *convention,
                points: *points,
                r_end: *r_end,
            };
            commands::figure_table(&sys, &req, &consts(*mode), meta(*mode))?
        }
        Command::Check { suite } => return Ok(Outcome::Check(checks::run(*suite, &reg))),
        Command::Registry { action } => {
            let name = match action {
                RegistryAction::List => None,
                RegistryAction::Show { name } => Some(name.as_str()),
            };
            commands::registry_table(&reg, name, meta(UnitMode::Physical))?
        }
        Command::Oracle {
            system: s,
            l,
            states,
            mode,
            r_min,
            r_max,
            points,
            method,
            dump,
            stride,
        } => {
            let sys = system(&reg, s)?;
            let base = OracleConfig::scaled(sys.params.alpha);
            let config = OracleConfig {
                r_min: r_min.unwrap_or(base.r_min),
                r_max: r_max.unwrap_or(base.r_max),
                n_points: points.unwrap_or(base.n_points),
                method: *method,
                ..base
            };
            let req = OracleRequest {
                l: *l,
                states: *states,
                config,
                dump: *dump,
                stride: *stride,
            };
            commands::oracle_table(&sys, &req, &consts(*mode), meta(*mode))?
        }
    };
    Ok(Outcome::Table(table))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Table(t)) => {
            let written = t
                .render(cli.format)
                .and_then(|s| output::emit(&s, cli.output.as_deref()));
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(&e),
            }
        }
        Ok(Outcome::Check(report)) => {
            let mut text = String::new();
            for a in &report.assertions {
                text.push_str(&format!("{a}\n"));
            }
            for i in &report.info {
                text.push_str(&format!("INFO {i}\n"));
            }
            let passed = report.assertions.iter().filter(|a| a.passed).count();
            text.push_str(&format!("{passed}/{} assertions passed\n", report.assertions.len()));
            if let Err(e) = output::emit(&text, cli.output.as_deref()) {
                return fail(&e);
            }
            match report.first_failure() {
                None => ExitCode::SUCCESS,
                Some(a) => {
                    eprintln!("check failed: {}", a.name);
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use zonal_cli::{
    cmd_classify, cmd_critical, cmd_curve, cmd_planets, cmd_selfcheck, cmd_spectrum, parse_grid,
    resolve_config, ConfigOverrides,
};

/// Linear stability of the 3-jet zonal flow on a rotating sphere.
#[derive(Parser)]
#[command(name = "zonal-stability", version, about)]
struct Cli {
    /// Optional key=value config file (keys: basis_size, quadrature_nodes,
    /// convergence_tol, max_refinements).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Initial Galerkin basis size (doubles on refinement).
    #[arg(long, global = true)]
    basis_size: Option<usize>,
    /// Fixed quadrature node count (default: 4N+16).
    #[arg(long, global = true)]
    quadrature_nodes: Option<usize>,
    /// Eigenvalue convergence tolerance.
    #[arg(long, global = true)]
    convergence_tol: Option<f64>,
    /// Maximum number of basis-size doublings.
    #[arg(long, global = true)]
    max_refinements: Option<u32>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the 3-jet at a rotation rate.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        omega: f64,
        #[arg(long)]
        json: bool,
    },
    /// Export a principal-eigenvalue curve over a mu grid as CSV.
    Curve {
        #[arg(long)]
        k: u32,
        #[arg(long, allow_hyphen_values = true)]
        omega: f64,
        /// Grid specification a:b:step.
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the critical rotation rates.
    Critical {
        #[arg(long, default_value = "all")]
        mode: String,
        #[arg(long)]
        json: bool,
    },
    /// Print the spectral picture for one Fourier mode as JSON.
    Spectrum {
        #[arg(long, allow_hyphen_values = true)]
        k: i32,
        #[arg(long, allow_hyphen_values = true)]
        omega: f64,
        /// Output is always JSON; accepted for symmetry with other commands.
        #[arg(long)]
        json: bool,
    },
    /// Print the planetary table with stability verdicts.
    Planets {
        #[arg(long)]
        json: bool,
    },
    /// Run the analytic-vs-numeric cross-validations.
    Selfcheck,
}

fn run() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    let overrides = ConfigOverrides {
        basis_size: cli.basis_size,
        quadrature_nodes: cli.quadrature_nodes,
        convergence_tol: cli.convergence_tol,
        max_refinements: cli.max_refinements,
    };
    let config = resolve_config(cli.config.as_deref().and_then(|p| p.to_str()), &overrides)?;
    match cli.cmd {
        Cmd::Classify { omega, json } => {
            print!("{}", cmd_classify(omega, json, &config)?);
            if json {
                println!();
            }
        }
        Cmd::Curve { k, omega, mu, out } => {
            let grid = parse_grid(&mu)?;
            let csv = cmd_curve(k, omega, &grid, &config)?;
            std::fs::write(&out, csv)?;
        }
        Cmd::Critical { mode, json } => {
            print!("{}", cmd_critical(&mode, json, &config)?);
            if json {
                println!();
            }
        }
        Cmd::Spectrum { k, omega, json: _ } => {
            println!("{}", cmd_spectrum(k, omega, &config)?);
        }
        Cmd::Planets { json } => {
            print!("{}", cmd_planets(json, &config)?);
            if json {
                println!();
            }
        }
        Cmd::Selfcheck => {
            let (report, ok) = cmd_selfcheck()?;
            print!("{report}");
            if !ok {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

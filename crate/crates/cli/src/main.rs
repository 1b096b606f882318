use std::f64::consts::TAU;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use slab_area::QuadratureSpec;
use slab_area_cli::{cmd_beta, cmd_mesh, cmd_sweep, cmd_verify, cmd_waist, MeshArgs, VerifyArgs, EXIT_USAGE};

/// Area bounds for minimal surfaces in a slab.
#[derive(Parser)]
#[command(name = "slabarea", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the root of tanh z = 1/z.
    Beta {
        #[arg(long, default_value_t = 15)]
        digits: usize,
    },
    /// Area and flux of a catenoidal waist.
    #[command(allow_negative_numbers = true)]
    Waist {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0)]
        d0: f64,
        #[arg(long)]
        a: f64,
    },
    /// Check the area chain for every surface in a corpus.
    Verify {
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = QuadratureSpec::default().v_nodes)]
        v_nodes: usize,
        #[arg(long, default_value_t = QuadratureSpec::default().u_panels)]
        u_panels: usize,
        #[arg(long, default_value_t = QuadratureSpec::default().u_order)]
        u_order: usize,
        #[arg(long, default_value_t = QuadratureSpec::default().rel_tol)]
        tol: f64,
        #[arg(long, default_value_t = QuadratureSpec::default().max_refinements)]
        max_refinements: u32,
        /// Analyse surfaces with mixed orientations as exploratory.
        #[arg(long)]
        mixed_ok: bool,
    },
    /// Tabulate the symmetric waist area over a lambda grid.
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        lambda_lo: f64,
        #[arg(long)]
        lambda_hi: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample the immersion of a single Gauss map and write an OBJ mesh.
    Mesh {
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = TAU)]
        f: f64,
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 64)]
        u_count: usize,
        #[arg(long, default_value_t = 256)]
        v_count: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    let status = match cli.command {
        Command::Beta { digits } => cmd_beta(digits, &mut out, &mut err),
        Command::Waist { lambda, d0, a } => cmd_waist(lambda, d0, a, &mut out, &mut err),
        Command::Verify { corpus, out: csv, v_nodes, u_panels, u_order, tol, max_refinements, mixed_ok } => {
            let spec = QuadratureSpec { v_nodes, u_panels, u_order, rel_tol: tol, max_refinements };
            cmd_verify(&corpus, &csv, &VerifyArgs { spec, mixed_ok }, &mut out, &mut err)
        }
        Command::Sweep { a, lambda_lo, lambda_hi, steps, out: csv } => {
            cmd_sweep(a, lambda_lo, lambda_hi, steps, &csv, &mut out, &mut err)
        }
        Command::Mesh { g, f, a, u_count, v_count, out: path } => {
            cmd_mesh(&MeshArgs { g, f, a, u_count, v_count }, &path, &mut out, &mut err)
        }
    };
    match status {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

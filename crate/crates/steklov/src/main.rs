use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use steklov::corpus::run_corpus;
use steklov::report::{sig12, write_csv, CsvRow};
use steklov::svg::render;
use steklov::verify::parallel_stiffness;
use steklov::{verify, HarnessError, SpecFile, VerifyOptions};
use steklov_core::fem2d::{build_mesh, steklov_spectrum_with_stiffness};
use steklov_core::radial::{sigma1_ball, sigma1_via_gh};
use steklov_core::spaceform::bound_constant;

#[derive(Parser)]
#[command(name = "steklov", version, about = "First Steklov eigenvalue bounds by space-form comparison")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// sigma_1 of a geodesic ball in the space form M_kappa^n.
    Ball {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        kappa: f64,
        #[arg(long)]
        radius: f64,
    },
    /// The constant (sn_K(d)/sn_kappa(d))^(2n-2).
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        kappa: f64,
        #[arg(long = "K", allow_negative_numbers = true)]
        big_k: f64,
        #[arg(long)]
        d: f64,
    },
    /// Verify the eigenvalue bound on one domain and write a JSON report.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Number of mesh halvings after the base level.
        #[arg(long, default_value_t = 2)]
        refinements: usize,
        /// Assemble on a single thread (the parallel path gives identical bytes).
        #[arg(long)]
        deterministic: bool,
    },
    /// Verify every *.json spec of a directory and write one CSV row each.
    Corpus {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        csv: PathBuf,
        /// Run specs concurrently.
        #[arg(long)]
        parallel: bool,
        #[arg(long, default_value_t = 2)]
        refinements: usize,
    },
    /// Draw the mesh of a spec, colored by its first Steklov eigenfunction.
    Mesh {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        svg: PathBuf,
        /// Number of level sets drawn.
        #[arg(long, default_value_t = 8)]
        levels: usize,
        /// Only the triangulation, no eigenfunction.
        #[arg(long)]
        plain: bool,
    },
}

fn fail(e: HarnessError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn invalid(e: steklov_core::Error) -> ExitCode {
    fail(HarnessError::Spec(e.to_string()))
}

fn write(path: &PathBuf, text: &str) -> Result<(), HarnessError> {
    std::fs::write(path, text).map_err(|source| HarnessError::Io { path: path.clone(), source })
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Ball { n, kappa, radius } => {
            let (a, b) = match (sigma1_ball(n, kappa, radius), sigma1_via_gh(n, kappa, radius)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => return invalid(e),
            };
            println!("sigma1 = {a:.12} (via G/H: {b:.12}, difference {:.3e})", a - b);
            let out = json!({
                "n": n, "kappa": kappa, "radius": radius,
                "sigma1": sig12(a), "sigma1_via_gh": sig12(b), "difference": sig12(a - b),
            });
            println!("{out}");
            ExitCode::SUCCESS
        }
        Command::Bound { n, kappa, big_k, d } => {
            let c = match bound_constant(n, kappa, big_k, d) {
                Ok(c) => c,
                Err(e) => return invalid(e),
            };
            println!("C = {c:.12}");
            println!("{}", json!({ "n": n, "kappa": kappa, "K": big_k, "d": d, "C": sig12(c) }));
            ExitCode::SUCCESS
        }
        Command::Verify { spec, out, refinements, deterministic } => {
            let file = match SpecFile::load(&spec) {
                Ok(f) => f,
                Err(e) => return fail(e),
            };
            let options = VerifyOptions { refinements, parallel: !deterministic };
            let report = match verify(&file, &file.display_name(Some(&spec)), options) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            if let Err(e) = report.write_json(&out) {
                return fail(e);
            }
            println!(
                "{}: sigma1 = {:.8} +- {:.1e}, bound = {:.8} (C = {:.6}), ratio = {:.6}, chain {} <= {} <= {} : {}",
                report.name,
                report.sigma1_fem,
                report.sigma1_error,
                report.bound,
                report.constant_c,
                report.ratio,
                report.chain.q41,
                report.chain.q42,
                report.chain.q43,
                if report.pass { "pass" } else { "FAIL" },
            );
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Corpus { dir, csv, parallel, refinements } => {
            let options = VerifyOptions { refinements, parallel: false };
            let entries = match run_corpus(&dir, options, parallel) {
                Ok(e) => e,
                Err(e) => return fail(e),
            };
            let rows: Vec<CsvRow> = entries.iter().map(|e| e.csv_row()).collect();
            if let Err(e) = write_csv(&rows, &csv) {
                return fail(e);
            }
            let failed: Vec<&str> = entries.iter().filter(|e| !e.passed()).map(|e| e.name.as_str()).collect();
            println!("{} specs, {} failed", entries.len(), failed.len());
            for name in &failed {
                println!("  failed: {name}");
            }
            if failed.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Mesh { spec, svg, levels, plain } => {
            let result = (|| -> Result<(), HarnessError> {
                let domain = SpecFile::load(&spec)?.domain()?;
                let mesh = build_mesh(&domain)?;
                let values = if plain {
                    None
                } else {
                    let k = parallel_stiffness(&mesh)?;
                    Some(steklov_spectrum_with_stiffness(&mesh, &k, 1)?.extensions.swap_remove(1))
                };
                write(&svg, &render(&mesh, values.as_deref(), levels))?;
                println!("{} vertices, {} triangles", mesh.num_vertices(), mesh.num_triangles());
                Ok(())
            })();
            match result {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(e),
            }
        }
    }
}

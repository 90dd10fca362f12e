use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hwforms::bench::{run_case, CaseName, RunOptions, VtkOutput};

#[derive(Parser)]
#[command(name = "hwforms", version, about = "Mixed Hu-Washizu finite elements for 3D hyperelasticity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a benchmark on one or more refinement levels.
    Run {
        /// cook, cube, torsion or splitring
        #[arg(long)]
        case: CaseName,
        /// Comma-separated refinement levels (case default if omitted).
        #[arg(long, value_delimiter = ',')]
        refine: Vec<usize>,
        /// Number of load increments (case default if omitted).
        #[arg(long)]
        steps: Option<usize>,
        /// Relative Newton tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Replace a material parameter, e.g. `mu=1.5`. Repeatable.
        #[arg(long = "law-override", value_parser = parse_override)]
        law_override: Vec<(String, f64)>,
        /// Cook only: spacing exponent along the beam, > 1 refines towards the root.
        #[arg(long)]
        grading: Option<f64>,
        /// Write VTK files for the final step only.
        #[arg(long)]
        final_vtk_only: bool,
        #[arg(long, short)]
        quiet: bool,
    },
    /// Run the finite-difference oracle suites.
    Verify,
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (key, value) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let value = value
        .trim()
        .parse::<f64>()
        .map_err(|e| format!("bad value in `{s}`: {e}"))?;
    Ok((key.trim().to_string(), value))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            case,
            refine,
            steps,
            tol,
            out,
            law_override,
            grading,
            final_vtk_only,
            quiet,
        } => {
            let mut options = RunOptions::for_case(case);
            if !refine.is_empty() {
                options.refinements = refine;
            }
            if let Some(steps) = steps {
                options.solver.steps = steps;
            }
            if let Some(tol) = tol {
                options.solver.rel_tol = tol;
            }
            if let Some(g) = grading {
                options.case.cook_grading = g;
            }
            if final_vtk_only {
                options.vtk = VtkOutput::FinalStep;
            }
            options.law_overrides = law_override;
            options.verbose = !quiet;
            match run_case(case, &options, Some(&out)) {
                Ok(report) => {
                    print!("{}", report.to_csv());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Command::Verify => {
            let results = hwforms::verify::run_all();
            let mut failed = 0;
            for r in &results {
                println!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
                failed += usize::from(!r.passed);
            }
            println!("{} checks, {} failed", results.len(), failed);
            if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

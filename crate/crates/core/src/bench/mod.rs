//! Benchmark problems: structured meshes, boundary sets, drivers and output.

mod cases;
mod mesher;
mod norms;
mod output;
mod run;

pub use cases::{build_case, BenchmarkCase, CaseName, CaseOptions};
pub use mesher::{box_mesh, structured_mesh};
pub use norms::convergence_norms;
pub use output::vtk_string;
pub use run::{
    convergence_path, history_path, run_case, run_refinement, vtk_path, ConvergenceReport, RefinementResult,
    RunOptions, VtkOutput,
};

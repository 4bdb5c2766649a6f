//! Fixtures shared by the benchmarks.

use infolab::problems::{build_bv, build_dj, build_simon};
use infolab::{run_stages, AlgorithmSpec, ClassEnsemble, Result, StageLabel};

/// Measured-register ensemble of a built-in problem at `stage`.
pub fn reduced(name: &str, size: usize, stage: StageLabel) -> Result<ClassEnsemble> {
    let (problem, spec) = match name {
        "dj" => (build_dj(size)?, AlgorithmSpec::deutsch_jozsa(size)?),
        "bv" => (build_bv(size)?, AlgorithmSpec::bernstein_vazirani(size)?),
        _ => (build_simon(size)?, AlgorithmSpec::simon(size)?),
    };
    run_stages(&problem, &spec)?.reduced(stage)
}

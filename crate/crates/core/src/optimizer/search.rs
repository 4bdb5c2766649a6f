use num_complex::Complex64;
use rand::Rng;

use super::{i_max, DiscordOptions};
use crate::densemat::{basis_vector, gates, tensor_vectors, vector_norm, ComplexMatrix};
use crate::ensembles::{ClassEnsemble, ClassState};
use crate::problems::{phase_post_query_state, OracleFamily, OracleProblem};
use crate::{limits, random, Error, Result};

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub psi1: Vec<Complex64>,
    pub i_max: f64,
    /// Number of pre-query states evaluated.
    pub evaluations: usize,
}

/// Post-query ensemble of the whole oracle register for pre-query state `psi1`.
fn post_query_ensemble(problem: &OracleProblem, psi1: &[Complex64]) -> Result<ClassEnsemble> {
    let weights = problem.class_weights();
    let states: Vec<ComplexMatrix> = match problem.family() {
        OracleFamily::Finite(oracles) => {
            let mut acc = vec![ComplexMatrix::zeros(psi1.len(), psi1.len()); weights.len()];
            for o in oracles {
                acc[o.class].add_outer(o.weight / weights[o.class], &o.action.apply(psi1)?);
            }
            acc
        }
        OracleFamily::PhaseIntervals(family) => (0..weights.len())
            .map(|j| phase_post_query_state(family, j, psi1))
            .collect::<Result<_>>()?,
    };
    let classes = states
        .into_iter()
        .zip(weights)
        .enumerate()
        .map(|(label, (state, &weight))| ClassState {
            label,
            weight,
            state,
        })
        .collect();
    let dims = problem.register_dims().to_vec();
    let measured = (0..dims.len()).collect();
    ClassEnsemble::new(classes, dims, measured)
}

/// Every product of `|+>` and `|->` over the qubits, plus `|0...0>`.
fn product_seeds(problem: &OracleProblem) -> Vec<Vec<Complex64>> {
    let mut seeds = vec![basis_vector(problem.dim(), 0)];
    if let Some(m) = problem.qubits() {
        let h = gates::hadamard();
        let (plus, minus) = (h.column(0), h.column(1));
        for signs in 0..1usize << m {
            let mut v = vec![Complex64::new(1.0, 0.0)];
            for q in (0..m).rev() {
                let factor = if signs >> q & 1 == 1 { &minus } else { &plus };
                v = tensor_vectors(&v, factor);
            }
            seeds.push(v);
        }
    }
    seeds
}

fn perturb(psi: &[Complex64], step: f64, rng: &mut impl Rng) -> Vec<Complex64> {
    let dir = random::haar_state(psi.len(), rng);
    let v: Vec<Complex64> = psi.iter().zip(&dir).map(|(a, d)| a + d * step).collect();
    let n = vector_norm(&v);
    v.into_iter().map(|z| z / n).collect()
}

/// Best-effort search over pre-query states for the largest `I_max`.
///
/// Tries product states of `|±>`, `|0...0>` and `trials` random states, then
/// hill-climbs from the best with shrinking random steps. No optimality is
/// claimed.
pub fn search_psi1(
    problem: &OracleProblem,
    trials: usize,
    opts: &DiscordOptions,
) -> Result<SearchResult> {
    let cap = limits::current().search_cap;
    if problem.dim() > cap {
        return Err(Error::DimensionCap {
            requested: problem.dim(),
            cap,
        });
    }
    let mut rng = random::rng(opts.seed ^ 0x5eed);
    let mut evaluations = 0;
    let mut eval = |psi: &[Complex64]| -> Result<f64> {
        evaluations += 1;
        Ok(i_max(&post_query_ensemble(problem, psi)?, opts)?.i_max)
    };
    let h_j = problem.class_entropy();
    let mut candidates = product_seeds(problem);
    for _ in 0..trials {
        candidates.push(random::haar_state(problem.dim(), &mut rng));
    }
    let mut best_psi = candidates[0].clone();
    let mut best = f64::NEG_INFINITY;
    for psi in candidates {
        let v = eval(&psi)?;
        if v > best {
            best = v;
            best_psi = psi;
        }
        if best >= h_j - 1e-9 {
            break;
        }
    }
    let mut step = 0.5;
    let mut failures = 0;
    while best < h_j - 1e-9 && step > 1e-3 && failures < 4 * trials.max(1) {
        let candidate = perturb(&best_psi, step, &mut rng);
        let v = eval(&candidate)?;
        if v > best + 1e-12 {
            best = v;
            best_psi = candidate;
            failures = 0;
        } else {
            failures += 1;
            if failures % 4 == 0 {
                step *= 0.5;
            }
        }
    }
    Ok(SearchResult {
        psi1: best_psi,
        i_max: best,
        evaluations,
    })
}

//! Single-query and non-adaptive multi-query algorithm runs over a whole
//! oracle ensemble.

use num_complex::Complex64;
use serde::Serialize;

use crate::densemat::{
    basis_vector, gates, tensor, tensor_power, tensor_vectors, vector_norm, ComplexMatrix,
};
use crate::ensembles::{ClassEnsemble, ClassState, StageLabel};
use crate::hspkit::{group_fourier, FiniteAbelianGroup};
use crate::infometrics::{analyze, MetricsRow};
use crate::problems::{
    checked_dim, lift_t_queries, phase_post_query_state, OracleFamily, OracleProblem,
};
use crate::{tolerance, Error, Result};

/// Pre-query state, the two oracle-independent unitaries and the readout.
///
/// The oracle acts on the leading subsystems; any further subsystems are
/// workspace on which it acts as the identity.
#[derive(Debug, Clone)]
pub struct AlgorithmSpec {
    dims: Vec<usize>,
    psi0: Vec<Complex64>,
    v: ComplexMatrix,
    w: ComplexMatrix,
    measured: Vec<usize>,
    queries: usize,
}

impl AlgorithmSpec {
    pub fn new(
        dims: Vec<usize>,
        psi0: Vec<Complex64>,
        v: ComplexMatrix,
        w: ComplexMatrix,
        measured: Vec<usize>,
        queries: usize,
    ) -> Result<Self> {
        let dim = checked_dim(&dims)?;
        if psi0.len() != dim {
            return Err(Error::DimensionMismatch {
                context: "initial state",
                expected: dim,
                found: psi0.len(),
            });
        }
        let norm = vector_norm(&psi0);
        if (norm - 1.0).abs() > tolerance::UNITARY {
            return Err(Error::InvalidState(format!(
                "initial state has norm {norm}"
            )));
        }
        for (name, u) in [("V", &v), ("W", &w)] {
            if u.rows() != dim || u.cols() != dim {
                return Err(Error::InvalidAlgorithm(format!(
                    "{name} is {}x{}, register dimension is {dim}",
                    u.rows(),
                    u.cols()
                )));
            }
            u.ensure_unitary()?;
        }
        if measured.is_empty() || measured.iter().any(|&m| m >= dims.len()) {
            return Err(Error::InvalidSubsystems(format!(
                "bad measured set {measured:?}"
            )));
        }
        if queries == 0 {
            return Err(Error::InvalidAlgorithm(
                "query count must be at least 1".into(),
            ));
        }
        let mut measured = measured;
        measured.sort_unstable();
        measured.dedup();
        Ok(Self {
            dims,
            psi0,
            v,
            w,
            measured,
            queries,
        })
    }

    /// `|0^k>|1>`, `V = H^{⊗(k+1)}`, `W = H^{⊗k} ⊗ I`, first `k` qubits read.
    pub fn deutsch_jozsa(k: usize) -> Result<Self> {
        Self::kickback(k, 1)
    }

    /// Same circuit as Deutsch-Jozsa.
    pub fn bernstein_vazirani(n: usize) -> Result<Self> {
        Self::kickback(n, 1)
    }

    /// `|0^k>|1^r>`, Hadamards on every qubit before the query and on the
    /// input qubits after it; the inputs are read.
    pub fn kickback(inputs: usize, outputs: usize) -> Result<Self> {
        let n = inputs + outputs;
        let psi0 = basis_vector(1 << n, (1 << outputs) - 1);
        let v = gates::hadamard_n(n)?;
        let w = tensor(
            &gates::hadamard_n(inputs)?,
            &ComplexMatrix::identity(1 << outputs),
        )?;
        Self::new(vec![2; n], psi0, v, w, (0..inputs).collect(), 1)
    }

    /// `|0^k>|0^r>`, `V = W = H^{⊗k} ⊗ I`; the inputs are read.
    pub fn hadamard_sandwich(inputs: usize, outputs: usize) -> Result<Self> {
        let n = inputs + outputs;
        let h = tensor(
            &gates::hadamard_n(inputs)?,
            &ComplexMatrix::identity(1 << outputs),
        )?;
        Self::new(
            vec![2; n],
            basis_vector(1 << n, 0),
            h.clone(),
            h,
            (0..inputs).collect(),
            1,
        )
    }

    /// Fourier sampling over `G` with an output register holding a copy of `G`.
    pub fn fourier_sampling(group: &FiniteAbelianGroup) -> Result<Self> {
        let orders = group.cycle_orders();
        let f = tensor(
            &group_fourier(group)?,
            &ComplexMatrix::identity(group.order()),
        )?;
        let dims = orders.repeat(2);
        let dim = group.order() * group.order();
        Self::new(
            dims,
            basis_vector(dim, 0),
            f.clone(),
            f,
            (0..orders.len()).collect(),
            1,
        )
    }

    pub fn simon(n: usize) -> Result<Self> {
        Self::hadamard_sandwich(n, n)
    }

    /// `|0^t>`, `V = H^{⊗t}`, `W` the inverse Fourier transform mod `2^t`.
    pub fn phase_estimation(t: usize) -> Result<Self> {
        let dim = checked_dim(&vec![2; t])?;
        Self::new(
            vec![2; t],
            basis_vector(dim, 0),
            gates::hadamard_n(t)?,
            gates::inverse_fourier(dim),
            (0..t).collect(),
            1,
        )
    }

    /// `t` side-by-side copies of this circuit sharing one `t`-fold query.
    pub fn repeated(&self, t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidAlgorithm(
                "query count must be at least 1".into(),
            ));
        }
        if t == 1 {
            return Ok(self.clone());
        }
        let per = self.dims.len();
        let mut psi0 = self.psi0.clone();
        for _ in 1..t {
            psi0 = tensor_vectors(&psi0, &self.psi0);
        }
        let measured = (0..t)
            .flat_map(|c| self.measured.iter().map(move |&m| c * per + m))
            .collect();
        Self::new(
            self.dims.repeat(t),
            psi0,
            tensor_power(&self.v, t)?,
            tensor_power(&self.w, t)?,
            measured,
            self.queries * t,
        )
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.psi0.len()
    }

    pub fn psi0(&self) -> &[Complex64] {
        &self.psi0
    }

    pub fn v(&self) -> &ComplexMatrix {
        &self.v
    }

    pub fn w(&self) -> &ComplexMatrix {
        &self.w
    }

    pub fn measured(&self) -> &[usize] {
        &self.measured
    }

    pub fn queries(&self) -> usize {
        self.queries
    }

    /// `V|ψ_0>`.
    pub fn pre_query_state(&self) -> Vec<Complex64> {
        self.v
            .apply(&self.psi0)
            .expect("dimensions checked at construction")
    }
}

/// Class ensembles of the full register at the three stages.
#[derive(Debug, Clone)]
pub struct Stages {
    pre_query: ClassEnsemble,
    post_query: ClassEnsemble,
    final_stage: ClassEnsemble,
}

impl Stages {
    pub fn get(&self, stage: StageLabel) -> &ClassEnsemble {
        match stage {
            StageLabel::PreQuery => &self.pre_query,
            StageLabel::PostQuery => &self.post_query,
            StageLabel::Final => &self.final_stage,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (StageLabel, &ClassEnsemble)> {
        StageLabel::ALL.into_iter().map(move |s| (s, self.get(s)))
    }

    /// The stage ensemble reduced to the measured subsystems.
    pub fn reduced(&self, stage: StageLabel) -> Result<ClassEnsemble> {
        self.get(stage).reduce_to_measured()
    }
}

/// Run the algorithm for every oracle and collect the class states.
///
/// When `spec` asks for more queries than the problem encodes, the problem
/// is lifted to `U_f^{⊗t}` first.
pub fn run_stages(problem: &OracleProblem, spec: &AlgorithmSpec) -> Result<Stages> {
    let lifted;
    let problem = if spec.queries == problem.queries() {
        problem
    } else if problem.queries() == 1 {
        lifted = lift_t_queries(problem, spec.queries)?;
        &lifted
    } else {
        return Err(Error::InvalidAlgorithm(format!(
            "algorithm makes {} queries but the problem already encodes {}",
            spec.queries,
            problem.queries()
        )));
    };
    let odims = problem.register_dims();
    if spec.dims.len() < odims.len() || spec.dims[..odims.len()] != *odims {
        return Err(Error::DimensionMismatch {
            context: "oracle register layout",
            expected: problem.dim(),
            found: spec.dims.iter().take(odims.len()).product(),
        });
    }
    let odim = problem.dim();
    let extra = spec.dim() / odim;
    let psi1 = spec.pre_query_state();
    let weights = problem.class_weights();

    let pre_state = ComplexMatrix::outer(&psi1);
    let post_states: Vec<ComplexMatrix> = match problem.family() {
        OracleFamily::Finite(oracles) => {
            let mut acc = vec![ComplexMatrix::zeros(spec.dim(), spec.dim()); weights.len()];
            let mut phi = vec![Complex64::new(0.0, 0.0); spec.dim()];
            let mut block = vec![Complex64::new(0.0, 0.0); odim];
            for o in oracles {
                for e in 0..extra {
                    for x in 0..odim {
                        block[x] = psi1[x * extra + e];
                    }
                    let out = o.action.apply(&block)?;
                    for x in 0..odim {
                        phi[x * extra + e] = out[x];
                    }
                }
                acc[o.class].add_outer(o.weight / weights[o.class], &phi);
            }
            acc
        }
        OracleFamily::PhaseIntervals(family) => {
            if extra != 1 {
                return Err(Error::InvalidAlgorithm(
                    "phase oracles take no workspace qubits".into(),
                ));
            }
            (0..weights.len())
                .map(|j| phase_post_query_state(family, j, &psi1))
                .collect::<Result<_>>()?
        }
    };
    let build = |states: Vec<ComplexMatrix>| {
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
        ClassEnsemble::new(classes, spec.dims.clone(), spec.measured.clone())
    };
    let final_states = post_states
        .iter()
        .map(|s| s.conjugate_by(&spec.w))
        .collect::<Result<Vec<_>>>()?;
    Ok(Stages {
        pre_query: build(vec![pre_state; weights.len()])?,
        post_query: build(post_states)?,
        final_stage: build(final_states)?,
    })
}

/// Guess for each outcome and the resulting success probability.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRule {
    /// `guesses[y]` is the class label output on outcome `y`.
    pub guesses: Vec<usize>,
    pub p_success: f64,
}

/// `g(y) = argmax_j Pr(J = j, Y = y)`, ties to the smallest label.
pub fn optimal_output_rule(e: &ClassEnsemble) -> Result<OutputRule> {
    let reduced = e.reduce_to_measured()?;
    let pmf = reduced.diagonal_distribution();
    let mut guesses = Vec::with_capacity(pmf.outcomes());
    let mut p_success = 0.0;
    for y in 0..pmf.outcomes() {
        let mut best: Option<(usize, f64)> = None;
        for (row, &label) in pmf.labels.iter().enumerate() {
            let p = pmf.probs[row][y];
            best = match best {
                Some((bl, bp)) if bp > p || (bp == p && bl < label) => Some((bl, bp)),
                _ => Some((label, p)),
            };
        }
        let (label, p) = best.expect("ensembles are nonempty");
        guesses.push(label);
        p_success += p;
    }
    Ok(OutputRule { guesses, p_success })
}

/// Metrics of one stage, measured on the readout subsystems.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageReport {
    pub stage: StageLabel,
    #[serde(flatten)]
    pub metrics: MetricsRow,
    pub p_success: f64,
    pub ensemble_digest: String,
}

pub fn stage_report(stage: StageLabel, e: &ClassEnsemble) -> Result<StageReport> {
    let reduced = e.reduce_to_measured()?;
    let metrics = analyze(&reduced)?;
    let rule = optimal_output_rule(&reduced)?;
    Ok(StageReport {
        stage,
        metrics,
        p_success: rule.p_success,
        ensemble_digest: reduced.digest(),
    })
}

pub fn stage_reports(stages: &Stages) -> Result<Vec<StageReport>> {
    stages.iter().map(|(s, e)| stage_report(s, e)).collect()
}

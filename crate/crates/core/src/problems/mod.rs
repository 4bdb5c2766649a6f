//! Oracle classification problems and the built-in families.

mod builtins;
mod phase;

use num_complex::Complex64;

pub use self::builtins::{build_bv, build_dj, build_hsp, build_simon, hsp_oracle};
pub use self::phase::{
    build_phase_estimation, phase_final_metrics, phase_post_query_state, sigma_phase_analytic,
    PhaseFamily,
};
use crate::densemat::{gates, tensor_power, ComplexMatrix};
use crate::hspkit::HiddenSubgroupInstance;
use crate::infometrics::shannon_entropy;
use crate::{limits, tolerance, Error, Result};

/// How a single oracle acts on the full oracle register.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleAction {
    /// `U|x> = |image[x]>`.
    Permutation(Vec<usize>),
    /// `U|x> = d[x] |x>`.
    Diagonal(Vec<Complex64>),
    Dense(ComplexMatrix),
}

impl OracleAction {
    pub fn dim(&self) -> usize {
        match self {
            Self::Permutation(p) => p.len(),
            Self::Diagonal(d) => d.len(),
            Self::Dense(m) => m.rows(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::Permutation(image) => {
                let mut seen = vec![false; image.len()];
                for &y in image {
                    if y >= image.len() || std::mem::replace(&mut seen[y], true) {
                        return Err(Error::InvalidProblem(
                            "oracle image is not a permutation".into(),
                        ));
                    }
                }
                Ok(())
            }
            Self::Diagonal(d) => {
                let defect = d.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
                if defect > tolerance::UNITARY {
                    return Err(Error::NotUnitary { defect });
                }
                Ok(())
            }
            Self::Dense(m) => {
                if !m.is_square() {
                    return Err(Error::InvalidProblem("oracle matrix is not square".into()));
                }
                m.ensure_unitary()
            }
        }
    }

    /// `U psi`.
    pub fn apply(&self, psi: &[Complex64]) -> Result<Vec<Complex64>> {
        if psi.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "oracle input state",
                expected: self.dim(),
                found: psi.len(),
            });
        }
        Ok(match self {
            Self::Permutation(image) => {
                let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
                for (x, &y) in image.iter().enumerate() {
                    out[y] = psi[x];
                }
                out
            }
            Self::Diagonal(d) => psi.iter().zip(d).map(|(a, b)| a * b).collect(),
            Self::Dense(m) => m.apply(psi)?,
        })
    }

    pub fn unitary(&self) -> ComplexMatrix {
        match self {
            Self::Permutation(image) => gates::permutation(image),
            Self::Diagonal(d) => ComplexMatrix::from_diagonal(d),
            Self::Dense(m) => m.clone(),
        }
    }

    /// True when the unitary is a 0/1 permutation matrix.
    pub fn is_permutation_matrix(&self) -> bool {
        match self {
            Self::Permutation(_) => true,
            Self::Diagonal(d) => d
                .iter()
                .all(|z| (z - Complex64::new(1.0, 0.0)).norm() <= tolerance::UNITARY),
            Self::Dense(m) => (0..m.rows()).all(|r| {
                let row = m.row(r);
                let ones = row
                    .iter()
                    .filter(|z| (*z - Complex64::new(1.0, 0.0)).norm() <= tolerance::UNITARY)
                    .count();
                let zeros = row
                    .iter()
                    .filter(|z| z.norm() <= tolerance::UNITARY)
                    .count();
                ones == 1 && zeros == row.len() - 1
            }),
        }
    }

    /// `U^{⊗t}`, with the first copy most significant.
    pub fn tensor_power(&self, t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::OutOfRange {
                what: "query count",
                value: 0,
                range: ">= 1".into(),
            });
        }
        let d = self.dim();
        let total = (0..t)
            .try_fold(1usize, |acc, _| acc.checked_mul(d))
            .filter(|&n| n <= limits::current().dim_cap)
            .ok_or(Error::DimensionCap {
                requested: d.saturating_pow(t as u32),
                cap: limits::current().dim_cap,
            })?;
        Ok(match self {
            Self::Permutation(image) => Self::Permutation(
                (0..total)
                    .map(|mut x| {
                        let mut y = 0;
                        let mut place = 1;
                        for _ in 0..t {
                            y += image[x % d] * place;
                            x /= d;
                            place *= d;
                        }
                        y
                    })
                    .collect(),
            ),
            Self::Diagonal(diag) => Self::Diagonal(
                (0..total)
                    .map(|mut x| {
                        let mut z = Complex64::new(1.0, 0.0);
                        for _ in 0..t {
                            z *= diag[x % d];
                            x /= d;
                        }
                        z
                    })
                    .collect(),
            ),
            Self::Dense(m) => Self::Dense(tensor_power(m, t)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Oracle {
    pub id: String,
    pub class: usize,
    pub weight: f64,
    pub action: OracleAction,
}

/// Oracle index set with its unitaries.
#[derive(Debug, Clone)]
pub enum OracleFamily {
    Finite(Vec<Oracle>),
    /// Phase oracles `f ∈ [0, 1)` split into equal intervals.
    PhaseIntervals(PhaseFamily),
}

/// Prior over the oracle set.
#[derive(Debug, Clone, PartialEq)]
pub enum Prior {
    UniformOverF,
    /// Each class equally likely, uniform within a class.
    PartitionUniform,
    /// One weight per oracle, normalized at construction.
    Custom(Vec<f64>),
}

/// An oracle before the prior is attached.
#[derive(Debug, Clone)]
pub struct OracleSpec {
    pub id: String,
    pub class: usize,
    pub action: OracleAction,
}

#[derive(Debug, Clone)]
pub struct OracleProblem {
    name: String,
    register_dims: Vec<usize>,
    class_names: Vec<String>,
    class_weights: Vec<f64>,
    family: OracleFamily,
    hidden_subgroups: Option<HiddenSubgroupInstance>,
    queries: usize,
}

impl OracleProblem {
    /// A problem over a finite oracle set. Classes are `0..class_names.len()`
    /// and each must contain at least one oracle.
    pub fn finite(
        name: impl Into<String>,
        register_dims: Vec<usize>,
        class_names: Vec<String>,
        oracles: Vec<OracleSpec>,
        prior: Prior,
    ) -> Result<Self> {
        let dim = checked_dim(&register_dims)?;
        let classes = class_names.len();
        if oracles.is_empty() || classes == 0 {
            return Err(Error::InvalidProblem(
                "empty oracle set or class list".into(),
            ));
        }
        let mut sizes = vec![0usize; classes];
        for o in &oracles {
            if o.class >= classes {
                return Err(Error::InvalidProblem(format!(
                    "oracle {} has unknown class {}",
                    o.id, o.class
                )));
            }
            if o.action.dim() != dim {
                return Err(Error::DimensionMismatch {
                    context: "oracle unitary",
                    expected: dim,
                    found: o.action.dim(),
                });
            }
            o.action.validate()?;
            sizes[o.class] += 1;
        }
        if let Some(j) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidProblem(format!(
                "class {} is empty",
                class_names[j]
            )));
        }
        let weights: Vec<f64> = match &prior {
            Prior::UniformOverF => vec![1.0 / oracles.len() as f64; oracles.len()],
            Prior::PartitionUniform => oracles
                .iter()
                .map(|o| 1.0 / (classes as u64 * sizes[o.class] as u64) as f64)
                .collect(),
            Prior::Custom(w) => {
                if w.len() != oracles.len() {
                    return Err(Error::InvalidProblem(format!(
                        "{} prior weights for {} oracles",
                        w.len(),
                        oracles.len()
                    )));
                }
                if w.iter().any(|&x| x <= 0.0 || !x.is_finite()) {
                    return Err(Error::InvalidProblem(
                        "prior weights must be positive".into(),
                    ));
                }
                let total: f64 = w.iter().sum();
                w.iter().map(|x| x / total).collect()
            }
        };
        let class_weights = match prior {
            Prior::PartitionUniform => vec![1.0 / classes as f64; classes],
            _ => {
                let mut cw = vec![0.0; classes];
                for (o, w) in oracles.iter().zip(&weights) {
                    cw[o.class] += w;
                }
                cw
            }
        };
        let oracles = oracles
            .into_iter()
            .zip(weights)
            .map(|(o, weight)| Oracle {
                id: o.id,
                class: o.class,
                weight,
                action: o.action,
            })
            .collect();
        Ok(Self {
            name: name.into(),
            register_dims,
            class_names,
            class_weights,
            family: OracleFamily::Finite(oracles),
            hidden_subgroups: None,
            queries: 1,
        })
    }

    pub(crate) fn phase(name: impl Into<String>, family: PhaseFamily) -> Result<Self> {
        let classes = family.class_count();
        Ok(Self {
            name: name.into(),
            register_dims: vec![2; family.qubits()],
            class_names: (0..classes).map(|j| j.to_string()).collect(),
            class_weights: vec![1.0 / classes as f64; classes],
            family: OracleFamily::PhaseIntervals(family),
            hidden_subgroups: None,
            queries: 1,
        })
    }

    pub(crate) fn with_hidden_subgroups(mut self, instance: HiddenSubgroupInstance) -> Self {
        self.hidden_subgroups = Some(instance);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn register_dims(&self) -> &[usize] {
        &self.register_dims
    }

    pub fn dim(&self) -> usize {
        self.register_dims.iter().product()
    }

    /// Qubit count `m` when the register is made of qubits.
    pub fn qubits(&self) -> Option<usize> {
        self.register_dims
            .iter()
            .all(|&d| d == 2)
            .then_some(self.register_dims.len())
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    /// `p_j = Σ_{f ∈ A_j} p_f`.
    pub fn class_weights(&self) -> &[f64] {
        &self.class_weights
    }

    /// `H(J)`.
    pub fn class_entropy(&self) -> f64 {
        shannon_entropy(&self.class_weights)
    }

    pub fn family(&self) -> &OracleFamily {
        &self.family
    }

    /// The finite oracle list, or `None` for a continuous family.
    pub fn oracles(&self) -> Option<&[Oracle]> {
        match &self.family {
            OracleFamily::Finite(o) => Some(o),
            OracleFamily::PhaseIntervals(_) => None,
        }
    }

    /// Subgroup structure when the problem is a hidden subgroup problem.
    pub fn hidden_subgroups(&self) -> Option<&HiddenSubgroupInstance> {
        self.hidden_subgroups.as_ref()
    }

    /// Number of parallel queries folded into each oracle.
    pub fn queries(&self) -> usize {
        self.queries
    }
}

/// Product of subsystem dimensions, checked against the cap.
pub(crate) fn checked_dim(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(Error::InvalidSubsystems(format!(
            "bad register layout {dims:?}"
        )));
    }
    let dim = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .unwrap_or(usize::MAX);
    limits::check_dim(dim)?;
    Ok(dim)
}

/// A truth-table oracle, as read from a problem file.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthTableOracle {
    pub id: String,
    pub class: String,
    /// `f(x)` for `x = 0, 1, ...` in lexicographic input order.
    pub table: Vec<u64>,
    pub weight: Option<f64>,
}

/// Bit oracle `|x>|y> -> |x>|y ⊕ f(x)>` on `inputs + outputs` qubits.
pub fn bit_oracle(inputs: usize, outputs: usize, table: &[u64]) -> Result<OracleAction> {
    let n_in = 1usize
        .checked_shl(inputs as u32)
        .ok_or_else(|| Error::InvalidProblem("too many input bits".into()))?;
    let n_out = 1usize
        .checked_shl(outputs as u32)
        .ok_or_else(|| Error::InvalidProblem("too many output bits".into()))?;
    if table.len() != n_in {
        return Err(Error::InvalidProblem(format!(
            "truth table has {} entries, expected {n_in}",
            table.len()
        )));
    }
    if let Some(&v) = table.iter().find(|&&v| v >= n_out as u64) {
        return Err(Error::InvalidProblem(format!(
            "output value {v} does not fit in {outputs} bits"
        )));
    }
    limits::check_dim(n_in.saturating_mul(n_out))?;
    Ok(OracleAction::Permutation(
        (0..n_in * n_out)
            .map(|i| {
                let (x, y) = (i / n_out, i % n_out);
                x * n_out + (y ^ table[x] as usize)
            })
            .collect(),
    ))
}

/// Build a problem from truth tables. Class labels are numbered in order of
/// first appearance. With [`Prior::Custom`] every oracle must carry a weight.
pub fn from_truth_tables(
    name: impl Into<String>,
    inputs: usize,
    outputs: usize,
    oracles: &[TruthTableOracle],
    prior: Prior,
) -> Result<OracleProblem> {
    if inputs == 0 || outputs == 0 {
        return Err(Error::InvalidProblem(
            "inputs and outputs must be at least one bit".into(),
        ));
    }
    let mut class_names: Vec<String> = Vec::new();
    let mut specs = Vec::with_capacity(oracles.len());
    for o in oracles {
        let class = match class_names.iter().position(|c| *c == o.class) {
            Some(i) => i,
            None => {
                class_names.push(o.class.clone());
                class_names.len() - 1
            }
        };
        specs.push(OracleSpec {
            id: o.id.clone(),
            class,
            action: bit_oracle(inputs, outputs, &o.table)?,
        });
    }
    let prior = match prior {
        Prior::Custom(w) if w.is_empty() => Prior::Custom(
            oracles
                .iter()
                .map(|o| {
                    o.weight.ok_or_else(|| {
                        Error::InvalidProblem(format!("oracle {} has no weight", o.id))
                    })
                })
                .collect::<Result<_>>()?,
        ),
        p => p,
    };
    OracleProblem::finite(name, vec![2; inputs + outputs], class_names, specs, prior)
}

/// `U'_f = U_f^{⊗t}` with the same oracle set, classes and prior.
pub fn lift_t_queries(problem: &OracleProblem, t: usize) -> Result<OracleProblem> {
    if t == 0 {
        return Err(Error::OutOfRange {
            what: "query count",
            value: 0,
            range: ">= 1".into(),
        });
    }
    if t == 1 {
        return Ok(problem.clone());
    }
    let register_dims: Vec<usize> = problem.register_dims.repeat(t);
    checked_dim(&register_dims)?;
    let family = match &problem.family {
        OracleFamily::Finite(oracles) => OracleFamily::Finite(
            oracles
                .iter()
                .map(|o| {
                    Ok(Oracle {
                        id: o.id.clone(),
                        class: o.class,
                        weight: o.weight,
                        action: o.action.tensor_power(t)?,
                    })
                })
                .collect::<Result<_>>()?,
        ),
        OracleFamily::PhaseIntervals(p) => OracleFamily::PhaseIntervals(p.tensor_power(t)?),
    };
    Ok(OracleProblem {
        name: problem.name.clone(),
        register_dims,
        class_names: problem.class_names.clone(),
        class_weights: problem.class_weights.clone(),
        family,
        hidden_subgroups: problem.hidden_subgroups.clone(),
        queries: problem.queries * t,
    })
}

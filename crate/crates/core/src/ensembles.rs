//! Classical-quantum ensembles `Σ_j p_j |j><j| ⊗ σ_j`, stored class by class.
//!
//! The joint matrix is never formed: every quantity of interest decomposes
//! over classes, e.g. `S(ρ_JY) = H(J) + Σ_j p_j S(σ_j)`.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::densemat::{partial_trace, ComplexMatrix};
use crate::{tolerance, Error, Result};

/// Where in the algorithm a snapshot was taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StageLabel {
    /// After the pre-query unitary, right before the oracle.
    PreQuery,
    /// Right after the oracle query.
    PostQuery,
    /// After the post-query unitary, right before measurement.
    Final,
}

impl StageLabel {
    pub const ALL: [StageLabel; 3] = [
        StageLabel::PreQuery,
        StageLabel::PostQuery,
        StageLabel::Final,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StageLabel::PreQuery => "pre-query",
            StageLabel::PostQuery => "post-query",
            StageLabel::Final => "final",
        }
    }
}

impl fmt::Display for StageLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for StageLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pre" | "pre-query" => Ok(StageLabel::PreQuery),
            "post" | "post-query" => Ok(StageLabel::PostQuery),
            "final" | "fin" => Ok(StageLabel::Final),
            other => Err(Error::InvalidStage(other.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClassState {
    pub label: usize,
    pub weight: f64,
    pub state: ComplexMatrix,
}

#[derive(Debug, Clone)]
pub struct ClassEnsemble {
    classes: Vec<ClassState>,
    subsystem_dims: Vec<usize>,
    measured: Vec<usize>,
}

impl ClassEnsemble {
    /// Validate and build an ensemble.
    ///
    /// `measured` lists the subsystems (indices into `subsystem_dims`) read
    /// out by the final measurement.
    pub fn new(
        classes: Vec<ClassState>,
        subsystem_dims: Vec<usize>,
        measured: Vec<usize>,
    ) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::InvalidEnsemble("no classes".into()));
        }
        let dim: usize = subsystem_dims.iter().product();
        let mut total = 0.0;
        for c in &classes {
            if c.weight <= 0.0 || !c.weight.is_finite() {
                return Err(Error::InvalidEnsemble(format!(
                    "class {} has non-positive weight {}",
                    c.label, c.weight
                )));
            }
            total += c.weight;
            if c.state.rows() != dim || c.state.cols() != dim {
                return Err(Error::DimensionMismatch {
                    context: "class state dimension",
                    expected: dim,
                    found: c.state.rows(),
                });
            }
            if !c.state.is_finite() {
                return Err(Error::NonFinite);
            }
            let defect = c.state.hermitian_defect();
            if defect > tolerance::HERMITIAN {
                return Err(Error::NotHermitian { defect });
            }
            let tr = c.state.trace();
            if (tr.re - 1.0).abs() > tolerance::TRACE {
                return Err(Error::InvalidEnsemble(format!(
                    "class {} state has trace {}",
                    c.label, tr.re
                )));
            }
        }
        if (total - 1.0).abs() > tolerance::PROBABILITY_SUM {
            return Err(Error::InvalidEnsemble(format!("weights sum to {total}")));
        }
        let mut measured = measured;
        measured.sort_unstable();
        measured.dedup();
        if let Some(&bad) = measured.iter().find(|&&m| m >= subsystem_dims.len()) {
            return Err(Error::InvalidSubsystems(format!(
                "measured subsystem {bad} out of range"
            )));
        }
        Ok(Self {
            classes,
            subsystem_dims,
            measured,
        })
    }

    /// Ensemble on `qubits` qubits with every qubit measured.
    pub fn on_qubits(classes: Vec<ClassState>, qubits: usize) -> Result<Self> {
        Self::new(classes, vec![2; qubits], (0..qubits).collect())
    }

    /// Ensemble on a single register of dimension `dim`, fully measured.
    pub fn on_register(classes: Vec<ClassState>, dim: usize) -> Result<Self> {
        Self::new(classes, vec![dim], vec![0])
    }

    pub fn classes(&self) -> &[ClassState] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn subsystem_dims(&self) -> &[usize] {
        &self.subsystem_dims
    }

    pub fn measured(&self) -> &[usize] {
        &self.measured
    }

    pub fn dim(&self) -> usize {
        self.subsystem_dims.iter().product()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.classes.iter().map(|c| c.weight).collect()
    }

    pub fn is_fully_measured(&self) -> bool {
        self.measured.len() == self.subsystem_dims.len()
    }

    /// `ρ_Y = Σ_j p_j σ_j`.
    pub fn mix(&self) -> ComplexMatrix {
        let dim = self.dim();
        let mut rho = ComplexMatrix::zeros(dim, dim);
        for c in &self.classes {
            rho.add_scaled(c.weight, &c.state);
        }
        rho
    }

    /// Replace every class state by its reduction onto the measured subsystems.
    pub fn reduce_to_measured(&self) -> Result<Self> {
        if self.measured.is_empty() {
            return Err(Error::InvalidSubsystems("measured set is empty".into()));
        }
        if self.is_fully_measured() {
            return Ok(self.clone());
        }
        let classes = self
            .classes
            .iter()
            .map(|c| {
                Ok(ClassState {
                    label: c.label,
                    weight: c.weight,
                    state: partial_trace(&c.state, &self.subsystem_dims, &self.measured)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let dims: Vec<usize> = self
            .measured
            .iter()
            .map(|&m| self.subsystem_dims[m])
            .collect();
        let measured = (0..dims.len()).collect();
        Ok(Self {
            classes,
            subsystem_dims: dims,
            measured,
        })
    }

    /// Apply `f` to every class state, keeping labels, weights and layout.
    pub fn map_states(
        &self,
        mut f: impl FnMut(&ComplexMatrix) -> Result<ComplexMatrix>,
    ) -> Result<Self> {
        let classes = self
            .classes
            .iter()
            .map(|c| {
                Ok(ClassState {
                    label: c.label,
                    weight: c.weight,
                    state: f(&c.state)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(classes, self.subsystem_dims.clone(), self.measured.clone())
    }

    /// Like [`ClassEnsemble::map_states`] for maps that change the register
    /// layout; every subsystem of the result is measured.
    pub fn map_states_resized(
        &self,
        mut f: impl FnMut(&ComplexMatrix) -> Result<ComplexMatrix>,
        dims: Vec<usize>,
    ) -> Result<Self> {
        let classes = self
            .classes
            .iter()
            .map(|c| {
                Ok(ClassState {
                    label: c.label,
                    weight: c.weight,
                    state: f(&c.state)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let measured = (0..dims.len()).collect();
        Self::new(classes, dims, measured)
    }

    /// `σ_j -> U σ_j U^†` for every class.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        self.map_states(|s| s.conjugate_by(u))
    }

    /// Joint distribution of class and computational-basis outcome,
    /// `Pr(j, y) = p_j <y|σ_j|y>`, on the full register of this ensemble.
    pub fn diagonal_distribution(&self) -> JointPmf {
        let labels = self.classes.iter().map(|c| c.label).collect();
        let probs = self
            .classes
            .iter()
            .map(|c| {
                c.state
                    .real_diagonal()
                    .into_iter()
                    .map(|d| {
                        let p = c.weight * d;
                        if p < 0.0 {
                            0.0
                        } else {
                            p
                        }
                    })
                    .collect()
            })
            .collect();
        JointPmf { labels, probs }
    }

    /// Short checksum over weights and states, rounded to 1e-12.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        let quantize = |x: f64| ((x * 1e12).round() as i64).to_le_bytes();
        for &d in &self.subsystem_dims {
            hasher.update((d as u64).to_le_bytes());
        }
        for c in &self.classes {
            hasher.update((c.label as u64).to_le_bytes());
            hasher.update(quantize(c.weight));
            for z in c.state.as_slice() {
                hasher.update(quantize(z.re));
                hasher.update(quantize(z.im));
            }
        }
        hasher
            .finalize()
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Joint probability mass function over (class, outcome).
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    /// Class label of each row.
    pub labels: Vec<usize>,
    /// `probs[row][y]`.
    pub probs: Vec<Vec<f64>>,
}

impl JointPmf {
    pub fn outcomes(&self) -> usize {
        self.probs.first().map_or(0, Vec::len)
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().flatten().sum()
    }

    /// `Pr(J = j)` per row.
    pub fn class_marginal(&self) -> Vec<f64> {
        self.probs.iter().map(|row| row.iter().sum()).collect()
    }

    /// `Pr(Y = y)`.
    pub fn outcome_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.outcomes()];
        for row in &self.probs {
            for (o, p) in out.iter_mut().zip(row) {
                *o += p;
            }
        }
        out
    }
}

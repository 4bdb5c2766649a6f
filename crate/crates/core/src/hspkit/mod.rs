//! Finite abelian hidden subgroup problems.
//!
//! Class states are built from subgroup structure alone: after the output
//! register is traced out, the state left by any function hiding `H`
//! depends only on `H`, so the (huge) set of hiding functions is never
//! enumerated.

mod group;
mod spectrum;

use num_complex::Complex64;

pub use self::group::{
    annihilator, character_table, enumerate_subgroups, group_fourier, CharacterSet,
    FiniteAbelianGroup, Subgroup,
};
pub use self::spectrum::{
    for_each_spectrum_entry_t, hsp_metrics_t, lambda_spectrum, lambda_spectrum_character_form,
    lambda_spectrum_t, spectrum_multiplicities_t, SpectrumLevel,
};
use crate::densemat::ComplexMatrix;
use crate::ensembles::{ClassEnsemble, ClassState, StageLabel};
use crate::{limits, tolerance, Error, Result};

/// Reduced state of the group register for one hidden subgroup.
///
/// Post-query: `(1/|G|) Σ_cosets Σ_{h,h'∈H} |s+h><s+h'|`, i.e. entry
/// `(x, y)` is `1/|G|` when `x - y ∈ H`. Final: the Fourier conjugate of
/// that, diagonal with weight `|H|/|G|` on `H^⊥`.
pub fn hsp_class_state(
    group: &FiniteAbelianGroup,
    subgroup: &Subgroup,
    stage: StageLabel,
) -> Result<ComplexMatrix> {
    limits::check_dim(group.order())?;
    let n = group.order();
    let inv = 1.0 / n as f64;
    match stage {
        StageLabel::PreQuery => Err(Error::InvalidStage(
            "the pre-query state does not depend on the subgroup; use hsp_prequery_state".into(),
        )),
        StageLabel::PostQuery => Ok(ComplexMatrix::from_fn(n, n, |x, y| {
            if subgroup.contains(group.sub(x, y)) {
                Complex64::new(inv, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })),
        StageLabel::Final => {
            let perp = annihilator(group, subgroup)?;
            let weight = subgroup.order() as f64 * inv;
            let diag: Vec<f64> = group
                .elements()
                .map(|g| if perp.contains(g) { weight } else { 0.0 })
                .collect();
            Ok(ComplexMatrix::from_real_diagonal(&diag))
        }
    }
}

/// The uniform superposition over the group register, shared by all classes.
pub fn hsp_prequery_state(group: &FiniteAbelianGroup) -> Result<ComplexMatrix> {
    limits::check_dim(group.order())?;
    let n = group.order();
    Ok(ComplexMatrix::from_fn(n, n, |_, _| {
        Complex64::new(1.0 / n as f64, 0.0)
    }))
}

/// A prior over hidden subgroups of one group.
#[derive(Debug, Clone)]
pub struct HiddenSubgroupInstance {
    group: FiniteAbelianGroup,
    subgroups: Vec<Subgroup>,
    priors: Vec<f64>,
    annihilators: Vec<CharacterSet>,
}

impl HiddenSubgroupInstance {
    pub fn new(
        group: FiniteAbelianGroup,
        subgroups: Vec<Subgroup>,
        priors: Vec<f64>,
    ) -> Result<Self> {
        if subgroups.is_empty() || subgroups.len() != priors.len() {
            return Err(Error::InvalidProblem(format!(
                "{} subgroups with {} priors",
                subgroups.len(),
                priors.len()
            )));
        }
        if priors.iter().any(|&p| p.is_nan() || p <= 0.0) {
            return Err(Error::InvalidProblem(
                "subgroup priors must be positive".into(),
            ));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > tolerance::PROBABILITY_SUM {
            return Err(Error::InvalidProblem(format!(
                "subgroup priors sum to {total}"
            )));
        }
        let annihilators = subgroups
            .iter()
            .map(|h| annihilator(&group, h))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            group,
            subgroups,
            priors,
            annihilators,
        })
    }

    /// Uniform prior over the given subgroups.
    pub fn uniform(group: FiniteAbelianGroup, subgroups: Vec<Subgroup>) -> Result<Self> {
        let p = 1.0 / subgroups.len() as f64;
        let priors = vec![p; subgroups.len()];
        Self::new(group, subgroups, priors)
    }

    /// Simon's problem on `n` bits: `H_s = {0, s}` for every `s`, including
    /// `s = 0`, uniformly. Class `j` hides `H_j` with `s = j`.
    pub fn simon(n: usize) -> Result<Self> {
        let group = FiniteAbelianGroup::elementary_abelian_2(n)?;
        let subgroups = (0..group.order())
            .map(|s| Subgroup::new(&group, [0, s]))
            .collect::<Result<Vec<_>>>()?;
        Self::uniform(group, subgroups)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn annihilators(&self) -> &[CharacterSet] {
        &self.annihilators
    }

    /// Subsystem layout of the group register: one subsystem per cyclic factor.
    pub fn register_dims(&self) -> Vec<usize> {
        self.group.cycle_orders().to_vec()
    }

    /// Class ensemble of the group register at a stage of the standard
    /// Fourier-sampling algorithm.
    pub fn ensemble(&self, stage: StageLabel) -> Result<ClassEnsemble> {
        let pre = match stage {
            StageLabel::PreQuery => Some(hsp_prequery_state(&self.group)?),
            _ => None,
        };
        let classes = self
            .subgroups
            .iter()
            .zip(&self.priors)
            .enumerate()
            .map(|(j, (h, &p))| {
                let state = match &pre {
                    Some(s) => s.clone(),
                    None => hsp_class_state(&self.group, h, stage)?,
                };
                Ok(ClassState {
                    label: j,
                    weight: p,
                    state,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let dims = self.register_dims();
        let measured = (0..dims.len()).collect();
        ClassEnsemble::new(classes, dims, measured)
    }

    /// `Σ_j p_j (log|G| - log|H_j|)`: conditional outcome entropy of one query.
    pub fn conditional_entropy_single(&self) -> f64 {
        let log_g = (self.group.order() as f64).log2();
        self.subgroups
            .iter()
            .zip(&self.priors)
            .map(|(h, p)| p * (log_g - (h.order() as f64).log2()))
            .sum()
    }
}

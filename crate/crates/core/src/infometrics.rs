//! Information-theoretic quantities of a class ensemble measured in the
//! computational basis.
//!
//! All quantities are in bits and are evaluated on the measured subsystems:
//! an ensemble with unmeasured subsystems is reduced first.

use std::borrow::Cow;

use serde::{Deserialize, Serialize};

use crate::densemat::von_neumann_entropy;
use crate::ensembles::ClassEnsemble;
use crate::{tolerance, Error, Result};

/// One row of the standard seven quantities plus the derived bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    /// Shannon entropy `H(Y)` of the outcome.
    pub h_y: f64,
    /// Von Neumann entropy `S(ρ_Y)`.
    pub s_rho_y: f64,
    /// Relative entropy of coherence `H(Y) - S(ρ_Y)`.
    pub coherence: f64,
    /// `H(Y|J)`.
    pub h_y_given_j: f64,
    /// Holevo quantity of the class ensemble.
    pub chi: f64,
    /// `I(J;Y)`.
    pub mutual_information: f64,
    /// Discord with the measurement fixed to the computational basis.
    pub discord: f64,
    /// Coherence plus discord.
    pub irrealism: f64,
    /// `S(ρ_Y) - H(Y|J)`, a lower bound on `I(J;Y)`.
    pub lower_bound: f64,
    /// The Holevo bound on `I(J;Y)`.
    pub upper_bound: f64,
}

impl MetricsRow {
    /// The seven tabulated quantities in display order:
    /// `H(Y), S(ρ_Y), C, H(Y|J), χ, I(J;Y), D_Y`.
    pub fn seven(&self) -> [f64; 7] {
        [
            self.h_y,
            self.s_rho_y,
            self.coherence,
            self.h_y_given_j,
            self.chi,
            self.mutual_information,
            self.discord,
        ]
    }

    pub const COLUMN_NAMES: [&'static str; 7] =
        ["H(Y)", "S(rho_Y)", "C", "H(Y|J)", "chi", "I(J;Y)", "D_Y"];

    pub fn is_finite(&self) -> bool {
        self.seven().iter().all(|x| x.is_finite())
            && self.irrealism.is_finite()
            && self.lower_bound.is_finite()
            && self.upper_bound.is_finite()
    }
}

/// Shannon entropy in bits with `0 log 0 = 0`.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// Treat tiny negative rounding as zero; anything more negative is a failure.
fn clamp_nonnegative(what: &'static str, x: f64) -> Result<f64> {
    if x >= 0.0 {
        Ok(x)
    } else if x >= -tolerance::CLAMP {
        Ok(0.0)
    } else {
        Err(Error::CrossCheck {
            what,
            first: x,
            second: 0.0,
        })
    }
}

fn measured_view(e: &ClassEnsemble) -> Result<Cow<'_, ClassEnsemble>> {
    if e.is_fully_measured() {
        Ok(Cow::Borrowed(e))
    } else {
        Ok(Cow::Owned(e.reduce_to_measured()?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShannonQuantities {
    pub h_y: f64,
    pub h_y_given_j: f64,
    pub mutual_information: f64,
}

/// `H(Y)`, `H(Y|J) = Σ_j p_j H(diag σ_j)` and `I(J;Y) = H(Y) - H(Y|J)`.
pub fn shannon_quantities(e: &ClassEnsemble) -> Result<ShannonQuantities> {
    let e = measured_view(e)?;
    let pmf = e.diagonal_distribution();
    let h_y = shannon_entropy(&pmf.outcome_marginal());
    let h_y_given_j: f64 = e
        .classes()
        .iter()
        .map(|c| {
            let diag: Vec<f64> = c
                .state
                .real_diagonal()
                .into_iter()
                .map(|d| d.max(0.0))
                .collect();
            c.weight * shannon_entropy(&diag)
        })
        .sum();
    let mutual_information = clamp_nonnegative("mutual information", h_y - h_y_given_j)?;
    Ok(ShannonQuantities {
        h_y,
        h_y_given_j,
        mutual_information,
    })
}

/// Spectral data computed once per ensemble.
struct Spectra {
    s_rho_y: f64,
    /// `Σ_j p_j S(σ_j)`.
    mean_class_entropy: f64,
}

fn spectra(e: &ClassEnsemble) -> Result<Spectra> {
    let s_rho_y = von_neumann_entropy(&e.mix())?;
    let mut mean_class_entropy = 0.0;
    for c in e.classes() {
        mean_class_entropy += c.weight * von_neumann_entropy(&c.state)?;
    }
    Ok(Spectra {
        s_rho_y,
        mean_class_entropy,
    })
}

/// Holevo quantity `S(Σ p_j σ_j) - Σ p_j S(σ_j)`.
pub fn holevo(e: &ClassEnsemble) -> Result<f64> {
    let e = measured_view(e)?;
    let sp = spectra(&e)?;
    clamp_nonnegative("Holevo quantity", sp.s_rho_y - sp.mean_class_entropy)
}

/// Relative entropy of coherence `H(Y) - S(ρ_Y)`.
pub fn coherence(e: &ClassEnsemble) -> Result<f64> {
    let e = measured_view(e)?;
    let h_y = shannon_entropy(&e.diagonal_distribution().outcome_marginal());
    let s = von_neumann_entropy(&e.mix())?;
    clamp_nonnegative("coherence", h_y - s)
}

/// Discord of the class ensemble with the computational-basis measurement.
///
/// Evaluated as `χ - I(J;Y)` and cross-checked against
/// `S(ρ_Y) - S(ρ_JY) + H(J|Y)` with `S(ρ_JY) = H(J) + Σ p_j S(σ_j)`.
pub fn discord_fixed_basis(e: &ClassEnsemble) -> Result<f64> {
    Ok(analyze(e)?.discord)
}

/// `C + D_Y`.
pub fn irrealism(e: &ClassEnsemble) -> Result<f64> {
    Ok(analyze(e)?.irrealism)
}

/// Fano-type bounds on the success probability for a uniform class variable.
///
/// Returns `(upper, lower)` with `upper = (I + 1) / log2 |J|` and
/// `lower = 2^{I - log2 |J|}`.
pub fn fano_bounds(mutual_information: f64, class_count: usize) -> Result<(f64, f64)> {
    if class_count < 2 {
        return Err(Error::OutOfRange {
            what: "class count",
            value: class_count,
            range: ">= 2".into(),
        });
    }
    let log_j = (class_count as f64).log2();
    Ok((
        (mutual_information + 1.0) / log_j,
        (mutual_information - log_j).exp2(),
    ))
}

/// Every quantity of a [`MetricsRow`] with internal consistency checks.
pub fn analyze(e: &ClassEnsemble) -> Result<MetricsRow> {
    let e = measured_view(e)?;
    let sp = spectra(&e)?;
    let sh = shannon_quantities(&e)?;
    let pmf = e.diagonal_distribution();

    let chi = clamp_nonnegative("Holevo quantity", sp.s_rho_y - sp.mean_class_entropy)?;
    let coherence = clamp_nonnegative("coherence", sh.h_y - sp.s_rho_y)?;

    // Route (a): identity with the Holevo quantity.
    let via_identity = chi - sh.mutual_information;
    // Route (b): definition through the joint entropy of the cq-state and
    // the post-measurement conditional entropy H(J|Y) = H(J,Y) - H(Y).
    let h_j = shannon_entropy(&pmf.class_marginal());
    let h_jy = shannon_entropy(&pmf.probs.iter().flatten().copied().collect::<Vec<_>>());
    let s_joint = h_j + sp.mean_class_entropy;
    let via_definition = sp.s_rho_y - s_joint + (h_jy - sh.h_y);
    if (via_identity - via_definition).abs() > tolerance::DISCORD_FAILURE {
        return Err(Error::CrossCheck {
            what: "discord formulas",
            first: via_identity,
            second: via_definition,
        });
    }
    let discord = clamp_nonnegative("discord", via_identity)?;

    let lower_bound = sp.s_rho_y - sh.h_y_given_j;
    let irrealism = coherence + discord;
    if (irrealism - (chi - lower_bound)).abs() > tolerance::DISCORD_AGREEMENT {
        return Err(Error::CrossCheck {
            what: "irrealism vs bound gap",
            first: irrealism,
            second: chi - lower_bound,
        });
    }
    let row = MetricsRow {
        h_y: sh.h_y,
        s_rho_y: sp.s_rho_y,
        coherence,
        h_y_given_j: sh.h_y_given_j,
        chi,
        mutual_information: sh.mutual_information,
        discord,
        irrealism,
        lower_bound,
        upper_bound: chi,
    };
    if !row.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(row)
}

/// Both discord routes, for callers that want to inspect the agreement.
pub fn discord_routes(e: &ClassEnsemble) -> Result<(f64, f64)> {
    let e = measured_view(e)?;
    let sp = spectra(&e)?;
    let sh = shannon_quantities(&e)?;
    let pmf = e.diagonal_distribution();
    let chi = sp.s_rho_y - sp.mean_class_entropy;
    let h_j = shannon_entropy(&pmf.class_marginal());
    let h_jy = shannon_entropy(&pmf.probs.iter().flatten().copied().collect::<Vec<_>>());
    Ok((
        chi - sh.mutual_information,
        sp.s_rho_y - (h_j + sp.mean_class_entropy) + (h_jy - sh.h_y),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densemat::{basis_vector, ComplexMatrix};
    use crate::ensembles::ClassState;

    fn class(label: usize, weight: f64, state: ComplexMatrix) -> ClassState {
        ClassState {
            label,
            weight,
            state,
        }
    }

    #[test]
    fn identical_states_carry_no_information() {
        let s = ComplexMatrix::from_real(2, 2, &[0.5, 0.3, 0.3, 0.5]).unwrap();
        let e =
            ClassEnsemble::on_qubits(vec![class(0, 0.4, s.clone()), class(1, 0.6, s)], 1).unwrap();
        let row = analyze(&e).unwrap();
        assert!(row.chi.abs() < 1e-12);
        assert!(row.mutual_information.abs() < 1e-12);
        assert!(row.discord.abs() < 1e-12);
    }

    #[test]
    fn uniform_diagonals_give_zero_mutual_information() {
        let u = ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        let d = ComplexMatrix::from_real(2, 2, &[0.5, -0.5, -0.5, 0.5]).unwrap();
        let e = ClassEnsemble::on_qubits(vec![class(0, 0.5, u), class(1, 0.5, d)], 1).unwrap();
        let sh = shannon_quantities(&e).unwrap();
        assert!(sh.mutual_information.abs() < 1e-12);
        // Pure orthogonal states: chi = S(ρ_Y) = 1, all of it discord.
        let row = analyze(&e).unwrap();
        assert!((row.chi - 1.0).abs() < 1e-12);
        assert!((row.discord - 1.0).abs() < 1e-12);
    }

    #[test]
    fn classical_ensemble_has_no_discord_or_coherence() {
        let e = ClassEnsemble::on_qubits(
            vec![
                class(0, 0.3, ComplexMatrix::from_real_diagonal(&[0.9, 0.1])),
                class(1, 0.7, ComplexMatrix::from_real_diagonal(&[0.2, 0.8])),
            ],
            1,
        )
        .unwrap();
        let row = analyze(&e).unwrap();
        assert!(row.discord < 1e-12);
        assert!(row.coherence < 1e-12);
        assert!(row.irrealism < 1e-12);
    }

    #[test]
    fn uniform_superposition_has_full_coherence() {
        for n in 1..=3 {
            let dim = 1 << n;
            let amp = 1.0 / (dim as f64).sqrt();
            let v = vec![crate::densemat::Complex64::new(amp, 0.0); dim];
            let e =
                ClassEnsemble::on_qubits(vec![class(0, 1.0, ComplexMatrix::outer(&v))], n).unwrap();
            assert!((coherence(&e).unwrap() - n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn pure_states_chi_equals_entropy() {
        let plus = crate::densemat::gates::hadamard()
            .apply(&basis_vector(2, 0))
            .unwrap();
        let e = ClassEnsemble::on_qubits(
            vec![
                class(0, 0.5, ComplexMatrix::outer(&basis_vector(2, 0))),
                class(1, 0.5, ComplexMatrix::outer(&plus)),
            ],
            1,
        )
        .unwrap();
        let row = analyze(&e).unwrap();
        assert!((row.chi - row.s_rho_y).abs() < 1e-12);
        let (a, b) = discord_routes(&e).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn fano_bounds_values() {
        let (_, lower) = fano_bounds(2.0, 4).unwrap();
        assert!((lower - 1.0).abs() < 1e-15);
        let (upper, lower) = fano_bounds(0.0, 2).unwrap();
        assert!((lower - 0.5).abs() < 1e-15);
        assert!((upper - 1.0).abs() < 1e-15);
        let (_, lower) = fano_bounds(1.0, 2).unwrap();
        assert!((lower - 1.0).abs() < 1e-15);
        assert!(fano_bounds(0.0, 1).is_err());
    }

    #[test]
    fn shannon_entropy_conventions() {
        assert_eq!(shannon_entropy(&[1.0, 0.0]), 0.0);
        assert!((shannon_entropy(&[0.25; 4]) - 2.0).abs() < 1e-15);
    }
}

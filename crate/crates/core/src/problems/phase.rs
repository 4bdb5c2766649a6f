use std::f64::consts::PI;

use num_complex::Complex64;

use super::{checked_dim, OracleProblem};
use crate::densemat::{hermitian_eigenvalues, spectral_entropy, ComplexMatrix};
use crate::ensembles::StageLabel;
use crate::infometrics::{shannon_entropy, MetricsRow};
use crate::{limits, Error, Result};

/// Phase oracles `U_f|k> = e^{2πi f e(k)}|k>` with `f` uniform on `[0, 1)`,
/// classified by which interval `[j/2^n, (j+1)/2^n)` contains `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFamily {
    bits: usize,
    qubits: usize,
    exponents: Vec<i64>,
}

impl PhaseFamily {
    /// The standard oracle on `qubits` qubits: `e(k) = k`.
    pub fn standard(bits: usize, qubits: usize) -> Result<Self> {
        let dim = checked_dim(&vec![2; qubits])?;
        Ok(Self {
            bits,
            qubits,
            exponents: (0..dim as i64).collect(),
        })
    }

    /// Precision `n`: the number of classes is `2^n`.
    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn class_count(&self) -> usize {
        1 << self.bits
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    /// Diagonal of `U_f`.
    pub fn diagonal(&self, f: f64) -> Vec<Complex64> {
        self.exponents
            .iter()
            .map(|&e| Complex64::from_polar(1.0, 2.0 * PI * f * e as f64))
            .collect()
    }

    /// `2^n ∫_{j/2^n}^{(j+1)/2^n} e^{2πifd} df`.
    pub fn interval_average(&self, j: usize, d: i64) -> Complex64 {
        let width = 1.0 / self.class_count() as f64;
        if d == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let (a, b) = (j as f64 * width, (j + 1) as f64 * width);
        let w = 2.0 * PI * d as f64;
        let diff = Complex64::from_polar(1.0, w * b) - Complex64::from_polar(1.0, w * a);
        diff / Complex64::new(0.0, w * width)
    }

    /// `U_f^{⊗t}` as a phase family: exponents of a tuple add.
    pub fn tensor_power(&self, t: usize) -> Result<Self> {
        let qubits = self.qubits * t;
        let dim = checked_dim(&vec![2; qubits])?;
        let d = self.exponents.len();
        let exponents = (0..dim)
            .map(|mut x| {
                let mut e = 0;
                for _ in 0..t {
                    e += self.exponents[x % d];
                    x /= d;
                }
                e
            })
            .collect();
        Ok(Self {
            bits: self.bits,
            qubits,
            exponents,
        })
    }
}

/// Phase estimation with `n` bits of precision on a `t`-qubit register.
pub fn build_phase_estimation(n: usize, t: usize) -> Result<OracleProblem> {
    let max_t = limits::current().phase_max_t;
    if !(2..=8).contains(&n) {
        return Err(Error::OutOfRange {
            what: "phase precision bits",
            value: n,
            range: "2..=8".into(),
        });
    }
    if t < n || t > max_t {
        return Err(Error::OutOfRange {
            what: "phase register qubits",
            value: t,
            range: format!("{n}..={max_t}"),
        });
    }
    OracleProblem::phase(format!("phase-{n}-{t}"), PhaseFamily::standard(n, t)?)
}

/// Class-averaged post-query state
/// `σ_j[k,k'] = ψ[k] ψ[k']^* · 2^n ∫_{A_j} e^{2πif(e(k)-e(k'))} df`.
pub fn phase_post_query_state(
    family: &PhaseFamily,
    j: usize,
    psi1: &[Complex64],
) -> Result<ComplexMatrix> {
    let dim = family.exponents.len();
    if psi1.len() != dim {
        return Err(Error::DimensionMismatch {
            context: "phase pre-query state",
            expected: dim,
            found: psi1.len(),
        });
    }
    if j >= family.class_count() {
        return Err(Error::OutOfRange {
            what: "phase class",
            value: j,
            range: format!("0..{}", family.class_count()),
        });
    }
    let e = &family.exponents;
    let mut out = ComplexMatrix::zeros(dim, dim);
    for k in 0..dim {
        for l in k..dim {
            let z = psi1[k] * psi1[l].conj() * family.interval_average(j, e[k] - e[l]);
            out[(k, l)] = z;
            out[(l, k)] = z.conj();
        }
    }
    Ok(out)
}

/// Class state `σ_j` at `stage` for pre-query unitary `v` (applied to
/// `|0...0>`) and post-query unitary `w`.
pub fn sigma_phase_analytic(
    family: &PhaseFamily,
    j: usize,
    stage: StageLabel,
    v: &ComplexMatrix,
    w: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let psi1 = v.column(0);
    match stage {
        StageLabel::PreQuery => Ok(ComplexMatrix::outer(&psi1)),
        StageLabel::PostQuery => phase_post_query_state(family, j, &psi1),
        StageLabel::Final => phase_post_query_state(family, j, &psi1)?.conjugate_by(w),
    }
}

/// Final-stage quantities of standard phase estimation (`V = H^{⊗t}`,
/// `W` the inverse Fourier transform) without building every class state.
///
/// Class states differ only by the diagonal phase `diag(e^{2πijk/2^n})`, so
/// they share one spectrum, and their final diagonals are cyclic shifts of
/// one another. The mixture over `[0, 1)` is `I/2^t`.
pub fn phase_final_metrics(n: usize, t: usize) -> Result<MetricsRow> {
    let problem = build_phase_estimation(n, t)?;
    let super::OracleFamily::PhaseIntervals(family) = problem.family() else {
        unreachable!("phase builder returns a phase family")
    };
    let dim = 1usize << t;
    let norm = 1.0 / dim as f64;
    // c(d) = σ_0[k, k - d] for d in -(dim-1)..dim, stored at d + dim - 1.
    let c: Vec<Complex64> = (-(dim as i64 - 1)..dim as i64)
        .map(|d| family.interval_average(0, d) * norm)
        .collect();
    let at = |d: i64| c[(d + dim as i64 - 1) as usize];
    let sigma = ComplexMatrix::from_fn(dim, dim, |k, l| at(k as i64 - l as i64));
    let class_entropy = spectral_entropy(hermitian_eigenvalues(&sigma)?);
    let diag: Vec<f64> = (0..dim)
        .map(|l| {
            let s: Complex64 = (-(dim as i64 - 1)..dim as i64)
                .map(|d| {
                    let angle = -2.0 * PI * (l as i64 * d).rem_euclid(dim as i64) as f64 * norm;
                    Complex64::from_polar((dim as i64 - d.abs()) as f64, angle) * at(d)
                })
                .sum();
            s.re * norm
        })
        .collect();
    let h_y_given_j = shannon_entropy(&diag);
    let t = t as f64;
    let chi = t - class_entropy;
    let info = t - h_y_given_j;
    let discord = h_y_given_j - class_entropy;
    Ok(MetricsRow {
        h_y: t,
        s_rho_y: t,
        coherence: 0.0,
        h_y_given_j,
        chi,
        mutual_information: info,
        discord,
        irrealism: discord,
        lower_bound: info,
        upper_bound: chi,
    })
}

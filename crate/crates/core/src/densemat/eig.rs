use nalgebra::DMatrix;
use num_complex::Complex64;

use super::ComplexMatrix;
use crate::{random, tolerance, Error, Result};

/// Eigen-decomposition `A = Q diag(λ) Q^†` of a Hermitian matrix.
///
/// Eigenvalues ascend. Each eigenvector's first non-negligible component is
/// real and positive.
#[derive(Debug, Clone)]
pub struct HermitianEigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Column `i` is the eigenvector for `eigenvalues[i]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenDecomposition {
    pub fn eigenvector(&self, i: usize) -> Vec<Complex64> {
        self.eigenvectors.column(i)
    }

    /// `Q diag(λ) Q^†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let q = &self.eigenvectors;
        let d = ComplexMatrix::from_real_diagonal(&self.eigenvalues);
        &(q * &d) * &q.adjoint()
    }
}

fn check_hermitian(a: &ComplexMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            context: "eigendecomposition of non-square matrix",
            expected: a.rows(),
            found: a.cols(),
        });
    }
    let defect = a.hermitian_defect();
    if defect > tolerance::HERMITIAN * a.max_abs().max(1.0) {
        return Err(Error::NotHermitian { defect });
    }
    Ok(())
}

fn to_nalgebra(h: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(h.rows(), h.cols(), |r, c| h[(r, c)])
}

fn all_finite<'a>(values: impl IntoIterator<Item = &'a Complex64>) -> bool {
    values
        .into_iter()
        .all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Attempts before giving up: the matrix itself, then fixed pseudo-random
/// unitary conjugates of it.
const ATTEMPTS: u64 = 4;

/// nalgebra's implicit QR step can return NaN on exactly structured inputs
/// (block patterns of equal entries, isolated entries near underflow). The
/// spectrum is unitarily invariant, so such inputs are retried as
/// `V A V^†` with eigenvectors mapped back through `V^†`.
fn raw_eig(a: &ComplexMatrix, vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    check_hermitian(a)?;
    let h = a.hermitian_part();
    let n = h.rows();
    for attempt in 0..ATTEMPTS {
        let v = (attempt > 0).then(|| random::haar_unitary(n, &mut random::rng(attempt)));
        let m = match &v {
            Some(v) => h.conjugate_by(v)?.hermitian_part(),
            None => h.clone(),
        };
        if vectors {
            let eig = to_nalgebra(&m).symmetric_eigen();
            if eig.eigenvalues.iter().all(|x| x.is_finite()) && all_finite(eig.eigenvectors.iter())
            {
                let q = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, c)]);
                let q = match &v {
                    Some(v) => v.adjoint().matmul(&q)?,
                    None => q,
                };
                return Ok((eig.eigenvalues.iter().copied().collect(), Some(q)));
            }
        } else {
            let values = to_nalgebra(&m).symmetric_eigenvalues();
            if values.iter().all(|x| x.is_finite()) {
                return Ok((values.iter().copied().collect(), None));
            }
        }
    }
    Err(Error::NonFinite)
}

pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEigenDecomposition> {
    let (values, q) = raw_eig(a, true)?;
    let q = q.expect("vectors requested");
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let mut columns = Vec::with_capacity(n);
    for &i in &order {
        let mut v = q.column(i);
        let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if let Some(lead) = v.iter().find(|z| z.norm() > 1e-8 * scale).copied() {
            let phase = lead.conj() / lead.norm();
            for z in &mut v {
                *z *= phase;
            }
        }
        columns.push(v);
    }
    Ok(HermitianEigenDecomposition {
        eigenvalues,
        eigenvectors: ComplexMatrix::from_columns(&columns)?,
    })
}

/// Ascending eigenvalues only; cheaper than [`hermitian_eig`].
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let (mut values, _) = raw_eig(a, false)?;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// `-Σ λ log2 λ` over entries above the eigenvalue floor (`0 log 0 = 0`).
pub fn spectral_entropy(values: impl IntoIterator<Item = f64>) -> f64 {
    values
        .into_iter()
        .filter(|&x| x > tolerance::EIGEN_FLOOR)
        .map(|x| -x * x.log2())
        .sum()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > tolerance::TRACE || tr.im.abs() > tolerance::TRACE {
        return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
    }
    let values = hermitian_eigenvalues(rho)?;
    if let Some(&low) = values.first() {
        if low < tolerance::NEGATIVE_EIGEN {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {low:.3e}"
            )));
        }
    }
    Ok(spectral_entropy(values).max(0.0))
}

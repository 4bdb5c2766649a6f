//! Optimality certificates and measurement-basis optimization.

mod discord;
mod search;

use rand::Rng;
use serde::Serialize;

pub use self::discord::{i_max, minimize_discord, DiscordOptions, DiscordResult, IMaxResult};
pub use self::search::{search_psi1, SearchResult};
use crate::densemat::{hermitian_eig, ComplexMatrix};
use crate::ensembles::ClassEnsemble;
use crate::{random, tolerance, Error, Result};

/// Which of the two sufficient conditions for a zero-discord measurement hold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalityCertificate {
    pub orthogonal_support: bool,
    pub pairwise_commuting: bool,
    /// `tr(σ_j σ_j')`.
    pub gram_overlaps: Vec<Vec<f64>>,
    /// `max |[σ_j, σ_j']|`.
    pub commutator_norms: Vec<Vec<f64>>,
}

/// A projective measurement in the basis given by the rows of `unitary`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    pub unitary: ComplexMatrix,
}

impl MeasurementBasis {
    pub fn new(unitary: ComplexMatrix) -> Result<Self> {
        unitary.ensure_unitary()?;
        Ok(Self { unitary })
    }

    pub fn computational(dim: usize) -> Self {
        Self {
            unitary: ComplexMatrix::identity(dim),
        }
    }

    /// Ensemble as seen by this measurement: `σ_j -> W σ_j W^†`.
    pub fn rotate(&self, e: &ClassEnsemble) -> Result<ClassEnsemble> {
        e.conjugate_by(&self.unitary)
    }
}

/// Pairwise overlaps and commutators of the class states.
///
/// A pair counts as commuting when its commutator is below the commutator
/// tolerance or its overlap is below the orthogonality tolerance, since
/// states with orthogonal support commute exactly.
pub fn certify(e: &ClassEnsemble) -> Result<OptimalityCertificate> {
    let e = e.reduce_to_measured()?;
    let states: Vec<&ComplexMatrix> = e.classes().iter().map(|c| &c.state).collect();
    let n = states.len();
    let mut gram = vec![vec![0.0; n]; n];
    let mut comm = vec![vec![0.0; n]; n];
    let mut orthogonal = true;
    let mut commuting = true;
    for a in 0..n {
        for b in a..n {
            let overlap = states[a].trace_product(states[b]).re;
            let c = if a == b {
                0.0
            } else {
                states[a].commutator(states[b])?.max_abs()
            };
            gram[a][b] = overlap;
            gram[b][a] = overlap;
            comm[a][b] = c;
            comm[b][a] = c;
            if a != b {
                let orth = overlap <= tolerance::ORTHOGONAL_OVERLAP;
                orthogonal &= orth;
                commuting &= orth || c <= tolerance::COMMUTATOR;
            }
        }
    }
    Ok(OptimalityCertificate {
        orthogonal_support: orthogonal,
        pairwise_commuting: commuting,
        gram_overlaps: gram,
        commutator_norms: comm,
    })
}

fn cluster_tolerance(values: &[f64]) -> f64 {
    1e-7 * values.iter().fold(1.0f64, |m, v| m.max(v.abs()))
}

/// Orthonormal columns diagonalizing every matrix in `mats` restricted to
/// the span of `basis` (columns of an isometry).
fn diagonalize_block(
    mats: &[ComplexMatrix],
    basis: &ComplexMatrix,
    rng: &mut impl Rng,
    depth: usize,
) -> Result<Vec<Vec<num_complex::Complex64>>> {
    let k = basis.cols();
    let basis_adj = basis.adjoint();
    let projected: Vec<ComplexMatrix> = mats
        .iter()
        .map(|m| basis_adj.matmul(&m.matmul(basis)?))
        .collect::<Result<_>>()?;
    if k == 1 {
        return Ok(vec![basis.column(0)]);
    }
    let scalar = projected.iter().all(|p| {
        let mean = p.trace().re / k as f64;
        (p - &ComplexMatrix::identity(k).scale_real(mean)).max_abs() <= tolerance::DIAGONALIZED
    });
    if scalar || depth > 16 {
        return Ok((0..k).map(|c| basis.column(c)).collect());
    }
    let mut combo = ComplexMatrix::zeros(k, k);
    for p in &projected {
        combo.add_scaled(rng.random_range(1.0..2.0), p);
    }
    let eig = hermitian_eig(&combo.hermitian_part())?;
    let tol = cluster_tolerance(&eig.eigenvalues);
    let rotated = basis.matmul(&eig.eigenvectors)?;
    let mut out = Vec::with_capacity(k);
    let mut start = 0;
    while start < k {
        let mut end = start + 1;
        while end < k && eig.eigenvalues[end] - eig.eigenvalues[end - 1] <= tol {
            end += 1;
        }
        let cols: Vec<Vec<_>> = (start..end).map(|c| rotated.column(c)).collect();
        if end - start == 1 {
            out.extend(cols);
        } else {
            let sub = ComplexMatrix::from_columns(&cols)?;
            out.extend(diagonalize_block(mats, &sub, rng, depth + 1)?);
        }
        start = end;
    }
    Ok(out)
}

/// A basis in which every class state is diagonal, for pairwise commuting
/// class states.
///
/// Eigendecomposes a random positive combination of the states and splits
/// degenerate eigenspaces with fresh random combinations.
pub fn simultaneous_diagonalizer(e: &ClassEnsemble, seed: u64) -> Result<MeasurementBasis> {
    let e = e.reduce_to_measured()?;
    let cert = certify(&e)?;
    if !cert.pairwise_commuting {
        let worst = cert
            .commutator_norms
            .iter()
            .flatten()
            .fold(0.0f64, |m, &x| m.max(x));
        return Err(Error::NotCommuting { norm: worst });
    }
    let mats: Vec<ComplexMatrix> = e.classes().iter().map(|c| c.state.clone()).collect();
    let mut rng = random::rng(seed);
    let cols = diagonalize_block(&mats, &ComplexMatrix::identity(e.dim()), &mut rng, 0)?;
    MeasurementBasis::new(ComplexMatrix::from_columns(&cols)?.adjoint())
}

/// Largest number of entries above tolerance in any row.
pub fn max_row_support(v: &ComplexMatrix) -> usize {
    (0..v.rows())
        .map(|r| {
            v.row(r)
                .iter()
                .filter(|z| z.norm() > tolerance::STRUCTURAL_ZERO)
                .count()
        })
        .max()
        .unwrap_or(0)
}

/// True when every row and column has exactly one nonzero entry.
pub fn monomial_check(v: &ComplexMatrix) -> bool {
    let t = v.transpose();
    v.is_square()
        && (0..v.rows()).all(|r| {
            v.row(r)
                .iter()
                .filter(|z| z.norm() > tolerance::STRUCTURAL_ZERO)
                .count()
                == 1
        })
        && (0..t.rows()).all(|r| {
            t.row(r)
                .iter()
                .filter(|z| z.norm() > tolerance::STRUCTURAL_ZERO)
                .count()
                == 1
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densemat::gates;
    use crate::ensembles::{ClassState, StageLabel};
    use crate::hspkit::HiddenSubgroupInstance;

    fn ensemble(states: Vec<ComplexMatrix>, qubits: usize) -> ClassEnsemble {
        let w = 1.0 / states.len() as f64;
        let classes = states
            .into_iter()
            .enumerate()
            .map(|(label, state)| ClassState {
                label,
                weight: w,
                state,
            })
            .collect();
        ClassEnsemble::on_qubits(classes, qubits).unwrap()
    }

    #[test]
    fn single_class_is_fully_certified() {
        let e = ensemble(vec![ComplexMatrix::identity(2).scale_real(0.5)], 1);
        let c = certify(&e).unwrap();
        assert!(c.orthogonal_support && c.pairwise_commuting);
    }

    #[test]
    fn simon_post_query_commutes_but_overlaps() {
        let e = HiddenSubgroupInstance::simon(2)
            .unwrap()
            .ensemble(StageLabel::PostQuery)
            .unwrap();
        let c = certify(&e).unwrap();
        assert!(c.pairwise_commuting);
        assert!(!c.orthogonal_support);
    }

    #[test]
    fn diagonalizer_recovers_hidden_basis() {
        let mut r = random::rng(5);
        let u = random::haar_unitary(4, &mut r);
        let states: Vec<ComplexMatrix> = (0..3)
            .map(|_| {
                let d = random::random_weights(4, &mut r);
                ComplexMatrix::from_real_diagonal(&d)
                    .conjugate_by(&u)
                    .unwrap()
            })
            .collect();
        let e = ensemble(states, 2);
        let w = simultaneous_diagonalizer(&e, 1).unwrap();
        for c in w.rotate(&e).unwrap().classes() {
            assert!(c.state.max_off_diagonal() <= 1e-8);
        }
    }

    #[test]
    fn diagonalizer_handles_degeneracy() {
        // Two states sharing a two-dimensional eigenspace that only the
        // second state splits.
        let u = gates::hadamard_n(2).unwrap();
        let a = ComplexMatrix::from_real_diagonal(&[0.5, 0.25, 0.25, 0.0])
            .conjugate_by(&u)
            .unwrap();
        let b = ComplexMatrix::from_real_diagonal(&[0.1, 0.6, 0.3, 0.0])
            .conjugate_by(&u)
            .unwrap();
        let e = ensemble(vec![a, b], 2);
        let w = simultaneous_diagonalizer(&e, 9).unwrap();
        for c in w.rotate(&e).unwrap().classes() {
            assert!(c.state.max_off_diagonal() <= 1e-8);
        }
    }

    #[test]
    fn non_commuting_input_is_rejected() {
        let plus = ComplexMatrix::outer(&gates::hadamard().column(0));
        let zero = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let e = ensemble(vec![plus, zero], 1);
        assert!(matches!(
            simultaneous_diagonalizer(&e, 0),
            Err(Error::NotCommuting { .. })
        ));
    }

    #[test]
    fn monomial_examples() {
        assert!(monomial_check(&ComplexMatrix::identity(4)));
        assert!(monomial_check(&gates::permutation(&[2, 0, 1])));
        assert!(!monomial_check(&gates::hadamard()));
        let h3 = gates::hadamard_n(3).unwrap();
        assert!(!monomial_check(&h3));
        assert_eq!(max_row_support(&h3), 8);
        assert_eq!(max_row_support(&gates::fourier(8)), 8);
    }
}

//! Standard gates and transforms.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use super::{tensor_power, ComplexMatrix};
use crate::Result;

pub fn hadamard() -> ComplexMatrix {
    ComplexMatrix::from_real(
        2,
        2,
        &[FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
    )
    .expect("2x2")
}

/// `H^{⊗n}`; the 1x1 identity for `n = 0`.
pub fn hadamard_n(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Ok(ComplexMatrix::identity(1));
    }
    tensor_power(&hadamard(), n)
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2")
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).expect("2x2")
}

/// Fourier transform on `Z/dim`: `<k|F|l> = e^{2πi kl/dim} / sqrt(dim)`.
pub fn fourier(dim: usize) -> ComplexMatrix {
    let norm = 1.0 / (dim as f64).sqrt();
    ComplexMatrix::from_fn(dim, dim, |k, l| {
        let angle = 2.0 * PI * ((k * l) % dim) as f64 / dim as f64;
        Complex64::from_polar(norm, angle)
    })
}

/// Inverse Fourier transform on `Z/dim`: `<k|W|l> = e^{-2πi kl/dim} / sqrt(dim)`.
pub fn inverse_fourier(dim: usize) -> ComplexMatrix {
    fourier(dim).conj()
}

/// Permutation matrix sending basis state `j` to `image[j]`.
pub fn permutation(image: &[usize]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(image.len(), image.len());
    for (j, &i) in image.iter().enumerate() {
        m[(i, j)] = super::ONE;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourier_is_unitary_and_inverse() {
        for dim in [2, 3, 8] {
            let f = fourier(dim);
            assert!(f.is_unitary(1e-12));
            let prod = &f * &inverse_fourier(dim);
            assert!((&prod - &ComplexMatrix::identity(dim)).max_abs() < 1e-12);
        }
    }

    #[test]
    fn fourier_on_two_is_hadamard() {
        assert!((&fourier(2) - &hadamard()).max_abs() < 1e-15);
    }
}

//! Dense complex linear algebra for states and unitaries.
//!
//! Matrices are stored row-major. Multi-partite spaces are ordered with
//! subsystem 0 as the most significant digit of the basis index, so for
//! qubits the basis state `|b_0 b_1 ... b_{n-1}>` has index
//! `b_0 2^{n-1} + ... + b_{n-1}`.

mod eig;
pub mod gates;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

pub use num_complex::Complex64;

pub use self::eig::{
    hermitian_eig, hermitian_eigenvalues, spectral_entropy, von_neumann_entropy,
    HermitianEigenDecomposition,
};
use crate::{limits, tolerance, Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    /// Build from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix entries",
                expected: rows * cols,
                found: data.len(),
            });
        }
        let m = Self { rows, cols, data };
        m.ensure_finite()?;
        Ok(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            values.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
        }
        m
    }

    /// The projector `|v><v|` (not normalized).
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), v.len(), |r, c| v[r] * v[c].conj())
    }

    /// Columns given as vectors.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch {
                context: "matrix columns",
                expected: rows,
                found: bad.len(),
            });
        }
        Ok(Self::from_fn(rows, columns.len(), |r, c| columns[c][r]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .collect()
    }

    /// Real parts of the diagonal, e.g. outcome probabilities of a state.
    pub fn real_diagonal(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].re)
            .collect()
    }

    pub fn trace(&self) -> Complex64 {
        self.diagonal().into_iter().sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn ensure_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest modulus among entries off the main diagonal.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..self.rows {
            for c in 0..self.cols {
                if r != c {
                    worst = worst.max(self[(r, c)].norm());
                }
            }
        }
        worst
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// `self += s * other`, shapes must agree.
    pub fn add_scaled(&mut self, s: f64, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    /// `self += s |v><v|`.
    pub fn add_outer(&mut self, s: f64, v: &[Complex64]) {
        assert!(self.is_square() && self.rows == v.len());
        let n = self.rows;
        for r in 0..n {
            let vr = v[r] * s;
            let row = &mut self.data[r * n..(r + 1) * n];
            for (a, vc) in row.iter_mut().zip(v) {
                *a += vr * vc.conj();
            }
        }
    }

    /// Checked product.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        let n = other.cols;
        for r in 0..self.rows {
            let out_row = &mut out.data[r * n..(r + 1) * n];
            for (k, &a) in self.row(r).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `u self u^†`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.matmul(self)?.matmul(&u.adjoint())
    }

    /// `self other - other self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(&self.matmul(other)? - &other.matmul(self)?)
    }

    /// `max |a - a^†|`.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0_f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    /// `max |u^†u - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let gram = self
            .adjoint()
            .matmul(self)
            .expect("square matrix product is defined");
        (&gram - &Self::identity(self.rows)).max_abs()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub(crate) fn ensure_unitary(&self) -> Result<()> {
        let defect = self.unitarity_defect();
        if defect > tolerance::UNITARY {
            return Err(Error::NotUnitary { defect });
        }
        Ok(())
    }

    /// `(a + a^†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| {
            (self[(r, c)] + self[(c, r)].conj()) * 0.5
        })
    }

    /// `tr(self other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert!(self.is_square() && other.is_square() && self.rows == other.rows);
        let n = self.rows;
        let mut acc = ZERO;
        for r in 0..n {
            for c in 0..n {
                acc += self.data[r * n + c] * other.data[c * n + r];
            }
        }
        acc
    }

    /// Sub-block on the given row and column index sets.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |r, c| self[(rows[r], cols[c])])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on shape mismatch; use [`ComplexMatrix::matmul`] for a checked product.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix shapes must agree")
    }
}

/// Kronecker product `a ⊗ b`.
///
/// Fails when either resulting side would exceed the configured dimension cap.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows.checked_mul(b.rows).ok_or(Error::DimensionCap {
        requested: usize::MAX,
        cap: limits::current().dim_cap,
    })?;
    let cols = a.cols.checked_mul(b.cols).ok_or(Error::DimensionCap {
        requested: usize::MAX,
        cap: limits::current().dim_cap,
    })?;
    limits::check_dim(rows.max(cols))?;
    let mut data = Vec::with_capacity(rows * cols);
    for ar in 0..a.rows {
        for br in 0..b.rows {
            for ac in 0..a.cols {
                let x = a[(ar, ac)];
                data.extend(b.row(br).iter().map(|&y| x * y));
            }
        }
    }
    Ok(ComplexMatrix { rows, cols, data })
}

/// `a ⊗ a ⊗ ... ⊗ a` with `power >= 1` factors.
pub fn tensor_power(a: &ComplexMatrix, power: usize) -> Result<ComplexMatrix> {
    assert!(power >= 1, "tensor power needs at least one factor");
    let mut acc = a.clone();
    for _ in 1..power {
        acc = tensor(&acc, a)?;
    }
    Ok(acc)
}

/// Kronecker product of state vectors.
pub fn tensor_vectors(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| x * y))
        .collect()
}

/// Index bookkeeping for splitting a multi-partite basis into kept and traced parts.
struct Split {
    kept_dim: usize,
    traced_dim: usize,
    /// `full[k * traced_dim + t]` is the full index of kept index `k`, traced index `t`.
    full: Vec<usize>,
}

fn split_subsystems(dims: &[usize], keep: &[usize]) -> Result<Split> {
    if keep.is_empty() {
        return Err(Error::InvalidSubsystems("keep set is empty".into()));
    }
    if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::InvalidSubsystems(format!(
            "subsystem {bad} out of range for {} subsystems",
            dims.len()
        )));
    }
    if dims.contains(&0) {
        return Err(Error::InvalidSubsystems(
            "zero-dimensional subsystem".into(),
        ));
    }
    let mut kept_flags = vec![false; dims.len()];
    for &k in keep {
        if kept_flags[k] {
            return Err(Error::InvalidSubsystems(format!("subsystem {k} repeated")));
        }
        kept_flags[k] = true;
    }
    let total: usize = dims.iter().product();
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let traced_dim = total / kept_dim;

    // Strides of each subsystem in the full index.
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    // Kept subsystems keep their relative order (sorted), so the kept
    // register is again most-significant-first.
    let mut kept_sorted = keep.to_vec();
    kept_sorted.sort_unstable();
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept_flags[*i]).collect();

    let offsets = |subs: &[usize], mut idx: usize| -> usize {
        let mut off = 0;
        for &s in subs.iter().rev() {
            off += (idx % dims[s]) * strides[s];
            idx /= dims[s];
        }
        off
    };
    let kept_offsets: Vec<usize> = (0..kept_dim).map(|k| offsets(&kept_sorted, k)).collect();
    let traced_offsets: Vec<usize> = (0..traced_dim).map(|t| offsets(&traced, t)).collect();
    let mut full = Vec::with_capacity(total);
    for &ko in &kept_offsets {
        full.extend(traced_offsets.iter().map(|&to| ko + to));
    }
    Ok(Split {
        kept_dim,
        traced_dim,
        full,
    })
}

/// Trace out every subsystem not listed in `keep`.
///
/// `dims` lists the subsystem dimensions, most significant first; the kept
/// subsystems appear in the result in ascending order.
pub fn partial_trace(rho: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    if !rho.is_square() {
        return Err(Error::DimensionMismatch {
            context: "partial trace of non-square matrix",
            expected: rho.rows,
            found: rho.cols,
        });
    }
    let total: usize = dims.iter().product();
    if total != rho.rows {
        return Err(Error::DimensionMismatch {
            context: "partial trace subsystem dimensions",
            expected: rho.rows,
            found: total,
        });
    }
    let split = split_subsystems(dims, keep)?;
    let (kd, td) = (split.kept_dim, split.traced_dim);
    let mut out = ComplexMatrix::zeros(kd, kd);
    for a in 0..kd {
        let row_a = &split.full[a * td..(a + 1) * td];
        for b in 0..kd {
            let row_b = &split.full[b * td..(b + 1) * td];
            out[(a, b)] = row_a.iter().zip(row_b).map(|(&i, &j)| rho[(i, j)]).sum();
        }
    }
    Ok(out)
}

/// Reduced density matrix of the pure state `|psi>` on the kept subsystems.
pub fn reduce_pure(psi: &[Complex64], dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if total != psi.len() {
        return Err(Error::DimensionMismatch {
            context: "pure-state reduction subsystem dimensions",
            expected: psi.len(),
            found: total,
        });
    }
    let mut out = ComplexMatrix::zeros(0, 0);
    accumulate_reduced_pure(&mut out, 1.0, psi, dims, keep)?;
    Ok(out)
}

/// `acc += weight * Tr_traced |psi><psi|`; an empty `acc` is resized.
pub fn accumulate_reduced_pure(
    acc: &mut ComplexMatrix,
    weight: f64,
    psi: &[Complex64],
    dims: &[usize],
    keep: &[usize],
) -> Result<()> {
    let split = split_subsystems(dims, keep)?;
    let (kd, td) = (split.kept_dim, split.traced_dim);
    if acc.rows == 0 {
        *acc = ComplexMatrix::zeros(kd, kd);
    }
    if acc.rows != kd || acc.cols != kd {
        return Err(Error::DimensionMismatch {
            context: "reduced-state accumulator",
            expected: kd,
            found: acc.rows,
        });
    }
    // Reshape psi into a kd x td matrix M; the reduced state is M M^†.
    let m: Vec<Complex64> = split.full.iter().map(|&i| psi[i]).collect();
    for a in 0..kd {
        let ma = &m[a * td..(a + 1) * td];
        for b in a..kd {
            let mb = &m[b * td..(b + 1) * td];
            let z: Complex64 = ma
                .iter()
                .zip(mb)
                .map(|(x, y)| x * y.conj())
                .sum::<Complex64>()
                * weight;
            acc[(a, b)] += z;
            if a != b {
                acc[(b, a)] += z.conj();
            }
        }
    }
    Ok(())
}

pub fn vector_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Computational basis vector `|index>` in dimension `dim`.
pub fn basis_vector(dim: usize, index: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; dim];
    v[index] = ONE;
    v
}

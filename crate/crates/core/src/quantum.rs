//! Dimension-tagged density matrices and the subsystem maps that act on them.
//!
//! Composite indices are row-major over the subsystem list: for dims
//! `(d_A, d_B, d_C)` the basis state `|a b c⟩` sits at `(a·d_B + b)·d_C + c`.

use num_complex::Complex64;

use crate::error::{domain, shape, Result};
use crate::matrix::{ComplexMatrix, HERMITIAN_TOL, ZERO};

/// Trace deviation allowed for a valid state.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue allowed for a valid state.
pub const POSITIVITY_TOL: f64 = -1e-9;

/// A (possibly unnormalized) operator on a tensor product of subsystems.
///
/// Construction only checks the shape; use [`DensityMatrix::validate`] for
/// the physical conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    dims: Vec<usize>,
}

/// Residuals of the three density-matrix conditions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidationReport {
    pub hermiticity_residual: f64,
    pub trace_deviation: f64,
    pub min_eigenvalue: f64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.hermiticity_residual <= HERMITIAN_TOL
            && self.trace_deviation <= TRACE_TOL
            && self.min_eigenvalue >= POSITIVITY_TOL
    }
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(shape("subsystem dimension list is empty"));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(shape(format!("subsystem dimension {d} is below 2")));
        }
        let total: usize = dims.iter().product();
        if !mat.is_square() || mat.rows() != total {
            return Err(shape(format!(
                "a {}x{} matrix does not match subsystem dims {:?}",
                mat.rows(),
                mat.cols(),
                dims
            )));
        }
        Ok(Self { mat, dims })
    }

    /// Like [`DensityMatrix::new`], but also rejects states that fail validation.
    pub fn new_checked(mat: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let rho = Self::new(mat, dims)?;
        let report = rho.validate()?;
        if !report.is_valid() {
            return Err(domain(format!("not a density matrix: {report:?}")));
        }
        Ok(rho)
    }

    /// Maximally mixed state on the given subsystems.
    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let n: usize = dims.iter().product();
        Self::new(ComplexMatrix::identity(n).scale_real(1.0 / n as f64), dims)
    }

    /// `|ψ⟩⟨ψ|` for a state vector (normalized by the caller).
    pub fn pure(psi: &[Complex64], dims: Vec<usize>) -> Result<Self> {
        Self::new(ComplexMatrix::outer(psi, psi), dims)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    /// Tensor product `self ⊗ other`, concatenating the subsystem lists.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let dims = self.dims.iter().chain(&other.dims).copied().collect();
        DensityMatrix { mat: self.mat.kron(&other.mat), dims }
    }

    pub fn validate(&self) -> Result<ValidationReport> {
        let hermiticity_residual = self.mat.hermiticity_residual();
        let trace_deviation = (self.mat.trace() - Complex64::new(1.0, 0.0)).norm();
        // Eigenvalues of the Hermitian part, so the report is defined even for
        // inputs that fail the Hermiticity check.
        let herm =
            ComplexMatrix::from_fn(self.dim(), self.dim(), |i, j| (self.mat[(i, j)] + self.mat[(j, i)].conj()) * 0.5);
        let min_eigenvalue = herm.hermitian_eig()?.values[0];
        Ok(ValidationReport { hermiticity_residual, trace_deviation, min_eigenvalue })
    }

    /// Trace out subsystem `index`.
    pub fn partial_trace(&self, index: usize) -> Result<DensityMatrix> {
        if index >= self.dims.len() {
            return Err(domain(format!("subsystem index {index} out of range for {} subsystems", self.dims.len())));
        }
        if self.dims.len() == 1 {
            return Err(domain("cannot trace out the only subsystem"));
        }
        let left: usize = self.dims[..index].iter().product();
        let mid = self.dims[index];
        let right: usize = self.dims[index + 1..].iter().product();
        let n = left * right;
        let mut out = ComplexMatrix::zeros(n, n);
        for l in 0..left {
            for r in 0..right {
                for lp in 0..left {
                    for rp in 0..right {
                        let mut acc = ZERO;
                        for m in 0..mid {
                            acc += self.mat[((l * mid + m) * right + r, (lp * mid + m) * right + rp)];
                        }
                        out[(l * right + r, lp * right + rp)] = acc;
                    }
                }
            }
        }
        let mut dims = self.dims.clone();
        dims.remove(index);
        Ok(DensityMatrix { mat: out, dims })
    }

    fn bipartite_dims(&self) -> Result<(usize, usize)> {
        match self.dims[..] {
            [a, b] => Ok((a, b)),
            _ => Err(domain(format!("expected a bipartite state, got dims {:?}", self.dims))),
        }
    }

    /// Transpose the indices of subsystem `index` (0 or 1) of a bipartite operator.
    pub fn partial_transpose(&self, index: usize) -> Result<ComplexMatrix> {
        let (da, db) = self.bipartite_dims()?;
        if index > 1 {
            return Err(domain(format!("subsystem index {index} out of range for a bipartite state")));
        }
        let n = da * db;
        Ok(ComplexMatrix::from_fn(n, n, |row, col| {
            let (i, j) = (row / db, row % db);
            let (k, l) = (col / db, col % db);
            if index == 1 {
                self.mat[(i * db + l, k * db + j)]
            } else {
                self.mat[(k * db + j, i * db + l)]
            }
        }))
    }

    /// `(ρ_A, ρ_B)` of a bipartite state.
    pub fn reduced_pair(&self) -> Result<(DensityMatrix, DensityMatrix)> {
        self.bipartite_dims()?;
        Ok((self.partial_trace(1)?, self.partial_trace(0)?))
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.mat[(i, j)] * self.mat[(j, i)]).re;
            }
        }
        acc
    }
}

/// Realignment of a bipartite operator: the `(i j),(k l)` entry moves to
/// `(i k),(j l)`, giving a `d_A² x d_B²` matrix.
pub fn realign(m: &ComplexMatrix, (da, db): (usize, usize)) -> Result<ComplexMatrix> {
    let n = da * db;
    if !m.is_square() || m.rows() != n {
        return Err(shape(format!("cannot realign a {}x{} matrix with dims ({da}, {db})", m.rows(), m.cols())));
    }
    Ok(ComplexMatrix::from_fn(da * da, db * db, |row, col| {
        let (i, k) = (row / da, row % da);
        let (j, l) = (col / db, col % db);
        m[(i * db + j, k * db + l)]
    }))
}

/// Inverse of [`realign`].
pub fn unrealign(r: &ComplexMatrix, (da, db): (usize, usize)) -> Result<ComplexMatrix> {
    if r.rows() != da * da || r.cols() != db * db {
        return Err(shape(format!("a {}x{} matrix is not a realigned ({da}, {db}) operator", r.rows(), r.cols())));
    }
    let n = da * db;
    Ok(ComplexMatrix::from_fn(n, n, |row, col| {
        let (i, j) = (row / db, row % db);
        let (k, l) = (col / db, col % db);
        r[(i * da + k, j * db + l)]
    }))
}

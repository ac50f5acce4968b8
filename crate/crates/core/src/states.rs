//! The three-parameter two-qutrit family, the environment qutrit and the
//! initial composite state.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, shape, Result};
use crate::matrix::ComplexMatrix;
use crate::quantum::DensityMatrix;

/// Normalization tolerance for environment amplitudes.
pub const AMPLITUDE_TOL: f64 = 1e-12;

/// `(ε₁, ε₂, ε₃)`; all strictly positive and finite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JurkowskiParams {
    eps1: f64,
    eps2: f64,
    eps3: f64,
}

impl JurkowskiParams {
    pub fn new(eps1: f64, eps2: f64, eps3: f64) -> Result<Self> {
        for (name, v) in [("eps1", eps1), ("eps2", eps2), ("eps3", eps3)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(Self { eps1, eps2, eps3 })
    }

    /// `ε₁ = ε₂ = ε₃ = ε`.
    pub fn uniform(eps: f64) -> Result<Self> {
        Self::new(eps, eps, eps)
    }

    pub fn eps1(&self) -> f64 {
        self.eps1
    }

    pub fn eps2(&self) -> f64 {
        self.eps2
    }

    pub fn eps3(&self) -> f64 {
        self.eps3
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.eps1, self.eps2, self.eps3]
    }

    /// `N = 3 + Σ (εᵢ + 1/εᵢ)`.
    pub fn normalization(&self) -> f64 {
        3.0 + self.as_array().iter().map(|e| e + 1.0 / e).sum::<f64>()
    }

    /// Diagonal of the unnormalized matrix in the `|ab⟩` basis.
    fn diagonal(&self) -> [f64; 9] {
        let Self { eps1, eps2, eps3 } = *self;
        [1.0, eps1, 1.0 / eps3, 1.0 / eps1, 1.0, eps2, eps3, 1.0 / eps2, 1.0]
    }
}

/// Basis positions of `|00⟩, |11⟩, |22⟩`, which carry the coherences.
pub(crate) const COHERENT: [usize; 3] = [0, 4, 8];

/// The bound-entangled family: a `|00⟩+|11⟩+|22⟩` coherence block plus
/// ε-weighted populations, divided by [`JurkowskiParams::normalization`].
pub fn jurkowski_state(params: &JurkowskiParams) -> DensityMatrix {
    let norm = params.normalization();
    let mut m = ComplexMatrix::from_real_diagonal(&params.diagonal());
    for &i in &COHERENT {
        for &j in &COHERENT {
            m[(i, j)] = Complex64::new(1.0, 0.0);
        }
    }
    DensityMatrix::new(m.scale_real(1.0 / norm), vec![3, 3]).expect("9x9 matrix with dims (3, 3)")
}

/// Pure state `c₀|0⟩ + c₁|1⟩ + c₂|2⟩` of the environment qutrit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvAmplitudes {
    amps: [Complex64; 3],
}

impl EnvAmplitudes {
    pub fn new(c0: Complex64, c1: Complex64, c2: Complex64) -> Result<Self> {
        let amps = [c0, c1, c2];
        if amps.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(domain("environment amplitudes must be finite"));
        }
        let norm: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > AMPLITUDE_TOL {
            return Err(domain(format!("environment amplitudes are not normalized (|c|² sums to {norm})")));
        }
        Ok(Self { amps })
    }

    pub fn from_real(c0: f64, c1: f64, c2: f64) -> Result<Self> {
        Self::new(c0.into(), c1.into(), c2.into())
    }

    /// Rescales arbitrary amplitudes to unit norm.
    pub fn normalized(c0: Complex64, c1: Complex64, c2: Complex64) -> Result<Self> {
        let norm = (c0.norm_sqr() + c1.norm_sqr() + c2.norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(domain("cannot normalize a zero amplitude vector"));
        }
        Self::new(c0 / norm, c1 / norm, c2 / norm)
    }

    /// Computational basis state `|k⟩`.
    pub fn basis(k: usize) -> Result<Self> {
        if k > 2 {
            return Err(shape(format!("qutrit basis index {k} out of range")));
        }
        let mut amps = [Complex64::new(0.0, 0.0); 3];
        amps[k] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub fn amplitudes(&self) -> [Complex64; 3] {
        self.amps
    }
}

impl Default for EnvAmplitudes {
    fn default() -> Self {
        Self::basis(0).expect("basis index 0")
    }
}

/// `|ψ⟩⟨ψ|` for the environment qutrit.
pub fn env_state(amps: &EnvAmplitudes) -> DensityMatrix {
    DensityMatrix::pure(&amps.amps, vec![3]).expect("3x3 projector with dims (3)")
}

/// `ρ_AB ⊗ ρ_C` with dims `(3, 3, 3)`.
pub fn compose_initial(ab: &DensityMatrix, c: &DensityMatrix) -> Result<DensityMatrix> {
    if ab.dims() != [3, 3] {
        return Err(shape(format!("pair state must have dims [3, 3], got {:?}", ab.dims())));
    }
    if c.dims() != [3] {
        return Err(shape(format!("environment state must have dims [3], got {:?}", c.dims())));
    }
    Ok(ab.tensor(c))
}

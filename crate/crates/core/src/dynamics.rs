//! DM Hamiltonian, unitary evolution of the three-qutrit state, reduction to
//! the pair, and the analytic reduced matrix used to cross-check it.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, shape, Error, Result};
use crate::matrix::{expm_hermitian_generator, ComplexMatrix, HermitianEigen, ZERO};
use crate::quantum::DensityMatrix;
use crate::states::{compose_initial, env_state, jurkowski_state, EnvAmplitudes, JurkowskiParams};

/// Largest closed-form residual accepted by [`resolve_generator`].
pub const RESOLUTION_TOL: f64 = 1e-6;

/// Which 3x3 "X" and "Y" matrices enter `D (X ⊗ Y − Y ⊗ X)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    /// Gell-Mann λ₁, λ₂: Pauli X, Y on the `{|0⟩, |1⟩}` levels.
    GellMann12,
    /// Spin-1 `S_x`, `S_y` with `1/√2` off-diagonals.
    #[default]
    Spin1,
}

impl Generator {
    pub const ALL: [Generator; 2] = [Generator::GellMann12, Generator::Spin1];

    pub fn x(self) -> ComplexMatrix {
        let r = |x: f64| Complex64::new(x, 0.0);
        match self {
            Generator::GellMann12 => ComplexMatrix::from_fn(3, 3, |i, j| match (i, j) {
                (0, 1) | (1, 0) => r(1.0),
                _ => ZERO,
            }),
            Generator::Spin1 => {
                ComplexMatrix::from_fn(3, 3, |i, j| if i.abs_diff(j) == 1 { r(1.0 / SQRT_2) } else { ZERO })
            }
        }
    }

    pub fn y(self) -> ComplexMatrix {
        let im = |x: f64| Complex64::new(0.0, x);
        match self {
            Generator::GellMann12 => ComplexMatrix::from_fn(3, 3, |i, j| match (i, j) {
                (0, 1) => im(-1.0),
                (1, 0) => im(1.0),
                _ => ZERO,
            }),
            Generator::Spin1 => ComplexMatrix::from_fn(3, 3, |i, j| {
                if j == i + 1 {
                    im(-1.0 / SQRT_2)
                } else if i == j + 1 {
                    im(1.0 / SQRT_2)
                } else {
                    ZERO
                }
            }),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::GellMann12 => "gellmann",
            Generator::Spin1 => "spin1",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gellmann" | "gell-mann" | "gellmann12" => Ok(Generator::GellMann12),
            "spin1" | "spin-1" => Ok(Generator::Spin1),
            other => Err(domain(format!("unknown generator {other:?}"))),
        }
    }
}

/// Which two of the three qutrits (A, B, C) the 9x9 coupling acts on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingPlacement {
    /// `H ⊗ I_C`: the coupling acts on the first two tensor factors.
    /// This reproduces the analytic reduced matrix and its independence of
    /// the environment amplitudes.
    #[default]
    Pair,
    /// `I_A ⊗ H`: the coupling acts on B and the environment qutrit C.
    EnvironmentCoupled,
}

impl FromStr for CouplingPlacement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pair" | "ab" => Ok(CouplingPlacement::Pair),
            "env" | "bc" => Ok(CouplingPlacement::EnvironmentCoupled),
            other => Err(domain(format!("unknown coupling placement {other:?}"))),
        }
    }
}

/// Coupling strength `D` (z-axis DM vector) and the operator choice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DmHamiltonianSpec {
    pub strength: f64,
    pub generator: Generator,
    pub placement: CouplingPlacement,
}

impl DmHamiltonianSpec {
    pub fn new(strength: f64, generator: Generator) -> Result<Self> {
        if !strength.is_finite() {
            return Err(domain(format!("coupling strength must be finite, got {strength}")));
        }
        Ok(Self { strength, generator, placement: CouplingPlacement::default() })
    }

    pub fn with_placement(mut self, placement: CouplingPlacement) -> Self {
        self.placement = placement;
        self
    }
}

/// `D (X ⊗ Y − Y ⊗ X)` as a 9x9 Hermitian matrix.
pub fn dm_hamiltonian(spec: &DmHamiltonianSpec) -> ComplexMatrix {
    let (x, y) = (spec.generator.x(), spec.generator.y());
    (&x.kron(&y) - &y.kron(&x)).scale_real(spec.strength)
}

/// Embed a two-qutrit operator into the A ⊗ B ⊗ C space.
pub fn lift_to_tripartite(h: &ComplexMatrix, placement: CouplingPlacement) -> Result<ComplexMatrix> {
    if h.rows() != 9 || h.cols() != 9 {
        return Err(shape(format!("expected a 9x9 two-qutrit operator, got {}x{}", h.rows(), h.cols())));
    }
    let id = ComplexMatrix::identity(3);
    Ok(match placement {
        CouplingPlacement::Pair => h.kron(&id),
        CouplingPlacement::EnvironmentCoupled => id.kron(h),
    })
}

/// `U(t) = exp(−i H t)`.
pub fn propagator(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    expm_hermitian_generator(h, t)
}

/// Precomputed evolution for one `(params, env, spec)` triple; the lifted
/// Hamiltonian is diagonalized once and reused for every time point.
#[derive(Clone, Debug)]
pub struct Evolution {
    initial: DensityMatrix,
    eig: HermitianEigen,
}

impl Evolution {
    pub fn new(params: &JurkowskiParams, env: &EnvAmplitudes, spec: &DmHamiltonianSpec) -> Result<Self> {
        let initial = compose_initial(&jurkowski_state(params), &env_state(env))?;
        let h = lift_to_tripartite(&dm_hamiltonian(spec), spec.placement)?;
        Ok(Self { initial, eig: h.hermitian_eig()? })
    }

    /// `U(t) ρ(0) U(t)†` on all three qutrits.
    pub fn composite_at(&self, t: f64) -> Result<DensityMatrix> {
        let u = self.eig.unitary(t);
        let rho = u.matmul(self.initial.matrix())?.matmul(&u.adjoint())?;
        DensityMatrix::new(rho, self.initial.dims().to_vec())
    }

    /// Reduced pair state, tracing out the environment qutrit.
    pub fn reduced_at(&self, t: f64) -> Result<DensityMatrix> {
        self.composite_at(t)?.partial_trace(2)
    }
}

/// Evolve `ρ_AB(ε) ⊗ |ψ⟩⟨ψ|` for time `t` and trace out the environment.
pub fn evolve_and_reduce(
    params: &JurkowskiParams,
    env: &EnvAmplitudes,
    spec: &DmHamiltonianSpec,
    t: f64,
) -> Result<DensityMatrix> {
    Evolution::new(params, env, spec)?.reduced_at(t)
}

/// Inputs of the analytic reduced matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedFormParams {
    pub params: JurkowskiParams,
    pub strength: f64,
    pub t: f64,
}

impl ClosedFormParams {
    /// `p = ε₁ε₂ε₃ / (ε₂ε₃ + ε₁²ε₂ε₃ + ε₁(ε₃ + ε₂(1 + ε₃(3 + ε₂ + ε₃)))) = 1/N`.
    pub fn p(&self) -> f64 {
        let [e1, e2, e3] = self.params.as_array();
        e1 * e2 * e3 / (e2 * e3 + e1 * e1 * e2 * e3 + e1 * (e3 + e2 * (1.0 + e3 * (3.0 + e2 + e3))))
    }
}

/// Analytic reduced pair state for the spin-1 generator with the coupling
/// on the pair. Nonzero entries lie in three blocks: `{|01⟩,|10⟩}`,
/// `{|12⟩,|21⟩}` and `{|00⟩,|02⟩,|11⟩,|20⟩,|22⟩}`.
pub fn closed_form_reduced(cf: &ClosedFormParams) -> DensityMatrix {
    let [e1, e2, e3] = cf.params.as_array();
    let p = cf.p();
    let dt = cf.strength * cf.t;
    let (s1, c1) = dt.sin_cos();
    let (s2, c2) = (SQRT_2 * dt).sin_cos();
    let sin_2dt = (2.0 * dt).sin();

    let mut m = ComplexMatrix::zeros(9, 9);
    let mut put = |pairs: &[(usize, usize)], v: f64| {
        for &(i, j) in pairs {
            m[(i - 1, j - 1)] = Complex64::new(v * p, 0.0);
        }
    };

    put(&[(1, 1), (1, 9), (9, 1), (9, 9)], 1.0);
    put(&[(1, 3), (3, 1), (3, 9), (9, 3)], s2 / SQRT_2);
    put(&[(1, 7), (7, 1), (7, 9), (9, 7)], -s2 / SQRT_2);
    put(&[(1, 5), (5, 1), (5, 9), (9, 5)], c2);

    // ε₁ and ε₂ two-level blocks rotate at frequency D.
    let two_level = |e: f64| {
        ((s1 * s1 + e * e * c1 * c1) / e, (1.0 - e * e) * sin_2dt / (2.0 * e), (c1 * c1 + e * e * s1 * s1) / e)
    };
    let (d22, o24, d44) = two_level(e1);
    put(&[(2, 2)], d22);
    put(&[(2, 4), (4, 2)], o24);
    put(&[(4, 4)], d44);
    let (d66, o68, d88) = two_level(e2);
    put(&[(6, 6)], d66);
    put(&[(6, 8), (8, 6)], o68);
    put(&[(8, 8)], d88);

    // ε₃ enters the five-level block through |02⟩, |11⟩, |20⟩ at frequency √2 D.
    let minus = 1.0 - c2 * (e3 - 1.0) + e3;
    let plus = 1.0 + c2 * (e3 - 1.0) + e3;
    put(&[(3, 3)], minus * minus / (4.0 * e3));
    put(&[(7, 7)], plus * plus / (4.0 * e3));
    put(&[(3, 7), (7, 3)], (e3 - 1.0).powi(2) * s2 * s2 / (4.0 * e3));
    put(&[(3, 5), (5, 3)], (e3 - 1.0) * minus * s2 / (2.0 * SQRT_2 * e3));
    put(&[(5, 7), (7, 5)], (e3 - 1.0) * plus * s2 / (2.0 * SQRT_2 * e3));
    put(&[(5, 5)], c2 * c2 + s2 * s2 * (e3 + 1.0 / e3) / 2.0);

    DensityMatrix::new(m, vec![3, 3]).expect("9x9 matrix with dims (3, 3)")
}

/// Outcome of [`resolve_generator`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorResolution {
    pub selected: Generator,
    /// Max entrywise deviation from the closed form, per variant.
    pub gell_mann_residual: f64,
    pub spin1_residual: f64,
}

impl GeneratorResolution {
    pub fn residual(&self, g: Generator) -> f64 {
        match g {
            Generator::GellMann12 => self.gell_mann_residual,
            Generator::Spin1 => self.spin1_residual,
        }
    }
}

/// Pick the generator whose numerical evolution reproduces the analytic
/// reduced matrix at the given sample times.
pub fn resolve_generator(params: &JurkowskiParams, strength: f64, sample_times: &[f64]) -> Result<GeneratorResolution> {
    let mut distinct: Vec<f64> = sample_times.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(domain(format!("need at least 3 distinct sample times, got {}", distinct.len())));
    }

    let env = EnvAmplitudes::default();
    let residual = |generator: Generator| -> Result<f64> {
        let spec = DmHamiltonianSpec::new(strength, generator)?;
        let evo = Evolution::new(params, &env, &spec)?;
        let mut worst = 0.0f64;
        for &t in &distinct {
            let numeric = evo.reduced_at(t)?;
            let analytic = closed_form_reduced(&ClosedFormParams { params: *params, strength, t });
            worst = worst.max(numeric.matrix().max_abs_diff(analytic.matrix()));
        }
        Ok(worst)
    };
    let gell_mann = residual(Generator::GellMann12)?;
    let spin1 = residual(Generator::Spin1)?;

    let selected = if spin1 <= gell_mann { Generator::Spin1 } else { Generator::GellMann12 };
    let best = spin1.min(gell_mann);
    if best > RESOLUTION_TOL {
        return Err(Error::Resolution {
            message: format!("no generator reproduces the closed form within {RESOLUTION_TOL:e}"),
            gell_mann,
            spin1,
        });
    }
    Ok(GeneratorResolution { selected, gell_mann_residual: gell_mann, spin1_residual: spin1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(e1: f64, e2: f64, e3: f64) -> JurkowskiParams {
        JurkowskiParams::new(e1, e2, e3).unwrap()
    }

    #[test]
    fn generators_are_hermitian_and_traceless() {
        for g in Generator::ALL {
            for m in [g.x(), g.y()] {
                assert!(m.hermiticity_residual() == 0.0);
                assert!(m.trace().norm() == 0.0);
            }
        }
        // Spin-1 commutator [Sx, Sy] = i Sz.
        let g = Generator::Spin1;
        let comm = &(&g.x() * &g.y()) - &(&g.y() * &g.x());
        let sz = ComplexMatrix::from_real_diagonal(&[1.0, 0.0, -1.0]).scale(Complex64::new(0.0, 1.0));
        assert!(comm.max_abs_diff(&sz) < 1e-15);
    }

    #[test]
    fn hamiltonian_basics() {
        for g in Generator::ALL {
            let zero = dm_hamiltonian(&DmHamiltonianSpec::new(0.0, g).unwrap());
            assert_eq!(zero.frobenius_norm(), 0.0);
            let h = dm_hamiltonian(&DmHamiltonianSpec::new(0.37, g).unwrap());
            assert!(h.hermiticity_residual() < 1e-14);
            assert!(h.trace().norm() < 1e-14);
        }
        assert!(DmHamiltonianSpec::new(f64::NAN, Generator::Spin1).is_err());
    }

    #[test]
    fn lift_shapes() {
        let h = dm_hamiltonian(&DmHamiltonianSpec::new(1.0, Generator::Spin1).unwrap());
        for placement in [CouplingPlacement::Pair, CouplingPlacement::EnvironmentCoupled] {
            let big = lift_to_tripartite(&h, placement).unwrap();
            assert_eq!(big.rows(), 27);
            assert!(big.hermiticity_residual() < 1e-14);
            let zero = lift_to_tripartite(&ComplexMatrix::zeros(9, 9), placement).unwrap();
            assert_eq!(zero, ComplexMatrix::zeros(27, 27));
        }
        assert!(lift_to_tripartite(&ComplexMatrix::identity(3), CouplingPlacement::Pair).is_err());
    }

    #[test]
    fn p_matches_normalization() {
        let cf = ClosedFormParams { params: params(1.0, 1.0, 1.0), strength: 0.2, t: 0.0 };
        assert!((cf.p() - 1.0 / 9.0).abs() < 1e-15);
        for e in [(0.3, 2.0, 5.0), (1.0, 1.0, 0.5), (4.0, 0.1, 1.7)] {
            let p = params(e.0, e.1, e.2);
            let cf = ClosedFormParams { params: p, strength: 0.2, t: 0.0 };
            assert!((cf.p() - 1.0 / p.normalization()).abs() < 1e-15);
        }
    }

    #[test]
    fn printed_p_has_a_two_where_a_three_belongs() {
        // With "(2 + ε₂ + ε₃)" the separable point gives 1/8, not 1/9.
        let printed = |e1: f64, e2: f64, e3: f64| {
            e1 * e2 * e3 / (e2 * e3 + e1 * e1 * e2 * e3 + e1 * (e3 + e2 * (1.0 + e3 * (2.0 + e2 + e3))))
        };
        assert!((printed(1.0, 1.0, 1.0) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn closed_form_at_t0_is_the_initial_state() {
        for e in [(1.0, 1.0, 0.5), (0.3, 2.0, 5.0), (1.0, 0.1, 2.0)] {
            let p = params(e.0, e.1, e.2);
            let cf = closed_form_reduced(&ClosedFormParams { params: p, strength: 0.2, t: 0.0 });
            assert!(cf.matrix().max_abs_diff(jurkowski_state(&p).matrix()) < 1e-12);
        }
    }

    #[test]
    fn closed_form_is_a_state() {
        let cf = closed_form_reduced(&ClosedFormParams { params: params(0.4, 3.0, 0.2), strength: 0.3, t: 4.1 });
        let r = cf.validate().unwrap();
        assert!(r.is_valid(), "{r:?}");
    }

    #[test]
    fn closed_form_matches_numerics() {
        let p = params(1.0, 1.0, 0.5);
        let spec = DmHamiltonianSpec::new(0.2, Generator::Spin1).unwrap();
        let evo = Evolution::new(&p, &EnvAmplitudes::default(), &spec).unwrap();
        for t in [0.5, 1.0, 2.0, 5.0] {
            let cf = closed_form_reduced(&ClosedFormParams { params: p, strength: 0.2, t });
            assert!(evo.reduced_at(t).unwrap().matrix().max_abs_diff(cf.matrix()) < 1e-8);
        }
    }

    #[test]
    fn trivial_evolutions() {
        let p = params(1.0, 1.0, 0.3);
        let env = EnvAmplitudes::from_real(0.6, 0.0, 0.8).unwrap();
        let rho0 = jurkowski_state(&p);
        let still = DmHamiltonianSpec::new(0.0, Generator::Spin1).unwrap();
        assert!(evolve_and_reduce(&p, &env, &still, 13.0).unwrap().matrix().max_abs_diff(rho0.matrix()) < 1e-12);
        let spec = DmHamiltonianSpec::new(0.2, Generator::Spin1).unwrap();
        assert!(evolve_and_reduce(&p, &env, &spec, 0.0).unwrap().matrix().max_abs_diff(rho0.matrix()) < 1e-12);
    }

    #[test]
    fn propagator_basics() {
        let h = lift_to_tripartite(
            &dm_hamiltonian(&DmHamiltonianSpec::new(0.2, Generator::Spin1).unwrap()),
            CouplingPlacement::Pair,
        )
        .unwrap();
        assert!(propagator(&h, 0.0).unwrap().max_abs_diff(&ComplexMatrix::identity(27)) < 1e-12);
        let u = propagator(&h, 22.0).unwrap();
        assert!((&u * &u.adjoint()).max_abs_diff(&ComplexMatrix::identity(27)) < 1e-10);
        assert!(propagator(&h, -22.0).unwrap().max_abs_diff(&u.adjoint()) < 1e-10);
    }

    #[test]
    fn resolution_prefers_spin1() {
        let p = params(1.0, 1.0, 0.5);
        let times = [0.5, 1.0, 2.0, 5.0];
        for d in [0.2, 0.4] {
            let r = resolve_generator(&p, d, &times).unwrap();
            assert_eq!(r.selected, Generator::Spin1);
            assert!(r.spin1_residual <= 1e-6);
            assert!(r.gell_mann_residual > r.spin1_residual);
        }
        assert!(matches!(resolve_generator(&p, 0.2, &[1.0, 1.0, 2.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn environment_coupled_placement_breaks_amplitude_independence() {
        let p = params(1.0, 1.0, 0.3);
        let spec = DmHamiltonianSpec::new(0.2, Generator::Spin1)
            .unwrap()
            .with_placement(CouplingPlacement::EnvironmentCoupled);
        let a = evolve_and_reduce(&p, &EnvAmplitudes::basis(0).unwrap(), &spec, 3.0).unwrap();
        let b = evolve_and_reduce(&p, &EnvAmplitudes::basis(2).unwrap(), &spec, 3.0).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) > 1e-2);
        // The closed form is out of reach too.
        let cf = closed_form_reduced(&ClosedFormParams { params: p, strength: 0.2, t: 3.0 });
        assert!(a.matrix().max_abs_diff(cf.matrix()) > 1e-3);
    }

    #[test]
    fn parse_names() {
        assert_eq!("spin1".parse::<Generator>().unwrap(), Generator::Spin1);
        assert_eq!("gellmann".parse::<Generator>().unwrap(), Generator::GellMann12);
        assert!("pauli".parse::<Generator>().is_err());
        assert_eq!("bc".parse::<CouplingPlacement>().unwrap(), CouplingPlacement::EnvironmentCoupled);
    }
}

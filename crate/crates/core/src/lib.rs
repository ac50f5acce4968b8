//! Entanglement dynamics of two-qutrit bound-entangled states.
//!
//! A qutrit pair prepared in the three-parameter family
//! [`jurkowski_state`] is evolved, together with an environment qutrit, by a
//! Dzyaloshinskii-Moriya coupling `D (X ⊗ Y − Y ⊗ X)`. After tracing out the
//! environment, free entanglement is measured by the [`negativity`] and
//! bound entanglement is detected by the [`ccnr_score`].
//!
//! ```
//! use qutrit_lab::{evolve_and_reduce, negativity, ccnr_score};
//! use qutrit_lab::{DmHamiltonianSpec, EnvAmplitudes, Generator, JurkowskiParams};
//!
//! let params = JurkowskiParams::new(1.0, 1.0, 0.3)?;
//! let spec = DmHamiltonianSpec::new(0.2, Generator::Spin1)?;
//! let rho = evolve_and_reduce(&params, &EnvAmplitudes::default(), &spec, 4.0)?;
//! assert!(negativity(&rho)? > 0.05);
//! assert!(ccnr_score(&rho)? > 0.0);
//! # Ok::<(), qutrit_lab::Error>(())
//! ```

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod matrix;
pub mod measures;
pub mod quantum;
pub mod states;

pub use num_complex::Complex64;

pub use dynamics::{
    closed_form_reduced, dm_hamiltonian, evolve_and_reduce, lift_to_tripartite, propagator, resolve_generator,
    ClosedFormParams, CouplingPlacement, DmHamiltonianSpec, Evolution, Generator, GeneratorResolution,
};
pub use error::{Error, Result};
pub use experiments::{
    emit_table, presets, run_sweep, write_table, CurveSummary, GeneratorChoice, OutputFormat, SweepCase, SweepConfig,
    SweepOutput, TimeSeriesRecord,
};
pub use matrix::{expm_hermitian_generator, ComplexMatrix, HermitianEigen};
pub use measures::{
    ccnr_score, classify, classify_with, negativity, realignment_score, scan_dsd, Classification, DsdEvent, DsdOptions,
    EntanglementScores,
};
pub use quantum::{realign, unrealign, DensityMatrix, ValidationReport};
pub use states::{compose_initial, env_state, jurkowski_state, EnvAmplitudes, JurkowskiParams};

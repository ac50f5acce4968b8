//! Fixtures shared by the benchmarks in `benches/`.

use qutrit_lab::{DmHamiltonianSpec, EnvAmplitudes, Evolution, Generator, JurkowskiParams, SweepCase, SweepConfig};

/// Case-1 state with ε₃ = 0.3 under spin-1 coupling of strength `d`.
pub fn case1_evolution(d: f64) -> Evolution {
    let params = JurkowskiParams::new(1.0, 1.0, 0.3).expect("valid parameters");
    let spec = DmHamiltonianSpec::new(d, Generator::Spin1).expect("finite strength");
    Evolution::new(&params, &EnvAmplitudes::default(), &spec).expect("decomposable Hamiltonian")
}

/// A Case-1 sweep over `curves` values of ε₃ with `steps` time samples each.
pub fn case1_sweep(curves: usize, steps: usize) -> SweepConfig {
    let grid = (0..curves).map(|k| JurkowskiParams::new(1.0, 1.0, 0.1 + 0.2 * k as f64).expect("positive")).collect();
    SweepConfig::new(SweepCase::Case1, grid, vec![0.2]).with_time_grid(30.0, steps)
}

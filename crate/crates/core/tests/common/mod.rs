//! Random inputs and brute-force reference routines shared by the
//! integration tests. Nothing here calls the library's fast paths.

#![allow(dead_code)]

use qutrit_lab::{Complex64, ComplexMatrix, DensityMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng))
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| random_complex(rng)).collect();
    ComplexMatrix::new(rows, cols, data).unwrap()
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let a = random_matrix(rng, n, n);
    ComplexMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5)
}

/// Haar-ish unitary by Gram-Schmidt on Gaussian columns.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n).map(|_| random_complex(rng)).collect();
        for u in &cols {
            let dot: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= dot * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// `G G† / Tr(G G†)` with `G` Gaussian of the given rank.
pub fn random_density(rng: &mut impl Rng, dims: &[usize], rank: usize) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let g = random_matrix(rng, n, rank);
    let m = naive_matmul(&g, &g.adjoint());
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr), dims.to_vec()).unwrap()
}

/// Random state of a single subsystem.
pub fn random_qudit(rng: &mut impl Rng, d: usize) -> DensityMatrix {
    random_density(rng, &[d], d)
}

pub fn random_amplitudes(rng: &mut impl Rng) -> [Complex64; 3] {
    let v = [random_complex(rng), random_complex(rng), random_complex(rng)];
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.map(|z| z / norm)
}

/// Triple loop product.
pub fn naive_matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(a.cols(), b.rows());
    ComplexMatrix::from_fn(a.rows(), b.cols(), |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..a.cols() {
            acc += a[(i, k)] * b[(k, j)];
        }
        acc
    })
}

fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

fn compose(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

/// Partial trace by enumerating every pair of multi-indices.
pub fn brute_partial_trace(rho: &ComplexMatrix, dims: &[usize], traced: usize) -> ComplexMatrix {
    let n: usize = dims.iter().product();
    let kept: Vec<usize> = dims.iter().enumerate().filter(|&(k, _)| k != traced).map(|(_, &d)| d).collect();
    let m: usize = kept.iter().product();
    let mut out = ComplexMatrix::zeros(m, m);
    for row in 0..n {
        let dr = digits(row, dims);
        for col in 0..n {
            let dc = digits(col, dims);
            if dr[traced] != dc[traced] {
                continue;
            }
            let strip = |d: &[usize]| -> Vec<usize> {
                d.iter().enumerate().filter(|&(k, _)| k != traced).map(|(_, &x)| x).collect()
            };
            let r = compose(&strip(&dr), &kept);
            let c = compose(&strip(&dc), &kept);
            out[(r, c)] += rho[(row, col)];
        }
    }
    out
}

/// Partial transpose on the second factor by explicit four-index loops.
pub fn brute_partial_transpose(rho: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(da * db, da * db);
    for i in 0..da {
        for j in 0..db {
            for k in 0..da {
                for l in 0..db {
                    out[(i * db + j, k * db + l)] = rho[(i * db + l, k * db + j)];
                }
            }
        }
    }
    out
}

pub fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().map(f64::abs).fold(0.0, f64::max)
}

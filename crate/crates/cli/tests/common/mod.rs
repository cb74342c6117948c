#![allow(dead_code)]

use std::path::PathBuf;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symcamel::projection::trial_seed;
use symcamel::{is_quantum_hermitian, is_quantum_spectrum, random_symplectic, robertson_schrodinger, CovarianceMatrix};

/// Seed of the search that produced `fixtures/rs_witness.json`.
pub const WITNESS_SEED: u64 = 0x5EED_2024;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures").join(name)
}

/// A covariance matrix with prescribed symplectic spectrum: `SᵀDS` with a
/// random symplectic `S`. Returns the matrix and the spectrum it was built from.
pub fn state_with_spectrum(
    n: usize,
    hbar: f64,
    lo: f64,
    hi: f64,
    spread: f64,
    rng: &mut ChaCha8Rng,
) -> (CovarianceMatrix, Vec<f64>) {
    let mut nu: Vec<f64> = (0..n).map(|_| hbar * rng.random_range(lo..hi)).collect();
    let s = random_symplectic(n, rng.random(), spread).unwrap();
    let sigma = CovarianceMatrix::from_williamson_form(&nu, &s, hbar).unwrap();
    nu.sort_by(f64::total_cmp);
    (sigma, nu)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// First two-mode state in a seeded search that satisfies the per-mode
/// Robertson–Schrödinger inequality yet violates the uncertainty principle.
pub fn search_rs_witness(seed: u64) -> (u64, CovarianceMatrix) {
    for trial in 0..100_000u64 {
        let mut r = rng(trial_seed(seed, trial));
        let (sigma, _) = state_with_spectrum(2, 1.0, 0.2, 1.2, 0.6, &mut r);
        let rs_ok = robertson_schrodinger(&sigma).iter().all(|&b| b);
        if rs_ok && !is_quantum_hermitian(&sigma) && !is_quantum_spectrum(&sigma).unwrap() {
            return (trial, sigma);
        }
    }
    panic!("no witness found");
}

pub fn to_input_json(sigma: &CovarianceMatrix) -> String {
    let m: &DMatrix<f64> = sigma.matrix();
    let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
    let doc = serde_json::json!({ "n": sigma.modes(), "hbar": sigma.hbar(), "sigma": rows });
    let mut s = serde_json::to_string_pretty(&doc).unwrap();
    s.push('\n');
    s
}

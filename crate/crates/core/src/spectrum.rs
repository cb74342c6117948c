//! Covariance matrices, symplectic spectra and the Williamson normal form.
//!
//! The symplectic eigenvalues `ν₁ ≤ … ≤ νₙ` of a positive definite `σ` are the
//! moduli of the eigenvalues `±iνⱼ` of `Ωσ`. The primary route works with the
//! skew-symmetric matrix `K = σ^{1/2} Ω σ^{1/2}`, which is similar to `Ωσ` but
//! normal, and brings it to canonical `2×2` blocks with an orthogonal `Q`.
//! The same `Q` yields the Williamson matrix `S = σ^{−1/2} Q D^{1/2}`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DMatrixView, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::symplectic::{omega, SymplecticMatrix};

/// Default relative asymmetry accepted on ingestion.
pub const SYMMETRY_TOL: f64 = 1e-9;
/// `σ` counts as positive definite when `λ_min(σ) > PD_TOL·‖σ‖_F`.
pub const PD_TOL: f64 = 1e-12;
/// Williamson results with a larger relative residual are rejected.
pub const WILLIAMSON_FAILURE_TOL: f64 = 1e-6;

/// A symmetric `2n×2n` covariance matrix together with the value of ħ it is
/// expressed in. Blocks follow `σ = [[σ_XX, σ_XP], [σ_XPᵀ, σ_PP]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    sigma: DMatrix<f64>,
    hbar: f64,
}

impl CovarianceMatrix {
    /// Accepts `sigma` if its relative asymmetry is within [`SYMMETRY_TOL`],
    /// then symmetrizes it.
    pub fn new(sigma: DMatrix<f64>, hbar: f64) -> Result<Self> {
        Self::with_symmetry_tolerance(sigma, hbar, SYMMETRY_TOL)
    }

    pub fn with_symmetry_tolerance(mut sigma: DMatrix<f64>, hbar: f64, tol: f64) -> Result<Self> {
        linalg::require_square_even(&sigma)?;
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::InvalidParameter(format!("hbar must be positive and finite, got {hbar}")));
        }
        if sigma.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("covariance entries must be finite".into()));
        }
        let asym = linalg::relative_asymmetry(&sigma);
        if asym > tol {
            return Err(Error::NotSymmetric(asym));
        }
        linalg::symmetrize(&mut sigma);
        Ok(Self { sigma, hbar })
    }

    /// The vacuum (coherent-state) covariance `(ħ/2)·I₂ₙ`.
    pub fn vacuum(n: usize, hbar: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension("n must be at least 1".into()));
        }
        Self::new(DMatrix::from_diagonal_element(2 * n, 2 * n, 0.5 * hbar), hbar)
    }

    /// Williamson-diagonal covariance `diag(Λ, Λ)`.
    pub fn williamson_diagonal(nu: &[f64], hbar: f64) -> Result<Self> {
        if nu.is_empty() {
            return Err(Error::InvalidDimension("need at least one symplectic eigenvalue".into()));
        }
        let diag: Vec<f64> = nu.iter().chain(nu.iter()).copied().collect();
        Self::new(DMatrix::from_diagonal(&DVector::from_vec(diag)), hbar)
    }

    /// `Sᵀ diag(Λ, Λ) S`, a covariance with prescribed symplectic spectrum.
    pub fn from_williamson_form(nu: &[f64], s: &SymplecticMatrix, hbar: f64) -> Result<Self> {
        let base = Self::williamson_diagonal(nu, hbar)?;
        apply_congruence(&base, s)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Planck's constant `h = 2πħ`.
    pub fn h(&self) -> f64 {
        2.0 * PI * self.hbar
    }

    pub fn modes(&self) -> usize {
        self.sigma.nrows() / 2
    }

    pub fn dim(&self) -> usize {
        self.sigma.nrows()
    }

    pub fn xx(&self) -> DMatrixView<'_, f64> {
        let n = self.modes();
        self.sigma.view((0, 0), (n, n))
    }

    pub fn xp(&self) -> DMatrixView<'_, f64> {
        let n = self.modes();
        self.sigma.view((0, n), (n, n))
    }

    pub fn px(&self) -> DMatrixView<'_, f64> {
        let n = self.modes();
        self.sigma.view((n, 0), (n, n))
    }

    pub fn pp(&self) -> DMatrixView<'_, f64> {
        let n = self.modes();
        self.sigma.view((n, n), (n, n))
    }

    pub fn frobenius_norm(&self) -> f64 {
        linalg::frobenius(&self.sigma)
    }

    /// `c·σ` with the same ħ.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidParameter(format!("scale must be positive, got {c}")));
        }
        Ok(Self { sigma: &self.sigma * c, hbar: self.hbar })
    }

    /// Same matrix, reinterpreted under a different ħ.
    pub fn with_hbar(&self, hbar: f64) -> Result<Self> {
        Self::new(self.sigma.clone(), hbar)
    }

    /// True when `σ = diag(Λ, Λ)` up to `tol·‖σ‖_F` entrywise.
    pub fn is_williamson_diagonal(&self, tol: f64) -> bool {
        let n = self.modes();
        let bound = tol * self.frobenius_norm();
        for i in 0..2 * n {
            for j in 0..2 * n {
                if i != j && self.sigma[(i, j)].abs() > bound {
                    return false;
                }
            }
        }
        (0..n).all(|j| (self.sigma[(j, j)] - self.sigma[(n + j, n + j)]).abs() <= bound)
    }

    /// Smallest ordinary eigenvalue of σ.
    pub fn smallest_eigenvalue(&self) -> f64 {
        linalg::smallest_symmetric_eigenvalue(&self.sigma)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.smallest_eigenvalue() > PD_TOL * self.frobenius_norm()
    }

    pub(crate) fn require_positive_definite(&self) -> Result<()> {
        let min = self.smallest_eigenvalue();
        if min > PD_TOL * self.frobenius_norm() {
            Ok(())
        } else {
            Err(Error::NotPositiveDefinite(min))
        }
    }

    /// `σ^{1/2}` and `σ^{−1/2}`.
    pub(crate) fn square_roots(&self) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
        let (values, vectors) = linalg::sorted_symmetric_eigen(&self.sigma);
        if values[0] <= PD_TOL * self.frobenius_norm() {
            return Err(Error::NotPositiveDefinite(values[0]));
        }
        let sqrt = linalg::symmetric_function(&values, &vectors, f64::sqrt);
        let inv_sqrt = linalg::symmetric_function(&values, &vectors, |v| 1.0 / v.sqrt());
        Ok((sqrt, inv_sqrt))
    }
}

/// Symplectic eigenvalues sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymplecticSpectrum {
    nu: Vec<f64>,
}

impl SymplecticSpectrum {
    /// Sorts the given values; all must be positive and finite.
    pub fn new(mut nu: Vec<f64>) -> Result<Self> {
        if nu.is_empty() {
            return Err(Error::InvalidDimension("spectrum needs at least one value".into()));
        }
        if nu.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("symplectic eigenvalues must be positive: {nu:?}")));
        }
        nu.sort_by(f64::total_cmp);
        Ok(Self { nu })
    }

    pub fn values(&self) -> &[f64] {
        &self.nu
    }

    pub fn nu_min(&self) -> f64 {
        self.nu[0]
    }

    pub fn nu_max(&self) -> f64 {
        self.nu[self.nu.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.nu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nu.is_empty()
    }

    /// Largest relative deviation from another spectrum of equal length.
    pub fn max_relative_deviation(&self, other: &SymplecticSpectrum) -> f64 {
        assert_eq!(self.len(), other.len(), "spectra of different length");
        self.nu.iter().zip(&other.nu).map(|(a, b)| linalg::relative_difference(*a, *b)).fold(0.0, f64::max)
    }
}

/// `(S, Λ)` with `Sᵀ σ S = diag(Λ, Λ)`.
#[derive(Debug, Clone)]
pub struct WilliamsonDecomposition {
    pub s: SymplecticMatrix,
    pub lambda: Vec<f64>,
    /// Achieved `‖SᵀσS − diag(Λ, Λ)‖_F`.
    pub residual: f64,
}

impl WilliamsonDecomposition {
    pub fn normal_form(&self) -> DMatrix<f64> {
        let diag: Vec<f64> = self.lambda.iter().chain(self.lambda.iter()).copied().collect();
        DMatrix::from_diagonal(&DVector::from_vec(diag))
    }
}

/// One canonical block of a skew-symmetric matrix: `K u = −ν w`, `K w = ν u`.
struct CanonicalPair {
    nu: f64,
    u: DVector<f64>,
    w: DVector<f64>,
}

/// Orthonormal canonical pairs of a real skew-symmetric matrix with no zero
/// eigenvalues, sorted by ascending `ν`.
///
/// Eigenvectors of the symmetric `−K² = KᵀK` are taken one at a time, each
/// projected off the planes already chosen; the candidate with the largest
/// remaining norm seeds the next plane. This handles degenerate `ν` because
/// the orthogonal complement of a `K`-invariant subspace is again invariant.
fn canonical_pairs(k: &DMatrix<f64>) -> Vec<CanonicalPair> {
    let dim = k.nrows();
    let half = dim / 2;
    let gram = k.transpose() * k;
    let (_, vectors) = linalg::sorted_symmetric_eigen(&gram);
    let mut chosen: Vec<DVector<f64>> = Vec::with_capacity(dim);
    let mut used = vec![false; dim];
    let mut pairs = Vec::with_capacity(half);

    while pairs.len() < half {
        let mut best: Option<(usize, DVector<f64>, f64)> = None;
        for (idx, col) in vectors.column_iter().enumerate() {
            if used[idx] {
                continue;
            }
            let mut v = col.into_owned();
            for c in &chosen {
                let d = c.dot(&v);
                v.axpy(-d, c, 1.0);
            }
            let norm = v.norm();
            if best.as_ref().is_none_or(|b| norm > b.2) {
                best = Some((idx, v, norm));
            }
        }
        let (idx, v, norm) = best.expect("candidates remain while planes are missing");
        used[idx] = true;
        let mut u = v / norm;
        // second pass keeps u orthogonal to the chosen planes at working precision
        for c in &chosen {
            let d = c.dot(&u);
            u.axpy(-d, c, 1.0);
        }
        u.normalize_mut();
        let ku = k * &u;
        let nu = ku.norm();
        let mut w = -ku / nu;
        for c in chosen.iter().chain(std::iter::once(&u)) {
            let d = c.dot(&w);
            w.axpy(-d, c, 1.0);
        }
        w.normalize_mut();
        chosen.push(u.clone());
        chosen.push(w.clone());
        pairs.push(CanonicalPair { nu, u, w });
    }
    pairs.sort_by(|a, b| a.nu.total_cmp(&b.nu));
    pairs
}

fn skew_core(sigma: &CovarianceMatrix) -> Result<(DMatrix<f64>, DMatrix<f64>, DMatrix<f64>)> {
    let (sqrt, inv_sqrt) = sigma.square_roots()?;
    let om = omega(sigma.modes());
    let mut k = &sqrt * om * &sqrt;
    // exact skew-symmetry
    let kt = k.transpose();
    k = (&k - kt) * 0.5;
    Ok((k, sqrt, inv_sqrt))
}

/// Symplectic spectrum of a positive definite `σ`.
pub fn symplectic_eigenvalues(sigma: &CovarianceMatrix) -> Result<SymplecticSpectrum> {
    let (k, _, _) = skew_core(sigma)?;
    let nu = canonical_pairs(&k).into_iter().map(|p| p.nu).collect();
    SymplecticSpectrum::new(nu)
}

/// Independent route: moduli of the (complex) eigenvalues of the non-normal
/// matrix `Ωσ`, paired off after sorting.
pub fn symplectic_eigenvalues_direct(sigma: &CovarianceMatrix) -> Result<SymplecticSpectrum> {
    sigma.require_positive_definite()?;
    let om = omega(sigma.modes());
    let product = om * sigma.matrix();
    let mut moduli: Vec<f64> = product.complex_eigenvalues().iter().map(|z| z.norm()).collect();
    moduli.sort_by(f64::total_cmp);
    let nu = moduli.chunks(2).map(|c| 0.5 * (c[0] + c[1])).collect();
    SymplecticSpectrum::new(nu)
}

/// Williamson normal form: symplectic `S` with `SᵀσS = diag(Λ, Λ)`, `Λ` ascending.
pub fn williamson(sigma: &CovarianceMatrix) -> Result<WilliamsonDecomposition> {
    let n = sigma.modes();
    let (k, _, inv_sqrt) = skew_core(sigma)?;
    let pairs = canonical_pairs(&k);

    // columns [u₁…uₙ, w₁…wₙ] scaled by D^{1/2}
    let mut q_scaled = DMatrix::zeros(2 * n, 2 * n);
    for (j, p) in pairs.iter().enumerate() {
        let root = p.nu.sqrt();
        q_scaled.set_column(j, &(&p.u * root));
        q_scaled.set_column(n + j, &(&p.w * root));
    }
    let s = inv_sqrt * q_scaled;
    let lambda: Vec<f64> = pairs.iter().map(|p| p.nu).collect();

    let diag: Vec<f64> = lambda.iter().chain(lambda.iter()).copied().collect();
    let normal = DMatrix::from_diagonal(&DVector::from_vec(diag));
    let residual = (s.transpose() * sigma.matrix() * &s - normal).norm();
    let limit = WILLIAMSON_FAILURE_TOL * sigma.frobenius_norm();
    if !(residual <= limit) {
        return Err(Error::ConvergenceFailure { residual, limit });
    }
    Ok(WilliamsonDecomposition { s: SymplecticMatrix::from_trusted(s, 1e-10), lambda, residual })
}

/// `Sᵀ σ S`, re-symmetrized, with the same ħ.
pub fn apply_congruence(sigma: &CovarianceMatrix, s: &SymplecticMatrix) -> Result<CovarianceMatrix> {
    if s.matrix().nrows() != sigma.dim() {
        return Err(Error::InvalidDimension(format!(
            "covariance is {0}x{0} but symplectic matrix is {1}x{1}",
            sigma.dim(),
            s.matrix().nrows()
        )));
    }
    let mut out = s.matrix().transpose() * sigma.matrix() * s.matrix();
    linalg::symmetrize(&mut out);
    Ok(CovarianceMatrix { sigma: out, hbar: sigma.hbar })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{is_symplectic, random_symplectic};
    use proptest::prelude::*;

    fn diag(values: &[f64]) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_row_slice(values))
    }

    #[test]
    fn single_mode_diagonal() {
        let sigma = CovarianceMatrix::new(diag(&[4.0, 1.0]), 1.0).unwrap();
        let nu = symplectic_eigenvalues(&sigma).unwrap();
        assert!((nu.values()[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn vacuum_spectrum() {
        let sigma = CovarianceMatrix::vacuum(3, 1.0).unwrap();
        let nu = symplectic_eigenvalues(&sigma).unwrap();
        for v in nu.values() {
            assert!((v - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn recovers_constructed_spectrum() {
        let s = random_symplectic(2, 7, 0.5).unwrap();
        let sigma = CovarianceMatrix::from_williamson_form(&[1.0, 2.0], &s, 1.0).unwrap();
        let nu = symplectic_eigenvalues(&sigma).unwrap();
        assert!((nu.values()[0] - 1.0).abs() < 1e-10);
        assert!((nu.values()[1] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_indefinite() {
        let sigma = CovarianceMatrix::new(diag(&[1.0, -1.0]), 1.0).unwrap();
        assert!(matches!(symplectic_eigenvalues(&sigma), Err(Error::NotPositiveDefinite(_))));
        assert!(matches!(williamson(&sigma), Err(Error::NotPositiveDefinite(_))));
        let singular = CovarianceMatrix::new(diag(&[1.0, 0.0, 1.0, 1.0]), 1.0).unwrap();
        assert!(symplectic_eigenvalues(&singular).is_err());
    }

    #[test]
    fn rejects_asymmetric_and_odd() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(CovarianceMatrix::new(m, 1.0), Err(Error::NotSymmetric(_))));
        assert!(matches!(CovarianceMatrix::new(DMatrix::identity(3, 3), 1.0), Err(Error::InvalidDimension(_))));
        assert!(CovarianceMatrix::new(DMatrix::identity(2, 2), 0.0).is_err());
    }

    #[test]
    fn block_views() {
        let m = DMatrix::from_fn(4, 4, |i, j| (i + j) as f64 + if i == j { 10.0 } else { 0.0 });
        let sigma = CovarianceMatrix::new(m.clone(), 1.0).unwrap();
        assert_eq!(sigma.xx(), m.view((0, 0), (2, 2)));
        assert_eq!(sigma.xp().transpose(), sigma.px());
        assert_eq!(sigma.pp()[(1, 1)], m[(3, 3)]);
    }

    #[test]
    fn williamson_vacuum() {
        let sigma = CovarianceMatrix::vacuum(3, 1.0).unwrap();
        let w = williamson(&sigma).unwrap();
        assert!(w.residual <= 1e-12);
        assert!(w.lambda.iter().all(|l| (l - 0.5).abs() < 1e-14));
        assert!(is_symplectic(w.s.matrix(), 1e-12).unwrap());
    }

    #[test]
    fn williamson_single_mode_by_hand() {
        // 4s² = 2 ⇒ s = 1/√2 on x, and 1·t² = 2 ⇒ t = √2 on p
        let sigma = CovarianceMatrix::new(diag(&[4.0, 1.0]), 1.0).unwrap();
        let w = williamson(&sigma).unwrap();
        assert!((w.lambda[0] - 2.0).abs() < 1e-14);
        let s = w.s.matrix();
        assert!((s[(0, 0)].abs() - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((s[(1, 1)].abs() - 2f64.sqrt()).abs() < 1e-12);
        assert!(s[(0, 1)].abs() < 1e-12 && s[(1, 0)].abs() < 1e-12);
        let back = s.transpose() * sigma.matrix() * s;
        assert!((back - diag(&[2.0, 2.0])).norm() < 1e-12);
    }

    #[test]
    fn williamson_random_five_modes() {
        for seed in 0..10 {
            let s = random_symplectic(5, seed, 0.4).unwrap();
            let sigma = CovarianceMatrix::from_williamson_form(&[0.5, 0.8, 1.3, 2.0, 3.1], &s, 1.0).unwrap();
            let w = williamson(&sigma).unwrap();
            assert!(w.residual <= 1e-8 * sigma.frobenius_norm());
            assert!(is_symplectic(w.s.matrix(), 1e-10).unwrap());
        }
    }

    #[test]
    fn williamson_degenerate_spectrum() {
        let s = random_symplectic(3, 99, 0.5).unwrap();
        let sigma = CovarianceMatrix::from_williamson_form(&[1.0, 1.0, 1.0], &s, 1.0).unwrap();
        let w = williamson(&sigma).unwrap();
        assert!(w.residual <= 1e-8 * sigma.frobenius_norm());
        assert!(is_symplectic(w.s.matrix(), 1e-10).unwrap());
    }

    #[test]
    fn congruence_examples() {
        let s = random_symplectic(2, 3, 0.5).unwrap();
        let sigma = CovarianceMatrix::from_williamson_form(&[0.7, 1.9], &s, 1.0).unwrap();
        let same = apply_congruence(&sigma, &SymplecticMatrix::identity(2).unwrap()).unwrap();
        assert_eq!(same.matrix(), sigma.matrix());
        let om = SymplecticMatrix::new(omega(2), 1e-12).unwrap();
        let rotated = apply_congruence(&sigma, &om).unwrap();
        let a = symplectic_eigenvalues(&sigma).unwrap();
        let b = symplectic_eigenvalues(&rotated).unwrap();
        assert!(a.max_relative_deviation(&b) < 1e-9);
        let wrong = SymplecticMatrix::identity(3).unwrap();
        assert!(matches!(apply_congruence(&sigma, &wrong), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn direct_route_agrees() {
        for seed in 0..20 {
            let n = 1 + (seed as usize % 6);
            let s = random_symplectic(n, seed, 0.5).unwrap();
            let nu: Vec<f64> = (0..n).map(|j| 0.4 + 0.37 * j as f64).collect();
            let sigma = CovarianceMatrix::from_williamson_form(&nu, &s, 1.0).unwrap();
            let a = symplectic_eigenvalues(&sigma).unwrap();
            let b = symplectic_eigenvalues_direct(&sigma).unwrap();
            assert!(a.max_relative_deviation(&b) < 1e-9, "{a:?} vs {b:?}");
        }
    }

    proptest! {
        #[test]
        fn spectrum_scales_linearly(seed in any::<u64>(), c in 0.01f64..100.0) {
            let s = random_symplectic(3, seed, 0.5).unwrap();
            let sigma = CovarianceMatrix::from_williamson_form(&[0.6, 1.1, 1.7], &s, 1.0).unwrap();
            let a = symplectic_eigenvalues(&sigma).unwrap();
            let b = symplectic_eigenvalues(&sigma.scaled(c).unwrap()).unwrap();
            for (x, y) in a.values().iter().zip(b.values()) {
                prop_assert!(linalg::relative_difference(c * x, *y) <= 1e-12);
            }
        }

        #[test]
        fn spectrum_is_congruence_invariant(n in 1usize..6, seed in any::<u64>()) {
            let s1 = random_symplectic(n, seed, 0.5).unwrap();
            let s2 = random_symplectic(n, seed.wrapping_add(1), 0.5).unwrap();
            let nu: Vec<f64> = (0..n).map(|j| 0.5 + 0.3 * j as f64).collect();
            let sigma = CovarianceMatrix::from_williamson_form(&nu, &s1, 1.0).unwrap();
            let moved = apply_congruence(&sigma, &s2).unwrap();
            let a = symplectic_eigenvalues(&sigma).unwrap();
            let b = symplectic_eigenvalues(&moved).unwrap();
            prop_assert!(a.max_relative_deviation(&b) <= 1e-9);
        }
    }
}

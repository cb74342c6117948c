//! Quantum validity of covariance matrices and the Gromov width of the
//! covariance ellipsoid `W_σ : ½ zᵀσ⁻¹z ≤ 1`.
//!
//! Validity is decided twice: by positivity of the Hermitian matrix
//! `σ + ½iħΩ`, and by `ν_min ≥ ħ/2` on the symplectic spectrum.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg;
use crate::spectrum::{symplectic_eigenvalues, CovarianceMatrix, SymplecticSpectrum};
use crate::symplectic::omega;

/// Relative slack of the Hermitian-positivity route, against `‖σ‖_F`.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Relative slack of the spectrum route, against `ħ/2`.
pub const SPECTRUM_TOL: f64 = 1e-10;
/// `|ν_min − ħ/2| ≤ MARGINAL_BAND·ħ` is reported as marginal.
pub const MARGINAL_BAND: f64 = 1e-10;
/// Relative slack of the per-mode Robertson–Schrödinger test, against `‖σ‖_F²`.
pub const RS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumValidityReport {
    /// `σ + ½iħΩ ⪰ 0`.
    pub valid_hermitian: bool,
    /// `ν_min ≥ ħ/2`.
    pub valid_spectrum: bool,
    pub nu_min: f64,
    /// `ν_min − ħ/2`.
    pub margin: f64,
    pub marginal: bool,
    pub rs_per_mode: Vec<bool>,
    pub gromov_width: f64,
    pub hbar: f64,
}

impl QuantumValidityReport {
    pub fn is_valid(&self) -> bool {
        self.valid_hermitian && self.valid_spectrum
    }

    /// The two routes must agree outside the marginal band.
    pub fn routes_agree(&self) -> bool {
        self.marginal || self.valid_hermitian == self.valid_spectrum
    }
}

/// `σ + ½iħΩ` as a complex Hermitian matrix.
pub fn uncertainty_matrix(sigma: &CovarianceMatrix) -> DMatrix<Complex<f64>> {
    let om = omega(sigma.modes());
    let half = 0.5 * sigma.hbar();
    DMatrix::from_fn(sigma.dim(), sigma.dim(), |i, j| Complex::new(sigma.matrix()[(i, j)], half * om[(i, j)]))
}

/// Real symmetric embedding `[[A, −B], [B, A]]` of a Hermitian `A + iB`; its
/// spectrum is that of `A + iB` with every eigenvalue doubled.
fn real_embedding(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let m = a.nrows();
    let mut out = DMatrix::zeros(2 * m, 2 * m);
    out.view_mut((0, 0), (m, m)).copy_from(a);
    out.view_mut((m, m), (m, m)).copy_from(a);
    out.view_mut((0, m), (m, m)).copy_from(&(-b));
    out.view_mut((m, 0), (m, m)).copy_from(b);
    out
}

/// Eigenvalues (ascending, one copy each) of the Hermitian `A + iB`.
fn hermitian_eigenvalues(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Vec<f64> {
    let mut doubled: Vec<f64> = real_embedding(a, b).symmetric_eigenvalues().iter().copied().collect();
    doubled.sort_by(f64::total_cmp);
    doubled.iter().step_by(2).copied().collect()
}

/// Smallest eigenvalue of `σ + ½iħΩ`.
pub fn uncertainty_min_eigenvalue(sigma: &CovarianceMatrix) -> f64 {
    let b = omega(sigma.modes()) * (0.5 * sigma.hbar());
    hermitian_eigenvalues(sigma.matrix(), &b)[0]
}

/// Strong uncertainty principle `σ + ½iħΩ ⪰ 0`, with slack `1e−10·‖σ‖_F`.
pub fn is_quantum_hermitian(sigma: &CovarianceMatrix) -> bool {
    uncertainty_min_eigenvalue(sigma) >= -HERMITIAN_TOL * sigma.frobenius_norm()
}

/// `ν_min ≥ (ħ/2)(1 − 1e−10)`.
pub fn is_quantum_spectrum(sigma: &CovarianceMatrix) -> Result<bool> {
    let nu = symplectic_eigenvalues(sigma)?;
    Ok(spectrum_is_quantum(&nu, sigma.hbar()))
}

pub fn spectrum_is_quantum(nu: &SymplecticSpectrum, hbar: f64) -> bool {
    nu.nu_min() >= 0.5 * hbar * (1.0 - SPECTRUM_TOL)
}

/// Per-mode `σ_XjXj·σ_PjPj − σ_XjPj² ≥ ħ²/4`, with slack `1e−10·‖σ‖_F²`.
pub fn robertson_schrodinger(sigma: &CovarianceMatrix) -> Vec<bool> {
    let slack = RS_TOL * sigma.frobenius_norm().powi(2);
    robertson_schrodinger_defects(sigma).into_iter().map(|d| d >= -slack).collect()
}

/// `σ_XjXj·σ_PjPj − σ_XjPj² − ħ²/4` for every mode.
pub fn robertson_schrodinger_defects(sigma: &CovarianceMatrix) -> Vec<f64> {
    let quarter = 0.25 * sigma.hbar() * sigma.hbar();
    (0..sigma.modes())
        .map(|j| {
            let xx = sigma.xx()[(j, j)];
            let pp = sigma.pp()[(j, j)];
            let xp = sigma.xp()[(j, j)];
            xx * pp - xp * xp - quarter
        })
        .collect()
}

/// Gromov width of `W_σ`.
///
/// In Williamson coordinates `W_σ` is `Σ (xⱼ² + pⱼ²)/(2νⱼ) ≤ 1`, whose
/// largest inscribed ball has radius `√(2ν_min)`, so the width is
/// `2π·ν_min`. The bound `c ≥ πħ` is then exactly `ν_min ≥ ħ/2`.
pub fn gromov_width(sigma: &CovarianceMatrix) -> Result<f64> {
    Ok(gromov_width_from_spectrum(&symplectic_eigenvalues(sigma)?))
}

pub fn gromov_width_from_spectrum(nu: &SymplecticSpectrum) -> f64 {
    2.0 * PI * nu.nu_min()
}

/// Coefficients `(1, −2, 1 − ħ²/(4νⱼ²))` of the quadratic factors of the
/// characteristic polynomial of `I + ½iħσ^{−1/2}Ωσ^{−1/2}`.
pub fn uncertainty_charpoly_factors(sigma: &CovarianceMatrix) -> Result<Vec<[f64; 3]>> {
    let nu = symplectic_eigenvalues(sigma)?;
    Ok(charpoly_factors_from_spectrum(&nu, sigma.hbar()))
}

pub fn charpoly_factors_from_spectrum(nu: &SymplecticSpectrum, hbar: f64) -> Vec<[f64; 3]> {
    nu.values().iter().map(|v| [1.0, -2.0, 1.0 - hbar * hbar / (4.0 * v * v)]).collect()
}

/// Roots `1 ± ħ/(2ν)` of each quadratic factor, all sorted ascending.
pub fn charpoly_factor_roots(nu: &SymplecticSpectrum, hbar: f64) -> Vec<f64> {
    let mut roots: Vec<f64> = nu
        .values()
        .iter()
        .flat_map(|v| {
            let d = hbar / (2.0 * v);
            [1.0 - d, 1.0 + d]
        })
        .collect();
    roots.sort_by(f64::total_cmp);
    roots
}

/// `I + ½iħσ^{−1/2}Ωσ^{−1/2}`, split into real and imaginary parts.
fn normalized_uncertainty_parts(sigma: &CovarianceMatrix) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let (_, inv_sqrt) = sigma.square_roots()?;
    let mut b = &inv_sqrt * omega(sigma.modes()) * &inv_sqrt * (0.5 * sigma.hbar());
    let bt = b.transpose();
    b = (&b - bt) * 0.5;
    Ok((DMatrix::identity(sigma.dim(), sigma.dim()), b))
}

/// Eigenvalues of `I + ½iħσ^{−1/2}Ωσ^{−1/2}`, ascending.
pub fn normalized_uncertainty_eigenvalues(sigma: &CovarianceMatrix) -> Result<Vec<f64>> {
    let (a, b) = normalized_uncertainty_parts(sigma)?;
    Ok(hermitian_eigenvalues(&a, &b))
}

/// Characteristic polynomial of `I + ½iħσ^{−1/2}Ωσ^{−1/2}` in descending
/// powers, by Faddeev–LeVerrier on the complex matrix. Imaginary parts vanish
/// up to rounding and are dropped.
pub fn normalized_uncertainty_charpoly(sigma: &CovarianceMatrix) -> Result<Vec<f64>> {
    let (a, b) = normalized_uncertainty_parts(sigma)?;
    let m = DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| Complex::new(a[(i, j)], b[(i, j)]));
    Ok(linalg::faddeev_leverrier(&m).into_iter().map(|c| c.re).collect())
}

/// Product of the quadratic factors, descending powers.
pub fn product_of_factors(factors: &[[f64; 3]]) -> Vec<f64> {
    factors.iter().fold(vec![1.0], |acc, f| linalg::poly_mul(&acc, f))
}

/// Largest gap between the eigenvalues of `I + ½iħσ^{−1/2}Ωσ^{−1/2}` and the
/// predicted roots `1 ± ħ/(2νⱼ)`.
pub fn charpoly_root_deviation(sigma: &CovarianceMatrix) -> Result<f64> {
    let nu = symplectic_eigenvalues(sigma)?;
    let predicted = charpoly_factor_roots(&nu, sigma.hbar());
    let observed = normalized_uncertainty_eigenvalues(sigma)?;
    Ok(predicted.iter().zip(&observed).map(|(p, o)| (p - o).abs()).fold(0.0, f64::max))
}

/// Full validity report.
pub fn validity_report(sigma: &CovarianceMatrix) -> Result<QuantumValidityReport> {
    let nu = symplectic_eigenvalues(sigma)?;
    let hbar = sigma.hbar();
    let margin = nu.nu_min() - 0.5 * hbar;
    Ok(QuantumValidityReport {
        valid_hermitian: is_quantum_hermitian(sigma),
        valid_spectrum: spectrum_is_quantum(&nu, hbar),
        nu_min: nu.nu_min(),
        margin,
        marginal: margin.abs() <= MARGINAL_BAND * hbar,
        rs_per_mode: robertson_schrodinger(sigma),
        gromov_width: gromov_width_from_spectrum(&nu),
        hbar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::apply_congruence;
    use crate::symplectic::random_symplectic;
    use nalgebra::DVector;
    use proptest::prelude::*;

    fn diag(values: &[f64], hbar: f64) -> CovarianceMatrix {
        CovarianceMatrix::new(DMatrix::from_diagonal(&DVector::from_row_slice(values)), hbar).unwrap()
    }

    #[test]
    fn vacuum_is_boundary_valid() {
        for hbar in [1.0, 2.0] {
            let sigma = CovarianceMatrix::vacuum(2, hbar).unwrap();
            assert!(uncertainty_min_eigenvalue(&sigma).abs() < 1e-14);
            assert!(is_quantum_hermitian(&sigma));
            assert!(is_quantum_spectrum(&sigma).unwrap());
            let report = validity_report(&sigma).unwrap();
            assert!(report.marginal);
            assert!(report.is_valid());
        }
    }

    #[test]
    fn quarter_hbar_is_invalid() {
        let sigma = diag(&[0.25, 0.25, 0.25, 0.25], 1.0);
        assert!(!is_quantum_hermitian(&sigma));
        assert!(!is_quantum_spectrum(&sigma).unwrap());
    }

    #[test]
    fn spectrum_threshold() {
        let ok = SymplecticSpectrum::new(vec![0.5, 0.7]).unwrap();
        assert!(spectrum_is_quantum(&ok, 1.0));
        let bad = SymplecticSpectrum::new(vec![0.499999, 2.0]).unwrap();
        assert!(!spectrum_is_quantum(&bad, 1.0));
    }

    #[test]
    fn hermitian_route_on_constructed_state() {
        let s = random_symplectic(3, 21, 0.5).unwrap();
        let sigma = CovarianceMatrix::from_williamson_form(&[0.5, 0.9, 1.4], &s, 1.0).unwrap();
        assert!(is_quantum_hermitian(&sigma));
    }

    #[test]
    fn robertson_schrodinger_examples() {
        assert_eq!(robertson_schrodinger(&diag(&[1.0, 1.0], 2.0)), vec![true]);
        assert_eq!(robertson_schrodinger_defects(&diag(&[1.0, 1.0], 2.0)), vec![0.0]);
        assert_eq!(robertson_schrodinger(&diag(&[1.0; 4], 2.0)), vec![true, true]);
        assert_eq!(robertson_schrodinger(&diag(&[0.4, 0.5, 0.5, 0.5], 1.0)), vec![false, true]);
    }

    #[test]
    fn gromov_width_examples() {
        let vac = CovarianceMatrix::vacuum(2, 1.0).unwrap();
        assert!((gromov_width(&vac).unwrap() - PI).abs() < 1e-14);
        assert!((gromov_width(&vac).unwrap() - vac.h() / 2.0).abs() < 1e-14);
        // ν = 2: the ellipse x²/8 + p²/2 ≤ 1 contains the disc of radius 2
        assert!((gromov_width(&diag(&[4.0, 1.0], 1.0)).unwrap() - 4.0 * PI).abs() < 1e-13);
        let s = random_symplectic(2, 4, 0.6).unwrap();
        let base =
            CovarianceMatrix::from_williamson_form(&[0.8, 1.5], &random_symplectic(2, 5, 0.4).unwrap(), 1.0).unwrap();
        let moved = apply_congruence(&base, &s).unwrap();
        assert!(linalg::relative_difference(gromov_width(&base).unwrap(), gromov_width(&moved).unwrap()) < 1e-9);
    }

    #[test]
    fn gromov_width_bounds_symplectic_plane_shadows() {
        // every shadow on a complex plane has area at least the width; the
        // Williamson-diagonal state attains it on its softest mode plane
        use crate::projection::{project_covariance_ellipsoid, random_complex_subspace, SymplecticSubspace};
        let s = random_symplectic(3, 31, 0.5).unwrap();
        let sigma = CovarianceMatrix::from_williamson_form(&[0.6, 0.9, 1.8], &s, 1.0).unwrap();
        let c = gromov_width(&sigma).unwrap();
        for seed in 0..50 {
            let f = random_complex_subspace(3, 1, seed).unwrap();
            assert!(project_covariance_ellipsoid(&sigma, &f).unwrap().volume >= c * (1.0 - 1e-9));
        }
        let diag_state = CovarianceMatrix::williamson_diagonal(&[0.6, 0.9, 1.8], 1.0).unwrap();
        let plane = SymplecticSubspace::coordinate(3, &[0]).unwrap();
        let area = project_covariance_ellipsoid(&diag_state, &plane).unwrap().volume;
        assert!(linalg::relative_difference(area, gromov_width(&diag_state).unwrap()) < 1e-14);
    }

    #[test]
    fn charpoly_factor_examples() {
        let hbar = 1.0;
        let boundary = SymplecticSpectrum::new(vec![0.5]).unwrap();
        assert_eq!(charpoly_factors_from_spectrum(&boundary, hbar), vec![[1.0, -2.0, 0.0]]);
        assert_eq!(charpoly_factor_roots(&boundary, hbar), vec![0.0, 2.0]);
        let one = SymplecticSpectrum::new(vec![1.0]).unwrap();
        assert_eq!(charpoly_factors_from_spectrum(&one, hbar), vec![[1.0, -2.0, 0.75]]);
        assert_eq!(charpoly_factor_roots(&one, hbar), vec![0.5, 1.5]);
    }

    #[test]
    fn factor_product_matches_charpoly() {
        for seed in 0..10 {
            let n = 1 + seed as usize % 4;
            let s = random_symplectic(n, seed, 0.4).unwrap();
            let nu: Vec<f64> = (0..n).map(|j| 0.5 + 0.45 * j as f64).collect();
            let sigma = CovarianceMatrix::from_williamson_form(&nu, &s, 1.0).unwrap();
            let product = product_of_factors(&uncertainty_charpoly_factors(&sigma).unwrap());
            let direct = normalized_uncertainty_charpoly(&sigma).unwrap();
            for (a, b) in product.iter().zip(&direct) {
                assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0), "{product:?} vs {direct:?}");
            }
            assert!(charpoly_root_deviation(&sigma).unwrap() < 1e-8);
        }
    }

    #[test]
    fn not_positive_definite_is_an_error() {
        let sigma = diag(&[1.0, -0.5], 1.0);
        assert!(is_quantum_spectrum(&sigma).is_err());
        assert!(gromov_width(&sigma).is_err());
        assert!(uncertainty_charpoly_factors(&sigma).is_err());
        assert!(!is_quantum_hermitian(&sigma));
    }

    proptest! {
        #[test]
        fn constant_term_sign_tracks_validity(nu in 0.01f64..10.0, hbar in 0.1f64..4.0) {
            let spectrum = SymplecticSpectrum::new(vec![nu]).unwrap();
            let c = charpoly_factors_from_spectrum(&spectrum, hbar)[0][2];
            prop_assert_eq!(c >= 0.0, 4.0 * nu * nu >= hbar * hbar);
        }

        #[test]
        fn gromov_width_scales_linearly(seed in any::<u64>(), c in 0.01f64..100.0) {
            let s = random_symplectic(2, seed, 0.5).unwrap();
            let sigma = CovarianceMatrix::from_williamson_form(&[0.7, 1.2], &s, 1.0).unwrap();
            let a = gromov_width(&sigma).unwrap();
            let b = gromov_width(&sigma.scaled(c).unwrap()).unwrap();
            prop_assert!(linalg::relative_difference(c * a, b) <= 1e-12);
        }

        #[test]
        fn validity_implies_robertson_schrodinger(seed in any::<u64>(), lo in 0.5f64..1.5) {
            let s = random_symplectic(3, seed, 0.6).unwrap();
            let sigma = CovarianceMatrix::from_williamson_form(&[lo, lo + 0.2, lo + 0.9], &s, 1.0).unwrap();
            if is_quantum_spectrum(&sigma).unwrap() {
                prop_assert!(robertson_schrodinger(&sigma).iter().all(|&b| b));
            }
        }
    }
}

//! Universal invariants `Δⱼ` of a covariance matrix: the sums of all
//! principal minors of order `2j` of `Ωσ`.
//!
//! Three routes are provided: direct enumeration of minors, the
//! characteristic polynomial of `Ωσ`, and elementary symmetric polynomials in
//! the squared symplectic eigenvalues. `Δ₀ = 1` by convention and `Δₙ = det σ`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::projection::{project_covariance_ellipsoid, SymplecticSubspace};
use crate::spectrum::{CovarianceMatrix, SymplecticSpectrum};
use crate::symplectic::omega;

/// Largest number of principal minors the enumeration route will evaluate.
pub const MAX_MINORS: u128 = 1_000_000;
/// Tolerance on the projection identity for Williamson-diagonal `σ`.
pub const DIAGONAL_IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvariantRoute {
    Minors,
    Charpoly,
    Spectrum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniversalInvariants {
    /// `Δ₀ … Δₙ`.
    pub delta: Vec<f64>,
    pub route: InvariantRoute,
}

impl UniversalInvariants {
    pub fn modes(&self) -> usize {
        self.delta.len() - 1
    }

    /// Largest entrywise relative deviation between two routes.
    pub fn max_relative_deviation(&self, other: &UniversalInvariants) -> f64 {
        assert_eq!(self.delta.len(), other.delta.len(), "invariants of different size");
        self.delta.iter().zip(&other.delta).map(|(a, b)| linalg::relative_difference(*a, *b)).fold(0.0, f64::max)
    }
}

fn check_order(sigma: &CovarianceMatrix, j: usize) -> Result<()> {
    if j > sigma.modes() {
        return Err(Error::InvalidIndex(format!("order j = {j} exceeds n = {}", sigma.modes())));
    }
    Ok(())
}

/// `Δⱼ` as the sum of every order-`2j` principal minor of `Ωσ`.
pub fn delta_via_minors(sigma: &CovarianceMatrix, j: usize) -> Result<f64> {
    check_order(sigma, j)?;
    if j == 0 {
        return Ok(1.0);
    }
    let dim = sigma.dim();
    let count = linalg::binomial(dim, 2 * j);
    if count > MAX_MINORS {
        return Err(Error::CombinatorialBlowup { count, limit: MAX_MINORS });
    }
    let product = omega(sigma.modes()) * sigma.matrix();
    let minors = linalg::combinations(dim, 2 * j).into_iter().map(|rows| {
        let sub = product.select_rows(&rows).select_columns(&rows);
        linalg::determinant(&sub)
    });
    Ok(linalg::compensated_sum(minors))
}

/// All `Δ₀ … Δₙ` through the minors route.
pub fn invariants_via_minors(sigma: &CovarianceMatrix) -> Result<UniversalInvariants> {
    let delta = (0..=sigma.modes()).map(|j| delta_via_minors(sigma, j)).collect::<Result<Vec<_>>>()?;
    Ok(UniversalInvariants { delta, route: InvariantRoute::Minors })
}

/// `Δⱼ` read off `det(tI − Ωσ) = Σ_k c_k t^{2n−k}` as `Δⱼ = c_{2j}`.
///
/// The eigenvalues of `Ωσ` come in pairs `±iν`, so the polynomial is
/// `Π(t² + νⱼ²)`: odd coefficients vanish and even ones are positive.
pub fn delta_via_charpoly(sigma: &CovarianceMatrix) -> UniversalInvariants {
    let product = omega(sigma.modes()) * sigma.matrix();
    let coeffs = linalg::faddeev_leverrier(&product);
    let delta = coeffs.iter().step_by(2).copied().collect();
    UniversalInvariants { delta, route: InvariantRoute::Charpoly }
}

/// `Δⱼ = e_j(ν₁², …, νₙ²)`.
pub fn delta_via_spectrum(nu: &SymplecticSpectrum) -> UniversalInvariants {
    let squares: Vec<f64> = nu.values().iter().map(|v| v * v).collect();
    UniversalInvariants { delta: linalg::elementary_symmetric(&squares), route: InvariantRoute::Spectrum }
}

/// Both sides of `Δⱼ = (j!/(2π)ʲ)² · Σ_F Vol(Π_F W_σ)²`, the sum running over
/// the `C(n, j)` coordinate symplectic subspaces of dimension `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectionIdentity {
    pub j: usize,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs − rhs| / max(|lhs|, |rhs|)`.
    pub residual: f64,
    /// Whether `σ` was in Williamson-diagonal form, where equality is enforced.
    pub williamson_diagonal: bool,
}

/// Evaluates the projection identity for order `j`.
///
/// For general `σ` the residual is only reported. When `σ = diag(Λ, Λ)` a
/// residual above [`DIAGONAL_IDENTITY_TOL`] is an internal inconsistency.
pub fn delta_projection_identity(sigma: &CovarianceMatrix, j: usize) -> Result<ProjectionIdentity> {
    check_order(sigma, j)?;
    sigma.require_positive_definite()?;
    let n = sigma.modes();
    let lhs = delta_via_charpoly(sigma).delta[j];
    let rhs = if j == 0 {
        1.0
    } else {
        let norm = linalg::factorial(j) / (2.0 * PI).powi(j as i32);
        let squares = linalg::combinations(n, j)
            .into_iter()
            .map(|modes| {
                let f = SymplecticSubspace::coordinate(n, &modes)?;
                let v = project_covariance_ellipsoid(sigma, &f)?.volume;
                Ok((norm * v).powi(2))
            })
            .collect::<Result<Vec<f64>>>()?;
        linalg::compensated_sum(squares)
    };
    let residual = linalg::relative_difference(lhs, rhs);
    let williamson_diagonal = sigma.is_williamson_diagonal(1e-12);
    if williamson_diagonal && residual > DIAGONAL_IDENTITY_TOL {
        return Err(Error::Inconsistent(format!(
            "projection identity fails for diagonal covariance at j = {j}: residual {residual:.3e}"
        )));
    }
    Ok(ProjectionIdentity { j, lhs, rhs, residual, williamson_diagonal })
}

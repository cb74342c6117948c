//! Orthogonal shadows of ellipsoids on symplectic subspaces.
//!
//! The covariance ellipsoid `W_σ = {z : zᵀ(2σ)⁻¹z ≤ 1}` projects orthogonally
//! onto `span(V)` (orthonormal `V`, `2k` columns) as `{y : yᵀ(2VᵀσV)⁻¹y ≤ 1}`,
//! whose volume is `(2π)ᵏ/k! · √det(VᵀσV)`. All volumes here are closed-form
//! Gram determinants.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::spectrum::CovarianceMatrix;
use crate::symplectic::{omega, random_symplectic, random_symplectic_rotation, PhaseSpace, SymplecticMatrix};

/// Tolerance of the `ΩF ⊆ F` test in [`SymplecticSubspace::is_complex`].
pub const COMPLEX_TOL: f64 = 1e-9;
/// Subspaces with `|det(VᵀΩV)|` below this are rejected as near-isotropic.
pub const NONDEGENERACY_THRESHOLD: f64 = 1e-10;
/// Tolerance on `VᵀV = I`.
pub const ORTHONORMALITY_TOL: f64 = 1e-12;
/// Spread of the generator used by [`random_symplectic_subspace`].
pub const SUBSPACE_SPREAD: f64 = 0.5;
/// A shadow ratio below `1 − VIOLATION_TOL` counts as a violation.
pub const VIOLATION_TOL: f64 = 1e-9;

/// A `2k`-dimensional subspace of `ℝ²ⁿ` stored as an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticSubspace {
    basis: DMatrix<f64>,
    k: usize,
    gram_omega: DMatrix<f64>,
    nondegeneracy: f64,
    certified: bool,
}

impl SymplecticSubspace {
    /// Orthonormalizes the columns of `spanning` and checks that the
    /// restricted symplectic form is non-degenerate.
    pub fn from_spanning(spanning: &DMatrix<f64>) -> Result<Self> {
        let sub = Self::build(spanning)?;
        sub.certify()
    }

    /// Accepts an already orthonormal basis.
    pub fn from_orthonormal(basis: DMatrix<f64>) -> Result<Self> {
        check_shape(&basis)?;
        let k2 = basis.ncols();
        let defect = (basis.transpose() * &basis - DMatrix::<f64>::identity(k2, k2)).amax();
        if defect > ORTHONORMALITY_TOL {
            return Err(Error::InvalidBasis(format!("columns are not orthonormal (defect {defect:.3e})")));
        }
        Self::with_basis(basis).certify()
    }

    /// Diagnostic constructor: same fields, non-degeneracy not enforced.
    /// Useful for shadows on planes of non-conjugate variables.
    pub fn any_subspace(spanning: &DMatrix<f64>) -> Result<Self> {
        Self::build(spanning)
    }

    /// Span of `x_j, p_j` over the given 0-based modes; the basis is the
    /// matching standard unit vectors, `x` columns first.
    pub fn coordinate(n: usize, modes: &[usize]) -> Result<Self> {
        let basis = coordinate_basis(n, modes)?;
        Self::with_basis(basis).certify()
    }

    /// Span of arbitrary coordinate axes (block-xp positions), certificate waived.
    pub fn coordinate_axes(n: usize, axes: &[usize]) -> Result<Self> {
        PhaseSpace::new(n)?;
        let dim = 2 * n;
        check_distinct(axes, dim)?;
        let mut basis = DMatrix::zeros(dim, axes.len());
        for (c, &a) in axes.iter().enumerate() {
            basis[(a, c)] = 1.0;
        }
        check_shape(&basis)?;
        Ok(Self::with_basis(basis))
    }

    fn build(spanning: &DMatrix<f64>) -> Result<Self> {
        check_shape(spanning)?;
        if spanning.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("spanning vectors must be finite".into()));
        }
        let rank_proxy = linalg::gram_sqrt_det(spanning);
        if !(rank_proxy > 0.0) {
            return Err(Error::DegenerateSubspace(0.0));
        }
        Ok(Self::with_basis(linalg::orthonormal_columns(spanning)))
    }

    fn with_basis(basis: DMatrix<f64>) -> Self {
        let n = basis.nrows() / 2;
        let gram_omega = basis.transpose() * omega(n) * &basis;
        let nondegeneracy = linalg::determinant(&gram_omega).abs();
        let k = basis.ncols() / 2;
        Self { basis, k, gram_omega, nondegeneracy, certified: false }
    }

    fn certify(mut self) -> Result<Self> {
        if self.nondegeneracy < NONDEGENERACY_THRESHOLD {
            return Err(Error::DegenerateSubspace(self.nondegeneracy));
        }
        self.certified = true;
        Ok(self)
    }

    /// The `2n×2k` orthonormal basis `V`.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn modes(&self) -> usize {
        self.basis.nrows() / 2
    }

    /// `VᵀΩV`.
    pub fn gram_omega(&self) -> &DMatrix<f64> {
        &self.gram_omega
    }

    /// `|det(VᵀΩV)|`.
    pub fn nondegeneracy(&self) -> f64 {
        self.nondegeneracy
    }

    /// Whether the non-degeneracy certificate was checked and passed.
    pub fn is_symplectic(&self) -> bool {
        self.certified
    }

    /// Whether the subspace is invariant under `Ω` (a complex subspace, in
    /// the sense of the complex structure `Ω`). Coordinate subspaces and their
    /// images under symplectic rotations are complex.
    ///
    /// The shadow bound `Vol Π_F(S·B) ≥ Vol B` for symplectic `S` is a theorem
    /// on complex subspaces; on a generic symplectic subspace the orthogonal
    /// shadow of a squeezed ellipsoid can fall below it.
    pub fn is_complex(&self) -> bool {
        let n = self.modes();
        let jv = omega(n) * &self.basis;
        let inside = &self.basis * (self.basis.transpose() * &jv);
        (jv - inside).norm() <= COMPLEX_TOL * ((2 * self.k) as f64).sqrt()
    }
}

fn check_shape(m: &DMatrix<f64>) -> Result<()> {
    let rows = m.nrows();
    let cols = m.ncols();
    if rows == 0 || !rows.is_multiple_of(2) {
        return Err(Error::InvalidDimension(format!("phase-space vectors need even length, got {rows}")));
    }
    if cols == 0 || !cols.is_multiple_of(2) || cols > rows {
        return Err(Error::InvalidDimension(format!(
            "a subspace needs 2k columns with 1 ≤ k ≤ n, got {cols} columns in dimension {rows}"
        )));
    }
    Ok(())
}

fn check_distinct(idx: &[usize], bound: usize) -> Result<()> {
    if idx.is_empty() {
        return Err(Error::InvalidIndex("index set is empty".into()));
    }
    for (i, &a) in idx.iter().enumerate() {
        if a >= bound {
            return Err(Error::InvalidIndex(format!("index {a} out of range (< {bound})")));
        }
        if idx[..i].contains(&a) {
            return Err(Error::InvalidIndex(format!("index {a} repeated")));
        }
    }
    Ok(())
}

fn coordinate_basis(n: usize, modes: &[usize]) -> Result<DMatrix<f64>> {
    PhaseSpace::new(n)?;
    check_distinct(modes, n)?;
    let k = modes.len();
    let mut basis = DMatrix::zeros(2 * n, 2 * k);
    for (c, &j) in modes.iter().enumerate() {
        basis[(j, c)] = 1.0;
        basis[(n + j, k + c)] = 1.0;
    }
    Ok(basis)
}

/// The orthogonal shadow `Π_F W_σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedEllipsoid {
    /// `M = VᵀσV`; the shadow is `{y : yᵀ(2M)⁻¹y ≤ 1}`.
    pub shape: DMatrix<f64>,
    pub volume: f64,
    pub k: usize,
}

/// `(2π)ᵏ/k! · √det M`.
pub fn ellipsoid_volume(shape: &DMatrix<f64>) -> Result<f64> {
    let k = shape.nrows() / 2;
    let chol = shape
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NotPositiveDefinite(linalg::smallest_symmetric_eigenvalue(shape)))?;
    let sqrt_det: f64 = chol.l().diagonal().iter().product();
    Ok((2.0 * PI).powi(k as i32) / linalg::factorial(k) * sqrt_det)
}

/// Projects `W_σ` onto a certified symplectic subspace.
pub fn project_covariance_ellipsoid(sigma: &CovarianceMatrix, f: &SymplecticSubspace) -> Result<ProjectedEllipsoid> {
    if !f.is_symplectic() {
        return Err(Error::DegenerateSubspace(f.nondegeneracy()));
    }
    project_any(sigma, f)
}

/// Projection onto any subspace, including non-symplectic ones.
pub fn project_any(sigma: &CovarianceMatrix, f: &SymplecticSubspace) -> Result<ProjectedEllipsoid> {
    if f.basis().nrows() != sigma.dim() {
        return Err(Error::InvalidDimension(format!(
            "subspace lives in dimension {} but covariance is {}x{}",
            f.basis().nrows(),
            sigma.dim(),
            sigma.dim()
        )));
    }
    sigma.require_positive_definite()?;
    let mut shape = f.basis().transpose() * sigma.matrix() * f.basis();
    linalg::symmetrize(&mut shape);
    let volume = ellipsoid_volume(&shape)?;
    Ok(ProjectedEllipsoid { shape, volume, k: f.k() })
}

/// Lower bound `hᵏ/(2ᵏk!) = (πħ)ᵏ/k!` on `2k`-dimensional shadows of
/// quantum covariance ellipsoids.
pub fn camel_bound(k: usize, hbar: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if !(hbar > 0.0) {
        return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
    }
    Ok((PI * hbar).powi(k as i32) / linalg::factorial(k))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CamelCheck {
    pub volume: f64,
    pub bound: f64,
    pub satisfied: bool,
    pub ratio: f64,
}

impl CamelCheck {
    fn from_volume(volume: f64, bound: f64) -> Self {
        Self { volume, bound, satisfied: volume >= bound * (1.0 - VIOLATION_TOL), ratio: volume / bound }
    }
}

/// Compares the shadow of `W_σ` on `f` with `(πħ)ᵏ/k!`.
pub fn check_camel(sigma: &CovarianceMatrix, f: &SymplecticSubspace) -> Result<CamelCheck> {
    let shadow = project_covariance_ellipsoid(sigma, f)?;
    Ok(CamelCheck::from_volume(shadow.volume, camel_bound(shadow.k, sigma.hbar())?))
}

/// Same as [`check_camel`] but accepts non-symplectic subspaces.
pub fn check_camel_any(sigma: &CovarianceMatrix, f: &SymplecticSubspace) -> Result<CamelCheck> {
    let shadow = project_any(sigma, f)?;
    Ok(CamelCheck::from_volume(shadow.volume, camel_bound(shadow.k, sigma.hbar())?))
}

/// `S` applied to the coordinate subspace on modes `0..k`, orthonormalized.
pub fn random_symplectic_subspace(n: usize, k: usize, seed: u64) -> Result<SymplecticSubspace> {
    random_symplectic_subspace_with_spread(n, k, seed, SUBSPACE_SPREAD)
}

pub fn random_symplectic_subspace_with_spread(
    n: usize,
    k: usize,
    seed: u64,
    spread: f64,
) -> Result<SymplecticSubspace> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 ≤ k ≤ n, got k = {k}, n = {n}")));
    }
    let s = random_symplectic(n, seed, spread)?;
    image_of_coordinate_subspace(&s, k)
}

/// A random complex symplectic subspace: the coordinate subspace on modes
/// `0..k` moved by [`random_symplectic_rotation`].
pub fn random_complex_subspace(n: usize, k: usize, seed: u64) -> Result<SymplecticSubspace> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 ≤ k ≤ n, got k = {k}, n = {n}")));
    }
    image_of_coordinate_subspace(&random_symplectic_rotation(n, seed)?, k)
}

/// `span{S x_j, S p_j : j < k}`.
pub fn image_of_coordinate_subspace(s: &SymplecticMatrix, k: usize) -> Result<SymplecticSubspace> {
    let n = s.modes();
    let basis = coordinate_basis(n, &(0..k).collect::<Vec<_>>())?;
    let spanning = s.matrix() * basis;
    match SymplecticSubspace::from_spanning(&spanning) {
        Err(Error::DegenerateSubspace(d)) => Err(Error::Inconsistent(format!(
            "symplectic image of a coordinate subspace failed the certificate (|det| = {d:.3e})"
        ))),
        other => other,
    }
}

/// Exact volume of the orthogonal shadow of `S·B²ⁿ(R)` on the coordinate
/// subspace of the given modes: `πᵏ/k! · R²ᵏ · √det(VᵀSSᵀV)`.
pub fn ball_shadow_volume(s: &SymplecticMatrix, modes: &[usize], radius: f64) -> Result<f64> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
    }
    let v = coordinate_basis(s.modes(), modes)?;
    let k = modes.len();
    let st_v = s.matrix().transpose() * v;
    let sqrt_det = linalg::gram_sqrt_det(&st_v);
    Ok(PI.powi(k as i32) / linalg::factorial(k) * radius.powi(2 * k as i32) * sqrt_det)
}

/// `(πR²)ᵏ/k!`, the volume of `B²ᵏ(R)`.
pub fn ball_volume(k: usize, radius: f64) -> f64 {
    (PI * radius * radius).powi(k as i32) / linalg::factorial(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    pub spread: f64,
    /// Number of (trial, index set) evaluations.
    pub evaluations: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub violations: usize,
}

/// Seed of trial `index` in a campaign seeded with `seed` (SplitMix64 step).
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Randomized check of `Vol Π_k(S B²ⁿ(1)) ≥ Vol B²ᵏ(1)` over every size-`k`
/// coordinate index set, for `trials` random symplectic `S`.
pub fn nonsqueezing_campaign(n: usize, k: usize, trials: usize, seed: u64, spread: f64) -> Result<CampaignSummary> {
    PhaseSpace::new(n)?;
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 ≤ k ≤ n, got k = {k}, n = {n}")));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let index_sets = linalg::combinations(n, k);
    let reference = ball_volume(k, 1.0);
    let mut summary = CampaignSummary {
        n,
        k,
        trials,
        seed,
        spread,
        evaluations: 0,
        min_ratio: f64::INFINITY,
        max_ratio: f64::NEG_INFINITY,
        violations: 0,
    };
    for t in 0..trials {
        let s = random_symplectic(n, trial_seed(seed, t as u64), spread)?;
        for modes in &index_sets {
            let ratio = ball_shadow_volume(&s, modes, 1.0)? / reference;
            summary.evaluations += 1;
            summary.min_ratio = summary.min_ratio.min(ratio);
            summary.max_ratio = summary.max_ratio.max(ratio);
            if ratio < 1.0 - VIOLATION_TOL {
                summary.violations += 1;
            }
        }
    }
    Ok(summary)
}

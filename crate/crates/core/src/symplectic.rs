//! Phase-space conventions and linear symplectic algebra.
//!
//! Phase space is `ℝ²ⁿ` with coordinates `z = (x₁…xₙ, p₁…pₙ)` ("block-xp").
//! The symplectic product is `z ∧ z′ = z′ᵀ Ω z` with
//!
//! ```text
//!     Ω = [  0  I ]
//!         [ −I  0 ]
//! ```
//!
//! A matrix `S` is symplectic when `S Ω Sᵀ = Ω`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::projection::SymplecticSubspace;

/// Coordinate ordering of phase-space vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Ordering {
    /// `(x₁…xₙ, p₁…pₙ)`, the only ordering used internally.
    #[default]
    BlockXp,
    /// `(x₁, p₁, x₂, p₂, …)`, accepted at ingestion only.
    Interleaved,
}

/// Phase space with `n` degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseSpace {
    n: usize,
}

impl PhaseSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension("n must be at least 1".into()));
        }
        Ok(Self { n })
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn ordering(&self) -> Ordering {
        Ordering::BlockXp
    }

    /// Block-xp position of the coordinate stored at interleaved position `i`.
    pub fn interleaved_to_block(&self, i: usize) -> usize {
        if i.is_multiple_of(2) {
            i / 2
        } else {
            self.n + i / 2
        }
    }

    /// Interleaved position of the coordinate stored at block-xp position `i`.
    pub fn block_to_interleaved(&self, i: usize) -> usize {
        if i < self.n {
            2 * i
        } else {
            2 * (i - self.n) + 1
        }
    }

    /// Re-expresses a `2n×2n` matrix given in `from` ordering in block-xp ordering.
    pub fn to_block_xp(&self, m: &DMatrix<f64>, from: Ordering) -> Result<DMatrix<f64>> {
        self.check_square(m)?;
        Ok(match from {
            Ordering::BlockXp => m.clone(),
            Ordering::Interleaved => {
                let mut out = DMatrix::zeros(self.dim(), self.dim());
                for i in 0..self.dim() {
                    for j in 0..self.dim() {
                        out[(self.interleaved_to_block(i), self.interleaved_to_block(j))] = m[(i, j)];
                    }
                }
                out
            }
        })
    }

    /// Inverse of [`PhaseSpace::to_block_xp`].
    pub fn from_block_xp(&self, m: &DMatrix<f64>, to: Ordering) -> Result<DMatrix<f64>> {
        self.check_square(m)?;
        Ok(match to {
            Ordering::BlockXp => m.clone(),
            Ordering::Interleaved => {
                let mut out = DMatrix::zeros(self.dim(), self.dim());
                for i in 0..self.dim() {
                    for j in 0..self.dim() {
                        out[(self.block_to_interleaved(i), self.block_to_interleaved(j))] = m[(i, j)];
                    }
                }
                out
            }
        })
    }

    fn check_square(&self, m: &DMatrix<f64>) -> Result<()> {
        if m.nrows() != self.dim() || m.ncols() != self.dim() {
            return Err(Error::InvalidDimension(format!(
                "expected {0}x{0}, got {1}x{2}",
                self.dim(),
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(())
    }
}

/// The standard symplectic form Ω on `ℝ²ⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    omega: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.omega
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.omega
    }

    pub fn modes(&self) -> usize {
        self.omega.nrows() / 2
    }
}

/// Returns the standard form Ω for `n` degrees of freedom.
pub fn standard_form(n: usize) -> Result<SymplecticForm> {
    PhaseSpace::new(n)?;
    Ok(SymplecticForm { omega: omega(n) })
}

/// Ω as a bare matrix; `n` must be positive.
pub(crate) fn omega(n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(i, n + i)] = 1.0;
        m[(n + i, i)] = -1.0;
    }
    m
}

/// `z ∧ z2 = z2ᵀ Ω z`.
pub fn symplectic_product(z: &DVector<f64>, z2: &DVector<f64>) -> Result<f64> {
    if z.len() != z2.len() || z.is_empty() || !z.len().is_multiple_of(2) {
        return Err(Error::InvalidDimension(format!(
            "symplectic product needs two vectors of equal even length, got {} and {}",
            z.len(),
            z2.len()
        )));
    }
    Ok(wedge(z, z2))
}

/// Unchecked `z ∧ z2`: `Ωz = (p, −x)`, so the product is `x₂·p − p₂·x`.
pub(crate) fn wedge(z: &DVector<f64>, z2: &DVector<f64>) -> f64 {
    let n = z.len() / 2;
    let mut acc = 0.0;
    for i in 0..n {
        acc += z2[i] * z[n + i] - z2[n + i] * z[i];
    }
    acc
}

/// `‖M Ω Mᵀ − Ω‖_F`.
pub(crate) fn symplectic_residual(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows() / 2;
    let om = omega(n);
    (m * &om * m.transpose() - om).norm()
}

/// True iff `‖MΩMᵀ − Ω‖_F ≤ tol·max(1, ‖M‖_F²)`.
pub fn is_symplectic(m: &DMatrix<f64>, tol: f64) -> Result<bool> {
    linalg::require_square_even(m)?;
    let scale = m.norm_squared().max(1.0);
    Ok(symplectic_residual(m) <= tol * scale)
}

/// A matrix verified to satisfy `S Ω Sᵀ = Ω` at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    s: DMatrix<f64>,
    tolerance: f64,
}

impl SymplecticMatrix {
    /// Validates `m` against the defining relation at relative tolerance `tol`.
    pub fn new(m: DMatrix<f64>, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
        }
        if !is_symplectic(&m, tol)? {
            return Err(Error::NotSymplectic(symplectic_residual(&m)));
        }
        Ok(Self { s: m, tolerance: tol })
    }

    pub fn identity(n: usize) -> Result<Self> {
        PhaseSpace::new(n)?;
        Ok(Self { s: DMatrix::identity(2 * n, 2 * n), tolerance: f64::EPSILON })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.s
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.s
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn modes(&self) -> usize {
        self.s.nrows() / 2
    }

    /// `‖SΩSᵀ − Ω‖_F`.
    pub fn residual(&self) -> f64 {
        symplectic_residual(&self.s)
    }

    pub fn determinant(&self) -> f64 {
        linalg::determinant(&self.s)
    }

    /// Inverse via `S⁻¹ = −Ω Sᵀ Ω`.
    pub fn inverse(&self) -> SymplecticMatrix {
        let om = omega(self.modes());
        SymplecticMatrix { s: -(&om * self.s.transpose() * &om), tolerance: self.tolerance }
    }

    pub fn compose(&self, other: &SymplecticMatrix) -> Result<SymplecticMatrix> {
        if self.s.nrows() != other.s.nrows() {
            return Err(Error::InvalidDimension("cannot compose matrices of different size".into()));
        }
        Ok(SymplecticMatrix { s: &self.s * &other.s, tolerance: self.tolerance.max(other.tolerance) })
    }

    pub(crate) fn from_trusted(s: DMatrix<f64>, tolerance: f64) -> Self {
        Self { s, tolerance }
    }
}

/// Tolerance used to validate generated symplectic matrices.
pub const GENERATOR_TOL: f64 = 1e-10;

/// `exp(Ω H)` for a random symmetric `H` with i.i.d. entries uniform in
/// `[−spread, spread]`, deterministic in `(n, seed, spread)`.
pub fn random_symplectic(n: usize, seed: u64, spread: f64) -> Result<SymplecticMatrix> {
    PhaseSpace::new(n)?;
    if !(spread >= 0.0) || !spread.is_finite() {
        return Err(Error::InvalidParameter(format!("spread must be finite and non-negative, got {spread}")));
    }
    let dim = 2 * n;
    if spread == 0.0 {
        return SymplecticMatrix::identity(n);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let v = rng.random_range(-spread..=spread);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    let generator = omega(n) * h;
    let s = generator.exp();
    SymplecticMatrix::new(s, GENERATOR_TOL)
}

/// A random symplectic rotation (a matrix that is both symplectic and
/// orthogonal): `exp([[A, B], [−B, A]])` with `A` antisymmetric and `B`
/// symmetric, entries uniform in `[−π, π]`.
pub fn random_symplectic_rotation(n: usize, seed: u64) -> Result<SymplecticMatrix> {
    PhaseSpace::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut generator = DMatrix::zeros(2 * n, 2 * n);
    let pi = std::f64::consts::PI;
    for i in 0..n {
        for j in i..n {
            let b = rng.random_range(-pi..=pi);
            generator[(i, n + j)] = b;
            generator[(j, n + i)] = b;
            generator[(n + i, j)] = -b;
            generator[(n + j, i)] = -b;
            if j > i {
                let a = rng.random_range(-pi..=pi);
                generator[(i, j)] = a;
                generator[(j, i)] = -a;
                generator[(n + i, n + j)] = a;
                generator[(n + j, n + i)] = -a;
            }
        }
    }
    SymplecticMatrix::new(generator.exp(), GENERATOR_TOL)
}

/// Ordered symplectic basis `e₁…e_k, f₁…f_k` with `fᵢ∧eⱼ = δᵢⱼ` and
/// `eᵢ∧eⱼ = fᵢ∧fⱼ = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticBasis {
    n: usize,
    e: Vec<DVector<f64>>,
    f: Vec<DVector<f64>>,
}

/// Tolerance for the pairing relations of a [`SymplecticBasis`].
pub const BASIS_TOL: f64 = 1e-10;
/// Pairings smaller than this are treated as degenerate.
pub const PAIRING_THRESHOLD: f64 = 1e-10;

impl SymplecticBasis {
    /// Validates the pairs against the symplectic-basis relations.
    pub fn new(n: usize, e: Vec<DVector<f64>>, f: Vec<DVector<f64>>) -> Result<Self> {
        PhaseSpace::new(n)?;
        if e.len() != f.len() || e.len() > n {
            return Err(Error::InvalidBasis(format!(
                "need k ≤ n pairs, got {} e-vectors and {} f-vectors for n = {n}",
                e.len(),
                f.len()
            )));
        }
        if let Some(bad) = e.iter().chain(f.iter()).find(|v| v.len() != 2 * n) {
            return Err(Error::InvalidDimension(format!("basis vector has length {}, expected {}", bad.len(), 2 * n)));
        }
        for (ei, fi) in e.iter().zip(&f) {
            let pairing = wedge(ei, fi);
            if pairing.abs() < PAIRING_THRESHOLD * (ei.norm() * fi.norm()).max(1.0) {
                return Err(Error::DegeneratePairing(pairing));
            }
        }
        let basis = Self { n, e, f };
        let defect = basis.defect();
        if defect > BASIS_TOL * basis.scale() {
            return Err(Error::InvalidBasis(format!("pairing relations violated by {defect:.3e}")));
        }
        Ok(basis)
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, Vec::new(), Vec::new())
    }

    /// The standard basis `(x_j, p_j)` for the given 0-based modes.
    pub fn standard(n: usize, modes: &[usize]) -> Result<Self> {
        let mut e = Vec::new();
        let mut f = Vec::new();
        for &j in modes {
            if j >= n {
                return Err(Error::InvalidIndex(format!("mode {j} out of range for n = {n}")));
            }
            e.push(unit(2 * n, j));
            f.push(unit(2 * n, n + j));
        }
        Self::new(n, e, f)
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    /// Number of pairs `k`.
    pub fn len(&self) -> usize {
        self.e.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e.is_empty()
    }

    pub fn e(&self) -> &[DVector<f64>] {
        &self.e
    }

    pub fn f(&self) -> &[DVector<f64>] {
        &self.f
    }

    /// Columns `[e₁…e_k, f₁…f_k]` as a `2n×2k` matrix.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        let cols: Vec<DVector<f64>> = self.e.iter().chain(self.f.iter()).cloned().collect();
        if cols.is_empty() {
            return DMatrix::zeros(2 * self.n, 0);
        }
        DMatrix::from_columns(&cols)
    }

    /// Largest violation of the pairing relations.
    pub fn defect(&self) -> f64 {
        let k = self.e.len();
        let mut worst = 0.0f64;
        for i in 0..k {
            for j in 0..k {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((wedge(&self.f[i], &self.e[j]) - target).abs());
                if i != j {
                    worst = worst.max(wedge(&self.e[i], &self.e[j]).abs());
                    worst = worst.max(wedge(&self.f[i], &self.f[j]).abs());
                }
            }
        }
        worst
    }

    fn scale(&self) -> f64 {
        self.e.iter().chain(self.f.iter()).map(|v| v.norm_squared()).fold(1.0, f64::max)
    }
}

fn unit(dim: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(dim);
    v[i] = 1.0;
    v
}

/// Extends a partial symplectic basis to a full one of `ℝ²ⁿ`.
///
/// Candidates are the standard unit vectors, projected onto the symplectic
/// complement of the pairs found so far. The next `e` is the candidate of
/// largest norm; its partner is the candidate with the largest pairing
/// magnitude against it.
pub fn symplectic_gram_schmidt(partial: &SymplecticBasis) -> Result<SymplecticBasis> {
    let n = partial.n;
    let dim = 2 * n;
    let mut e = partial.e.clone();
    let mut f = partial.f.clone();

    while e.len() < n {
        let candidates: Vec<DVector<f64>> = (0..dim).map(|i| complement_projection(&unit(dim, i), &e, &f)).collect();
        let (pivot, norm) = candidates
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("phase space is non-empty");
        if norm < PAIRING_THRESHOLD {
            return Err(Error::DegeneratePairing(norm));
        }
        let new_e = &candidates[pivot] / norm;
        let (partner, pairing) = candidates
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != pivot)
            .map(|(i, c)| (i, wedge(c, &new_e)))
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .expect("at least two candidates");
        if pairing.abs() < PAIRING_THRESHOLD {
            return Err(Error::DegeneratePairing(pairing));
        }
        let new_f = &candidates[partner] / pairing;
        // one more projection pass against rounding drift
        let new_f = complement_projection(&new_f, &e, &f);
        let pairing = wedge(&new_f, &new_e);
        e.push(new_e);
        f.push(new_f / pairing);
    }
    SymplecticBasis::new(n, e, f)
}

/// Projection of `z` onto the symplectic complement of `span{eᵢ, fᵢ}`:
/// `z − Σ [ω(z, fᵢ) eᵢ − ω(z, eᵢ) fᵢ]` with `ω(a, b) = aᵀΩb = b ∧ a`.
fn complement_projection(z: &DVector<f64>, e: &[DVector<f64>], f: &[DVector<f64>]) -> DVector<f64> {
    let mut out = z.clone();
    for (ei, fi) in e.iter().zip(f) {
        let along_e = wedge(fi, z);
        let along_f = wedge(ei, z);
        out -= ei * along_e;
        out += fi * along_f;
    }
    out
}

/// The coordinate subspace spanned by `x_j, p_j` for the given 0-based modes.
pub fn coordinate_symplectic_subspace(n: usize, modes: &[usize]) -> Result<SymplecticSubspace> {
    SymplecticSubspace::coordinate(n, modes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn standard_form_small() {
        assert_eq!(standard_form(1).unwrap().into_matrix(), DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
        let om = standard_form(2).unwrap().into_matrix();
        let expected = DMatrix::from_row_slice(
            4,
            4,
            &[
                0.0, 0.0, 1.0, 0.0, //
                0.0, 0.0, 0.0, 1.0, //
                -1.0, 0.0, 0.0, 0.0, //
                0.0, -1.0, 0.0, 0.0,
            ],
        );
        assert_eq!(om, expected);
    }

    #[test]
    fn omega_identities() {
        let om = standard_form(3).unwrap().into_matrix();
        assert_eq!(&om * &om, -DMatrix::<f64>::identity(6, 6));
        assert_eq!(om.transpose(), -&om);
        assert!((linalg::determinant(&om) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn standard_form_rejects_zero() {
        assert!(matches!(standard_form(0), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn product_sign_convention() {
        let z = DVector::from_vec(vec![1.0, 0.0]);
        let z2 = DVector::from_vec(vec![0.0, 1.0]);
        assert_eq!(symplectic_product(&z, &z2).unwrap(), -1.0);
        assert_eq!(symplectic_product(&z2, &z).unwrap(), 1.0);
    }

    #[test]
    fn product_matches_matrix_definition() {
        let z = DVector::from_vec(vec![0.3, -1.2, 2.0, 0.7]);
        let z2 = DVector::from_vec(vec![1.1, 0.4, -0.5, 2.5]);
        let direct = (z2.transpose() * omega(2) * &z)[(0, 0)];
        assert!((symplectic_product(&z, &z2).unwrap() - direct).abs() < 1e-14);
    }

    #[test]
    fn product_dimension_mismatch() {
        let z = DVector::from_vec(vec![1.0, 0.0]);
        let z2 = DVector::from_vec(vec![0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(symplectic_product(&z, &z2), Err(Error::InvalidDimension(_))));
        let odd = DVector::from_vec(vec![1.0, 0.0, 2.0]);
        assert!(symplectic_product(&odd, &odd).is_err());
    }

    #[test]
    fn is_symplectic_examples() {
        assert!(is_symplectic(&DMatrix::identity(4, 4), 1e-12).unwrap());
        assert!(is_symplectic(&omega(3), 1e-12).unwrap());
        assert!(!is_symplectic(&DMatrix::from_diagonal_element(2, 2, 2.0), 1e-12).unwrap());
        assert!(matches!(is_symplectic(&DMatrix::identity(3, 3), 1e-12), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn random_symplectic_zero_spread_is_identity() {
        let s = random_symplectic(3, 11, 0.0).unwrap();
        assert_eq!(s.matrix(), &DMatrix::identity(6, 6));
    }

    #[test]
    fn random_symplectic_is_deterministic() {
        let a = random_symplectic(3, 42, 0.7).unwrap();
        let b = random_symplectic(3, 42, 0.7).unwrap();
        let bits = |m: &DMatrix<f64>| m.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(a.matrix()), bits(b.matrix()));
        let c = random_symplectic(3, 43, 0.7).unwrap();
        assert_ne!(a.matrix(), c.matrix());
    }

    #[test]
    fn random_symplectic_rejects_bad_spread() {
        assert!(random_symplectic(2, 0, -1.0).is_err());
        assert!(random_symplectic(2, 0, f64::NAN).is_err());
        assert!(random_symplectic(0, 0, 1.0).is_err());
    }

    #[test]
    fn inverse_is_symplectic_inverse() {
        let s = random_symplectic(2, 5, 0.8).unwrap();
        let prod = s.matrix() * s.inverse().matrix();
        assert!((prod - DMatrix::<f64>::identity(4, 4)).norm() < 1e-12);
    }

    #[test]
    fn interleaved_round_trip() {
        for n in 1..5 {
            let ps = PhaseSpace::new(n).unwrap();
            for i in 0..2 * n {
                assert_eq!(ps.block_to_interleaved(ps.interleaved_to_block(i)), i);
            }
            let m = DMatrix::from_fn(2 * n, 2 * n, |i, j| (i * 10 + j) as f64);
            let block = ps.to_block_xp(&m, Ordering::Interleaved).unwrap();
            assert_eq!(ps.from_block_xp(&block, Ordering::Interleaved).unwrap(), m);
        }
        // n = 2: the permutation swaps positions 1 and 2 and is an involution
        let ps = PhaseSpace::new(2).unwrap();
        assert_eq!((0..4).map(|i| ps.interleaved_to_block(i)).collect::<Vec<_>>(), vec![0, 2, 1, 3]);
    }

    #[test]
    fn interleaved_omega_maps_to_block_omega() {
        // interleaved Ω is block-diagonal in [[0,1],[-1,0]]
        let n = 3;
        let mut inter = DMatrix::zeros(6, 6);
        for j in 0..n {
            inter[(2 * j, 2 * j + 1)] = 1.0;
            inter[(2 * j + 1, 2 * j)] = -1.0;
        }
        let ps = PhaseSpace::new(n).unwrap();
        assert_eq!(ps.to_block_xp(&inter, Ordering::Interleaved).unwrap(), omega(n));
    }

    fn check_full_basis(partial: &SymplecticBasis, full: &SymplecticBasis) {
        assert_eq!(full.len(), full.modes());
        for (a, b) in partial.e().iter().zip(full.e()) {
            assert!((a - b).amax() <= 1e-12);
        }
        for (a, b) in partial.f().iter().zip(full.f()) {
            assert!((a - b).amax() <= 1e-12);
        }
        let m = full.to_matrix();
        assert!(is_symplectic(&m, 1e-10).unwrap());
        // pairwise products by direct evaluation
        let n = full.modes();
        for i in 0..n {
            for j in 0..n {
                let d = if i == j { 1.0 } else { 0.0 };
                assert!((symplectic_product(&full.f()[i], &full.e()[j]).unwrap() - d).abs() < 1e-10);
                assert!(symplectic_product(&full.e()[i], &full.e()[j]).unwrap().abs() < 1e-10);
                assert!(symplectic_product(&full.f()[i], &full.f()[j]).unwrap().abs() < 1e-10);
            }
        }
    }

    #[test]
    fn gram_schmidt_from_standard_pair() {
        let partial = SymplecticBasis::standard(2, &[0]).unwrap();
        let full = symplectic_gram_schmidt(&partial).unwrap();
        check_full_basis(&partial, &full);
        // the completing pair spans the (x₂, p₂) plane
        for v in [&full.e()[1], &full.f()[1]] {
            assert!(v[0].abs() < 1e-12 && v[2].abs() < 1e-12);
        }
    }

    #[test]
    fn gram_schmidt_from_empty() {
        let partial = SymplecticBasis::empty(2).unwrap();
        let full = symplectic_gram_schmidt(&partial).unwrap();
        check_full_basis(&partial, &full);
    }

    #[test]
    fn gram_schmidt_from_skewed_pair() {
        let e = DVector::from_vec(vec![1.0, 1.0, 0.0, 0.0]);
        let f = DVector::from_vec(vec![0.0, 0.0, 1.0, 0.0]);
        assert_eq!(symplectic_product(&f, &e).unwrap(), 1.0);
        let partial = SymplecticBasis::new(2, vec![e], vec![f]).unwrap();
        let full = symplectic_gram_schmidt(&partial).unwrap();
        check_full_basis(&partial, &full);
    }

    #[test]
    fn gram_schmidt_from_random_symplectic_columns() {
        for seed in 0..20 {
            let n = 4;
            let s = random_symplectic(n, seed, 0.6).unwrap();
            let k = (seed as usize % n) + 1;
            let e = (0..k).map(|j| s.matrix().column(j).into_owned()).collect();
            let f = (0..k).map(|j| s.matrix().column(n + j).into_owned()).collect();
            let partial = SymplecticBasis::new(n, e, f).unwrap();
            let full = symplectic_gram_schmidt(&partial).unwrap();
            check_full_basis(&partial, &full);
        }
    }

    #[test]
    fn degenerate_pair_is_rejected() {
        let e = DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]);
        let f = DVector::from_vec(vec![0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(SymplecticBasis::new(2, vec![e], vec![f]), Err(Error::DegeneratePairing(_))));
    }

    #[test]
    fn coordinate_subspace_examples() {
        let v = coordinate_symplectic_subspace(2, &[0]).unwrap();
        let b = v.basis();
        assert_eq!(b.ncols(), 2);
        assert_eq!(b[(0, 0)], 1.0);
        assert_eq!(b[(2, 1)], 1.0);
        let full = coordinate_symplectic_subspace(3, &[0, 1, 2]).unwrap();
        assert_eq!(full.basis().transpose() * full.basis(), DMatrix::identity(6, 6));
        assert!(full.nondegeneracy() > 0.5);
        assert!(matches!(coordinate_symplectic_subspace(2, &[2]), Err(Error::InvalidIndex(_))));
    }

    #[test]
    fn symplectic_rotations_are_orthogonal() {
        for n in 1..=4 {
            let u = random_symplectic_rotation(n, 3 + n as u64).unwrap();
            let m = u.matrix();
            let defect = (m.transpose() * m - DMatrix::<f64>::identity(2 * n, 2 * n)).norm();
            assert!(defect < 1e-12, "n = {n}: {defect}");
            assert!(u.residual() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn product_is_bilinear_and_antisymmetric(
            a in proptest::collection::vec(-10.0f64..10.0, 6),
            b in proptest::collection::vec(-10.0f64..10.0, 6),
            c in proptest::collection::vec(-10.0f64..10.0, 6),
            s in -5.0f64..5.0,
            t in -5.0f64..5.0,
        ) {
            let (a, b, c) = (DVector::from_vec(a), DVector::from_vec(b), DVector::from_vec(c));
            let scale = 1.0 + a.norm() * (b.norm() + c.norm()) * (1.0 + s.abs() + t.abs());
            let lhs = wedge(&(&a * s + &b * t), &c);
            let rhs = s * wedge(&a, &c) + t * wedge(&b, &c);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
            prop_assert!((wedge(&a, &b) + wedge(&b, &a)).abs() <= 1e-12 * scale);
            prop_assert_eq!(wedge(&a, &a), 0.0);
        }

        #[test]
        fn generated_matrices_are_symplectic(n in 1usize..5, seed in any::<u64>(), spread in 0.05f64..2.0) {
            let s = random_symplectic(n, seed, spread).unwrap();
            let scale = s.matrix().norm_squared().max(1.0);
            prop_assert!(s.residual() <= 1e-10 * scale);
            prop_assert!((s.determinant() - 1.0).abs() <= 1e-8);
        }
    }
}

//! Small dense linear-algebra helpers shared by the other modules.

use nalgebra::{ComplexField, DMatrix, DVector, RealField};

use crate::error::{Error, Result};

pub(crate) fn frobenius(m: &DMatrix<f64>) -> f64 {
    m.norm()
}

/// Symmetric eigendecomposition with eigenvalues sorted ascending and the
/// eigenvector columns permuted to match.
pub(crate) fn sorted_symmetric_eigen(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(m.nrows(), order.len());
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub(crate) fn smallest_symmetric_eigenvalue(m: &DMatrix<f64>) -> f64 {
    m.clone().symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// `f(A)` for symmetric positive definite `A`, applied through the spectrum.
pub(crate) fn symmetric_function(
    values: &DVector<f64>,
    vectors: &DMatrix<f64>,
    f: impl Fn(f64) -> f64,
) -> DMatrix<f64> {
    let scaled = DMatrix::from_fn(vectors.nrows(), vectors.ncols(), |i, j| vectors[(i, j)] * f(values[j]));
    let mut out = &scaled * vectors.transpose();
    symmetrize(&mut out);
    out
}

pub(crate) fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
}

/// Relative asymmetry `‖A − Aᵀ‖_F / max(‖A‖_F, tiny)`.
pub(crate) fn relative_asymmetry(m: &DMatrix<f64>) -> f64 {
    let scale = frobenius(m).max(f64::MIN_POSITIVE);
    (m - m.transpose()).norm() / scale
}

pub(crate) fn determinant(m: &DMatrix<f64>) -> f64 {
    m.clone().lu().determinant()
}

/// `sqrt(det(AᵀA))` for a tall matrix `A`, from the diagonal of its QR factor.
/// Avoids squaring the condition number of `A`.
pub(crate) fn gram_sqrt_det(a: &DMatrix<f64>) -> f64 {
    let r = a.clone().qr().r();
    r.diagonal().iter().map(|d| d.abs()).product()
}

/// Orthonormal basis of the column span of a full-rank tall matrix.
pub(crate) fn orthonormal_columns(a: &DMatrix<f64>) -> DMatrix<f64> {
    a.clone().qr().q()
}

/// Characteristic polynomial `det(tI − A) = Σ c_k t^{m−k}` by the
/// Faddeev–LeVerrier recursion. Returns `c_0 … c_m` with `c_0 = 1`.
///
/// The matrix is rescaled to unit max-norm first and the coefficients
/// mapped back, which keeps the recursion well inside floating range.
pub(crate) fn faddeev_leverrier<T>(a: &DMatrix<T>) -> Vec<T>
where
    T: ComplexField,
    T::RealField: RealField + Copy,
{
    let m = a.nrows();
    let scale = a.iter().map(|x| x.clone().abs()).fold(nalgebra::convert::<f64, T::RealField>(0.0), |acc, x| {
        if x > acc {
            x
        } else {
            acc
        }
    });
    if scale == nalgebra::convert::<f64, T::RealField>(0.0) {
        let mut c = vec![T::zero(); m + 1];
        c[0] = T::one();
        return c;
    }
    let b = a.map(|x| x.unscale(scale));
    let identity = DMatrix::<T>::identity(m, m);
    let mut coeffs = Vec::with_capacity(m + 1);
    coeffs.push(T::one());
    let mut mk = DMatrix::<T>::zeros(m, m);
    for k in 1..=m {
        mk = &b * &mk + &identity * coeffs[k - 1].clone();
        let ak = &b * &mk;
        let kf = T::from_real(nalgebra::convert::<f64, T::RealField>(k as f64));
        coeffs.push(-(ak.trace() / kf));
    }
    let mut power = nalgebra::convert::<f64, T::RealField>(1.0);
    for c in coeffs.iter_mut().skip(1) {
        power *= scale;
        *c = c.clone().scale(power);
    }
    coeffs
}

/// Product of polynomials given in descending powers.
pub(crate) fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Elementary symmetric polynomials `e_0 … e_m` of the given values.
pub(crate) fn elementary_symmetric(values: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; values.len() + 1];
    e[0] = 1.0;
    for (count, &v) in values.iter().enumerate() {
        for j in (1..=count + 1).rev() {
            e[j] += v * e[j - 1];
        }
    }
    e
}

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub(crate) fn relative_difference(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

pub(crate) fn require_square_even(m: &DMatrix<f64>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidDimension(format!("expected a square matrix, got {}x{}", m.nrows(), m.ncols())));
    }
    if m.nrows() == 0 || !m.nrows().is_multiple_of(2) {
        return Err(Error::InvalidDimension(format!(
            "phase-space matrices need even positive dimension, got {}",
            m.nrows()
        )));
    }
    Ok(m.nrows() / 2)
}

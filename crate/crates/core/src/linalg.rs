//! Small dense complex linear algebra used by the Lie-theoretic modules.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn fro_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_norm(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Maximum absolute column sum.
pub fn one_norm(a: &CMat) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn is_finite(a: &CMat) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `⟨a, b⟩ = a† b`, conjugate-linear in the first slot.
pub fn inner(a: &CVec, b: &CVec) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn trace(a: &CMat) -> Complex64 {
    (0..a.nrows()).map(|k| a[(k, k)]).sum()
}

pub fn anti_hermitian_part(a: &CMat) -> CMat {
    (a - a.adjoint()).scale(0.5)
}

pub fn hermitian_part(a: &CMat) -> CMat {
    (a + a.adjoint()).scale(0.5)
}

pub fn inverse(a: &CMat) -> Result<CMat> {
    if a.nrows() != a.ncols() {
        return Err(Error::Shape(alloc::format!(
            "cannot invert a {}x{} matrix",
            a.nrows(),
            a.ncols()
        )));
    }
    let inv = a
        .clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::Singular("LU factorization hit a zero pivot".into()))?;
    if !is_finite(&inv) {
        return Err(Error::Singular("inverse has non-finite entries".into()));
    }
    Ok(inv)
}

// Padé [13/13] coefficients for the scaling-and-squaring exponential.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring around a degree-13 Padé approximant.
pub fn expm(a: &CMat) -> Result<CMat> {
    if a.nrows() != a.ncols() {
        return Err(Error::Shape("expm needs a square matrix".into()));
    }
    if !is_finite(a) {
        return Err(Error::Numeric("expm argument has non-finite entries".into()));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(CMat::zeros(0, 0));
    }
    let norm = one_norm(a);
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.scale(0.5f64.powi(squarings));
    let id = identity(n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = &PADE13;
    let u_inner = &a6 * (a6.scale(b[13]) + a4.scale(b[11]) + a2.scale(b[9]))
        + a6.scale(b[7])
        + a4.scale(b[5])
        + a2.scale(b[3])
        + id.scale(b[1]);
    let u = &scaled * u_inner;
    let v = &a6 * (a6.scale(b[12]) + a4.scale(b[10]) + a2.scale(b[8]))
        + a6.scale(b[6])
        + a4.scale(b[4])
        + a2.scale(b[2])
        + id.scale(b[0]);
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .ok_or_else(|| Error::Singular("Padé denominator is singular".into()))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    if !is_finite(&r) {
        return Err(Error::Numeric("matrix exponential overflowed".into()));
    }
    Ok(r)
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn hermitian_function(h: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let eig = hermitian_part(h).symmetric_eigen();
    let n = h.nrows();
    let mut d = CMat::zeros(n, n);
    for k in 0..n {
        d[(k, k)] = c(f(eig.eigenvalues[k]), 0.0);
    }
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Right null space of a real matrix together with its singular values.
///
/// Returned singular values are sorted in decreasing order; null vectors are
/// the right singular vectors whose singular value is below `cutoff`.
pub fn real_null_space(m: &DMatrix<f64>, cutoff: f64) -> (Vec<DVector<f64>>, Vec<f64>) {
    let cols = m.ncols();
    // pad so that the SVD returns a full set of right singular vectors
    let rows = m.nrows().max(cols);
    let mut padded = DMatrix::<f64>::zeros(rows, cols);
    padded.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[j]
            .partial_cmp(&svd.singular_values[i])
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let sigma: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
    let null = order
        .iter()
        .filter(|&&k| svd.singular_values[k] < cutoff)
        .map(|&k| vt.row(k).transpose())
        .collect();
    (null, sigma)
}

/// Numerical rank at an absolute singular-value cutoff.
pub fn real_rank(m: &DMatrix<f64>, cutoff: f64) -> usize {
    let (_, sigma) = real_null_space(m, cutoff);
    sigma.iter().filter(|&&s| s >= cutoff).count()
}

/// Stacks real and imaginary parts of a complex vector.
pub fn realify(v: &CVec) -> DVector<f64> {
    let n = v.len();
    DVector::from_fn(2 * n, |k, _| if k < n { v[k].re } else { v[k - n].im })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm_of_zero_is_identity() {
        let z = CMat::zeros(3, 3);
        assert!(fro_norm(&(expm(&z).unwrap() - identity(3))) < 1e-15);
    }

    #[test]
    fn expm_matches_diagonal_exponential() {
        let mut a = CMat::zeros(2, 2);
        a[(0, 0)] = c(1.0, 0.5);
        a[(1, 1)] = c(-3.0, 2.0);
        let e = expm(&a).unwrap();
        assert!((e[(0, 0)] - a[(0, 0)].exp()).norm() < 1e-14);
        assert!((e[(1, 1)] - a[(1, 1)].exp()).norm() < 1e-14);
        assert!(e[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn expm_large_norm_nilpotent() {
        // exp of a nilpotent is a finite polynomial
        let mut a = CMat::zeros(2, 2);
        a[(0, 1)] = c(40.0, 0.0);
        let e = expm(&a).unwrap();
        assert!((e[(0, 1)] - c(40.0, 0.0)).norm() < 1e-11);
        assert!((e[(0, 0)] - c(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn expm_rejects_nan() {
        let mut a = CMat::zeros(2, 2);
        a[(0, 0)] = c(f64::NAN, 0.0);
        assert!(matches!(expm(&a), Err(Error::Numeric(_))));
    }

    #[test]
    fn inverse_of_singular_fails() {
        let a = CMat::zeros(2, 2);
        assert!(inverse(&a).is_err());
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let m = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let (null, sigma) = real_null_space(&m, 1e-10);
        assert_eq!(null.len(), 2);
        assert!((sigma[0] - 2f64.sqrt()).abs() < 1e-14);
        for v in null {
            assert!((v[0] + v[1]).abs() < 1e-12);
        }
    }
}

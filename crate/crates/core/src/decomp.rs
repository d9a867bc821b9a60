//! SVD-backed rank, pseudoinverse and inverse, on top of LAPACK.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Inverse, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::tolerance::ToleranceConfig;

struct Svd {
    u: Option<Array2<Complex64>>,
    /// Descending.
    s: Array1<f64>,
    vt: Option<Array2<Complex64>>,
}

fn svd(a: &ComplexMatrix, op: &'static str, vectors: bool) -> Result<Svd> {
    a.require_nonempty(op)?;
    let (u, s, vt) = a.to_ndarray().svd(vectors, vectors).map_err(|e| Error::Decomposition {
        op,
        detail: format!("SVD of a {}x{} matrix: {e}", a.rows(), a.cols()),
    })?;
    Ok(Svd { u, s, vt })
}

/// Singular values in descending order.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(svd(a, "singular_values", false)?.s.to_vec())
}

/// Largest singular value (spectral norm); zero for an empty matrix.
pub fn spectral_norm(a: &ComplexMatrix) -> Result<f64> {
    if a.is_empty() {
        return Ok(0.0);
    }
    Ok(singular_values(a)?.first().copied().unwrap_or(0.0))
}

/// Number of singular values above `rank_rel_tol * sigma_max`; zero when
/// `sigma_max` itself is zero.
pub fn numeric_rank(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<usize> {
    let sv = singular_values(a)?;
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    if sigma_max == 0.0 {
        return Ok(0);
    }
    Ok(count_above(&sv, cfg.rank_rel_tol * sigma_max))
}

/// Rank measured against an externally supplied scale instead of the matrix's
/// own `sigma_max`. Powers `A^k` are ranked against `sigma_max(A)^k`, so
/// rounding noise left in an exactly nilpotent power does not count as rank.
pub(crate) fn rank_against_scale(a: &ComplexMatrix, scale: f64, cfg: &ToleranceConfig) -> Result<usize> {
    let sv = singular_values(a)?;
    if scale == 0.0 {
        return Ok(sv.iter().filter(|&&s| s > cfg.zero_abs_tol).count());
    }
    Ok(count_above(&sv, cfg.rank_rel_tol * scale))
}

fn count_above(sv: &[f64], threshold: f64) -> usize {
    sv.iter().filter(|&&s| s > threshold).count()
}

/// Moore-Penrose pseudoinverse; singular values at or below the rank threshold
/// are treated as zero.
pub fn pseudoinverse(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    let dec = svd(a, "pseudoinverse", true)?;
    let sigma_max = dec.s.first().copied().unwrap_or(0.0);
    let keep = count_above(dec.s.as_slice().expect("contiguous"), cfg.rank_rel_tol * sigma_max);
    assemble_pinv(&dec, keep, "pseudoinverse")
}

/// Pseudoinverse that keeps exactly the `rank` largest singular values.
pub(crate) fn pseudoinverse_with_rank(a: &ComplexMatrix, rank: usize) -> Result<ComplexMatrix> {
    let dec = svd(a, "pseudoinverse", true)?;
    let rank = rank.min(dec.s.len());
    assemble_pinv(&dec, rank, "pseudoinverse")
}

fn assemble_pinv(dec: &Svd, keep: usize, op: &'static str) -> Result<ComplexMatrix> {
    let missing = || Error::Decomposition {
        op,
        detail: "singular vectors unavailable".into(),
    };
    let u = dec.u.as_ref().ok_or_else(missing)?;
    let vt = dec.vt.as_ref().ok_or_else(missing)?;
    let (m, n) = (u.nrows(), vt.ncols());
    let mut out = Array2::<Complex64>::zeros((n, m));
    for k in 0..keep {
        let s = dec.s[k];
        if s <= 0.0 {
            continue;
        }
        let inv = 1.0 / s;
        // A^+ = V diag(1/s) U^H
        for i in 0..n {
            let vik = vt[(k, i)].conj() * inv;
            for j in 0..m {
                out[(i, j)] += vik * u[(j, k)].conj();
            }
        }
    }
    Ok(ComplexMatrix::from_ndarray(&out))
}

/// Exact inverse by LU; errors on a singular matrix.
pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.require_square("inverse")?;
    a.require_nonempty("inverse")?;
    let inv = a.to_ndarray().inv().map_err(|_| Error::Singular { op: "inverse" })?;
    let out = ComplexMatrix::from_ndarray(&inv);
    if out.as_slice().iter().any(|z| !z.is_finite()) {
        return Err(Error::Singular { op: "inverse" });
    }
    Ok(out)
}

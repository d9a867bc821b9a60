//! Index computation, the pseudoinverse-based Drazin oracle, and verification
//! of the g-Drazin defining equations.
//!
//! For square matrices the g-Drazin and Drazin inverses coincide, and
//! quasinilpotency of `A - A^2 B` reduces to nilpotency, which is what
//! [`verify_gdrazin`] measures.

use serde::{Deserialize, Serialize};

use crate::decomp::{pseudoinverse_with_rank, rank_against_scale, spectral_norm};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::tolerance::ToleranceConfig;

/// Defects of the three defining equations, each divided by `1 + |A|_F`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `|BAB - B|`
    pub reflexive: f64,
    /// `|AB - BA|`
    pub commutator: f64,
    /// `|(A - A^2 B)^n|`
    pub nilpotent: f64,
    pub passed: bool,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.reflexive.max(self.commutator).max(self.nilpotent)
    }
}

#[derive(Clone, Debug)]
pub struct DrazinResult {
    pub inverse: ComplexMatrix,
    pub index: usize,
    /// `I - A A^D`
    pub projector: ComplexMatrix,
    pub residuals: Residuals,
}

/// Index together with the rank of the core part, `rank(A^k)`.
pub(crate) struct IndexInfo {
    pub index: usize,
    pub core_rank: usize,
    pub power: ComplexMatrix,
}

pub(crate) fn index_info(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<IndexInfo> {
    index_info_with_floor(a, 0.0, cfg)
}

/// As [`index_info`], but ranks are measured against at least `floor^k`, so a
/// matrix that is rounding noise on the `floor` scale counts as zero.
pub(crate) fn index_info_with_floor(a: &ComplexMatrix, floor: f64, cfg: &ToleranceConfig) -> Result<IndexInfo> {
    let n = a.require_square("drazin_index")?;
    a.require_nonempty("drazin_index")?;
    let norm = spectral_norm(a)?;
    if norm <= floor * cfg.rank_rel_tol {
        return Ok(IndexInfo {
            index: 1,
            core_rank: 0,
            power: a.clone(),
        });
    }

    // rank(A^k) is measured against sigma_max(A)^k so the decision is scale free
    let mut power = ComplexMatrix::identity(n);
    let mut rank = n;
    let sigma = norm.max(floor);
    let mut scale = 1.0;
    for k in 0..=n {
        let next = &power * a;
        let next_scale = scale * sigma;
        let next_rank = rank_against_scale(&next, next_scale, cfg)?;
        if next_rank == rank {
            return Ok(IndexInfo {
                index: k,
                core_rank: rank,
                power,
            });
        }
        power = next;
        rank = next_rank;
        scale = next_scale;
    }
    Err(Error::NumericInstability {
        op: "drazin_index",
        detail: format!("rank of powers did not stabilise within {n} steps"),
    })
}

/// Smallest `k` with `rank(A^k) == rank(A^{k+1})`.
pub fn drazin_index(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<usize> {
    Ok(index_info(a, cfg)?.index)
}

/// Brute-force Drazin inverse `A^k (A^{2k+1})^+ A^k` with `k = i(A)`.
///
/// The pseudoinverse keeps exactly `rank(A^k)` singular values, which is the
/// rank of every power from `k` on. The result is verified before returning.
pub fn drazin_oracle(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<DrazinResult> {
    let info = index_info(a, cfg)?;
    let n = a.rows();
    let inverse = if info.core_rank == 0 {
        ComplexMatrix::zeros(n, n)
    } else {
        let ak = &info.power;
        let odd = &(ak * ak) * a;
        let pinv = pseudoinverse_with_rank(&odd, info.core_rank)?;
        &(ak * &pinv) * ak
    };
    let projector = &ComplexMatrix::identity(n) - &(a * &inverse);
    let residuals = verify_gdrazin(a, &inverse, cfg)?;
    if !residuals.passed {
        return Err(Error::Verification {
            context: "drazin_oracle",
            residuals,
        });
    }
    Ok(DrazinResult {
        inverse,
        index: info.index,
        projector,
        residuals,
    })
}

/// Residuals of `BAB = B`, `AB = BA` and nilpotency of `A - A^2 B`.
pub fn verify_gdrazin(a: &ComplexMatrix, b: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Residuals> {
    let n = a.require_square("verify_gdrazin")?;
    a.require_same_shape(b, "verify_gdrazin")?;
    let denom = 1.0 + a.frobenius_norm();
    let ab = a * b;
    let ba = b * a;
    let reflexive = (&(&ba * b) - b).frobenius_norm() / denom;
    let commutator = (&ab - &ba).frobenius_norm() / denom;
    let defect = a - &(a * &ab);
    let nilpotent = defect.pow(n)?.frobenius_norm() / denom;
    let tol = cfg.residual_tol;
    Ok(Residuals {
        reflexive,
        commutator,
        nilpotent,
        passed: reflexive <= tol && commutator <= tol && nilpotent <= tol,
    })
}

/// `I - A A^d`.
pub fn spectral_projector(a: &ComplexMatrix, ad: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.require_square("spectral_projector")?;
    a.require_same_shape(ad, "spectral_projector")?;
    Ok(&ComplexMatrix::identity(n) - &(a * ad))
}

/// Cline's formula: given `(AB)^d`, returns `B ((AB)^d)^2 A = (BA)^d`.
pub fn cline_transfer(a: &ComplexMatrix, b: &ComplexMatrix, ab_d: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.cols() != b.rows() || b.cols() != a.rows() {
        return Err(Error::DimensionMismatch {
            op: "cline_transfer",
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: b.rows(),
            right_cols: b.cols(),
        });
    }
    if ab_d.shape() != (a.rows(), a.rows()) {
        return Err(Error::DimensionMismatch {
            op: "cline_transfer",
            left_rows: a.rows(),
            left_cols: a.rows(),
            right_rows: ab_d.rows(),
            right_cols: ab_d.cols(),
        });
    }
    Ok(&(&(b * ab_d) * ab_d) * a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::inverse;

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn index_examples() {
        assert_eq!(drazin_index(&ComplexMatrix::identity(3), &cfg()).unwrap(), 0);
        assert_eq!(drazin_index(&real(&[&[0.0, 1.0], &[0.0, 0.0]]), &cfg()).unwrap(), 2);
        assert_eq!(drazin_index(&ComplexMatrix::zeros(2, 2), &cfg()).unwrap(), 1);
        // rank sequence of M = [[E, I], [F, 0]] for the reference pair: 4, 3, 2, 1, 1
        let m = real(&[
            &[1.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
        ]);
        assert_eq!(drazin_index(&m, &cfg()).unwrap(), 3);
    }

    #[test]
    fn index_of_non_square_fails() {
        assert!(matches!(
            drazin_index(&ComplexMatrix::zeros(2, 3), &cfg()),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn oracle_invertible() {
        let a = real(&[&[2.0, 1.0], &[1.0, 3.0]]);
        let r = drazin_oracle(&a, &cfg()).unwrap();
        assert_eq!(r.index, 0);
        assert!(r.inverse.max_abs_diff(&inverse(&a).unwrap()) < 1e-14);
        assert!(r.projector.max_abs() < 1e-14);
    }

    #[test]
    fn oracle_nilpotent() {
        let n = real(&[&[0.0, 2.0, 1.0], &[0.0, 0.0, 3.0], &[0.0, 0.0, 0.0]]);
        let r = drazin_oracle(&n, &cfg()).unwrap();
        assert_eq!(r.index, 3);
        assert!(r.inverse.is_zero());
        assert_eq!(r.projector, ComplexMatrix::identity(3));
    }

    #[test]
    fn oracle_reference_block_matrix() {
        let m = real(&[
            &[1.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
        ]);
        let expected = real(&[
            &[1.0, 1.0, 1.0, 1.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
        ]);
        let r = drazin_oracle(&m, &cfg()).unwrap();
        assert!(r.inverse.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn verify_examples() {
        let n = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(verify_gdrazin(&n, &ComplexMatrix::zeros(2, 2), &cfg()).unwrap().passed);
        let i = ComplexMatrix::identity(2);
        let two_i = i.scale(2.0.into());
        let r = verify_gdrazin(&i, &two_i, &cfg()).unwrap();
        assert!(!r.passed);
        assert!(r.reflexive > 1.0);
        assert!(r.commutator == 0.0);
        assert!(verify_gdrazin(&i, &ComplexMatrix::zeros(3, 3), &cfg()).is_err());
    }

    #[test]
    fn projector_examples() {
        let a = real(&[&[2.0, 0.0], &[1.0, 1.0]]);
        let ad = inverse(&a).unwrap();
        assert!(spectral_projector(&a, &ad).unwrap().max_abs() < 1e-15);
        let n = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert_eq!(
            spectral_projector(&n, &ComplexMatrix::zeros(2, 2)).unwrap(),
            ComplexMatrix::identity(2)
        );
        assert!(spectral_projector(&n, &ComplexMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn cline_examples() {
        let i = ComplexMatrix::identity(2);
        let i_d = drazin_oracle(&i, &cfg()).unwrap().inverse;
        assert!(cline_transfer(&i, &i, &i_d).unwrap().max_abs_diff(&i_d) < 1e-15);
        let a = real(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let b = inverse(&a).unwrap();
        let ab_d = drazin_oracle(&(&a * &b), &cfg()).unwrap().inverse;
        assert!(cline_transfer(&a, &b, &ab_d).unwrap().max_abs_diff(&i) < 1e-13);
        assert!(cline_transfer(&a, &ComplexMatrix::zeros(3, 2), &ab_d).is_err());
    }
}

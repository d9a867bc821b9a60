//! The two auxiliary representations the block formulas are built from:
//! lower block-triangular matrices and sums `P + Q` with `PQ^2 = 0`, `PQP = 0`.

use super::conditions::ConditionReport;
use super::series::{last_nilpotent_term, sum_series, Powers};
use super::{verify_if, SeriesOptions};
use crate::drazin::drazin_oracle;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::tolerance::ToleranceConfig;

/// g-Drazin inverse of `[[A, 0], [C, B]]`.
pub fn triangular_drazin(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    triangular_drazin_with(a, b, c, cfg, SeriesOptions::default())
}

pub fn triangular_drazin_with(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    cfg: &ToleranceConfig,
    opts: SeriesOptions,
) -> Result<ComplexMatrix> {
    let p = a.require_square("triangular_drazin")?;
    let q = b.require_square("triangular_drazin")?;
    if c.shape() != (q, p) {
        return Err(Error::DimensionMismatch {
            op: "triangular_drazin",
            left_rows: q,
            left_cols: p,
            right_rows: c.rows(),
            right_cols: c.cols(),
        });
    }
    let ao = drazin_oracle(a, cfg)?;
    let bo = drazin_oracle(b, cfg)?;
    let extra = opts.extra_terms;

    let last_a = last_nilpotent_term(ao.index, 0, 0, extra);
    let last_b = last_nilpotent_term(bo.index, 0, 0, extra);
    let depth = last_a.unwrap_or(0).max(last_b.unwrap_or(0));
    let a_pow = Powers::new(a, depth);
    let ad_pow = Powers::new(&ao.inverse, depth);
    let b_pow = Powers::new(b, depth);
    let bd_pow = Powers::new(&bo.inverse, depth);

    // (B^d)^i C A^i A^pi vanishes once A^i A^pi does
    let rect = |f: &dyn Fn(usize) -> ComplexMatrix, last: Option<usize>| {
        let mut acc = ComplexMatrix::zeros(q, p);
        if let Some(last) = last {
            for i in 0..=last {
                let t = f(i);
                if t.is_zero() {
                    break;
                }
                acc += &t;
            }
        }
        acc
    };
    let first = rect(&|i| &(&(bd_pow.get(i) * c) * a_pow.get(i)) * &ao.projector, last_a);
    let second = rect(&|i| &(&(&bo.projector * b_pow.get(i)) * c) * ad_pow.get(i), last_b);

    let bd2 = &bo.inverse * &bo.inverse;
    let ad2 = &ao.inverse * &ao.inverse;
    let mut x = &bd2 * &first;
    x += &(&second * &ad2);
    x -= &(&(&bo.inverse * c) * &ao.inverse);

    let md = ComplexMatrix::from_blocks(&ao.inverse, &ComplexMatrix::zeros(p, q), &x, &bo.inverse)?;
    let m = ComplexMatrix::from_blocks(a, &ComplexMatrix::zeros(p, q), c, b)?;
    verify_if(cfg!(debug_assertions), &m, &md, cfg, "triangular_drazin")?;
    Ok(md)
}

/// `PQ^2 = 0` and `PQP = 0`, tested against `zero_abs_tol (1 + |P|)(1 + |Q|)^2`.
pub fn check_additive(p: &ComplexMatrix, q: &ComplexMatrix, cfg: &ToleranceConfig) -> [ConditionReport; 2] {
    let qs = 1.0 + q.frobenius_norm();
    let threshold = cfg.zero_abs_tol * (1.0 + p.frobenius_norm()) * qs * qs;
    let pq = p * q;
    [
        ConditionReport::new("PQ^2 = 0", &(&pq * q), threshold),
        ConditionReport::new("PQP = 0", &(&pq * p), threshold),
    ]
}

/// g-Drazin inverse of `P + Q` when `PQ^2 = 0` and `PQP = 0`.
pub fn additive_drazin(p: &ComplexMatrix, q: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    additive_drazin_with(p, q, cfg, SeriesOptions::default())
}

pub fn additive_drazin_with(
    p: &ComplexMatrix,
    q: &ComplexMatrix,
    cfg: &ToleranceConfig,
    opts: SeriesOptions,
) -> Result<ComplexMatrix> {
    let n = p.require_square("additive_drazin")?;
    p.require_same_shape(q, "additive_drazin")?;
    let reports = check_additive(p, q, cfg);
    if !reports.iter().all(|r| r.holds) {
        return Err(Error::ConditionViolation {
            context: "additive_drazin",
            reports: reports.to_vec(),
        });
    }

    let po = drazin_oracle(p, cfg)?;
    let qo = drazin_oracle(q, cfg)?;
    let (pd, pp) = (&po.inverse, &po.projector);
    let (qd, qp) = (&qo.inverse, &qo.projector);
    let extra = opts.extra_terms;

    // Q^pi Q^i and P^i P^pi vanish at the respective indices
    let last_q = last_nilpotent_term(qo.index, 0, 0, extra);
    let last_p = last_nilpotent_term(po.index, 0, 0, extra);
    let last_p1 = last_nilpotent_term(po.index, 1, 0, extra);
    let depth = last_q.unwrap_or(0).max(last_p.unwrap_or(0)) + 4;
    let p_pow = Powers::new(p, depth);
    let pd_pow = Powers::new(pd, depth);
    let q_pow = Powers::new(q, depth);
    let qd_pow = Powers::new(qd, depth);

    let mut out = sum_series(n, 0, last_q, |i| &(qp * q_pow.get(i)) * pd_pow.get(i + 1));
    out += &sum_series(n, 0, last_p, |i| &(qd_pow.get(i + 1) * p_pow.get(i)) * pp);
    out += &sum_series(n, 0, last_q, |i| &(&(qp * q_pow.get(i)) * pd_pow.get(i + 2)) * q);
    out += &sum_series(n, 0, last_p1, |i| {
        &(&(qd_pow.get(i + 3) * p_pow.get(i + 1)) * pp) * q
    });
    out -= &(&(qd * pd) * q);
    out -= &(&(&(qd_pow.get(2) * p) * pd) * q);

    verify_if(cfg!(debug_assertions), &(p + q), &out, cfg, "additive_drazin")?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn idempotent_scalar_triangle() {
        let one = real(&[&[1.0]]);
        let zero = real(&[&[0.0]]);
        let md = triangular_drazin(&one, &zero, &one, &cfg()).unwrap();
        assert!(md.max_abs_diff(&real(&[&[1.0, 0.0], &[1.0, 0.0]])) < 1e-15);
    }

    #[test]
    fn zero_coupling_is_block_diagonal() {
        let a = real(&[&[2.0, 1.0], &[0.0, 0.0]]);
        let b = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let md = triangular_drazin(&a, &b, &ComplexMatrix::zeros(2, 2), &cfg()).unwrap();
        let ad = drazin_oracle(&a, &cfg()).unwrap().inverse;
        let expected = ComplexMatrix::from_blocks(
            &ad,
            &ComplexMatrix::zeros(2, 2),
            &ComplexMatrix::zeros(2, 2),
            &ComplexMatrix::zeros(2, 2),
        )
        .unwrap();
        assert!(md.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn rectangular_coupling() {
        let a = real(&[&[1.0, 1.0], &[0.0, 0.0]]);
        let b = real(&[&[0.5]]);
        let c = real(&[&[1.0, -2.0]]);
        let md = triangular_drazin(&a, &b, &c, &cfg()).unwrap();
        let m = ComplexMatrix::from_blocks(&a, &ComplexMatrix::zeros(2, 1), &c, &b).unwrap();
        let oracle = drazin_oracle(&m, &cfg()).unwrap().inverse;
        assert!(md.max_abs_diff(&oracle) < 1e-12);
        assert!(triangular_drazin(&a, &b, &c.adjoint(), &cfg()).is_err());
    }

    #[test]
    fn additive_collapses() {
        let q = real(&[&[2.0, 1.0], &[0.0, 0.0]]);
        let qd = drazin_oracle(&q, &cfg()).unwrap().inverse;
        let zero = ComplexMatrix::zeros(2, 2);
        assert!(additive_drazin(&zero, &q, &cfg()).unwrap().max_abs_diff(&qd) < 1e-14);
        assert!(additive_drazin(&q, &zero, &cfg()).unwrap().max_abs_diff(&qd) < 1e-14);
    }

    #[test]
    fn additive_rejects_violating_pair() {
        let i = ComplexMatrix::identity(2);
        let err = additive_drazin(&i, &i.scale(Complex64::new(0.5, 0.0)), &cfg()).unwrap_err();
        match err {
            Error::ConditionViolation { reports, .. } => assert!(reports.iter().all(|r| !r.holds)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn additive_with_annihilating_pair() {
        // P = [[A, 0], [B, 0]], Q = [[0, 0], [C, D]] gives PQ = 0
        let p = real(&[&[1.0, 0.0, 0.0], &[0.5, 0.0, 0.0], &[-1.0, 0.0, 0.0]]);
        let q = real(&[&[0.0, 0.0, 0.0], &[1.0, 0.0, 1.0], &[2.0, 0.0, 0.0]]);
        assert!((&p * &q).is_zero());
        let sum = drazin_oracle(&(&p + &q), &cfg()).unwrap().inverse;
        assert!(additive_drazin(&p, &q, &cfg()).unwrap().max_abs_diff(&sum) < 1e-12);
    }
}

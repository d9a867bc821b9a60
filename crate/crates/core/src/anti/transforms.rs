//! Relatives of `M = [[E, I], [F, 0]]` whose inverses follow from `M^d`:
//! the flipped matrix `[[E, F], [I, 0]]` and the second-order companion
//! `[[E, -F], [-I, 0]]`.

use num_complex::Complex64;

use super::conditions::{all_hold, check_t23, check_t26_with_projector};
use super::t23::t23_blocks;
use super::t26::{correction_factors, t26_assemble};
use super::series::last_nilpotent_term;
use super::{verify_if, AntiTriangularInput, BlockQuadruple, Ingredients, Method, SeriesOptions};
use crate::drazin::{drazin_index, drazin_oracle};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// `M^d` together with the representation that produced it.
#[derive(Clone, Debug)]
pub struct MethodResult {
    pub inverse: ComplexMatrix,
    pub method: Method,
    /// Closed-form blocks (`Gamma..Xi` or `Theta..Omega`); `None` for the oracle.
    pub blocks: Option<BlockQuadruple>,
}

/// `M^d` by a forced method, or with `None` the first applicable of t23, t26,
/// oracle.
pub fn drazin_by_method(input: &AntiTriangularInput, method: Option<Method>) -> Result<MethodResult> {
    drazin_by_method_with(input, method, SeriesOptions::default())
}

pub fn drazin_by_method_with(
    input: &AntiTriangularInput,
    method: Option<Method>,
    opts: SeriesOptions,
) -> Result<MethodResult> {
    let ing = Ingredients::of(input)?;
    let t23_reports = check_t23(input);
    let t26_reports = check_t26_with_projector(input, &ing.fp);
    let chosen = match method {
        Some(m) => m,
        None if all_hold(&t23_reports) => Method::T23,
        None if all_hold(&t26_reports) => Method::T26,
        None => Method::Oracle,
    };
    let m = input.block_matrix();
    let result = match chosen {
        Method::T23 => {
            if !all_hold(&t23_reports) {
                return Err(Error::ConditionViolation {
                    context: "anti_triangular_drazin_t23",
                    reports: t23_reports.to_vec(),
                });
            }
            let blocks = t23_blocks(input, &ing, opts);
            MethodResult {
                inverse: blocks.assemble(),
                method: Method::T23,
                blocks: Some(blocks),
            }
        }
        Method::T26 => {
            if !all_hold(&t26_reports) {
                return Err(Error::ConditionViolation {
                    context: "anti_triangular_drazin_t26",
                    reports: t26_reports.to_vec(),
                });
            }
            let out = t26_assemble(input, &ing, opts)?;
            MethodResult {
                inverse: out.inverse,
                method: Method::T26,
                blocks: Some(out.blocks),
            }
        }
        Method::Oracle => MethodResult {
            inverse: drazin_oracle(&m, input.cfg())?.inverse,
            method: Method::Oracle,
            blocks: None,
        },
    };
    verify_if(input.verifies(), &m, &result.inverse, input.cfg(), "drazin_by_method")?;
    Ok(result)
}

fn minus(m: &ComplexMatrix) -> ComplexMatrix {
    m.scale(Complex64::new(-1.0, 0.0))
}

/// `[[E, F], [I, 0]]^d = [[E, I], [I, 0]] M^d [[0, I], [I, -E]]`.
pub fn flipped_from_block_inverse(input: &AntiTriangularInput, md: &ComplexMatrix) -> ComplexMatrix {
    let n = input.n();
    let (id, zero) = (ComplexMatrix::identity(n), ComplexMatrix::zeros(n, n));
    let left = ComplexMatrix::from_blocks(input.e(), &id, &id, &zero).expect("n x n blocks");
    let right = ComplexMatrix::from_blocks(&zero, &id, &id, &minus(input.e())).expect("n x n blocks");
    &(&left * md) * &right
}

/// `[[E, -F], [-I, 0]]^d = [[E, I], [-I, 0]] (M^d)^2 [[I, 0], [0, -F]]`.
pub fn second_order_from_block_inverse(input: &AntiTriangularInput, md: &ComplexMatrix) -> ComplexMatrix {
    let n = input.n();
    let (id, zero) = (ComplexMatrix::identity(n), ComplexMatrix::zeros(n, n));
    let left = ComplexMatrix::from_blocks(input.e(), &id, &minus(&id), &zero).expect("n x n blocks");
    let right = ComplexMatrix::from_blocks(&id, &zero, &zero, &minus(input.f())).expect("n x n blocks");
    &(&(&left * md) * md) * &right
}

/// g-Drazin inverse of `[[E, F], [I, 0]]` under the t26 hypotheses, by
/// conjugating the t26 representation of `M^d`.
pub fn anti_triangular_flipped(input: &AntiTriangularInput) -> Result<ComplexMatrix> {
    anti_triangular_flipped_with(input, SeriesOptions::default())
}

pub fn anti_triangular_flipped_with(input: &AntiTriangularInput, opts: SeriesOptions) -> Result<ComplexMatrix> {
    let md = drazin_by_method_with(input, Some(Method::T26), opts)?.inverse;
    let out = flipped_from_block_inverse(input, &md);
    verify_if(
        input.verifies(),
        &input.flipped_matrix(),
        &out,
        input.cfg(),
        "anti_triangular_flipped",
    )?;
    Ok(out)
}

/// The same inverse with the conjugation carried into the blocks:
/// `[[E Psi + Omega, E Theta - E Psi E + Phi - Omega E], [Psi, Theta - Psi E]]`
/// plus `sum_i diag(FF^d, F^d) D^i G^i H'`.
pub fn anti_triangular_flipped_explicit(input: &AntiTriangularInput) -> Result<ComplexMatrix> {
    let ing = Ingredients::of(input)?;
    let reports = check_t26_with_projector(input, &ing.fp);
    if !all_hold(&reports) {
        return Err(Error::ConditionViolation {
            context: "anti_triangular_flipped",
            reports: reports.to_vec(),
        });
    }
    let n = input.n();
    let (e, f) = (input.e(), input.f());
    let id = ComplexMatrix::identity(n);
    let q = super::t26::t26_blocks(input, &ing, SeriesOptions::default());
    let (theta, psi, phi, omega) = (&q.b11, &q.b12, &q.b21, &q.b22);
    let e_psi = e * psi;
    let f_psi = f * psi;

    let b11 = &e_psi + omega;
    let b12 = &(&(&(e * theta) - &(&e_psi * e)) + phi) - &(omega * e);
    let b22 = theta - &(psi * e);
    let mut out = ComplexMatrix::from_blocks(&b11, &b12, psi, &b22)?;

    let (d, g, _) = correction_factors(input, &ing, &q);
    let h = ComplexMatrix::from_blocks(
        &minus(&e_psi),
        &(&(&id - &(e * theta)) + &(&e_psi * e)),
        &(&id - &f_psi),
        &(&(&(&f_psi * e) - e) - &(f * theta)),
    )?;
    let ffd = f * &ing.fd;
    let diag = ComplexMatrix::from_blocks(&ffd, &ComplexMatrix::zeros(n, n), &ComplexMatrix::zeros(n, n), &ing.fd)?;
    let last = last_nilpotent_term(drazin_index(&g, input.cfg())?, 0, 0, 0);
    let mut dg = ComplexMatrix::identity(2 * n);
    let mut gh = h;
    if let Some(last) = last {
        for i in 0..=last {
            if i > 0 {
                dg = &dg * &d;
                gh = &g * &gh;
            }
            out += &(&(&diag * &dg) * &gh);
        }
    }
    verify_if(
        input.verifies(),
        &input.flipped_matrix(),
        &out,
        input.cfg(),
        "anti_triangular_flipped",
    )?;
    Ok(out)
}

/// `[[E, -F], [-I, 0]]^d` from the best available `M^d`.
pub fn second_order_transform(input: &AntiTriangularInput) -> Result<MethodResult> {
    second_order_transform_with(input, SeriesOptions::default())
}

pub fn second_order_transform_with(input: &AntiTriangularInput, opts: SeriesOptions) -> Result<MethodResult> {
    let inner = drazin_by_method_with(input, None, opts)?;
    let out = second_order_from_block_inverse(input, &inner.inverse);
    verify_if(
        input.verifies(),
        &input.second_order_matrix(),
        &out,
        input.cfg(),
        "second_order_transform",
    )?;
    Ok(MethodResult {
        inverse: out,
        method: inner.method,
        blocks: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::inverse;
    use crate::tolerance::ToleranceConfig;

    fn pair(e: ComplexMatrix, f: ComplexMatrix) -> AntiTriangularInput {
        AntiTriangularInput::new(e, f, ToleranceConfig::default()).unwrap()
    }

    fn oracle(m: &ComplexMatrix) -> ComplexMatrix {
        drazin_oracle(m, &ToleranceConfig::default()).unwrap().inverse
    }

    #[test]
    fn auto_prefers_t23_then_t26() {
        let reference = AntiTriangularInput::reference_pair();
        assert_eq!(drazin_by_method(&reference, None).unwrap().method, Method::T23);
        let i = ComplexMatrix::identity(2);
        let ident = pair(i.clone(), i.clone());
        let r = drazin_by_method(&ident, None).unwrap();
        assert_eq!(r.method, Method::T26);
        assert!(r.inverse.max_abs_diff(&inverse(&ident.block_matrix()).unwrap()) < 1e-12);
        assert!(matches!(
            drazin_by_method(&ident, Some(Method::T23)),
            Err(Error::ConditionViolation { .. })
        ));
    }

    #[test]
    fn auto_falls_back_to_oracle() {
        // F nilpotent of index 3 with E = I violates both hypothesis sets
        let f = ComplexMatrix::from_real_rows(&[[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]]).unwrap();
        let input = pair(ComplexMatrix::identity(3), f);
        let r = drazin_by_method(&input, None).unwrap();
        assert_eq!(r.method, Method::Oracle);
        assert!(r.blocks.is_none());
    }

    #[test]
    fn flipped_self_inverse() {
        let input = pair(ComplexMatrix::zeros(2, 2), ComplexMatrix::identity(2));
        let m = input.flipped_matrix();
        assert!(anti_triangular_flipped(&input).unwrap().max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn flipped_reference_pair_and_conjugation() {
        let input = AntiTriangularInput::reference_pair();
        let fd = anti_triangular_flipped(&input).unwrap();
        assert!(fd.max_abs_diff(&oracle(&input.flipped_matrix())) < 1e-12);
        assert!(fd.max_abs_diff(&anti_triangular_flipped_explicit(&input).unwrap()) < 1e-12);

        let n = input.n();
        let s = ComplexMatrix::from_blocks(
            &ComplexMatrix::zeros(n, n),
            &ComplexMatrix::identity(n),
            &ComplexMatrix::identity(n),
            &minus(input.e()),
        )
        .unwrap();
        let md = oracle(&input.block_matrix());
        let back = &(&s * &fd) * &inverse(&s).unwrap();
        assert!(back.max_abs_diff(&md) < 1e-12);
    }

    #[test]
    fn flipped_explicit_matches_on_mixed_f() {
        let e = ComplexMatrix::from_real_rows(&[[1.0, -1.0], [0.0, 0.0]]).unwrap();
        let f = ComplexMatrix::from_real_rows(&[[2.0, 0.0], [0.0, 0.0]]).unwrap();
        let input = pair(e, f);
        let a = anti_triangular_flipped(&input).unwrap();
        let b = anti_triangular_flipped_explicit(&input).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
        assert!(a.max_abs_diff(&oracle(&input.flipped_matrix())) < 1e-12);
    }

    #[test]
    fn second_order_cases() {
        let z = ComplexMatrix::zeros(2, 2);
        let nil = second_order_transform(&pair(z.clone(), z.clone())).unwrap();
        assert!(nil.inverse.max_abs() < 1e-15);

        let reference = AntiTriangularInput::reference_pair();
        let r = second_order_transform(&reference).unwrap();
        assert!(r.inverse.max_abs_diff(&oracle(&reference.second_order_matrix())) < 1e-12);

        let f = ComplexMatrix::from_real_rows(&[[2.0, 1.0], [0.0, -1.0]]).unwrap();
        let input = pair(z, f);
        let n = second_order_transform(&input).unwrap().inverse;
        assert!(n.max_abs_diff(&inverse(&input.second_order_matrix()).unwrap()) < 1e-12);
    }
}

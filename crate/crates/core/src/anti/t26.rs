//! Representation of `M^d` under `F^pi E F^2 = 0`, `F^pi E F E = 0`.
//!
//! `M^d = [[Theta, Psi], [Phi, Omega]] + sum_i D^(i+1) G^i H` where
//! `D = [[0, F^d], [FF^d, -EF^d]]`, `G = [[F^pi E + FF^d E F^pi, F^pi], [FF^pi, 0]]`
//! and `H = [[I - E Theta, -E Psi], [-F Theta, I - F Psi]]`. `H` is the spectral
//! projector of `G`, so the correction series stops at `i(G)`.
//!
//! The four blocks come from the `EF^2 = 0`, `EFE = 0` representation applied
//! to the corner pair `(F^pi E, F F^pi)` and are composed as the expanded
//! brackets are, so every `F^i F^pi` series stays in powers of `E^d`.

use super::conditions::{all_hold, check_t26_with_projector};
use super::series::{chain, last_nilpotent_term, sum_series, Powers};
use super::{verify_if, AntiTriangularInput, BlockQuadruple, Ingredients, Method, SeriesOptions};
use crate::drazin::index_info_with_floor;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

#[derive(Clone, Debug)]
pub struct T26Output {
    /// The assembled `2n x 2n` inverse, blocks plus correction series.
    pub inverse: ComplexMatrix,
    /// `Theta, Psi, Phi, Omega`.
    pub blocks: BlockQuadruple,
    /// Index of `G`, the number of nonzero correction terms.
    pub correction_terms: usize,
}

pub fn anti_triangular_drazin_t26(input: &AntiTriangularInput) -> Result<T26Output> {
    anti_triangular_drazin_t26_with(input, SeriesOptions::default())
}

pub fn anti_triangular_drazin_t26_with(input: &AntiTriangularInput, opts: SeriesOptions) -> Result<T26Output> {
    let ing = Ingredients::of(input)?;
    let reports = check_t26_with_projector(input, &ing.fp);
    if !all_hold(&reports) {
        return Err(Error::ConditionViolation {
            context: "anti_triangular_drazin_t26",
            reports: reports.to_vec(),
        });
    }
    let out = t26_assemble(input, &ing, opts)?;
    verify_if(
        input.verifies(),
        &input.block_matrix(),
        &out.inverse,
        input.cfg(),
        "anti_triangular_drazin_t26",
    )?;
    Ok(out)
}

pub(crate) fn t26_blocks(input: &AntiTriangularInput, ing: &Ingredients, opts: SeriesOptions) -> BlockQuadruple {
    let n = input.n();
    let (e, f) = (input.e(), input.f());
    let Ingredients { ed, fp, t, .. } = ing;
    let extra = opts.extra_terms;

    // corner pair a = F^pi E, c = F F^pi: a c^2 = 0, a c a = 0, a^d = F^pi E^d and
    // c is nilpotent with c^i = F^i F^pi, zero from i = t on
    let a = fp * e;
    let c = f * fp;
    let ad = fp * ed;
    let depth = *t + extra + 1;
    let adp = Powers::new(&ad, 2 * depth + 5);
    let cp = Powers::new(&c, depth + 1);

    // sum_i c^(i+lead) (a^d)^(2i+odd) (I + (a^d)^2 c), i.e. the blocks of
    // [[a, I], [c, 0]]^d, where c^d = 0 removes every other term
    let series = |lead: usize, odd: usize| {
        sum_series(n, 0, last_nilpotent_term(*t, lead, 0, extra), |i| {
            let head = cp.get(i + lead) * adp.get(2 * i + odd);
            &head + &chain(&[cp.get(i + lead), adp.get(2 * i + odd + 2), &c])
        })
    };
    let gamma = series(0, 1);
    let delta = series(0, 2);
    let lambda = series(1, 2);
    let xi = series(1, 3);

    let a_delta_xi = &(&a * &delta) + &xi;
    let a_gamma_lambda = &(&a * &gamma) + &lambda;
    let mixed = &a_gamma_lambda - &(&a_delta_xi * &a);
    let gamma_delta_a = &gamma - &(&delta * &a);

    let theta = &(&a_delta_xi * &a_gamma_lambda) + &(&mixed * &gamma);
    let psi = &(&(&a_delta_xi * &a_delta_xi) + &(&mixed * &delta)) * fp;
    let phi = &c * &(&(&delta * &a_gamma_lambda) + &(&gamma_delta_a * &gamma));
    let omega = chain(&[&c, &(&(&delta * &a_delta_xi) + &(&gamma_delta_a * &delta)), fp]);

    BlockQuadruple {
        b11: theta,
        b12: psi,
        b21: phi,
        b22: omega,
        source: Method::T26,
    }
}

pub(crate) fn t26_assemble(input: &AntiTriangularInput, ing: &Ingredients, opts: SeriesOptions) -> Result<T26Output> {
    let blocks = t26_blocks(input, ing, opts);
    let (d, g, h) = correction_factors(input, ing, &blocks);
    // G is built from the projector F^pi, so unit scale separates a zero G
    // from rounding noise
    let index_g = index_info_with_floor(&g, 1.0, input.cfg())?.index;
    let last = last_nilpotent_term(index_g, 0, 0, opts.extra_terms);
    let count = last.map_or(0, |l| l + 1);

    let mut inverse = blocks.assemble();
    let mut d_pow = d.clone();
    let mut g_pow_h = h;
    for i in 0..count {
        if i > 0 {
            d_pow = &d_pow * &d;
            g_pow_h = &g * &g_pow_h;
        }
        let term = &d_pow * &g_pow_h;
        if term.is_zero() {
            break;
        }
        inverse += &term;
    }
    Ok(T26Output {
        inverse,
        blocks,
        correction_terms: index_g,
    })
}

/// `(D, G, H)` of the correction series.
pub(crate) fn correction_factors(
    input: &AntiTriangularInput,
    ing: &Ingredients,
    blocks: &BlockQuadruple,
) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let n = input.n();
    let (e, f) = (input.e(), input.f());
    let (fd, fp) = (&ing.fd, &ing.fp);
    let id = ComplexMatrix::identity(n);
    let zero = ComplexMatrix::zeros(n, n);
    let ffd = f * fd;

    let d = ComplexMatrix::from_blocks(&zero, fd, &ffd, &-&(e * fd)).expect("n x n blocks");
    let g11 = &(fp * e) + &chain(&[&ffd, e, fp]);
    let g = ComplexMatrix::from_blocks(&g11, fp, &(f * fp), &zero).expect("n x n blocks");
    let h = ComplexMatrix::from_blocks(
        &(&id - &(e * &blocks.b11)),
        &-&(e * &blocks.b12),
        &-&(f * &blocks.b11),
        &(&id - &(f * &blocks.b12)),
    )
    .expect("n x n blocks");
    (d, g, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anti::anti_triangular_drazin_t23;
    use crate::decomp::inverse;
    use crate::drazin::drazin_oracle;
    use crate::tolerance::ToleranceConfig;

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn invertible_m() {
        let n = 2;
        let input = AntiTriangularInput::new(
            ComplexMatrix::zeros(n, n),
            ComplexMatrix::identity(n),
            ToleranceConfig::default(),
        )
        .unwrap();
        let out = anti_triangular_drazin_t26(&input).unwrap();
        let expected = ComplexMatrix::from_blocks(
            &ComplexMatrix::zeros(n, n),
            &ComplexMatrix::identity(n),
            &ComplexMatrix::identity(n),
            &ComplexMatrix::zeros(n, n),
        )
        .unwrap();
        assert!(out.inverse.max_abs_diff(&expected) < 1e-14);
        assert!(out.blocks.assemble().max_abs() < 1e-14);
    }

    #[test]
    fn agrees_with_t23_on_reference_pair() {
        let input = AntiTriangularInput::reference_pair();
        let a = anti_triangular_drazin_t23(&input).unwrap().assemble();
        let b = anti_triangular_drazin_t26(&input).unwrap().inverse;
        assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn mixed_spectrum_f() {
        // F = diag(2, 0): F^pi = diag(0, 1); E chosen with F^pi E = 0
        let e = real(&[&[1.0, -1.0], &[0.0, 0.0]]);
        let f = real(&[&[2.0, 0.0], &[0.0, 0.0]]);
        let input = AntiTriangularInput::new(e, f, ToleranceConfig::default()).unwrap();
        let out = anti_triangular_drazin_t26(&input).unwrap();
        let oracle = drazin_oracle(&input.block_matrix(), input.cfg()).unwrap().inverse;
        assert!(out.inverse.max_abs_diff(&oracle) < 1e-12);
    }

    #[test]
    fn identity_pair_is_inverse() {
        let i = ComplexMatrix::identity(2);
        let input = AntiTriangularInput::new(i.clone(), i, ToleranceConfig::default()).unwrap();
        let out = anti_triangular_drazin_t26(&input).unwrap();
        let m_inv = inverse(&input.block_matrix()).unwrap();
        assert!(out.inverse.max_abs_diff(&m_inv) < 1e-12);
    }

    #[test]
    fn rejects_violating_pair() {
        // F nilpotent so F^pi = I, and E F^2 != 0 needs index 3
        let f = real(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]]);
        let input = AntiTriangularInput::new(ComplexMatrix::identity(3), f, ToleranceConfig::default()).unwrap();
        assert!(matches!(
            anti_triangular_drazin_t26(&input),
            Err(Error::ConditionViolation { .. })
        ));
    }
}

//! Block representation of `M^d` under `EF^2 = 0`, `EFE = 0`.
//!
//! The proof route is `M^d = M (M^2)^d` with `M^2` split as `P + Q`,
//! `P = [[E^2, E], [0, 0]]`, `Q = [[F, 0], [FE, F]]`; the blocks below are the
//! expanded result. The `F^i F^pi` series in the first block row carry powers
//! of `E^d` (not of `E`), matching the second block row; with powers of `E`
//! the result is wrong whenever `F` has index 2 or more.

use super::conditions::{all_hold, check_t23};
use super::series::{chain, last_even_term, last_nilpotent_term, sum_series, Powers};
use super::{verify_if, AntiTriangularInput, BlockQuadruple, Ingredients, Method, SeriesOptions};
use crate::error::{Error, Result};

pub fn anti_triangular_drazin_t23(input: &AntiTriangularInput) -> Result<BlockQuadruple> {
    anti_triangular_drazin_t23_with(input, SeriesOptions::default())
}

pub fn anti_triangular_drazin_t23_with(input: &AntiTriangularInput, opts: SeriesOptions) -> Result<BlockQuadruple> {
    let reports = check_t23(input);
    if !all_hold(&reports) {
        return Err(Error::ConditionViolation {
            context: "anti_triangular_drazin_t23",
            reports: reports.to_vec(),
        });
    }
    let ing = Ingredients::of(input)?;
    let blocks = t23_blocks(input, &ing, opts);
    verify_if(
        input.verifies(),
        &input.block_matrix(),
        &blocks.assemble(),
        input.cfg(),
        "anti_triangular_drazin_t23",
    )?;
    Ok(blocks)
}

pub(crate) fn t23_blocks(input: &AntiTriangularInput, ing: &Ingredients, opts: SeriesOptions) -> BlockQuadruple {
    let n = input.n();
    let (e, f) = (input.e(), input.f());
    let Ingredients { ed, ep, s, fd, fp, t } = ing;
    let (s, t, extra) = (*s, *t, opts.extra_terms);

    let nil = |shift| last_nilpotent_term(t, shift, 1, extra);
    let even = |offset| last_even_term(s, offset, extra);
    let depth = s.max(t) + extra + 1;
    let ep_ = Powers::new(e, 2 * depth + 6);
    let edp = Powers::new(ed, 2 * depth + 6);
    let fp_ = Powers::new(f, depth + 4);
    let fdp = Powers::new(fd, depth + 4);
    let (e_, ed_, f_, fd_) = (|k| ep_.get(k), |k| edp.get(k), |k| fp_.get(k), |k| fdp.get(k));
    let ffd = f * fd;

    let mut gamma = ed.clone();
    gamma += &chain(&[ed_(3), f]);
    gamma -= &chain(&[fd, ed, f]);
    gamma -= &chain(&[fd_(2), e_(2), ed, f]);
    gamma -= &chain(&[&ffd, ed]);
    gamma += &chain(&[fd, e, ep]);
    gamma += &chain(&[fd_(2), e, f]);
    gamma -= &chain(&[&ffd, ed_(3), f]);
    gamma += &chain(&[fd_(3), e_(3), ep, f]);
    gamma += &sum_series(n, 1, nil(0), |i| chain(&[f_(i), fp, ed_(2 * i + 1)]));
    gamma += &sum_series(n, 1, even(1), |i| chain(&[fd_(i + 1), e_(2 * i + 1), ep]));
    gamma += &sum_series(n, 1, nil(0), |i| chain(&[f_(i), fp, ed_(2 * i + 3), f]));
    gamma += &sum_series(n, 1, even(3), |i| chain(&[fd_(i + 3), e_(2 * i + 3), ep, f]));

    let mut delta = ed_(2).clone();
    delta += &chain(&[ed_(4), f]);
    delta -= &chain(&[fd, ed_(2), f]);
    delta -= &chain(&[fd_(2), e, ed, f]);
    delta -= &chain(&[&ffd, ed_(2)]);
    delta += &chain(&[fd, ep]);
    delta -= &chain(&[&ffd, ed_(4), f]);
    delta += &chain(&[fd_(3), e_(2), ep, f]);
    delta += &sum_series(n, 1, nil(0), |i| chain(&[f_(i), fp, ed_(2 * i + 2)]));
    delta += &sum_series(n, 1, even(0), |i| chain(&[fd_(i + 1), e_(2 * i), ep]));
    delta += &sum_series(n, 1, nil(0), |i| chain(&[f_(i), fp, ed_(2 * i + 4), f]));
    delta += &sum_series(n, 1, even(2), |i| chain(&[fd_(i + 3), e_(2 * i + 2), ep, f]));

    let mut lambda = chain(&[f, fp, ed_(2)]);
    lambda += &chain(&[&ffd, ep]);
    lambda += &chain(&[f, fp, ed_(4), f]);
    lambda += &chain(&[fd_(2), e_(2), ep, f]);
    lambda -= &chain(&[&ffd, ed_(2), f]);
    lambda -= &chain(&[fd, e, ed, f]);
    lambda += &sum_series(n, 1, nil(1), |i| chain(&[f_(i + 1), fp, ed_(2 * i + 2)]));
    lambda += &sum_series(n, 1, even(0), |i| chain(&[fd_(i), e_(2 * i), ep]));
    lambda += &sum_series(n, 1, nil(1), |i| chain(&[f_(i + 1), fp, ed_(2 * i + 4), f]));
    lambda += &sum_series(n, 1, even(2), |i| chain(&[fd_(i + 2), e_(2 * i + 2), ep, f]));

    let mut xi = -&chain(&[&ffd, ed_(3), f]);
    xi -= &chain(&[fd, ed, f]);
    xi += &chain(&[f, fp, ed_(3)]);
    xi -= &chain(&[&ffd, ed]);
    xi += &chain(&[f, fp, ed_(5), f]);
    xi -= &chain(&[fd_(2), e_(2), ed, f]);
    xi += &chain(&[fd_(2), e, f]);
    xi += &sum_series(n, 1, nil(1), |i| chain(&[f_(i + 1), fp, ed_(2 * i + 3)]));
    xi += &sum_series(n, 1, even(-1), |i| chain(&[fd_(i), e_(2 * i - 1), ep]));
    xi += &sum_series(n, 1, nil(1), |i| chain(&[f_(i + 1), fp, ed_(2 * i + 5), f]));
    xi += &sum_series(n, 1, even(1), |i| chain(&[fd_(i + 2), e_(2 * i + 1), ep, f]));

    BlockQuadruple {
        b11: gamma,
        b12: delta,
        b21: lambda,
        b22: xi,
        source: Method::T23,
    }
}

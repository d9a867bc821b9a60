//! Seeded random instances that satisfy the block hypotheses by construction.
//!
//! Zero products are produced structurally (block patterns, conjugated by a
//! permutation or a well-conditioned similarity) so they hold to rounding
//! rather than by cancellation. Invertible cores are scaled unitaries, which
//! keeps `E^d` and `F^d` well conditioned.

use ndarray_linalg::QR;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::conditions::{all_hold, check_t23, check_t26};
use super::AntiTriangularInput;
use crate::decomp::inverse;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::tolerance::ToleranceConfig;

/// Pairs with `EF^2 = 0` and `EFE = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum T23Family {
    /// `E = [[A, 0], [B, 0]]`, `F = [[0, 0], [C, D]]`, so `EF = 0`.
    EfZero,
    /// `E = [[A, B], [0, 0]]`, `F = [[0, C], [0, 0]]` with `AC != 0`.
    Coupled,
}

/// Pairs with `F^pi E F^2 = 0` and `F^pi E F E = 0`, `F = S diag(K, N) S^-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum T26Family {
    /// `N` empty, `E` arbitrary.
    InvertibleF,
    /// `F^pi E = 0`.
    ProjectedZero,
    /// A coupled t23 pair sits in the nilpotent block, so `F^pi E != 0`.
    EmbeddedT23,
}

impl T23Family {
    pub const ALL: [T23Family; 2] = [T23Family::EfZero, T23Family::Coupled];
}

impl T26Family {
    pub const ALL: [T26Family; 3] = [T26Family::InvertibleF, T26Family::ProjectedZero, T26Family::EmbeddedT23];
}

struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn scalar(&mut self) -> Complex64 {
        Complex64::new(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0))
    }

    fn dense(&mut self, rows: usize, cols: usize, scale: f64) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.scalar() * scale)
    }

    /// `rho U` with `U` unitary and `rho` in `[0.8, 1.2]`.
    fn unitary(&mut self, n: usize) -> ComplexMatrix {
        if n == 0 {
            return ComplexMatrix::zeros(0, 0);
        }
        let g = self.dense(n, n, 1.0).to_ndarray();
        let (q, _) = g.qr().expect("QR of a square matrix");
        let rho = self.rng.gen_range(0.8..1.2);
        ComplexMatrix::from_ndarray(&q).scale(Complex64::new(rho, 0.0))
    }

    fn strictly_upper(&mut self, n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |r, c| if c > r { self.scalar() * 0.5 } else { Complex64::default() })
    }

    /// `I + U/4` for a random unitary `U`; condition number at most 5/3.
    fn similarity(&mut self, n: usize) -> (ComplexMatrix, ComplexMatrix) {
        let u = self.unitary(n);
        let rho = u.row(0).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let s = &ComplexMatrix::identity(n) + &u.scale(Complex64::new(0.25 / rho, 0.0));
        let si = inverse(&s).expect("I + U/4 is invertible");
        (s, si)
    }

    /// `S diag(rho U, N) S^-1` with a random split, so index and core rank vary.
    fn core_nilpotent(&mut self, n: usize) -> ComplexMatrix {
        let k = self.rng.gen_range(0..=n);
        self.core_nilpotent_split(n, k)
    }

    fn core_nilpotent_split(&mut self, n: usize, k: usize) -> ComplexMatrix {
        let core = self.unitary(k);
        let nil = self.strictly_upper(n - k);
        let d = diag(&core, &nil);
        let (s, si) = self.similarity(n);
        &(&s * &d) * &si
    }

    fn split(&mut self, n: usize) -> usize {
        self.rng.gen_range(1..n)
    }

    fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(&mut self.rng);
        p
    }
}

fn diag(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (p, q) = (a.rows(), b.rows());
    ComplexMatrix::from_fn(p + q, p + q, |r, c| match (r < p, c < p) {
        (true, true) => a[(r, c)],
        (false, false) => b[(r - p, c - p)],
        _ => Complex64::default(),
    })
}

fn blocks(b11: &ComplexMatrix, b12: &ComplexMatrix, b21: &ComplexMatrix, b22: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_blocks(b11, b12, b21, b22).expect("conformable blocks")
}

fn permute(m: &ComplexMatrix, perm: &[usize]) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(perm[r], perm[c])])
}

fn require_size(op: &'static str, n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidArgument {
            op,
            detail: format!("block size {n} is below the family minimum {min}"),
        });
    }
    Ok(())
}

fn confirm(op: &'static str, ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::NumericInstability {
            op,
            detail: format!("generated pair fails {what}"),
        })
    }
}

/// A pair of `n x n` blocks satisfying `EF^2 = 0`, `EFE = 0`.
pub fn generate_t23_instance(n: usize, family: T23Family, seed: u64) -> Result<AntiTriangularInput> {
    const OP: &str = "generate_t23_instance";
    let mut s = Sampler::new(seed);
    let (e, f) = match family {
        T23Family::EfZero if n == 1 => {
            let x = s.unitary(1);
            let zero = ComplexMatrix::zeros(1, 1);
            if s.rng.gen_bool(0.5) {
                (x, zero)
            } else {
                (zero, x)
            }
        }
        T23Family::EfZero => {
            require_size(OP, n, 1)?;
            let p = s.split(n);
            let q = n - p;
            let a = s.core_nilpotent(p);
            let b = s.dense(q, p, 0.5);
            let c = s.dense(q, p, 0.5);
            let d = s.core_nilpotent(q);
            let e = blocks(&a, &ComplexMatrix::zeros(p, q), &b, &ComplexMatrix::zeros(q, q));
            let f = blocks(&ComplexMatrix::zeros(p, p), &ComplexMatrix::zeros(p, q), &c, &d);
            (e, f)
        }
        T23Family::Coupled => {
            require_size(OP, n, 2)?;
            let (e, f) = coupled_pair(&mut s, n);
            let perm = s.permutation(n);
            (permute(&e, &perm), permute(&f, &perm))
        }
    };
    let input = AntiTriangularInput::new(e, f, ToleranceConfig::default())?;
    confirm(OP, all_hold(&check_t23(&input)), "EF^2 = 0, EFE = 0")?;
    if family == T23Family::Coupled {
        confirm(OP, super::coupling_norm(&input) > 0.0, "EF != 0")?;
    }
    Ok(input)
}

/// `E = [[A, B], [0, 0]]`, `F = [[0, C], [0, 0]]`, `A` a scaled unitary.
fn coupled_pair(s: &mut Sampler, n: usize) -> (ComplexMatrix, ComplexMatrix) {
    let p = s.split(n);
    let q = n - p;
    let a = s.unitary(p);
    let b = s.dense(p, q, 0.5);
    let c = s.dense(p, q, 0.5);
    let zp = ComplexMatrix::zeros(p, p);
    let zq = ComplexMatrix::zeros(q, q);
    let zqp = ComplexMatrix::zeros(q, p);
    (blocks(&a, &b, &zqp, &zq), blocks(&zp, &c, &zqp, &zq))
}

/// A pair satisfying `F^pi E F^2 = 0`, `F^pi E F E = 0`.
pub fn generate_t26_instance(n: usize, family: T26Family, seed: u64) -> Result<AntiTriangularInput> {
    const OP: &str = "generate_t26_instance";
    let mut s = Sampler::new(seed);
    let (e, f) = match family {
        T26Family::InvertibleF => {
            require_size(OP, n, 1)?;
            let f = s.core_nilpotent_split(n, n);
            (s.core_nilpotent(n), f)
        }
        T26Family::ProjectedZero | T26Family::EmbeddedT23 => {
            require_size(OP, n, 2)?;
            let k = s.split(n);
            let m = n - k;
            let core = s.unitary(k);
            let x = s.core_nilpotent(k);
            let y = s.dense(k, m, 0.5);
            let (en, nil) = match family {
                T26Family::ProjectedZero => (ComplexMatrix::zeros(m, m), s.strictly_upper(m)),
                _ if m == 1 => (s.unitary(1), ComplexMatrix::zeros(1, 1)),
                _ => coupled_pair(&mut s, m),
            };
            let e0 = blocks(&x, &y, &ComplexMatrix::zeros(m, k), &en);
            let d = diag(&core, &nil);
            let (sim, sim_inv) = s.similarity(n);
            (&(&sim * &e0) * &sim_inv, &(&sim * &d) * &sim_inv)
        }
    };
    let input = AntiTriangularInput::new(e, f, ToleranceConfig::default())?;
    confirm(OP, all_hold(&check_t26(&input)?), "F^pi E F^2 = 0, F^pi E F E = 0")?;
    Ok(input)
}

/// `P = [[A, 0], [B, 0]]`, `Q = [[0, 0], [C, D]]` (so `PQ = 0`), under a shared
/// permutation. For `n = 1` one of the two is zero.
pub fn random_annihilating_pair(n: usize, seed: u64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let mut s = Sampler::new(seed);
    require_size("random_annihilating_pair", n, 1)?;
    if n == 1 {
        let x = s.unitary(1);
        let zero = ComplexMatrix::zeros(1, 1);
        return Ok(if s.rng.gen_bool(0.5) { (x, zero) } else { (zero, x) });
    }
    let p = s.split(n);
    let q = n - p;
    let a = s.core_nilpotent(p);
    let b = s.dense(q, p, 0.5);
    let c = s.dense(q, p, 0.5);
    let d = s.core_nilpotent(q);
    let pm = blocks(&a, &ComplexMatrix::zeros(p, q), &b, &ComplexMatrix::zeros(q, q));
    let qm = blocks(&ComplexMatrix::zeros(p, p), &ComplexMatrix::zeros(p, q), &c, &d);
    let perm = s.permutation(n);
    Ok((permute(&pm, &perm), permute(&qm, &perm)))
}

/// `(A, B, C)` with `A` `n x n`, `B` `q x q` for random `q <= n`, `C` `q x n`.
pub fn random_triangular_triple(n: usize, seed: u64) -> Result<(ComplexMatrix, ComplexMatrix, ComplexMatrix)> {
    let mut s = Sampler::new(seed);
    require_size("random_triangular_triple", n, 1)?;
    let q = s.rng.gen_range(1..=n);
    let a = s.core_nilpotent(n);
    let b = s.core_nilpotent(q);
    let c = s.dense(q, n, 0.5);
    Ok((a, b, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anti::check_additive;
    use crate::drazin::drazin_oracle;

    #[test]
    fn t23_families_hold() {
        for seed in 0..10 {
            for n in 1..=4 {
                let a = generate_t23_instance(n, T23Family::EfZero, seed).unwrap();
                assert!((a.e() * a.f()).is_zero());
                if n >= 2 {
                    let b = generate_t23_instance(n, T23Family::Coupled, seed).unwrap();
                    assert!(super::super::coupling_norm(&b) > 0.0);
                }
            }
        }
        assert!(generate_t23_instance(1, T23Family::Coupled, 0).is_err());
    }

    #[test]
    fn t26_families_hold() {
        let cfg = ToleranceConfig::default();
        for seed in 0..10 {
            for n in 2..=4 {
                for fam in T26Family::ALL {
                    let input = generate_t26_instance(n, fam, seed).unwrap();
                    let fp = drazin_oracle(input.f(), &cfg).unwrap().projector;
                    let fpe = (&fp * input.e()).frobenius_norm();
                    match fam {
                        T26Family::InvertibleF => assert!(fp.max_abs() < 1e-12),
                        T26Family::ProjectedZero => assert!(fpe < 1e-12),
                        T26Family::EmbeddedT23 => assert!(fpe > 1e-3),
                    }
                }
            }
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = generate_t26_instance(3, T26Family::EmbeddedT23, 42).unwrap();
        let b = generate_t26_instance(3, T26Family::EmbeddedT23, 42).unwrap();
        assert_eq!(a.e(), b.e());
        assert_eq!(a.f(), b.f());
    }

    #[test]
    fn lemma_inputs() {
        let cfg = ToleranceConfig::default();
        for seed in 0..10 {
            for n in 1..=4 {
                let (p, q) = random_annihilating_pair(n, seed).unwrap();
                assert!((&p * &q).is_zero());
                assert!(check_additive(&p, &q, &cfg).iter().all(|r| r.holds));
                let (a, b, c) = random_triangular_triple(n, seed).unwrap();
                assert_eq!(c.shape(), (b.rows(), a.rows()));
            }
        }
    }
}

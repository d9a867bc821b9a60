use crate::matrix::ComplexMatrix;

/// Cached successive powers `A^0 ..= A^max`.
pub(crate) struct Powers {
    pows: Vec<ComplexMatrix>,
}

impl Powers {
    pub fn new(base: &ComplexMatrix, max: usize) -> Self {
        let mut pows = Vec::with_capacity(max + 1);
        pows.push(ComplexMatrix::identity(base.rows()));
        for k in 1..=max {
            let next = &pows[k - 1] * base;
            pows.push(next);
        }
        Self { pows }
    }

    pub fn get(&self, k: usize) -> &ComplexMatrix {
        &self.pows[k]
    }
}

/// Left-to-right product of the factors.
pub(crate) fn chain(factors: &[&ComplexMatrix]) -> ComplexMatrix {
    let (first, rest) = factors.split_first().expect("chain needs at least one factor");
    rest.iter().fold((*first).clone(), |acc, m| &acc * m)
}

/// Sums `term(i)` for `i` in `lo..=hi`. Every series here has the shape
/// `X^i Y Z^i`, so once a summand is exactly zero all later ones are too.
pub(crate) fn sum_series(
    n: usize,
    lo: usize,
    hi: Option<usize>,
    term: impl Fn(usize) -> ComplexMatrix,
) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(n, n);
    let Some(hi) = hi else { return acc };
    for i in lo..=hi {
        let t = term(i);
        if t.is_zero() {
            break;
        }
        acc += &t;
    }
    acc
}

/// Largest `i` for which `X^(i + shift) X^pi` can be nonzero, `i + shift < index`,
/// widened by `extra` terms. `None` when the range starting at `lo` is empty.
pub(crate) fn last_nilpotent_term(index: usize, shift: usize, lo: usize, extra: usize) -> Option<usize> {
    let limit = (index + extra).checked_sub(shift + 1)?;
    (limit >= lo).then_some(limit)
}

/// Largest `i >= 1` with `2i + offset < index` (the `E^(2i+offset) E^pi` factor
/// is nonzero), widened by `extra` terms.
pub(crate) fn last_even_term(index: usize, offset: isize, extra: usize) -> Option<usize> {
    // 2i + offset <= index - 1
    let bound = index as isize - 1 - offset;
    let base = if bound >= 2 { (bound / 2) as usize } else { 0 };
    let last = base + extra;
    (last >= 1).then_some(last)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nilpotent_bounds() {
        // i + 0 < 3 for i in 1..=2
        assert_eq!(last_nilpotent_term(3, 0, 1, 0), Some(2));
        assert_eq!(last_nilpotent_term(3, 1, 1, 0), Some(1));
        assert_eq!(last_nilpotent_term(1, 0, 1, 0), None);
        assert_eq!(last_nilpotent_term(0, 0, 0, 0), None);
        assert_eq!(last_nilpotent_term(1, 0, 0, 0), Some(0));
        assert_eq!(last_nilpotent_term(0, 0, 1, 3), Some(2));
    }

    #[test]
    fn even_bounds() {
        // 2i + 1 < 5 => i <= 1
        assert_eq!(last_even_term(5, 1, 0), Some(1));
        // 2i - 1 < 4 => i <= 2
        assert_eq!(last_even_term(4, -1, 0), Some(2));
        assert_eq!(last_even_term(2, 1, 0), None);
        assert_eq!(last_even_term(0, 3, 2), Some(2));
    }

    #[test]
    fn powers_and_chain() {
        let a = ComplexMatrix::from_real_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap();
        let p = Powers::new(&a, 3);
        assert_eq!(p.get(0), &ComplexMatrix::identity(2));
        assert_eq!(p.get(3), &ComplexMatrix::from_real_rows(&[[1.0, 3.0], [0.0, 1.0]]).unwrap());
        assert_eq!(chain(&[&a, &a, &a]), *p.get(3));
    }

    #[test]
    fn series_stops_at_exact_zero() {
        let n = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        let p = Powers::new(&n, 8);
        let s = sum_series(2, 0, Some(8), |i| p.get(i).clone());
        assert_eq!(s, &ComplexMatrix::identity(2) + &n);
        assert!(sum_series(2, 1, None, |_| unreachable!()).is_zero());
    }
}

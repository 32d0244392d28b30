//! Exact Gauss-Jordan elimination over the rationals.

use num_traits::{One, Zero};

use crate::rational::Rational;

pub(crate) type Matrix = Vec<Vec<Rational>>;

pub(crate) fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect()
}

/// Inverse of a square matrix, `None` if singular.
pub(crate) fn invert(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut a = m.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].recip();
        for j in 0..n {
            a[col][j] *= &p;
            inv[col][j] *= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let (ac, ic) = (a[col][j].clone(), inv[col][j].clone());
                a[r][j] -= &f * ac;
                inv[r][j] -= &f * ic;
            }
        }
    }
    Some(inv)
}

pub(crate) fn multiply(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let k = b.len();
    let w = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![Rational::zero(); w]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..w {
                if !b[l][j].is_zero() {
                    out[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn inverts_small_matrices() {
        let m = vec![vec![int(2), int(1)], vec![int(1), int(1)]];
        let inv = invert(&m).unwrap();
        assert_eq!(inv, vec![vec![int(1), int(-1)], vec![int(-1), int(2)]]);
        assert_eq!(multiply(&m, &inv), identity(2));
        let sym = vec![vec![int(0), int(1)], vec![int(-1), int(0)]];
        assert_eq!(invert(&sym).unwrap(), vec![vec![int(0), int(-1)], vec![int(1), int(0)]]);
        let h = vec![
            vec![int(1), frac(1, 2), frac(1, 3)],
            vec![frac(1, 2), frac(1, 3), frac(1, 4)],
            vec![frac(1, 3), frac(1, 4), frac(1, 5)],
        ];
        assert_eq!(multiply(&h, &invert(&h).unwrap()), identity(3));
    }

    #[test]
    fn singular_is_none() {
        let m = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(invert(&m).is_none());
        assert!(invert(&vec![vec![int(0)]]).is_none());
    }
}

//! Exact rank and kernels of small integer matrices.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::homology::{smith_normal_form, IntegerMatrix};

/// Fraction-free elimination in `i128`; `None` on overflow.
fn bareiss_rank(rows: &[Vec<i64>], cols: &[usize]) -> Option<usize> {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| cols.iter().map(|&c| r[c] as i128).collect())
        .filter(|r: &Vec<i128>| r.iter().any(|&x| x != 0))
        .collect();
    let n = cols.len();
    let mut rank = 0;
    let mut prev: i128 = 1;
    for c in 0..n {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, p);
        let piv = m[rank][c];
        for r in rank + 1..m.len() {
            let f = m[r][c];
            for k in c..n {
                let v = m[r][k].checked_mul(piv)?.checked_sub(f.checked_mul(m[rank][k])?)?;
                m[r][k] = v / prev;
            }
        }
        prev = piv;
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    Some(rank)
}

fn to_matrix(rows: &[Vec<i64>], cols: &[usize]) -> IntegerMatrix {
    let mut m = IntegerMatrix::zeros(rows.len(), cols.len());
    for (i, r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            if r[c] != 0 {
                m.set(i, j, BigInt::from(r[c]));
            }
        }
    }
    m
}

/// Rank of the submatrix on the given columns.
pub(crate) fn rank(rows: &[Vec<i64>], cols: &[usize]) -> usize {
    bareiss_rank(rows, cols).unwrap_or_else(|| to_matrix(rows, cols).rank())
}

/// A primitive integer basis of the kernel of the submatrix on `cols`.
pub(crate) fn kernel(rows: &[Vec<i64>], cols: &[usize]) -> Vec<Vec<i64>> {
    let m = to_matrix(rows, cols);
    let s = smith_normal_form(&m);
    let r = s.rank();
    (r..cols.len())
        .map(|k| {
            (0..cols.len())
                .map(|i| s.v.get(i, k).to_i64().expect("kernel entry fits in i64"))
                .collect()
        })
        .collect()
}

pub(crate) fn gcd_normalize(v: &mut [i64]) {
    let g = v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn ranks_and_kernels() {
        let rows = vec![vec![1, 1, -1, 0], vec![0, 1, 0, -1], vec![1, 2, -1, -1]];
        assert_eq!(rank(&rows, &[0, 1, 2, 3]), 2);
        assert_eq!(rank(&rows, &[0]), 1);
        let k = kernel(&rows, &[0, 1, 2, 3]);
        assert_eq!(k.len(), 2);
        for v in &k {
            for r in &rows {
                assert_eq!(r.iter().zip(v).map(|(a, b)| a * b).sum::<i64>(), 0);
            }
        }
    }
}

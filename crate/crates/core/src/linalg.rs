//! Rank and null spaces: fraction-free elimination over the integers for
//! exact matrices, SVD for floating ones.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::numeric::{bigint_gcd_content, Rational};

/// Integer matrix in reduced row echelon form up to row scaling: each pivot
/// column is zero outside its pivot row, each row has content 1.
#[derive(Debug, Clone)]
pub struct IntEchelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl IntEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Kernel basis, one integer vector per free column, normalized.
    pub fn kernel(&self) -> Vec<Vec<BigInt>> {
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                // x_f = L, x_p = -row[f] * L / row[p]
                let l = self
                    .pivots
                    .iter()
                    .zip(&self.rows)
                    .fold(BigInt::one(), |acc, (&p, row)| acc.lcm(&row[p]));
                let mut x = vec![BigInt::zero(); self.ncols];
                x[f] = l.clone();
                for (&p, row) in self.pivots.iter().zip(&self.rows) {
                    x[p] = -(&row[f] * &l) / &row[p];
                }
                normalize_int_vector(x)
            })
            .collect()
    }
}

/// Scales to content 1 with the first nonzero entry positive.
pub fn normalize_int_vector(mut x: Vec<BigInt>) -> Vec<BigInt> {
    let g = bigint_gcd_content(&x);
    if g.is_zero() {
        return x;
    }
    let neg = x.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative());
    for v in x.iter_mut() {
        *v = &*v / &g;
        if neg {
            *v = -&*v;
        }
    }
    x
}

/// Clears denominators row by row.
pub fn integer_rows(m: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
        })
        .collect()
}

/// Fraction-free Gauss–Jordan elimination with content reduction.
pub fn echelon_exact(m: &[Vec<Rational>], ncols: usize) -> IntEchelon {
    let mut rows = integer_rows(m);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let piv_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let g = row[c].gcd(&piv_row[c]);
            let a = &piv_row[c] / &g;
            let b = &row[c] / &g;
            for k in 0..ncols {
                row[k] = &a * &row[k] - &b * &piv_row[k];
            }
            reduce_content(row);
        }
        reduce_content(&mut rows[r]);
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    IntEchelon { rows, pivots, ncols }
}

fn reduce_content(row: &mut [BigInt]) {
    let g = bigint_gcd_content(row);
    if !g.is_zero() && !g.is_one() {
        for v in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

pub fn rank_exact(m: &[Vec<Rational>], ncols: usize) -> usize {
    echelon_exact(m, ncols).rank()
}

/// Singular values (descending) and an orthonormal basis of the right null
/// space for a floating matrix, padding with zero rows so the decomposition
/// always yields a full set of right singular vectors.
#[derive(Debug, Clone)]
pub struct FloatSpectrum {
    pub singular_values: Vec<f64>,
    /// Right singular vectors as columns, matching `singular_values`.
    pub right: DMatrix<f64>,
}

pub fn spectrum(m: &DMatrix<f64>) -> FloatSpectrum {
    let (r, c) = m.shape();
    let square = if r < c {
        let mut p = DMatrix::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = square.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let singular_values = order.iter().map(|&i| svd.singular_values[i]).collect();
    let mut right = DMatrix::zeros(c, order.len());
    for (k, &i) in order.iter().enumerate() {
        for j in 0..c {
            right[(j, k)] = v_t[(i, j)];
        }
    }
    FloatSpectrum { singular_values, right }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    #[test]
    fn rank_and_kernel() {
        let m = vec![
            vec![int(1), int(2), int(3)],
            vec![int(2), int(4), int(6)],
            vec![rat(1, 2), int(0), int(1)],
        ];
        let e = echelon_exact(&m, 3);
        assert_eq!(e.rank(), 2);
        let k = e.kernel();
        assert_eq!(k.len(), 1);
        // x3 = t gives x1 = -2t, x2 = -t/2
        assert_eq!(k[0], vec![BigInt::from(4), BigInt::from(1), BigInt::from(-2)]);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = vec![vec![int(3), int(-1), int(0), int(2)], vec![int(0), int(5), int(7), int(-1)]];
        let k = echelon_exact(&m, 4).kernel();
        assert_eq!(k.len(), 2);
        for v in k {
            for row in &m {
                let s: Rational =
                    row.iter().zip(&v).map(|(a, b)| a * Rational::from_integer(b.clone())).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn float_spectrum_pads() {
        let m = DMatrix::from_row_slice(1, 3, &[1.0, 0.0, 0.0]);
        let s = spectrum(&m);
        assert_eq!(s.singular_values.len(), 3);
        assert!((s.singular_values[0] - 1.0).abs() < 1e-12);
        assert!(s.singular_values[1].abs() < 1e-12);
    }
}

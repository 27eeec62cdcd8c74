//! Test oracles written independently of the library's main paths.
#![allow(dead_code)]

use flexilab::{CombinatorialSurface, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rank of the rigidity matrix by plain fraction-free elimination over the
/// integers, built from the face list rather than the library's edge table.
pub fn oracle_rank(surface: &CombinatorialSurface, coords: &[[Rational; 3]]) -> usize {
    let mut edges = std::collections::BTreeSet::new();
    for f in surface.faces() {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let n = coords.len();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for &(i, j) in &edges {
        let mut row = vec![Rational::zero(); 3 * n];
        for c in 0..3 {
            let d = &coords[i][c] - &coords[j][c];
            row[3 * i + c] = d.clone();
            row[3 * j + c] = -d;
        }
        let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        rows.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
    }
    bareiss_rank(rows, 3 * n)
}

pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            for c in col + 1..cols {
                let v = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = v / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Points with coordinates `k/den`, `|k| ≤ range`.
pub fn random_points(rng: &mut ChaCha8Rng, n: usize, range: i64, den: i64) -> Vec<[Rational; 3]> {
    (0..n)
        .map(|_| std::array::from_fn(|_| Rational::new(rng.gen_range(-range..=range).into(), den.into())))
        .collect()
}

/// Lagrange interpolation of the cubic through `(x_k, y_k)`, `k = 0..4`;
/// returns the coefficients `c_0..c_3`.
pub fn cubic_through(xs: &[Rational; 4], ys: &[Rational; 4]) -> [Rational; 4] {
    let mut out: [Rational; 4] = std::array::from_fn(|_| Rational::zero());
    for k in 0..4 {
        let mut basis = vec![Rational::one()];
        let mut denom = Rational::one();
        for j in (0..4).filter(|&j| j != k) {
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * &xs[j];
            }
            basis = next;
            denom *= &xs[k] - &xs[j];
        }
        for d in 0..4 {
            out[d] += &basis[d] * &ys[k] / &denom;
        }
    }
    out
}

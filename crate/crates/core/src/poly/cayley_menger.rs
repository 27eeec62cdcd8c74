//! Cayley–Menger determinants over squared distances.
//!
//! For points `p_0..p_k` with squared distances `d_ij` the bordered
//! determinant vanishes whenever `k ≥ 4` and the points lie in 3-space; for
//! `k = 3` it equals `288 · V²` where `V` is the tetrahedron's volume.

use num_traits::{One, Zero};

use crate::error::PolyError;
use crate::numeric::Rational;
use crate::poly::multipoly::MultiPoly;
use crate::poly::resultant::bareiss_det;

/// Determinant of the bordered matrix built from a symmetric table of
/// squared distances (diagonal ignored).
pub fn cayley_menger(d: &[Vec<MultiPoly>]) -> Result<MultiPoly, PolyError> {
    let k = d.len();
    let like = &d[0][if k > 1 { 1 } else { 0 }];
    let zero = like.zero_like();
    let one = like.constant_like(One::one());
    let mut m = vec![vec![zero.clone(); k + 1]; k + 1];
    for i in 0..k {
        m[0][i + 1] = one.clone();
        m[i + 1][0] = one.clone();
        for j in 0..k {
            if i != j {
                m[i + 1][j + 1] = d[i][j].clone();
            }
        }
    }
    bareiss_det(m)
}

/// `288 V²` for a tetrahedron, as a polynomial in its six squared edges
/// `d01, d02, d03, d12, d13, d23`.
pub fn cayley_menger_tet(e: [&MultiPoly; 6]) -> Result<MultiPoly, PolyError> {
    let [d01, d02, d03, d12, d13, d23] = e;
    let z = d01.zero_like();
    let t = vec![
        vec![z.clone(), d01.clone(), d02.clone(), d03.clone()],
        vec![d01.clone(), z.clone(), d12.clone(), d13.clone()],
        vec![d02.clone(), d12.clone(), z.clone(), d23.clone()],
        vec![d03.clone(), d13.clone(), d23.clone(), z],
    ];
    cayley_menger(&t)
}

/// Numeric Cayley–Menger determinant from a squared-distance table.
pub fn cayley_menger_rational(d: &[Vec<Rational>]) -> Rational {
    let k = d.len();
    let mut m = vec![vec![Rational::zero(); k + 1]; k + 1];
    for i in 0..k {
        m[0][i + 1] = Rational::one();
        m[i + 1][0] = Rational::one();
        for j in 0..k {
            if i != j {
                m[i + 1][j + 1] = d[i][j].clone();
            }
        }
    }
    rational_det(m)
}

/// Determinant over the rationals by Gaussian elimination.
pub fn rational_det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        let piv = m[k][k].clone();
        det *= &piv;
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &piv;
            for j in k..n {
                let v = &m[k][j] * &f;
                m[i][j] -= v;
            }
        }
    }
    det
}

/// Squared-distance table of a point list.
pub fn squared_distance_table(pts: &[[Rational; 3]]) -> Vec<Vec<Rational>> {
    pts.iter()
        .map(|a| {
            pts.iter()
                .map(|b| {
                    let d = crate::numeric::sub3(a, b);
                    crate::numeric::dot3(&d, &d)
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    fn p(x: i64, y: i64, z: i64) -> [Rational; 3] {
        [int(x), int(y), int(z)]
    }

    #[test]
    fn unit_corner_tetrahedron() {
        // squared edges (1,1,1,2,2,2): V = 1/6
        let vars = ["a", "b", "c", "d", "e", "f"];
        let v: Vec<MultiPoly> = vars.iter().map(|n| MultiPoly::var(&vars, n).unwrap()).collect();
        let cm = cayley_menger_tet([&v[0], &v[1], &v[2], &v[3], &v[4], &v[5]]).unwrap();
        for n in vars {
            assert!(cm.degree(n).unwrap() <= 2);
        }
        let vals: Vec<(&str, Rational)> =
            vars.iter().copied().zip([1, 1, 1, 2, 2, 2].map(int)).collect();
        let val = cm.evaluate(&vals).unwrap();
        assert_eq!(val / int(288), rat(1, 36));
    }

    #[test]
    fn coplanar_and_five_points() {
        let flat = [p(0, 0, 0), p(1, 0, 0), p(0, 1, 0), p(3, 5, 0)];
        assert!(cayley_menger_rational(&squared_distance_table(&flat)).is_zero());
        let five = [p(0, 0, 0), p(1, 0, 0), p(0, 1, 0), p(0, 0, 1), p(2, 3, 7)];
        let mut t = squared_distance_table(&five);
        assert!(cayley_menger_rational(&t).is_zero());
        t[0][4] += int(1);
        t[4][0] += int(1);
        assert!(!cayley_menger_rational(&t).is_zero());
    }
}

//! Multiplicity of the volume as a root of the specialized volume
//! polynomial.

use serde::Serialize;

use crate::numeric::{Rational, Scalar};
use crate::poly::unipoly::UniPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MultiplicityMode {
    Exact,
    Floating,
}

/// Multiplicity of `V0` as a root of `Q(V) = q_w(V²)`, computed in `W`:
/// for `V0 ≠ 0` it equals the multiplicity of `V0²` in `q_w`, and `V = 0`
/// has twice the multiplicity of `W = 0`. The zero polynomial yields
/// `usize::MAX`.
pub fn multiplicity_exact(q_w: &UniPoly, v0: &Rational) -> usize {
    if q_w.is_zero() {
        return usize::MAX;
    }
    if v0.is_exactly_zero() {
        2 * q_w.multiplicity_at(v0)
    } else {
        q_w.multiplicity_at(&(v0 * v0))
    }
}

/// The same multiplicity computed directly on the polynomial in `V`.
pub fn multiplicity_in_v(q_v: &UniPoly, v0: &Rational) -> usize {
    q_v.multiplicity_at(v0)
}

/// `Q(V0) = 0` and `Q'(V0) = 0`.
pub fn is_double_root(q_v: &UniPoly, v0: &Rational) -> bool {
    q_v.eval(v0).is_exactly_zero() && q_v.derivative().eval(v0).is_exactly_zero()
}

/// Default relative threshold for floating multiplicities.
pub const FLOATING_THRESHOLD: f64 = 1e-8;

/// Floating multiplicity: the number of leading derivatives `Q^(k)(V0)`
/// whose magnitude is below `tol · max(1, s_k)`, where `s_k` is the sum of
/// the absolute values of the terms of `Q^(k)` at `V0`.
pub fn multiplicity_floating(q_v: &UniPoly, v0: f64, tol: f64) -> usize {
    let mut p = q_v.clone();
    let mut m = 0;
    while !p.is_zero() && p.degree() > 0 {
        let value = p.eval_f64(v0);
        let scale: f64 = p.coeffs().iter().enumerate().map(|(j, c)| c.as_f64().abs() * v0.abs().powi(j as i32)).sum();
        if value.abs() >= tol * scale.max(1.0) {
            break;
        }
        m += 1;
        p = p.derivative();
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&v| int(v)).collect())
    }

    #[test]
    fn small_cases() {
        // Q = V² is W: V0 = 0 has multiplicity 2
        assert_eq!(multiplicity_exact(&p(&[0, 1]), &int(0)), 2);
        assert_eq!(multiplicity_in_v(&p(&[0, 0, 1]), &int(0)), 2);
        // (V-1)(V+1) = W - 1
        assert_eq!(multiplicity_exact(&p(&[-1, 1]), &int(1)), 1);
        assert_eq!(multiplicity_in_v(&p(&[-1, 0, 1]), &int(1)), 1);
        assert!(!is_double_root(&p(&[-1, 0, 1]), &int(1)));
        // (W - 4)^2 at V0 = -2
        let q = p(&[16, -8, 1]);
        assert_eq!(multiplicity_exact(&q, &int(-2)), 2);
        assert_eq!(multiplicity_in_v(&q.in_square(), &int(-2)), 2);
        assert_eq!(multiplicity_floating(&q.in_square(), -2.0, FLOATING_THRESHOLD), 2);
        assert_eq!(multiplicity_floating(&p(&[-1, 0, 1]), 1.0, FLOATING_THRESHOLD), 1);
    }
}
